#include "profscreen/metrics.hpp"

#include <string>
#include <vector>

#include "profscreen/error.hpp"

namespace profscreen {

namespace {

std::vector<char> membership(std::span<const Index> set, Index p, const char* name) {
  std::vector<char> in(static_cast<std::size_t>(p), 0);
  for (Index j : set) {
    if (j < 0 || j >= p) {
      throw Error(ErrorCode::IndexOutOfRange,
                  std::string(name) + " index " + std::to_string(j) + " outside [0, " + std::to_string(p) + ")");
    }
    in[static_cast<std::size_t>(j)] = 1;
  }
  return in;
}

}  // namespace

ConfusionCounts confusion(std::span<const Index> selected, std::span<const Index> true_support, Index p) {
  const auto sel = membership(selected, p, "selected");
  const auto truth = membership(true_support, p, "true support");
  ConfusionCounts c;
  for (std::size_t j = 0; j < sel.size(); ++j) {
    if (sel[j] && truth[j]) ++c.tp;
    else if (sel[j]) ++c.fp;
    else if (truth[j]) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double precision(const ConfusionCounts& c) noexcept {
  return c.tp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall(const ConfusionCounts& c) noexcept {
  return c.tp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double f_theta(const ConfusionCounts& c, double theta) noexcept {
  if (c.tp == 0) return 0.0;
  const double p = precision(c);
  const double r = recall(c);
  const double t2 = theta * theta;
  return (1.0 + t2) * p * r / (r + t2 * p);
}

}  // namespace profscreen
