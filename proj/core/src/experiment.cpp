#include "profscreen/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "profscreen/csv.hpp"
#include "profscreen/error.hpp"
#include "profscreen/metrics.hpp"
#include "profscreen/parallel.hpp"

namespace profscreen {

namespace {

constexpr double kTheta = 2.0;

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

double f2_of(std::span<const Index> selected, std::span<const Index> truth, Index p) {
  return f_theta(confusion(selected, truth, p), kTheta);
}

std::vector<AlphaPoint> alpha_curve_of(const GridSearchResult& grid, std::span<const Index> truth, Index p) {
  // cells are ordered by (d, alpha); keep the first minimum per alpha.
  std::map<double, const GridCell*> best;
  for (const auto& cell : grid.cells) {
    if (!cell.alpha) continue;
    auto [it, inserted] = best.try_emplace(*cell.alpha, &cell);
    if (!inserted && cell.model.bic < it->second->model.bic) it->second = &cell;
  }
  std::vector<AlphaPoint> out;
  for (const auto& [alpha, cell] : best) {
    out.push_back(AlphaPoint{alpha, cell->model.bic, f2_of(cell->model.indices, truth, p)});
  }
  return out;
}

}  // namespace

std::vector<Index> default_tracked(ExampleId example, std::span<const Index> true_support) {
  std::vector<Index> tracked(true_support.begin(), true_support.end());
  if (example == ExampleId::Ex3) tracked.push_back(5);
  std::sort(tracked.begin(), tracked.end());
  tracked.erase(std::unique(tracked.begin(), tracked.end()), tracked.end());
  return tracked;
}

ReplicateRecord run_method(Method method, const DesignMatrix& x, const ResponseVector& y, const ThinSvd& svd,
                           std::span<const Index> true_support, const ExperimentPlan& plan) {
  const auto d_grid = default_d_grid(x.n(), plan.d_fractions, eigen_ratio_d(svd.mu));
  GridOptions options;
  options.k_max = plan.k_max;
  options.variant = plan.variant;
  options.scale = plan.scale;
  const GridSearchResult grid = grid_search(method, x, y, svd, d_grid, plan.alpha_grid, options);

  ReplicateRecord rec;
  rec.method = method;
  rec.selected = grid.model.indices;
  rec.bic = grid.best_bic;
  rec.f2 = f2_of(rec.selected, true_support, x.p());
  rec.d = grid.best_d;
  rec.alpha = grid.best_alpha;
  if (method == Method::Tppis) rec.alpha_curve = alpha_curve_of(grid, true_support, x.p());
  return rec;
}

std::vector<ReplicateRecord> run_replicate(const ExperimentPlan& plan, const DatasetGenerator& generator, int r) {
  try {
    const GeneratedDataset data = generator.generate(substream_seed(plan.base_seed, static_cast<std::uint64_t>(r)));
    const DesignMatrix x = standardize_columns(data.x_raw);
    const ResponseVector y = center_response(data.y_raw);
    const ThinSvd svd = thin_svd(x);

    std::vector<ReplicateRecord> out;
    out.reserve(plan.methods.size());
    for (Method m : plan.methods) out.push_back(run_method(m, x, y, svd, data.true_support, plan));
    return out;
  } catch (const Error& e) {
    throw Error(e.code(), "replicate " + std::to_string(r) + ": " + e.what());
  }
}

MethodAggregate aggregate(Method method, std::span<const ReplicateRecord> records, std::span<const Index> tracked) {
  MethodAggregate agg;
  agg.method = method;
  agg.replicates = static_cast<int>(records.size());
  agg.tracked.assign(tracked.begin(), tracked.end());
  agg.selection_count.assign(tracked.size(), 0);

  double bic_sum = 0.0;
  double f2_sum = 0.0;
  std::map<double, int> alpha_votes;
  for (const auto& rec : records) {
    bic_sum += rec.bic;
    f2_sum += rec.f2;
    for (std::size_t t = 0; t < tracked.size(); ++t) {
      if (std::find(rec.selected.begin(), rec.selected.end(), tracked[t]) != rec.selected.end()) {
        ++agg.selection_count[t];
      }
    }
    if (rec.alpha) ++alpha_votes[*rec.alpha];
  }
  if (!records.empty()) {
    agg.mean_bic = bic_sum / static_cast<double>(records.size());
    agg.mean_f2 = f2_sum / static_cast<double>(records.size());
  }
  if (method == Method::Tppis && !alpha_votes.empty()) {
    int best = -1;
    for (const auto& [alpha, votes] : alpha_votes) {
      if (votes > best) {
        best = votes;
        agg.modal_best_alpha = alpha;
      }
    }
  }
  return agg;
}

std::vector<AlphaCurvePoint> aggregate_alpha_curve(std::span<const ReplicateRecord> tppis_records) {
  std::map<double, AlphaCurvePoint> acc;
  for (const auto& rec : tppis_records) {
    for (const auto& pt : rec.alpha_curve) {
      auto& slot = acc[pt.alpha];
      slot.alpha = pt.alpha;
      ++slot.replicates;
      slot.mean_bic += pt.bic;
      slot.mean_f2 += pt.f2;
    }
  }
  std::vector<AlphaCurvePoint> out;
  for (auto& [alpha, pt] : acc) {
    pt.mean_bic /= pt.replicates;
    pt.mean_f2 /= pt.replicates;
    out.push_back(pt);
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  if (plan.replicates < 1) throw Error(ErrorCode::InvalidArgument, "replicates must be at least 1");
  if (plan.methods.empty()) throw Error(ErrorCode::InvalidArgument, "no methods requested");

  const DatasetGenerator generator(plan.sim);
  std::vector<Index> tracked = plan.tracked;
  if (tracked.empty()) {
    const Vector beta = example_beta(plan.sim.example, plan.sim.p);
    std::vector<Index> support;
    for (Index j = 0; j < beta.size(); ++j) {
      if (beta(j) != 0.0) support.push_back(j);
    }
    tracked = default_tracked(plan.sim.example, support);
  }
  for (Index j : tracked) {
    if (j < 0 || j >= plan.sim.p) throw Error(ErrorCode::IndexOutOfRange, "tracked variable outside the design");
  }

  ExperimentResult result;
  result.records.resize(static_cast<std::size_t>(plan.replicates));
  parallel_for(result.records.size(), plan.threads,
               [&](std::size_t r) { result.records[r] = run_replicate(plan, generator, static_cast<int>(r)); });

  for (std::size_t m = 0; m < plan.methods.size(); ++m) {
    std::vector<ReplicateRecord> column;
    column.reserve(result.records.size());
    for (const auto& rep : result.records) column.push_back(rep[m]);
    result.aggregates.push_back(aggregate(plan.methods[m], column, tracked));
    if (plan.methods[m] == Method::Tppis) result.tppis_alpha_curve = aggregate_alpha_curve(column);
  }
  return result;
}

std::string emit_table(std::span<const MethodAggregate> aggregates, TableFormat format) {
  if (aggregates.empty()) throw Error(ErrorCode::InvalidArgument, "no aggregates to emit");

  std::vector<std::string> header{"method", "best_alpha", "bic", "f2"};
  for (Index j : aggregates.front().tracked) header.push_back("x" + std::to_string(j + 1));

  std::vector<std::vector<std::string>> rows;
  for (const auto& agg : aggregates) {
    std::vector<std::string> row{std::string(to_string(agg.method)),
                                 agg.modal_best_alpha ? fixed3(*agg.modal_best_alpha) : std::string("-"),
                                 fixed3(agg.mean_bic), fixed3(agg.mean_f2)};
    for (int count : agg.selection_count) row.push_back(std::to_string(count));
    rows.push_back(std::move(row));
  }

  std::ostringstream os;
  if (format == TableFormat::Csv) {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
    return os.str();
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    os << '|';
    for (std::size_t i = 0; i < cells.size(); ++i) {
      os << ' ' << cells[i] << std::string(width[i] - cells[i].size(), ' ') << " |";
    }
    os << '\n';
  };
  line(header);
  os << '|';
  for (std::size_t w : width) os << std::string(w + 2, '-') << '|';
  os << '\n';
  for (const auto& row : rows) line(row);
  return os.str();
}

std::string emit_alpha_curve(std::span<const AlphaCurvePoint> curve) {
  std::ostringstream os;
  os << "alpha,replicates,mean_bic,mean_f2\n";
  for (const auto& pt : curve) {
    os << format_exact(pt.alpha) << ',' << pt.replicates << ',' << format_exact(pt.mean_bic) << ','
       << format_exact(pt.mean_f2) << '\n';
  }
  return os.str();
}

std::string emit_records(const ExperimentResult& result) {
  std::ostringstream os;
  os << "replicate,method,d,alpha,k,bic,f2,selected\n";
  for (std::size_t r = 0; r < result.records.size(); ++r) {
    for (const auto& rec : result.records[r]) {
      os << r << ',' << to_string(rec.method) << ',' << rec.d << ',' << (rec.alpha ? format_exact(*rec.alpha) : "-")
         << ',' << rec.selected.size() << ',' << format_exact(rec.bic) << ',' << format_exact(rec.f2) << ',';
      for (std::size_t i = 0; i < rec.selected.size(); ++i) os << (i ? " " : "") << rec.selected[i] + 1;
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace profscreen
