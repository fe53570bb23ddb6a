#pragma once

#include <span>

#include "profscreen/matrix_core.hpp"

namespace profscreen {

struct ConfusionCounts {
  Index tp = 0;
  Index fp = 0;
  Index tn = 0;
  Index fn = 0;
};

/// Both sets hold 0-based indices below p; duplicates are ignored.
/// Throws IndexOutOfRange otherwise.
ConfusionCounts confusion(std::span<const Index> selected, std::span<const Index> true_support, Index p);

double precision(const ConfusionCounts& c) noexcept;
double recall(const ConfusionCounts& c) noexcept;

/// (1 + theta^2) P R / (R + theta^2 P); 0 when tp == 0.
double f_theta(const ConfusionCounts& c, double theta) noexcept;

}  // namespace profscreen
