#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "profscreen/matrix_core.hpp"
#include "profscreen/screening.hpp"

namespace profscreen {

/// Gram matrices whose eigenvalue ratio min/max falls at or below this
/// are treated as singular and solved by thresholded pseudo-inverse.
inline constexpr double kGramConditionFloor = 1e-10;

struct SubsetFit {
  Vector beta;
  bool rank_deficient = false;
};

/// Least squares of y_hat on the columns `subset` of x_hat. Falls back to
/// the minimum-norm solution when the Gram matrix is numerically singular.
SubsetFit fit_subset_ols(const ProfiledData& pd, std::span<const Index> subset);

/// (log p / n) * |M| * log n
double bic_penalty(Index n, Index p, Index model_size) noexcept;

/// log ||y - X(M) beta||^2 + (log p / n) |M| log n, evaluated on the data
/// passed in (callers pass the original, untransformed y and X).
/// Throws DegenerateFit when the residual sum of squares underflows.
double bic_score(const ResponseVector& y, const DesignMatrix& x, std::span<const Index> subset,
                 const Vector& beta);

/// Which data the BIC residual is computed on. Original matches the
/// criterion as published; Profiled is kept for sensitivity checks.
enum class ResidualScale { Original, Profiled };

struct SubsetModel {
  std::vector<Index> indices;  // 0-based, in ranking order
  Vector beta;
  double bic = 0.0;
  bool rank_deficient = false;
};

struct BicPoint {
  Index k = 0;
  double bic = 0.0;
};

struct KSelection {
  SubsetModel model;
  std::vector<BicPoint> trace;  // one entry per non-degenerate k, ascending
};

/// Scores the nested top-k sets k = 1..min(k_max, n - 2, p) and keeps the
/// BIC minimum (ties to the smallest k).
KSelection select_k(const ProfiledData& pd, const ImportanceScores& scores, const ResponseVector& y,
                    const DesignMatrix& x, Index k_max, ResidualScale scale = ResidualScale::Original);

struct GridPoint {
  int d = 0;
  std::optional<double> alpha;
  Index k = 0;
  double bic = 0.0;
};

/// Best model of one (d, alpha) cell.
struct GridCell {
  int d = 0;
  std::optional<double> alpha;
  SubsetModel model;
};

struct GridSearchResult {
  int best_d = 0;  // 0 for SIS
  std::optional<double> best_alpha;
  Index best_k = 0;
  double best_bic = 0.0;
  SubsetModel model;
  std::vector<GridCell> cells;   // valid cells in evaluation order
  std::vector<GridPoint> trace;  // every (d, alpha, k) evaluated
};

struct GridOptions {
  Index k_max = 0;  // 0 means n - 2
  PpisVariant variant = PpisVariant::PufferInverse;
  ResidualScale scale = ResidualScale::Original;
  unsigned threads = 1;  // cells are evaluated in parallel, reduced in order
};

/// Candidate factor counts: round(f * n) for each fraction, clamped to
/// [1, n - 1], plus the eigen-ratio choice; sorted and deduplicated.
std::vector<int> default_d_grid(Index n, std::span<const double> fractions, int eigen_ratio);

inline constexpr double kDefaultFractions[] = {0.2, 0.4, 0.6, 0.8, 1.0};
inline constexpr double kDefaultAlphas[] = {0.2, 0.4, 0.6, 0.8, 1.0};

/// Runs the method's full selection pipeline. SIS has a single cell;
/// FPSIS and PPIS use the eigen-ratio d; FPSIS_BIC scans d_grid; TPPIS
/// scans every (d, alpha) with d < floor(n alpha). Invalid cells are
/// skipped. Throws EmptyValidGrid when nothing remains.
GridSearchResult grid_search(Method method, const DesignMatrix& x, const ResponseVector& y, const ThinSvd& svd,
                             std::span<const int> d_grid, std::span<const double> alpha_grid,
                             const GridOptions& options = {});

/// Same, computing the SVD internally.
GridSearchResult grid_search(Method method, const DesignMatrix& x, const ResponseVector& y,
                             std::span<const int> d_grid, std::span<const double> alpha_grid,
                             const GridOptions& options = {});

}  // namespace profscreen
