#pragma once

#include <Eigen/Core>

namespace profscreen {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Singular values at or below this fraction of the largest one are
/// treated as numerically zero throughout the library.
inline constexpr double kNullSingularRatio = 1e-12;

/// n x p predictor matrix. When `standardized` is set every column has
/// mean 0 and sample standard deviation 1 (denominator n - 1).
struct DesignMatrix {
  Matrix values;
  bool standardized = false;

  [[nodiscard]] Index n() const noexcept { return values.rows(); }
  [[nodiscard]] Index p() const noexcept { return values.cols(); }
};

struct ResponseVector {
  Vector values;
  bool centered = false;

  [[nodiscard]] Index n() const noexcept { return values.size(); }
};

/// Thin SVD X = U diag(mu) V^T with r = min(n, p) retained directions.
/// mu is nonincreasing; each column of U has its largest-magnitude entry
/// positive so repeated decompositions are bit-identical.
struct ThinSvd {
  Matrix u;   // n x r
  Vector mu;  // r
  Matrix v;   // p x r

  [[nodiscard]] Index n() const noexcept { return u.rows(); }
  [[nodiscard]] Index size() const noexcept { return mu.size(); }

  /// Number of singular values above kNullSingularRatio * mu(0).
  [[nodiscard]] Index effective_rank() const noexcept;
};

/// Wraps raw values without transforming them; validates shape and finiteness.
DesignMatrix make_design(Matrix raw);
ResponseVector make_response(Vector raw);

/// Centers and scales each column to unit sample standard deviation.
/// Throws ZeroVarianceColumn (sd < 1e-12) or NonFiniteInput.
DesignMatrix standardize_columns(const Matrix& raw);

ResponseVector center_response(const Vector& raw);

/// Throws ConvergenceFailure if the backend does not converge.
ThinSvd thin_svd(const DesignMatrix& x);
ThinSvd thin_svd(const Matrix& x);

/// Number of common factors: argmax_l mu_l^2 / mu_{l+1}^2 over the
/// numerically nonzero prefix of `mu`. Ties resolve to the smallest l.
int eigen_ratio_d(const Vector& mu);

}  // namespace profscreen
