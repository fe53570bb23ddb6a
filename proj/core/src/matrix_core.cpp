#include "profscreen/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "profscreen/error.hpp"

namespace profscreen {

namespace {

void require_finite(const Eigen::Ref<const Matrix>& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFiniteInput, std::string(what) + " contains NaN or infinite entries");
  }
}

bool accurate(const ThinSvd& s, const Matrix& x) {
  if (!s.u.allFinite() || !s.mu.allFinite() || !s.v.allFinite()) return false;
  return (s.u * s.mu.asDiagonal() * s.v.transpose() - x).norm() <= 1e-10 * std::max(x.norm(), 1e-300);
}

}  // namespace

Index ThinSvd::effective_rank() const noexcept {
  if (mu.size() == 0 || !(mu(0) > 0.0)) return 0;
  const double cutoff = kNullSingularRatio * mu(0);
  Index r = 0;
  while (r < mu.size() && mu(r) > cutoff) ++r;
  return r;
}

DesignMatrix make_design(Matrix raw) {
  if (raw.rows() < 2 || raw.cols() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "design matrix needs n >= 2 rows and p >= 1 columns");
  }
  require_finite(raw, "design matrix");
  return DesignMatrix{std::move(raw), false};
}

ResponseVector make_response(Vector raw) {
  if (raw.size() < 1) throw Error(ErrorCode::DimensionMismatch, "response vector is empty");
  require_finite(raw, "response vector");
  return ResponseVector{std::move(raw), false};
}

DesignMatrix standardize_columns(const Matrix& raw) {
  if (raw.rows() < 2 || raw.cols() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "design matrix needs n >= 2 rows and p >= 1 columns");
  }
  require_finite(raw, "design matrix");

  const Index n = raw.rows();
  Matrix out(n, raw.cols());
  for (Index j = 0; j < raw.cols(); ++j) {
    const double mean = raw.col(j).mean();
    out.col(j) = raw.col(j).array() - mean;
    const double sd = std::sqrt(out.col(j).squaredNorm() / static_cast<double>(n - 1));
    if (sd < 1e-12) {
      throw Error(ErrorCode::ZeroVarianceColumn, "column " + std::to_string(j + 1) + " is constant");
    }
    out.col(j) /= sd;
  }
  return DesignMatrix{std::move(out), true};
}

ResponseVector center_response(const Vector& raw) {
  if (raw.size() < 1) throw Error(ErrorCode::DimensionMismatch, "response vector is empty");
  require_finite(raw, "response vector");
  Vector out = raw.array() - raw.mean();
  return ResponseVector{std::move(out), true};
}

ThinSvd thin_svd(const DesignMatrix& x) { return thin_svd(x.values); }

ThinSvd thin_svd(const Matrix& x) {
  require_finite(x, "matrix");
  constexpr auto kThin = Eigen::ComputeThinU | Eigen::ComputeThinV;
  ThinSvd out;
  Eigen::BDCSVD<Matrix> svd(x, kThin);
  if (svd.info() == Eigen::Success) out = {svd.matrixU(), svd.singularValues(), svd.matrixV()};
  if (svd.info() != Eigen::Success || !accurate(out, x)) {
    Eigen::JacobiSVD<Matrix> jacobi(x, kThin);
    if (jacobi.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "SVD did not converge");
    out = {jacobi.matrixU(), jacobi.singularValues(), jacobi.matrixV()};
  }

  for (Index l = 0; l < out.u.cols(); ++l) {
    Index pivot = 0;
    out.u.col(l).cwiseAbs().maxCoeff(&pivot);
    if (out.u(pivot, l) < 0.0) {
      out.u.col(l) *= -1.0;
      out.v.col(l) *= -1.0;
    }
  }
  return out;
}

int eigen_ratio_d(const Vector& mu) {
  Index usable = 0;
  if (mu.size() > 0 && mu(0) > 0.0) {
    const double cutoff = kNullSingularRatio * mu(0);
    while (usable < mu.size() && mu(usable) > cutoff) ++usable;
  }
  if (usable < 2) {
    throw Error(ErrorCode::DegenerateSpectrum, "need at least two nonzero singular values");
  }

  int best = 1;
  double best_ratio = -1.0;
  for (Index l = 0; l + 1 < usable; ++l) {
    if (mu(l + 1) > mu(l)) {
      throw Error(ErrorCode::InvalidArgument, "singular values must be nonincreasing");
    }
    const double q = mu(l) / mu(l + 1);
    const double ratio = q * q;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = static_cast<int>(l + 1);
    }
  }
  return best;
}

}  // namespace profscreen
