#include "profscreen/screening.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "profscreen/error.hpp"

namespace profscreen {

namespace {

void check_shapes(const DesignMatrix& x, const ResponseVector& y) {
  if (x.n() != y.n()) {
    throw Error(ErrorCode::DimensionMismatch,
                "design has " + std::to_string(x.n()) + " rows but response has " + std::to_string(y.n()));
  }
}

void check_shapes(const DesignMatrix& x, const ResponseVector& y, const ThinSvd& svd) {
  check_shapes(x, y);
  if (svd.u.rows() != x.n() || svd.v.rows() != x.p()) {
    throw Error(ErrorCode::DimensionMismatch, "SVD factors do not match the design matrix");
  }
}

void check_factor_count(const DesignMatrix& x, const ThinSvd& svd, int d) {
  if (d < 1 || d > x.n() - 1 || d > svd.size()) {
    throw Error(ErrorCode::InvalidFactorCount,
                "d = " + std::to_string(d) + " outside [1, " + std::to_string(std::min(x.n() - 1, svd.size())) + "]");
  }
}

Vector remove_leading(const ThinSvd& svd, int d, const Vector& y) {
  const auto u1 = svd.u.leftCols(d);
  return y - u1 * (u1.transpose() * y);
}

// Whitens singular directions [d, end): X_hat = U_b V_b^T and
// y_hat = U_b D_b^-1 U_b^T (y - U1 U1^T y).
ProfiledData whiten_block(const ResponseVector& y, const ThinSvd& svd, int d, Index end, ProjectionSpec spec) {
  const Index m = end - d;
  const auto ub = svd.u.middleCols(d, m);
  const auto vb = svd.v.middleCols(d, m);
  const auto mu = svd.mu.segment(d, m);

  const Vector z = remove_leading(svd, d, y.values);
  const Vector coef = (ub.transpose() * z).cwiseQuotient(mu);

  ProfiledData out;
  out.y_hat = ub * coef;
  out.x_hat = ub * vb.transpose();
  out.spec = spec;
  return out;
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Sis: return "SIS";
    case Method::Fpsis: return "FPSIS";
    case Method::FpsisBic: return "FPSIS_BIC";
    case Method::Ppis: return "PPIS";
    case Method::Tppis: return "TPPIS";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "sis") return Method::Sis;
  if (s == "fpsis") return Method::Fpsis;
  if (s == "fpsis-bic" || s == "fpsis_bic") return Method::FpsisBic;
  if (s == "ppis") return Method::Ppis;
  if (s == "tppis") return Method::Tppis;
  return std::nullopt;
}

Index truncation_point(Index n, double alpha) noexcept {
  return static_cast<Index>(std::floor(static_cast<double>(n) * alpha + 1e-9));
}

ProfiledData profile_sis(const DesignMatrix& x, const ResponseVector& y) {
  check_shapes(x, y);
  return ProfiledData{y.values, x.values, ProjectionSpec{Method::Sis}};
}

ProfiledData profile_fpsis(const DesignMatrix& x, const ResponseVector& y, const ThinSvd& svd, int d) {
  check_shapes(x, y, svd);
  check_factor_count(x, svd, d);

  const auto u1 = svd.u.leftCols(d);
  ProfiledData out;
  out.y_hat = remove_leading(svd, d, y.values);
  out.x_hat = x.values - u1 * (u1.transpose() * x.values);
  out.spec = ProjectionSpec{Method::Fpsis, d};
  return out;
}

ProfiledData profile_ppis(const DesignMatrix& x, const ResponseVector& y, const ThinSvd& svd, int d,
                          PpisVariant variant) {
  check_shapes(x, y, svd);
  check_factor_count(x, svd, d);
  const ProjectionSpec spec{Method::Ppis, d, 1.0, variant};

  if (variant == PpisVariant::PufferInverse) {
    const Index rank = svd.effective_rank();
    if (rank <= d) {
      throw Error(ErrorCode::SingularScale,
                  "no nonzero singular values remain after removing " + std::to_string(d) + " factors");
    }
    return whiten_block(y, svd, d, rank, spec);
  }

  // U2 D2 U2^T applied to the profiled model; on X this is U2 D2^2 V2^T.
  const Index m = svd.size() - d;
  const auto u2 = svd.u.middleCols(d, m);
  const auto v2 = svd.v.middleCols(d, m);
  const auto mu2 = svd.mu.segment(d, m);

  const Vector z = remove_leading(svd, d, y.values);
  ProfiledData out;
  out.y_hat = u2 * (u2.transpose() * z).cwiseProduct(mu2);
  out.x_hat = u2 * (v2 * mu2.cwiseAbs2().asDiagonal()).transpose();
  out.spec = spec;
  return out;
}

ProfiledData profile_tppis(const DesignMatrix& x, const ResponseVector& y, const ThinSvd& svd, int d,
                           double alpha) {
  check_shapes(x, y, svd);
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidTruncation, "alpha must lie in (0, 1]");
  }
  if (d < 1) throw Error(ErrorCode::InvalidFactorCount, "d must be at least 1");

  const Index t = truncation_point(x.n(), alpha);
  if (t <= d) {
    throw Error(ErrorCode::InvalidTruncation,
                "floor(n * alpha) = " + std::to_string(t) + " must exceed d = " + std::to_string(d));
  }
  const Index end = std::min(t, svd.effective_rank());
  if (end <= d) {
    throw Error(ErrorCode::SingularScale,
                "no nonzero singular values in directions " + std::to_string(d + 1) + ".." + std::to_string(t));
  }
  return whiten_block(y, svd, d, end, ProjectionSpec{Method::Tppis, d, alpha, PpisVariant::PufferInverse});
}

ProfiledData profile(const DesignMatrix& x, const ResponseVector& y, const ThinSvd& svd,
                     const ProjectionSpec& spec) {
  switch (spec.method) {
    case Method::Sis:
      return profile_sis(x, y);
    case Method::Fpsis:
    case Method::FpsisBic: {
      auto pd = profile_fpsis(x, y, svd, spec.d);
      pd.spec.method = spec.method;
      return pd;
    }
    case Method::Ppis:
      return profile_ppis(x, y, svd, spec.d, spec.variant);
    case Method::Tppis:
      return profile_tppis(x, y, svd, spec.d, spec.alpha);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method");
}

ImportanceScores importance_scores(const ProfiledData& pd) {
  if (pd.x_hat.rows() != pd.y_hat.size()) {
    throw Error(ErrorCode::DimensionMismatch, "profiled design and response disagree on n");
  }
  if (!pd.x_hat.allFinite() || !pd.y_hat.allFinite()) {
    throw Error(ErrorCode::NonFiniteInput, "profiled data contains NaN or infinite entries");
  }

  ImportanceScores out;
  out.omega = pd.x_hat.transpose() * pd.y_hat;
  out.ranking.resize(static_cast<std::size_t>(out.omega.size()));
  std::iota(out.ranking.begin(), out.ranking.end(), Index{0});
  const Vector mag = out.omega.cwiseAbs();
  std::stable_sort(out.ranking.begin(), out.ranking.end(), [&](Index a, Index b) { return mag(a) > mag(b); });
  return out;
}

std::vector<Index> select_top_k(const ImportanceScores& scores, Index k) {
  const auto p = static_cast<Index>(scores.ranking.size());
  if (k < 1 || k > p) {
    throw Error(ErrorCode::InvalidK, "k = " + std::to_string(k) + " outside [1, " + std::to_string(p) + "]");
  }
  return {scores.ranking.begin(), scores.ranking.begin() + k};
}

}  // namespace profscreen
