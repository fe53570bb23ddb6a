#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "profscreen/matrix_core.hpp"

namespace profscreen {

enum class Method { Sis, Fpsis, FpsisBic, Ppis, Tppis };

/// Scaling applied to the retained block of singular directions in the
/// preconditioned transforms. PufferInverse whitens (D^-1); LiteralD2
/// multiplies by D instead.
enum class PpisVariant { PufferInverse, LiteralD2 };

std::string_view to_string(Method m) noexcept;
/// Accepts "sis", "fpsis", "fpsis-bic" (or "fpsis_bic"), "ppis", "tppis".
std::optional<Method> parse_method(std::string_view name) noexcept;

struct ProjectionSpec {
  Method method = Method::Sis;
  int d = 0;
  double alpha = 1.0;
  PpisVariant variant = PpisVariant::PufferInverse;
};

struct ProfiledData {
  Vector y_hat;  // n
  Matrix x_hat;  // n x p
  ProjectionSpec spec;
};

/// omega_j = x_hat_j . y_hat, and predictor indices (0-based) ordered by
/// decreasing |omega_j|, ties by ascending index.
struct ImportanceScores {
  Vector omega;
  std::vector<Index> ranking;
};

/// floor(n * alpha), guarded against representation error in alpha.
Index truncation_point(Index n, double alpha) noexcept;

/// Identity transform.
ProfiledData profile_sis(const DesignMatrix& x, const ResponseVector& y);

/// Removes the first d left singular directions:
/// y_hat = y - U1 U1^T y, X_hat = X - U1 U1^T X. Requires 1 <= d <= n - 1.
ProfiledData profile_fpsis(const DesignMatrix& x, const ResponseVector& y, const ThinSvd& svd, int d);

/// Preconditioned profiling over directions d+1..n.
/// PufferInverse: X_hat = U2 V2^T, y_hat = U2 D2^-1 U2^T (y - U1 U1^T y).
/// Directions whose singular value is numerically zero are not whitened;
/// SingularScale is raised when none remain after the first d.
ProfiledData profile_ppis(const DesignMatrix& x, const ResponseVector& y, const ThinSvd& svd, int d,
                          PpisVariant variant = PpisVariant::PufferInverse);

/// Truncated preconditioned profiling: whitens only directions d+1..t with
/// t = floor(n * alpha). Throws InvalidTruncation when t <= d.
ProfiledData profile_tppis(const DesignMatrix& x, const ResponseVector& y, const ThinSvd& svd, int d,
                           double alpha);

/// Dispatches on spec.method. FpsisBic profiles exactly like Fpsis.
ProfiledData profile(const DesignMatrix& x, const ResponseVector& y, const ThinSvd& svd,
                     const ProjectionSpec& spec);

ImportanceScores importance_scores(const ProfiledData& pd);

/// First k entries of the ranking. Throws InvalidK unless 1 <= k <= p.
std::vector<Index> select_top_k(const ImportanceScores& scores, Index k);

}  // namespace profscreen
