#include "profscreen/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "profscreen/error.hpp"
#include "profscreen/parallel.hpp"

namespace profscreen {

namespace {

// A new column whose component orthogonal to the current basis is at most
// this fraction of its norm adds no direction. sqrt(kGramConditionFloor).
constexpr double kDependentColumnRatio = 1e-5;
constexpr double kMinRss = 1e-300;

void check_subset(std::span<const Index> subset, Index p) {
  for (Index j : subset) {
    if (j < 0 || j >= p) {
      throw Error(ErrorCode::IndexOutOfRange, "predictor index " + std::to_string(j) + " outside [0, " +
                                                  std::to_string(p) + ")");
    }
  }
}

Matrix gather_columns(const Matrix& m, std::span<const Index> cols) {
  Matrix out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Index>(c)) = m.col(cols[c]);
  return out;
}

Vector pseudo_inverse_solve(const Matrix& a, const Vector& rhs) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? std::sqrt(kGramConditionFloor) * sv(0) : 0.0;
  Vector coef = svd.matrixU().transpose() * rhs;
  for (Index i = 0; i < sv.size(); ++i) coef(i) = sv(i) > cutoff ? coef(i) / sv(i) : 0.0;
  return svd.matrixV() * coef;
}

double log_rss_or_throw(double rss) {
  if (!(rss >= kMinRss)) {
    throw Error(ErrorCode::DegenerateFit, "residual sum of squares is zero; shrink k");
  }
  return std::log(rss);
}

}  // namespace

SubsetFit fit_subset_ols(const ProfiledData& pd, std::span<const Index> subset) {
  if (subset.empty()) throw Error(ErrorCode::EmptySubset, "subset least squares needs at least one column");
  check_subset(subset, pd.x_hat.cols());

  const Matrix a = gather_columns(pd.x_hat, subset);
  const Matrix gram = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = eig.eigenvalues().minCoeff();

  SubsetFit fit;
  if (lmax > 0.0 && lmin > kGramConditionFloor * lmax) {
    fit.beta = a.householderQr().solve(pd.y_hat);
  } else {
    fit.rank_deficient = true;
    fit.beta = lmax > 0.0 ? pseudo_inverse_solve(a, pd.y_hat) : Vector::Zero(a.cols());
  }
  return fit;
}

double bic_penalty(Index n, Index p, Index model_size) noexcept {
  const auto nd = static_cast<double>(n);
  return std::log(static_cast<double>(p)) / nd * static_cast<double>(model_size) * std::log(nd);
}

double bic_score(const ResponseVector& y, const DesignMatrix& x, std::span<const Index> subset,
                 const Vector& beta) {
  if (y.n() != x.n()) throw Error(ErrorCode::DimensionMismatch, "response and design disagree on n");
  if (static_cast<Index>(subset.size()) != beta.size()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient count does not match subset size");
  }
  check_subset(subset, x.p());

  Vector residual = y.values;
  for (std::size_t c = 0; c < subset.size(); ++c) residual -= beta(static_cast<Index>(c)) * x.values.col(subset[c]);
  return log_rss_or_throw(residual.squaredNorm()) + bic_penalty(x.n(), x.p(), static_cast<Index>(subset.size()));
}

KSelection select_k(const ProfiledData& pd, const ImportanceScores& scores, const ResponseVector& y,
                    const DesignMatrix& x, Index k_max, ResidualScale scale) {
  const Index n = x.n();
  const Index p = x.p();
  if (y.n() != n || pd.x_hat.rows() != n || pd.x_hat.cols() != p ||
      static_cast<Index>(scores.ranking.size()) != p) {
    throw Error(ErrorCode::DimensionMismatch, "profiled data, scores and original data disagree in shape");
  }
  if (k_max < 1) throw Error(ErrorCode::InvalidK, "k_max must be at least 1");
  const Index kk = std::min({k_max, n - 2, p});
  if (kk < 1) throw Error(ErrorCode::InvalidK, "n = " + std::to_string(n) + " leaves no admissible k");

  const std::span<const Index> order(scores.ranking.data(), static_cast<std::size_t>(kk));
  const Matrix a = gather_columns(pd.x_hat, order);
  const bool original = scale == ResidualScale::Original;
  const Matrix xo = gather_columns(original ? x.values : pd.x_hat, order);
  const Vector& yo = original ? y.values : pd.y_hat;

  // Nested least squares via an incrementally grown orthonormal basis:
  // A_k = Q S_k. While S_k is square it is upper triangular; once a column
  // adds no new direction the minimum-norm solution S^T (S S^T)^-1 Q^T y_hat
  // is tracked with rank-one Cholesky updates.
  Matrix q(n, kk);
  Matrix s = Matrix::Zero(kk, kk);
  Vector qty(kk);
  Index rank = 0;
  Eigen::LLT<Matrix> llt;
  bool llt_ready = false;

  KSelection out;
  out.trace.reserve(static_cast<std::size_t>(kk));
  double best = std::numeric_limits<double>::infinity();
  Vector beta;

  for (Index k = 1; k <= kk; ++k) {
    const Index c = k - 1;
    const auto col = a.col(c);
    Vector w = col;
    Vector proj = Vector::Zero(rank);
    for (int pass = 0; pass < 2 && rank > 0; ++pass) {
      const Vector delta = q.leftCols(rank).transpose() * w;
      w.noalias() -= q.leftCols(rank) * delta;
      proj += delta;
    }
    const double wn = w.norm();
    const bool grows = wn > kDependentColumnRatio * col.norm();
    s.col(c).head(rank) = proj;
    if (grows) {
      q.col(rank) = w / wn;
      s(rank, c) = wn;
      qty(rank) = q.col(rank).dot(pd.y_hat);
      ++rank;
    }

    bool deficient = rank < k;
    if (!deficient) {
      beta = s.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(qty.head(k));
    } else {
      const auto sk = s.topLeftCorner(rank, k);
      if (grows || !llt_ready) {
        llt.compute(sk * sk.transpose());
        llt_ready = true;
      } else {
        llt.rankUpdate(s.col(c).head(rank));
      }
      if (llt.info() == Eigen::Success) {
        beta = sk.transpose() * llt.solve(qty.head(rank));
      } else {
        const std::vector<Index> subset(order.begin(), order.begin() + k);
        auto fit = fit_subset_ols(pd, subset);
        beta = std::move(fit.beta);
        llt_ready = false;
      }
    }

    const double rss = (yo - xo.leftCols(k) * beta).squaredNorm();
    if (!(rss >= kMinRss)) continue;
    const double bic = std::log(rss) + bic_penalty(n, p, k);
    out.trace.push_back(BicPoint{k, bic});
    if (bic < best) {
      best = bic;
      out.model.indices.assign(order.begin(), order.begin() + k);
      out.model.beta = beta;
      out.model.bic = bic;
      out.model.rank_deficient = deficient;
    }
  }

  if (out.trace.empty()) {
    throw Error(ErrorCode::DegenerateFit, "every candidate k produced a zero residual");
  }
  return out;
}

std::vector<int> default_d_grid(Index n, std::span<const double> fractions, int eigen_ratio) {
  std::vector<int> grid;
  const auto hi = static_cast<long>(std::max<Index>(1, n - 1));
  for (double f : fractions) {
    const long d = std::lround(f * static_cast<double>(n));
    grid.push_back(static_cast<int>(std::clamp(d, 1L, hi)));
  }
  grid.push_back(eigen_ratio);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

GridSearchResult grid_search(Method method, const DesignMatrix& x, const ResponseVector& y, const ThinSvd& svd,
                             std::span<const int> d_grid, std::span<const double> alpha_grid,
                             const GridOptions& options) {
  const Index n = x.n();
  const Index rank = svd.effective_rank();
  const Index k_max = options.k_max > 0 ? options.k_max : n - 2;

  std::vector<int> ds(d_grid.begin(), d_grid.end());
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  std::vector<double> alphas(alpha_grid.begin(), alpha_grid.end());
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

  std::vector<ProjectionSpec> specs;
  switch (method) {
    case Method::Sis:
      specs.push_back({Method::Sis});
      break;
    case Method::Fpsis:
      specs.push_back({Method::Fpsis, eigen_ratio_d(svd.mu)});
      break;
    case Method::Ppis:
      specs.push_back({Method::Ppis, eigen_ratio_d(svd.mu), 1.0, options.variant});
      break;
    case Method::FpsisBic:
      if (ds.empty()) throw Error(ErrorCode::InvalidArgument, "d grid is empty");
      for (int d : ds) {
        if (d >= 1 && d <= n - 1 && d < rank) specs.push_back({Method::FpsisBic, d});
      }
      break;
    case Method::Tppis:
      if (ds.empty() || alphas.empty()) throw Error(ErrorCode::InvalidArgument, "d or alpha grid is empty");
      for (int d : ds) {
        for (double alpha : alphas) {
          if (d >= 1 && alpha > 0.0 && alpha <= 1.0 && truncation_point(n, alpha) > d && d < rank) {
            specs.push_back({Method::Tppis, d, alpha});
          }
        }
      }
      break;
  }
  if (specs.empty()) throw Error(ErrorCode::EmptyValidGrid, "no valid (d, alpha) combination in the grid");

  std::vector<KSelection> results(specs.size());
  parallel_for(specs.size(), options.threads, [&](std::size_t i) {
    const ProfiledData pd = profile(x, y, svd, specs[i]);
    const ImportanceScores scores = importance_scores(pd);
    results[i] = select_k(pd, scores, y, x, k_max, options.scale);
  });

  GridSearchResult out;
  out.best_bic = std::numeric_limits<double>::infinity();
  const bool has_alpha = method == Method::Tppis;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& spec = specs[i];
    const std::optional<double> alpha = has_alpha ? std::optional<double>(spec.alpha) : std::nullopt;
    for (const auto& pt : results[i].trace) out.trace.push_back(GridPoint{spec.d, alpha, pt.k, pt.bic});
    const SubsetModel& model = results[i].model;
    if (model.bic < out.best_bic) {
      out.best_bic = model.bic;
      out.best_d = spec.d;
      out.best_alpha = alpha;
      out.best_k = static_cast<Index>(model.indices.size());
      out.model = model;
    }
    out.cells.push_back(GridCell{spec.d, alpha, std::move(results[i].model)});
  }
  return out;
}

GridSearchResult grid_search(Method method, const DesignMatrix& x, const ResponseVector& y,
                             std::span<const int> d_grid, std::span<const double> alpha_grid,
                             const GridOptions& options) {
  return grid_search(method, x, y, thin_svd(x), d_grid, alpha_grid, options);
}

}  // namespace profscreen
