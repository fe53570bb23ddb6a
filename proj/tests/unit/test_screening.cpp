#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include <Eigen/SVD>

#include "oracles.hpp"
#include "profscreen/matrix_core.hpp"
#include "profscreen/screening.hpp"
#include "test_util.hpp"

using namespace profscreen;

namespace {

struct Data {
  DesignMatrix x;
  ResponseVector y;
  ThinSvd svd;
};

Data gaussian_data(Index n, Index p, std::uint64_t seed) {
  Data d{standardize_columns(oracle::gaussian_matrix(n, p, seed)),
         center_response(oracle::gaussian_vector(n, seed + 1000)), {}};
  d.svd = thin_svd(d.x);
  return d;
}

Data raw_data(const Matrix& x, std::uint64_t seed) {
  Data d{make_design(x), make_response(oracle::gaussian_vector(x.rows(), seed)), {}};
  d.svd = thin_svd(d.x);
  return d;
}

Vector singular_values(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

Index count_above(const Vector& s, double cut) {
  return std::count_if(s.data(), s.data() + s.size(), [&](double v) { return v > cut; });
}

double max_abs(const Matrix& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

TEST(MethodNames, RoundTrip) {
  for (Method m : {Method::Sis, Method::Fpsis, Method::FpsisBic, Method::Ppis, Method::Tppis}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_EQ(parse_method("fpsis-bic"), Method::FpsisBic);
  EXPECT_EQ(parse_method("TpPiS"), Method::Tppis);
  EXPECT_FALSE(parse_method("lasso").has_value());
}

TEST(TruncationPoint, Floor) {
  EXPECT_EQ(truncation_point(100, 0.2), 20);
  EXPECT_EQ(truncation_point(100, 0.6), 60);
  EXPECT_EQ(truncation_point(10, 0.7), 7);
  EXPECT_EQ(truncation_point(4, 0.5), 2);
  EXPECT_EQ(truncation_point(7, 0.5), 3);
  EXPECT_EQ(truncation_point(100, 1.0), 100);
}

TEST(ProfileSis, Identity) {
  const auto d = gaussian_data(6, 9, 1);
  const auto pd = profile_sis(d.x, d.y);
  EXPECT_EQ(pd.x_hat, d.x.values);
  EXPECT_EQ(pd.y_hat, d.y.values);
  EXPECT_EQ(pd.spec.method, Method::Sis);
}

TEST(ProfileSis, ScoresMatchDotProducts) {
  const auto d = gaussian_data(5, 8, 2);
  const auto scores = importance_scores(profile_sis(d.x, d.y));
  const Vector ref = oracle::omega(d.x.values, d.y.values);
  EXPECT_LE(max_abs(scores.omega - ref), 1e-12);
  EXPECT_LE(max_abs(scores.omega - d.x.values.transpose() * d.y.values), 1e-12);
}

TEST(ProfileFpsis, HandDiagonal) {
  Matrix x(2, 2);
  x << 2, 0, 0, 1;
  const auto d = raw_data(x, 3);
  const auto pd = profile_fpsis(d.x, d.y, d.svd, 1);
  Matrix expect(2, 2);
  expect << 0, 0, 0, 1;
  EXPECT_LE(max_abs(pd.x_hat - expect), 1e-14);
  EXPECT_NEAR(pd.y_hat(0), 0.0, 1e-14);
  EXPECT_NEAR(pd.y_hat(1), d.y.values(1), 1e-14);
}

TEST(ProfileFpsis, AnnihilatesAndIsIdempotent) {
  const auto d = gaussian_data(20, 50, 4);
  for (int k : {1, 3, 10, 19}) {
    const auto pd = profile_fpsis(d.x, d.y, d.svd, k);
    const auto u1 = d.svd.u.leftCols(k);
    EXPECT_LE(max_abs(u1.transpose() * pd.x_hat), 1e-10);
    EXPECT_LE(max_abs(u1.transpose() * pd.y_hat), 1e-10);
    const auto again = profile_fpsis(make_design(pd.x_hat), make_response(pd.y_hat), d.svd, k);
    EXPECT_LE(max_abs(again.x_hat - pd.x_hat), 1e-10);
    EXPECT_LE(max_abs(again.y_hat - pd.y_hat), 1e-10);
  }
}

TEST(ProfileFpsis, MatchesExplicitProjector) {
  const auto d = gaussian_data(10, 30, 5);
  for (int k : {1, 2, 5}) {
    const auto pd = profile_fpsis(d.x, d.y, d.svd, k);
    const auto ref = oracle::fpsis(d.x.values, d.y.values, k);
    EXPECT_LE(max_abs(pd.x_hat - ref.x_hat), 1e-10);
    EXPECT_LE(max_abs(pd.y_hat - ref.y_hat), 1e-10);
  }
}

TEST(ProfileFpsis, InvalidFactorCount) {
  const auto d = gaussian_data(8, 20, 6);
  EXPECT_EQ(error_code_of([&] { profile_fpsis(d.x, d.y, d.svd, 0); }), ErrorCode::InvalidFactorCount);
  EXPECT_EQ(error_code_of([&] { profile_fpsis(d.x, d.y, d.svd, 8); }), ErrorCode::InvalidFactorCount);
}

TEST(ProfileFpsis, ShapeMismatch) {
  const auto d = gaussian_data(8, 20, 6);
  const auto y = center_response(oracle::gaussian_vector(7, 1));
  EXPECT_EQ(error_code_of([&] { profile_fpsis(d.x, y, d.svd, 1); }), ErrorCode::DimensionMismatch);
}

TEST(ProfilePpis, HandPufferInverse) {
  Matrix x(2, 2);
  x << 4, 0, 0, 2;
  const auto d = raw_data(x, 7);
  const auto pd = profile_ppis(d.x, d.y, d.svd, 1);
  Matrix expect(2, 2);
  expect << 0, 0, 0, 1;
  EXPECT_LE(max_abs(pd.x_hat - expect), 1e-14);
  EXPECT_NEAR(pd.y_hat(1), d.y.values(1) / 2.0, 1e-14);
}

TEST(ProfilePpis, HandLiteral) {
  Matrix x(2, 2);
  x << 4, 0, 0, 2;
  const auto d = raw_data(x, 7);
  const auto pd = profile_ppis(d.x, d.y, d.svd, 1, PpisVariant::LiteralD2);
  Matrix expect(2, 2);
  expect << 0, 0, 0, 4;
  EXPECT_LE(max_abs(pd.x_hat - expect), 1e-14);
  EXPECT_NEAR(pd.y_hat(1), d.y.values(1) * 2.0, 1e-14);
}

TEST(ProfilePpis, WhitensFullRankInput) {
  const auto d = raw_data(oracle::gaussian_matrix(20, 50, 8), 9);
  for (int k : {1, 4, 12}) {
    const Vector s = singular_values(profile_ppis(d.x, d.y, d.svd, k).x_hat);
    const Index nz = count_above(s, 1e-6);
    EXPECT_EQ(nz, 20 - k);
    for (Index i = 0; i < nz; ++i) EXPECT_NEAR(s(i), 1.0, 1e-8);
  }
}

TEST(ProfilePpis, StandardizedInputSkipsNullDirection) {
  const auto d = gaussian_data(20, 50, 10);
  ASSERT_EQ(d.svd.effective_rank(), 19);
  const Vector s = singular_values(profile_ppis(d.x, d.y, d.svd, 3).x_hat);
  const Index nz = count_above(s, 1e-6);
  EXPECT_EQ(nz, 16);
  for (Index i = 0; i < nz; ++i) EXPECT_NEAR(s(i), 1.0, 1e-8);
  EXPECT_TRUE(profile_ppis(d.x, d.y, d.svd, 3).x_hat.allFinite());
}

TEST(ProfilePpis, MatchesExplicitProjector) {
  const auto d = gaussian_data(10, 30, 11);
  for (int k : {1, 3, 7}) {
    const auto pd = profile_ppis(d.x, d.y, d.svd, k);
    const auto ref = oracle::whiten(d.x.values, d.y.values, k, d.svd.effective_rank());
    EXPECT_LE(max_abs(pd.x_hat - ref.x_hat), 1e-10);
    EXPECT_LE(max_abs(pd.y_hat - ref.y_hat), 1e-10);
  }
}

TEST(ProfilePpis, NothingLeftToWhiten) {
  Vector u = oracle::gaussian_vector(5, 1);
  Vector v = oracle::gaussian_vector(9, 2);
  const auto d = raw_data(Matrix(u * v.transpose()), 3);
  EXPECT_EQ(error_code_of([&] { profile_ppis(d.x, d.y, d.svd, 1); }), ErrorCode::SingularScale);
  EXPECT_EQ(error_code_of([&] { profile_ppis(d.x, d.y, d.svd, 0); }), ErrorCode::InvalidFactorCount);
}

TEST(ProfileTppis, AlphaOneEqualsPpis) {
  const auto d = gaussian_data(30, 100, 12);
  for (int k : {1, 5, 20}) {
    const auto a = profile_tppis(d.x, d.y, d.svd, k, 1.0);
    const auto b = profile_ppis(d.x, d.y, d.svd, k);
    EXPECT_LE(max_abs(a.x_hat - b.x_hat), 1e-12);
    EXPECT_LE(max_abs(a.y_hat - b.y_hat), 1e-12);
  }
}

TEST(ProfileTppis, HandTruncation) {
  Matrix x = Matrix::Zero(4, 6);
  x(0, 0) = 8;
  x(1, 1) = 4;
  x(2, 2) = 2;
  x(3, 3) = 1;
  const auto d = raw_data(x, 13);
  ASSERT_NEAR(d.svd.mu(1), 4.0, 1e-14);
  const auto pd = profile_tppis(d.x, d.y, d.svd, 1, 0.5);
  Matrix expect = Matrix::Zero(4, 6);
  expect(1, 1) = 1;
  EXPECT_LE(max_abs(pd.x_hat - expect), 1e-14);
  const Vector s = singular_values(pd.x_hat);
  EXPECT_EQ(count_above(s, 1e-10), 1);
  EXPECT_NEAR(pd.y_hat(1), d.y.values(1) / 4.0, 1e-14);
  EXPECT_NEAR(pd.y_hat(0), 0.0, 1e-14);
  EXPECT_NEAR(pd.y_hat(2), 0.0, 1e-14);
}

TEST(ProfileTppis, WhitensTruncatedBlock) {
  const auto d = gaussian_data(30, 100, 14);
  for (double alpha : {0.2, 0.4, 0.6, 0.8}) {
    const Index t = truncation_point(30, alpha);
    for (int k = 1; k < t; k += 2) {
      const Vector s = singular_values(profile_tppis(d.x, d.y, d.svd, k, alpha).x_hat);
      const Index nz = count_above(s, 1e-6);
      EXPECT_EQ(nz, t - k) << "alpha " << alpha << " d " << k;
      for (Index i = 0; i < nz; ++i) EXPECT_NEAR(s(i), 1.0, 1e-8);
    }
  }
}

TEST(ProfileTppis, MatchesExplicitProjector) {
  const auto d = gaussian_data(10, 30, 15);
  const auto pd = profile_tppis(d.x, d.y, d.svd, 2, 0.6);
  const auto ref = oracle::whiten(d.x.values, d.y.values, 2, 6);
  EXPECT_LE(max_abs(pd.x_hat - ref.x_hat), 1e-10);
  EXPECT_LE(max_abs(pd.y_hat - ref.y_hat), 1e-10);
}

TEST(ProfileTppis, Errors) {
  const auto d = gaussian_data(10, 30, 16);
  EXPECT_EQ(error_code_of([&] { profile_tppis(d.x, d.y, d.svd, 2, 0.2); }), ErrorCode::InvalidTruncation);
  EXPECT_EQ(error_code_of([&] { profile_tppis(d.x, d.y, d.svd, 3, 0.2); }), ErrorCode::InvalidTruncation);
  EXPECT_EQ(error_code_of([&] { profile_tppis(d.x, d.y, d.svd, 1, 0.0); }), ErrorCode::InvalidTruncation);
  EXPECT_EQ(error_code_of([&] { profile_tppis(d.x, d.y, d.svd, 1, 1.5); }), ErrorCode::InvalidTruncation);
  EXPECT_EQ(error_code_of([&] { profile_tppis(d.x, d.y, d.svd, 0, 0.5); }), ErrorCode::InvalidFactorCount);
}

TEST(Profiling, AnnihilationForAllTransforms) {
  const auto d = gaussian_data(25, 80, 17);
  for (int k : {1, 4, 9}) {
    const auto u1 = d.svd.u.leftCols(k);
    for (const auto& pd : {profile_fpsis(d.x, d.y, d.svd, k), profile_ppis(d.x, d.y, d.svd, k),
                           profile_tppis(d.x, d.y, d.svd, k, 0.6)}) {
      EXPECT_LE(max_abs(u1.transpose() * pd.x_hat), 1e-10);
      EXPECT_LE(max_abs(u1.transpose() * pd.y_hat), 1e-10);
    }
  }
}

TEST(Profiling, DispatchMatchesDirectCalls) {
  const auto d = gaussian_data(12, 40, 18);
  EXPECT_EQ(profile(d.x, d.y, d.svd, {Method::Sis}).x_hat, d.x.values);
  EXPECT_EQ(profile(d.x, d.y, d.svd, {Method::Fpsis, 2}).x_hat, profile_fpsis(d.x, d.y, d.svd, 2).x_hat);
  EXPECT_EQ(profile(d.x, d.y, d.svd, {Method::FpsisBic, 3}).x_hat, profile_fpsis(d.x, d.y, d.svd, 3).x_hat);
  EXPECT_EQ(profile(d.x, d.y, d.svd, {Method::Ppis, 2}).y_hat, profile_ppis(d.x, d.y, d.svd, 2).y_hat);
  EXPECT_EQ(profile(d.x, d.y, d.svd, {Method::Tppis, 2, 0.5}).y_hat,
            profile_tppis(d.x, d.y, d.svd, 2, 0.5).y_hat);
  EXPECT_EQ(profile(d.x, d.y, d.svd, {Method::FpsisBic, 3}).spec.method, Method::FpsisBic);
}

TEST(ImportanceScores, IdentityDesign) {
  ProfiledData pd{vec({1, -2}), Matrix::Identity(2, 2), {}};
  const auto s = importance_scores(pd);
  EXPECT_EQ(s.omega(0), 1.0);
  EXPECT_EQ(s.omega(1), -2.0);
  EXPECT_EQ(s.ranking, (std::vector<Index>{1, 0}));
}

TEST(ImportanceScores, OrthogonalColumnScoresZero) {
  Matrix x(3, 2);
  x << 1, 1, 0, -1, 0, 0;
  ProfiledData pd{vec({1, 1, 0}), x, {}};
  EXPECT_EQ(importance_scores(pd).omega(1), 0.0);
}

TEST(ImportanceScores, MatchesBruteForce) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto d = gaussian_data(10, 30, 20 + s);
    const auto pd = profile_tppis(d.x, d.y, d.svd, 2, 0.8);
    const auto scores = importance_scores(pd);
    const Vector ref = oracle::omega(pd.x_hat, pd.y_hat);
    EXPECT_LE(max_abs(scores.omega - ref), 1e-10);
    EXPECT_EQ(scores.ranking, oracle::ranking(ref));
  }
}

TEST(ImportanceScores, NonFiniteRejected) {
  ProfiledData pd{vec({1, std::numeric_limits<double>::quiet_NaN()}), Matrix::Identity(2, 2), {}};
  EXPECT_EQ(error_code_of([&] { importance_scores(pd); }), ErrorCode::NonFiniteInput);
}

TEST(ImportanceScores, TiesByAscendingIndex) {
  ProfiledData pd{vec({1, 1, 1}), Matrix::Identity(3, 3), {}};
  pd.x_hat(1, 1) = -1;
  EXPECT_EQ(importance_scores(pd).ranking, (std::vector<Index>{0, 1, 2}));
}

TEST(ImportanceScores, ColumnPermutationIsConsistent) {
  const auto d = gaussian_data(15, 40, 30);
  std::vector<Index> perm(40);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(5));
  Matrix xp(15, 40);
  for (Index j = 0; j < 40; ++j) xp.col(j) = d.x.values.col(perm[static_cast<std::size_t>(j)]);
  const auto dp = Data{make_design(xp), d.y, thin_svd(xp)};

  for (const auto& spec : {ProjectionSpec{Method::Sis}, ProjectionSpec{Method::Fpsis, 3},
                           ProjectionSpec{Method::Ppis, 3}, ProjectionSpec{Method::Tppis, 3, 0.6}}) {
    const auto a = importance_scores(profile(d.x, d.y, d.svd, spec));
    const auto b = importance_scores(profile(dp.x, dp.y, dp.svd, spec));
    for (Index j = 0; j < 40; ++j) EXPECT_NEAR(b.omega(j), a.omega(perm[static_cast<std::size_t>(j)]), 1e-10);
    for (std::size_t r = 0; r < 40; ++r) EXPECT_EQ(perm[static_cast<std::size_t>(b.ranking[r])], a.ranking[r]);
  }
}

TEST(SelectTopK, Examples) {
  ProfiledData pd{vec({1, -2, 0.5}), Matrix::Identity(3, 3), {}};
  const auto s = importance_scores(pd);
  EXPECT_EQ(select_top_k(s, 2), (std::vector<Index>{1, 0}));
  EXPECT_EQ(select_top_k(s, 3), (std::vector<Index>{1, 0, 2}));

  ProfiledData tie{vec({1, 1}), Matrix::Identity(2, 2), {}};
  EXPECT_EQ(select_top_k(importance_scores(tie), 1), (std::vector<Index>{0}));
}

TEST(SelectTopK, InvalidK) {
  ProfiledData pd{vec({1, -2, 0.5}), Matrix::Identity(3, 3), {}};
  const auto s = importance_scores(pd);
  EXPECT_EQ(error_code_of([&] { select_top_k(s, 0); }), ErrorCode::InvalidK);
  EXPECT_EQ(error_code_of([&] { select_top_k(s, 4); }), ErrorCode::InvalidK);
}
