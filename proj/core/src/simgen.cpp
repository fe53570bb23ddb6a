#include "profscreen/simgen.hpp"

#include <cmath>
#include <random>
#include <string>

#include "profscreen/error.hpp"

namespace profscreen {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Index min_columns(ExampleId example) {
  switch (example) {
    case ExampleId::Ex1: return 4;
    case ExampleId::Ex2: return 5;
    case ExampleId::Ex3: return 6;
    case ExampleId::Ex4: return 4;
  }
  return 4;
}

void validate(const SimulationSpec& spec) {
  if (spec.n < 2) throw Error(ErrorCode::InvalidArgument, "n must be at least 2");
  if (spec.p < min_columns(spec.example)) {
    throw Error(ErrorCode::InvalidArgument, "p = " + std::to_string(spec.p) + " is too small for Example " +
                                                std::to_string(static_cast<int>(spec.example)));
  }
  if (spec.example == ExampleId::Ex4) {
    if (spec.d_spike < 0 || spec.m_spike < 0 || spec.d_spike + spec.m_spike >= spec.n) {
      throw Error(ErrorCode::InvalidSpikeCounts, "need d + m < n with d, m >= 0");
    }
  } else if (!(spec.phi > 0.0 && spec.phi < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "phi must lie in (0, 1)");
  }
}

Matrix standard_normal(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

std::vector<Index> support_of(const Vector& beta) {
  std::vector<Index> out;
  for (Index j = 0; j < beta.size(); ++j) {
    if (beta(j) != 0.0) out.push_back(j);
  }
  return out;
}

}  // namespace

SpikeModelSpec SpikeModelSpec::make(Index n, int d, int m) {
  SpikeModelSpec out;
  out.d = d;
  out.m = m;
  out.weights.reserve(static_cast<std::size_t>(std::max(m, 0)));
  for (int s = 1; s <= m; ++s) {
    out.weights.push_back(std::pow(static_cast<double>(n), -static_cast<double>(s + 9) / (m + 10)));
  }
  return out;
}

std::uint64_t substream_seed(std::uint64_t base, std::uint64_t replicate) noexcept {
  return splitmix64(splitmix64(base) ^ splitmix64(replicate + 0x632be59bd9b4e019ULL));
}

Matrix example_covariance(ExampleId example, Index p, double phi) {
  if (example == ExampleId::Ex4) {
    throw Error(ErrorCode::InvalidArgument, "Example 4 is generated from factors, not a covariance matrix");
  }
  constexpr Index k4 = 3;  // x4
  constexpr Index k5 = 4;  // x5
  Matrix sigma = Matrix::Constant(p, p, phi);
  const double root = std::sqrt(phi);
  sigma.row(k4).setConstant(root);
  sigma.col(k4).setConstant(root);
  if (example != ExampleId::Ex1 && p > k5) {
    sigma.row(k5).setZero();
    sigma.col(k5).setZero();
  }
  sigma.diagonal().setOnes();
  return sigma;
}

Vector example_beta(ExampleId example, Index p) {
  Vector beta = Vector::Zero(p);
  if (example == ExampleId::Ex4) {
    beta.head(4) << 5.0, 4.0, 3.0, 2.0;
    return beta;
  }
  beta.head(4) << 5.0, 5.0, 5.0, -15.0;
  if (example != ExampleId::Ex1) beta(4) = 5.0;
  return beta;
}

DatasetGenerator::DatasetGenerator(const SimulationSpec& spec) : spec_(spec) {
  validate(spec_);
  if (spec_.example == ExampleId::Ex4) return;

  Eigen::LLT<Matrix> llt(example_covariance(spec_.example, spec_.p, spec_.phi));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "example covariance is not positive definite");
  }
  chol_upper_ = llt.matrixU();
}

GeneratedDataset DatasetGenerator::generate(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Index n = spec_.n;
  const Index p = spec_.p;

  GeneratedDataset out;
  out.true_beta = example_beta(spec_.example, p);
  out.true_support = support_of(out.true_beta);

  if (spec_.example == ExampleId::Ex4) {
    const auto spike = SpikeModelSpec::make(n, spec_.d_spike, spec_.m_spike);
    const Index factors = spec_.d_spike + spec_.m_spike;
    Vector weight = Vector::Ones(factors);
    for (int s = 0; s < spec_.m_spike; ++s) weight(spec_.d_spike + s) = spike.weights[static_cast<std::size_t>(s)];

    const Matrix z = standard_normal(n, factors, rng);
    const Matrix loadings = standard_normal(factors, p, rng);
    out.x_raw = standard_normal(n, p, rng) * spike.noise_sd;
    out.x_raw.noalias() += z * weight.asDiagonal() * loadings;

    const Vector signal = out.x_raw * out.true_beta;
    const double var = (signal.array() - signal.mean()).square().sum() / static_cast<double>(n - 1);
    const double sd = std::sqrt(var / 5.0);
    out.y_raw = signal;
    for (Index i = 0; i < n; ++i) out.y_raw(i) += sd * normal(rng);
    return out;
  }

  out.x_raw = standard_normal(n, p, rng) * chol_upper_.triangularView<Eigen::Upper>();
  out.y_raw = out.x_raw * out.true_beta;
  for (Index i = 0; i < n; ++i) out.y_raw(i) += normal(rng);

  if (spec_.example == ExampleId::Ex3) {
    constexpr Index k5 = 4;
    constexpr Index k6 = 5;
    for (Index i = 0; i < n; ++i) out.x_raw(i, k6) = 0.8 * out.x_raw(i, k5) + 0.1 * normal(rng);
  }
  return out;
}

GeneratedDataset gen_example1(Index n, Index p, double phi, std::uint64_t seed) {
  return DatasetGenerator({ExampleId::Ex1, n, p, phi, 0, 0, seed}).generate();
}

GeneratedDataset gen_example2(Index n, Index p, double phi, std::uint64_t seed) {
  return DatasetGenerator({ExampleId::Ex2, n, p, phi, 0, 0, seed}).generate();
}

GeneratedDataset gen_example3(Index n, Index p, double phi, std::uint64_t seed) {
  return DatasetGenerator({ExampleId::Ex3, n, p, phi, 0, 0, seed}).generate();
}

GeneratedDataset gen_example4_spike(Index n, Index p, int d_spike, int m_spike, std::uint64_t seed) {
  return DatasetGenerator({ExampleId::Ex4, n, p, 0.5, d_spike, m_spike, seed}).generate();
}

}  // namespace profscreen
