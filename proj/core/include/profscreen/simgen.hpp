#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Cholesky>

#include "profscreen/matrix_core.hpp"

namespace profscreen {

enum class ExampleId { Ex1 = 1, Ex2 = 2, Ex3 = 3, Ex4 = 4 };

struct SimulationSpec {
  ExampleId example = ExampleId::Ex1;
  Index n = 100;
  Index p = 1000;
  double phi = 0.5;   // Examples 1-3
  int d_spike = 3;    // Example 4
  int m_spike = 20;   // Example 4
  std::uint64_t seed = 0;
};

struct GeneratedDataset {
  Matrix x_raw;
  Vector y_raw;
  std::vector<Index> true_support;  // 0-based
  Vector true_beta;
};

/// Factor structure of the spiked design: d unit-weight factors followed
/// by m factors weighted n^(-(s + 9) / (m + 10)), s = 1..m.
struct SpikeModelSpec {
  int d = 3;
  int m = 20;
  std::vector<double> weights;  // length m, strictly decreasing
  double noise_sd = 1.0;

  static SpikeModelSpec make(Index n, int d, int m);
};

/// Seed for replicate r of an experiment, derived with a splitmix64 mix of
/// (base, r) so replicate streams are independent and schedule-free.
std::uint64_t substream_seed(std::uint64_t base, std::uint64_t replicate) noexcept;

/// Covariance of Examples 1-3 (Example 3 shares Example 2's matrix before
/// column 6 is overwritten). Throws InvalidArgument for Example 4.
Matrix example_covariance(ExampleId example, Index p, double phi);

/// Coefficients of the example's regression model (length p).
Vector example_beta(ExampleId example, Index p);

/// Reusable generator for one design: the Cholesky factor of the Example
/// 1-3 covariance is computed once and shared by every draw.
class DatasetGenerator {
 public:
  explicit DatasetGenerator(const SimulationSpec& spec);

  /// Draws one dataset; the result depends only on the spec and `seed`.
  [[nodiscard]] GeneratedDataset generate(std::uint64_t seed) const;
  [[nodiscard]] GeneratedDataset generate() const { return generate(spec_.seed); }

  [[nodiscard]] const SimulationSpec& spec() const noexcept { return spec_; }

 private:
  SimulationSpec spec_;
  Matrix chol_upper_;  // L^T with Sigma = L L^T (Examples 1-3)
};

GeneratedDataset gen_example1(Index n, Index p, double phi, std::uint64_t seed);
GeneratedDataset gen_example2(Index n, Index p, double phi, std::uint64_t seed);
GeneratedDataset gen_example3(Index n, Index p, double phi, std::uint64_t seed);
GeneratedDataset gen_example4_spike(Index n, Index p, int d_spike, int m_spike, std::uint64_t seed);

}  // namespace profscreen
