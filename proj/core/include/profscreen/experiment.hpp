#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "profscreen/model_selection.hpp"
#include "profscreen/screening.hpp"
#include "profscreen/simgen.hpp"

namespace profscreen {

struct ExperimentPlan {
  SimulationSpec sim;
  std::vector<Method> methods{Method::Sis, Method::Fpsis, Method::FpsisBic, Method::Ppis, Method::Tppis};
  int replicates = 100;
  std::uint64_t base_seed = 0;
  std::vector<double> d_fractions{std::begin(kDefaultFractions), std::end(kDefaultFractions)};
  std::vector<double> alpha_grid{std::begin(kDefaultAlphas), std::end(kDefaultAlphas)};
  Index k_max = 0;  // 0 means n - 2
  PpisVariant variant = PpisVariant::PufferInverse;
  ResidualScale scale = ResidualScale::Original;
  std::vector<Index> tracked;  // 0-based; empty selects default_tracked()
  unsigned threads = 1;
};

/// Best TPPIS model restricted to one alpha.
struct AlphaPoint {
  double alpha = 0.0;
  double bic = 0.0;
  double f2 = 0.0;
};

struct ReplicateRecord {
  Method method = Method::Sis;
  std::vector<Index> selected;
  double bic = 0.0;
  double f2 = 0.0;
  int d = 0;
  std::optional<double> alpha;
  std::vector<AlphaPoint> alpha_curve;  // TPPIS only
};

struct MethodAggregate {
  Method method = Method::Sis;
  int replicates = 0;
  std::vector<Index> tracked;
  std::vector<int> selection_count;  // parallel to tracked
  double mean_bic = 0.0;
  double mean_f2 = 0.0;
  std::optional<double> modal_best_alpha;  // TPPIS only; ties to the smallest alpha
};

struct AlphaCurvePoint {
  double alpha = 0.0;
  int replicates = 0;  // replicates in which this alpha had a valid cell
  double mean_bic = 0.0;
  double mean_f2 = 0.0;
};

struct ExperimentResult {
  std::vector<MethodAggregate> aggregates;            // plan.methods order
  std::vector<std::vector<ReplicateRecord>> records;  // [replicate][method]
  std::vector<AlphaCurvePoint> tppis_alpha_curve;
};

/// True support plus, for Example 3, the correlated decoy x6.
std::vector<Index> default_tracked(ExampleId example, std::span<const Index> true_support);

/// One method's full pipeline on standardized, centered data.
ReplicateRecord run_method(Method method, const DesignMatrix& x, const ResponseVector& y, const ThinSvd& svd,
                           std::span<const Index> true_support, const ExperimentPlan& plan);

/// Generates replicate r from substream (base_seed, r) and runs every method.
std::vector<ReplicateRecord> run_replicate(const ExperimentPlan& plan, const DatasetGenerator& generator, int r);

/// Reduces one method's records (one per replicate, in replicate order).
MethodAggregate aggregate(Method method, std::span<const ReplicateRecord> records, std::span<const Index> tracked);

std::vector<AlphaCurvePoint> aggregate_alpha_curve(std::span<const ReplicateRecord> tppis_records);

/// Replicates run on plan.threads workers; results are independent of the
/// worker count. Any replicate failure aborts the run.
ExperimentResult run_experiment(const ExperimentPlan& plan);

enum class TableFormat { Csv, Markdown };

/// One row per method: method, best_alpha, bic, f2, then x<j> selection
/// counts for each tracked variable. Floats at 3 decimals.
std::string emit_table(std::span<const MethodAggregate> aggregates, TableFormat format);

std::string emit_alpha_curve(std::span<const AlphaCurvePoint> curve);

/// Per-replicate detail: replicate, method, d, alpha, k, bic, f2, selected.
std::string emit_records(const ExperimentResult& result);

}  // namespace profscreen
