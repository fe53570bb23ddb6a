#include "profscreen/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "profscreen/csv.hpp"
#include "profscreen/error.hpp"
#include "profscreen/experiment.hpp"
#include "profscreen/model_selection.hpp"
#include "profscreen/parallel.hpp"
#include "profscreen/screening.hpp"
#include "profscreen/simgen.hpp"

namespace profscreen::cli {

namespace {

// Flag values that parse but do not make sense together.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScreenFlags {
  std::string method;
  std::string csv;
  std::string response = "y";
  std::vector<double> alpha_grid;
  std::vector<double> d_fractions;
  long long k_max = 0;
  std::string variant = "puffer";
  std::string ranking_out;
  std::string out = "-";
  unsigned threads = 0;
};

struct SimFlags {
  int example = 1;
  long long n = 100;
  long long p = 1000;
  double phi = 0.5;
  int d = 3;
  int m = 20;
  std::uint64_t seed = 0;
  std::optional<long long> replicate;
  std::string out = "-";
};

struct BenchFlags {
  SimFlags sim;
  int replicates = 100;
  std::vector<std::string> methods;
  std::string format = "csv";
  unsigned threads = 0;
  long long k_max = 0;
  std::vector<double> alpha_grid;
  std::vector<double> d_fractions;
  std::string variant = "puffer";
  std::string alpha_curve_out;
  std::string records_out;
};

std::string g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  write_text_file(path, text);
}

PpisVariant parse_variant(const std::string& name) {
  if (name == "puffer") return PpisVariant::PufferInverse;
  if (name == "literal") return PpisVariant::LiteralD2;
  throw UsageError("unknown --ppis-variant '" + name + "' (expected puffer or literal)");
}

Method require_method(const std::string& name) {
  auto m = parse_method(name);
  if (!m) throw UsageError("unknown method '" + name + "' (expected sis, fpsis, fpsis-bic, ppis or tppis)");
  return *m;
}

void check_unit_interval(const std::vector<double>& values, const char* flag) {
  for (double v : values) {
    if (!(v > 0.0 && v <= 1.0)) throw UsageError(std::string(flag) + " values must lie in (0, 1]");
  }
}

SimulationSpec make_sim_spec(const SimFlags& f) {
  if (f.example < 1 || f.example > 4) throw UsageError("--example must be 1, 2, 3 or 4");
  SimulationSpec s;
  s.example = static_cast<ExampleId>(f.example);
  s.n = f.n;
  s.p = f.p;
  s.phi = f.phi;
  s.d_spike = f.d;
  s.m_spike = f.m;
  s.seed = f.seed;
  return s;
}

// Generator construction validates the spec; its complaints are flag errors.
DatasetGenerator make_generator(const SimulationSpec& spec) {
  try {
    return DatasetGenerator(spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

void add_sim_options(CLI::App* cmd, SimFlags& f) {
  cmd->add_option("--example", f.example, "Simulation example (1-4)")->check(CLI::Range(1, 4));
  cmd->add_option("--n", f.n, "Sample size");
  cmd->add_option("--p", f.p, "Number of predictors");
  cmd->add_option("--phi", f.phi, "Correlation parameter (examples 1-3)");
  cmd->add_option("--d", f.d, "Number of strong factors (example 4)");
  cmd->add_option("--m", f.m, "Number of weak factors (example 4)");
  cmd->add_option("--seed", f.seed, "Base seed");
}

int cmd_screen(const ScreenFlags& f, std::ostream& out, std::ostream& err) {
  const Method method = require_method(f.method);
  const PpisVariant variant = parse_variant(f.variant);
  check_unit_interval(f.alpha_grid, "--alpha-grid");
  check_unit_interval(f.d_fractions, "--d-fractions");
  if (f.k_max < 0) throw UsageError("--k-max must be non-negative");
  if (method == Method::Sis && (!f.alpha_grid.empty() || !f.d_fractions.empty())) {
    err << "warning: --alpha-grid and --d-fractions are ignored for sis\n";
  }

  const LoadedData data = load_csv(f.csv, f.response);
  const DesignMatrix x = standardize_columns(data.x);
  const ResponseVector y = center_response(data.y);
  const ThinSvd svd = thin_svd(x);

  std::vector<double> alphas(std::begin(kDefaultAlphas), std::end(kDefaultAlphas));
  std::vector<double> fractions(std::begin(kDefaultFractions), std::end(kDefaultFractions));
  if (!f.alpha_grid.empty()) alphas = f.alpha_grid;
  if (!f.d_fractions.empty()) fractions = f.d_fractions;

  std::vector<int> d_grid;
  if (method != Method::Sis) d_grid = default_d_grid(x.n(), fractions, eigen_ratio_d(svd.mu));

  GridOptions options;
  options.k_max = static_cast<Index>(f.k_max);
  options.variant = variant;
  options.threads = f.threads > 0 ? f.threads : default_thread_count();
  const GridSearchResult grid = grid_search(method, x, y, svd, d_grid, alphas, options);

  ProjectionSpec spec{method, grid.best_d, grid.best_alpha.value_or(1.0), variant};
  const ImportanceScores scores = importance_scores(profile(x, y, svd, spec));

  std::ostringstream report;
  report << "method: " << to_string(method) << '\n';
  report << "n: " << x.n() << '\n';
  report << "p: " << x.p() << '\n';
  report << "response: " << data.response_name << '\n';
  report << "d: " << grid.best_d << '\n';
  report << "alpha: " << (grid.best_alpha ? g6(*grid.best_alpha) : std::string("-")) << '\n';
  report << "k: " << grid.best_k << '\n';
  report << "bic: " << format_exact(grid.best_bic) << '\n';
  report << "selected:";
  for (Index j : grid.model.indices) report << ' ' << data.names[static_cast<std::size_t>(j)];
  report << '\n';
  emit(f.out, report.str(), out);

  if (!f.ranking_out.empty()) {
    std::ostringstream ranking;
    ranking << "rank,name,omega\n";
    for (std::size_t r = 0; r < scores.ranking.size(); ++r) {
      const Index j = scores.ranking[r];
      ranking << (r + 1) << ',' << data.names[static_cast<std::size_t>(j)] << ','
              << format_exact(scores.omega(j)) << '\n';
    }
    emit(f.ranking_out, ranking.str(), out);
  }
  return kExitOk;
}

int cmd_simulate(const SimFlags& f, std::ostream& out) {
  const SimulationSpec spec = make_sim_spec(f);
  const DatasetGenerator generator = make_generator(spec);
  if (f.replicate && *f.replicate < 0) throw UsageError("--replicate must be non-negative");
  const std::uint64_t seed =
      f.replicate ? substream_seed(f.seed, static_cast<std::uint64_t>(*f.replicate)) : f.seed;
  const GeneratedDataset ds = generator.generate(seed);

  std::ostringstream text;
  write_dataset_csv(text, ds.x_raw, ds.y_raw);
  emit(f.out, text.str(), out);
  return kExitOk;
}

int cmd_bench(const BenchFlags& f, std::ostream& out) {
  ExperimentPlan plan;
  plan.sim = make_sim_spec(f.sim);
  make_generator(plan.sim);
  if (f.replicates < 1) throw UsageError("--replicates must be at least 1");
  plan.replicates = f.replicates;
  plan.base_seed = f.sim.seed;
  if (!f.methods.empty()) {
    plan.methods.clear();
    for (const auto& name : f.methods) plan.methods.push_back(require_method(name));
  }
  check_unit_interval(f.alpha_grid, "--alpha-grid");
  check_unit_interval(f.d_fractions, "--d-fractions");
  if (!f.alpha_grid.empty()) plan.alpha_grid = f.alpha_grid;
  if (!f.d_fractions.empty()) plan.d_fractions = f.d_fractions;
  if (f.k_max < 0) throw UsageError("--k-max must be non-negative");
  plan.k_max = static_cast<Index>(f.k_max);
  plan.variant = parse_variant(f.variant);
  plan.threads = f.threads > 0 ? f.threads : default_thread_count();

  TableFormat format = TableFormat::Csv;
  if (f.format == "markdown") {
    format = TableFormat::Markdown;
  } else if (f.format != "csv") {
    throw UsageError("--format must be csv or markdown");
  }

  const ExperimentResult result = run_experiment(plan);
  emit(f.sim.out, emit_table(result.aggregates, format), out);
  if (!f.alpha_curve_out.empty()) emit(f.alpha_curve_out, emit_alpha_curve(result.tppis_alpha_curve), out);
  if (!f.records_out.empty()) emit(f.records_out, emit_records(result), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variable screening for high-dimensional linear models"};
  app.name(args.empty() ? "profscreen" : std::filesystem::path(args.front()).filename().string());
  app.require_subcommand(1);

  ScreenFlags screen;
  auto* sc = app.add_subcommand("screen", "Screen the predictors of a CSV dataset");
  sc->add_option("--method", screen.method, "sis, fpsis, fpsis-bic, ppis or tppis")->required();
  sc->add_option("--csv", screen.csv, "Input CSV with a header row")->required();
  sc->add_option("--response", screen.response, "Response column name or 1-based index");
  sc->add_option("--alpha-grid", screen.alpha_grid, "Comma-separated truncation fractions")->delimiter(',');
  sc->add_option("--d-fractions", screen.d_fractions, "Comma-separated factor-count fractions of n")
      ->delimiter(',');
  sc->add_option("--k-max", screen.k_max, "Largest model size (0 = n - 2)");
  sc->add_option("--ppis-variant", screen.variant, "puffer or literal");
  sc->add_option("--ranking-out", screen.ranking_out, "Write the full importance ranking here");
  sc->add_option("--out", screen.out, "Report destination (- for stdout)");
  sc->add_option("--threads", screen.threads, "Worker threads");

  SimFlags sim;
  auto* si = app.add_subcommand("simulate", "Write one simulated dataset as CSV");
  add_sim_options(si, sim);
  si->add_option("--replicate", sim.replicate, "Draw replicate r of the bench substreams");
  si->add_option("--out", sim.out, "Destination (- for stdout)");

  BenchFlags bench;
  auto* be = app.add_subcommand("bench", "Run a simulation study and print the summary table");
  add_sim_options(be, bench.sim);
  be->add_option("--replicates", bench.replicates, "Number of replicates");
  be->add_option("--methods", bench.methods, "Comma-separated method list")->delimiter(',');
  be->add_option("--out", bench.sim.out, "Table destination (- for stdout)");
  be->add_option("--format", bench.format, "csv or markdown");
  be->add_option("--threads", bench.threads, "Worker threads (default PROFSCREEN_THREADS or all cores)");
  be->add_option("--k-max", bench.k_max, "Largest model size (0 = n - 2)");
  be->add_option("--alpha-grid", bench.alpha_grid, "Comma-separated truncation fractions")->delimiter(',');
  be->add_option("--d-fractions", bench.d_fractions, "Comma-separated factor-count fractions of n")
      ->delimiter(',');
  be->add_option("--ppis-variant", bench.variant, "puffer or literal");
  be->add_option("--alpha-curve", bench.alpha_curve_out, "Write the TPPIS alpha curve CSV here");
  be->add_option("--records", bench.records_out, "Write per-replicate records CSV here");

  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* active = sc->parsed() ? sc : (si->parsed() ? si : be);
  try {
    if (sc->parsed()) return cmd_screen(screen, out, err);
    if (si->parsed()) return cmd_simulate(sim, out);
    return cmd_bench(bench, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace profscreen::cli
