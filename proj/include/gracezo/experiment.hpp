#pragma once

// Experiment orchestration: spec files, seeded parallel runs, CSV export,
// the theory report and the query-scaling probe.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gracezo/benchmarks.hpp"
#include "gracezo/estimator.hpp"
#include "gracezo/optimizer.hpp"
#include "gracezo/theory.hpp"

namespace gracezo {

/// Per-method settings; fields that a method does not use are ignored.
struct MethodSpec {
  Method method = Method::grace;
  double epsilon = 1e-4;
  std::size_t repeats = 1;
  std::optional<std::size_t> group_size;        // default max(1, floor(0.7 d / s))
  std::optional<std::uint64_t> first_divisor;   // default 20, 10 for attack
  std::size_t stop_size = 2;
  double mu = 1e-4;
  std::size_t batch = 1;
  std::size_t directions = 10;
  std::size_t gld_scales = 4;

  friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

/// INI document:
///
///   [experiment]
///   benchmark = distance      ; plus d, s, lambda, w, graph, u, v, hops, coeff_lo, coeff_hi
///   instance_seeds = 1,2,3
///   run_seeds = 1
///   budget = 5000
///   max_steps = 100           ; optional
///   eta_grid = 0.5,0.2,0.1
///   output = results          ; optional
///
///   [grace]                   ; one section per method, in run order
///   epsilon = 1e-4
///
/// Method sections: grace (epsilon, repeats, group_size, first_divisor, stop_size),
/// rs (mu), zo_signsgd (mu, batch, directions), gld (scales).
struct ExperimentSpec {
  InstanceSpec benchmark;  // seed and stream are replaced per instance seed
  std::vector<std::uint64_t> instance_seeds;
  std::vector<std::uint64_t> run_seeds;
  std::uint64_t budget = 1;
  std::optional<std::size_t> max_steps;
  std::vector<double> eta_grid;
  std::vector<MethodSpec> methods;
  std::string output;

  /// Throws std::invalid_argument on empty seeds, methods or grid, or budget 0.
  void validate() const;
  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

std::string serialize_experiment_spec(const ExperimentSpec& spec);
/// Throws ParseError on syntax errors, unknown sections or keys, and bad values.
ExperimentSpec parse_experiment_spec(const std::string& text);
/// A relative graph path is resolved against the directory of the file.
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

/// Estimator settings for a method on an instance of dimension d.
GraceConfig grace_config_for(const MethodSpec& method, const InstanceSpec& benchmark, std::size_t d);
OptimizerConfig optimizer_config_for(const MethodSpec& method, const ExperimentSpec& spec, double eta);

struct RunResult {
  std::size_t method_index = 0;
  std::size_t eta_index = 0;
  std::uint64_t instance_seed = 0;
  std::uint64_t run_seed = 0;
  Method method = Method::grace;
  double eta = 0.0;
  RunTrace trace;
  std::string error;  // empty on success

  bool ok() const noexcept { return error.empty(); }
  /// min over recorded rows of f(x_t) / f(x_1).
  double best_normalized() const;
};

struct SweepRow {
  Method method = Method::grace;
  double eta = 0.0;
  std::size_t runs = 0;      // successful runs
  std::size_t failures = 0;
  double mean = 0.0;         // of best normalized objective
  double se = 0.0;           // sample standard deviation / sqrt(runs); 0 for one run
  double median = 0.0;
};

struct ExperimentResult {
  std::string benchmark;
  std::vector<RunResult> runs;   // ordered by (method, eta, instance seed, run seed)
  std::vector<SweepRow> sweep;   // one row per (method, eta)
  std::vector<SweepRow> summary; // per method, the eta with the smallest mean

  bool has_failures() const;
};

struct RunOptions {
  unsigned jobs = 0;  // 0 selects std::thread::hardware_concurrency()
};

/// Builds every instance, runs every (method, eta, instance seed, run seed)
/// tuple with a ledger capped at the budget, and aggregates. Output order
/// does not depend on the number of jobs. Attack instances see +inf on
/// degenerate queries. Throws on invalid specs or unreadable graphs.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

std::string trace_csv(const ExperimentResult& result);
std::string summary_csv(const ExperimentResult& result);
std::string sweep_csv(const ExperimentResult& result);

/// spec.output, resolved against $GRACEZO_OUTPUT_DIR when relative; when
/// spec.output is empty, $GRACEZO_OUTPUT_DIR itself or "gracezo-output".
std::filesystem::path resolve_output_dir(const ExperimentSpec& spec);

/// Writes trace.csv, summary.csv and sweep.csv into dir (created if needed).
void write_experiment_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

struct VerifyRow {
  std::string name;
  std::string detail;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  bool all_pass() const;
  std::string render() const;
};

/// Reference parameters D = 18, delta = 1/2, phi = 0.64, theta = 0.08.
TheoryParams reference_theory_params();

/// Checks the constants, the schedule conditions at p, the theoretical and
/// practical schedules, the e^{-gamma} grid and the exhaustive partition
/// probabilities. The C2 reference value 134.88 only holds at the
/// reference parameters.
VerifyReport verify_theory(const TheoryParams& p = reference_theory_params());

struct ScalingRow {
  std::size_t d = 0;
  std::size_t s = 0;
  double mean_queries = 0.0;
  double predictor = 0.0;  // s log2 log2(d/s); NaN when d/s <= 1
};

/// Mean grace_estimate query usage on planted sparse linear objectives with
/// Unif(0.5, 1.5) coefficients, epsilon = 1e-3 and the default config.
/// Pairs with s > d are skipped.
std::vector<ScalingRow> query_scaling_probe(const std::vector<std::size_t>& dims,
                                            const std::vector<std::size_t>& sparsities, std::size_t repeats,
                                            std::uint64_t seed = 1);

std::string scaling_csv(const std::vector<ScalingRow>& rows);

/// Pearson correlation over rows with a finite predictor.
double scaling_correlation(const std::vector<ScalingRow>& rows);

}  // namespace gracezo
