// gracezo: run experiments, verify the numerical constants, probe query
// scaling and inspect edge lists.
//
// Exit status: 0 success, 1 some runs (or checks) failed, 2 invalid input.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gracezo/errors.hpp"
#include "gracezo/experiment.hpp"
#include "gracezo/graph.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailures = 1;
constexpr int kInvalidInput = 2;

int cmd_run(const std::string& spec_path, const std::string& output, unsigned jobs) {
  gracezo::ExperimentSpec spec;
  try {
    spec = gracezo::load_experiment_spec(spec_path);
  } catch (const std::exception& e) {
    std::cerr << "gracezo run: " << spec_path << ": " << e.what() << '\n';
    return kInvalidInput;
  }
  gracezo::ExperimentResult result;
  try {
    result = gracezo::run_experiment(spec, {jobs});
  } catch (const std::exception& e) {
    std::cerr << "gracezo run: " << e.what() << '\n';
    return kInvalidInput;
  }
  const auto dir = output.empty() ? gracezo::resolve_output_dir(spec) : std::filesystem::path(output);
  gracezo::write_experiment_outputs(result, dir);
  std::cout << gracezo::summary_csv(result);
  std::size_t failed = 0;
  for (const auto& r : result.runs) failed += r.ok() ? 0 : 1;
  std::cerr << result.runs.size() << " runs, " << failed << " failed; output in " << dir.string() << '\n';
  return failed ? kFailures : kOk;
}

int cmd_verify(const gracezo::TheoryParams& p) {
  const gracezo::VerifyReport report = gracezo::verify_theory(p);
  std::cout << report.render();
  return report.all_pass() ? kOk : kFailures;
}

int cmd_scaling(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& sparsities,
                std::size_t repeats, std::uint64_t seed, const std::string& output) {
  const auto rows = gracezo::query_scaling_probe(dims, sparsities, repeats, seed);
  const std::string csv = gracezo::scaling_csv(rows);
  if (output.empty()) {
    std::cout << csv;
  } else {
    std::ofstream(output, std::ios::binary) << csv;
  }
  std::fprintf(stderr, "correlation with s log2 log2(d/s): %.6f\n", gracezo::scaling_correlation(rows));
  return kOk;
}

int cmd_graph_info(const std::string& path) {
  try {
    const gracezo::Graph g = gracezo::load_graph_file(path);
    std::size_t min_degree = g.vertex_count() ? g.degree(0) : 0, max_degree = 0;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      min_degree = std::min(min_degree, g.degree(v));
      max_degree = std::max(max_degree, g.degree(v));
    }
    std::cout << "vertices " << g.vertex_count() << '\n'
              << "edges " << g.edge_count() << '\n'
              << "components " << g.component_count() << '\n'
              << "min_degree " << min_degree << '\n'
              << "max_degree " << max_degree << '\n'
              << "attack_dimension " << g.vertex_count() * g.vertex_count() << '\n';
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "gracezo graph-info: " << path << ": " << e.what() << '\n';
    return kInvalidInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-gradient zeroth-order optimization toolkit"};
  app.require_subcommand(1);

  std::string spec_path, output;
  unsigned jobs = 0;
  auto* run = app.add_subcommand("run", "Run an experiment spec and write trace/summary CSVs");
  run->add_option("spec", spec_path, "Experiment spec (INI)")->required();
  run->add_option("-o,--output", output, "Output directory (overrides the output key and GRACEZO_OUTPUT_DIR)");
  run->add_option("-j,--jobs", jobs, "Worker threads (default: all cores)");

  gracezo::TheoryParams params = gracezo::reference_theory_params();
  auto* verify = app.add_subcommand("verify", "Check the constants, schedules and exact identities");
  verify->add_option("--D", params.D, "Base divisor D")->check(CLI::PositiveNumber);
  verify->add_option("--delta", params.delta, "Failure probability delta");
  verify->add_option("--phi", params.phi, "phi");
  verify->add_option("--theta", params.theta, "theta");

  std::vector<std::size_t> dims{256, 1024, 4096, 16384}, sparsities{4, 8, 16, 32};
  std::size_t repeats = 20;
  std::uint64_t seed = 1;
  std::string scaling_output;
  auto* scaling = app.add_subcommand("scaling", "Mean estimator queries on planted sparse linear objectives");
  scaling->add_option("--d", dims, "Dimensions")->delimiter(',');
  scaling->add_option("--s", sparsities, "Sparsities")->delimiter(',');
  scaling->add_option("--repeats", repeats, "Instances per (d, s)")->check(CLI::PositiveNumber);
  scaling->add_option("--seed", seed, "Base seed");
  scaling->add_option("-o,--output", scaling_output, "CSV path (default: stdout)");

  std::string graph_path;
  auto* graph = app.add_subcommand("graph-info", "Summarize an edge-list file");
  graph->add_option("edge-list", graph_path, "Edge list: 'n m' then m lines 'a b' (1-based)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidInput;
  }

  try {
    if (*run) return cmd_run(spec_path, output, jobs);
    if (*verify) return cmd_verify(params);
    if (*scaling) return cmd_scaling(dims, sparsities, repeats, seed, scaling_output);
    if (*graph) return cmd_graph_info(graph_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "gracezo: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "gracezo: " << e.what() << '\n';
    return kFailures;
  }
  return kInvalidInput;
}
