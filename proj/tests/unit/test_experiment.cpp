#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "gracezo/errors.hpp"
#include "gracezo/experiment.hpp"

using namespace gracezo;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.benchmark.family = Family::distance;
  spec.benchmark.d = 64;
  spec.benchmark.s = 4;
  spec.instance_seeds = {1, 2};
  spec.run_seeds = {10, 11};
  spec.budget = 300;
  spec.eta_grid = {0.5};
  spec.methods = {MethodSpec{}};
  return spec;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string source_dir() { return GRACEZO_SOURCE_DIR; }

}  // namespace

TEST(ExperimentSpec, RoundTrip) {
  ExperimentSpec spec = small_spec();
  spec.benchmark.lambda = 0.1;
  spec.max_steps = 40;
  spec.eta_grid = {0.5, 0.2, 0.1, 0.05, 0.02, 0.01};
  spec.output = "out/dir";
  MethodSpec grace;
  grace.epsilon = 1e-4;
  grace.group_size = 7;
  grace.first_divisor = 10;
  MethodSpec rs;
  rs.method = Method::rs;
  rs.mu = 3e-5;
  MethodSpec sign;
  sign.method = Method::zo_signsgd;
  sign.directions = 44;
  sign.batch = 2;
  MethodSpec gld;
  gld.method = Method::gld;
  gld.gld_scales = 3;
  spec.methods = {grace, rs, sign, gld};
  const ExperimentSpec back = parse_experiment_spec(serialize_experiment_spec(spec));
  EXPECT_EQ(back, spec);
  EXPECT_EQ(serialize_experiment_spec(back), serialize_experiment_spec(spec));
}

TEST(ExperimentSpec, RoundTripRandomized) {
  RngStream rng(3);
  for (int t = 0; t < 100; ++t) {
    ExperimentSpec spec = small_spec();
    spec.benchmark.family = static_cast<Family>(rng.uniform_below(3));
    if (spec.benchmark.family == Family::attack) spec.benchmark.graph_path = "graphs/g.edges";
    spec.benchmark.d = 1 + rng.uniform_below(5000);
    spec.benchmark.w = rng.uniform(0.01, 3);
    if (rng.sign() > 0) spec.benchmark.lambda = rng.uniform(0, 1);
    spec.instance_seeds = {rng.next_u64(), rng.next_u64()};
    spec.budget = 1 + rng.uniform_below(100000);
    spec.eta_grid = {rng.uniform(1e-3, 1), rng.uniform(1e-3, 1)};
    spec.methods[0].epsilon = rng.uniform(1e-9, 1e-2);
    ASSERT_EQ(parse_experiment_spec(serialize_experiment_spec(spec)), spec);
  }
}

TEST(ExperimentSpec, ParseErrors) {
  const std::string head = "[experiment]\nbenchmark = distance\nd = 8\ns = 2\ninstance_seeds = 1\nrun_seeds = 1\n"
                           "budget = 10\neta_grid = 0.1\n";
  EXPECT_NO_THROW(parse_experiment_spec(head + "[grace]\n"));
  EXPECT_THROW(parse_experiment_spec(head), ParseError);                              // no methods
  EXPECT_THROW(parse_experiment_spec(head + "[adam]\n"), ParseError);                 // unknown method
  EXPECT_THROW(parse_experiment_spec(head + "[grace]\nmu = 1\n"), ParseError);        // key of another method
  EXPECT_THROW(parse_experiment_spec(head + "colour = red\n[grace]\n"), ParseError);  // unknown key
  EXPECT_THROW(parse_experiment_spec("[grace]\n"), ParseError);                       // no [experiment]
  EXPECT_THROW(parse_experiment_spec(head + "[grace]\n[grace]\n"), ParseError);
  EXPECT_THROW(parse_experiment_spec("[experiment]\nbenchmark = distance\ninstance_seeds = 1,,2\n"), ParseError);
  EXPECT_THROW(parse_experiment_spec("[experiment\n"), ParseError);
}

TEST(RunExperiment, CartesianAccounting) {
  const ExperimentResult r = run_experiment(small_spec(), {1});
  ASSERT_EQ(r.runs.size(), 4u);
  ASSERT_EQ(r.summary.size(), 1u);
  ASSERT_EQ(r.sweep.size(), 1u);
  EXPECT_EQ(r.summary[0].runs, 4u);
  EXPECT_FALSE(r.has_failures());
  for (const RunResult& run : r.runs)
    for (const TraceRow& row : run.trace.rows) EXPECT_LE(row.queries, 300u);
}

TEST(RunExperiment, SingleRunStatistics) {
  ExperimentSpec spec = small_spec();
  spec.instance_seeds = {5};
  spec.run_seeds = {6};
  const ExperimentResult r = run_experiment(spec, {1});
  ASSERT_EQ(r.runs.size(), 1u);
  EXPECT_EQ(r.summary[0].mean, r.runs[0].best_normalized());
  EXPECT_EQ(r.summary[0].median, r.runs[0].best_normalized());
  EXPECT_EQ(r.summary[0].se, 0.0);
}

TEST(RunExperiment, BestEtaHasSmallestMean) {
  ExperimentSpec spec = small_spec();
  spec.eta_grid = {0.5, 0.05, 0.005};
  const ExperimentResult r = run_experiment(spec, {2});
  ASSERT_EQ(r.sweep.size(), 3u);
  for (const SweepRow& row : r.sweep) EXPECT_LE(r.summary[0].mean, row.mean);
}

TEST(RunExperiment, ByteIdenticalAcrossRerunsAndJobCounts) {
  ExperimentSpec spec = small_spec();
  MethodSpec gld;
  gld.method = Method::gld;
  spec.methods.push_back(gld);
  spec.eta_grid = {0.5, 0.1};
  const ExperimentResult a = run_experiment(spec, {1});
  const ExperimentResult b = run_experiment(spec, {1});
  const ExperimentResult c = run_experiment(spec, {3});
  EXPECT_EQ(trace_csv(a), trace_csv(b));
  EXPECT_EQ(trace_csv(a), trace_csv(c));
  EXPECT_EQ(summary_csv(a), summary_csv(c));
  EXPECT_EQ(sweep_csv(a), sweep_csv(c));
}

TEST(RunExperiment, FailedRunsAreRecordedAndOthersProceed) {
  ExperimentSpec spec = small_spec();
  MethodSpec broken;
  broken.group_size = 100000;  // larger than d
  spec.methods.push_back(broken);
  const ExperimentResult r = run_experiment(spec, {2});
  EXPECT_TRUE(r.has_failures());
  std::size_t ok = 0, failed = 0;
  for (const RunResult& run : r.runs) (run.ok() ? ok : failed)++;
  EXPECT_EQ(ok, 4u);
  EXPECT_EQ(failed, 4u);
  EXPECT_NE(trace_csv(r).find(",failed: "), std::string::npos);
  EXPECT_EQ(r.summary[1].runs, 0u);
}

TEST(RunExperiment, AttackOnSampleGraph) {
  ExperimentSpec spec;
  spec.benchmark.family = Family::attack;
  spec.benchmark.graph_path = source_dir() + "/data/karate.edges";
  spec.benchmark.s = 30;
  spec.benchmark.u = 0;
  spec.benchmark.v = 1;
  spec.instance_seeds = {1};
  spec.run_seeds = {1};
  spec.budget = 400;
  spec.eta_grid = {0.1};
  spec.methods = {MethodSpec{}};
  const ExperimentResult r = run_experiment(spec, {1});
  ASSERT_TRUE(r.runs[0].ok()) << r.runs[0].error;
  EXPECT_LE(r.runs[0].best_normalized(), 1.0);
}

TEST(RunExperiment, UnreadableGraphFailsUpFront) {
  ExperimentSpec spec = small_spec();
  spec.benchmark.family = Family::attack;
  spec.benchmark.graph_path = "/nonexistent/graph.edges";
  EXPECT_ANY_THROW(run_experiment(spec, {1}));
}

TEST(Outputs, FilesAndLineEndings) {
  const ExperimentResult r = run_experiment(small_spec(), {1});
  const auto dir = std::filesystem::temp_directory_path() / "gracezo_unit_outputs";
  std::filesystem::remove_all(dir);
  write_experiment_outputs(r, dir);
  for (const char* name : {"trace.csv", "summary.csv", "sweep.csv"}) {
    const std::string text = read_file(dir / name);
    EXPECT_FALSE(text.empty());
    EXPECT_EQ(text.find('\r'), std::string::npos);
    EXPECT_EQ(text.back(), '\n');
  }
  EXPECT_EQ(read_file(dir / "trace.csv").substr(0, 10), "benchmark,");
  std::filesystem::remove_all(dir);
}

TEST(Outputs, DirectoryResolution) {
  ExperimentSpec spec = small_spec();
  ::setenv("GRACEZO_OUTPUT_DIR", "/tmp/base", 1);
  spec.output = "rel";
  EXPECT_EQ(resolve_output_dir(spec), std::filesystem::path("/tmp/base/rel"));
  spec.output = "/abs";
  EXPECT_EQ(resolve_output_dir(spec), std::filesystem::path("/abs"));
  spec.output.clear();
  EXPECT_EQ(resolve_output_dir(spec), std::filesystem::path("/tmp/base"));
  ::unsetenv("GRACEZO_OUTPUT_DIR");
  EXPECT_EQ(resolve_output_dir(spec), std::filesystem::path("gracezo-output"));
}

TEST(VerifyTheory, ReferencePasses) {
  const VerifyReport report = verify_theory();
  EXPECT_TRUE(report.all_pass()) << report.render();
  EXPECT_NE(report.render().find("PASS  C1"), std::string::npos);
}

TEST(VerifyTheory, WrongParametersFail) {
  TheoryParams p = reference_theory_params();
  p.D = 2;
  p.delta = 0.9;
  p.phi = 0.01;
  p.theta = 0.5;
  const VerifyReport report = verify_theory(p);
  EXPECT_FALSE(report.all_pass());
  EXPECT_NE(report.render().find("FAIL  C2"), std::string::npos);
  EXPECT_NE(report.render().find("FAIL  schedule condition 2"), std::string::npos);
}

TEST(ScalingProbe, Trends) {
  const auto by_d = query_scaling_probe({256, 1024, 4096, 16384}, {8}, 30);
  ASSERT_EQ(by_d.size(), 4u);
  // Per factor-4 step in d, growth shrinks relative to log d growth.
  EXPECT_LT(by_d[3].mean_queries, 1.5 * by_d[0].mean_queries);

  const auto by_s = query_scaling_probe({4096}, {4, 8, 16, 32}, 30);
  for (std::size_t i = 1; i < by_s.size(); ++i) {
    const double ratio = by_s[i].mean_queries / by_s[i - 1].mean_queries;
    EXPECT_GE(ratio, 1.5);
    EXPECT_LE(ratio, 2.5);
  }
}

TEST(ScalingProbe, FullSparsityUsesUnitGroups) {
  const auto rows = query_scaling_probe({16}, {16, 32}, 3);
  ASSERT_EQ(rows.size(), 1u);  // s > d skipped
  // n = 1: every group is a singleton, so no shrink queries; J = all 16 indices.
  EXPECT_EQ(rows[0].mean_queries, 17.0);
  EXPECT_TRUE(std::isnan(rows[0].predictor));
}

TEST(ScalingProbe, CsvAndCorrelation) {
  std::vector<ScalingRow> rows{{256, 4, 10, 1}, {256, 8, 20, 2}, {256, 16, 40, 4}};
  EXPECT_NEAR(scaling_correlation(rows), 1.0, 1e-12);
  EXPECT_EQ(scaling_csv(rows).substr(0, 17), "d,s,mean_queries,");
}
