#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "gracezo/benchmarks.hpp"
#include "gracezo/errors.hpp"
#include "gracezo/estimator.hpp"

using namespace gracezo;

namespace {

Objective linear(std::size_t d, Index j, double c) { return make_sparse_linear(d, {{j, c}}).objective; }

Objective constant(std::size_t d, double value) {
  return Objective(d, [value](std::span<const double>) { return value; });
}

IndexSet iota_set(std::size_t n) {
  IndexSet s(n);
  std::iota(s.begin(), s.end(), Index{0});
  return s;
}

bool contains(const IndexSet& s, Index i) { return std::find(s.begin(), s.end(), i) != s.end(); }

}  // namespace

TEST(ShrinkStep, SingletonBlocksRecoverTheLabelExactly) {
  // f = 3 x_2 (index 1 here); with D = |S| = 4, B = 1 and the ratio is h_2.
  const Objective f = linear(4, 1, 3.0);
  const std::vector<double> x(4, 0.0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RngStream rng(seed);
    auto counted = with_ledger(f);
    const ShrinkOutcome out = shrink_step(counted.objective, x, 0.0, 1e-3, iota_set(4), 4, rng);
    ASSERT_FALSE(out.degenerate);
    ASSERT_EQ(out.survivors, IndexSet{1});
    ASSERT_EQ(counted.ledger->count, 2u);
  }
}

TEST(ShrinkStep, PairBlocksKeepTheClassOfTheCoordinate) {
  const Objective f = linear(4, 2, 5.0);
  const std::vector<double> x(4, 0.0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RngStream rng(seed);
    const ShrinkOutcome out = shrink_step(f, x, 0.0, 1e-3, iota_set(4), 2, rng);
    ASSERT_FALSE(out.degenerate);
    ASSERT_EQ(out.survivors.size(), 2u);
    ASSERT_TRUE(contains(out.survivors, 2));
  }
}

TEST(ShrinkStep, ConstantFunctionIsDegenerate) {
  RngStream rng(1);
  const std::vector<double> x(6, 0.0);
  const ShrinkOutcome out = shrink_step(constant(6, 2.0), x, 2.0, 1e-3, iota_set(6), 3, rng);
  EXPECT_TRUE(out.degenerate);
  EXPECT_TRUE(out.survivors.empty());
}

TEST(ShrinkStep, OutOfRangeLabelIsDegenerate) {
  // f(x+v) - f(x) far larger than f(x+u) - f(x) pushes the ratio past the last label.
  Objective f(4, [](std::span<const double> x) {
    double s = 0;
    for (double v : x) s += std::abs(v);
    return s > 0.0005 ? 1.0 : s;  // |u|_1 = 4e-4, |v|_1 = 6e-4
  });
  RngStream rng(3);
  const std::vector<double> x(4, 0.0);
  const ShrinkOutcome out = shrink_step(f, x, 0.0, 1e-4, iota_set(4), 2, rng);
  EXPECT_TRUE(out.degenerate);
  EXPECT_TRUE(out.survivors.empty());
}

TEST(ShrinkStep, RejectsBadInput) {
  RngStream rng(1);
  const std::vector<double> x(4, 0.0);
  EXPECT_THROW(shrink_step(linear(4, 0, 1), x, 0, 1e-3, IndexSet{0}, 2, rng), std::invalid_argument);
  EXPECT_THROW(shrink_step(linear(4, 0, 1), x, 0, 1e-3, iota_set(4), 1, rng), std::invalid_argument);
}

TEST(ShrinkStep, ProgressBoundOnRandomLinearGroups) {
  RngStream meta(21);
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = 2 + meta.uniform_below(200);
    std::map<Index, double> coeffs;
    for (int k = 0; k < 3; ++k) coeffs[meta.uniform_below(d)] = meta.uniform(-2, 2);
    const Objective f = make_sparse_linear(d, coeffs).objective;
    const std::uint64_t D = 2 + meta.uniform_below(d);
    const std::vector<double> x(d, 0.0);
    const ShrinkOutcome out = shrink_step(f, x, 0.0, 1e-3, iota_set(d), D, meta);
    if (!out.degenerate) {
      ASSERT_LE(out.survivors.size(), (d + D - 1) / D);
      ASSERT_LT(out.survivors.size(), d);
    }
  }
}

TEST(LocateInGroup, SingletonNeedsNoQueries) {
  RngStream rng(1);
  auto counted = with_ledger(linear(3, 0, 1.0));
  const std::vector<double> x(3, 0.0);
  const auto r = locate_in_group(counted.objective, x, 0.0, 1e-3, IndexSet{2}, DivisionSchedule::practical(20), 2,
                                 16, rng);
  EXPECT_EQ(r.candidates, IndexSet{2});
  EXPECT_EQ(r.queries, 0u);
  EXPECT_EQ(counted.ledger->count, 0u);
}

TEST(LocateInGroup, FindsTheLinearCoordinate) {
  const Objective f = linear(8, 1, 3.0);
  const std::vector<double> x(8, 0.0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RngStream rng(seed);
    const auto r = locate_in_group(f, x, 0.0, 1e-3, iota_set(8), DivisionSchedule::practical(20), 2, 16, rng);
    ASSERT_TRUE(contains(r.candidates, 1));
    ASSERT_LE(r.iterations, 3u);
    ASSERT_EQ(r.queries, 2 * r.iterations);
  }
}

TEST(LocateInGroup, DegenerateFirstStepEmptiesTheGroup) {
  RngStream rng(1);
  const std::vector<double> x(8, 0.0);
  const auto r = locate_in_group(constant(8, 1.0), x, 1.0, 1e-3, iota_set(8), DivisionSchedule::practical(20), 2,
                                 16, rng);
  EXPECT_TRUE(r.candidates.empty());
  EXPECT_EQ(r.queries, 2u);
}

TEST(LocateInGroup, IterationCapKeepsSmallestIndices) {
  // D = 2 halves the group each step; one step on 16 leaves 8 > stop size.
  const Objective f = linear(16, 9, 1.0);
  const std::vector<double> x(16, 0.0);
  RngStream rng(4);
  const auto r = locate_in_group(f, x, 0.0, 1e-3, iota_set(16), DivisionSchedule::from_values({2}), 2, 1, rng);
  EXPECT_EQ(r.iterations, 1u);
  ASSERT_EQ(r.candidates.size(), 2u);
  EXPECT_LT(r.candidates[0], r.candidates[1]);
}

TEST(GraceEstimate, HandTraceOnFourDimensions) {
  const Objective f = linear(4, 1, 3.0);
  GraceConfig cfg;
  cfg.sparsity = 1;
  cfg.epsilon = 1e-3;
  cfg.group_size = 4;
  cfg.schedule = DivisionSchedule::practical(4);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng(seed);
    const std::vector<double> x(4, 0.0);
    const SparseGradient g = grace_estimate(f, x, cfg, rng);
    ASSERT_EQ(g.support(), IndexSet{1});
    ASSERT_NEAR(g[1], 3.0, 1e-9);
    ASSERT_EQ(g.queries_used, 4u);
  }
}

TEST(GraceEstimate, ZeroFunctionGivesEmptyEstimate) {
  RngStream rng(1);
  const GraceConfig cfg = GraceConfig::defaults(64, 4, 1e-3);
  const SparseGradient g = grace_estimate(constant(64, 0.0), std::vector<double>(64, 0.0), cfg, rng);
  EXPECT_TRUE(g.entries.empty());
  EXPECT_EQ(g.dense(), std::vector<double>(64, 0.0));
  EXPECT_EQ(g[17], 0.0);
}

TEST(GraceEstimate, KnownValueIsNotQueried) {
  const Objective f = linear(32, 5, 2.0);
  GraceConfig cfg = GraceConfig::defaults(32, 2, 1e-3);
  RngStream a(9), b(9);
  auto counted = with_ledger(f);
  const std::vector<double> x(32, 0.0);
  const SparseGradient with = grace_estimate(counted.objective, x, cfg, a, 0.0);
  EXPECT_EQ(with.queries_used, counted.ledger->count);
  const SparseGradient without = grace_estimate(f, x, cfg, b);
  EXPECT_EQ(without.queries_used, with.queries_used + 1);
  EXPECT_EQ(without.entries, with.entries);
}

TEST(GraceEstimate, QueriesMatchLedgerAndSupportBound) {
  RngStream meta(5);
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = 1 + meta.uniform_below(300);
    const std::size_t s = 1 + meta.uniform_below(std::min<std::size_t>(d, 12));
    RngStream inst_rng(t);
    const auto inst = t % 2 ? make_planted_linear(d, s, 0.5, 1.5, inst_rng) : make_distance(d, s, inst_rng);
    GraceConfig cfg = GraceConfig::defaults(d, s, std::pow(10.0, -1.0 - static_cast<double>(meta.uniform_below(5))),
                                            2 + meta.uniform_below(30));
    cfg.repeats = 1 + meta.uniform_below(3);
    cfg.group_size = 1 + meta.uniform_below(d);
    cfg.stop_size = 1 + meta.uniform_below(3);
    auto counted = with_ledger(inst.objective);
    RngStream rng(1000 + t);
    const SparseGradient g = grace_estimate(counted.objective, inst.initial_point, cfg, rng);
    ASSERT_EQ(g.queries_used, counted.ledger->count);
    const std::size_t groups = (d + cfg.group_size - 1) / cfg.group_size;
    ASSERT_LE(g.entries.size(), cfg.stop_size * cfg.repeats * groups);
    ASSERT_TRUE(std::is_sorted(g.entries.begin(), g.entries.end()));
  }
}

TEST(GraceEstimate, OneSparseLinearAlwaysRecovered) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RngStream rng(seed);
    const std::size_t d = 50 + rng.uniform_below(400);
    const Index j = rng.uniform_below(d);
    const double c = rng.uniform(0.1, 5) * (rng.sign());
    const GraceConfig cfg = GraceConfig::defaults(d, 1, 1e-3);
    const SparseGradient g = grace_estimate(linear(d, j, c), std::vector<double>(d, 0.0), cfg, rng);
    ASSERT_TRUE(contains(g.support(), j));
    ASSERT_NEAR(g[j], c, 1e-9);
  }
}

TEST(GraceEstimate, BudgetExhaustionPropagates) {
  auto counted = with_ledger(linear(64, 3, 1.0), 3);
  RngStream rng(1);
  EXPECT_THROW(grace_estimate(counted.objective, std::vector<double>(64, 0.0), GraceConfig::defaults(64, 1, 1e-3), rng),
               BudgetExhausted);
}

TEST(GraceConfig, DefaultsAndValidation) {
  const GraceConfig cfg = GraceConfig::defaults(1024, 10, 1e-4);
  EXPECT_EQ(cfg.group_size, 71u);  // floor(716.8 / 10)
  EXPECT_EQ(cfg.repeats, 1u);
  EXPECT_EQ(cfg.schedule.prefix(2), (std::vector<std::uint64_t>{20, 89}));
  EXPECT_EQ(GraceConfig::defaults(8, 8, 1e-3).group_size, 1u);
  GraceConfig bad = cfg;
  bad.group_size = 2000;
  EXPECT_THROW(bad.validate(1024), std::invalid_argument);
  bad = cfg;
  bad.epsilon = 0;
  EXPECT_THROW(bad.validate(1024), std::invalid_argument);
  bad = cfg;
  bad.repeats = 0;
  EXPECT_THROW(bad.validate(1024), std::invalid_argument);
  EXPECT_EQ(default_max_shrink_iterations(4), 13u);
  EXPECT_EQ(default_max_shrink_iterations(1), 13u);
  EXPECT_EQ(default_max_shrink_iterations(300), 16u);  // ceil(log2 log2 300) = ceil(3.04) = 4
}

TEST(FiniteDifference, Examples) {
  const std::vector<double> x(3, 0.0);
  EXPECT_DOUBLE_EQ(finite_difference(linear(3, 1, 3.0), x, 0.0, 1, 0.125), 3.0);
  Objective sq(3, [](std::span<const double> p) { return p[1] * p[1]; });
  EXPECT_NEAR(finite_difference(sq, x, 0.0, 1, 0.1), 0.1, 1e-15);
  EXPECT_THROW(finite_difference(sq, x, 0.0, 3, 0.1), std::invalid_argument);
}

TEST(FiniteDifference, DistanceAtOrigin) {
  RngStream rng(31);
  const auto inst = make_distance(16, 3, rng);
  const std::vector<double> zero(16, 0.0);
  const auto g0 = inst.gradient(zero);
  const double eps = 1e-3;
  for (Index j : inst.support) {
    std::vector<double> e(16, 0.0);
    e[j] = 1.0;
    const double w = (inst.gradient(e)[j] - g0[j]) / 2.0;  // gradient is 2 W (x - c)
    const double c = -g0[j] / (2.0 * w);
    EXPECT_NEAR(finite_difference(inst.objective, zero, inst.objective(zero), j, eps), -2 * w * c + w * eps, 1e-9);
  }
}
