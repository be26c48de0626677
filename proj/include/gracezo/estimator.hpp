#pragma once

// Sparse gradient estimation by adaptive compressed sensing.
//
// The d coordinates are split into groups of size n by a random permutation.
// Inside each group the coordinate with a dominant partial derivative is
// located by repeated shrink steps: the group is cut into labelled blocks,
// and two queries along signed perturbations u (weights sigma_i) and
// v (weights sigma_i * label_i) give a ratio whose rounding is the label of
// the dominant coordinate's block. Survivors of all groups form the
// candidate set J, and each j in J gets a forward difference.
//
// Query accounting for one grace_estimate call:
//   1 (f(x), unless supplied) + 2 per shrink step + 1 per candidate.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gracezo/objective.hpp"
#include "gracezo/partition.hpp"
#include "gracezo/rng.hpp"
#include "gracezo/schedule.hpp"

namespace gracezo {

struct GraceConfig {
  std::size_t sparsity = 1;
  double epsilon = 1e-4;
  std::size_t repeats = 1;     // m
  std::size_t group_size = 1;  // n
  DivisionSchedule schedule = DivisionSchedule::practical(20);
  std::size_t stop_size = 2;
  /// 0 selects 4 + ceil(log2 log2 max(|S|, 4)) + 8 per group.
  std::size_t max_shrink_iterations = 0;

  /// m = 1, n = max(1, floor(0.7 d / s)) clamped to d, practical schedule from D_1.
  static GraceConfig defaults(std::size_t d, std::size_t s, double epsilon,
                              std::uint64_t first_divisor = 20);

  /// Throws std::invalid_argument unless the config is usable in dimension d.
  void validate(std::size_t d) const;
};

/// Default safeguard on shrink iterations for a group of the given size.
std::size_t default_max_shrink_iterations(std::size_t group_size);

struct SparseGradient {
  std::size_t dimension = 0;
  std::vector<std::pair<Index, double>> entries;  // sorted by index; the candidate set J
  std::uint64_t queries_used = 0;
  double value_at_point = 0.0;  // f(x)

  double operator[](Index i) const;
  IndexSet support() const;
  std::vector<double> dense() const;
};

struct ShrinkOutcome {
  IndexSet survivors;
  long long label = 0;  // rounded ratio; meaningful only when not degenerate
  bool degenerate = false;
};

/// One shrink step on S (|S| >= 2) with divisor D >= 2: exactly two queries,
/// f(x + v) then f(x + u). Degenerate (empty survivors) when
/// |f(x+u) - f(x)| < 1e-12 * max(1, |f(x)|) or the rounded ratio is not a
/// valid block label.
ShrinkOutcome shrink_step(const Objective& f, std::span<const double> x, double fx, double epsilon,
                          std::span<const Index> members, std::uint64_t divisor, RngStream& rng);

struct LocateResult {
  IndexSet candidates;
  std::uint64_t queries = 0;
  std::size_t iterations = 0;
};

/// Shrinks S with D = clamp(schedule(r), 2, |S|) at iteration r until
/// |S| <= stop_size, S is empty, or max_iterations is hit; in the last case
/// the stop_size smallest indices of S are kept.
LocateResult locate_in_group(const Objective& f, std::span<const double> x, double fx, double epsilon,
                             std::span<const Index> members, const DivisionSchedule& schedule,
                             std::size_t stop_size, std::size_t max_iterations, RngStream& rng);

/// (f(x + eps e_j) - f(x)) / eps with one query.
double finite_difference(const Objective& f, std::span<const double> x, double fx, Index j,
                         double epsilon);

/// Full estimator. When `known_fx` is given it is used as f(x) and not
/// re-queried (and not counted in queries_used).
SparseGradient grace_estimate(const Objective& f, std::span<const double> x, const GraceConfig& config,
                              RngStream& rng, std::optional<double> known_fx = std::nullopt);

}  // namespace gracezo
