#pragma once

// Random permutations and the two partition schemes used by the estimator.
//
// Indexing: the formulas this code follows are written with 1-based labels,
// e.g. group k = { i : ceil(omega(i) / n) = k }. Storage here is 0-based
// throughout: permutation images lie in [0, n), dimension indices in [0, d),
// and group k (0-based) = { i : omega(i) / n == k } with integer division,
// which is the same partition. Block labels of a DependentPartition are
// kept 1-based because their numeric value is encoded into queries.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gracezo/rng.hpp"

namespace gracezo {

using Index = std::size_t;
using IndexSet = std::vector<Index>;

/// A bijection of {0, ..., n-1}.
struct Permutation {
  std::vector<Index> images;

  std::size_t size() const noexcept { return images.size(); }
  Index operator[](Index i) const { return images[i]; }
  bool is_bijection() const;
};

/// Uniform permutation by sequential draws: position r receives a uniform
/// choice among the values not yet used (Fisher-Yates).
Permutation random_permutation(std::size_t n, RngStream& rng);

/// Splits {0..d-1} into ceil(d/n) groups of size n (the last one possibly
/// smaller) according to omega. Each group is returned in ascending order.
std::vector<IndexSet> partition_groups(std::size_t d, std::size_t n, const Permutation& omega);

/// Blocks of fixed size B = ceil(|S| / D) with random labels and signs.
/// `labels[k]` and `signs[k]` belong to `members[k]`.
struct DependentPartition {
  IndexSet members;
  std::size_t block_size = 0;
  std::size_t label_count = 0;  // ceil(|S| / B)
  std::vector<std::uint32_t> labels;
  std::vector<std::int8_t> signs;

  /// Indices whose label equals `label`, in member order.
  IndexSet block(std::size_t label) const;
};

/// Draws the permutation first, then one sign per member in member order.
DependentPartition dependent_partition(std::span<const Index> members, std::uint64_t divisor,
                                       RngStream& rng);

}  // namespace gracezo
