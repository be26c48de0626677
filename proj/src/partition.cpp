#include "gracezo/partition.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

namespace gracezo {

bool Permutation::is_bijection() const {
  std::vector<bool> seen(images.size(), false);
  for (Index v : images) {
    if (v >= images.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Permutation random_permutation(std::size_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("random_permutation: n must be positive");
  Permutation perm;
  perm.images.resize(n);
  std::iota(perm.images.begin(), perm.images.end(), Index{0});
  // images[0..r) are fixed; the pool of unused values sits in images[r..n).
  for (std::size_t r = 0; r + 1 < n; ++r) {
    const auto pick = r + static_cast<std::size_t>(rng.uniform_below(n - r));
    std::swap(perm.images[r], perm.images[pick]);
  }
  return perm;
}

std::vector<IndexSet> partition_groups(std::size_t d, std::size_t n, const Permutation& omega) {
  if (n == 0 || n > d) throw std::invalid_argument("partition_groups: need 1 <= n <= d");
  if (omega.size() != d) throw std::invalid_argument("partition_groups: permutation size differs from d");
  const std::size_t count = (d + n - 1) / n;
  std::vector<IndexSet> groups(count);
  for (auto& g : groups) g.reserve(n);
  for (Index i = 0; i < d; ++i) groups[omega[i] / n].push_back(i);
  return groups;
}

IndexSet DependentPartition::block(std::size_t label) const {
  IndexSet out;
  for (std::size_t k = 0; k < members.size(); ++k)
    if (labels[k] == label) out.push_back(members[k]);
  return out;
}

DependentPartition dependent_partition(std::span<const Index> members, std::uint64_t divisor,
                                       RngStream& rng) {
  if (members.empty()) throw std::invalid_argument("dependent_partition: empty index set");
  if (divisor < 2) throw std::invalid_argument("dependent_partition: divisor must be >= 2");
  const std::size_t size = members.size();
  DependentPartition part;
  part.members.assign(members.begin(), members.end());
  part.block_size = static_cast<std::size_t>((size + divisor - 1) / divisor);
  part.label_count = (size + part.block_size - 1) / part.block_size;

  const Permutation order = random_permutation(size, rng);
  part.labels.resize(size);
  for (std::size_t k = 0; k < size; ++k)
    part.labels[k] = static_cast<std::uint32_t>(order[k] / part.block_size + 1);
  part.signs.resize(size);
  for (std::size_t k = 0; k < size; ++k) part.signs[k] = static_cast<std::int8_t>(rng.sign());
  return part;
}

}  // namespace gracezo
