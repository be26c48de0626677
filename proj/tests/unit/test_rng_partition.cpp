#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "gracezo/partition.hpp"
#include "gracezo/rng.hpp"

using namespace gracezo;

TEST(RngStream, SameSeedAndStreamReplay) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngStream, StreamsDiffer) {
  RngStream a(42, 0), b(42, 1);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) equal += a.next_u64() == b.next_u64();
  EXPECT_EQ(equal, 0);
}

TEST(RngStream, DerivedStreamsAreIndependentOfParentUse) {
  RngStream parent(3, 4);
  const RngStream before = parent.derive(9);
  for (int i = 0; i < 10; ++i) parent.next_u64();
  RngStream after = parent.derive(9);
  RngStream copy = before;
  for (int i = 0; i < 100; ++i) ASSERT_EQ(copy.next_u64(), after.next_u64());
}

TEST(RngStream, UniformBelowRangeAndSingleton) {
  RngStream rng(1);
  for (int i = 0; i < 10000; ++i) ASSERT_LT(rng.uniform_below(13), 13u);
  const auto draws = rng.draws();
  EXPECT_EQ(rng.uniform_below(1), 0u);
  EXPECT_EQ(rng.draws(), draws);
  EXPECT_THROW(rng.uniform_below(0), std::invalid_argument);
}

TEST(RngStream, NormalMoments) {
  RngStream rng(5);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.015);
}

TEST(RandomPermutation, RejectsZero) {
  RngStream rng(1);
  EXPECT_THROW(random_permutation(0, rng), std::invalid_argument);
}

TEST(RandomPermutation, SingleElement) {
  RngStream rng(1);
  EXPECT_EQ(random_permutation(1, rng).images, std::vector<Index>{0});
}

TEST(RandomPermutation, Deterministic) {
  RngStream a(11, 2), b(11, 2);
  EXPECT_EQ(random_permutation(5, a).images, random_permutation(5, b).images);
}

TEST(RandomPermutation, FixedDrawCount) {
  RngStream rng(8);
  random_permutation(10, rng);
  EXPECT_EQ(rng.draws(), 9u);
}

TEST(RandomPermutation, UniformOverS3) {
  // Oracle: the 6 elements of S3 by exhaustive enumeration.
  std::map<std::vector<Index>, int> counts;
  std::vector<Index> p{0, 1, 2};
  do counts[p] = 0;
  while (std::next_permutation(p.begin(), p.end()));
  ASSERT_EQ(counts.size(), 6u);

  RngStream rng(2024);
  const int samples = 60000;
  for (int i = 0; i < samples; ++i) {
    auto perm = random_permutation(3, rng);
    ASSERT_TRUE(perm.is_bijection());
    ASSERT_TRUE(counts.count(perm.images));
    ++counts[perm.images];
  }
  double chi2 = 0.0;
  const double expected = samples / 6.0;
  for (const auto& [perm, c] : counts) {
    EXPECT_NEAR(c / static_cast<double>(samples), 1.0 / 6.0, 0.01);
    chi2 += (c - expected) * (c - expected) / expected;
  }
  EXPECT_LT(chi2, 20.52);  // chi-square, 5 degrees of freedom, p = 0.001
}

TEST(PartitionGroups, IdentityExample) {
  Permutation id{{0, 1, 2, 3, 4}};
  const auto groups = partition_groups(5, 2, id);
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[0], (IndexSet{0, 1}));
  EXPECT_EQ(groups[1], (IndexSet{2, 3}));
  EXPECT_EQ(groups[2], (IndexSet{4}));
}

TEST(PartitionGroups, SingleGroup) {
  RngStream rng(3);
  const auto groups = partition_groups(4, 4, random_permutation(4, rng));
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0], (IndexSet{0, 1, 2, 3}));
}

TEST(PartitionGroups, RejectsBadSizes) {
  Permutation id{{0, 1, 2}};
  EXPECT_THROW(partition_groups(3, 0, id), std::invalid_argument);
  EXPECT_THROW(partition_groups(3, 4, id), std::invalid_argument);
  EXPECT_THROW(partition_groups(4, 2, id), std::invalid_argument);
}

TEST(PartitionGroups, DisjointCoverWithExpectedSizes) {
  RngStream rng(99);
  for (std::size_t d = 1; d <= 512; d += (d < 40 ? 1 : 37)) {
    for (std::size_t n : {std::size_t{1}, std::size_t{2}, d / 3 + 1, d}) {
      if (n > d) continue;
      const auto groups = partition_groups(d, n, random_permutation(d, rng));
      const std::size_t k = (d + n - 1) / n;
      ASSERT_EQ(groups.size(), k);
      std::vector<int> seen(d, 0);
      for (std::size_t g = 0; g < k; ++g) {
        ASSERT_EQ(groups[g].size(), g + 1 < k ? n : d - n * (k - 1));
        for (Index i : groups[g]) ++seen[i];
      }
      ASSERT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    }
  }
}

namespace {

std::vector<std::size_t> class_sizes(const DependentPartition& p) {
  std::vector<std::size_t> sizes(p.label_count, 0);
  for (auto h : p.labels) ++sizes.at(h - 1);
  return sizes;
}

}  // namespace

TEST(DependentPartition, FourByTwo) {
  RngStream rng(1);
  IndexSet S{0, 1, 2, 3};
  const auto p = dependent_partition(S, 2, rng);
  EXPECT_EQ(p.block_size, 2u);
  EXPECT_EQ(class_sizes(p), (std::vector<std::size_t>{2, 2}));
}

TEST(DependentPartition, Singleton) {
  RngStream rng(1);
  IndexSet S{6};
  const auto p = dependent_partition(S, 2, rng);
  EXPECT_EQ(p.block_size, 1u);
  EXPECT_EQ(p.labels, std::vector<std::uint32_t>{1});
  EXPECT_TRUE(p.signs[0] == 1 || p.signs[0] == -1);
}

TEST(DependentPartition, TenByFour) {
  RngStream rng(5);
  IndexSet S(10);
  std::iota(S.begin(), S.end(), Index{0});
  const auto p = dependent_partition(S, 4, rng);
  EXPECT_EQ(p.block_size, 3u);
  EXPECT_EQ(class_sizes(p), (std::vector<std::size_t>{3, 3, 3, 1}));
}

TEST(DependentPartition, RejectsBadInput) {
  RngStream rng(1);
  IndexSet empty, two{0, 1};
  EXPECT_THROW(dependent_partition(empty, 2, rng), std::invalid_argument);
  EXPECT_THROW(dependent_partition(two, 1, rng), std::invalid_argument);
}

TEST(DependentPartition, InvariantsOnRandomInputs) {
  RngStream rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t size = 1 + rng.uniform_below(300);
    const std::uint64_t D = 2 + rng.uniform_below(400);
    IndexSet S(size);
    for (std::size_t i = 0; i < size; ++i) S[i] = 3 * i + 1;
    const auto p = dependent_partition(S, D, rng);
    ASSERT_EQ(p.block_size, (size + D - 1) / D);
    ASSERT_LE(p.label_count, D);
    const auto sizes = class_sizes(p);
    for (std::size_t l = 0; l < sizes.size(); ++l) {
      ASSERT_LE(sizes[l], p.block_size);
      if (l + 1 < sizes.size()) ASSERT_EQ(sizes[l], p.block_size);
      ASSERT_EQ(p.block(l + 1).size(), sizes[l]);
    }
  }
}

TEST(DependentPartition, SignsAreBalanced) {
  RngStream rng(8);
  IndexSet S(1000);
  std::iota(S.begin(), S.end(), Index{0});
  long long total = 0;
  for (int t = 0; t < 20; ++t)
    for (auto s : dependent_partition(S, 3, rng).signs) total += s;
  EXPECT_LT(std::abs(total), 600);  // 20000 fair signs: sd ~ 141
}
