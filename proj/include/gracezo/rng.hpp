#pragma once

#include <cstdint>
#include <limits>

namespace gracezo {

/// Counter-based random stream. The output sequence is a pure function of
/// (seed, stream id), so runs replay bit-for-bit and derived streams never
/// share state with their parent.
///
/// All distributions (uniform integer, uniform real, sign, Gaussian) are
/// implemented here rather than through <random> distributions, whose
/// algorithms differ between standard libraries.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t draws() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept;
  std::uint64_t operator()() noexcept { return next_u64(); }
  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return std::numeric_limits<std::uint64_t>::max(); }

  /// Unbiased integer in [0, n). n must be positive.
  std::uint64_t uniform_below(std::uint64_t n);
  /// Real in [0, 1) with 53 random bits.
  double uniform01() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }
  /// +1 or -1 with equal probability.
  int sign() noexcept;
  double normal() noexcept;

  /// Independent child stream, e.g. one per optimization step or per repeat.
  RngStream derive(std::uint64_t id) const noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace gracezo
