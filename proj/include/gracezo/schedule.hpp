#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gracezo {

/// Per-iteration divisors D_1, D_2, ... for the shrinking loop.
///
/// practical:   D_{r+1} = floor(D_r^{3/2}), computed as isqrt(D_r^3).
/// explicit:    a given list; the last value repeats past its end.
/// theoretical: a precomputed list from theoretical_schedule(); repeats likewise.
///
/// Values saturate at kMaxDivisor. The estimator caps divisors at the
/// current group size, so saturation never changes its behaviour.
class DivisionSchedule {
 public:
  enum class Kind { practical, theoretical, explicit_list };
  static constexpr std::uint64_t kMaxDivisor = std::uint64_t{1} << 40;

  static DivisionSchedule practical(std::uint64_t first);
  static DivisionSchedule from_values(std::vector<std::uint64_t> values,
                                      Kind kind = Kind::explicit_list);

  Kind kind() const noexcept { return kind_; }
  std::uint64_t first() const noexcept { return values_.front(); }

  /// D_r for r >= 1.
  std::uint64_t at(std::size_t r) const;
  std::vector<std::uint64_t> prefix(std::size_t count) const;

  friend bool operator==(const DivisionSchedule&, const DivisionSchedule&) = default;

 private:
  DivisionSchedule(Kind kind, std::vector<std::uint64_t> values) : kind_(kind), values_(std::move(values)) {}

  Kind kind_;
  std::vector<std::uint64_t> values_;
};

/// floor(sqrt(n)) exactly.
std::uint64_t isqrt(unsigned __int128 n);
/// floor(D^{3/2}) exactly, saturating at DivisionSchedule::kMaxDivisor.
std::uint64_t floor_pow_three_halves(std::uint64_t divisor);

}  // namespace gracezo
