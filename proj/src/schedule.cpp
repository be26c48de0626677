#include "gracezo/schedule.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace gracezo {

std::uint64_t isqrt(unsigned __int128 n) {
  // Bitwise square root; exact for the full 128-bit range.
  unsigned __int128 result = 0;
  unsigned __int128 bit = static_cast<unsigned __int128>(1) << 126;
  while (bit > n) bit >>= 2;
  while (bit != 0) {
    if (n >= result + bit) {
      n -= result + bit;
      result = (result >> 1) + bit;
    } else {
      result >>= 1;
    }
    bit >>= 2;
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t floor_pow_three_halves(std::uint64_t divisor) {
  if (divisor >= DivisionSchedule::kMaxDivisor) return DivisionSchedule::kMaxDivisor;
  const auto d = static_cast<unsigned __int128>(divisor);
  const std::uint64_t value = isqrt(d * d * d);
  return value > DivisionSchedule::kMaxDivisor ? DivisionSchedule::kMaxDivisor : value;
}

DivisionSchedule DivisionSchedule::practical(std::uint64_t first) {
  if (first < 2) throw std::invalid_argument("practical schedule needs D_1 >= 2");
  std::vector<std::uint64_t> values{std::min(first, kMaxDivisor)};
  // Growth is doubly exponential, so this reaches the cap within a few dozen terms
  // unless it stalls at 2.
  while (values.back() < kMaxDivisor && values.size() < 64) {
    const std::uint64_t next = floor_pow_three_halves(values.back());
    if (next == values.back()) break;
    values.push_back(next);
  }
  return DivisionSchedule(Kind::practical, std::move(values));
}

DivisionSchedule DivisionSchedule::from_values(std::vector<std::uint64_t> values, Kind kind) {
  if (values.empty()) throw std::invalid_argument("division schedule needs at least one value");
  for (auto& v : values) {
    if (v < 2) throw std::invalid_argument("division schedule values must be >= 2");
    v = std::min(v, kMaxDivisor);
  }
  return DivisionSchedule(kind, std::move(values));
}

std::uint64_t DivisionSchedule::at(std::size_t r) const {
  if (r == 0) throw std::out_of_range("division schedule is indexed from r = 1");
  return r <= values_.size() ? values_[r - 1] : values_.back();
}

std::vector<std::uint64_t> DivisionSchedule::prefix(std::size_t count) const {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::size_t r = 1; r <= count; ++r) out.push_back(at(r));
  return out;
}

}  // namespace gracezo
