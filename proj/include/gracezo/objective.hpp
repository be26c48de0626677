#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>

namespace gracezo {

/// A d-dimensional real objective, evaluated only through operator().
/// Copies share the underlying callable.
class Objective {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  Objective() = default;
  Objective(std::size_t dimension, Fn fn);

  std::size_t dimension() const noexcept { return dimension_; }
  explicit operator bool() const noexcept { return static_cast<bool>(fn_); }

  /// Throws std::invalid_argument when x has the wrong length.
  double operator()(std::span<const double> x) const;

 private:
  std::size_t dimension_ = 0;
  std::shared_ptr<const Fn> fn_;
};

/// Number of evaluations made through a ledger-wrapped objective.
/// Owned by one run; not synchronized.
struct QueryLedger {
  std::uint64_t count = 0;
  std::optional<std::uint64_t> cap;

  std::optional<std::uint64_t> remaining() const {
    if (!cap) return std::nullopt;
    return *cap - count;
  }
};

struct CountedObjective {
  Objective objective;
  std::shared_ptr<QueryLedger> ledger;
};

/// Wraps f so that each evaluation increments the ledger. When a cap is set,
/// the evaluation that would make count exceed it throws BudgetExhausted
/// without calling f.
CountedObjective with_ledger(Objective f, std::optional<std::uint64_t> cap = std::nullopt);

}  // namespace gracezo
