#include "gracezo/objective.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include "gracezo/errors.hpp"

namespace gracezo {

Objective::Objective(std::size_t dimension, Fn fn)
    : dimension_(dimension), fn_(std::make_shared<const Fn>(std::move(fn))) {
  if (dimension_ == 0) throw std::invalid_argument("objective dimension must be positive");
  if (!*fn_) throw std::invalid_argument("objective callable is empty");
}

double Objective::operator()(std::span<const double> x) const {
  if (x.size() != dimension_)
    throw std::invalid_argument("objective expects " + std::to_string(dimension_) +
                                " coordinates, got " + std::to_string(x.size()));
  return (*fn_)(x);
}

CountedObjective with_ledger(Objective f, std::optional<std::uint64_t> cap) {
  if (cap && *cap == 0) throw std::invalid_argument("query cap must be positive");
  auto ledger = std::make_shared<QueryLedger>();
  ledger->cap = cap;
  const std::size_t dim = f.dimension();
  Objective counted(dim, [inner = std::move(f), ledger](std::span<const double> x) {
    if (ledger->cap && ledger->count >= *ledger->cap) throw BudgetExhausted(*ledger->cap);
    ++ledger->count;
    return inner(x);
  });
  return {std::move(counted), std::move(ledger)};
}

}  // namespace gracezo
