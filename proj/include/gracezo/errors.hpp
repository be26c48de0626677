#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gracezo {

/// Raised by a ledger-wrapped objective when one more query would exceed its cap.
/// Optimizers catch it and return the best point seen so far.
class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(std::size_t cap)
      : std::runtime_error("query budget of " + std::to_string(cap) + " exhausted"), cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

/// Attack objective: some row of the perturbed adjacency sums to zero.
class DegenerateDegree : public std::runtime_error {
 public:
  explicit DegenerateDegree(std::size_t vertex)
      : std::runtime_error("perturbed adjacency has zero degree at vertex " +
                           std::to_string(vertex + 1)),
        vertex_(vertex) {}
  std::size_t vertex() const noexcept { return vertex_; }

 private:
  std::size_t vertex_;
};

/// Text input (edge list, experiment spec) could not be parsed. `line` is 1-based, 0 if unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InfeasibleParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace gracezo
