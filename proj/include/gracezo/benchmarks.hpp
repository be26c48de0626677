#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gracezo/graph.hpp"
#include "gracezo/objective.hpp"
#include "gracezo/partition.hpp"
#include "gracezo/rng.hpp"

namespace gracezo {

enum class Family { distance, magnitude, attack, planted_linear };

std::string to_string(Family family);
Family parse_family(const std::string& name);

/// Everything needed to rebuild a benchmark instance exactly.
/// `u` and `v` are 0-based here and 1-based in the text form.
struct InstanceSpec {
  Family family = Family::distance;
  std::size_t d = 0;  // attack: derived from the graph (n*n)
  std::size_t s = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::optional<double> lambda;  // magnitude: 0.1, attack: 100 / n^2
  double w = 0.2;
  std::string graph_path;
  std::size_t u = 0;
  std::size_t v = 1;
  std::size_t hops = 4;
  double coeff_lo = 0.5;
  double coeff_hi = 1.5;

  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

/// "key = value" lines; doubles use 17 significant digits.
std::string serialize_instance_spec(const InstanceSpec& spec);
InstanceSpec parse_instance_spec(const std::string& text);

struct BenchmarkInstance {
  Objective objective;
  std::vector<double> initial_point;
  InstanceSpec spec;
  IndexSet support;  // planted support (distance, planted_linear) or initial support (magnitude)
  /// Analytic gradient where the family has a simple one; empty otherwise.
  std::function<std::vector<double>(std::span<const double>)> gradient;
};

/// f(x) = (x - c)^T diag(w) (x - c) with c s-sparse on a uniform random
/// support. Draw order: support permutation, the s center values, then all d
/// weights, each Unif(0,1). x1 = 0.
BenchmarkInstance make_distance(std::size_t d, std::size_t s, RngStream& rng);

/// f(x) = lambda * sum_{i>s} tanh(x_(i)^2) - sum_{i<=s} tanh(x_(i)^2) + s,
/// x_(i) the i-th largest magnitude. x1 has +-w on a uniform random s-subset.
BenchmarkInstance make_magnitude(std::size_t d, std::size_t s, double lambda, double w,
                                 RngStream& rng);

/// Connectivity between u and v after perturbing the adjacency by X (n x n,
/// row-major in the point). Evaluation throws DegenerateDegree if a row of
/// the perturbed adjacency sums to zero.
BenchmarkInstance make_attack(const Graph& graph, std::size_t u, std::size_t v, std::size_t hops,
                              double lambda);

/// f(x) = sum_j coeffs[j] * x_j.
BenchmarkInstance make_sparse_linear(std::size_t d, const std::map<Index, double>& coeffs);

/// Sparse linear objective on a uniform random s-subset with Unif(lo, hi) coefficients.
BenchmarkInstance make_planted_linear(std::size_t d, std::size_t s, double lo, double hi,
                                      RngStream& rng);

/// Rebuilds an instance from its spec. Attack specs read graph_path.
BenchmarkInstance instantiate(const InstanceSpec& spec);

/// Maps DegenerateDegree to +infinity so that minimizers treat the query as
/// infeasible instead of aborting.
Objective infinite_on_degenerate(Objective f);

}  // namespace gracezo
