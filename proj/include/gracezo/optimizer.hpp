#pragma once

// Zeroth-order gradient descent driven by the sparse estimator, and three
// full-gradient baselines under the same query accounting: every method
// knows f(x_t) when it estimates at x_t, and that value is what the trace
// records.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gracezo/estimator.hpp"
#include "gracezo/objective.hpp"
#include "gracezo/rng.hpp"

namespace gracezo {

enum class Method { grace, rs, zo_signsgd, gld };

std::string to_string(Method method);
/// Accepts grace, rs, zo_signsgd (or zo-signsgd), gld.
Method parse_method(const std::string& name);

struct OptimizerConfig {
  Method method = Method::grace;
  double eta = 0.1;
  /// Constant finite difference used when epsilon_schedule is empty.
  double epsilon = 1e-4;
  /// epsilon_t for t = 1, 2, ...; the last value repeats.
  std::vector<double> epsilon_schedule;
  std::optional<std::uint64_t> budget;
  std::optional<std::size_t> max_steps;

  double mu = 1e-4;             // rs, zo_signsgd smoothing radius
  std::size_t batch = 1;        // zo_signsgd b; a deterministic f makes it inert
  std::size_t directions = 10;  // zo_signsgd q
  std::size_t gld_scales = 4;   // gld K

  double epsilon_at(std::size_t t) const;
  /// Throws std::invalid_argument on eta <= 0, budget = 0, or no stopping rule.
  void validate() const;
};

struct TraceRow {
  std::size_t step = 0;
  std::uint64_t queries = 0;  // cumulative, including the query of f(x_step)
  double value = 0.0;
  double normalized = 0.0;  // value / f(x_1); NaN when f(x_1) = 0
};

struct RunTrace {
  std::vector<TraceRow> rows;
  std::vector<double> best_point;
  double best_value = 0.0;
  std::size_t best_step = 0;  // earliest step attaining best_value
  bool budget_exhausted = false;

  double best_normalized() const;
};

/// x_{t+1} = x_t - eta g_t with g_t from grace_estimate on stream rng.derive(t).
/// Only the support of g_t is touched.
RunTrace zo_gd_grace(const Objective& f, std::span<const double> x1, const OptimizerConfig& opt,
                     const GraceConfig& grace, const RngStream& rng);

/// Dispatches on opt.method. `grace` is only read for Method::grace.
RunTrace minimize(const Objective& f, std::span<const double> x1, const OptimizerConfig& opt,
                  const GraceConfig& grace, const RngStream& rng);

/// ((f(x + mu u) - f_x) / mu) u with u standard Gaussian; one query.
std::vector<double> estimate_rs(const Objective& f, std::span<const double> x, double fx, double mu,
                                RngStream& rng);

/// x - eta sign(mean of q RS estimates), sign(0) = 0; q queries.
std::vector<double> step_zo_signsgd(const Objective& f, std::span<const double> x, double fx, double mu,
                                    std::size_t batch, std::size_t directions, double eta, RngStream& rng);

struct GldStep {
  std::vector<double> point;
  double value = 0.0;
};

/// Candidates x + (eta / 2^k) z_k, z_k uniform on the unit sphere, k = 0..K-1;
/// returns the best of x and the candidates (x on ties). K queries.
GldStep step_gld(const Objective& f, std::span<const double> x, double fx, double eta, std::size_t scales,
                 RngStream& rng);

}  // namespace gracezo
