#include "gracezo/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gracezo/errors.hpp"

namespace gracezo {

std::string to_string(Method method) {
  switch (method) {
    case Method::grace: return "grace";
    case Method::rs: return "rs";
    case Method::zo_signsgd: return "zo_signsgd";
    case Method::gld: return "gld";
  }
  throw std::invalid_argument("unknown method");
}

Method parse_method(const std::string& name) {
  if (name == "grace") return Method::grace;
  if (name == "rs") return Method::rs;
  if (name == "zo_signsgd" || name == "zo-signsgd") return Method::zo_signsgd;
  if (name == "gld") return Method::gld;
  throw std::invalid_argument("unknown method '" + name + "'");
}

double OptimizerConfig::epsilon_at(std::size_t t) const {
  if (epsilon_schedule.empty()) return epsilon;
  const std::size_t i = t == 0 ? 0 : t - 1;
  return epsilon_schedule[std::min(i, epsilon_schedule.size() - 1)];
}

void OptimizerConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be positive");
  if (budget && *budget == 0) throw std::invalid_argument("budget must be >= 1");
  if (!budget && !max_steps) throw std::invalid_argument("need a query budget or a step limit");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  for (double e : epsilon_schedule)
    if (!(e > 0.0)) throw std::invalid_argument("epsilon schedule values must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (batch < 1 || directions < 1) throw std::invalid_argument("batch and directions must be >= 1");
  if (gld_scales < 1) throw std::invalid_argument("gld scales must be >= 1");
}

double RunTrace::best_normalized() const {
  if (rows.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double f1 = rows.front().value;
  return f1 != 0.0 ? best_value / f1 : std::numeric_limits<double>::quiet_NaN();
}

namespace {

class TraceBuilder {
 public:
  TraceBuilder(const QueryLedger& ledger, std::span<const double> x1) : ledger_(ledger) {
    trace_.best_point.assign(x1.begin(), x1.end());
  }

  void record(std::size_t step, double value, std::span<const double> x) {
    if (trace_.rows.empty()) f1_ = value;
    const double normalized = f1_ != 0.0 ? value / f1_ : std::numeric_limits<double>::quiet_NaN();
    trace_.rows.push_back({step, ledger_.count, value, normalized});
    if (trace_.rows.size() == 1 || value < trace_.best_value) {
      trace_.best_value = value;
      trace_.best_step = step;
      trace_.best_point.assign(x.begin(), x.end());
    }
  }

  RunTrace finish(bool exhausted) {
    trace_.budget_exhausted = exhausted;
    return std::move(trace_);
  }

 private:
  const QueryLedger& ledger_;
  RunTrace trace_;
  double f1_ = 0.0;
};

bool more_steps(const OptimizerConfig& opt, std::size_t t) { return !opt.max_steps || t <= *opt.max_steps; }

// Shared loop: `advance` maps (x_t, f(x_t), t, stream) to x_{t+1} and, when it
// already knows it, f(x_{t+1}).
template <typename Advance>
RunTrace run_loop(const Objective& f, std::span<const double> x1, const OptimizerConfig& opt, const RngStream& rng,
                  Advance&& advance) {
  opt.validate();
  if (x1.size() != f.dimension()) throw std::invalid_argument("initial point has wrong dimension");
  CountedObjective counted = with_ledger(f, opt.budget);
  TraceBuilder trace(*counted.ledger, x1);
  std::vector<double> x(x1.begin(), x1.end());
  std::optional<double> known;
  try {
    for (std::size_t t = 1;; ++t) {
      const double fx = known ? *known : counted.objective(x);
      trace.record(t, fx, x);
      if (!more_steps(opt, t)) break;
      RngStream stream = rng.derive(t);
      known = advance(counted.objective, x, fx, t, stream);
    }
  } catch (const BudgetExhausted&) {
    return trace.finish(true);
  }
  return trace.finish(false);
}

}  // namespace

RunTrace zo_gd_grace(const Objective& f, std::span<const double> x1, const OptimizerConfig& opt,
                     const GraceConfig& grace, const RngStream& rng) {
  grace.validate(f.dimension());
  return run_loop(f, x1, opt, rng,
                  [&](const Objective& g, std::vector<double>& x, double fx, std::size_t t,
                      RngStream& stream) -> std::optional<double> {
                    GraceConfig cfg = grace;
                    cfg.epsilon = opt.epsilon_at(t);
                    const SparseGradient grad = grace_estimate(g, x, cfg, stream, fx);
                    for (const auto& [j, value] : grad.entries) x[j] -= opt.eta * value;
                    return std::nullopt;
                  });
}

RunTrace minimize(const Objective& f, std::span<const double> x1, const OptimizerConfig& opt,
                  const GraceConfig& grace, const RngStream& rng) {
  switch (opt.method) {
    case Method::grace:
      return zo_gd_grace(f, x1, opt, grace, rng);
    case Method::rs:
      return run_loop(f, x1, opt, rng,
                      [&](const Objective& g, std::vector<double>& x, double fx, std::size_t,
                          RngStream& stream) -> std::optional<double> {
                        const std::vector<double> est = estimate_rs(g, x, fx, opt.mu, stream);
                        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= opt.eta * est[i];
                        return std::nullopt;
                      });
    case Method::zo_signsgd:
      return run_loop(f, x1, opt, rng,
                      [&](const Objective& g, std::vector<double>& x, double fx, std::size_t,
                          RngStream& stream) -> std::optional<double> {
                        x = step_zo_signsgd(g, x, fx, opt.mu, opt.batch, opt.directions, opt.eta, stream);
                        return std::nullopt;
                      });
    case Method::gld:
      return run_loop(f, x1, opt, rng,
                      [&](const Objective& g, std::vector<double>& x, double fx, std::size_t,
                          RngStream& stream) -> std::optional<double> {
                        GldStep step = step_gld(g, x, fx, opt.eta, opt.gld_scales, stream);
                        x = std::move(step.point);
                        return step.value;
                      });
  }
  throw std::invalid_argument("unknown method");
}

std::vector<double> estimate_rs(const Objective& f, std::span<const double> x, double fx, double mu,
                                RngStream& rng) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  std::vector<double> u(x.size());
  for (double& ui : u) ui = rng.normal();
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t i = 0; i < probe.size(); ++i) probe[i] += mu * u[i];
  const double scale = (f(probe) - fx) / mu;
  for (double& ui : u) ui *= scale;
  return u;
}

std::vector<double> step_zo_signsgd(const Objective& f, std::span<const double> x, double fx, double mu,
                                    std::size_t batch, std::size_t directions, double eta, RngStream& rng) {
  if (batch < 1 || directions < 1) throw std::invalid_argument("batch and directions must be >= 1");
  std::vector<double> sum(x.size(), 0.0);
  for (std::size_t k = 0; k < directions; ++k) {
    const std::vector<double> est = estimate_rs(f, x, fx, mu, rng);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += est[i];
  }
  std::vector<double> next(x.begin(), x.end());
  for (std::size_t i = 0; i < next.size(); ++i) {
    const double sign = sum[i] > 0.0 ? 1.0 : (sum[i] < 0.0 ? -1.0 : 0.0);
    next[i] -= eta * sign;
  }
  return next;
}

GldStep step_gld(const Objective& f, std::span<const double> x, double fx, double eta, std::size_t scales,
                 RngStream& rng) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (scales < 1) throw std::invalid_argument("gld needs at least one scale");
  GldStep best{std::vector<double>(x.begin(), x.end()), fx};
  std::vector<double> z(x.size());
  std::vector<double> candidate(x.size());
  double radius = eta;
  for (std::size_t k = 0; k < scales; ++k, radius /= 2.0) {
    double norm = 0.0;
    for (double& zi : z) {
      zi = rng.normal();
      norm += zi * zi;
    }
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < x.size(); ++i) candidate[i] = x[i] + (norm > 0.0 ? radius * z[i] / norm : 0.0);
    const double value = f(candidate);
    if (value < best.value) {
      best.value = value;
      best.point = candidate;
    }
  }
  return best;
}

}  // namespace gracezo
