#include "gracezo/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace gracezo {

namespace {

/// Copy of x that is perturbed on a few coordinates for one query and then
/// restored, so a query costs O(|S|) on top of the objective itself.
class ScratchPoint {
 public:
  explicit ScratchPoint(std::span<const double> x) : base_(x), work_(x.begin(), x.end()) {}

  template <typename Delta>
  double eval(const Objective& f, std::span<const Index> members, Delta&& delta) {
    for (std::size_t k = 0; k < members.size(); ++k) work_[members[k]] = base_[members[k]] + delta(k);
    struct Restore {
      ScratchPoint& self;
      std::span<const Index> idx;
      ~Restore() {
        for (Index i : idx) self.work_[i] = self.base_[i];
      }
    } restore{*this, members};
    return f(work_);
  }

  double eval_axis(const Objective& f, Index j, double step) {
    const Index idx[1] = {j};
    return eval(f, idx, [step](std::size_t) { return step; });
  }

 private:
  std::span<const double> base_;
  std::vector<double> work_;
};

ShrinkOutcome shrink_with(ScratchPoint& point, const Objective& f, double fx, double epsilon,
                          std::span<const Index> members, std::uint64_t divisor, RngStream& rng) {
  const DependentPartition part = dependent_partition(members, divisor, rng);
  const double f_v = point.eval(f, members, [&](std::size_t k) {
    return epsilon * part.signs[k] * static_cast<double>(part.labels[k]);
  });
  const double f_u = point.eval(f, members, [&](std::size_t k) { return epsilon * part.signs[k]; });

  ShrinkOutcome out;
  const double denominator = f_u - fx;
  const double tolerance = 1e-12 * std::max(1.0, std::abs(fx));
  if (!(std::abs(denominator) >= tolerance)) {
    out.degenerate = true;
    return out;
  }
  const double ratio = (f_v - fx) / denominator;
  // std::round rounds halfway cases away from zero.
  const double rounded = std::round(ratio);
  if (!std::isfinite(rounded) || rounded < 1.0 || rounded > static_cast<double>(part.label_count)) {
    out.degenerate = true;
    out.label = std::isfinite(rounded) && std::abs(rounded) < 9e18 ? static_cast<long long>(rounded) : 0;
    return out;
  }
  out.label = static_cast<long long>(rounded);
  out.survivors = part.block(static_cast<std::size_t>(out.label));
  return out;
}

LocateResult locate_with(ScratchPoint& point, const Objective& f, double fx, double epsilon,
                         std::span<const Index> members, const DivisionSchedule& schedule,
                         std::size_t stop_size, std::size_t max_iterations, RngStream& rng) {
  if (members.empty()) throw std::invalid_argument("locate_in_group: empty group");
  if (stop_size == 0) throw std::invalid_argument("locate_in_group: stop size must be >= 1");
  LocateResult result;
  IndexSet current(members.begin(), members.end());
  while (current.size() > stop_size && result.iterations < max_iterations) {
    ++result.iterations;
    const std::uint64_t divisor =
        std::max<std::uint64_t>(2, std::min<std::uint64_t>(schedule.at(result.iterations), current.size()));
    ShrinkOutcome step = shrink_with(point, f, fx, epsilon, current, divisor, rng);
    result.queries += 2;
    current = std::move(step.survivors);
    if (current.empty()) break;
  }
  if (current.size() > stop_size) {
    std::sort(current.begin(), current.end());
    current.resize(stop_size);
  }
  result.candidates = std::move(current);
  return result;
}

}  // namespace

GraceConfig GraceConfig::defaults(std::size_t d, std::size_t s, double epsilon, std::uint64_t first_divisor) {
  if (d == 0 || s == 0) throw std::invalid_argument("defaults need d >= 1 and s >= 1");
  GraceConfig cfg;
  cfg.sparsity = s;
  cfg.epsilon = epsilon;
  cfg.repeats = 1;
  // floor(0.7 d / s) in exact integer arithmetic.
  cfg.group_size = std::clamp<std::size_t>((7 * d) / (10 * s), 1, d);
  cfg.schedule = DivisionSchedule::practical(first_divisor);
  return cfg;
}

void GraceConfig::validate(std::size_t d) const {
  if (group_size < 1 || group_size > d) throw std::invalid_argument("group size must satisfy 1 <= n <= d");
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be positive");
  if (stop_size < 1) throw std::invalid_argument("stop size must be >= 1");
  if (sparsity < 1) throw std::invalid_argument("sparsity must be >= 1");
}

std::size_t default_max_shrink_iterations(std::size_t group_size) {
  const double size = static_cast<double>(std::max<std::size_t>(group_size, 4));
  return 4 + static_cast<std::size_t>(std::ceil(std::log2(std::log2(size)))) + 8;
}

double SparseGradient::operator[](Index i) const {
  const auto it = std::lower_bound(entries.begin(), entries.end(), i,
                                   [](const auto& e, Index key) { return e.first < key; });
  return it != entries.end() && it->first == i ? it->second : 0.0;
}

IndexSet SparseGradient::support() const {
  IndexSet out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.first);
  return out;
}

std::vector<double> SparseGradient::dense() const {
  std::vector<double> out(dimension, 0.0);
  for (const auto& [i, g] : entries) out[i] = g;
  return out;
}

ShrinkOutcome shrink_step(const Objective& f, std::span<const double> x, double fx, double epsilon,
                          std::span<const Index> members, std::uint64_t divisor, RngStream& rng) {
  if (members.size() < 2) throw std::invalid_argument("shrink_step: need |S| >= 2");
  if (divisor < 2) throw std::invalid_argument("shrink_step: need D >= 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument("shrink_step: epsilon must be positive");
  ScratchPoint point(x);
  return shrink_with(point, f, fx, epsilon, members, divisor, rng);
}

LocateResult locate_in_group(const Objective& f, std::span<const double> x, double fx, double epsilon,
                             std::span<const Index> members, const DivisionSchedule& schedule,
                             std::size_t stop_size, std::size_t max_iterations, RngStream& rng) {
  ScratchPoint point(x);
  return locate_with(point, f, fx, epsilon, members, schedule, stop_size, max_iterations, rng);
}

double finite_difference(const Objective& f, std::span<const double> x, double fx, Index j, double epsilon) {
  if (j >= x.size()) throw std::invalid_argument("finite_difference: index out of range");
  if (!(epsilon > 0.0)) throw std::invalid_argument("finite_difference: epsilon must be positive");
  ScratchPoint point(x);
  return (point.eval_axis(f, j, epsilon) - fx) / epsilon;
}

SparseGradient grace_estimate(const Objective& f, std::span<const double> x, const GraceConfig& config,
                              RngStream& rng, std::optional<double> known_fx) {
  const std::size_t d = f.dimension();
  if (x.size() != d) throw std::invalid_argument("grace_estimate: point has wrong dimension");
  config.validate(d);

  SparseGradient grad;
  grad.dimension = d;
  ScratchPoint point(x);
  if (known_fx) {
    grad.value_at_point = *known_fx;
  } else {
    grad.value_at_point = f(x);
    grad.queries_used = 1;
  }
  const double fx = grad.value_at_point;

  std::set<Index> candidates;
  for (std::size_t l = 0; l < config.repeats; ++l) {
    const Permutation omega = random_permutation(d, rng);
    for (const IndexSet& group : partition_groups(d, config.group_size, omega)) {
      const std::size_t cap = config.max_shrink_iterations ? config.max_shrink_iterations
                                                           : default_max_shrink_iterations(group.size());
      LocateResult found =
          locate_with(point, f, fx, config.epsilon, group, config.schedule, config.stop_size, cap, rng);
      grad.queries_used += found.queries;
      candidates.insert(found.candidates.begin(), found.candidates.end());
    }
  }

  grad.entries.reserve(candidates.size());
  for (Index j : candidates) {
    const double value = (point.eval_axis(f, j, config.epsilon) - fx) / config.epsilon;
    ++grad.queries_used;
    grad.entries.emplace_back(j, value);
  }
  return grad;
}

}  // namespace gracezo
