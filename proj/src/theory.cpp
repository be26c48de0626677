#include "gracezo/theory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gracezo/errors.hpp"

namespace gracezo {

namespace {

double ln3_over(double x) { return std::log(3.0 / x); }

}  // namespace

void TheoryParams::validate() const {
  if (!(0.0 < alpha && alpha < rho && rho <= 1.0)) throw std::invalid_argument("need 0 < alpha < rho <= 1");
  for (double v : {delta, phi, theta}) {
    if (!(0.0 < v && v < 1.0)) throw std::invalid_argument("delta, phi, theta must lie in (0, 1)");
  }
  if (D < 2) throw std::invalid_argument("D must be >= 2");
}

double c1_objective(double t) {
  const double ln3 = std::log(3.0);
  return 2.0 * std::sqrt((std::log(9.0 / 4.0) + t) / (ln3 + t)) +
         0.5 * std::sqrt((std::log(18.0) + t) / (ln3 + t)) - 0.25;
}

C1Details compute_C1_details() {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 1e-6, b = 20.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = c1_objective(c), fd = c1_objective(d);
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = c1_objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = c1_objective(d);
    }
  }
  C1Details out;
  out.argmax = 0.5 * (a + b);
  out.value = c1_objective(out.argmax);

  const double l43 = std::log(4.0 / 3.0), l6 = std::log(6.0);
  out.closed_form_argmax = (16.0 * std::log(2.0) * l43 * l43 + std::log(4.0) * l6 * l6) /
                               (l6 * l6 - 16.0 * l43 * l43) -
                           std::log(9.0);
  out.closed_form_value = c1_objective(out.closed_form_argmax);
  return out;
}

double compute_C1() { return compute_C1_details().value; }

double compute_C2(const TheoryParams& p) {
  const double D = static_cast<double>(p.D);
  return (compute_C1() * D + 1.0 / D) * std::sqrt(2.0 * ln3_over(p.theta * (1.0 - p.phi) * p.delta));
}

double delta_r1(const TheoryParams& p, std::size_t r) {
  return p.theta * (1.0 - p.phi) * std::pow(p.phi, static_cast<double>(r - 1)) * p.delta;
}

double delta_r2(const TheoryParams& p, std::size_t r) {
  return (1.0 - p.theta) * (1.0 - p.phi) * std::pow(p.phi, static_cast<double>(r - 1)) * p.delta;
}

double schedule_progress(const TheoryParams& p, double divisor, std::size_t r) {
  return divisor * delta_r2(p, r) * ln3_over(delta_r1(p, r)) / ln3_over(delta_r1(p, r + 1));
}

std::string ScheduleConditions::first_failure() const {
  if (!cond1) return "condition 1 (phi K^{3/2} - K >= (1-theta)(1-phi) phi delta)";
  if (!cond2) return "condition 2 (K >= 3/2)";
  if (!cond3) return "condition 3 (A > 1)";
  return {};
}

ScheduleConditions verify_schedule_conditions(const TheoryParams& p) {
  ScheduleConditions out;
  const double ratio = ln3_over(delta_r1(p, 1)) / ln3_over(delta_r1(p, 2));
  out.K = static_cast<double>(p.D) * delta_r2(p, 1) * ratio;
  out.cond1_lhs = p.phi * std::pow(out.K, 1.5) - out.K;
  out.cond1_rhs = delta_r2(p, 1) * p.phi;
  out.cond1 = out.cond1_lhs >= out.cond1_rhs;
  out.cond2 = out.K >= 1.5;
  out.A = (static_cast<double>(p.D) - 1.0 / (std::sqrt(out.K) - 1.0)) * delta_r2(p, 1) * p.phi * p.phi * ratio;
  // For K <= 1 the square-root term is undefined or negative and A is meaningless.
  out.cond3 = out.K > 1.0 && out.A > 1.0;
  return out;
}

DivisionSchedule theoretical_schedule(const TheoryParams& p, std::size_t count) {
  if (count == 0) throw std::invalid_argument("theoretical schedule needs at least one term");
  p.validate();
  const ScheduleConditions report = verify_schedule_conditions(p);
  if (!report.all()) throw InfeasibleParameters("infeasible schedule parameters: " + report.first_failure());

  std::vector<std::uint64_t> values{p.D};
  for (std::size_t r = 1; values.size() < count; ++r) {
    const double prev = static_cast<double>(values.back());
    const double factor = std::sqrt(delta_r2(p, r) * ln3_over(delta_r1(p, r)) / ln3_over(delta_r1(p, r + 1)));
    const double next = std::floor(std::pow(prev, 1.5) * factor);
    const double cap = static_cast<double>(DivisionSchedule::kMaxDivisor);
    values.push_back(next >= cap ? DivisionSchedule::kMaxDivisor : static_cast<std::uint64_t>(next));
  }
  return DivisionSchedule::from_values(std::move(values), DivisionSchedule::Kind::theoretical);
}

double theoretical_lower_bound(const TheoryParams& p, double A, std::size_t r) {
  return std::pow(A, std::pow(1.5, static_cast<double>(r - 1))) /
         ((1.0 - p.theta) * (1.0 - p.phi) * p.phi * p.phi * p.delta);
}

double lambda1(std::size_t n, std::size_t d, double L1) {
  const double dd = static_cast<double>(d);
  return L1 * (dd * dd + dd + 0.5) * static_cast<double>(n);
}

double lambda2(std::size_t d, double L0, double L1) { return 2.0 * L0 * lambda1(d, d, L1); }

BigInt falling_factorial(long long n, std::size_t m) {
  BigInt out = 1;
  for (std::size_t k = 0; k < m; ++k) out *= BigInt(n) - static_cast<long long>(k);
  return out;
}

EgammaCheck check_egamma(std::size_t d, std::size_t s, double gamma) {
  if (s < 1 || s > d) throw std::invalid_argument("check_egamma needs 1 <= s <= d");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("check_egamma needs 0 < gamma < 1");
  const Rational g(gamma);
  const Rational scaled = g * static_cast<long long>(d) / static_cast<long long>(s);
  const BigInt shift = boost::multiprecision::numerator(scaled) / boost::multiprecision::denominator(scaled);
  const long long top = static_cast<long long>(d) - static_cast<long long>(shift);

  EgammaCheck out;
  out.lhs = Rational(falling_factorial(top, s - 1), falling_factorial(static_cast<long long>(d) - 1, s - 1));
  out.rhs = std::exp(-gamma);
  out.holds = out.lhs.convert_to<long double>() >= static_cast<long double>(std::exp(-static_cast<long double>(gamma)));
  return out;
}

PartitionProbabilityCheck check_partition_probability(std::size_t d, std::size_t n, std::size_t k,
                                                      const IndexSet& H, Index j) {
  if (d == 0 || d > 8) throw std::invalid_argument("partition probability check enumerates d! and needs 1 <= d <= 8");
  if (n == 0 || n > d) throw std::invalid_argument("need 1 <= n <= d");
  const std::size_t groups = (d + n - 1) / n;
  if (k >= groups) throw std::invalid_argument("group index out of range");
  unsigned h_mask = 0;
  for (Index h : H) {
    if (h >= d) throw std::invalid_argument("H must lie in [0, d)");
    h_mask |= 1u << h;
  }
  if (H.empty() || static_cast<std::size_t>(std::popcount(h_mask)) != H.size())
    throw std::invalid_argument("H must be a nonempty set without repeats");
  if (j >= d || !(h_mask & (1u << j))) throw std::invalid_argument("j must belong to H");

  const std::size_t group_size = k + 1 < groups ? n : d - n * (groups - 1);
  const std::size_t h_size = H.size();

  // Event counts keyed by J = S ∩ H (as a mask), and joint counts with i in S.
  std::vector<std::uint64_t> by_j(1u << d, 0);
  std::vector<std::uint64_t> joint((1u << d) * d, 0);
  std::uint64_t total = 0;

  std::vector<Index> omega(d);
  std::iota(omega.begin(), omega.end(), Index{0});
  do {
    unsigned s_mask = 0;
    for (Index i = 0; i < d; ++i)
      if (omega[i] / n == k) s_mask |= 1u << i;
    const unsigned inter = s_mask & h_mask;
    ++by_j[inter];
    for (Index i = 0; i < d; ++i)
      if (s_mask & (1u << i)) ++joint[inter * d + i];
    ++total;
  } while (std::next_permutation(omega.begin(), omega.end()));

  PartitionProbabilityCheck out;
  out.empirical = Rational(by_j[1u << j], total);
  const long long dl = static_cast<long long>(d), sl = static_cast<long long>(group_size);
  out.formula = Rational(sl, dl) *
                Rational(falling_factorial(dl - sl, h_size - 1), falling_factorial(dl - 1, h_size - 1));
  out.equal = out.empirical == out.formula;

  if (h_size < d) {
    for (unsigned sub = h_mask;; sub = (sub - 1) & h_mask) {
      if (by_j[sub] > 0) {
        const long long j_size = std::popcount(sub);
        const Rational expected(sl - j_size, dl - static_cast<long long>(h_size));
        for (Index i = 0; i < d; ++i) {
          if (h_mask & (1u << i)) continue;
          ++out.conditional_cases;
          if (Rational(joint[sub * d + i], by_j[sub]) != expected) out.conditional_equal = false;
        }
      }
      if (sub == 0) break;
    }
  }
  return out;
}

}  // namespace gracezo
