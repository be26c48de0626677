#pragma once

// Numerical side of the analysis: the constants C1 and C2, the theoretical
// division schedule and its feasibility conditions, the lambda noise floors,
// and exact checks of two combinatorial inequalities.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gracezo/partition.hpp"
#include "gracezo/schedule.hpp"

namespace gracezo {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct TheoryParams {
  double rho = 1.0;
  double alpha = 0.5;
  double delta = 0.5;
  double phi = 0.64;
  double theta = 0.08;
  std::uint64_t D = 18;
  double L0 = 1.0;
  double L1 = 1.0;
  std::size_t s = 1;
  std::size_t d = 1;

  /// Throws std::invalid_argument outside 0 < alpha < rho <= 1,
  /// 0 < delta, phi, theta < 1, D >= 2.
  void validate() const;
};

/// phi(t) = 2 sqrt((ln(9/4) + t)/(ln 3 + t)) + 1/2 sqrt((ln 18 + t)/(ln 3 + t)) - 1/4
/// with t = ln(1/delta).
double c1_objective(double t);

struct C1Details {
  double value = 0.0;              // max of c1_objective
  double argmax = 0.0;             // t found by golden-section search
  double closed_form_argmax = 0.0; // analytic maximizer
  double closed_form_value = 0.0;
};

/// Golden-section search over t in [1e-6, 20] with tolerance 1e-10.
C1Details compute_C1_details();
double compute_C1();

/// (C1 D + 1/D) sqrt(2 ln(3 / (theta (1 - phi) delta))).
double compute_C2(const TheoryParams& p);

/// delta_{r,1} = theta (1-phi) phi^{r-1} delta and delta_{r,2} = (1-theta)(1-phi) phi^{r-1} delta.
double delta_r1(const TheoryParams& p, std::size_t r);
double delta_r2(const TheoryParams& p, std::size_t r);

/// D_r delta_{r,2} ln(3/delta_{r,1}) / ln(3/delta_{r+1,1}); nondecreasing in r
/// along a feasible theoretical schedule.
double schedule_progress(const TheoryParams& p, double divisor, std::size_t r);

struct ScheduleConditions {
  double K = 0.0;  // D (1-theta)(1-phi) delta ln(3/delta_{1,1}) / ln(3/delta_{2,1})
  double cond1_lhs = 0.0;
  double cond1_rhs = 0.0;
  double A = 0.0;
  bool cond1 = false;  // phi K^{3/2} - K >= (1-theta)(1-phi) phi delta
  bool cond2 = false;  // K >= 3/2
  bool cond3 = false;  // A > 1

  bool all() const noexcept { return cond1 && cond2 && cond3; }
  /// Name of the first failed condition, empty if all pass.
  std::string first_failure() const;
};

ScheduleConditions verify_schedule_conditions(const TheoryParams& p);

/// D_1 = p.D, D_{r+1} = floor(D_r^{3/2} sqrt(delta_{r,2} ln(3/delta_{r,1}) / ln(3/delta_{r+1,1})))
/// in double precision. Throws InfeasibleParameters naming the failed condition.
DivisionSchedule theoretical_schedule(const TheoryParams& p, std::size_t count);

/// A^{(3/2)^{r-1}} / ((1-theta)(1-phi) phi^2 delta).
double theoretical_lower_bound(const TheoryParams& p, double A, std::size_t r);

/// lambda_{1,n} = L1 (d^2 + d + 1/2) n.
double lambda1(std::size_t n, std::size_t d, double L1);
/// lambda_{2,d} = 2 L0 lambda_{1,d}.
double lambda2(std::size_t d, double L0, double L1);

/// (n)_m = n (n-1) ... (n-m+1); (n)_0 = 1.
BigInt falling_factorial(long long n, std::size_t m);

struct EgammaCheck {
  Rational lhs;   // (d - floor(gamma d / s))_{s-1} / (d-1)_{s-1}, exact
  double rhs = 0; // exp(-gamma)
  bool holds = false;
};

/// gamma is taken as the exact binary value of the double.
EgammaCheck check_egamma(std::size_t d, std::size_t s, double gamma);

struct PartitionProbabilityCheck {
  Rational empirical;  // Pr[S ∩ H = {j}] by enumeration
  Rational formula;    // (|S|/d) (d-|S|)_{|H|-1} / (d-1)_{|H|-1}
  bool equal = false;
  std::size_t conditional_cases = 0;  // (J, i) pairs compared
  bool conditional_equal = true;      // Pr[i in S | S ∩ H = J] = (|S|-|J|)/(d-|H|)
};

/// Exhaustive over all d! permutations for the group S = { i : omega(i) / n == k }.
/// 0-based k, H and j. Throws std::invalid_argument when d > 8 or inputs are out of range.
PartitionProbabilityCheck check_partition_probability(std::size_t d, std::size_t n, std::size_t k,
                                                      const IndexSet& H, Index j);

}  // namespace gracezo
