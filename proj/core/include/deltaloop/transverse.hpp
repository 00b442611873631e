#pragma once

// Transverse operators on (-a, a) with a delta interaction of strength beta at 0:
//   T+  Dirichlet ends,
//   T-  Robin ends f'(+-a) = +-gamma_+ f(+-a) (form term -gamma_+ (|f(a)|^2 + |f(-a)|^2)).
// The negative eigenvalue is -k^2 with k = beta/2 -+ s; s is the deviation.

#include <cstddef>
#include <string>
#include <vector>

#include "deltaloop/operator1d.hpp"
#include "deltaloop/tridiagonal.hpp"

namespace deltaloop {

struct TransverseProblem {
  double a = 1.0;
  double beta = 10.0;
  double gamma_plus = 0.0;  // used by the minus variant only
  Sign variant = Sign::plus;

  void validate() const;
};

struct TransverseResult {
  TransverseProblem problem;
  double zeta = 0.0;
  double excess = 0.0;     // zeta + beta^2/4, evaluated without cancellation
  double k = 0.0;
  double deviation = 0.0;  // s with k = beta/2 - s (plus) or beta/2 + s (minus)
  double bracket_lo = 0.0;  // bracket on k handed to the root finder
  double bracket_hi = 0.0;
  double residual = 0.0;
  double lower_bound = 0.0;  // analytic interval for zeta
  double upper_bound = 0.0;
  bool hypotheses = false;   // analytic-bound hypotheses hold
  bool certified = false;    // hypotheses hold and zeta lies strictly inside the interval
  std::string violated;      // first failed hypothesis, empty when none
};

// g(k) = log(beta - 2k) - log(beta + 2k) + 2ka, 0 < k < beta/2.
double secular_g_plus(double a, double beta, double k);
// Same function in the deviation s = beta/2 - k: log s - log(beta - s) + a(beta - 2s).
double secular_g_plus_deviation(double a, double beta, double s);

// Even-mode equation for T- in logarithmic form, k = beta/2 + s:
//   2ka + log(k - gamma_+) - log(k + gamma_+) - log(beta + s) + log s = 0,
// i.e. e^{2ka} (k - gamma_+)/(k + gamma_+) = (2k + beta)/(2k - beta).
double secular_minus_deviation(double a, double beta, double gamma_plus, double s);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// (-beta^2/4, -beta^2/4 + 2 beta^2 e^{-beta a/2})
Interval zeta_plus_bounds(double a, double beta);
// (-beta^2/4 - 2205/16 beta^2 e^{-beta a/2}, -beta^2/4)
Interval zeta_minus_bounds(double a, double beta);

// Strict solvers: throw PreconditionError unless beta a > 8/3 (plus), resp.
// a beta > 8 and beta > 8/3 gamma_+ (minus); throw NumericalError when the
// computed value contradicts the analytic bounds.
TransverseResult solve_zeta_plus(double a, double beta);
TransverseResult solve_zeta_minus(double a, double beta, double gamma_plus);

// Lowest eigenvalue without the bound hypotheses. The plus variant needs
// beta a > 2 (otherwise T+ has no negative eigenvalue). The minus variant
// always has its even ground state above k = max(beta/2, gamma_+); for
// a gamma_+ > 1 an odd negative eigenvalue appears above it. The result
// reports which hypothesis fails, if any.
TransverseResult transverse_ground_state(const TransverseProblem& problem);

struct PositiveFloor {
  double floor = 0.0;         // min{pi^2/(16 a^2), beta gamma_+/2, beta^2}
  std::size_t scan_points = 0;
  std::size_t odd_roots = 0;  // sign changes of gamma sin ka - k cos ka below sqrt(floor)
  std::size_t even_roots = 0; // sign changes of (beta gamma - 2k^2) sin ka - k(beta + 2 gamma) cos ka
  bool clear() const { return odd_roots == 0 && even_roots == 0; }
};

// Requires 0 < a < 1/(sqrt(2) gamma_+).
PositiveFloor positive_floor_minus(double a, double beta, double gamma_plus, std::size_t scan_points = 20000);

// Lowest-order finite elements with lumped mass on u_i = -a + i 2a/N (N even,
// u_{N/2} = 0); the delta adds -beta to the centre row of the form, the minus
// variant adds -gamma_+ at both ends, the plus variant drops the end nodes.
SymmetricTridiagonal fd_transverse_matrix(const TransverseProblem& problem, std::size_t n);
std::vector<double> fd_transverse_nodes(const TransverseProblem& problem, std::size_t n);

// Lowest `count` eigenvalues on grid N; err_est from the comparison with N/2.
Spectrum1D fd_transverse_oracle(const TransverseProblem& problem, std::size_t n, std::size_t count = 2);

// Ground state on the nodes, unit mass-weighted norm, positive at u = 0.
std::vector<double> fd_ground_state(const TransverseProblem& problem, std::size_t n);

// Checks the analytic-bound hypotheses (throws PreconditionError) and returns
// whether the finite-difference operator has exactly one negative eigenvalue.
bool verify_single_negative(const TransverseProblem& problem, std::size_t n = 4000);

}  // namespace deltaloop
