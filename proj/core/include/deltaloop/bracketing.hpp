#pragma once

// Two-sided bounds for the negative eigenvalues of the delta interaction on a
// closed curve, from the separated operators
//   H+- = U+-_a (x) 1 + 1 (x) T+-_{a,beta},   tau+-_{beta,j} = zeta+- + mu+-_j(a),
// with a = a(beta), plus the counting sets K+-_beta = {j : tau+-_{beta,j} < 0}.
//
// Two levels of trust are reported per beta:
//   valid      the min-max bracket applies: a gamma_+ < 1/2, a <= a1, T+- has a
//              single negative eigenvalue and its second eigenvalue lies above
//              the bracketed range (checked numerically);
//   certified  valid, and the hypotheses of the analytic transverse bounds
//              hold (beta a > 8/3, beta a > 8, beta > 8/3 gamma_+, a < 1/(sqrt 2 gamma_+)).

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "deltaloop/curve.hpp"
#include "deltaloop/operator1d.hpp"
#include "deltaloop/strip.hpp"
#include "deltaloop/transverse.hpp"

namespace deltaloop {

enum class Clamp { none, tubular, curvature };
std::string to_string(Clamp c);

struct HalfWidth {
  double value = 0.0;
  double rule = 0.0;  // 6 log(beta) / beta before clamping
  Clamp active = Clamp::none;
};

// min{6 log(beta)/beta, 0.9 a1, 0.45/gamma_+}; requires beta > 1.
HalfWidth choose_a(double beta, double gamma_plus, double a1);
HalfWidth choose_a(double beta, const ArcCurve& curve, const TubularRadius& radius);

struct BracketConfig {
  ArcCurve curve;
  TubularRadius radius;
  std::vector<double> betas;
  std::size_t n = 5;        // bracketed indices j = 1..n
  std::size_t n1d = 1024;   // 1D grid for mu+-_j
  std::size_t nu_check = 2000;  // transverse grid for the gap check
  std::optional<StripGrid> strip = std::nullopt;  // strip-solver remainders when set
  std::size_t workers = 1;

  static BracketConfig make(const ArcCurve& curve, std::vector<double> betas);
};

struct HypothesisCheck {
  std::string name;     // condition, e.g. "beta*a > 8"
  std::string failure;  // its negation, e.g. "beta*a <= 8"
  bool holds = false;
  bool needed_for_validity = false;
};

struct BracketRow {
  std::size_t j = 0;
  double tau_minus = 0.0;
  double tau_plus = 0.0;
  double width = 0.0;
  double err_budget = 0.0;
  bool valid = false;  // tau+-_j below the second transverse level
};

struct BracketTable {
  double beta = 0.0;
  HalfWidth a;
  TransverseResult zeta_plus;
  TransverseResult zeta_minus;
  Spectrum1D mu_plus;
  Spectrum1D mu_minus;
  PositiveFloor gap;
  double xi_minus_2 = 0.0;  // second eigenvalue of T- (finite differences)
  std::vector<BracketRow> rows;
  std::size_t count_plus = 0;   // #K+_beta
  std::size_t count_minus = 0;  // #K-_beta
  std::size_t n_max = 0;        // ceil(L beta/2pi) + 10 ceil(log beta); sets the counting grid
  std::vector<HypothesisCheck> checks;
  bool valid = false;
  bool certified = false;
  std::string violated;  // first failed check
};

BracketTable bracket_eigenvalues(const BracketConfig& config, double beta);

struct CountResult {
  double beta = 0.0;
  double a = 0.0;
  std::size_t lower = 0;  // #K+
  std::size_t upper = 0;  // #K-
  double l_beta_over_2pi = 0.0;
  std::size_t n_max = 0;
  std::vector<HypothesisCheck> checks;
  bool valid = false;
  bool certified = false;
  std::string violated;
};

CountResult count_discrete_spectrum(const BracketConfig& config, double beta);

struct RemainderPoint {
  double beta = 0.0;
  double a = 0.0;
  std::size_t n = 0;
  double tau_minus = 0.0;
  double tau_plus = 0.0;
  double midpoint = 0.0;
  double mu = 0.0;          // mu_n of S
  double remainder = 0.0;   // midpoint + beta^2/4 - mu_n
  double width = 0.0;
  double scale = 0.0;       // log(beta) / beta
  std::optional<double> strip_remainder;  // from strip eigenvalues, when computed
  bool valid = false;
  bool certified = false;
  std::string violated;
};

struct CountPoint {
  double beta = 0.0;
  double a = 0.0;
  std::size_t lower = 0;
  std::size_t upper = 0;
  double l_beta_over_2pi = 0.0;
  double residual = 0.0;  // interval midpoint - L beta / 2pi
  double distance = 0.0;  // distance from L beta / 2pi to [lower, upper]
  double deviation = 0.0; // max |bound - L beta / 2pi|
  double scale = 0.0;     // log(beta)
  std::size_t n_max = 0;
  bool valid = false;
  bool certified = false;
  std::string violated;
};

struct Fit {
  double constant = 0.0;  // max value / scale over valid points
  double slope = 0.0;     // least-squares slope of log value against log beta (positive values only)
  std::size_t points = 0;
};

struct BetaChecks {
  double beta = 0.0;
  std::vector<HypothesisCheck> checks;
};

struct AsymptoticsReport {
  std::vector<BetaChecks> checks;  // per beta, in increasing beta
  std::vector<RemainderPoint> remainders;
  std::vector<CountPoint> counts;
  Fit width;      // widths against log(beta)/beta
  Fit remainder;  // |remainder| against log(beta)/beta
  Fit joint;      // both of the above
  Fit distance;   // count distance against log(beta)
  Fit residual;   // |count residual| against log(beta)
  Fit deviation;  // count deviation against log(beta)
  std::vector<std::string> observations;  // monotonicity notes

  std::string summary() const;
};

// Remainders and widths for n = 1..config.n over config.betas. Requires at
// least four valid beta points (PreconditionError otherwise).
AsymptoticsReport sweep_theorem1(const BracketConfig& config);
AsymptoticsReport sweep_theorem2(const BracketConfig& config);

// Largest of width/scale and |remainder|/scale over the valid points at beta
// (0 when none qualify).
double max_ratio_at(const std::vector<RemainderPoint>& points, double beta);

}  // namespace deltaloop
