#include "deltaloop/transverse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "deltaloop/errors.hpp"

namespace deltaloop {

namespace {

std::string num(double x) {
  std::ostringstream o;
  o.precision(17);
  o << x;
  return o.str();
}

// Root of an increasing function on (s0, s0 + t_hi], bisecting t = s - s0
// geometrically while the bracket spans orders of magnitude, then polishing
// with Newton steps that are kept only when they reduce the residual.
double increasing_root(const std::function<double(double)>& f, const std::function<double(double)>& df,
                       double s0, double t_lo, double t_hi) {
  double lo = t_lo, hi = t_hi;
  for (int it = 0; it < 400; ++it) {
    const double mid = (hi > 4.0 * lo) ? std::sqrt(lo) * std::sqrt(hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(s0 + mid) < 0.0) lo = mid;
    else hi = mid;
  }
  double t = 0.5 * (lo + hi);
  double r = std::abs(f(s0 + t));
  for (int it = 0; it < 3; ++it) {
    const double d = df(s0 + t);
    if (!(d > 0.0)) break;
    const double cand = t - f(s0 + t) / d;
    if (!(cand > 0.0)) break;
    const double rc = std::abs(f(s0 + cand));
    if (rc < r) {
      t = cand;
      r = rc;
    } else {
      break;
    }
  }
  return s0 + t;
}

void require_positive(double a, double beta) {
  if (!(a > 0.0) || !(beta > 0.0)) throw PreconditionError("transverse: need a > 0 and beta > 0");
}

std::string plus_violation(double a, double beta) {
  if (!(beta * a > 8.0 / 3.0)) return "beta*a <= 8/3";
  return {};
}

std::string minus_violation(double a, double beta, double gp) {
  if (!(a * beta > 8.0)) return "beta*a <= 8";
  if (!(beta > 8.0 / 3.0 * gp)) return "beta <= 8/3*gamma_plus";
  return {};
}

TransverseResult solve_plus(double a, double beta) {
  require_positive(a, beta);
  if (!(beta * a > 2.0))
    throw PreconditionError("transverse plus: beta*a <= 2, T+ has no negative eigenvalue");
  const double kmax = 0.5 * std::sqrt(beta * beta - 2.0 * beta / a);
  const double smax = 0.5 * beta - kmax;
  const double gmax = secular_g_plus(a, beta, kmax);
  if (!(gmax > 0.0))
    throw NumericalError("transverse plus: g(k_max) = " + num(gmax) + " <= 0 contradicts the monotonicity argument");
  auto f = [&](double s) { return secular_g_plus_deviation(a, beta, s); };
  auto df = [&](double s) { return 1.0 / s + 1.0 / (beta - s) - 2.0 * a; };
  const double t_lo = beta * 1e-300;
  if (!(f(t_lo) < 0.0)) throw NumericalError("transverse plus: no sign change at the lower bracket end");
  const double s = increasing_root(f, df, 0.0, t_lo, smax);

  TransverseResult r;
  r.problem = {a, beta, 0.0, Sign::plus};
  r.deviation = s;
  r.k = 0.5 * beta - s;
  r.excess = s * (beta - s);
  r.zeta = -0.25 * beta * beta + r.excess;
  r.bracket_lo = kmax;
  r.bracket_hi = 0.5 * beta;
  r.residual = std::abs(f(s));
  const auto b = zeta_plus_bounds(a, beta);
  r.lower_bound = b.lower;
  r.upper_bound = b.upper;
  r.violated = plus_violation(a, beta);
  r.hypotheses = r.violated.empty();
  const double width = 2.0 * beta * beta * std::exp(-0.5 * beta * a);
  r.certified = r.hypotheses && r.excess > 0.0 && r.excess < width;
  return r;
}

TransverseResult solve_minus(double a, double beta, double gp) {
  require_positive(a, beta);
  if (!(gp >= 0.0)) throw PreconditionError("transverse minus: need gamma_plus >= 0");
  auto f = [&](double s) { return secular_minus_deviation(a, beta, gp, s); };
  auto df = [&](double s) {
    const double k = 0.5 * beta + s;
    return 2.0 * a + 1.0 / (k - gp) - 1.0 / (k + gp) + 1.0 / s - 1.0 / (beta + s);
  };
  // k must exceed gamma_+ for the left side to be positive.
  const double s0 = std::max(0.0, gp - 0.5 * beta);
  const double t_lo = std::max(beta, gp) * 1e-300;
  double t_hi = 0.25 * beta;
  for (int it = 0; it < 200 && !(f(s0 + t_hi) > 0.0); ++it) t_hi *= 2.0;
  if (!(f(s0 + t_lo) < 0.0) || !(f(s0 + t_hi) > 0.0))
    throw NumericalError("transverse minus: no sign change of the secular function in (beta/2, infinity)");
  const double s = increasing_root(f, df, s0, t_lo, t_hi);

  TransverseResult r;
  r.problem = {a, beta, gp, Sign::minus};
  r.deviation = s;
  r.k = 0.5 * beta + s;
  r.excess = -s * (beta + s);
  r.zeta = -0.25 * beta * beta + r.excess;
  r.bracket_lo = 0.5 * beta + s0;
  r.bracket_hi = 0.5 * beta + s0 + t_hi;
  r.residual = std::abs(f(s));
  const auto b = zeta_minus_bounds(a, beta);
  r.lower_bound = b.lower;
  r.upper_bound = b.upper;
  r.violated = minus_violation(a, beta, gp);
  r.hypotheses = r.violated.empty();
  const double width = 2205.0 / 16.0 * beta * beta * std::exp(-0.5 * beta * a);
  r.certified = r.hypotheses && r.excess < 0.0 && -r.excess < width;
  return r;
}

}  // namespace

void TransverseProblem::validate() const {
  if (!(a > 0.0)) throw PreconditionError("transverse: need a > 0");
  if (!(beta >= 0.0)) throw PreconditionError("transverse: need beta >= 0");
  if (!(gamma_plus >= 0.0)) throw PreconditionError("transverse: need gamma_plus >= 0");
}

double secular_g_plus(double a, double beta, double k) {
  if (!(k > 0.0) || !(k < 0.5 * beta)) throw DomainError("secular_g_plus: need 0 < k < beta/2");
  return secular_g_plus_deviation(a, beta, 0.5 * beta - k);
}

double secular_g_plus_deviation(double a, double beta, double s) {
  if (!(s > 0.0) || !(s < beta)) throw DomainError("secular_g_plus: deviation outside (0, beta)");
  return std::log(s) - std::log(beta - s) + a * (beta - 2.0 * s);
}

double secular_minus_deviation(double a, double beta, double gp, double s) {
  const double k = 0.5 * beta + s;
  if (!(s > 0.0) || !(k > gp)) throw DomainError("secular_minus: need s > 0 and k > gamma_plus");
  return 2.0 * k * a + std::log(k - gp) - std::log(k + gp) - std::log(beta + s) + std::log(s);
}

Interval zeta_plus_bounds(double a, double beta) {
  const double c = -0.25 * beta * beta;
  return {c, c + 2.0 * beta * beta * std::exp(-0.5 * beta * a)};
}

Interval zeta_minus_bounds(double a, double beta) {
  const double c = -0.25 * beta * beta;
  return {c - 2205.0 / 16.0 * beta * beta * std::exp(-0.5 * beta * a), c};
}

TransverseResult solve_zeta_plus(double a, double beta) {
  require_positive(a, beta);
  const auto v = plus_violation(a, beta);
  if (!v.empty()) throw PreconditionError("solve_zeta_plus: " + v);
  auto r = solve_plus(a, beta);
  if (!r.certified)
    throw NumericalError("solve_zeta_plus: zeta = " + num(r.zeta) + " outside (" + num(r.lower_bound) + ", " +
                         num(r.upper_bound) + ")");
  return r;
}

TransverseResult solve_zeta_minus(double a, double beta, double gamma_plus) {
  require_positive(a, beta);
  const auto v = minus_violation(a, beta, gamma_plus);
  if (!v.empty()) throw PreconditionError("solve_zeta_minus: " + v);
  auto r = solve_minus(a, beta, gamma_plus);
  if (!(r.k < 0.75 * beta))
    throw NumericalError("solve_zeta_minus: root k = " + num(r.k) + " not in (beta/2, 3 beta/4)");
  r.bracket_lo = 0.5 * beta * (1.0 + 1e-12);
  r.bracket_hi = 0.75 * beta;
  if (!r.certified)
    throw NumericalError("solve_zeta_minus: zeta = " + num(r.zeta) + " outside (" + num(r.lower_bound) + ", " +
                         num(r.upper_bound) + ")");
  return r;
}

TransverseResult transverse_ground_state(const TransverseProblem& p) {
  p.validate();
  return p.variant == Sign::plus ? solve_plus(p.a, p.beta) : solve_minus(p.a, p.beta, p.gamma_plus);
}

PositiveFloor positive_floor_minus(double a, double beta, double gp, std::size_t scan_points) {
  require_positive(a, beta);
  if (!(gp >= 0.0)) throw PreconditionError("positive_floor_minus: need gamma_plus >= 0");
  if (!(std::sqrt(2.0) * gp * a < 1.0)) throw PreconditionError("positive_floor_minus: a >= 1/(sqrt(2) gamma_plus)");
  if (scan_points < 2) throw PreconditionError("positive_floor_minus: need at least 2 scan points");
  const double pi = std::numbers::pi;
  PositiveFloor out;
  out.floor = std::min({pi * pi / (16.0 * a * a), 0.5 * beta * gp, beta * beta});
  out.scan_points = scan_points;
  const double kmax = std::sqrt(out.floor);
  if (kmax <= 0.0) return out;
  auto odd = [&](double k) { return gp * std::sin(k * a) - k * std::cos(k * a); };
  auto even = [&](double k) {
    return (beta * gp - 2.0 * k * k) * std::sin(k * a) - k * (beta + 2.0 * gp) * std::cos(k * a);
  };
  double po = 0.0, pe = 0.0;
  for (std::size_t i = 1; i <= scan_points; ++i) {
    // Open at both ends: k = 0 is a trivial zero and the floor itself is excluded.
    const double k = kmax * static_cast<double>(i) / static_cast<double>(scan_points + 1);
    const double vo = odd(k), ve = even(k);
    if (i > 1) {
      if ((vo > 0.0) != (po > 0.0) || vo == 0.0) ++out.odd_roots;
      if ((ve > 0.0) != (pe > 0.0) || ve == 0.0) ++out.even_roots;
    }
    po = vo;
    pe = ve;
  }
  return out;
}

std::vector<double> fd_transverse_nodes(const TransverseProblem& p, std::size_t n) {
  p.validate();
  if (n < 4 || n % 2 != 0) throw PreconditionError("fd_transverse: N must be even and >= 4");
  const double h = 2.0 * p.a / static_cast<double>(n);
  std::vector<double> u;
  const std::size_t first = p.variant == Sign::plus ? 1 : 0;
  const std::size_t last = p.variant == Sign::plus ? n - 1 : n;
  for (std::size_t i = first; i <= last; ++i) u.push_back(-p.a + h * static_cast<double>(i));
  u[(n / 2) - first] = 0.0;
  return u;
}

SymmetricTridiagonal fd_transverse_matrix(const TransverseProblem& p, std::size_t n) {
  const auto u = fd_transverse_nodes(p, n);
  const double h = 2.0 * p.a / static_cast<double>(n);
  const double c = 1.0 / (h * h);
  const std::size_t m = u.size();
  std::vector<double> diag(m, 2.0 * c), off(m - 1, -c);
  const std::size_t centre = p.variant == Sign::plus ? n / 2 - 1 : n / 2;
  diag[centre] -= p.beta / h;
  if (p.variant == Sign::minus) {
    // End nodes carry half mass; the end form entry is 1/h - gamma_+.
    diag.front() = 2.0 * c - 2.0 * p.gamma_plus / h;
    diag.back() = 2.0 * c - 2.0 * p.gamma_plus / h;
    off.front() = -std::sqrt(2.0) * c;
    off.back() = -std::sqrt(2.0) * c;
  }
  return SymmetricTridiagonal(std::move(diag), std::move(off));
}

Spectrum1D fd_transverse_oracle(const TransverseProblem& p, std::size_t n, std::size_t count) {
  const auto fine = fd_transverse_matrix(p, n);
  if (count == 0 || count > fine.size()) throw PreconditionError("fd_transverse_oracle: bad eigenvalue count");
  std::size_t nc = n / 2;
  if (nc % 2 != 0) ++nc;
  const auto coarse = fd_transverse_matrix(p, std::max<std::size_t>(nc, 4));
  const double hf = 2.0 * p.a / static_cast<double>(n);
  const double hc = 2.0 * p.a / static_cast<double>(std::max<std::size_t>(nc, 4));
  const double factor = hf * hf / (hc * hc - hf * hf);
  Spectrum1D out;
  out.points = n;
  out.spacing = hf;
  out.boundary = p.variant == Sign::plus ? Boundary::dirichlet : Boundary::neumann;
  for (std::size_t j = 0; j < count; ++j) {
    const double vf = fine.eigenvalue(j);
    const double vc = j < coarse.size() ? coarse.eigenvalue(j) : vf;
    out.values.push_back(vf);
    out.err_est.push_back(std::max(std::abs(vf - vc) * factor, 1e-15 * std::max(1.0, std::abs(vf))));
  }
  return out;
}

std::vector<double> fd_ground_state(const TransverseProblem& p, std::size_t n) {
  const auto m = fd_transverse_matrix(p, n);
  const double lambda = m.eigenvalue(0);
  auto y = m.eigenvector(lambda);
  const double h = 2.0 * p.a / static_cast<double>(n);
  const std::size_t centre = p.variant == Sign::plus ? n / 2 - 1 : n / 2;
  const double sign = y[centre] < 0.0 ? -1.0 : 1.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double w = h;
    if (p.variant == Sign::minus && (i == 0 || i + 1 == y.size())) w = 0.5 * h;
    y[i] *= sign / std::sqrt(w);
  }
  return y;
}

bool verify_single_negative(const TransverseProblem& p, std::size_t n) {
  p.validate();
  require_positive(p.a, p.beta);
  const auto v = p.variant == Sign::plus ? plus_violation(p.a, p.beta) : minus_violation(p.a, p.beta, p.gamma_plus);
  if (!v.empty()) throw PreconditionError("verify_single_negative: " + v);
  return fd_transverse_matrix(p, n).count_below(0.0) == 1;
}

}  // namespace deltaloop
