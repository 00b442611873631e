#include "deltaloop/bracketing.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "deltaloop/errors.hpp"
#include "deltaloop/parallel.hpp"

namespace deltaloop {

namespace {

std::size_t budget(double length, double beta) {
  return static_cast<std::size_t>(std::ceil(length * beta / (2.0 * std::numbers::pi))) +
         10 * static_cast<std::size_t>(std::ceil(std::log(beta)));
}

Fit fit(const std::vector<std::pair<double, double>>& beta_ratio_value, const std::vector<double>& scales) {
  Fit f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < beta_ratio_value.size(); ++i) {
    const double beta = beta_ratio_value[i].first, value = beta_ratio_value[i].second;
    f.constant = std::max(f.constant, value / scales[i]);
    ++f.points;
    if (value > 0.0) {
      const double x = std::log(beta), y = std::log(value);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
  }
  if (m >= 2) {
    const double den = static_cast<double>(m) * sxx - sx * sx;
    if (den != 0.0) f.slope = (static_cast<double>(m) * sxy - sx * sy) / den;
  }
  return f;
}

std::vector<double> sorted_betas(const BracketConfig& config) {
  auto b = config.betas;
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  if (b.empty()) throw PreconditionError("sweep: empty beta list");
  return b;
}

}  // namespace

std::string to_string(Clamp c) {
  switch (c) {
    case Clamp::none: return "none";
    case Clamp::tubular: return "0.9*a1";
    case Clamp::curvature: return "0.45/gamma_plus";
  }
  return "?";
}

HalfWidth choose_a(double beta, double gamma_plus, double a1) {
  if (!(beta > 1.0)) throw PreconditionError("choose_a: need beta > 1");
  HalfWidth h;
  h.rule = 6.0 * std::log(beta) / beta;
  h.value = h.rule;
  if (0.9 * a1 < h.value) {
    h.value = 0.9 * a1;
    h.active = Clamp::tubular;
  }
  if (gamma_plus > 0.0 && 0.45 / gamma_plus < h.value) {
    h.value = 0.45 / gamma_plus;
    h.active = Clamp::curvature;
  }
  if (!(h.value > 0.0)) throw PreconditionError("choose_a: resulting half-width is not positive");
  return h;
}

HalfWidth choose_a(double beta, const ArcCurve& curve, const TubularRadius& radius) {
  return choose_a(beta, curve.gamma_sup(), radius.a1);
}

BracketConfig BracketConfig::make(const ArcCurve& curve, std::vector<double> betas) {
  return {.curve = curve, .radius = certify_tubular_radius(curve, 2000), .betas = std::move(betas)};
}

BracketTable bracket_eigenvalues(const BracketConfig& config, double beta) {
  const auto& curve = config.curve;
  const double gp = curve.gamma_sup();
  BracketTable t;
  t.beta = beta;
  t.a = choose_a(beta, curve, config.radius);
  const double a = t.a.value;

  auto check = [&](std::string name, std::string failure, bool holds, bool validity) {
    t.checks.push_back({std::move(name), std::move(failure), holds, validity});
  };
  auto finish = [&] {
    t.valid = true;
    t.certified = true;
    for (const auto& c : t.checks) {
      if (!c.holds) {
        if (t.violated.empty()) t.violated = c.failure;
        t.certified = false;
        if (c.needed_for_validity) t.valid = false;
      }
    }
    return t;
  };

  check("a*gamma_plus < 1/2", "a*gamma_plus >= 1/2", a * gp < 0.5, true);
  check("a <= a1", "a > a1", a <= config.radius.a1, true);
  check("beta*a > 2", "beta*a <= 2", beta * a > 2.0, true);
  if (!(beta * a > 2.0)) return finish();

  t.zeta_plus = transverse_ground_state({a, beta, 0.0, Sign::plus});
  t.zeta_minus = transverse_ground_state({a, beta, gp, Sign::minus});

  const TransverseProblem tm{a, beta, gp, Sign::minus};
  const auto xi = fd_transverse_oracle(tm, config.nu_check, 2);
  t.xi_minus_2 = xi.values[1];
  const bool single = fd_transverse_matrix(tm, config.nu_check).count_below(0.0) == 1 &&
                      fd_transverse_matrix({a, beta, 0.0, Sign::plus}, config.nu_check).count_below(0.0) == 1;
  check("single negative transverse eigenvalue", "more than one negative transverse eigenvalue", single, true);

  t.mu_plus = eigenvalues_1d(build_U(curve, a, Sign::plus, {config.n1d, Boundary::periodic}), config.n);
  t.mu_minus = eigenvalues_1d(build_U(curve, a, Sign::minus, {config.n1d, Boundary::periodic}), config.n);
  const double xi2 = t.xi_minus_2 - xi.err_est[1];
  check("xi_2 + mu_1 >= 0", "xi_2 + mu_1 < 0", xi2 + t.mu_minus.values[0] >= 0.0, true);

  bool rows_ok = true;
  for (std::size_t j = 0; j < config.n; ++j) {
    BracketRow r;
    r.j = j + 1;
    r.tau_minus = t.zeta_minus.zeta + t.mu_minus.values[j];
    r.tau_plus = t.zeta_plus.zeta + t.mu_plus.values[j];
    r.width = r.tau_plus - r.tau_minus;
    r.err_budget = t.mu_plus.err_est[j] + t.mu_minus.err_est[j];
    // T+'s form restricts T-'s, so xi+_2 >= xi-_2.
    r.valid = r.tau_plus < xi2 + t.mu_plus.values[0] && r.tau_minus < xi2 + t.mu_minus.values[0];
    rows_ok = rows_ok && r.valid;
    t.rows.push_back(r);
  }
  check("bracketed levels below the second transverse level", "bracketed level above the second transverse level",
        rows_ok, true);

  t.n_max = budget(curve.length(), beta);
  const std::size_t n_count = std::max(config.n1d, 8 * t.n_max);
  t.count_plus = count_below(build_U(curve, a, Sign::plus, {n_count, Boundary::periodic}), -t.zeta_plus.zeta);
  t.count_minus = count_below(build_U(curve, a, Sign::minus, {n_count, Boundary::periodic}), -t.zeta_minus.zeta);

  check("beta*a > 8/3", "beta*a <= 8/3", beta * a > 8.0 / 3.0, false);
  check("beta*a > 8", "beta*a <= 8", beta * a > 8.0, false);
  check("beta > 8/3*gamma_plus", "beta <= 8/3*gamma_plus", beta > 8.0 / 3.0 * gp, false);
  check("a < 1/(sqrt2*gamma_plus)", "a >= 1/(sqrt2*gamma_plus)", std::sqrt(2.0) * a * gp < 1.0, false);
  check("zeta_plus inside its bound", "zeta_plus outside its bound", t.zeta_plus.certified, false);
  check("zeta_minus inside its bound", "zeta_minus outside its bound", t.zeta_minus.certified, false);
  if (std::sqrt(2.0) * a * gp < 1.0) {
    t.gap = positive_floor_minus(a, beta, gp);
    check("xi_2 >= floor", "xi_2 < floor", t.gap.clear() && t.xi_minus_2 + xi.err_est[1] >= t.gap.floor, false);
  }
  return finish();
}

CountResult count_discrete_spectrum(const BracketConfig& config, double beta) {
  BracketConfig c = config;
  c.n = 1;
  const auto t = bracket_eigenvalues(c, beta);
  CountResult r;
  r.beta = beta;
  r.a = t.a.value;
  r.lower = t.count_plus;
  r.upper = t.count_minus;
  r.l_beta_over_2pi = config.curve.length() * beta / (2.0 * std::numbers::pi);
  r.n_max = t.n_max;
  r.checks = t.checks;
  r.valid = t.valid;
  r.certified = t.certified;
  r.violated = t.violated;
  return r;
}

AsymptoticsReport sweep_theorem1(const BracketConfig& config) {
  const auto betas = sorted_betas(config);
  const auto mu = eigenvalues_1d(build_S(config.curve, {config.n1d, Boundary::periodic}), config.n);

  using Points = std::pair<std::vector<RemainderPoint>, BetaChecks>;
  const auto per_beta = parallel_map<Points>(betas.size(), config.workers, [&](std::size_t i) {
    const double beta = betas[i];
    const auto t = bracket_eigenvalues(config, beta);
    std::optional<Spectrum1D> kp, km;
    if (config.strip && t.valid) {
      const auto g = StripGeometry::from_curve(config.curve, config.radius.a1);
      kp = lowest_eigenvalues(assemble_strip(g, t.a.value, beta, *config.strip, Sign::plus), config.n);
      km = lowest_eigenvalues(assemble_strip(g, t.a.value, beta, *config.strip, Sign::minus), config.n);
    }
    std::vector<RemainderPoint> pts;
    for (std::size_t j = 0; j < config.n; ++j) {
      RemainderPoint p;
      p.beta = beta;
      p.a = t.a.value;
      p.n = j + 1;
      p.mu = mu.values[j];
      p.scale = std::log(beta) / beta;
      p.violated = t.violated;
      p.certified = t.certified;
      if (j < t.rows.size()) {
        const auto& r = t.rows[j];
        p.tau_minus = r.tau_minus;
        p.tau_plus = r.tau_plus;
        p.midpoint = 0.5 * (r.tau_minus + r.tau_plus);
        p.remainder = p.midpoint + 0.25 * beta * beta - p.mu;
        p.width = r.width;
        p.valid = t.valid && r.valid;
      }
      if (kp && km) p.strip_remainder = 0.5 * (kp->values[j] + km->values[j]) + 0.25 * beta * beta - p.mu;
      pts.push_back(p);
    }
    return Points{std::move(pts), BetaChecks{beta, t.checks}};
  });

  AsymptoticsReport rep;
  std::size_t valid_betas = 0;
  for (const auto& [pts, checks] : per_beta) {
    if (!pts.empty() && pts.front().valid) ++valid_betas;
    rep.remainders.insert(rep.remainders.end(), pts.begin(), pts.end());
    rep.checks.push_back(checks);
  }
  if (valid_betas < 4) {
    std::ostringstream msg;
    msg << "sweep_theorem1: " << valid_betas << " valid beta points, need at least 4";
    throw PreconditionError(msg.str());
  }

  std::vector<std::pair<double, double>> w, r, jv;
  std::vector<double> sw, sr, sj;
  for (const auto& p : rep.remainders) {
    if (!p.valid) continue;
    w.emplace_back(p.beta, p.width);
    sw.push_back(p.scale);
    r.emplace_back(p.beta, std::abs(p.remainder));
    sr.push_back(p.scale);
    jv.emplace_back(p.beta, p.width);
    jv.emplace_back(p.beta, std::abs(p.remainder));
    sj.push_back(p.scale);
    sj.push_back(p.scale);
  }
  rep.width = fit(w, sw);
  rep.remainder = fit(r, sr);
  rep.joint = fit(jv, sj);

  const RemainderPoint* first = nullptr;
  const RemainderPoint* last = nullptr;
  for (const auto& p : rep.remainders)
    if (p.valid && p.n == 1) {
      if (!first) first = &p;
      last = &p;
    }
  if (first && last && first != last) {
    std::ostringstream o;
    o << "n=1 bracket width " << (last->width < first->width ? "decreases" : "does not decrease") << " from beta="
      << first->beta << " to beta=" << last->beta;
    rep.observations.push_back(o.str());
  }
  return rep;
}

AsymptoticsReport sweep_theorem2(const BracketConfig& config) {
  const auto betas = sorted_betas(config);
  const auto results = parallel_map<CountResult>(betas.size(), config.workers,
                                                 [&](std::size_t i) { return count_discrete_spectrum(config, betas[i]); });
  AsymptoticsReport rep;
  std::size_t valid_betas = 0;
  for (const auto& c : results) {
    CountPoint p;
    p.beta = c.beta;
    p.a = c.a;
    p.lower = c.lower;
    p.upper = c.upper;
    p.l_beta_over_2pi = c.l_beta_over_2pi;
    p.residual = 0.5 * static_cast<double>(c.lower + c.upper) - c.l_beta_over_2pi;
    const double lo = static_cast<double>(c.lower), hi = static_cast<double>(c.upper);
    p.distance = std::max({0.0, lo - c.l_beta_over_2pi, c.l_beta_over_2pi - hi});
    p.deviation = std::max(std::abs(lo - c.l_beta_over_2pi), std::abs(hi - c.l_beta_over_2pi));
    p.n_max = c.n_max;
    p.scale = std::log(c.beta);
    p.valid = c.valid;
    p.certified = c.certified;
    p.violated = c.violated;
    if (p.valid) ++valid_betas;
    rep.counts.push_back(p);
    rep.checks.push_back({c.beta, c.checks});
  }
  if (valid_betas < 4) {
    std::ostringstream msg;
    msg << "sweep_theorem2: " << valid_betas << " valid beta points, need at least 4";
    throw PreconditionError(msg.str());
  }
  std::vector<std::pair<double, double>> d, r, v;
  std::vector<double> sd;
  for (const auto& p : rep.counts) {
    if (!p.valid) continue;
    d.emplace_back(p.beta, p.distance);
    r.emplace_back(p.beta, std::abs(p.residual));
    v.emplace_back(p.beta, p.deviation);
    sd.push_back(p.scale);
  }
  rep.distance = fit(d, sd);
  rep.residual = fit(r, sd);
  rep.deviation = fit(v, sd);
  for (const auto& p : rep.counts)
    if (p.upper > p.n_max) {
      std::ostringstream o;
      o << "#K- = " << p.upper << " exceeds n_max = " << p.n_max << " at beta=" << p.beta;
      rep.observations.push_back(o.str());
    }
  for (std::size_t i = 1; i < rep.counts.size(); ++i) {
    const auto& p = rep.counts[i - 1];
    const auto& q = rep.counts[i];
    if (q.lower < p.lower || q.upper < p.upper) {
      std::ostringstream o;
      o << "counts decrease between beta=" << p.beta << " and beta=" << q.beta;
      rep.observations.push_back(o.str());
    }
  }
  if (std::none_of(rep.observations.begin(), rep.observations.end(),
                   [](const std::string& s) { return s.starts_with("counts decrease"); }))
    rep.observations.push_back("counts are nondecreasing in beta");
  return rep;
}

double max_ratio_at(const std::vector<RemainderPoint>& points, double beta) {
  double m = 0.0;
  for (const auto& p : points)
    if (p.valid && p.beta == beta) m = std::max({m, p.width / p.scale, std::abs(p.remainder) / p.scale});
  return m;
}

std::string AsymptoticsReport::summary() const {
  std::ostringstream o;
  o << std::setprecision(6);
  auto line = [&](const char* name, const Fit& f, const char* scale) {
    o << name << ": C = " << f.constant << " (max value / " << scale << "), log-log slope = " << f.slope
      << ", points = " << f.points << '\n';
  };
  if (!remainders.empty()) {
    line("bracket width", width, "log(beta)/beta");
    line("remainder", remainder, "log(beta)/beta");
    line("joint", joint, "log(beta)/beta");
    for (const auto& p : remainders)
      if (!p.valid) o << "beta=" << p.beta << " n=" << p.n << " not valid: " << p.violated << '\n';
  }
  if (!counts.empty()) {
    line("count distance", distance, "log(beta)");
    line("count residual", residual, "log(beta)");
    line("count deviation", deviation, "log(beta)");
    for (const auto& p : counts)
      if (!p.valid) o << "beta=" << p.beta << " not valid: " << p.violated << '\n';
  }
  for (const auto& s : observations) o << "observation: " << s << '\n';
  return o.str();
}

}  // namespace deltaloop
