// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "deltaloop/bracketing.hpp"
#include "deltaloop/curve.hpp"
#include "deltaloop/operator1d.hpp"
#include "deltaloop/strip.hpp"
#include "deltaloop/transverse.hpp"

using namespace deltaloop;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::size_t workers() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

std::vector<double> geometric(double first, double last, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = first * std::pow(last / first, static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

const std::vector<double> kLatticeBetas = geometric(5.0, 200.0, 10);
const std::vector<double> kLatticeProducts = {3.0, 5.5, 10.0, 15.0, 20.0};

Outcome transverse_plus() {
  std::size_t inside = 0, points = 0;
  double worst_residual = 0.0;
  for (double beta : kLatticeBetas) {
    for (double ba : kLatticeProducts) {
      const auto r = solve_zeta_plus(ba / beta, beta);
      ++points;
      worst_residual = std::max(worst_residual, std::abs(r.residual));
      if (r.zeta > r.lower_bound && r.zeta < r.upper_bound) ++inside;
    }
  }
  return {points == 50 && inside == points && worst_residual <= 1e-12,
          fmt("%zu/%zu points strictly inside, max |g| = %.2e", inside, points, worst_residual)};
}

Outcome transverse_minus() {
  std::size_t inside = 0, points = 0;
  for (double gamma : {0.5, 1.0, 2.0}) {
    for (double beta : kLatticeBetas) {
      for (double ba : kLatticeProducts) {
        if (!(ba > 8.0) || !(beta > 8.0 / 3.0 * gamma)) continue;
        const auto r = solve_zeta_minus(ba / beta, beta, gamma);
        ++points;
        if (r.zeta > r.lower_bound && r.zeta < r.upper_bound) ++inside;
      }
    }
  }
  return {points > 0 && inside == points, fmt("%zu/%zu points strictly inside", inside, points)};
}

Outcome oracle_cross_validation() {
  constexpr double a = 1.0, beta = 10.0, gamma = 1.0, constant = 2000.0;
  const std::vector<std::size_t> grids = {500, 1000, 2000, 4000};
  bool pass = true;
  std::string detail;
  for (Sign s : {Sign::plus, Sign::minus}) {
    const TransverseProblem p{a, beta, gamma, s};
    const double exact = transverse_ground_state(p).zeta;
    std::vector<double> errors;
    for (std::size_t n : grids) errors.push_back(std::abs(fd_transverse_oracle(p, n, 1).values[0] - exact));
    double order = INFINITY;
    for (std::size_t i = 1; i < errors.size(); ++i) order = std::min(order, std::log2(errors[i - 1] / errors[i]));
    const double n = static_cast<double>(grids.back());
    const double bound = 5e-3 * beta * beta / (n * n) * constant;
    pass = pass && errors.back() <= bound && order >= 1.8;
    detail += fmt("%s: err(4000) = %.3e <= %.3e, min order %.3f; ", to_string(s).c_str(), errors.back(), bound, order);
  }
  detail += "const = 2000";
  return {pass, detail};
}

double perturbation_constant(const ArcCurve& curve, std::size_t n) {
  const auto s = eigenvalues_1d(build_S(curve, {n, Boundary::periodic}), 20);
  double c = 0.0;
  for (double a : {0.002, 0.005, 0.01, 0.02}) {
    for (Sign sign : {Sign::plus, Sign::minus}) {
      const auto u = eigenvalues_1d(build_U(curve, a, sign, {n, Boundary::periodic}), 20);
      for (std::size_t j = 0; j < 20; ++j) {
        const double jj = static_cast<double>(j + 1);
        c = std::max(c, std::abs(u.values[j] - s.values[j]) / (a * jj * jj));
      }
    }
  }
  return c;
}

Outcome perturbation_bound() {
  bool pass = true;
  std::string detail;
  const std::pair<const char*, CurveSpec> curves[] = {{"circle", CurveSpec::circle(1.0)},
                                                      {"ellipse", CurveSpec::ellipse(2.0, 1.0)}};
  for (const auto& [name, spec] : curves) {
    const auto curve = build_curve(spec);
    const double c512 = perturbation_constant(curve, 512);
    const double c1024 = perturbation_constant(curve, 1024);
    pass = pass && c512 <= 1e3 && c1024 <= 1e3 && c1024 <= 1.05 * c512;
    detail += fmt("%s C(512) = %.6f, C(1024) = %.6f; ", name, c512, c1024);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome circle_spectrum() {
  const auto s = eigenvalues_1d(build_S(build_curve(CurveSpec::circle(1.0)), {512, Boundary::periodic}), 5);
  const double expected[] = {-0.25, 0.75, 0.75, 3.75, 3.75};
  double worst = 0.0;
  for (std::size_t j = 0; j < 5; ++j) worst = std::max(worst, std::abs(s.values[j] - expected[j]));
  return {worst <= 1e-6, fmt("max deviation %.2e", worst)};
}

Outcome strong_coupling_expansion() {
  auto config = BracketConfig::make(build_curve(CurveSpec::circle(1.0)), {40.0, 80.0, 160.0, 320.0});
  config.n = 5;
  config.workers = workers();
  const auto r = sweep_theorem1(config);
  const double r40 = max_ratio_at(r.remainders, 40.0);
  const double r320 = max_ratio_at(r.remainders, 320.0);
  const bool all_valid = r.joint.points == 2 * 5 * config.betas.size();
  return {all_valid && r40 > 0.0 && r320 <= 1.2 * r40,
          fmt("C = %.4f over %zu values (width C %.4f, remainder C %.4f); max ratio %.4f at 40, %.4f at 320",
              r.joint.constant, r.joint.points, r.width.constant, r.remainder.constant, r40, r320)};
}

Outcome counting_function() {
  bool pass = true;
  std::string detail;
  const std::pair<const char*, CurveSpec> curves[] = {{"circle", CurveSpec::circle(1.0)},
                                                      {"ellipse", CurveSpec::ellipse(2.0, 1.0)}};
  for (const auto& [name, spec] : curves) {
    auto config = BracketConfig::make(build_curve(spec), {50.0, 100.0, 200.0, 400.0});
    config.workers = workers();
    const auto r = sweep_theorem2(config);
    bool ordered = r.counts.size() == config.betas.size();
    double c_full = 0.0, c_first = 0.0, distance = 0.0;
    for (const auto& p : r.counts) {
      ordered = ordered && p.valid && p.lower <= p.upper;
      const double c = std::abs(p.residual) / p.scale;
      c_full = std::max(c_full, c);
      if (p.beta <= 100.0) c_first = std::max(c_first, c);
      distance = std::max(distance, p.distance);
    }
    const double drift = c_full > c_first ? (c_first > 0.0 ? c_full / c_first - 1.0 : INFINITY) : 0.0;
    pass = pass && ordered && drift <= 0.2;
    detail += fmt("%s: K+ <= K- %s, C = %.4f, drift %.1f%%, max distance %.3f, deviation C %.3f; ", name,
                  ordered ? "yes" : "no", c_full, 100.0 * drift, distance, r.deviation.constant);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome bracket_sandwich() {
  const auto curve = build_curve(CurveSpec::circle(1.0));
  auto config = BracketConfig::make(curve, {40.0, 80.0});
  config.n = 3;
  const auto geometry = StripGeometry::from_curve(curve, config.radius.a1);
  const StripGrid grid{512, 128};
  bool pass = true;
  double worst = -INFINITY;
  for (double beta : config.betas) {
    const auto table = bracket_eigenvalues(config, beta);
    const double a = table.a.value;
    const auto minus = lowest_eigenvalues(assemble_strip(geometry, a, beta, grid, Sign::minus), 3);
    const auto plus = lowest_eigenvalues(assemble_strip(geometry, a, beta, grid, Sign::plus), 3);
    pass = pass && table.valid && table.rows.size() == 3;
    for (std::size_t j = 0; j < std::min<std::size_t>(3, table.rows.size()); ++j) {
      const auto& row = table.rows[j];
      const double eps_lo = minus.err_est[j] + row.err_budget;
      const double eps_hi = plus.err_est[j] + row.err_budget;
      const double eps_mid = minus.err_est[j] + plus.err_est[j];
      const double v1 = row.tau_minus - eps_lo - minus.values[j];
      const double v2 = minus.values[j] - plus.values[j] - eps_mid;
      const double v3 = plus.values[j] - row.tau_plus - eps_hi;
      worst = std::max({worst, v1, v2, v3});
      pass = pass && v1 <= 0.0 && v2 <= 0.0 && v3 <= 0.0;
    }
  }
  return {pass, fmt("largest sandwich violation %.3e (<= 0 required)", worst)};
}

Outcome geometry_certification() {
  bool pass = true;
  std::string detail;
  const std::pair<const char*, CurveSpec> curves[] = {{"circle", CurveSpec::circle(1.0)},
                                                      {"ellipse", CurveSpec::ellipse(2.0, 1.0)}};
  for (const auto& [name, spec] : curves) {
    const auto curve = build_curve(spec);
    // The map is defined on the open band; the outermost samples sit 1e-12 inside it.
    const double u_max = 0.5 / curve.gamma_sup() * (1.0 - 1e-12);
    double det_min = INFINITY;
    constexpr std::size_t ns = 2000, nu = 25;
    for (std::size_t i = 0; i < ns; ++i) {
      const double s = curve.length() * static_cast<double>(i) / ns;
      for (int k = -static_cast<int>(nu); k <= static_cast<int>(nu); ++k)
        det_min = std::min(det_min, tubular_jacobian(curve, s, u_max * k / static_cast<double>(nu)));
    }
    const auto radius = certify_tubular_radius(curve, 2000);
    const auto scan = collision_scan(curve, radius.a1, 2000, 50);
    pass = pass && det_min >= 0.5 && scan.injective();
    detail += fmt("%s: min det %.12f, a1 = %.6f, %zu collisions among %zu candidates; ", name, det_min, radius.a1,
                  scan.collisions, scan.candidate_pairs);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome transverse_gap() {
  // Five (a, beta) pairs per gamma_+: a spans (0, 1/(sqrt2 gamma_+)), beta a spans (8, 40].
  std::size_t points = 0, above = 0, clear = 0;
  double worst_margin = INFINITY;
  for (double gamma : {0.5, 1.0, 2.0, 4.0}) {
    for (int i = 0; i < 5; ++i) {
      const double a = (0.15 + 0.18 * i) / (std::numbers::sqrt2 * gamma);
      const double beta = std::max((10.0 + 7.5 * i) / a, 3.0 * gamma);
      if (!(beta * a > 8.0) || !(beta > 8.0 / 3.0 * gamma) || !(std::numbers::sqrt2 * a * gamma < 1.0)) continue;
      ++points;
      const auto floor = positive_floor_minus(a, beta, gamma);
      const auto fd = fd_transverse_oracle({a, beta, gamma, Sign::minus}, 4000, 2);
      const double margin = fd.values[1] - (floor.floor - fd.err_est[1]);
      worst_margin = std::min(worst_margin, margin / floor.floor);
      if (margin >= 0.0) ++above;
      if (floor.clear()) ++clear;
    }
  }
  return {points == 20 && above == points && clear == points,
          fmt("%zu/%zu above the floor (min relative margin %.4f), %zu/%zu scans clear", above, points, worst_margin,
              clear, points)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "transverse plus bounds", 1.0, transverse_plus},
      {2, "transverse minus bounds", 1.0, transverse_minus},
      {3, "secular vs finite-difference oracle", 10.0, oracle_cross_validation},
      {4, "tilted 1D perturbation constant", 30.0, perturbation_bound},
      {5, "closed-form circle spectrum", 1.0, circle_spectrum},
      {6, "strong-coupling remainder sweep", 120.0, strong_coupling_expansion},
      {7, "counting function sweep", 120.0, counting_function},
      {8, "bracket sandwich vs strip solver", 300.0, bracket_sandwich},
      {9, "tubular geometry certification", 30.0, geometry_certification},
      {10, "transverse spectral gap", 10.0, transverse_gap},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && elapsed < c.budget_s;
    if (!pass) ++failures;
    std::printf("%s [%d] %s: %s (%.2f s, budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                elapsed, c.budget_s);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
