#include "run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "deltaloop/bracketing.hpp"
#include "deltaloop/csv.hpp"
#include "deltaloop/errors.hpp"
#include "deltaloop/parallel.hpp"
#include "deltaloop/strip.hpp"
#include "deltaloop/transverse.hpp"

namespace deltaloop::cli {

namespace {

constexpr const char* kLengthUnits = "lengths in curve units; beta in 1/length; eigenvalues in 1/length^2";

class Outputs {
 public:
  Outputs(const RunConfig& config, RunResult& result) : dir_(config.out), result_(result) {
    std::filesystem::create_directories(dir_);
  }

  std::ofstream open(const std::string& name) {
    const auto path = dir_ / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    result_.files.push_back(path);
    return f;
  }

 private:
  std::filesystem::path dir_;
  RunResult& result_;
};

std::string beta_tag(double beta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", beta);
  return buf;
}

std::vector<Sign> signs(Variants v) {
  switch (v) {
    case Variants::plus: return {Sign::plus};
    case Variants::minus: return {Sign::minus};
    case Variants::both: break;
  }
  return {Sign::minus, Sign::plus};
}

const char* level(const HypothesisCheck& c) { return c.needed_for_validity ? "validity" : "certification"; }

CsvWriter manifest_writer(std::ofstream& f) {
  return CsvWriter(f, {"beta", "variant", "hypothesis", "level", "holds"},
                   "beta [1/length]; hypothesis flags per beta (level validity: bracket applies; level "
                   "certification: analytic transverse bounds apply)");
}

void write_checks(CsvWriter& w, double beta, const std::string& variant, const std::vector<HypothesisCheck>& checks) {
  for (const auto& c : checks) w.row({beta, variant, c.name, std::string(level(c)), c.holds});
}

BracketConfig bracket_config(const RunConfig& c) {
  const ArcCurve curve = build_curve(*c.curve);
  BracketConfig b{.curve = curve, .radius = certify_tubular_radius(curve, c.density), .betas = c.betas};
  b.n = c.n;
  b.n1d = c.n1d;
  b.nu_check = c.nu_check;
  b.workers = c.workers;
  if (c.strip_in_sweep) b.strip = c.strip_grid;
  return b;
}

void run_geometry(const RunConfig& c, Outputs& out, std::ostream& log) {
  const ArcCurve curve = build_curve(*c.curve);
  {
    auto f = out.open("curvature.csv");
    CsvWriter w(f, {"s", "gamma", "dgamma", "ddgamma"},
                "s [length]; gamma [1/length]; dgamma [1/length^2]; ddgamma [1/length^3]");
    for (const auto& p : curvature_profile(curve, c.density)) w.row({p.s, p.gamma, p.dgamma, p.ddgamma});
  }
  const auto r = certify_tubular_radius(curve, c.density);
  auto f = out.open("tubular.csv");
  CsvWriter w(f,
              {"length", "gamma_plus", "dgamma_plus", "ddgamma_plus", "total_turning", "a0", "tau", "a1",
               "candidate_pairs", "collisions"},
              "length, a0, tau, a1 [length]; gamma_plus [1/length]; dgamma_plus [1/length^2]; ddgamma_plus "
              "[1/length^3]; total_turning [rad]; counts [dimensionless]");
  w.row({curve.length(), curve.gamma_sup(), curve.dgamma_sup(), curve.ddgamma_sup(), curve.total_turning(), r.a0,
         r.tau, r.a1, r.certificate.candidate_pairs, r.certificate.collisions});
  log << "L = " << curve.length() << ", a1 = " << r.a1 << ", collisions = " << r.certificate.collisions << '\n';
}

void write_spectrum(Outputs& out, const std::string& name, const Spectrum1D& s) {
  auto f = out.open(name);
  CsvWriter w(f, {"j", "mu", "err_est"}, "j [index, 1-based]; mu [1/length^2]; err_est [1/length^2]");
  for (std::size_t j = 0; j < s.size(); ++j) w.row({j + 1, s.values[j], s.err_est[j]});
}

void run_spectrum_1d(const RunConfig& c, Outputs& out, std::ostream& log) {
  const ArcCurve curve = build_curve(*c.curve);
  const Grid1D grid{c.n1d, c.boundary};
  if (c.op == "S") {
    write_spectrum(out, "spectrum_S.csv", eigenvalues_1d(build_S(curve, grid), c.n));
    return;
  }
  for (Sign s : signs(c.variants)) {
    const auto spec = eigenvalues_1d(build_U(curve, *c.a, s, grid), c.n);
    write_spectrum(out, "spectrum_U_" + to_string(s) + ".csv", spec);
    log << "U" << to_string(s) << ": mu_1 = " << spec.values[0] << '\n';
  }
}

void run_transverse(const RunConfig& c, Outputs& out, RunResult& result, std::ostream& log) {
  double gamma = 0.0;
  if (c.gamma_plus) gamma = *c.gamma_plus;
  else if (c.curve) gamma = build_curve(*c.curve).gamma_sup();

  auto f = out.open("transverse.csv");
  CsvWriter w(f,
              {"a", "beta", "gamma_plus", "variant", "zeta", "k", "residual", "lower_bound", "upper_bound",
               "certified", "violated"},
              "a [length]; beta, gamma_plus, k [1/length]; zeta, lower_bound, upper_bound [1/length^2]; "
              "residual [dimensionless]");
  auto mf = out.open("manifest.csv");
  auto m = manifest_writer(mf);
  const double a = *c.a;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double beta : c.betas) {
    for (Sign s : signs(c.variants)) {
      const TransverseProblem p{a, beta, gamma, s};
      std::vector<HypothesisCheck> checks;
      if (s == Sign::plus) {
        checks = {{"beta*a > 2", "beta*a <= 2", beta * a > 2.0, true},
                  {"beta*a > 8/3", "beta*a <= 8/3", beta * a > 8.0 / 3.0, false}};
      } else {
        checks = {{"a*gamma_plus <= 1", "a*gamma_plus > 1 (second negative eigenvalue)", a * gamma <= 1.0, true},
                  {"beta*a > 8", "beta*a <= 8", beta * a > 8.0, false},
                  {"beta > 8/3*gamma_plus", "beta <= 8/3*gamma_plus", beta > 8.0 / 3.0 * gamma, false}};
      }
      const bool exists = s == Sign::minus || checks.front().holds;
      if (!exists) {
        write_checks(m, beta, to_string(s), checks);
        w.row({a, beta, gamma, to_string(s), nan, nan, nan, nan, nan, false, checks.front().failure});
        ++result.flagged;
        continue;
      }
      const auto r = transverse_ground_state(p);
      checks.push_back({"zeta inside its bound", "zeta outside its bound", r.certified || !r.hypotheses, false});
      write_checks(m, beta, to_string(s), checks);
      w.row({a, beta, gamma, to_string(s), r.zeta, r.k, r.residual, r.lower_bound, r.upper_bound, r.certified,
             r.violated});
      if (!r.certified) ++result.flagged;
      log << "beta=" << beta << ' ' << to_string(s) << ": zeta = " << r.zeta << (r.certified ? "" : " (flagged)")
          << '\n';
    }
  }
}

std::string row_violation(const BracketTable& t, const BracketRow& r) {
  if (!t.violated.empty()) return t.violated;
  return r.valid ? "" : "bracketed level above the second transverse level";
}

void write_counts(CsvWriter& w, double beta, std::size_t lower, std::size_t upper, double l_beta) {
  w.row({beta, lower, upper, l_beta});
}

const char* kCountUnits = "beta [1/length]; count_lower, count_upper [dimensionless]; L_beta_over_2pi [dimensionless]";

void run_bracket(const RunConfig& c, Outputs& out, RunResult& result, std::ostream& log) {
  const auto cfg = bracket_config(c);
  const auto tables = parallel_map<BracketTable>(c.betas.size(), c.workers,
                                                 [&](std::size_t i) { return bracket_eigenvalues(cfg, c.betas[i]); });
  {
    auto f = out.open("brackets.csv");
    CsvWriter w(f, {"beta", "a", "j", "tau_minus", "tau_plus", "width", "certified", "violated"},
                std::string(kLengthUnits) + "; j [index, 1-based]");
    for (const auto& t : tables) {
      for (const auto& r : t.rows) {
        const bool certified = t.certified && r.valid;
        if (!certified) ++result.flagged;
        w.row({t.beta, t.a.value, r.j, r.tau_minus, r.tau_plus, r.width, certified, row_violation(t, r)});
      }
      if (t.rows.empty()) ++result.flagged;
    }
  }
  {
    auto f = out.open("counts.csv");
    CsvWriter w(f, {"beta", "count_lower", "count_upper", "L_beta_over_2pi"}, kCountUnits);
    for (const auto& t : tables)
      write_counts(w, t.beta, t.count_plus, t.count_minus, cfg.curve.length() * t.beta / (2.0 * std::numbers::pi));
  }
  auto mf = out.open("manifest.csv");
  auto m = manifest_writer(mf);
  for (const auto& t : tables) {
    write_checks(m, t.beta, "both", t.checks);
    log << "beta=" << t.beta << ": a = " << t.a.value << " (" << to_string(t.a.active) << "), "
        << (t.certified ? "certified" : t.valid ? "valid, not certified: " + t.violated : "not valid: " + t.violated)
        << '\n';
  }
}

void run_count(const RunConfig& c, Outputs& out, RunResult& result, std::ostream& log) {
  const auto cfg = bracket_config(c);
  const auto counts = parallel_map<CountResult>(c.betas.size(), c.workers,
                                                [&](std::size_t i) { return count_discrete_spectrum(cfg, c.betas[i]); });
  {
    auto f = out.open("counts.csv");
    CsvWriter w(f, {"beta", "count_lower", "count_upper", "L_beta_over_2pi"}, kCountUnits);
    for (const auto& r : counts) write_counts(w, r.beta, r.lower, r.upper, r.l_beta_over_2pi);
  }
  auto mf = out.open("manifest.csv");
  auto m = manifest_writer(mf);
  for (const auto& r : counts) {
    write_checks(m, r.beta, "both", r.checks);
    if (!r.certified) ++result.flagged;
    log << "beta=" << r.beta << ": [" << r.lower << ", " << r.upper << "], L beta/2pi = " << r.l_beta_over_2pi
        << (r.certified ? "" : " (flagged: " + r.violated + ")") << '\n';
  }
}

void write_report_manifest(Outputs& out, const AsymptoticsReport& rep) {
  auto mf = out.open("manifest.csv");
  auto m = manifest_writer(mf);
  for (const auto& b : rep.checks) write_checks(m, b.beta, "both", b.checks);
}

void run_sweep_thm1(const RunConfig& c, Outputs& out, RunResult& result, std::ostream& log) {
  const auto rep = sweep_theorem1(bracket_config(c));
  {
    auto f = out.open("remainders.csv");
    CsvWriter w(f,
                {"beta", "a", "n", "tau_minus", "tau_plus", "midpoint", "mu", "remainder", "width", "scale",
                 "strip_remainder", "certified", "violated"},
                std::string(kLengthUnits) + "; n [index, 1-based]; scale = log(beta)/beta [1/length]");
    for (const auto& p : rep.remainders) {
      if (!p.certified) ++result.flagged;
      w.row({p.beta, p.a, p.n, p.tau_minus, p.tau_plus, p.midpoint, p.mu, p.remainder, p.width, p.scale,
             p.strip_remainder.value_or(std::numeric_limits<double>::quiet_NaN()), p.certified, p.violated});
    }
  }
  {
    auto f = out.open("fit.txt");
    f << rep.summary();
  }
  write_report_manifest(out, rep);
  log << rep.summary();
}

void run_sweep_thm2(const RunConfig& c, Outputs& out, RunResult& result, std::ostream& log) {
  const auto rep = sweep_theorem2(bracket_config(c));
  {
    auto f = out.open("counts.csv");
    CsvWriter w(f, {"beta", "count_lower", "count_upper", "L_beta_over_2pi"}, kCountUnits);
    for (const auto& p : rep.counts) write_counts(w, p.beta, p.lower, p.upper, p.l_beta_over_2pi);
  }
  {
    auto f = out.open("count_fit.csv");
    CsvWriter w(f, {"beta", "a", "residual", "distance", "deviation", "scale", "certified", "violated"},
                "beta [1/length]; a [length]; residual, distance, deviation [dimensionless]; scale = log(beta)");
    for (const auto& p : rep.counts) {
      if (!p.certified) ++result.flagged;
      w.row({p.beta, p.a, p.residual, p.distance, p.deviation, p.scale, p.certified, p.violated});
    }
  }
  {
    auto f = out.open("fit.txt");
    f << rep.summary();
  }
  write_report_manifest(out, rep);
  log << rep.summary();
}

void run_strip(const RunConfig& c, Outputs& out, std::ostream& log) {
  const ArcCurve curve = build_curve(*c.curve);
  const auto radius = certify_tubular_radius(curve, c.density);
  const auto geometry = StripGeometry::from_curve(curve, radius.a1);

  auto f = out.open("strip_eigenvalues.csv");
  CsvWriter w(f, {"beta", "a", "variant", "form", "j", "kappa", "err_est"},
              std::string(kLengthUnits) + "; j [index, 1-based]");
  auto mf = out.open("manifest.csv");
  auto m = manifest_writer(mf);
  const std::string form = c.form == StripForm::exact ? "exact" : "separated";

  for (double beta : c.betas) {
    const double a = c.a ? *c.a : choose_a(beta, curve, radius).value;
    write_checks(m, beta, "both",
                 {{"a*gamma_plus < 1/2", "a*gamma_plus >= 1/2", a * curve.gamma_sup() < 0.5, true},
                  {"a <= a1", "a > a1", a <= radius.a1, true}});
    for (Sign s : signs(c.variants)) {
      const auto op = assemble_strip(geometry, a, beta, c.strip_grid, s, c.form);
      const auto spec = lowest_eigenvalues(op, c.n);
      for (std::size_t j = 0; j < spec.size(); ++j)
        w.row({beta, a, to_string(s), form, j + 1, spec.values[j], spec.err_est[j]});
      log << "beta=" << beta << ' ' << to_string(s) << ": kappa_1 = " << spec.values[0] << " +- " << spec.err_est[0]
          << '\n';

      const std::string tag = "b" + beta_tag(beta) + "_" + to_string(s);
      if (c.eigenfunction > 0) {
        const auto pairs = strip_eigenpairs(op, c.eigenfunction);
        Eigen::VectorXd v = pairs.functions[c.eigenfunction - 1];
        Eigen::Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        if (v[imax] < 0.0) v = -v;
        auto ef = out.open("eigenfunction_" + tag + "_j" + std::to_string(c.eigenfunction) + ".csv");
        CsvWriter e(ef, {"x", "y", "psi"}, "x, y [length]; psi [1/length], unit L^2 norm");
        for (const auto& p : pushforward_eigenfunction(op, v)) e.row({p.x, p.y, p.psi});
      }
      if (c.export_matrix) {
        auto mx = out.open("matrix_" + tag + ".txt");
        mx << "# row col value (0-based, symmetric, dimension " << op.size() << ", units 1/length^2)\n";
        write_triplets(op, mx);
      }
    }
  }
}

}  // namespace

RunResult run(const RunConfig& config, std::ostream& log) {
  config.validate();
  RunResult result;
  Outputs out(config, result);
  switch (*config.kind) {
    case Kind::geometry: run_geometry(config, out, log); break;
    case Kind::spectrum_1d: run_spectrum_1d(config, out, log); break;
    case Kind::transverse: run_transverse(config, out, result, log); break;
    case Kind::bracket: run_bracket(config, out, result, log); break;
    case Kind::strip: run_strip(config, out, log); break;
    case Kind::sweep_thm1: run_sweep_thm1(config, out, result, log); break;
    case Kind::sweep_thm2: run_sweep_thm2(config, out, result, log); break;
    case Kind::count: run_count(config, out, result, log); break;
  }
  return result;
}

}  // namespace deltaloop::cli
