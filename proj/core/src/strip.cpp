#include "deltaloop/strip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "deltaloop/errors.hpp"
#include "deltaloop/transverse.hpp"

namespace deltaloop {

void StripGrid::validate() const {
  if (ns < 64) throw PreconditionError("StripGrid: need N_s >= 64");
  if (nu < 32) throw PreconditionError("StripGrid: need N_u >= 32");
  if (nu % 2 != 0) throw PreconditionError("StripGrid: N_u must be even");
}

StripGeometry StripGeometry::from_curve(const ArcCurve& curve, double a1) {
  StripGeometry g;
  g.length = curve.length();
  g.gamma_plus = curve.gamma_sup();
  g.dgamma_plus = curve.dgamma_sup();
  g.ddgamma_plus = curve.ddgamma_sup();
  g.a1 = a1;
  g.sample = [curve](double s) { return curve.curvature(s); };
  g.curve = curve;
  return g;
}

StripGeometry StripGeometry::from_curve(const ArcCurve& curve) {
  return from_curve(curve, certify_tubular_radius(curve, 2000).a1);
}

StripGeometry StripGeometry::flat(double length) {
  if (!(length > 0.0)) throw PreconditionError("StripGeometry: length must be positive");
  StripGeometry g;
  g.length = length;
  g.a1 = std::numeric_limits<double>::infinity();
  g.sample = [](double s) { return CurveSample{s, 0.0, 0.0, 0.0}; };
  return g;
}

Vec2 StripGeometry::map(double s, double u) const {
  if (curve) return tubular_map(*curve, s, u);
  return {s, u};
}

double StripOperator::form_value(const Eigen::VectorXd& f) const { return f.dot(stiffness * f); }

double StripOperator::spectral_floor() const {
  // On this grid b >= (lowest eigenvalue of the discrete transverse operator
  // of the same variant + min V_-) * mass: the s-kinetic term is nonnegative,
  // V >= V_- and the exact Robin coefficients are >= -gamma_+.
  const auto t = fd_transverse_matrix({a, beta, geometry.gamma_plus, variant}, grid.nu);
  double vmin = std::numeric_limits<double>::infinity();
  for (double s : s_nodes) {
    const auto c = geometry.sample(s);
    const auto v =
        potential_bounds_Vpm(geometry.gamma_plus, geometry.dgamma_plus, geometry.ddgamma_plus, a, c.gamma);
    vmin = std::min(vmin, v.lower);
  }
  const double x = t.eigenvalue(0) + vmin;
  return x - 1.0 - 1e-6 * std::abs(x);
}

StripOperator assemble_strip(const StripGeometry& geometry, double a, double beta, StripGrid grid, Sign variant,
                             StripForm form) {
  grid.validate();
  if (!(a > 0.0)) throw PreconditionError("assemble_strip: need a > 0");
  if (!(beta >= 0.0)) throw PreconditionError("assemble_strip: need beta >= 0");
  if (!(a * geometry.gamma_plus < 0.5)) throw DomainError("assemble_strip: a gamma_+ >= 1/2");
  if (a > geometry.a1) {
    std::ostringstream msg;
    msg << "assemble_strip: a = " << a << " exceeds the certified half-width a1 = " << geometry.a1;
    throw PreconditionError(msg.str());
  }

  StripOperator op;
  op.geometry = geometry;
  op.grid = grid;
  op.a = a;
  op.beta = beta;
  op.variant = variant;
  op.form = form;

  const std::size_t ns = grid.ns, nu = grid.nu;
  const double hs = op.hs(), hu = op.hu();
  const double gp = geometry.gamma_plus, dgp = geometry.dgamma_plus, ddgp = geometry.ddgamma_plus;
  const bool dirichlet = variant == Sign::plus;
  const std::size_t j0 = dirichlet ? 1 : 0;
  const std::size_t j1 = dirichlet ? nu - 1 : nu;
  const std::size_t centre = nu / 2;

  for (std::size_t i = 0; i < ns; ++i) op.s_nodes.push_back(hs * static_cast<double>(i));
  for (std::size_t j = j0; j <= j1; ++j) op.u_nodes.push_back(j == centre ? 0.0 : -a + hu * static_cast<double>(j));
  const std::size_t mu = op.u_nodes.size();
  const std::size_t n = ns * mu;

  auto unknown = [&](std::size_t i, std::size_t j) -> long {
    if (j < j0 || j > j1) return -1;
    return static_cast<long>((i % ns) * mu + (j - j0));
  };
  auto weight = [&](std::size_t j) { return (j == 0 || j == nu) ? 0.5 : 1.0; };
  auto u_at = [&](std::size_t j) { return j == centre ? 0.0 : -a + hu * static_cast<double>(j); };

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * n);
  auto add = [&](long p, long q, double v) {
    if (p >= 0 && q >= 0) trip.emplace_back(static_cast<int>(p), static_cast<int>(q), v);
  };
  // c |f_p - f_q|^2
  auto add_difference = [&](long p, long q, double c) {
    add(p, p, c);
    add(q, q, c);
    add(p, q, -c);
    add(q, p, -c);
  };

  const double c_sep = variant == Sign::plus ? std::pow(1.0 - a * gp, -2) : std::pow(1.0 + a * gp, -2);
  op.mass.assign(n, 0.0);

  for (std::size_t i = 0; i < ns; ++i) {
    const double s = op.s_nodes[i];
    const auto node = geometry.sample(s);
    const auto mid = geometry.sample(s + 0.5 * hs);
    const auto bounds = potential_bounds_Vpm(gp, dgp, ddgp, a, node.gamma);
    const double vsep = variant == Sign::plus ? bounds.upper : bounds.lower;

    for (std::size_t j = j0; j <= j1; ++j) {
      const long p = unknown(i, j);
      const double w = weight(j);
      const double u = u_at(j);
      op.mass[static_cast<std::size_t>(p)] = w * hs * hu;

      // s-kinetic, metric factor at the s-midpoint.
      double c = c_sep;
      if (form == StripForm::exact) {
        const double m = 1.0 + u * mid.gamma;
        c = 1.0 / (m * m);
      }
      add_difference(p, unknown(i + 1, j), w * hu * c / hs);

      // Potential.
      const double v = form == StripForm::exact ? potential_V(node, u) : vsep;
      add(p, p, w * hs * hu * v);
    }
    // u-kinetic over every interval; Dirichlet end nodes drop out.
    for (std::size_t j = 0; j < nu; ++j) {
      const long p = unknown(i, j), q = unknown(i, j + 1);
      const double c = hs / hu;
      if (p >= 0) add(p, p, c);
      if (q >= 0) add(q, q, c);
      if (p >= 0 && q >= 0) {
        add(p, q, -c);
        add(q, p, -c);
      }
    }
    // Delta line.
    add(unknown(i, centre), unknown(i, centre), -beta * hs);
    // Robin ends.
    if (variant == Sign::minus) {
      double top = -gp, bottom = -gp;
      if (form == StripForm::exact) {
        top = -0.5 * node.gamma / (1.0 + a * node.gamma);
        bottom = 0.5 * node.gamma / (1.0 - a * node.gamma);
      }
      add(unknown(i, nu), unknown(i, nu), hs * top);
      add(unknown(i, 0), unknown(i, 0), hs * bottom);
    }
  }

  op.stiffness.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  op.stiffness.setFromTriplets(trip.begin(), trip.end());
  op.stiffness.makeCompressed();

  Eigen::VectorXd scale(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) scale[static_cast<Eigen::Index>(k)] = 1.0 / std::sqrt(op.mass[k]);
  op.matrix = scale.asDiagonal() * op.stiffness * scale.asDiagonal();
  // Scaling rounds (p,q) and (q,p) independently; average them.
  SparseMatrix t = op.matrix.transpose();
  op.matrix = 0.5 * (op.matrix + t);
  op.matrix.makeCompressed();
  return op;
}

StripEigen strip_eigenpairs(const StripOperator& op, std::size_t m) {
  const auto pairs = lowest_eigenpairs(op.matrix, m, op.spectral_floor());
  StripEigen out;
  out.values = pairs.values;
  out.residuals = pairs.residuals;
  out.iterations = pairs.iterations;
  for (Eigen::Index c = 0; c < pairs.vectors.cols(); ++c) {
    Eigen::VectorXd f = pairs.vectors.col(c);
    for (Eigen::Index k = 0; k < f.size(); ++k) f[k] /= std::sqrt(op.mass[static_cast<std::size_t>(k)]);
    out.functions.push_back(std::move(f));
  }
  return out;
}

Spectrum1D lowest_eigenvalues(const StripOperator& op, std::size_t m) {
  if (op.grid.nu % 4 != 0) throw PreconditionError("lowest_eigenvalues: N_u must be divisible by 4");
  const auto fine = strip_eigenpairs(op, m);
  const auto coarse_op =
      assemble_strip(op.geometry, op.a, op.beta, {op.grid.ns / 2, op.grid.nu / 2}, op.variant, op.form);
  const auto coarse = strip_eigenpairs(coarse_op, m);
  Spectrum1D out;
  out.points = op.grid.ns;
  out.spacing = op.hs();
  out.boundary = Boundary::periodic;
  for (std::size_t j = 0; j < m; ++j) {
    out.values.push_back((4.0 * fine.values[j] - coarse.values[j]) / 3.0);
    out.err_est.push_back(std::max(std::abs(fine.values[j] - coarse.values[j]) / 3.0,
                                   1e-15 * std::max(1.0, std::abs(fine.values[j]))));
  }
  return out;
}

std::size_t count_negative(const StripOperator& op) { return count_below(op.matrix, 0.0); }

std::vector<PlanePoint> pushforward_eigenfunction(const StripOperator& op, const Eigen::VectorXd& values) {
  if (static_cast<std::size_t>(values.size()) != op.size())
    throw PreconditionError("pushforward_eigenfunction: value count does not match the grid");
  std::vector<PlanePoint> out;
  out.reserve(op.size());
  for (std::size_t i = 0; i < op.s_nodes.size(); ++i) {
    const double s = op.s_nodes[i];
    const double g = op.geometry.sample(s).gamma;
    for (std::size_t j = 0; j < op.u_nodes.size(); ++j) {
      const double u = op.u_nodes[j];
      const Vec2 x = op.geometry.map(s, u);
      const double f = values[static_cast<Eigen::Index>(op.index(i, j))];
      out.push_back({x.x, x.y, f / std::sqrt(1.0 + u * g)});
    }
  }
  return out;
}

void write_triplets(const StripOperator& op, std::ostream& out) {
  const auto precision = out.precision(17);
  for (int k = 0; k < op.matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(op.matrix, k); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  out.precision(precision);
}

}  // namespace deltaloop
