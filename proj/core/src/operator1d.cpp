#include "deltaloop/operator1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "deltaloop/errors.hpp"

namespace deltaloop {

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::periodic: return "periodic";
    case Boundary::dirichlet: return "dirichlet";
    case Boundary::neumann: return "neumann";
  }
  return "?";
}

std::string to_string(Sign s) { return s == Sign::plus ? "plus" : "minus"; }

void Grid1D::validate() const {
  if (points < 8) throw PreconditionError("Grid1D: need N >= 8");
}

Operator1D::Operator1D(double length, double kinetic, std::function<double(double)> potential, Grid1D grid)
    : length_(length), kinetic_(kinetic), potential_(std::move(potential)), grid_(grid) {
  grid_.validate();
  if (!(length_ > 0.0)) throw PreconditionError("Operator1D: length must be positive");
  if (!(kinetic_ > 0.0)) throw PreconditionError("Operator1D: kinetic coefficient must be positive");
  if (!potential_) throw PreconditionError("Operator1D: missing potential");
}

std::vector<double> Operator1D::nodes() const {
  const std::size_t n = grid_.points;
  const double h = spacing();
  std::vector<double> s;
  switch (grid_.boundary) {
    case Boundary::periodic:
      for (std::size_t i = 0; i < n; ++i) s.push_back(h * static_cast<double>(i));
      break;
    case Boundary::dirichlet:
      for (std::size_t i = 1; i < n; ++i) s.push_back(h * static_cast<double>(i));
      break;
    case Boundary::neumann:
      for (std::size_t i = 0; i <= n; ++i) s.push_back(h * static_cast<double>(i));
      break;
  }
  return s;
}

SymmetricTridiagonal Operator1D::matrix() const {
  const auto s = nodes();
  const std::size_t m = s.size();
  const double h = spacing();
  const double c = kinetic_ / (h * h);
  std::vector<double> diag(m), off(m - 1, -c);
  for (std::size_t i = 0; i < m; ++i) diag[i] = 2.0 * c + potential_(s[i]);
  double corner = 0.0;
  if (grid_.boundary == Boundary::periodic) {
    corner = -c;
  } else if (grid_.boundary == Boundary::neumann) {
    // Half-weight end nodes, symmetrized by the square root of the lumped mass.
    off.front() = -std::sqrt(2.0) * c;
    off.back() = -std::sqrt(2.0) * c;
  }
  return SymmetricTridiagonal(std::move(diag), std::move(off), corner);
}

Operator1D Operator1D::resampled(std::size_t points) const {
  Grid1D g = grid_;
  g.points = points;
  return Operator1D(length_, kinetic_, potential_, g);
}

double potential_V(const CurveSample& c, double u) {
  const double w = 1.0 + u * c.gamma;
  if (!(w > 0.0)) throw DomainError("potential_V: 1 + u*gamma(s) <= 0");
  return 0.5 * std::pow(w, -3) * u * c.ddgamma - 1.25 * std::pow(w, -4) * u * u * c.dgamma * c.dgamma -
         0.25 * std::pow(w, -2) * c.gamma * c.gamma;
}

double potential_V(const ArcCurve& curve, double s, double u) {
  if (!(std::abs(u) * curve.gamma_sup() < 1.0)) throw DomainError("potential_V: need |u| gamma_+ < 1");
  return potential_V(curve.curvature(s), u);
}

BoundingPotentials potential_bounds_Vpm(double gp, double dgp, double ddgp, double a, double gamma) {
  if (!(a >= 0.0) || !(a * gp < 0.5)) throw DomainError("potential_bounds_Vpm: need 0 <= a, a gamma_+ < 1/2");
  const double lo = 1.0 - a * gp, hi = 1.0 + a * gp;
  BoundingPotentials v;
  v.upper = 0.5 * std::pow(lo, -3) * a * ddgp - 1.25 * std::pow(hi, -4) * a * a * dgp * dgp -
            0.25 * std::pow(hi, -2) * gamma * gamma;
  v.lower = -0.5 * std::pow(lo, -3) * a * ddgp - 1.25 * std::pow(lo, -4) * a * a * dgp * dgp -
            0.25 * std::pow(lo, -2) * gamma * gamma;
  return v;
}

BoundingPotentials potential_bounds_Vpm(const ArcCurve& curve, double a, double s) {
  return potential_bounds_Vpm(curve.gamma_sup(), curve.dgamma_sup(), curve.ddgamma_sup(), a, curve.gamma(s));
}

Operator1D build_S(const ArcCurve& curve, Grid1D grid) {
  if (grid.boundary != Boundary::periodic) throw PreconditionError("build_S: periodic grid required");
  auto q = [curve](double s) {
    const double g = curve.gamma(s);
    return -0.25 * g * g;
  };
  return Operator1D(curve.length(), 1.0, q, grid);
}

Operator1D build_U(const ArcCurve& curve, double a, Sign sign, Grid1D grid) {
  const double gp = curve.gamma_sup();
  if (!(a >= 0.0) || !(a * gp < 0.5)) throw DomainError("build_U: need 0 <= a, a gamma_+ < 1/2");
  if (sign == Sign::plus && grid.boundary == Boundary::neumann)
    throw PreconditionError("build_U: the open-arc plus operator carries Dirichlet ends");
  if (sign == Sign::minus && grid.boundary == Boundary::dirichlet)
    throw PreconditionError("build_U: the open-arc minus operator carries Neumann ends");
  const double dgp = curve.dgamma_sup(), ddgp = curve.ddgamma_sup();
  const double c = sign == Sign::plus ? std::pow(1.0 - a * gp, -2) : std::pow(1.0 + a * gp, -2);
  auto q = [curve, a, sign, gp, dgp, ddgp](double s) {
    const auto v = potential_bounds_Vpm(gp, dgp, ddgp, a, curve.gamma(s));
    return sign == Sign::plus ? v.upper : v.lower;
  };
  return Operator1D(curve.length(), c, q, grid);
}

std::vector<Multiplet> multiplets(const Spectrum1D& spectrum) {
  std::vector<Multiplet> out;
  const auto& v = spectrum.values;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!out.empty()) {
      auto& last = out.back();
      const double ref = v[last.first + last.multiplicity - 1];
      if (std::abs(v[i] - ref) <= 1e-9 * std::max(1.0, std::abs(ref))) {
        ++last.multiplicity;
        continue;
      }
    }
    out.push_back({v[i], i, 1});
  }
  for (auto& m : out) {
    double sum = 0.0;
    for (std::size_t k = 0; k < m.multiplicity; ++k) sum += v[m.first + k];
    m.value = sum / static_cast<double>(m.multiplicity);
  }
  return out;
}

std::vector<double> grid_eigenvalues(const Operator1D& op, std::size_t n) {
  const auto a = op.matrix();
  if (n > a.size()) throw PreconditionError("grid_eigenvalues: more eigenvalues than unknowns");
  return a.lowest(n);
}

Spectrum1D eigenvalues_1d(const Operator1D& op, std::size_t n) {
  const std::size_t points = op.grid().points;
  if (n == 0 || n > points / 4) {
    std::ostringstream msg;
    msg << "eigenvalues_1d: need 1 <= n <= N/4 (n=" << n << ", N=" << points << ")";
    throw PreconditionError(msg.str());
  }
  const auto coarse = grid_eigenvalues(op, n);
  const auto fine = grid_eigenvalues(op.resampled(2 * points), n);
  Spectrum1D out;
  out.points = points;
  out.spacing = op.spacing();
  out.boundary = op.grid().boundary;
  out.values.resize(n);
  out.err_est.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(coarse[j]) || !std::isfinite(fine[j])) {
      std::ostringstream msg;
      msg << "eigenvalues_1d: non-finite eigenvalue at index " << j << " (N=" << points << ")";
      throw NumericalError(msg.str());
    }
    out.values[j] = (4.0 * fine[j] - coarse[j]) / 3.0;
    const double floor = 1e-15 * std::max(1.0, std::abs(out.values[j]));
    out.err_est[j] = std::max(std::abs(fine[j] - coarse[j]) / 3.0, floor);
  }
  // Extrapolation can perturb exact ties by round-off; restore order.
  std::sort(out.values.begin(), out.values.end());
  return out;
}

std::size_t count_below(const Operator1D& op, double threshold) {
  const auto a = op.matrix();
  const std::size_t raw = a.count_below(threshold);
  const std::size_t window = 4;
  const std::size_t first = raw > window ? raw - window : 0;
  const std::size_t last = std::min(raw + window, a.size());
  const auto b = op.resampled(2 * op.grid().points).matrix();
  std::size_t count = first;
  for (std::size_t k = first; k < last; ++k) {
    const double mu = (4.0 * b.eigenvalue(k) - a.eigenvalue(k)) / 3.0;
    if (mu < threshold) ++count;
  }
  return count;
}

}  // namespace deltaloop
