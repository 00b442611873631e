#pragma once

// Direct discretization of the strip operators B+-_{a,beta} on (0,L) x (-a,a):
//
//   b(f) = int (1+u gamma)^-2 |f_s|^2 + |f_u|^2 + V(s,u) |f|^2 - beta int |f(s,0)|^2
//          [minus: - 1/2 int gamma/(1+a gamma) |f(s,a)|^2 + 1/2 int gamma/(1-a gamma) |f(s,-a)|^2]
//
// Nodes s_i = i h_s (periodic), u_j = -a + j h_u, j = 0..N_u. The plus
// variant keeps the interior u-nodes only (Dirichlet). The form is assembled
// with lumped trapezoid weights: s-differences carry the metric factor at the
// s-midpoint, u-differences are exact for piecewise linears, the delta line
// contributes -beta h_s |f(s_i, 0)|^2, and boundary terms h_s times the
// printed coefficients. The matrix handed to the eigensolver is
// M^{-1/2} K M^{-1/2} with the diagonal mass M.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "deltaloop/curve.hpp"
#include "deltaloop/operator1d.hpp"
#include "deltaloop/sparse_eigen.hpp"

namespace deltaloop {

struct StripGrid {
  std::size_t ns = 512;
  std::size_t nu = 128;  // intervals across the strip; even, so u = 0 is a grid line

  void validate() const;
};

// Curve data the strip needs. A flat geometry (gamma = 0) describes a
// straight periodic strip of the given length.
struct StripGeometry {
  double length = 0.0;
  double gamma_plus = 0.0;
  double dgamma_plus = 0.0;
  double ddgamma_plus = 0.0;
  double a1 = 0.0;  // certified injectivity half-width
  std::function<CurveSample(double)> sample;
  std::optional<ArcCurve> curve;

  static StripGeometry from_curve(const ArcCurve& curve, double a1);
  static StripGeometry from_curve(const ArcCurve& curve);  // certifies a1 itself
  static StripGeometry flat(double length);

  Vec2 map(double s, double u) const;
};

enum class StripForm {
  exact,     // b+- with V(s,u) and the metric factor
  separated  // constant kinetic coefficient (1 -+ a gamma_+)^-2, V+-(s), Robin -gamma_+
};

struct StripOperator {
  StripGeometry geometry;
  StripGrid grid;
  double a = 0.0;
  double beta = 0.0;
  Sign variant = Sign::plus;
  StripForm form = StripForm::exact;

  std::vector<double> s_nodes;
  std::vector<double> u_nodes;  // u-nodes carrying unknowns
  SparseMatrix stiffness;       // form matrix K
  std::vector<double> mass;     // lumped mass per unknown
  SparseMatrix matrix;          // M^{-1/2} K M^{-1/2}

  std::size_t size() const { return mass.size(); }
  std::size_t index(std::size_t i, std::size_t j) const { return i * u_nodes.size() + j; }
  double hs() const { return geometry.length / static_cast<double>(grid.ns); }
  double hu() const { return 2.0 * a / static_cast<double>(grid.nu); }

  // K-form of nodal values.
  double form_value(const Eigen::VectorXd& f) const;
  // Lower bound for the spectrum used as the factorization shift.
  double spectral_floor() const;
};

// Throws DomainError when a gamma_+ >= 1/2, PreconditionError when a > a1.
StripOperator assemble_strip(const StripGeometry& geometry, double a, double beta, StripGrid grid, Sign variant,
                             StripForm form = StripForm::exact);

struct StripEigen {
  std::vector<double> values;
  std::vector<double> residuals;
  int iterations = 0;
  // Nodal values f(s_i, u_j), unit norm in the lumped L^2 product.
  std::vector<Eigen::VectorXd> functions;
};

// m lowest eigenpairs on the operator's own grid.
StripEigen strip_eigenpairs(const StripOperator& op, std::size_t m);

// m lowest eigenvalues, Richardson-extrapolated against the grid
// (ns/2, nu/2); err_est = |kappa_h - kappa_2h| / 3. Requires nu % 4 == 0.
Spectrum1D lowest_eigenvalues(const StripOperator& op, std::size_t m);

std::size_t count_negative(const StripOperator& op);

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
};

// psi(Phi(s,u)) = (1 + u gamma(s))^{-1/2} f(s,u) on the operator's nodes.
std::vector<PlanePoint> pushforward_eigenfunction(const StripOperator& op, const Eigen::VectorXd& values);

// `row col value` lines for every stored entry of op.matrix, 0-based.
void write_triplets(const StripOperator& op, std::ostream& out);

}  // namespace deltaloop
