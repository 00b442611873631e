#pragma once

// Periodic and open-arc Sturm-Liouville operators -c d^2/ds^2 + q(s) on (0, L):
// the comparison operator S = -d^2/ds^2 - gamma^2/4 and the tilted operators
// U+-_a with kinetic coefficient (1 -+ a gamma_+)^-2 and potential V+-(s).

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "deltaloop/curve.hpp"
#include "deltaloop/tridiagonal.hpp"

namespace deltaloop {

enum class Boundary { periodic, dirichlet, neumann };
enum class Sign { plus, minus };

std::string to_string(Boundary b);
std::string to_string(Sign s);

struct Grid1D {
  std::size_t points = 1024;  // N; spacing L / N
  Boundary boundary = Boundary::periodic;

  void validate() const;
};

// Second-order central differences on nodes s_i = i h:
//   periodic   i = 0..N-1, corner coupling;
//   dirichlet  i = 1..N-1;
//   neumann    i = 0..N, ghost-point reflection symmetrized by the
//              half-weight boundary nodes.
class Operator1D {
 public:
  Operator1D(double length, double kinetic, std::function<double(double)> potential, Grid1D grid);

  double length() const { return length_; }
  double kinetic() const { return kinetic_; }
  const Grid1D& grid() const { return grid_; }
  double spacing() const { return length_ / static_cast<double>(grid_.points); }
  double potential(double s) const { return potential_(s); }

  // Nodes carrying unknowns, in matrix order.
  std::vector<double> nodes() const;
  SymmetricTridiagonal matrix() const;

  // Same operator on a grid with a different number of points.
  Operator1D resampled(std::size_t points) const;

 private:
  double length_;
  double kinetic_;
  std::function<double(double)> potential_;
  Grid1D grid_;
};

// V(s, u) = 1/2 (1+u g)^-3 u g'' - 5/4 (1+u g)^-4 u^2 g'^2 - 1/4 (1+u g)^-2 g^2.
double potential_V(const CurveSample& c, double u);
double potential_V(const ArcCurve& curve, double s, double u);

struct BoundingPotentials {
  double lower = 0.0;  // V_-(s)
  double upper = 0.0;  // V_+(s)
};

// Separated-variable bounds V_-(s) <= V(s, u) <= V_+(s) for |u| < a; requires a gamma_+ < 1/2.
BoundingPotentials potential_bounds_Vpm(const ArcCurve& curve, double a, double s);
BoundingPotentials potential_bounds_Vpm(double gamma_sup, double dgamma_sup, double ddgamma_sup,
                                        double a, double gamma);

Operator1D build_S(const ArcCurve& curve, Grid1D grid);

// U+_a: kinetic (1 - a gamma_+)^-2, potential V_+.  U-_a: (1 + a gamma_+)^-2, V_-.
// Dirichlet / Neumann grids give the open-arc variants (Dirichlet with +, Neumann with -).
Operator1D build_U(const ArcCurve& curve, double a, Sign sign, Grid1D grid);

struct Spectrum1D {
  std::vector<double> values;     // nondecreasing, with multiplicity
  std::vector<double> err_est;    // positive
  std::size_t points = 0;         // grid the values refer to
  double spacing = 0.0;
  Boundary boundary = Boundary::periodic;

  std::size_t size() const { return values.size(); }
};

struct Multiplet {
  double value = 0.0;
  std::size_t first = 0;  // 0-based index into Spectrum1D::values
  std::size_t multiplicity = 0;
};

// Groups eigenvalues closer than 1e-9 * max(1, |mu|).
std::vector<Multiplet> multiplets(const Spectrum1D& spectrum);

// First n eigenvalues of op. Each value is the two-grid Richardson
// extrapolation from the op grid N and the refined grid 2N; err_est is
// |mu_2N - mu_N| / 3. Requires n <= N / 4.
Spectrum1D eigenvalues_1d(const Operator1D& op, std::size_t n);

// Raw eigenvalues on the op grid only (no extrapolation).
std::vector<double> grid_eigenvalues(const Operator1D& op, std::size_t n);

// Number of eigenvalues strictly below threshold. The inertia count on the op
// grid is corrected near the threshold with extrapolated eigenvalues.
std::size_t count_below(const Operator1D& op, double threshold);

}  // namespace deltaloop
