#pragma once

// Closed planar curves in arc-length parametrization, their curvature data,
// and the tubular map (s, u) -> Gamma(s) + u * n(s).
//
// Sign convention. The signed curvature is
//
//     gamma(s) = Gamma_1''(s) Gamma_2'(s) - Gamma_2''(s) Gamma_1'(s),
//
// which is the negative of the textbook kappa = x'y'' - y'x''. Every curve is
// oriented so that the total turning integral of gamma is +2*pi (a clockwise
// traversal in the usual sense). With the normal n = (-Gamma_2', Gamma_1')
// the offset u > 0 then points out of the enclosed region, and the tubular
// map has Jacobian determinant 1 + u * gamma(s).

#include <cstddef>
#include <memory>
#include <vector>

namespace deltaloop {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double c, Vec2 a) { return {c * a.x, c * a.y}; }
};

double norm(Vec2 v);
double cross(Vec2 a, Vec2 b);
double dot(Vec2 a, Vec2 b);

enum class CurveKind { circle, ellipse, fourier_loop };

// Coefficients of x(t) = sum_k x_cos[k] cos(kt) + x_sin[k] sin(kt), t in [0, 2pi),
// and likewise for y. Index k is the harmonic; x_sin[0] and y_sin[0] are ignored.
struct FourierCoefficients {
  std::vector<double> x_cos;
  std::vector<double> x_sin;
  std::vector<double> y_cos;
  std::vector<double> y_sin;
};

struct CurveSpec {
  CurveKind kind = CurveKind::circle;
  double radius = 1.0;
  double semi_major = 2.0;
  double semi_minor = 1.0;
  FourierCoefficients fourier;
  // Sampling hint for validation scans and the tubular-radius certificate.
  std::size_t sample_density = 2000;

  static CurveSpec circle(double radius);
  static CurveSpec ellipse(double semi_major, double semi_minor);
  static CurveSpec fourier_loop(FourierCoefficients coefficients);
};

struct CurveSample {
  double s = 0.0;
  double gamma = 0.0;
  double dgamma = 0.0;
  double ddgamma = 0.0;
};

struct CurveFrame {
  double s = 0.0;
  Vec2 position;
  Vec2 tangent;       // Gamma'(s), unit length
  Vec2 acceleration;  // Gamma''(s)
  double gamma = 0.0;
  double dgamma = 0.0;
  double ddgamma = 0.0;
};

// Immutable, cheap to copy (shared state).
class ArcCurve {
 public:
  double length() const;
  CurveKind kind() const;

  // All evaluators accept any real s and reduce it modulo length().
  CurveFrame frame(double s) const;
  Vec2 position(double s) const;
  Vec2 tangent(double s) const;
  CurveSample curvature(double s) const;
  double gamma(double s) const;

  // max |gamma|, max |gamma'|, max |gamma''| over [0, L].
  double gamma_sup() const;
  double dgamma_sup() const;
  double ddgamma_sup() const;

  // Quadrature of gamma over one period; +2*pi after orientation.
  double total_turning() const;

  struct Impl;

 private:
  explicit ArcCurve(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  friend ArcCurve build_curve(const CurveSpec& spec);

  std::shared_ptr<const Impl> impl_;
};

// Validates the spec (no cusps, no self-intersections) and reparametrizes by
// arc length. Throws PreconditionError on invalid input and NumericalError
// when the arc-length series does not converge.
ArcCurve build_curve(const CurveSpec& spec);

// n uniformly spaced samples on [0, L).
std::vector<CurveSample> curvature_profile(const ArcCurve& curve, std::size_t n);

// Phi(s, u) = (Gamma_1(s) - u Gamma_2'(s), Gamma_2(s) + u Gamma_1'(s)).
// Requires |u| < 1 / (2 gamma_+).
Vec2 tubular_map(const ArcCurve& curve, double s, double u);

// det of [dPhi/ds, dPhi/du], evaluated from the partial derivatives of the map.
double tubular_jacobian(const ArcCurve& curve, double s, double u);

struct ChordGap {
  double tau = 0.0;  // min |Gamma(t) - Gamma(t + p)| over p in [p_min, L/2]
  double p = 0.0;    // minimizing separation
  double t = 0.0;    // minimizing base point
};

// Dense (t, p) scan followed by golden-section refinement; ties go to the
// smaller p.
ChordGap chord_gap(const ArcCurve& curve, double p_min, std::size_t density);

// Largest half-width a on the grid a_k = rho^k / (2 gamma_+), k >= 1, for
// which every window [k - a, k + a] x [-a, a] is mapped injectively.
double local_injectivity_radius(const ArcCurve& curve, std::size_t density);

struct CollisionReport {
  double half_width = 0.0;
  std::size_t cells_s = 0;
  std::size_t cells_u = 0;
  std::size_t candidate_pairs = 0;  // bounding-box overlaps among non-neighbours
  std::size_t collisions = 0;       // candidate pairs whose cell images intersect
  bool injective() const { return collisions == 0; }
};

// Images of the cells of a cells_s x cells_u partition of [0, L) x (-a, a)
// are tested pairwise for overlap; cells sharing a vertex are skipped.
CollisionReport collision_scan(const ArcCurve& curve, double half_width,
                               std::size_t cells_s, std::size_t cells_u);

struct TubularRadius {
  double a0 = 0.0;   // local injectivity half-width
  double tau = 0.0;  // global chord gap
  double a1 = 0.0;   // min(a0, tau / 4)
  ChordGap gap;
  CollisionReport certificate;
};

TubularRadius certify_tubular_radius(const ArcCurve& curve, std::size_t density);

}  // namespace deltaloop
