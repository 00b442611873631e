#include "deltaloop/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <unordered_map>

#include "deltaloop/errors.hpp"

namespace deltaloop {

double norm(Vec2 v) { return std::hypot(v.x, v.y); }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

CurveSpec CurveSpec::circle(double radius) {
  CurveSpec spec;
  spec.kind = CurveKind::circle;
  spec.radius = radius;
  return spec;
}

CurveSpec CurveSpec::ellipse(double semi_major, double semi_minor) {
  CurveSpec spec;
  spec.kind = CurveKind::ellipse;
  spec.semi_major = semi_major;
  spec.semi_minor = semi_minor;
  return spec;
}

CurveSpec CurveSpec::fourier_loop(FourierCoefficients coefficients) {
  CurveSpec spec;
  spec.kind = CurveKind::fourier_loop;
  spec.fourier = std::move(coefficients);
  return spec;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Derivatives of order 0..4 of the raw parametrization at t.
using Jet = std::array<Vec2, 5>;

struct Harmonic {
  double xc = 0.0, xs = 0.0, yc = 0.0, ys = 0.0;
};

std::vector<Harmonic> to_harmonics(const FourierCoefficients& f) {
  const std::size_t n = std::max({f.x_cos.size(), f.x_sin.size(), f.y_cos.size(), f.y_sin.size()});
  std::vector<Harmonic> h(n);
  auto get = [](const std::vector<double>& v, std::size_t k) { return k < v.size() ? v[k] : 0.0; };
  for (std::size_t k = 0; k < n; ++k) {
    h[k] = {get(f.x_cos, k), k == 0 ? 0.0 : get(f.x_sin, k), get(f.y_cos, k),
            k == 0 ? 0.0 : get(f.y_sin, k)};
  }
  return h;
}

Jet raw_jet(const std::vector<Harmonic>& harmonics, double t) {
  Jet jet{};
  for (std::size_t k = 0; k < harmonics.size(); ++k) {
    const Harmonic& h = harmonics[k];
    const double kk = static_cast<double>(k);
    const double c = std::cos(kk * t);
    const double s = std::sin(kk * t);
    // d^n/dt^n of cos(kt) and sin(kt): phase shifts by pi/2 per derivative.
    const std::array<double, 5> dc = {c, -s, -c, s, c};
    const std::array<double, 5> ds = {s, c, -s, -c, s};
    double scale = 1.0;
    for (int n = 0; n < 5; ++n) {
      if (n > 0) scale *= kk;
      if (k == 0 && n > 0) break;
      jet[n].x += scale * (h.xc * dc[n] + h.xs * ds[n]);
      jet[n].y += scale * (h.yc * dc[n] + h.ys * ds[n]);
    }
  }
  return jet;
}

double speed(const std::vector<Harmonic>& harmonics, double t) {
  return norm(raw_jet(harmonics, t)[1]);
}

// gamma = N / sigma^3 with N = x'' y' - y'' x' (raw derivatives).
double raw_curvature(const Jet& j) {
  const double sigma = norm(j[1]);
  return (j[2].x * j[1].y - j[2].y * j[1].x) / (sigma * sigma * sigma);
}

CurveFrame frame_from_jet(const Jet& j, double s) {
  const Vec2 d1 = j[1], d2 = j[2], d3 = j[3], d4 = j[4];
  const double p = dot(d1, d1);
  const double sigma = std::sqrt(p);
  const double p_t = 2.0 * dot(d1, d2);
  const double p_tt = 2.0 * (dot(d2, d2) + dot(d1, d3));
  const double sigma_t = p_t / (2.0 * sigma);
  const double sigma_tt = (0.5 * p_tt - sigma_t * sigma_t) / sigma;

  const double n0 = d2.x * d1.y - d2.y * d1.x;
  const double n1 = d3.x * d1.y - d1.x * d3.y;
  const double n2 = d4.x * d1.y + d3.x * d2.y - d2.x * d3.y - d1.x * d4.y;

  const double inv = 1.0 / sigma;
  const double inv3 = inv * inv * inv;
  const double inv4 = inv3 * inv;
  const double inv5 = inv4 * inv;

  const double g = n0 * inv3;
  const double g_t = n1 * inv3 - 3.0 * n0 * inv4 * sigma_t;
  const double g_tt = n2 * inv3 - 6.0 * n1 * inv4 * sigma_t + 12.0 * n0 * inv5 * sigma_t * sigma_t -
                      3.0 * n0 * inv4 * sigma_tt;

  CurveFrame f;
  f.s = s;
  f.position = j[0];
  f.tangent = inv * d1;
  f.acceleration = inv3 * (sigma * d2 - sigma_t * d1);
  f.gamma = g;
  f.dgamma = g_t * inv;
  f.ddgamma = (g_tt * sigma - g_t * sigma_t) * inv3;
  return f;
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

}  // namespace

struct ArcCurve::Impl {
  CurveKind kind = CurveKind::circle;
  double radius = 0.0;  // circle only
  std::vector<Harmonic> harmonics;
  // sigma(t) = c0 + sum_k a[k] cos(kt) + b[k] sin(kt), k >= 1
  double c0 = 0.0;
  std::vector<double> a, b;
  double length = 0.0;
  double gamma_sup = 0.0, dgamma_sup = 0.0, ddgamma_sup = 0.0;
  double turning = 0.0;

  double arc_of_t(double t) const {
    double s = c0 * t;
    for (std::size_t k = 1; k < a.size(); ++k) {
      const double kk = static_cast<double>(k);
      s += (a[k] * std::sin(kk * t) + b[k] * (1.0 - std::cos(kk * t))) / kk;
    }
    return s;
  }

  double t_of_s(double s) const {
    if (kind == CurveKind::circle) return s / radius;
    double lo = 0.0, hi = kTwoPi;
    double t = kTwoPi * s / length;
    for (int it = 0; it < 100; ++it) {
      const double f = arc_of_t(t) - s;
      if (std::abs(f) <= 1e-15 * length) return t;
      if (f > 0) hi = std::min(hi, t);
      else lo = std::max(lo, t);
      double next = t - f / speed(harmonics, t);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) <= 4.0 * std::numeric_limits<double>::epsilon() * kTwoPi) return next;
      t = next;
    }
    std::ostringstream msg;
    msg << "arc-length inversion did not reach tolerance 1e-15*L at s=" << s;
    throw NumericalError(msg.str());
  }

  double wrap(double s) const {
    double r = std::fmod(s, length);
    if (r < 0) r += length;
    return r;
  }

  CurveFrame frame(double s) const {
    const double sw = wrap(s);
    if (kind == CurveKind::circle) {
      const double t = sw / radius;
      CurveFrame f;
      f.s = sw;
      f.position = {radius * std::cos(t), -radius * std::sin(t)};
      f.tangent = {-std::sin(t), -std::cos(t)};
      f.acceleration = {-std::cos(t) / radius, std::sin(t) / radius};
      f.gamma = 1.0 / radius;
      return f;
    }
    return frame_from_jet(raw_jet(harmonics, t_of_s(sw)), sw);
  }
};

namespace {

void validate_spec(const CurveSpec& spec) {
  switch (spec.kind) {
    case CurveKind::circle:
      if (!(spec.radius > 0.0)) throw PreconditionError("circle: radius must be positive");
      break;
    case CurveKind::ellipse:
      if (!(spec.semi_minor > 0.0) || !(spec.semi_major >= spec.semi_minor))
        throw PreconditionError("ellipse: semi-axes must satisfy A >= B > 0");
      break;
    case CurveKind::fourier_loop: {
      const auto h = to_harmonics(spec.fourier);
      bool nonconstant = false;
      for (std::size_t k = 1; k < h.size(); ++k)
        nonconstant |= (h[k].xc != 0 || h[k].xs != 0 || h[k].yc != 0 || h[k].ys != 0);
      if (!nonconstant) throw PreconditionError("fourier-loop: no non-constant harmonic given");
      break;
    }
  }
  if (spec.sample_density < 64) throw PreconditionError("sample density must be at least 64");
}

std::vector<Harmonic> harmonics_for(const CurveSpec& spec) {
  switch (spec.kind) {
    case CurveKind::circle: {
      std::vector<Harmonic> h(2);
      h[1] = {spec.radius, 0.0, 0.0, spec.radius};
      return h;
    }
    case CurveKind::ellipse: {
      std::vector<Harmonic> h(2);
      h[1] = {spec.semi_major, 0.0, 0.0, spec.semi_minor};
      return h;
    }
    case CurveKind::fourier_loop:
      return to_harmonics(spec.fourier);
  }
  return {};
}

void check_regular_and_simple(const std::vector<Harmonic>& h, std::size_t density) {
  const std::size_t m = std::max<std::size_t>(4096, 4 * density);
  double smin = std::numeric_limits<double>::infinity(), smax = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double sp = speed(h, kTwoPi * static_cast<double>(i) / static_cast<double>(m));
    smin = std::min(smin, sp);
    smax = std::max(smax, sp);
  }
  if (!(smin > 1e-6 * smax)) {
    std::ostringstream msg;
    msg << "curve rejected: cusped parametrization (min speed " << smin << ", max speed " << smax << ")";
    throw PreconditionError(msg.str());
  }

  const std::size_t n = std::max<std::size_t>(512, density);
  std::vector<Vec2> pts(n);
  for (std::size_t i = 0; i < n; ++i)
    pts[i] = raw_jet(h, kTwoPi * static_cast<double>(i) / static_cast<double>(n))[0];
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p1 = pts[i], p2 = pts[(i + 1) % n];
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(p1, p2, pts[j], pts[(j + 1) % n])) {
        std::ostringstream msg;
        msg << "curve rejected: self-intersecting (segments near t=" << kTwoPi * i / n
            << " and t=" << kTwoPi * j / n << ")";
        throw PreconditionError(msg.str());
      }
    }
  }
}

// Fourier series of the speed, refined until the upper half of the spectrum
// is negligible.
void fit_arc_length(ArcCurve::Impl& impl) {
  constexpr double kTol = 1e-14;
  constexpr std::size_t kMaxSamples = 1u << 15;
  for (std::size_t m = 64; m <= kMaxSamples; m *= 2) {
    std::vector<double> sig(m);
    for (std::size_t i = 0; i < m; ++i)
      sig[i] = speed(impl.harmonics, kTwoPi * static_cast<double>(i) / static_cast<double>(m));
    const std::size_t kmax = m / 2 - 1;
    std::vector<double> a(kmax + 1, 0.0), b(kmax + 1, 0.0);
    double c0 = 0.0;
    for (double v : sig) c0 += v;
    c0 /= static_cast<double>(m);
    for (std::size_t k = 1; k <= kmax; ++k) {
      double ak = 0.0, bk = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double phase = kTwoPi * static_cast<double>((k * i) % m) / static_cast<double>(m);
        ak += sig[i] * std::cos(phase);
        bk += sig[i] * std::sin(phase);
      }
      a[k] = 2.0 * ak / static_cast<double>(m);
      b[k] = 2.0 * bk / static_cast<double>(m);
    }
    double tail = 0.0;
    for (std::size_t k = kmax / 2; k <= kmax; ++k) tail = std::max({tail, std::abs(a[k]), std::abs(b[k])});
    if (tail <= kTol * c0) {
      std::size_t keep = kmax;
      while (keep > 1 && std::abs(a[keep]) <= 1e-17 * c0 && std::abs(b[keep]) <= 1e-17 * c0) --keep;
      a.resize(keep + 1);
      b.resize(keep + 1);
      impl.c0 = c0;
      impl.a = std::move(a);
      impl.b = std::move(b);
      impl.length = kTwoPi * c0;
      return;
    }
  }
  std::ostringstream msg;
  msg << "arc-length reparametrization did not converge: speed spectrum tail above " << kTol
      << " relative with " << kMaxSamples << " samples";
  throw NumericalError(msg.str());
}

double golden_maximize(const std::function<double(double)>& f, double lo, double hi, int iters = 60) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      lo = x1; x1 = x2; f1 = f2; x2 = lo + r * (hi - lo); f2 = f(x2);
    } else {
      hi = x2; x2 = x1; f2 = f1; x1 = hi - r * (hi - lo); f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

}  // namespace

ArcCurve build_curve(const CurveSpec& spec) {
  validate_spec(spec);
  auto impl = std::make_shared<ArcCurve::Impl>();
  impl->kind = spec.kind;
  impl->harmonics = harmonics_for(spec);
  if (spec.kind == CurveKind::fourier_loop) check_regular_and_simple(impl->harmonics, spec.sample_density);

  // Orientation: total turning of gamma must be +2pi.
  {
    const std::size_t m = 4096;
    double turning = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Jet j = raw_jet(impl->harmonics, kTwoPi * static_cast<double>(i) / static_cast<double>(m));
      turning += raw_curvature(j) * norm(j[1]);
    }
    turning *= kTwoPi / static_cast<double>(m);
    if (std::abs(std::abs(turning) - kTwoPi) > 1e-6) {
      std::ostringstream msg;
      msg << "curve rejected: total turning " << turning << " is not +-2pi";
      throw PreconditionError(msg.str());
    }
    if (turning < 0) {
      for (auto& h : impl->harmonics) {
        h.xs = -h.xs;
        h.ys = -h.ys;
      }
    }
    impl->turning = std::abs(turning);
  }

  if (spec.kind == CurveKind::circle) {
    impl->radius = spec.radius;
    impl->length = kTwoPi * spec.radius;
    impl->c0 = spec.radius;
    impl->a = {0.0};
    impl->b = {0.0};
    impl->gamma_sup = 1.0 / spec.radius;
    impl->turning = kTwoPi;
    return ArcCurve(impl);
  }

  fit_arc_length(*impl);

  // Sup norms: dense sampling, then golden-section refinement around the argmax.
  const std::size_t n = std::max<std::size_t>(8192, 4 * spec.sample_density);
  const double h = impl->length / static_cast<double>(n);
  std::vector<CurveFrame> frames(n);
  for (std::size_t i = 0; i < n; ++i) frames[i] = impl->frame(h * static_cast<double>(i));
  auto refine = [&](auto pick) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(pick(frames[i])) > std::abs(pick(frames[best]))) best = i;
    const double s0 = h * static_cast<double>(best);
    auto f = [&](double s) { return std::abs(pick(impl->frame(s))); };
    return std::max(std::abs(pick(frames[best])), golden_maximize(f, s0 - h, s0 + h));
  };
  impl->gamma_sup = refine([](const CurveFrame& f) { return f.gamma; });
  impl->dgamma_sup = refine([](const CurveFrame& f) { return f.dgamma; });
  impl->ddgamma_sup = refine([](const CurveFrame& f) { return f.ddgamma; });
  double turning = 0.0;
  for (const auto& f : frames) turning += f.gamma;
  impl->turning = turning * h;
  return ArcCurve(impl);
}

double ArcCurve::length() const { return impl_->length; }
CurveKind ArcCurve::kind() const { return impl_->kind; }
CurveFrame ArcCurve::frame(double s) const { return impl_->frame(s); }
Vec2 ArcCurve::position(double s) const { return impl_->frame(s).position; }
Vec2 ArcCurve::tangent(double s) const { return impl_->frame(s).tangent; }
double ArcCurve::gamma(double s) const { return impl_->frame(s).gamma; }
double ArcCurve::gamma_sup() const { return impl_->gamma_sup; }
double ArcCurve::dgamma_sup() const { return impl_->dgamma_sup; }
double ArcCurve::ddgamma_sup() const { return impl_->ddgamma_sup; }
double ArcCurve::total_turning() const { return impl_->turning; }

CurveSample ArcCurve::curvature(double s) const {
  const CurveFrame f = impl_->frame(s);
  return {f.s, f.gamma, f.dgamma, f.ddgamma};
}

std::vector<CurveSample> curvature_profile(const ArcCurve& curve, std::size_t n) {
  if (n < 2) throw PreconditionError("curvature_profile: need at least 2 samples");
  std::vector<CurveSample> out(n);
  const double h = curve.length() / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = curve.curvature(h * static_cast<double>(i));
    out[i].s = h * static_cast<double>(i);
  }
  return out;
}

namespace {

void check_offset(const ArcCurve& curve, double u) {
  if (std::abs(u) * 2.0 * curve.gamma_sup() >= 1.0) {
    std::ostringstream msg;
    msg << "tubular map: |u| = " << std::abs(u) << " not below 1/(2 gamma_+) = " << 0.5 / curve.gamma_sup();
    throw DomainError(msg.str());
  }
}

Vec2 left_normal(Vec2 t) { return {-t.y, t.x}; }

}  // namespace

Vec2 tubular_map(const ArcCurve& curve, double s, double u) {
  check_offset(curve, u);
  const CurveFrame f = curve.frame(s);
  return f.position + u * left_normal(f.tangent);
}

double tubular_jacobian(const ArcCurve& curve, double s, double u) {
  check_offset(curve, u);
  const CurveFrame f = curve.frame(s);
  const Vec2 d_s = f.tangent + u * left_normal(f.acceleration);
  const Vec2 d_u = left_normal(f.tangent);
  return cross(d_s, d_u);
}

ChordGap chord_gap(const ArcCurve& curve, double p_min, std::size_t density) {
  const double len = curve.length();
  if (!(p_min > 0.0) || p_min > 0.5 * len) throw PreconditionError("chord_gap: need 0 < p_min <= L/2");
  const std::size_t n = std::max<std::size_t>(density, 64);
  const double h = len / static_cast<double>(n);
  std::vector<Vec2> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = curve.position(h * static_cast<double>(i));

  ChordGap best{std::numeric_limits<double>::infinity(), p_min, 0.0};
  // p = p_min exactly.
  for (std::size_t i = 0; i < n; ++i) {
    const double t = h * static_cast<double>(i);
    const double c = norm(curve.position(t + p_min) - pts[i]);
    if (c < best.tau) best = {c, p_min, t};
  }
  const std::size_t m_lo = static_cast<std::size_t>(std::ceil(p_min / h));
  const std::size_t m_hi = n / 2;
  for (std::size_t m = std::max<std::size_t>(m_lo, 1); m <= m_hi; ++m) {
    const double p = h * static_cast<double>(m);
    if (p <= p_min) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = norm(pts[(i + m) % n] - pts[i]);
      if (c < best.tau) best = {c, p, h * static_cast<double>(i)};
    }
  }

  // Coordinate-wise golden-section polish.
  auto chord = [&](double t, double p) { return norm(curve.position(t + p) - curve.position(t)); };
  for (int sweep = 0; sweep < 4; ++sweep) {
    {
      const double p = best.p;
      auto f = [&](double t) { return -chord(t, p); };
      double lo = best.t - h, hi = best.t + h;
      const double r = (std::sqrt(5.0) - 1.0) / 2.0;
      double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
      double f1 = f(x1), f2 = f(x2);
      for (int i = 0; i < 50; ++i) {
        if (f1 < f2) { lo = x1; x1 = x2; f1 = f2; x2 = lo + r * (hi - lo); f2 = f(x2); }
        else { hi = x2; x2 = x1; f2 = f1; x1 = hi - r * (hi - lo); f1 = f(x1); }
      }
      const double t = f1 >= f2 ? x1 : x2;
      const double c = chord(t, p);
      if (c < best.tau) best = {c, p, t};
    }
    {
      const double t = best.t;
      auto f = [&](double p) { return -chord(t, p); };
      double lo = std::max(p_min, best.p - h), hi = std::min(0.5 * len, best.p + h);
      if (hi > lo) {
        const double r = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
        double f1 = f(x1), f2 = f(x2);
        for (int i = 0; i < 50; ++i) {
          if (f1 < f2) { lo = x1; x1 = x2; f1 = f2; x2 = lo + r * (hi - lo); f2 = f(x2); }
          else { hi = x2; x2 = x1; f2 = f1; x1 = hi - r * (hi - lo); f1 = f(x1); }
        }
        const double p = f1 >= f2 ? x1 : x2;
        const double c = chord(t, p);
        if (c < best.tau) best = {c, p, t};
      }
    }
  }
  best.t = std::fmod(best.t + len, len);
  return best;
}

double local_injectivity_radius(const ArcCurve& curve, std::size_t density) {
  const double len = curve.length();
  const double a_max = 0.5 / curve.gamma_sup();
  constexpr double kRatio = 0.95;
  const std::size_t n = std::max<std::size_t>(density, 64);
  const double h = len / static_cast<double>(n);
  const double widest = std::min(a_max * kRatio, 0.25 * len);
  const std::size_t span = std::min<std::size_t>(static_cast<std::size_t>(std::floor(2.0 * widest / h)), n / 2);

  std::vector<CurveFrame> frames(n);
  for (std::size_t i = 0; i < n; ++i) frames[i] = curve.frame(h * static_cast<double>(i));

  // For each separation m: smallest offset at which two normal segments meet,
  // and whether the chord grows strictly from m-1 to m at every base point.
  std::vector<double> crossing(span + 1, std::numeric_limits<double>::infinity());
  std::vector<bool> monotone(span + 1, true);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p0 = frames[i].position;
    const Vec2 n0 = left_normal(frames[i].tangent);
    double prev_chord = 0.0;
    for (std::size_t m = 1; m <= span; ++m) {
      const CurveFrame& g = frames[(i + m) % n];
      const Vec2 d = g.position - p0;
      const double chord = norm(d);
      if (!(chord > prev_chord)) monotone[m] = false;
      prev_chord = chord;
      const Vec2 n1 = left_normal(g.tangent);
      // p0 + u n0 = g.position + v n1
      const double det = -cross(n0, n1);
      double offset = std::numeric_limits<double>::infinity();
      if (std::abs(det) > 1e-14) {
        const double u = -cross(d, n1) / det;
        const double v = cross(n0, d) / det;
        offset = std::max(std::abs(u), std::abs(v));
      } else if (std::abs(cross(d, n0)) <= 1e-14 * chord) {
        offset = 0.5 * chord;
      }
      crossing[m] = std::min(crossing[m], offset);
    }
  }

  for (int k = 1; k < 400; ++k) {
    const double a = a_max * std::pow(kRatio, k);
    if (a > widest) continue;
    const std::size_t reach = std::min<std::size_t>(static_cast<std::size_t>(std::ceil(2.0 * a / h)), span);
    bool ok = true;
    for (std::size_t m = 1; m <= reach && ok; ++m) ok = monotone[m] && crossing[m] > a;
    if (ok) return a;
  }
  throw NumericalError("local injectivity radius: no admissible half-width found on the geometric grid");
}

namespace {

struct Quad {
  std::array<Vec2, 4> v;
  double xmin, xmax, ymin, ymax;
};

bool separated_along(const Quad& a, const Quad& b, Vec2 axis) {
  double amin = std::numeric_limits<double>::infinity(), amax = -amin;
  double bmin = amin, bmax = -amin;
  for (const auto& p : a.v) {
    const double d = dot(p, axis);
    amin = std::min(amin, d);
    amax = std::max(amax, d);
  }
  for (const auto& p : b.v) {
    const double d = dot(p, axis);
    bmin = std::min(bmin, d);
    bmax = std::max(bmax, d);
  }
  return amax <= bmin || bmax <= amin;
}

bool quads_overlap(const Quad& a, const Quad& b) {
  for (const Quad* q : {&a, &b}) {
    for (int e = 0; e < 4; ++e) {
      const Vec2 edge = q->v[(e + 1) % 4] - q->v[e];
      if (separated_along(a, b, left_normal(edge))) return false;
    }
  }
  return true;
}

}  // namespace

CollisionReport collision_scan(const ArcCurve& curve, double half_width, std::size_t cells_s,
                               std::size_t cells_u) {
  if (cells_s < 3 || cells_u < 1) throw PreconditionError("collision_scan: grid too small");
  if (!(half_width > 0.0)) throw PreconditionError("collision_scan: half-width must be positive");
  const double len = curve.length();
  const std::size_t ns = cells_s, nu = cells_u;
  std::vector<CurveFrame> frames(ns);
  for (std::size_t i = 0; i < ns; ++i) frames[i] = curve.frame(len * static_cast<double>(i) / ns);
  auto node = [&](std::size_t i, std::size_t j) {
    const CurveFrame& f = frames[i % ns];
    const double u = -half_width + 2.0 * half_width * static_cast<double>(j) / static_cast<double>(nu);
    return f.position + u * left_normal(f.tangent);
  };

  std::vector<Quad> quads(ns * nu);
  double extent = 0.0;
  double gx0 = std::numeric_limits<double>::infinity(), gy0 = gx0;
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = 0; j < nu; ++j) {
      Quad q;
      q.v = {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
      q.xmin = q.xmax = q.v[0].x;
      q.ymin = q.ymax = q.v[0].y;
      for (const auto& p : q.v) {
        q.xmin = std::min(q.xmin, p.x); q.xmax = std::max(q.xmax, p.x);
        q.ymin = std::min(q.ymin, p.y); q.ymax = std::max(q.ymax, p.y);
      }
      extent = std::max({extent, q.xmax - q.xmin, q.ymax - q.ymin});
      gx0 = std::min(gx0, q.xmin);
      gy0 = std::min(gy0, q.ymin);
      quads[i * nu + j] = q;
    }
  }

  // Uniform spatial hash; each pair is examined in the lowest bin both boxes share.
  const double bin = extent > 0 ? extent : 1.0;
  auto bin_of = [&](double v, double origin) { return static_cast<long long>(std::floor((v - origin) / bin)); };
  std::unordered_map<long long, std::vector<std::size_t>> grid;
  auto key = [](long long bx, long long by) { return (bx << 32) ^ (by & 0xffffffffLL); };
  for (std::size_t c = 0; c < quads.size(); ++c) {
    const Quad& q = quads[c];
    for (long long bx = bin_of(q.xmin, gx0); bx <= bin_of(q.xmax, gx0); ++bx)
      for (long long by = bin_of(q.ymin, gy0); by <= bin_of(q.ymax, gy0); ++by) grid[key(bx, by)].push_back(c);
  }

  CollisionReport report;
  report.half_width = half_width;
  report.cells_s = ns;
  report.cells_u = nu;
  for (const auto& [k, members] : grid) {
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const std::size_t c1 = members[x], c2 = members[y];
        const Quad& q1 = quads[c1];
        const Quad& q2 = quads[c2];
        if (q1.xmax < q2.xmin || q2.xmax < q1.xmin || q1.ymax < q2.ymin || q2.ymax < q1.ymin) continue;
        const long long bx = bin_of(std::max(q1.xmin, q2.xmin), gx0);
        const long long by = bin_of(std::max(q1.ymin, q2.ymin), gy0);
        if (key(bx, by) != k) continue;
        const std::size_t i1 = c1 / nu, j1 = c1 % nu, i2 = c2 / nu, j2 = c2 % nu;
        const std::size_t di = std::min((i1 + ns - i2) % ns, (i2 + ns - i1) % ns);
        const std::size_t dj = j1 > j2 ? j1 - j2 : j2 - j1;
        if (di <= 1 && dj <= 1) continue;
        ++report.candidate_pairs;
        if (quads_overlap(q1, q2)) ++report.collisions;
      }
    }
  }
  return report;
}

TubularRadius certify_tubular_radius(const ArcCurve& curve, std::size_t density) {
  TubularRadius r;
  r.a0 = local_injectivity_radius(curve, density);
  r.gap = chord_gap(curve, r.a0, density);
  r.tau = r.gap.tau;
  if (!(r.tau > 1e-12 * curve.length())) {
    std::ostringstream msg;
    msg << "tubular radius: chord gap tau = " << r.tau << " is not positive (self-intersection)";
    throw NumericalError(msg.str());
  }
  r.a1 = std::min(r.a0, 0.25 * r.tau);
  r.certificate = collision_scan(curve, r.a1, density, 50);
  if (!r.certificate.injective()) {
    std::ostringstream msg;
    msg << "tubular radius: " << r.certificate.collisions << " cell collisions at half-width " << r.a1;
    throw NumericalError(msg.str());
  }
  return r;
}

}  // namespace deltaloop
