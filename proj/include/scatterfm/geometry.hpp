// SPDX-License-Identifier: Apache-2.0

#ifndef SCATTERFM_GEOMETRY_HPP
#define SCATTERFM_GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scatterfm/errors.hpp"

namespace scatterfm
{

using cd = std::complex<double>;

struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {s * x, s * y}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class CurveKind
{
  Circle,
  Ellipse,
  Kite
};

inline std::string to_string(CurveKind k)
{
  switch (k) {
    case CurveKind::Circle: return "circle";
    case CurveKind::Ellipse: return "ellipse";
    case CurveKind::Kite: return "kite";
  }
  return "?";
}

// Boundary data of a curve at one parameter value.
struct CurvePoint
{
  double s = 0.0;
  Vec2 p;       // position
  Vec2 d1;      // p'(s)
  Vec2 d2;      // p''(s)
  Vec2 normal;  // outward unit normal
  double speed = 0.0;      // |p'(s)|
  double curvature = 0.0;  // signed, positive for convex counterclockwise arcs
};

//
// Closed analytic curve, counterclockwise, parametrized over [0, 2pi).
//
//   circle : c + R(rot) * r (cos s, sin s)
//   ellipse: c + R(rot) * (a cos s, b sin s)
//   kite   : c + R(rot) * r (cos s + 0.65 cos 2s - 0.65, 1.5 sin s)
//
class Curve
{
public:
  static Curve circle(Vec2 center, double radius)
  {
    return Curve(CurveKind::Circle, center, radius, radius, 0.0);
  }

  static Curve ellipse(Vec2 center, double a, double b, double rotation = 0.0)
  {
    return Curve(CurveKind::Ellipse, center, a, b, rotation);
  }

  static Curve kite(Vec2 center, double scale = 1.0, double rotation = 0.0)
  {
    return Curve(CurveKind::Kite, center, scale, scale, rotation);
  }

  CurveKind kind() const { return kind_; }
  Vec2 center() const { return center_; }
  double rotation() const { return rotation_; }
  // Radius for circles, scale for kites, first semi-axis for ellipses.
  double scale_a() const { return a_; }
  double scale_b() const { return b_; }

  CurvePoint evaluate(double s) const
  {
    Vec2 lp, l1, l2;
    const double c = std::cos(s), sn = std::sin(s);
    switch (kind_) {
      case CurveKind::Circle:
      case CurveKind::Ellipse:
        lp = {a_ * c, b_ * sn};
        l1 = {-a_ * sn, b_ * c};
        l2 = {-a_ * c, -b_ * sn};
        break;
      case CurveKind::Kite: {
        const double c2 = std::cos(2.0 * s), s2 = std::sin(2.0 * s);
        lp = {a_ * (c + 0.65 * c2 - 0.65), a_ * 1.5 * sn};
        l1 = {a_ * (-sn - 1.3 * s2), a_ * 1.5 * c};
        l2 = {a_ * (-c - 2.6 * c2), -a_ * 1.5 * sn};
        break;
      }
    }
    CurvePoint out;
    out.s = s;
    out.p = center_ + rotate(lp);
    out.d1 = rotate(l1);
    out.d2 = rotate(l2);
    out.speed = out.d1.norm();
    out.normal = {out.d1.y / out.speed, -out.d1.x / out.speed};
    out.curvature =
        (out.d1.x * out.d2.y - out.d1.y * out.d2.x) / (out.speed * out.speed * out.speed);
    return out;
  }

  // Strict interior test, exact for all three shapes.
  bool contains(Vec2 q) const
  {
    const Vec2 l = unrotate(q - center_);
    switch (kind_) {
      case CurveKind::Circle:
      case CurveKind::Ellipse: {
        const double u = l.x / a_, v = l.y / b_;
        return u * u + v * v < 1.0;
      }
      case CurveKind::Kite: {
        // Every horizontal line |y| < 1.5 r meets the kite at s and pi - s.
        const double v = l.y / (1.5 * a_);
        if (std::abs(v) >= 1.0)
          return false;
        const double s = std::asin(v);
        const double c = std::cos(s), c2 = std::cos(2.0 * s);
        const double right = a_ * (c + 0.65 * c2 - 0.65);
        const double left = a_ * (-c + 0.65 * c2 - 0.65);
        return l.x > left && l.x < right;
      }
    }
    return false;
  }

  // Distance to the curve, refined from a dense sample by Newton steps on |p(s) - q|^2.
  double distance(Vec2 q, int samples = 4096) const
  {
    double best = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    for (int j = 0; j < samples; ++j) {
      const double s = kTwoPi * j / samples;
      const double d = (evaluate(s).p - q).norm();
      if (d < best) {
        best = d;
        best_s = s;
      }
    }
    double s = best_s;
    for (int it = 0; it < 20; ++it) {
      const auto cp = evaluate(s);
      const Vec2 r = cp.p - q;
      const double g = r.dot(cp.d1);
      const double h = cp.d1.dot(cp.d1) + r.dot(cp.d2);
      if (h <= 0.0)
        break;
      const double step = g / h;
      s -= step;
      if (std::abs(step) < 1e-15)
        break;
    }
    return std::min(best, (evaluate(s).p - q).norm());
  }

  // Negative inside, positive outside.
  double signed_distance(Vec2 q, int samples = 4096) const
  {
    const double d = distance(q, samples);
    return contains(q) ? -d : d;
  }

  double area() const
  {
    // Green's theorem with the trapezoid rule: exact up to round-off for trigonometric curves.
    constexpr int m = 256;
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const auto cp = evaluate(kTwoPi * j / m);
      acc += cp.p.x * cp.d1.y - cp.p.y * cp.d1.x;
    }
    return 0.5 * acc * kTwoPi / m;
  }

  // Axis-aligned bounding box (xmin, xmax, ymin, ymax).
  std::array<double, 4> bounding_box(int samples = 2048) const
  {
    std::array<double, 4> bb{std::numeric_limits<double>::infinity(),
                             -std::numeric_limits<double>::infinity(),
                             std::numeric_limits<double>::infinity(),
                             -std::numeric_limits<double>::infinity()};
    for (int j = 0; j < samples; ++j) {
      const auto p = evaluate(kTwoPi * j / samples).p;
      bb[0] = std::min(bb[0], p.x);
      bb[1] = std::max(bb[1], p.x);
      bb[2] = std::min(bb[2], p.y);
      bb[3] = std::max(bb[3], p.y);
    }
    return bb;
  }

  Curve translated(Vec2 d) const { return Curve(kind_, center_ + d, a_, b_, rotation_); }

private:
  Curve(CurveKind kind, Vec2 center, double a, double b, double rotation)
      : kind_(kind), center_(center), a_(a), b_(b), rotation_(rotation)
  {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
      throw ValidationError("curve: scale parameters must be positive");
    if (!std::isfinite(center.x) || !std::isfinite(center.y) || !std::isfinite(rotation))
      throw ValidationError("curve: center and rotation must be finite");
    cos_rot_ = std::cos(rotation);
    sin_rot_ = std::sin(rotation);
  }

  Vec2 rotate(Vec2 v) const
  {
    return {cos_rot_ * v.x - sin_rot_ * v.y, sin_rot_ * v.x + cos_rot_ * v.y};
  }
  Vec2 unrotate(Vec2 v) const
  {
    return {cos_rot_ * v.x + sin_rot_ * v.y, -sin_rot_ * v.x + cos_rot_ * v.y};
  }

  CurveKind kind_;
  Vec2 center_;
  double a_;
  double b_;
  double rotation_;
  double cos_rot_ = 1.0;
  double sin_rot_ = 0.0;
};

// 2n equispaced nodes s_j = pi j / n.
inline std::vector<CurvePoint> curve_sample(const Curve &curve, int n)
{
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("curve_sample: n must be even and >= 8, got " +
                                std::to_string(n));
  std::vector<CurvePoint> nodes;
  nodes.reserve(static_cast<std::size_t>(2 * n));
  for (int j = 0; j < 2 * n; ++j)
    nodes.push_back(curve.evaluate(std::numbers::pi * j / n));
  return nodes;
}

// ---------------------------------------------------------------------------------------------
// Contrast
// ---------------------------------------------------------------------------------------------

enum class ContrastForm
{
  Constant,
  RadialBump
};

//
// q(y) = q0                                   (constant)
// q(y) = q0 (0.1 + 0.45 (1 + cos(pi rho)))    (radial bump, rho = normalized radius, <= 1)
//
// The bump keeps |q| >= 0.1 |q0| up to the boundary of its support. Radial bumps are only
// defined for circle and ellipse supports, where rho is the elliptic radius.
//
struct ContrastSpec
{
  ContrastForm form = ContrastForm::Constant;
  cd q0{0.0, 0.0};

  cd value(const Curve &support, Vec2 y) const
  {
    if (!support.contains(y))
      return {0.0, 0.0};
    if (form == ContrastForm::Constant)
      return q0;
    return q0 * profile(support, y);
  }

  static double profile(const Curve &support, Vec2 y)
  {
    const Vec2 l = y - support.center();
    const double c = std::cos(support.rotation()), s = std::sin(support.rotation());
    const double u = (c * l.x + s * l.y) / support.scale_a();
    const double v = (-s * l.x + c * l.y) / support.scale_b();
    const double rho = std::min(1.0, std::sqrt(u * u + v * v));
    return 0.1 + 0.45 * (1.0 + std::cos(std::numbers::pi * rho));
  }
};

// ---------------------------------------------------------------------------------------------
// Scene
// ---------------------------------------------------------------------------------------------

enum class SceneCase
{
  MixedObstacles,     // omega1 Dirichlet obstacle, omega2 Neumann obstacle
  MediumPlusObstacle  // omega1 penetrable medium with contrast q, omega2 Dirichlet obstacle
};

enum class BoundaryCondition
{
  Dirichlet,
  Neumann,
  Impedance
};

inline std::string to_string(BoundaryCondition bc)
{
  switch (bc) {
    case BoundaryCondition::Dirichlet: return "dirichlet";
    case BoundaryCondition::Neumann: return "neumann";
    case BoundaryCondition::Impedance: return "impedance";
  }
  return "?";
}

enum class Variant
{
  T12,               // measured + Dir(B2) + Imp(B1 u B3)
  T14,               // measured + Dir(B2) + Imp(B3), phase t in (pi/2, 3pi/2)
  T36,               // measured + Dir(B1 u B2)
  T46,               // measured + Imp(B2), phase t in [0, pi/2) u (3pi/2, 2pi]
  BaselineLiu,       // measured + Dir(B2)
  BaselineKirschLiu  // measured + Dir(B2)
};

inline std::string to_string(Variant v)
{
  switch (v) {
    case Variant::T12: return "T1.2";
    case Variant::T14: return "T1.4";
    case Variant::T36: return "T3.6";
    case Variant::T46: return "T4.6";
    case Variant::BaselineLiu: return "baseline-liu";
    case Variant::BaselineKirschLiu: return "baseline-kirschliu";
  }
  return "?";
}

inline Variant variant_from_string(const std::string &s)
{
  for (auto v : {Variant::T12, Variant::T14, Variant::T36, Variant::T46, Variant::BaselineLiu,
                 Variant::BaselineKirschLiu})
    if (to_string(v) == s)
      return v;
  throw ValidationError("unknown variant '" + s + "'");
}

// Phase-rotated variants operate on the medium case.
inline bool variant_uses_medium(Variant v)
{
  return v == Variant::T14 || v == Variant::T46 || v == Variant::BaselineKirschLiu;
}

struct Scene
{
  SceneCase scene_case = SceneCase::MixedObstacles;
  Curve omega1 = Curve::circle({0.0, 0.0}, 1.0);
  std::optional<ContrastSpec> contrast;  // medium case only
  Curve omega2 = Curve::circle({3.0, 0.0}, 1.0);
  std::optional<Curve> b1;
  std::optional<Curve> b2;
  std::optional<Curve> b3;
  double k = 1.0;
  double lambda0 = 1.0;
  Variant variant = Variant::T12;

  BoundaryCondition omega1_condition() const { return BoundaryCondition::Dirichlet; }

  BoundaryCondition omega2_condition() const
  {
    return scene_case == SceneCase::MixedObstacles ? BoundaryCondition::Neumann
                                                   : BoundaryCondition::Dirichlet;
  }

  cd contrast_at(Vec2 y) const
  {
    return contrast ? contrast->value(omega1, y) : cd{0.0, 0.0};
  }
};

// ---------------------------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------------------------

struct ValidationReport
{
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }

  std::string message() const
  {
    std::string out;
    for (const auto &v : violations) {
      if (!out.empty())
        out += "; ";
      out += v;
    }
    return out;
  }
};

namespace detail
{

inline constexpr double kGeometryMargin = 1e-9;
inline constexpr int kBoundarySamples = 4096;

// closure(inner) subset of outer (open).
inline bool closure_inside(const Curve &inner, const Curve &outer)
{
  if (inner.kind() == CurveKind::Circle && outer.kind() == CurveKind::Circle)
    return (inner.center() - outer.center()).norm() + inner.scale_a() <
           outer.scale_a() - kGeometryMargin;
  for (int j = 0; j < kBoundarySamples; ++j) {
    const Vec2 p = inner.evaluate(kTwoPi * j / kBoundarySamples).p;
    if (!outer.contains(p))
      return false;
  }
  // All samples are inside; make sure none sits within the margin of the outer boundary.
  for (int j = 0; j < kBoundarySamples; j += 16) {
    const Vec2 p = inner.evaluate(kTwoPi * j / kBoundarySamples).p;
    if (outer.distance(p, 512) < kGeometryMargin)
      return false;
  }
  return true;
}

inline bool closures_disjoint(const Curve &a, const Curve &b)
{
  if (a.kind() == CurveKind::Circle && b.kind() == CurveKind::Circle)
    return (a.center() - b.center()).norm() > a.scale_a() + b.scale_a() + kGeometryMargin;
  for (int j = 0; j < kBoundarySamples; ++j) {
    const double s = kTwoPi * j / kBoundarySamples;
    if (b.contains(a.evaluate(s).p) || a.contains(b.evaluate(s).p))
      return false;
  }
  for (int j = 0; j < kBoundarySamples; j += 16) {
    const Vec2 p = a.evaluate(kTwoPi * j / kBoundarySamples).p;
    if (b.distance(p, 512) < kGeometryMargin)
      return false;
  }
  return true;
}

// Interior sample points of a curve on a uniform grid over its bounding box.
inline std::vector<Vec2> interior_samples(const Curve &c, int per_axis)
{
  const auto bb = c.bounding_box();
  std::vector<Vec2> pts;
  for (int i = 0; i < per_axis; ++i)
    for (int j = 0; j < per_axis; ++j) {
      const Vec2 p{bb[0] + (bb[1] - bb[0]) * (i + 0.5) / per_axis,
                   bb[2] + (bb[3] - bb[2]) * (j + 0.5) / per_axis};
      if (c.contains(p))
        pts.push_back(p);
    }
  return pts;
}

}  // namespace detail

inline void check_contrast(const Scene &scene, ValidationReport &report)
{
  if (!scene.contrast) {
    report.violations.push_back("medium case requires a contrast q on omega1");
    return;
  }
  const auto &q = *scene.contrast;
  if (q.q0.imag() < 0.0)
    report.violations.push_back("contrast has Im q < 0");
  if (std::abs(q.q0) == 0.0)
    report.violations.push_back("contrast vanishes identically (|q0| = 0)");
  if (q.form == ContrastForm::RadialBump) {
    if (scene.omega1.kind() == CurveKind::Kite)
      report.violations.push_back("radial-bump contrast needs a circle or ellipse support");
    else
      for (const auto &p : detail::interior_samples(scene.omega1, 64))
        if (std::abs(q.value(scene.omega1, p)) < 0.01) {
          report.violations.push_back("contrast |q| < 0.01 inside omega1");
          break;
        }
  }
}

// Checks the geometric and physical assumptions each variant rests on.
inline ValidationReport validate_scene(const Scene &scene)
{
  ValidationReport r;
  auto &v = r.violations;
  if (!(scene.k > 0.0) || !std::isfinite(scene.k))
    v.push_back("wavenumber k must be positive");
  if (!(scene.lambda0 > 0.0) || !std::isfinite(scene.lambda0))
    v.push_back("impedance lambda0 must be positive");

  const bool medium = scene.scene_case == SceneCase::MediumPlusObstacle;
  if (medium != variant_uses_medium(scene.variant))
    v.push_back("variant " + to_string(scene.variant) + " does not apply to the " +
                (medium ? "medium" : "mixed") + " case");

  if (!detail::closures_disjoint(scene.omega1, scene.omega2))
    v.push_back("closure(omega1) and closure(omega2) intersect");

  const Variant var = scene.variant;
  const bool needs_b1 = var == Variant::T12 || var == Variant::T36;
  const bool needs_b3 = var == Variant::T12 || var == Variant::T14;
  if (needs_b1 && !scene.b1)
    v.push_back("missing-domain: b1 required by variant " + to_string(var));
  if (needs_b3 && !scene.b3)
    v.push_back("missing-domain: b3 required by variant " + to_string(var));
  if (!scene.b2)
    v.push_back("missing-domain: b2 required by variant " + to_string(var));

  if (scene.b2) {
    if (!detail::closure_inside(scene.omega2, *scene.b2))
      v.push_back("closure(omega2) is not contained in b2");
    if (!detail::closures_disjoint(scene.omega1, *scene.b2))
      v.push_back("closure(omega1) and closure(b2) intersect");
    if (needs_b3 && scene.b3 && !detail::closure_inside(*scene.b3, *scene.b2))
      v.push_back("closure(b3) is not contained in b2");
  }
  if (needs_b1 && scene.b1 && !detail::closure_inside(*scene.b1, scene.omega1))
    v.push_back("closure(b1) is not contained in omega1");

  if (medium)
    check_contrast(scene, r);
  else if (scene.contrast)
    v.push_back("contrast q given for the mixed-obstacle case");
  return r;
}

inline void require_valid(const Scene &scene)
{
  const auto report = validate_scene(scene);
  if (!report.ok())
    throw ValidationError("invalid scene: " + report.message());
}

// ---------------------------------------------------------------------------------------------
// Phase selection for the medium case
// ---------------------------------------------------------------------------------------------

struct PhaseSelection
{
  double t = 0.0;       // radians in [0, 2pi)
  double margin = 0.0;  // min over omega1 of Re(exp(-it) q) / |q|
  Variant variant = Variant::T46;
};

inline constexpr int kPhaseGrid = 4096;
inline constexpr double kPhaseMarginFloor = 0.05;

// T1.4 needs t strictly inside (pi/2, 3pi/2); T4.6 needs t in [0, pi/2) u (3pi/2, 2pi).
inline std::optional<Variant> classify_phase(double t)
{
  constexpr double half_pi = 0.5 * std::numbers::pi;
  constexpr double eps = 1e-12;
  if (t > half_pi + eps && t < 3.0 * half_pi - eps)
    return Variant::T14;
  if (t < half_pi - eps || t > 3.0 * half_pi + eps)
    return Variant::T46;
  return std::nullopt;
}

// With `only` set, t is searched in that variant's admissible range alone.
inline PhaseSelection select_phase(const ContrastSpec &contrast, const Curve &support,
                                   std::optional<Variant> only = std::nullopt)
{
  if (only && *only != Variant::T14 && *only != Variant::T46)
    throw ValidationError("select_phase: variant " + to_string(*only) +
                          " has no phase condition");
  if (std::abs(contrast.q0) == 0.0)
    throw ValidationError("select_phase: contrast vanishes");
  std::vector<cd> samples;
  for (const auto &p : detail::interior_samples(support, 48))
    samples.push_back(contrast.value(support, p));
  if (samples.empty())
    samples.push_back(contrast.q0);

  PhaseSelection best;
  best.margin = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kPhaseGrid; ++i) {
    const double t = kTwoPi * i / kPhaseGrid;
    const auto cls = classify_phase(t);
    if (!cls || (only && *cls != *only))
      continue;
    const cd rot = std::polar(1.0, -t);
    double margin = std::numeric_limits<double>::infinity();
    for (const cd &q : samples)
      margin = std::min(margin, (rot * q).real() / std::abs(q));
    // Strict comparison keeps the lowest admissible t among ties.
    if (margin > best.margin + 1e-15) {
      best.t = t;
      best.margin = margin;
      best.variant = *cls;
    }
  }
  if (best.margin < kPhaseMarginFloor)
    throw ValidationError("select_phase: no admissible phase (best margin " +
                          std::to_string(best.margin) + " < 0.05)");
  return best;
}

}  // namespace scatterfm

#endif  // SCATTERFM_GEOMETRY_HPP
