// SPDX-License-Identifier: Apache-2.0

#ifndef SCATTERFM_FORWARD_BIE_HPP
#define SCATTERFM_FORWARD_BIE_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "scatterfm/geometry.hpp"
#include "scatterfm/kernel.hpp"
#include "scatterfm/linalg.hpp"

//
// Nystrom discretization of the 2D Helmholtz boundary integral operators on one or several
// disjoint closed analytic curves.
//
// Each curve is sampled at 2n equispaced parameter nodes. Diagonal (self) blocks use the
// logarithmic product quadrature on the splitting
//
//     K(t, tau) = K1(t, tau) ln(4 sin^2((t - tau)/2)) + K2(t, tau),
//
// with weights R_j(t) = -(2pi/n) sum_{m=1}^{n-1} cos(m (t - t_j)) / m - (pi/n^2) cos(n (t - t_j)),
// and the trapezoid rule on K2. Cross-curve blocks use the trapezoid rule on the smooth kernel.
// The hypersingular operator uses the tangential-derivative (Maue) form
//
//     N psi = d/ds S(d psi / ds) + kappa^2 nu . S(nu psi),
//
// with d/ds realized by trigonometric (spectral) differentiation on the node set.
//
namespace scatterfm
{

enum class OperatorKind
{
  S,        // single layer
  K,        // double layer
  KPrime,   // adjoint double layer
  N         // hypersingular
};

inline std::string to_string(OperatorKind k)
{
  switch (k) {
    case OperatorKind::S: return "S";
    case OperatorKind::K: return "K";
    case OperatorKind::KPrime: return "K'";
    case OperatorKind::N: return "N";
  }
  return "?";
}

namespace nystrom
{

// R_{|i-j|} for the 2n-point rule; depends only on the index offset.
inline std::vector<double> log_weights(int n)
{
  const double pi = std::numbers::pi;
  std::vector<double> w(static_cast<std::size_t>(2 * n));
  for (int d = 0; d < 2 * n; ++d) {
    const double t = pi * d / n;
    double acc = 0.0;
    for (int m = 1; m < n; ++m)
      acc += std::cos(m * t) / m;
    w[static_cast<std::size_t>(d)] = -2.0 * pi / n * acc - pi / (double(n) * n) * std::cos(n * t);
  }
  return w;
}

// Trigonometric differentiation matrix on 2n equispaced nodes (Nyquist mode differentiated to 0).
inline Eigen::MatrixXd differentiation_matrix(int n)
{
  const int m = 2 * n;
  const double h = std::numbers::pi / n;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) {
        const int off = i - j;
        d(i, j) = 0.5 * ((off % 2 == 0) ? 1.0 : -1.0) / std::tan(0.5 * off * h);
      }
  return d;
}

// Values of the trigonometric interpolant of `values` (2n equispaced samples) at `count`
// equispaced points of [0, 2pi).
inline ComplexVector trig_interpolate(const ComplexVector &values, int count)
{
  const Eigen::Index m = values.size();
  const Eigen::Index n = m / 2;
  const double pi = std::numbers::pi;
  std::vector<cd> coef(static_cast<std::size_t>(m));
  for (Eigen::Index f = 0; f < m; ++f) {
    const Eigen::Index freq = f <= n ? f : f - m;
    cd acc = 0.0;
    for (Eigen::Index j = 0; j < m; ++j)
      acc += values(j) * std::polar(1.0, -2.0 * pi * double(freq * j) / double(m));
    coef[static_cast<std::size_t>(f)] = acc / double(m);
  }
  ComplexVector out(count);
  for (int p = 0; p < count; ++p) {
    const double t = 2.0 * pi * p / count;
    cd acc = 0.0;
    for (Eigen::Index f = 0; f < m; ++f) {
      const Eigen::Index freq = f <= n ? f : f - m;
      if (freq == n)
        acc += coef[static_cast<std::size_t>(f)] * std::cos(double(n) * t);
      else
        acc += coef[static_cast<std::size_t>(f)] * std::polar(1.0, double(freq) * t);
    }
    out(p) = acc;
  }
  return out;
}

inline void require_disjoint(std::span<const Curve> curves)
{
  for (std::size_t a = 0; a < curves.size(); ++a)
    for (std::size_t b = a + 1; b < curves.size(); ++b)
      if (!scatterfm::detail::closures_disjoint(curves[a], curves[b]))
        throw ValidationError("boundary assembly: curves " + std::to_string(a) + " and " +
                              std::to_string(b) + " intersect");
}

}  // namespace nystrom

//
// Discrete boundary operator on a set of curves. `matrix` maps nodal density values to nodal
// values of the operator applied to the density (quadrature weights included). `weights` are
// the arc-length trapezoid weights (pi/n)|p'(s_j)| of the discrete L2(boundary) product.
//
struct BoundaryOperatorMatrix
{
  OperatorKind kind = OperatorKind::S;
  Wavenumber wavenumber;
  std::vector<Curve> curves;
  std::vector<std::vector<CurvePoint>> nodes;
  int n = 0;
  RealVector weights;
  ComplexMatrix matrix;

  // W^{1/2} A W^{-1/2}: Hermitian whenever A is self-adjoint in the weighted product.
  ComplexMatrix symmetrized() const
  {
    const RealVector sw = weights.cwiseSqrt();
    return sw.asDiagonal() * matrix * sw.cwiseInverse().asDiagonal();
  }
};

namespace nystrom
{

struct Layout
{
  std::vector<std::vector<CurvePoint>> nodes;
  int n = 0;
  Eigen::Index total = 0;

  Eigen::Index offset(std::size_t c) const { return static_cast<Eigen::Index>(c) * 2 * n; }
};

inline Layout make_layout(std::span<const Curve> curves, int n)
{
  if (n < 16 || n % 2 != 0)
    throw std::invalid_argument("boundary assembly: n must be even and >= 16, got " +
                                std::to_string(n));
  Layout l;
  l.n = n;
  for (const auto &c : curves)
    l.nodes.push_back(curve_sample(c, n));
  l.total = static_cast<Eigen::Index>(curves.size()) * 2 * n;
  return l;
}

inline RealVector arc_weights(const Layout &l)
{
  RealVector w(l.total);
  const double h = std::numbers::pi / l.n;
  for (std::size_t c = 0; c < l.nodes.size(); ++c)
    for (int j = 0; j < 2 * l.n; ++j)
      w(l.offset(c) + j) = h * l.nodes[c][static_cast<std::size_t>(j)].speed;
  return w;
}

// Self block of S (with speed factor, i.e. arc-length measure).
inline ComplexMatrix self_single_layer(const std::vector<CurvePoint> &nodes, int n,
                                       const Kernel &kernel, const std::vector<double> &rw)
{
  const int m = 2 * n;
  const double pi = std::numbers::pi;
  const double h = pi / n;
  ComplexMatrix a(m, m);
  for (int i = 0; i < m; ++i) {
    const auto &xi = nodes[static_cast<std::size_t>(i)];
    for (int j = 0; j < m; ++j) {
      const auto &yj = nodes[static_cast<std::size_t>(j)];
      const double r_log = rw[static_cast<std::size_t>(std::abs(i - j))];
      if (i == j) {
        const double m1 = -yj.speed / (2.0 * pi);
        const cd m2 = kernel.single_layer_diagonal(yj.speed) * yj.speed;
        a(i, j) = 0.5 * (r_log * m1 + h * m2);
        continue;
      }
      const double r = (xi.p - yj.p).norm();
      const cd full = 2.0 * kernel.phi(r) * yj.speed;
      const double m1 = -kernel.j0(r) * yj.speed / (2.0 * pi);
      const double lg = std::log(4.0 * std::pow(std::sin(0.5 * (xi.s - yj.s)), 2));
      const cd m2 = full - m1 * lg;
      a(i, j) = 0.5 * (r_log * m1 + h * m2);
    }
  }
  return a;
}

// Self block of K (adjoint = false) or K' (adjoint = true).
inline ComplexMatrix self_double_layer(const std::vector<CurvePoint> &nodes, int n,
                                       const Kernel &kernel, const std::vector<double> &rw,
                                       bool adjoint)
{
  const int m = 2 * n;
  const double pi = std::numbers::pi;
  const double h = pi / n;
  ComplexMatrix a(m, m);
  for (int i = 0; i < m; ++i) {
    const auto &xi = nodes[static_cast<std::size_t>(i)];
    for (int j = 0; j < m; ++j) {
      const auto &yj = nodes[static_cast<std::size_t>(j)];
      if (i == j) {
        a(i, j) = 0.5 * h * (-xi.curvature * xi.speed / (2.0 * pi));
        continue;
      }
      const Vec2 diff = xi.p - yj.p;
      const double r = diff.norm();
      // nu_y . (y - x) for K, nu_x . (x - y) for K'.
      const double proj = adjoint ? xi.normal.dot(diff) : -yj.normal.dot(diff);
      const double geo = proj * yj.speed / r;
      const cd full = 2.0 * kernel.dphi(r) * geo;
      const double l1 = kernel.kappa_j1(r) * geo / (2.0 * pi);
      const double lg = std::log(4.0 * std::pow(std::sin(0.5 * (xi.s - yj.s)), 2));
      const cd l2 = full - l1 * lg;
      a(i, j) = 0.5 * (rw[static_cast<std::size_t>(std::abs(i - j))] * l1 + h * l2);
    }
  }
  return a;
}

inline ComplexMatrix self_hypersingular(const std::vector<CurvePoint> &nodes, int n,
                                        const Kernel &kernel, const std::vector<double> &rw)
{
  const int m = 2 * n;
  const ComplexMatrix s = self_single_layer(nodes, n, kernel, rw);
  ComplexMatrix s_param(m, m);  // parameter measure d tau instead of ds
  ComplexMatrix s_normal(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const auto &xi = nodes[static_cast<std::size_t>(i)];
      const auto &yj = nodes[static_cast<std::size_t>(j)];
      s_param(i, j) = s(i, j) / yj.speed;
      s_normal(i, j) = s(i, j) * xi.normal.dot(yj.normal);
    }
  const ComplexMatrix d = differentiation_matrix(n).cast<cd>();
  RealVector inv_speed(m);
  for (int i = 0; i < m; ++i)
    inv_speed(i) = 1.0 / nodes[static_cast<std::size_t>(i)].speed;
  ComplexMatrix out = inv_speed.asDiagonal() * (d * s_param * d);
  out += kernel.wavenumber().squared() * s_normal;
  return out;
}

// Smooth cross block: target nodes x on one curve, sources y on another.
inline ComplexMatrix cross_block(OperatorKind kind, const std::vector<CurvePoint> &targets,
                                 const std::vector<CurvePoint> &sources, int n,
                                 const Kernel &kernel)
{
  const double h = std::numbers::pi / n;
  ComplexMatrix a(static_cast<Eigen::Index>(targets.size()),
                  static_cast<Eigen::Index>(sources.size()));
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto &x = targets[i];
    for (std::size_t j = 0; j < sources.size(); ++j) {
      const auto &y = sources[j];
      const Vec2 d = x.p - y.p;
      const double r = d.norm();
      const double w = h * y.speed;
      cd v;
      switch (kind) {
        case OperatorKind::S: v = kernel.phi(r); break;
        case OperatorKind::K: v = kernel.dphi(r) * (-y.normal.dot(d)) / r; break;
        case OperatorKind::KPrime: v = kernel.dphi(r) * x.normal.dot(d) / r; break;
        case OperatorKind::N:
          v = kernel.double_normal(d.x, d.y, x.normal.x, x.normal.y, y.normal.x, y.normal.y);
          break;
      }
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v * w;
    }
  }
  return a;
}

inline ComplexMatrix assemble(OperatorKind kind, const Layout &layout, const Kernel &kernel)
{
  const int n = layout.n;
  const auto rw = log_weights(n);
  ComplexMatrix a(layout.total, layout.total);
  const std::size_t count = layout.nodes.size();
  for (std::size_t c = 0; c < count; ++c)
    for (std::size_t d = 0; d < count; ++d) {
      ComplexMatrix block;
      if (c == d) {
        const auto &nodes = layout.nodes[c];
        switch (kind) {
          case OperatorKind::S: block = self_single_layer(nodes, n, kernel, rw); break;
          case OperatorKind::K: block = self_double_layer(nodes, n, kernel, rw, false); break;
          case OperatorKind::KPrime: block = self_double_layer(nodes, n, kernel, rw, true); break;
          case OperatorKind::N: block = self_hypersingular(nodes, n, kernel, rw); break;
        }
      } else {
        block = cross_block(kind, layout.nodes[c], layout.nodes[d], n, kernel);
      }
      a.block(layout.offset(c), layout.offset(d), 2 * n, 2 * n) = block;
    }
  return a;
}

}  // namespace nystrom

inline BoundaryOperatorMatrix assemble_boundary_operator(OperatorKind kind,
                                                         std::span<const Curve> curves,
                                                         Wavenumber wavenumber, int n)
{
  nystrom::require_disjoint(curves);
  const auto layout = nystrom::make_layout(curves, n);
  BoundaryOperatorMatrix out;
  out.kind = kind;
  out.wavenumber = wavenumber;
  out.curves.assign(curves.begin(), curves.end());
  out.nodes = layout.nodes;
  out.n = n;
  out.weights = nystrom::arc_weights(layout);
  out.matrix = nystrom::assemble(kind, layout, Kernel(wavenumber));
  return out;
}

// ---------------------------------------------------------------------------------------------
// Exterior boundary value problems
// ---------------------------------------------------------------------------------------------

struct BoundaryPart
{
  Curve curve;
  BoundaryCondition condition = BoundaryCondition::Dirichlet;
  double impedance = 0.0;  // lambda in d/dnu u + i lambda u = f
};

// Penetrable source term of a solution: point sources of strength `strength` at `points`,
// i.e. u^s gains sum_j Phi(x, y_j) strength_j (a discretized volume potential).
struct VolumeSource
{
  std::vector<Vec2> points;
  ComplexVector strength;
};

//
// Scattered field u^s = sum_c (D_c - i eta S_c) phi_c + optional volume potential, with
// far-field pattern in the convention
//
//     u^s(x) = gamma2 e^{ikr} / sqrt(r) u_inf(xhat) + O(r^{-3/2}),  gamma2 = e^{i pi/4}/sqrt(8 pi k).
//
// With gamma2 held outside u_inf, the far field of a point source Phi(., y) is e^{-ik xhat.y}.
//
class ForwardSolution
{
public:
  ForwardSolution() = default;

  ForwardSolution(double k, double eta, int n, std::vector<std::vector<CurvePoint>> nodes,
                  ComplexVector density)
      : k_(k), eta_(eta), n_(n), nodes_(std::move(nodes)), density_(std::move(density))
  {
  }

  double k() const { return k_; }
  double eta() const { return eta_; }
  const ComplexVector &density() const { return density_; }
  const std::vector<std::vector<CurvePoint>> &nodes() const { return nodes_; }
  int n() const { return n_; }

  void set_volume_source(VolumeSource src) { volume_ = std::move(src); }
  const VolumeSource &volume_source() const { return volume_; }

  cd far_field(Vec2 xhat) const
  {
    const double h = n_ > 0 ? std::numbers::pi / n_ : 0.0;
    cd acc = 0.0;
    Eigen::Index idx = 0;
    for (const auto &curve : nodes_)
      for (const auto &y : curve) {
        const cd e = std::polar(1.0, -k_ * xhat.dot(y.p));
        acc += h * y.speed * cd(0.0, -1.0) * (k_ * y.normal.dot(xhat) + eta_) * e *
               density_(idx++);
      }
    for (std::size_t j = 0; j < volume_.points.size(); ++j)
      acc += std::polar(1.0, -k_ * xhat.dot(volume_.points[j])) *
             volume_.strength(static_cast<Eigen::Index>(j));
    return acc;
  }

  std::vector<cd> far_field(std::span<const Vec2> directions) const
  {
    std::vector<cd> out;
    out.reserve(directions.size());
    for (const auto &d : directions)
      out.push_back(far_field(d));
    return out;
  }

  // Trapezoid-rule evaluation; accurate away from the boundaries (a few node spacings).
  cd near_field(Vec2 x) const
  {
    const Kernel kernel(Wavenumber::real(k_));
    const double h = n_ > 0 ? std::numbers::pi / n_ : 0.0;
    cd acc = 0.0;
    Eigen::Index idx = 0;
    for (const auto &curve : nodes_)
      for (const auto &y : curve) {
        const Vec2 d = x - y.p;
        const double r = d.norm();
        const cd dl = kernel.dphi(r) * (-y.normal.dot(d)) / r;
        acc += h * y.speed * (dl - cd(0.0, eta_) * kernel.phi(r)) * density_(idx++);
      }
    for (std::size_t j = 0; j < volume_.points.size(); ++j)
      acc += kernel.phi((x - volume_.points[j]).norm()) *
             volume_.strength(static_cast<Eigen::Index>(j));
    return acc;
  }

private:
  double k_ = 1.0;
  double eta_ = 1.0;
  int n_ = 0;
  std::vector<std::vector<CurvePoint>> nodes_;
  ComplexVector density_;
  VolumeSource volume_;
};

namespace nystrom
{

// Operators entering the combined-field system, assembled once per geometry.
struct LayerOperators
{
  ComplexMatrix s, k, kp, n;
};

inline LayerOperators assemble_layers(const Layout &layout, const Kernel &kernel)
{
  return {assemble(OperatorKind::S, layout, kernel), assemble(OperatorKind::K, layout, kernel),
          assemble(OperatorKind::KPrime, layout, kernel),
          assemble(OperatorKind::N, layout, kernel)};
}

//
// Rows of the boundary equations for u^s = (D - i eta S) phi:
//   Dirichlet : (1/2 + K - i eta S) phi                          = f
//   Neumann   : (N - i eta K' + i eta/2) phi                     = f
//   Impedance : Neumann rows + i lambda * Dirichlet rows         = f
//
inline ComplexMatrix system_matrix(std::span<const BoundaryPart> parts, const Layout &layout,
                                   const LayerOperators &ops, double eta)
{
  const cd ieta(0.0, eta);
  const Eigen::Index m = 2 * layout.n;
  ComplexMatrix a(layout.total, layout.total);
  for (std::size_t c = 0; c < parts.size(); ++c) {
    const Eigen::Index r0 = layout.offset(c);
    auto rows = [&](const ComplexMatrix &x) { return x.middleRows(r0, m); };
    ComplexMatrix dir = rows(ops.k) - ieta * rows(ops.s);
    dir.middleCols(r0, m).diagonal().array() += 0.5;
    ComplexMatrix neu = rows(ops.n) - ieta * rows(ops.kp);
    neu.middleCols(r0, m).diagonal().array() += 0.5 * ieta;
    switch (parts[c].condition) {
      case BoundaryCondition::Dirichlet: a.middleRows(r0, m) = dir; break;
      case BoundaryCondition::Neumann: a.middleRows(r0, m) = neu; break;
      case BoundaryCondition::Impedance:
        a.middleRows(r0, m) = neu + cd(0.0, parts[c].impedance) * dir;
        break;
    }
  }
  return a;
}

// Boundary data f for the incident plane wave e^{ik theta.x}: minus the incident trace.
inline ComplexVector plane_wave_data(std::span<const BoundaryPart> parts, const Layout &layout,
                                     double k, Vec2 theta)
{
  ComplexVector f(layout.total);
  for (std::size_t c = 0; c < parts.size(); ++c)
    for (int j = 0; j < 2 * layout.n; ++j) {
      const auto &x = layout.nodes[c][static_cast<std::size_t>(j)];
      const cd ui = std::polar(1.0, k * theta.dot(x.p));
      const cd dui = cd(0.0, k * theta.dot(x.normal)) * ui;
      cd v;
      switch (parts[c].condition) {
        case BoundaryCondition::Dirichlet: v = -ui; break;
        case BoundaryCondition::Neumann: v = -dui; break;
        case BoundaryCondition::Impedance: v = -(dui + cd(0.0, parts[c].impedance) * ui); break;
      }
      f(layout.offset(c) + j) = v;
    }
  return f;
}

}  // namespace nystrom

//
// Exterior scattering solver for a set of disjoint curves with per-curve boundary conditions.
// Assembles and LU-factors the block system once; solves are cheap per right-hand side.
//
class ExteriorSolver
{
public:
  ExteriorSolver(std::vector<BoundaryPart> parts, double k, int n)
      : parts_(std::move(parts)), k_(k), eta_(k)
  {
    if (parts_.empty())
      throw std::invalid_argument("exterior solver: no boundary curves");
    if (!(k > 0.0))
      throw std::invalid_argument("exterior solver: wavenumber must be positive");
    std::vector<Curve> curves;
    for (const auto &p : parts_) {
      if (p.condition == BoundaryCondition::Impedance && !(p.impedance > 0.0))
        throw ValidationError("exterior solver: impedance lambda must be positive");
      curves.push_back(p.curve);
    }
    nystrom::require_disjoint(curves);
    layout_ = nystrom::make_layout(curves, n);
    const auto ops = nystrom::assemble_layers(layout_, Kernel(Wavenumber::real(k)));
    system_ = nystrom::system_matrix(parts_, layout_, ops, eta_);
    lu_.factor(system_);
  }

  double k() const { return k_; }
  double eta() const { return eta_; }
  int n() const { return layout_.n; }
  const std::vector<BoundaryPart> &parts() const { return parts_; }
  const std::vector<std::vector<CurvePoint>> &nodes() const { return layout_.nodes; }
  Eigen::Index unknowns() const { return layout_.total; }
  const ComplexMatrix &system() const { return system_; }

  ComplexVector plane_wave_data(Vec2 theta) const
  {
    return nystrom::plane_wave_data(parts_, layout_, k_, theta);
  }

  ForwardSolution solve_data(const ComplexVector &data) const
  {
    if (data.size() != layout_.total)
      throw std::invalid_argument("exterior solver: boundary data has wrong length");
    return {k_, eta_, layout_.n, layout_.nodes, lu_.solve(data)};
  }

  ForwardSolution solve_plane_wave(Vec2 theta) const { return solve_data(plane_wave_data(theta)); }

  // Densities for many incident directions at once (one column per direction).
  ComplexMatrix solve_plane_waves(std::span<const Vec2> thetas) const
  {
    ComplexMatrix rhs(layout_.total, static_cast<Eigen::Index>(thetas.size()));
    for (std::size_t j = 0; j < thetas.size(); ++j)
      rhs.col(static_cast<Eigen::Index>(j)) = plane_wave_data(thetas[j]);
    return lu_.solve(rhs);
  }

  // Far-field evaluation matrix: u_inf(xhat_i) = sum_j E(i, j) phi_j.
  ComplexMatrix far_field_matrix(std::span<const Vec2> directions) const
  {
    const double h = std::numbers::pi / layout_.n;
    ComplexMatrix e(static_cast<Eigen::Index>(directions.size()), layout_.total);
    for (std::size_t i = 0; i < directions.size(); ++i) {
      const Vec2 xh = directions[i];
      Eigen::Index idx = 0;
      for (const auto &curve : layout_.nodes)
        for (const auto &y : curve)
          e(static_cast<Eigen::Index>(i), idx++) = h * y.speed * cd(0.0, -1.0) *
                                                   (k_ * y.normal.dot(xh) + eta_) *
                                                   std::polar(1.0, -k_ * xh.dot(y.p));
    }
    return e;
  }

  //
  // Relative residual of the boundary equations on a grid `factor` times finer: the density is
  // carried over by trigonometric interpolation and the boundary operators are re-assembled
  // at the fine resolution.
  //
  double refined_residual(const ForwardSolution &sol, Vec2 theta, int factor = 4) const
  {
    const int fine_n = layout_.n * factor;
    std::vector<Curve> curves;
    for (const auto &p : parts_)
      curves.push_back(p.curve);
    const auto fine = nystrom::make_layout(curves, fine_n);
    const auto ops = nystrom::assemble_layers(fine, Kernel(Wavenumber::real(k_)));
    const ComplexMatrix a = nystrom::system_matrix(parts_, fine, ops, eta_);
    ComplexVector phi(fine.total);
    for (std::size_t c = 0; c < parts_.size(); ++c)
      phi.segment(fine.offset(c), 2 * fine_n) = nystrom::trig_interpolate(
          sol.density().segment(layout_.offset(c), 2 * layout_.n), 2 * fine_n);
    const ComplexVector f = nystrom::plane_wave_data(parts_, fine, k_, theta);
    return (a * phi - f).norm() / f.norm();
  }

private:
  std::vector<BoundaryPart> parts_;
  double k_;
  double eta_;
  nystrom::Layout layout_;
  ComplexMatrix system_;
  linalg::LuSolver lu_;
};

}  // namespace scatterfm

#endif  // SCATTERFM_FORWARD_BIE_HPP
