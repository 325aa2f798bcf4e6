// SPDX-License-Identifier: Apache-2.0

#ifndef SCATTERFM_FORWARD_MEDIUM_HPP
#define SCATTERFM_FORWARD_MEDIUM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "scatterfm/errors.hpp"
#include "scatterfm/forward_bie.hpp"
#include "scatterfm/geometry.hpp"
#include "scatterfm/kernel.hpp"
#include "scatterfm/linalg.hpp"
#include "scatterfm/parallel.hpp"
#include "scatterfm/specfun.hpp"

namespace scatterfm
{

namespace volume
{

// int_0^R Phi(r) r dr = (i / 4k) R H1(kR) - 1 / (2 pi k^2)
inline cd radial_primitive(double k, double r)
{
  if (r <= 0.0)
    return {0.0, 0.0};
  return cd(0.0, 0.25 / k) * r * specfun::fast::h1(k * r) -
         1.0 / (2.0 * std::numbers::pi * k * k);
}

//
// Signed integral of Phi(|p - y|) over the triangle (p, a, b): in polar coordinates about p the
// radial integral is closed form, and the angular one is done along the edge a -> b with
// geometrically graded Gauss panels around the foot of the perpendicular from p.
//
inline cd triangle_integral(double k, Vec2 p, Vec2 a, Vec2 b)
{
  const Vec2 ra = a - p, rb = b - p;
  const Vec2 e = b - a;
  const double len = e.norm();
  if (len == 0.0)
    return {0.0, 0.0};
  const Vec2 t = e * (1.0 / len);
  const double cross = ra.x * rb.y - ra.y * rb.x;
  const double d = std::abs(cross) / len;  // distance from p to the edge line
  if (d < 1e-14 * len)
    return {0.0, 0.0};
  const double sign = cross > 0.0 ? 1.0 : -1.0;
  // Position along the edge line relative to the foot point.
  const double sa = ra.dot(t), sb = rb.dot(t);
  auto f = [&](double s) {
    const double r2 = d * d + s * s;
    return radial_primitive(k, std::sqrt(r2)) * (d / r2);
  };
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  // Integrate over [lo, hi] with 0 <= lo < hi, grading panels geometrically from d.
  auto graded = [&](double lo, double hi) {
    cd acc = 0.0;
    double x0 = lo;
    double width = std::max(d, lo);
    while (x0 < hi) {
      const double x1 = std::min(hi, x0 + width);
      acc += Gauss::integrate(f, x0, x1);
      x0 = x1;
      width *= 2.0;
    }
    return acc;
  };
  // sb - sa = |b - a| > 0, and f is even in s.
  cd acc;
  if (sa < 0.0 && sb > 0.0)
    acc = graded(0.0, -sa) + graded(0.0, sb);
  else if (sa >= 0.0)
    acc = graded(sa, sb);
  else
    acc = graded(-sb, -sa);
  return sign * acc;
}

// int over the axis-aligned square (center c, side h) of Phi(|p - y|) dy, any p.
inline cd square_integral(double k, Vec2 p, Vec2 c, double h)
{
  const double g = 0.5 * h;
  const std::array<Vec2, 4> v{Vec2{c.x - g, c.y - g}, Vec2{c.x + g, c.y - g},
                              Vec2{c.x + g, c.y + g}, Vec2{c.x - g, c.y + g}};
  cd acc = 0.0;
  for (int i = 0; i < 4; ++i)
    acc += triangle_integral(k, p, v[static_cast<std::size_t>(i)],
                             v[static_cast<std::size_t>((i + 1) % 4)]);
  return acc;
}

}  // namespace volume

//
// Uniform m x m cell grid over closure(Omega1) with a two-cell margin. Only cells meeting Omega1
// carry unknowns. A cell cut by the boundary keeps its inside area and puts its node at the
// centroid of the inside part; its inside fraction is also kept per 4 x 4 sub-cell for the
// near-field quadrature.
//
struct VolumeCell
{
  int ix = 0;
  int iy = 0;
  bool full = true;
  Vec2 center;
  Vec2 node;
  double area = 0.0;
  cd q{0.0, 0.0};
  std::array<double, 16> sub_fraction{};
  std::array<Vec2, 16> sub_centroid{};
};

class VolumeGrid
{
public:
  static constexpr int kSub = 4;         // sub-cells per axis for near integrals
  static constexpr int kSamplesPerSub = 4;  // area samples per sub-cell and axis

  VolumeGrid(const Curve &support, const ContrastSpec &contrast, int m) : m_(m)
  {
    if (m < 8)
      throw std::invalid_argument("volume grid: m must be >= 8, got " + std::to_string(m));
    const auto bb = support.bounding_box();
    const double extent = std::max(bb[1] - bb[0], bb[3] - bb[2]);
    h_ = extent / (m - 4);
    const Vec2 mid{0.5 * (bb[0] + bb[1]), 0.5 * (bb[2] + bb[3])};
    origin_ = {mid.x - 0.5 * m * h_, mid.y - 0.5 * m * h_};
    index_.assign(static_cast<std::size_t>(m * m), -1);

    const int fine = kSub * kSamplesPerSub;
    for (int ix = 0; ix < m; ++ix)
      for (int iy = 0; iy < m; ++iy) {
        VolumeCell cell;
        cell.ix = ix;
        cell.iy = iy;
        cell.center = cell_center(ix, iy);
        int hits = 0;
        for (int a = -1; a <= 1; ++a)
          for (int b = -1; b <= 1; ++b)
            hits += support.contains(cell.center + Vec2{a * 0.5 * h_, b * 0.5 * h_}) ? 1 : 0;
        if (hits == 0)
          continue;
        const double hs = h_ / kSub;
        if (hits == 9) {
          cell.full = true;
          cell.area = h_ * h_;
          cell.node = cell.center;
          for (int s = 0; s < kSub * kSub; ++s) {
            cell.sub_fraction[static_cast<std::size_t>(s)] = 1.0;
            cell.sub_centroid[static_cast<std::size_t>(s)] = sub_center(cell, s, hs);
          }
        } else {
          cell.full = false;
          Vec2 sum{0.0, 0.0};
          int total = 0;
          for (int s = 0; s < kSub * kSub; ++s) {
            const Vec2 sc = sub_center(cell, s, hs);
            Vec2 ssum{0.0, 0.0};
            int count = 0;
            for (int a = 0; a < kSamplesPerSub; ++a)
              for (int b = 0; b < kSamplesPerSub; ++b) {
                const Vec2 pt{sc.x + hs * ((a + 0.5) / kSamplesPerSub - 0.5),
                              sc.y + hs * ((b + 0.5) / kSamplesPerSub - 0.5)};
                if (support.contains(pt)) {
                  ssum = ssum + pt;
                  ++count;
                }
              }
            cell.sub_fraction[static_cast<std::size_t>(s)] =
                double(count) / (kSamplesPerSub * kSamplesPerSub);
            cell.sub_centroid[static_cast<std::size_t>(s)] =
                count > 0 ? ssum * (1.0 / count) : sc;
            sum = sum + ssum;
            total += count;
          }
          if (total == 0)
            continue;
          cell.area = h_ * h_ * double(total) / (fine * fine);
          cell.node = sum * (1.0 / total);
        }
        cell.q = contrast.form == ContrastForm::Constant
                     ? contrast.q0
                     : contrast.q0 * ContrastSpec::profile(support, cell.node);
        index_[static_cast<std::size_t>(ix * m + iy)] = static_cast<int>(cells_.size());
        cells_.push_back(cell);
      }
    if (cells_.empty())
      throw ValidationError("volume grid: no cell meets the medium support");
    check_resolution();
  }

  int m() const { return m_; }
  double h() const { return h_; }
  Vec2 origin() const { return origin_; }
  const std::vector<VolumeCell> &cells() const { return cells_; }
  const std::vector<std::string> &warnings() const { return warnings_; }

  Vec2 cell_center(int ix, int iy) const
  {
    return {origin_.x + (ix + 0.5) * h_, origin_.y + (iy + 0.5) * h_};
  }

  // Index into cells() or -1.
  int find(int ix, int iy) const
  {
    if (ix < 0 || iy < 0 || ix >= m_ || iy >= m_)
      return -1;
    return index_[static_cast<std::size_t>(ix * m_ + iy)];
  }

private:
  static Vec2 sub_center(const VolumeCell &cell, int s, double hs)
  {
    const int a = s / kSub, b = s % kSub;
    return {cell.center.x + hs * (a + 0.5 - 0.5 * kSub), cell.center.y + hs * (b + 0.5 - 0.5 * kSub)};
  }

  // Warn when q changes by more than 20% of max |q| between neighbouring cells.
  void check_resolution()
  {
    double qmax = 0.0;
    for (const auto &c : cells_)
      qmax = std::max(qmax, std::abs(c.q));
    if (qmax == 0.0)
      return;
    double worst = 0.0;
    for (const auto &c : cells_)
      for (const auto &[dx, dy] : {std::pair{1, 0}, std::pair{0, 1}}) {
        const int j = find(c.ix + dx, c.iy + dy);
        if (j >= 0)
          worst = std::max(worst, std::abs(cells_[static_cast<std::size_t>(j)].q - c.q) / qmax);
      }
    if (worst > 0.2)
      warnings_.push_back("grid-too-coarse: contrast varies by " + std::to_string(100.0 * worst) +
                          "% between neighbouring cells (limit 20%)");
  }

  int m_;
  double h_ = 0.0;
  Vec2 origin_;
  std::vector<VolumeCell> cells_;
  std::vector<int> index_;
  std::vector<std::string> warnings_;
};

//
// Medium-plus-obstacle scattering: a penetrable inclusion Omega1 with contrast q, and an
// optional sound-soft obstacle Omega2. The scattered field is
//
//   u^s = k^2 int_{Omega1} Phi(., y) q(y) u(y) dy + (D - i eta S) phi   on the exterior of Omega2,
//
// with unknowns the total field u at the cell nodes and the density phi on dOmega2. The
// resulting dense block system is LU-factored once.
//
class MediumObstacleSolver
{
public:
  static constexpr double kNearCells = 3.5;

  MediumObstacleSolver(const Curve &omega1, const ContrastSpec &contrast,
                       std::optional<Curve> omega2, double k, int m, int n)
      : grid_(omega1, contrast, m), k_(k), eta_(k)
  {
    if (!(k > 0.0) || !std::isfinite(k))
      throw std::invalid_argument("medium solver: wavenumber must be positive");
    if (omega2) {
      if (!detail::closures_disjoint(omega1, *omega2))
        throw ValidationError("medium solver: closure(omega1) and closure(omega2) intersect");
      std::vector<Curve> curves{*omega2};
      layout_ = nystrom::make_layout(curves, n);
      parts_.push_back({*omega2, BoundaryCondition::Dirichlet, 0.0});
      has_obstacle_ = true;
    }
    build_offset_table();
    assemble();
    try {
      lu_.factor(system_);
    } catch (const SolverError &e) {
      throw SolverError(std::string("medium solver: coupled system is singular: ") + e.what());
    }
  }

  static MediumObstacleSolver from_scene(const Scene &scene, int m, int n)
  {
    if (scene.scene_case != SceneCase::MediumPlusObstacle || !scene.contrast)
      throw ValidationError("medium solver: scene is not a medium-plus-obstacle case");
    return MediumObstacleSolver(scene.omega1, *scene.contrast, scene.omega2, scene.k, m, n);
  }

  double k() const { return k_; }
  const VolumeGrid &grid() const { return grid_; }
  const std::vector<std::string> &warnings() const { return grid_.warnings(); }
  Eigen::Index volume_unknowns() const { return static_cast<Eigen::Index>(grid_.cells().size()); }
  Eigen::Index unknowns() const { return volume_unknowns() + (has_obstacle_ ? layout_.total : 0); }

  ComplexVector plane_wave_data(Vec2 theta) const
  {
    ComplexVector f(unknowns());
    const auto &cells = grid_.cells();
    for (std::size_t i = 0; i < cells.size(); ++i)
      f(static_cast<Eigen::Index>(i)) = std::polar(1.0, k_ * theta.dot(cells[i].node));
    if (has_obstacle_)
      f.tail(layout_.total) = nystrom::plane_wave_data(parts_, layout_, k_, theta);
    return f;
  }

  ComplexMatrix solve_plane_waves(std::span<const Vec2> thetas) const
  {
    ComplexMatrix rhs(unknowns(), static_cast<Eigen::Index>(thetas.size()));
    for (std::size_t j = 0; j < thetas.size(); ++j)
      rhs.col(static_cast<Eigen::Index>(j)) = plane_wave_data(thetas[j]);
    return lu_.solve(rhs);
  }

  ForwardSolution solve(Vec2 theta) const
  {
    const Vec2 t[1] = {theta};
    return solution_from(solve_plane_waves(t).col(0));
  }

  // u_inf(xhat_i) = sum_j E(i, j) x_j for a solution vector x of the coupled system.
  ComplexMatrix far_field_matrix(std::span<const Vec2> directions) const
  {
    const auto &cells = grid_.cells();
    const Eigen::Index nv = volume_unknowns();
    ComplexMatrix e = ComplexMatrix::Zero(static_cast<Eigen::Index>(directions.size()), unknowns());
    for (std::size_t i = 0; i < directions.size(); ++i) {
      const Vec2 xh = directions[i];
      const auto row = static_cast<Eigen::Index>(i);
      for (std::size_t j = 0; j < cells.size(); ++j)
        e(row, static_cast<Eigen::Index>(j)) = k_ * k_ * cells[j].area * midpoint_correction() *
                                               cells[j].q *
                                               std::polar(1.0, -k_ * xh.dot(cells[j].node));
      if (has_obstacle_) {
        const double h = std::numbers::pi / layout_.n;
        Eigen::Index idx = nv;
        for (const auto &y : layout_.nodes[0])
          e(row, idx++) = h * y.speed * cd(0.0, -1.0) * (k_ * y.normal.dot(xh) + eta_) *
                          std::polar(1.0, -k_ * xh.dot(y.p));
      }
    }
    return e;
  }

  ForwardSolution solution_from(const ComplexVector &x) const
  {
    const auto &cells = grid_.cells();
    const Eigen::Index nv = volume_unknowns();
    ForwardSolution sol = has_obstacle_
                              ? ForwardSolution(k_, eta_, layout_.n, layout_.nodes,
                                                x.tail(layout_.total))
                              : ForwardSolution(k_, eta_, 0, {}, ComplexVector());
    VolumeSource src;
    src.strength.resize(nv);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      src.points.push_back(cells[j].node);
      src.strength(static_cast<Eigen::Index>(j)) =
          k_ * k_ * cells[j].area * midpoint_correction() * cells[j].q *
          x(static_cast<Eigen::Index>(j));
    }
    sol.set_volume_source(std::move(src));
    return sol;
  }

private:
  // Cell average of a Helmholtz solution relative to its midpoint value: 1 + h^2 Delta / 24.
  double midpoint_correction() const { return 1.0 - k_ * k_ * grid_.h() * grid_.h() / 24.0; }

  // int over the inside part of `cell` of Phi(|p - y|) dy.
  cd cell_weight(Vec2 p, const VolumeCell &cell) const
  {
    const Kernel kernel(Wavenumber::real(k_));
    const double h = grid_.h();
    if ((p - cell.center).norm() > kNearCells * h) {
      return cell.area * kernel.phi((p - cell.node).norm()) * midpoint_correction();
    }
    const double hs = h / VolumeGrid::kSub;
    cd acc = 0.0;
    for (int s = 0; s < VolumeGrid::kSub * VolumeGrid::kSub; ++s) {
      const double frac = cell.sub_fraction[static_cast<std::size_t>(s)];
      if (frac == 0.0)
        continue;
      const int a = s / VolumeGrid::kSub, b = s % VolumeGrid::kSub;
      const Vec2 sc{cell.center.x + hs * (a + 0.5 - 0.5 * VolumeGrid::kSub),
                    cell.center.y + hs * (b + 0.5 - 0.5 * VolumeGrid::kSub)};
      if ((p - sc).norm() > 2.0 * hs)
        acc += frac * hs * hs *
               kernel.phi((p - cell.sub_centroid[static_cast<std::size_t>(s)]).norm());
      else
        acc += frac * volume::square_integral(k_, p, sc, hs);
    }
    return acc;
  }

  // Full-cell weights between grid centres depend only on the index offset.
  void build_offset_table()
  {
    const int m = grid_.m();
    const int w = 2 * m - 1;
    table_.assign(static_cast<std::size_t>(w * w), cd(0.0, 0.0));
    const double h = grid_.h();
    const Kernel kernel(Wavenumber::real(k_));
    parallel_for(static_cast<std::size_t>(w), [&](std::size_t a) {
      const int dx = static_cast<int>(a) - (m - 1);
      for (int dy = -(m - 1); dy <= m - 1; ++dy) {
        const double r = h * std::hypot(double(dx), double(dy));
        cd v;
        if (r > kNearCells * h)
          v = h * h * kernel.phi(r) * midpoint_correction();
        else
          v = volume::square_integral(k_, {0.0, 0.0}, {dx * h, dy * h}, h);
        table_[a * static_cast<std::size_t>(w) + static_cast<std::size_t>(dy + m - 1)] = v;
      }
    });
  }

  cd table_weight(int dx, int dy) const
  {
    const int m = grid_.m();
    return table_[static_cast<std::size_t>((dx + m - 1) * (2 * m - 1) + (dy + m - 1))];
  }

  void assemble()
  {
    const auto &cells = grid_.cells();
    const Eigen::Index nv = volume_unknowns();
    const Eigen::Index total = unknowns();
    system_ = ComplexMatrix::Zero(total, total);
    const double k2 = k_ * k_;
    const Kernel kernel(Wavenumber::real(k_));

    parallel_for(cells.size(), [&](std::size_t i) {
      const auto &ci = cells[i];
      const auto row = static_cast<Eigen::Index>(i);
      for (std::size_t j = 0; j < cells.size(); ++j) {
        const auto &cj = cells[j];
        const cd w = (ci.full && cj.full) ? table_weight(cj.ix - ci.ix, cj.iy - ci.iy)
                                          : cell_weight(ci.node, cj);
        system_(row, static_cast<Eigen::Index>(j)) = -k2 * w * cj.q;
      }
      system_(row, row) += 1.0;
      if (has_obstacle_) {
        const double h = std::numbers::pi / layout_.n;
        Eigen::Index col = nv;
        for (const auto &y : layout_.nodes[0]) {
          const Vec2 d = ci.node - y.p;
          const double r = d.norm();
          const cd dl = kernel.dphi(r) * (-y.normal.dot(d)) / r;
          system_(row, col++) = -h * y.speed * (dl - cd(0.0, eta_) * kernel.phi(r));
        }
      }
    });

    if (!has_obstacle_)
      return;
    const auto ops = nystrom::assemble_layers(layout_, kernel);
    system_.bottomRightCorner(layout_.total, layout_.total) =
        nystrom::system_matrix(parts_, layout_, ops, eta_);
    const auto &bnodes = layout_.nodes[0];
    parallel_for(bnodes.size(), [&](std::size_t b) {
      const auto row = nv + static_cast<Eigen::Index>(b);
      for (std::size_t j = 0; j < cells.size(); ++j)
        system_(row, static_cast<Eigen::Index>(j)) =
            k2 * cell_weight(bnodes[b].p, cells[j]) * cells[j].q;
    });
  }

  VolumeGrid grid_;
  double k_;
  double eta_;
  bool has_obstacle_ = false;
  std::vector<BoundaryPart> parts_;
  nystrom::Layout layout_;
  std::vector<cd> table_;
  ComplexMatrix system_;
  linalg::LuSolver lu_;
};

//
// Relative Helmholtz residual |Delta u + k^2 u| / |k^2 u| of the scattered field at exterior
// points, with a five-point Laplacian of step `step`.
//
inline double helmholtz_residual(const ForwardSolution &sol, std::span<const Vec2> points,
                                 double step = 1e-2)
{
  double num = 0.0, den = 0.0;
  const double k2 = sol.k() * sol.k();
  for (const auto &x : points) {
    const cd u = sol.near_field(x);
    const cd lap = (sol.near_field(x + Vec2{step, 0.0}) + sol.near_field(x - Vec2{step, 0.0}) +
                    sol.near_field(x + Vec2{0.0, step}) + sol.near_field(x - Vec2{0.0, step}) -
                    4.0 * u) /
                   (step * step);
    num = std::max(num, std::abs(lap + k2 * u));
    den = std::max(den, std::abs(k2 * u));
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace scatterfm

#endif  // SCATTERFM_FORWARD_MEDIUM_HPP
