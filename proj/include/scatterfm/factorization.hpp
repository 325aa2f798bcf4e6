// SPDX-License-Identifier: Apache-2.0

#ifndef SCATTERFM_FACTORIZATION_HPP
#define SCATTERFM_FACTORIZATION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "scatterfm/errors.hpp"
#include "scatterfm/farfield.hpp"
#include "scatterfm/geometry.hpp"
#include "scatterfm/linalg.hpp"
#include "scatterfm/parallel.hpp"

namespace scatterfm
{

//
// F# = |Re(e^{-it} F)| + |Im F| with Re A = (A + A*)/2, Im A = (A - A*)/2i.
//
// With equal quadrature weights w the weighted eigenproblem reduces to the plain one:
// psi_n = v_n / sqrt(w) are orthonormal in <a, b>_w = sum_j w a_j conj(b_j), and lambda_n are
// the eigenvalues of the F# matrix itself.
//
struct SharpOperator
{
  std::vector<std::string> provenance;
  double t = 0.0;
  double weight = 0.0;
  ComplexMatrix matrix;
  RealVector eigenvalues;  // descending, clamped at 0
  ComplexMatrix psi;       // weighted-orthonormal eigenvectors

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

inline SharpOperator build_sharp(const FarFieldMatrix &f, double t = 0.0)
{
  if (f.values.rows() != f.values.cols() || f.values.rows() != f.n)
    throw DataError("build_sharp: far-field matrix is not N x N");
  const ComplexMatrix rotated = std::polar(1.0, -t) * f.values;
  const ComplexMatrix re = linalg::hermitian_part(rotated);
  const ComplexMatrix im = linalg::anti_hermitian_part(f.values);

  SharpOperator s;
  s.provenance = f.provenance;
  s.t = t;
  s.weight = kTwoPi / f.n;
  s.matrix = linalg::hermitian_part(linalg::abs_operator(re) + linalg::abs_operator(im));
  auto es = linalg::hermitian_eig(s.matrix);
  const double top = std::max(0.0, es.eigenvalues(0));
  const double floor = -1e-10 * top;
  for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
    if (es.eigenvalues(i) < floor)
      throw SolverError("build_sharp: F# has eigenvalue " + std::to_string(es.eigenvalues(i)) +
                        " below -1e-10 lambda_max");
    es.eigenvalues(i) = std::max(0.0, es.eigenvalues(i));
  }
  s.eigenvalues = es.eigenvalues;
  s.psi = es.eigenvectors / std::sqrt(s.weight);
  return s;
}

inline ComplexVector test_function(double k, Vec2 z, const DirectionGrid &grid)
{
  ComplexVector v(grid.size());
  for (int j = 0; j < grid.size(); ++j)
    v(j) = std::polar(1.0, -k * z.dot(grid[j]));
  return v;
}

//
// W(z) = [ sum_{lambda_n > eps lambda_1} |<phi_z, psi_n>_w|^2 / lambda_n ]^{-1}
//
class PicardIndicator
{
public:
  PicardIndicator(const SharpOperator &sharp, double k, double eps_rel = 1e-8)
      : k_(k), grid_(sharp.size())
  {
    if (sharp.size() == 0 || !(sharp.eigenvalues(0) > 0.0))
      throw DataError("degenerate spectrum: largest eigenvalue of F# is not positive");
    if (!(eps_rel > 0.0 && eps_rel < 1.0))
      throw ValidationError("truncation eps_rel must lie in (0, 1)");
    const double tau = eps_rel * sharp.eigenvalues(0);
    Eigen::Index kept = 0;
    while (kept < sharp.eigenvalues.size() && sharp.eigenvalues(kept) > tau)
      ++kept;
    // <phi, psi_n>_w = w psi_n^* phi
    proj_ = sharp.weight * sharp.psi.leftCols(kept).adjoint();
    inv_lambda_ = sharp.eigenvalues.head(kept).cwiseInverse();
  }

  Eigen::Index retained() const { return inv_lambda_.size(); }

  double operator()(Vec2 z) const
  {
    const ComplexVector c = proj_ * test_function(k_, z, grid_);
    double series = 0.0;
    for (Eigen::Index n = 0; n < c.size(); ++n)
      series += std::norm(c(n)) * inv_lambda_(n);
    return series > 0.0 ? 1.0 / series : std::numeric_limits<double>::infinity();
  }

private:
  double k_;
  DirectionGrid grid_;
  ComplexMatrix proj_;
  RealVector inv_lambda_;
};

inline double picard_indicator(const SharpOperator &sharp, double k, Vec2 z,
                               double eps_rel = 1e-8)
{
  return PicardIndicator(sharp, k, eps_rel)(z);
}

// ---------------------------------------------------------------------------------------------
// Sampling grid
// ---------------------------------------------------------------------------------------------

struct Window
{
  double x0 = -5.0, x1 = 5.0, y0 = -5.0, y1 = 5.0;
  int res = 80;

  double x(int i) const { return res == 1 ? x0 : x0 + (x1 - x0) * i / (res - 1); }
  double y(int j) const { return res == 1 ? y0 : y0 + (y1 - y0) * j / (res - 1); }
  double cell() const { return res == 1 ? 0.0 : std::max(x1 - x0, y1 - y0) / (res - 1); }
};

// Points are stored row by row: index = j * res + i for (x(i), y(j)).
struct IndicatorGrid
{
  Window window;
  std::vector<Vec2> points;
  std::vector<double> values;  // NaN where masked
  std::vector<bool> masked;

  std::size_t unmasked_count() const
  {
    return static_cast<std::size_t>(std::count(masked.begin(), masked.end(), false));
  }
};

// Masks closure(B2) dilated by one grid cell.
inline std::vector<bool> b2_mask(const Window &w, const std::vector<Vec2> &points,
                                 const std::optional<Curve> &b2)
{
  std::vector<bool> mask(points.size(), false);
  if (!b2)
    return mask;
  const double guard = w.cell();
  for (std::size_t i = 0; i < points.size(); ++i)
    mask[i] = b2->contains(points[i]) || b2->distance(points[i], 1024) <= guard;
  return mask;
}

inline IndicatorGrid reconstruct(const SharpOperator &sharp, double k, const Window &window,
                                 const std::optional<Curve> &b2, double eps_rel = 1e-8)
{
  if (window.res < 1 || !(window.x1 >= window.x0) || !(window.y1 >= window.y0))
    throw ValidationError("reconstruct: invalid sampling window");
  IndicatorGrid g;
  g.window = window;
  for (int j = 0; j < window.res; ++j)
    for (int i = 0; i < window.res; ++i)
      g.points.push_back({window.x(i), window.y(j)});
  g.masked = b2_mask(window, g.points, b2);
  g.values.assign(g.points.size(), std::numeric_limits<double>::quiet_NaN());
  const PicardIndicator w(sharp, k, eps_rel);
  parallel_for(g.points.size(), [&](std::size_t p) {
    if (!g.masked[p])
      g.values[p] = w(g.points[p]);
  });
  return g;
}

// ---------------------------------------------------------------------------------------------
// Scoring
// ---------------------------------------------------------------------------------------------

struct ReconstructionScore
{
  double contrast = 0.0;
  double jaccard = 0.0;
  double best_threshold = 0.0;
  std::size_t inside_points = 0;
  std::size_t outside_points = 0;
};

inline double median(std::vector<double> v)
{
  if (v.empty())
    throw DataError("median of empty set");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1)
    return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

//
// contrast: median W over Omega1 / median W over points at distance >= 0.25 from Omega1.
// jaccard : best over theta in {0.1, ..., 0.9} of J({W >= theta max W}, Omega1).
//
inline ReconstructionScore threshold_and_score(const IndicatorGrid &g, const Curve &omega1)
{
  std::vector<double> inside, outside;
  std::vector<bool> truth(g.points.size(), false);
  double wmax = 0.0;
  for (std::size_t p = 0; p < g.points.size(); ++p) {
    if (g.masked[p])
      continue;
    wmax = std::max(wmax, g.values[p]);
    if (omega1.contains(g.points[p])) {
      truth[p] = true;
      inside.push_back(g.values[p]);
    } else if (omega1.distance(g.points[p], 512) >= 0.25) {
      outside.push_back(g.values[p]);
    }
  }
  if (inside.empty())
    throw DataError("no-interior-points: the sampling grid misses omega1");
  if (outside.empty())
    throw DataError("no-exterior-points: the sampling grid has no point 0.25 away from omega1");

  ReconstructionScore s;
  s.inside_points = inside.size();
  s.outside_points = outside.size();
  const double mo = median(outside);
  s.contrast = mo > 0.0 ? median(inside) / mo : std::numeric_limits<double>::infinity();
  for (int step = 1; step <= 9; ++step) {
    const double theta = 0.1 * step;
    std::size_t both = 0, either = 0;
    for (std::size_t p = 0; p < g.points.size(); ++p) {
      if (g.masked[p])
        continue;
      const bool pred = g.values[p] >= theta * wmax;
      both += (pred && truth[p]) ? 1 : 0;
      either += (pred || truth[p]) ? 1 : 0;
    }
    const double j = either > 0 ? double(both) / double(either) : 0.0;
    if (j > s.jaccard) {
      s.jaccard = j;
      s.best_threshold = theta;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------------------------
// Whole pipeline: artificial operators, sum, F#, indicator grid
// ---------------------------------------------------------------------------------------------

// Phase t entering F#: 0 for the mixed case, select_phase for the medium case.
inline double sharp_phase(const Scene &scene)
{
  if (scene.scene_case == SceneCase::MixedObstacles)
    return 0.0;
  if (!scene.contrast)
    throw ValidationError("medium case requires a contrast q on omega1");
  if (scene.variant == Variant::T14 || scene.variant == Variant::T46)
    return select_phase(*scene.contrast, scene.omega1, scene.variant).t;
  return select_phase(*scene.contrast, scene.omega1).t;
}

struct ReconstructionResult
{
  FarFieldMatrix modified;
  SharpOperator sharp;
  IndicatorGrid grid;
};

inline ReconstructionResult reconstruct_scene(const Scene &scene, const FarFieldMatrix &measured,
                                              const Window &window, int n_boundary,
                                              double eps_rel = 1e-8)
{
  require_valid(scene);
  if (std::abs(measured.k - scene.k) > 1e-12 * std::max(1.0, scene.k))
    throw DataError("wavenumber mismatch: data has k = " + std::to_string(measured.k) +
                    ", scene has k = " + std::to_string(scene.k));
  const DirectionGrid grid(measured.n);
  const auto parts = artificial_operators(scene.variant, scene, grid, n_boundary);
  ReconstructionResult r;
  r.modified = modify_operator(scene.variant, measured, parts);
  r.sharp = build_sharp(r.modified, sharp_phase(scene));
  r.grid = reconstruct(r.sharp, scene.k, window, scene.b2, eps_rel);
  return r;
}

// ---------------------------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------------------------

// Every grid point gets a row; masked rows leave the indicator empty.
inline void write_csv(std::ostream &os, const IndicatorGrid &g)
{
  os << "x,y,indicator,masked\n";
  char buf[128];
  for (std::size_t p = 0; p < g.points.size(); ++p) {
    if (g.masked[p])
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,,1\n", g.points[p].x, g.points[p].y);
    else
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,0\n", g.points[p].x, g.points[p].y,
                    g.values[p]);
    os << buf;
  }
}

// P2, maxval 65535, top row = largest y. Linear in W over unmasked points; masked = 0.
inline void write_pgm(std::ostream &os, const IndicatorGrid &g)
{
  const int res = g.window.res;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t p = 0; p < g.points.size(); ++p)
    if (!g.masked[p]) {
      lo = std::min(lo, g.values[p]);
      hi = std::max(hi, g.values[p]);
    }
  os << "P2\n" << res << ' ' << res << "\n65535\n";
  for (int j = res - 1; j >= 0; --j) {
    for (int i = 0; i < res; ++i) {
      const std::size_t p = static_cast<std::size_t>(j * res + i);
      long v = 0;
      if (!g.masked[p])
        v = hi > lo ? std::lround(65535.0 * (g.values[p] - lo) / (hi - lo)) : 65535;
      os << v << (i + 1 < res ? ' ' : '\n');
    }
  }
}

inline void write_csv(const std::string &path, const IndicatorGrid &g)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw IoError("cannot open '" + path + "' for writing");
  write_csv(os, g);
  if (!os)
    throw IoError("write to '" + path + "' failed");
}

inline void write_pgm(const std::string &path, const IndicatorGrid &g)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw IoError("cannot open '" + path + "' for writing");
  write_pgm(os, g);
  if (!os)
    throw IoError("write to '" + path + "' failed");
}

}  // namespace scatterfm

#endif  // SCATTERFM_FACTORIZATION_HPP
