// SPDX-License-Identifier: Apache-2.0

#ifndef SCATTERFM_FARFIELD_HPP
#define SCATTERFM_FARFIELD_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scatterfm/errors.hpp"
#include "scatterfm/forward_bie.hpp"
#include "scatterfm/forward_medium.hpp"
#include "scatterfm/geometry.hpp"
#include "scatterfm/linalg.hpp"

namespace scatterfm
{

inline constexpr const char *kNormalizationGamma2 = "gamma2";

// x_j = (cos 2pi j/N, sin 2pi j/N), equal weights 2pi/N.
class DirectionGrid
{
public:
  explicit DirectionGrid(int n) : n_(n)
  {
    if (n < 16 || n % 2 != 0)
      throw ValidationError("direction grid: N must be even and >= 16, got " + std::to_string(n));
    dirs_.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double a = kTwoPi * j / n;
      dirs_.push_back({std::cos(a), std::sin(a)});
    }
  }

  int size() const { return n_; }
  double weight() const { return kTwoPi / n_; }
  const std::vector<Vec2> &directions() const { return dirs_; }
  Vec2 operator[](int j) const { return dirs_[static_cast<std::size_t>(j)]; }

private:
  int n_;
  std::vector<Vec2> dirs_;
};

// values(i, j) = u_inf(xhat_i, theta_j) on a DirectionGrid.
struct FarFieldMatrix
{
  int n = 0;
  double k = 0.0;
  std::string normalization = kNormalizationGamma2;
  std::vector<std::string> provenance;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise;
  ComplexMatrix values;

  DirectionGrid grid() const { return DirectionGrid(n); }
};

// Discretization parameters of the forward solvers.
struct SolverParams
{
  int n_boundary = 64;  // Nystrom half-count per curve (2n nodes)
  int m_volume = 48;    // volume cells per axis for the medium
};

inline FarFieldMatrix far_field_from_parts(std::vector<BoundaryPart> parts, double k,
                                           const DirectionGrid &grid, int n,
                                           std::string provenance)
{
  const ExteriorSolver solver(std::move(parts), k, n);
  FarFieldMatrix f;
  f.n = grid.size();
  f.k = k;
  f.provenance = {std::move(provenance)};
  f.values = solver.far_field_matrix(grid.directions()) *
             solver.solve_plane_waves(grid.directions());
  return f;
}

inline std::string measured_tag(const Scene &scene)
{
  return scene.scene_case == SceneCase::MixedObstacles ? "mix(omega1,omega2)"
                                                       : "mix(omega1q,omega2)";
}

// The measured operator of the scene: column j is the far field for incidence theta_j.
inline FarFieldMatrix assemble_far_field_operator(const Scene &scene, const DirectionGrid &grid,
                                                  const SolverParams &params)
{
  require_valid(scene);
  if (scene.scene_case == SceneCase::MixedObstacles)
    return far_field_from_parts({{scene.omega1, scene.omega1_condition(), 0.0},
                                 {scene.omega2, scene.omega2_condition(), 0.0}},
                                scene.k, grid, params.n_boundary, measured_tag(scene));
  const auto solver = MediumObstacleSolver::from_scene(scene, params.m_volume, params.n_boundary);
  FarFieldMatrix f;
  f.n = grid.size();
  f.k = scene.k;
  f.provenance = {measured_tag(scene)};
  f.values =
      solver.far_field_matrix(grid.directions()) * solver.solve_plane_waves(grid.directions());
  return f;
}

// ---------------------------------------------------------------------------------------------
// Artificial operators on the a-priori domains
// ---------------------------------------------------------------------------------------------

enum class ArtificialKind
{
  DirB2,
  DirB1B2,
  ImpB1B3,
  ImpB3,
  ImpB2
};

inline std::string to_string(ArtificialKind a)
{
  switch (a) {
    case ArtificialKind::DirB2: return "dir(b2)";
    case ArtificialKind::DirB1B2: return "dir(b1+b2)";
    case ArtificialKind::ImpB1B3: return "imp(b1+b3)";
    case ArtificialKind::ImpB3: return "imp(b3)";
    case ArtificialKind::ImpB2: return "imp(b2)";
  }
  return "?";
}

// Artificial operators added by each variant, in summation order.
inline std::vector<ArtificialKind> artificial_kinds(Variant v)
{
  switch (v) {
    case Variant::T12: return {ArtificialKind::DirB2, ArtificialKind::ImpB1B3};
    case Variant::T14: return {ArtificialKind::DirB2, ArtificialKind::ImpB3};
    case Variant::T36: return {ArtificialKind::DirB1B2};
    case Variant::T46: return {ArtificialKind::ImpB2};
    case Variant::BaselineLiu:
    case Variant::BaselineKirschLiu: return {ArtificialKind::DirB2};
  }
  return {};
}

inline const Curve &require_domain(const std::optional<Curve> &c, const char *name,
                                   ArtificialKind kind)
{
  if (!c)
    throw ValidationError(std::string("missing-domain: ") + name + " required by " +
                          to_string(kind));
  return *c;
}

// Far-field operator of the auxiliary exterior problem on the listed a-priori curves only.
inline FarFieldMatrix artificial_operator(ArtificialKind kind, const Scene &scene,
                                          const DirectionGrid &grid, int n)
{
  const double lam = scene.lambda0;
  if (!(lam > 0.0))
    throw ValidationError("artificial operator: lambda0 must be positive");
  std::vector<BoundaryPart> parts;
  switch (kind) {
    case ArtificialKind::DirB2:
      parts = {{require_domain(scene.b2, "b2", kind), BoundaryCondition::Dirichlet, 0.0}};
      break;
    case ArtificialKind::DirB1B2:
      parts = {{require_domain(scene.b1, "b1", kind), BoundaryCondition::Dirichlet, 0.0},
               {require_domain(scene.b2, "b2", kind), BoundaryCondition::Dirichlet, 0.0}};
      break;
    case ArtificialKind::ImpB1B3:
      parts = {{require_domain(scene.b1, "b1", kind), BoundaryCondition::Impedance, lam},
               {require_domain(scene.b3, "b3", kind), BoundaryCondition::Impedance, lam}};
      break;
    case ArtificialKind::ImpB3:
      parts = {{require_domain(scene.b3, "b3", kind), BoundaryCondition::Impedance, lam}};
      break;
    case ArtificialKind::ImpB2:
      parts = {{require_domain(scene.b2, "b2", kind), BoundaryCondition::Impedance, lam}};
      break;
  }
  return far_field_from_parts(std::move(parts), scene.k, grid, n, to_string(kind));
}

inline std::vector<FarFieldMatrix> artificial_operators(Variant v, const Scene &scene,
                                                        const DirectionGrid &grid, int n)
{
  std::vector<FarFieldMatrix> out;
  for (auto kind : artificial_kinds(v))
    out.push_back(artificial_operator(kind, scene, grid, n));
  return out;
}

// ---------------------------------------------------------------------------------------------
// Sums
// ---------------------------------------------------------------------------------------------

inline void require_compatible(const FarFieldMatrix &a, const FarFieldMatrix &b)
{
  if (a.normalization != b.normalization)
    throw DataError("normalization mismatch: '" + a.normalization + "' vs '" +
                    b.normalization + "'");
  if (a.n != b.n || a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
    throw DataError("grid mismatch: N = " + std::to_string(a.n) + " vs " + std::to_string(b.n));
  if (std::abs(a.k - b.k) > 1e-12 * std::max(1.0, std::abs(a.k)))
    throw DataError("wavenumber mismatch: k = " + std::to_string(a.k) + " vs " +
                    std::to_string(b.k));
}

// Entrywise sum of measured and artificial parts; never re-solves anything.
inline FarFieldMatrix modify_operator(Variant v, const FarFieldMatrix &measured,
                                      std::span<const FarFieldMatrix> artificial)
{
  if (measured.normalization != kNormalizationGamma2)
    throw DataError("normalization mismatch: measured operator uses '" +
                    measured.normalization + "', expected 'gamma2'");
  const auto kinds = artificial_kinds(v);
  if (artificial.size() != kinds.size())
    throw DataError("variant " + to_string(v) + " needs " + std::to_string(kinds.size()) +
                    " artificial operators, got " + std::to_string(artificial.size()));
  FarFieldMatrix out = measured;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const auto &a = artificial[i];
    require_compatible(out, a);
    if (a.provenance.size() != 1 || a.provenance.front() != to_string(kinds[i]))
      throw DataError("variant " + to_string(v) + ": artificial operator " +
                      std::to_string(i + 1) + " should be " + to_string(kinds[i]));
    out.values += a.values;
    out.provenance.push_back(a.provenance.front());
  }
  return out;
}

// F + delta ||F||_F E / ||E||_F with E complex Gaussian from a seeded mt19937_64.
inline FarFieldMatrix add_noise(const FarFieldMatrix &f, double delta, std::uint64_t seed)
{
  if (!(delta >= 0.0 && delta <= 0.2))
    throw ValidationError("noise level must lie in [0, 0.2], got " + std::to_string(delta));
  FarFieldMatrix out = f;
  out.seed = seed;
  out.noise = delta;
  if (delta == 0.0)
    return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix e(f.values.rows(), f.values.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      e(i, j) = {re, im};
    }
  out.values += (delta * f.values.norm() / e.norm()) * e;
  return out;
}

// ---------------------------------------------------------------------------------------------
// FFOP v1 text format
// ---------------------------------------------------------------------------------------------

inline std::string ffop_header(const FarFieldMatrix &f)
{
  nlohmann::ordered_json h;
  h["n"] = f.n;
  h["k"] = f.k;
  h["normalization"] = f.normalization;
  h["provenance"] = f.provenance;
  if (f.seed)
    h["seed"] = *f.seed;
  if (f.noise)
    h["noise"] = *f.noise;
  return h.dump();
}

inline void write_ffop(std::ostream &os, const FarFieldMatrix &f)
{
  os << "FFOP v1\n" << ffop_header(f) << '\n';
  char buf[96];
  for (Eigen::Index i = 0; i < f.values.rows(); ++i)
    for (Eigen::Index j = 0; j < f.values.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", f.values(i, j).real(),
                    f.values(i, j).imag());
      os << buf;
    }
}

inline void write_ffop(const std::string &path, const FarFieldMatrix &f)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw IoError("cannot open '" + path + "' for writing");
  write_ffop(os, f);
  os.flush();
  if (!os)
    throw IoError("write to '" + path + "' failed");
}

inline FarFieldMatrix read_ffop(std::istream &is, const std::string &source = "<stream>")
{
  auto fail = [&](long line, const std::string &what) -> DataError {
    return DataError(source + ":" + std::to_string(line) + ": " + what);
  };
  std::string line;
  if (!std::getline(is, line))
    throw fail(1, "empty file, expected 'FFOP v1'");
  if (line != "FFOP v1") {
    if (line.rfind("FFOP v", 0) == 0)
      throw fail(1, "unsupported version '" + line.substr(5) + "' (supported: v1)");
    throw fail(1, "malformed magic line, expected 'FFOP v1'");
  }
  if (!std::getline(is, line))
    throw fail(2, "missing JSON header");
  FarFieldMatrix f;
  try {
    const auto h = nlohmann::json::parse(line);
    if (!h.is_object())
      throw fail(2, "header is not a JSON object");
    for (const auto &[key, _] : h.items())
      if (key != "n" && key != "k" && key != "normalization" && key != "provenance" &&
          key != "seed" && key != "noise")
        throw fail(2, "unknown header key '" + key + "'");
    if (!h.contains("n") || !h.contains("k") || !h.contains("normalization") ||
        !h.contains("provenance"))
      throw fail(2, "header needs keys n, k, normalization, provenance");
    f.n = h.at("n").get<int>();
    f.k = h.at("k").get<double>();
    f.normalization = h.at("normalization").get<std::string>();
    f.provenance = h.at("provenance").get<std::vector<std::string>>();
    if (h.contains("seed"))
      f.seed = h.at("seed").get<std::uint64_t>();
    if (h.contains("noise"))
      f.noise = h.at("noise").get<double>();
  } catch (const nlohmann::json::exception &e) {
    throw fail(2, std::string("malformed header: ") + e.what());
  }
  if (f.n <= 0 || f.n > 1 << 14)
    throw fail(2, "invalid dimension n = " + std::to_string(f.n));
  if (f.normalization != kNormalizationGamma2)
    throw fail(2, "unsupported normalization '" + f.normalization + "'");
  f.values.resize(f.n, f.n);
  long lineno = 2;
  for (Eigen::Index i = 0; i < f.n; ++i)
    for (Eigen::Index j = 0; j < f.n; ++j) {
      ++lineno;
      if (!std::getline(is, line))
        throw fail(lineno, "truncated file: expected " + std::to_string(long(f.n) * f.n) +
                               " entries, got " + std::to_string(lineno - 3));
      std::istringstream ss(line);
      ss.imbue(std::locale::classic());
      double re = 0.0, im = 0.0;
      std::string extra;
      if (!(ss >> re >> im) || (ss >> extra))
        throw fail(lineno, "expected 're im', got '" + line + "'");
      if (!std::isfinite(re) || !std::isfinite(im))
        throw fail(lineno, "non-finite entry");
      f.values(i, j) = {re, im};
    }
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty())
      throw fail(lineno, "dimension mismatch: more than n*n entries");
  }
  return f;
}

inline FarFieldMatrix read_ffop(const std::string &path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw IoError("cannot open '" + path + "'");
  return read_ffop(is, path);
}

}  // namespace scatterfm

#endif  // SCATTERFM_FARFIELD_HPP
