// SPDX-License-Identifier: Apache-2.0

#ifndef SCATTERFM_SELFTEST_HPP
#define SCATTERFM_SELFTEST_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scatterfm/disc_oracle.hpp"
#include "scatterfm/factorization.hpp"
#include "scatterfm/farfield.hpp"
#include "scatterfm/forward_bie.hpp"
#include "scatterfm/geometry.hpp"
#include "scatterfm/linalg.hpp"
#include "scatterfm/specfun.hpp"

//
// Invariant suites run by `scatterfm selftest`. Each suite is small (well under a second).
// A fault can be injected into a named suite's fixture to check that the harness notices.
//
namespace scatterfm::selftest
{

struct Outcome
{
  bool pass = false;
  std::string detail;
};

struct Suite
{
  std::string name;
  std::function<Outcome(bool inject_fault)> run;
};

struct Result
{
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail
{

inline std::string fmt(double v)
{
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

inline Outcome check(bool ok, const std::string &what, double value, double bound)
{
  return {ok, what + " = " + fmt(value) + " (bound " + fmt(bound) + ")"};
}

inline ComplexMatrix random_matrix(int n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = g(rng);
      const double im = g(rng);
      a(i, j) = {re, im};
    }
  return a;
}

// Smallest eigenvalue of the Hermitian part of sign * W^{1/2} A W^{-1/2}.
inline double min_weighted_eigenvalue(const BoundaryOperatorMatrix &op, double sign)
{
  const RealVector sw = op.weights.cwiseSqrt();
  const RealVector isw = sw.cwiseInverse();
  ComplexMatrix h = sw.asDiagonal() * op.matrix * isw.asDiagonal();
  h = linalg::hermitian_part(sign * h);
  return linalg::hermitian_eig(h).eigenvalues.minCoeff();
}

}  // namespace detail

inline std::vector<Suite> suites()
{
  using detail::check;
  std::vector<Suite> s;

  s.push_back({"bessel-wronskian", [](bool fault) {
                 double worst = 0.0;
                 for (double x : {0.5, 1.0, 5.0, 12.0})
                   for (int n = 0; n <= 10; ++n) {
                     const double w = specfun::bessel_j(n, x) * specfun::bessel_y_prime(n, x) -
                                      specfun::bessel_j_prime(n, x) * specfun::bessel_y(n, x);
                     const double target = 2.0 / (std::numbers::pi * x) * (fault ? -1.0 : 1.0);
                     worst = std::max(worst, std::abs(w - target));
                   }
                 return check(worst <= 1e-10, "max Wronskian defect", worst, 1e-10);
               }});

  s.push_back({"bessel-recurrence", [](bool fault) {
                 double worst = 0.0;
                 for (double x : {0.3, 2.0, 7.5, 19.0})
                   for (int n = 1; n <= 20; ++n) {
                     const double lhs = specfun::bessel_j(n - 1, x) + specfun::bessel_j(n + 1, x);
                     const double rhs = (fault ? 3.0 : 2.0) * n / x * specfun::bessel_j(n, x);
                     worst = std::max(worst, std::abs(lhs - rhs));
                     const double ly = specfun::bessel_y(n - 1, x) + specfun::bessel_y(n + 1, x);
                     const double ry = 2.0 * n / x * specfun::bessel_y(n, x);
                     worst = std::max(worst, std::abs(ly - ry) / std::max(1.0, std::abs(ry)));
                   }
                 return check(worst <= 1e-10, "max recurrence defect", worst, 1e-10);
               }});

  s.push_back({"hermitian-eigensystem", [](bool fault) {
                 const ComplexMatrix m = detail::random_matrix(24, 11);
                 const ComplexMatrix a = linalg::hermitian_part(m);
                 auto es = linalg::hermitian_eig(a);
                 if (fault)
                   es.eigenvalues(0) += 1.0;
                 const double orth =
                     linalg::max_abs(es.eigenvectors.adjoint() * es.eigenvectors -
                                     ComplexMatrix::Identity(24, 24));
                 const double rec = linalg::max_abs(a - linalg::reassemble(es, es.eigenvalues));
                 const double bound = 1e-9 * (1.0 + linalg::max_abs(a));
                 bool sorted = true;
                 for (Eigen::Index i = 1; i < es.eigenvalues.size(); ++i)
                   sorted = sorted && es.eigenvalues(i - 1) >= es.eigenvalues(i);
                 return Outcome{orth <= 1e-10 && rec <= bound && sorted,
                                "orthonormality " + detail::fmt(orth) + ", reconstruction " +
                                    detail::fmt(rec) + (sorted ? "" : ", unsorted")};
               }});

  s.push_back({"abs-operator-psd", [](bool fault) {
                 const ComplexMatrix m = detail::random_matrix(20, 5);
                 const ComplexMatrix a = linalg::hermitian_part(m);
                 ComplexMatrix abs = linalg::abs_operator(a);
                 if (fault)
                   abs = -abs;
                 const double lo = linalg::hermitian_eig(abs).eigenvalues.minCoeff();
                 const ComplexMatrix psd = m.adjoint() * m;
                 const double same = linalg::max_abs(linalg::abs_operator(psd) - psd);
                 const double scale = std::max(1.0, linalg::max_abs(a));
                 return Outcome{lo >= -1e-10 * scale && same <= 1e-9 * linalg::max_abs(psd),
                                "min eigenvalue " + detail::fmt(lo) + ", |PSD| defect " +
                                    detail::fmt(same)};
               }});

  s.push_back({"linear-solve-residual", [](bool fault) {
                 const int n = 64;
                 ComplexMatrix a = detail::random_matrix(n, 3);
                 a.diagonal().array() += cd(2.0 * n, 0.0);
                 const ComplexMatrix x0 = detail::random_matrix(n, 4).leftCols(3);
                 const ComplexMatrix b = a * x0;
                 ComplexMatrix x = linalg::solve_linear(a, b);
                 if (fault)
                   x(0, 0) += 1.0;
                 const double err = linalg::max_abs(x - x0);
                 return check(err <= 1e-10, "max recovery error", err, 1e-10);
               }});

  s.push_back({"curve-normals", [](bool fault) {
                 double worst = 0.0;
                 bool outward = true;
                 for (const auto &c : {Curve::circle({1.0, -0.5}, 0.7),
                                       Curve::ellipse({0.0, 0.0}, 2.0, 1.0, 0.3),
                                       Curve::kite({-3.0, 0.0})}) {
                   for (const auto &p : curve_sample(c, 32)) {
                     const Vec2 nu = fault ? p.normal * -1.0 : p.normal;
                     worst = std::max(worst, std::abs(nu.dot(p.d1)) / p.speed);
                     outward = outward && !c.contains(p.p + nu * 1e-3) && c.contains(p.p - nu * 1e-3);
                   }
                 }
                 return Outcome{worst <= 1e-13 && outward,
                                "max |nu . p'| " + detail::fmt(worst) +
                                    (outward ? ", normals outward" : ", normal points inward")};
               }});

  s.push_back({"scene-validation-circles", [](bool fault) {
                 std::mt19937_64 rng(17);
                 std::uniform_real_distribution<double> u(-2.0, 2.0), r(0.1, 1.5);
                 int disagreements = 0;
                 for (int t = 0; t < 100; ++t) {
                   const Vec2 ca{u(rng), u(rng)}, cb{u(rng), u(rng)};
                   const double ra = r(rng), rb = r(rng);
                   const double d = (ca - cb).norm();
                   const bool inside = d + ra < rb;
                   const bool disjoint = d > ra + rb;
                   const Curve a = Curve::circle(ca, ra), b = Curve::circle(cb, rb);
                   bool got_inside = scatterfm::detail::closure_inside(a, b);
                   if (fault)
                     got_inside = !got_inside;
                   disagreements += (got_inside != inside) ? 1 : 0;
                   disagreements += (scatterfm::detail::closures_disjoint(a, b) != disjoint) ? 1 : 0;
                 }
                 return Outcome{disagreements == 0,
                                std::to_string(disagreements) + " disagreements in 100 configurations"};
               }});

  s.push_back({"phase-margin", [](bool fault) {
                 std::string detail;
                 bool ok = true;
                 for (cd q0 : {cd(-0.5, 0.0), cd(0.5, 0.0), cd(0.0, 1.0), cd(0.3, 0.4)}) {
                   const ContrastSpec q{ContrastForm::Constant, q0};
                   const Curve support = Curve::circle({0.0, 0.0}, 1.0);
                   const auto ph = select_phase(q, support);
                   const double t = fault ? ph.t + std::numbers::pi : ph.t;
                   const double margin = (std::polar(1.0, -t) * q0).real() / std::abs(q0);
                   ok = ok && margin >= ph.margin - 1e-12 && ph.margin >= 0.05;
                   detail += "t=" + detail::fmt(ph.t) + " ";
                 }
                 return Outcome{ok, detail + (ok ? "margins hold" : "margin violated")};
               }});

  s.push_back({"single-layer-coercivity-k=i", [](bool fault) {
                 const Curve c = Curve::circle({0.0, 0.0}, 1.0);
                 auto op = assemble_boundary_operator(OperatorKind::S, std::span<const Curve>(&c, 1),
                                                      Wavenumber::i(), 32);
                 if (fault)
                   op.matrix = -op.matrix;
                 const double lo = detail::min_weighted_eigenvalue(op, 1.0);
                 return check(lo > 0.0, "min eigenvalue of S_i", lo, 0.0);
               }});

  s.push_back({"hypersingular-coercivity-k=i", [](bool fault) {
                 const Curve c = Curve::ellipse({0.0, 0.0}, 1.5, 1.0);
                 auto op = assemble_boundary_operator(OperatorKind::N, std::span<const Curve>(&c, 1),
                                                      Wavenumber::i(), 32);
                 if (fault)
                   op.matrix = -op.matrix;
                 const double hi = -detail::min_weighted_eigenvalue(op, -1.0);
                 return check(hi < 0.0, "max eigenvalue of N_i", hi, 0.0);
               }});

  s.push_back({"single-layer-imaginary-sign", [](bool fault) {
                 const Curve c = Curve::kite({0.0, 0.0});
                 const auto op = assemble_boundary_operator(
                     OperatorKind::S, std::span<const Curve>(&c, 1), Wavenumber::real(2.0), 32);
                 std::mt19937_64 rng(23);
                 std::normal_distribution<double> g;
                 double worst = -std::numeric_limits<double>::infinity();
                 for (int t = 0; t < 20; ++t) {
                   ComplexVector phi(op.matrix.rows());
                   for (Eigen::Index j = 0; j < phi.size(); ++j) {
                     const double re = g(rng);
                     const double im = g(rng);
                     phi(j) = {re, im};
                   }
                   const ComplexVector wphi = op.weights.cast<cd>().cwiseProduct(phi);
                   const cd form = wphi.dot(op.matrix * phi);  // <S phi, phi>_w = conj <phi, S phi>_w
                   const double norm2 = phi.cwiseAbs2().dot(op.weights);
                   const double im = (fault ? -1.0 : 1.0) * -form.imag() / norm2;
                   worst = std::max(worst, im);
                 }
                 return check(worst <= 1e-10, "max Im<phi, S phi>_w / |phi|^2", worst, 1e-10);
               }});

  s.push_back({"disc-oracle-dirichlet", [](bool fault) {
                 const oracle::DiscParams p{1.0, {0.0, 0.0}, 2.0, oracle::DiscCondition::Dirichlet};
                 const auto coef = oracle::disc_coefficients(p);
                 const ExteriorSolver solver({{Curve::circle({0.0, 0.0}, 1.0),
                                               BoundaryCondition::Dirichlet, 0.0}},
                                             2.0, 32);
                 const auto sol = solver.solve_plane_wave({1.0, 0.0});
                 double num = 0.0, den = 0.0;
                 for (int i = 0; i < 32; ++i) {
                   const double a = kTwoPi * i / 32;
                   const Vec2 x{std::cos(a), std::sin(a)};
                   const cd o = oracle::disc_far_field(p, coef, x, {1.0, 0.0});
                   const cd u = sol.far_field(x) * (fault ? 1.01 : 1.0);
                   num += std::norm(u - o);
                   den += std::norm(o);
                 }
                 const double err = std::sqrt(num / den);
                 return check(err <= 1e-8, "relative far-field error", err, 1e-8);
               }});

  s.push_back({"reciprocity-bie", [](bool fault) {
                 const DirectionGrid grid(16);
                 const auto f = far_field_from_parts(
                     {{Curve::kite({0.0, 0.0}), BoundaryCondition::Dirichlet, 0.0},
                      {Curve::ellipse({4.0, 0.5}, 1.0, 0.6, 0.4), BoundaryCondition::Neumann, 0.0}},
                     2.0, grid, 48, "test");
                 double worst = 0.0;
                 const double scale = linalg::max_abs(f.values);
                 for (int i = 0; i < 16; ++i)
                   for (int j = 0; j < 16; ++j) {
                     const cd a = f.values(i, j);
                     const cd b = f.values((j + 8) % 16, (i + 8) % 16) * (fault ? cd(0.0, 1.0) : 1.0);
                     worst = std::max(worst, std::abs(a - b) / scale);
                   }
                 return check(worst <= 1e-6, "max reciprocity defect / max |F|", worst, 1e-6);
               }});

  s.push_back({"impedance-imaginary-part-positive", [](bool fault) {
                 Scene scene;
                 scene.k = 2.0;
                 scene.lambda0 = 1.0;
                 // k r = 4 keeps every mode of the 16-direction grid above round-off.
                 scene.b3 = Curve::circle({0.3, 0.2}, 2.0);
                 const DirectionGrid grid(16);
                 auto f = artificial_operator(ArtificialKind::ImpB3, scene, grid, 32);
                 if (fault)
                   f.values = f.values.adjoint().eval();
                 const double lo =
                     linalg::hermitian_eig(linalg::anti_hermitian_part(f.values)).eigenvalues.minCoeff();
                 return check(lo > 0.0, "min eigenvalue of Im F_imp", lo, 0.0);
               }});

  s.push_back({"ffop-roundtrip", [](bool fault) {
                 FarFieldMatrix f;
                 f.n = 16;
                 f.k = 1.0 / 3.0;
                 f.provenance = {"a", "b"};
                 f.values = detail::random_matrix(16, 8) * 1e-7;
                 std::stringstream ss;
                 write_ffop(ss, f);
                 std::string text = ss.str();
                 if (fault)
                   text[text.size() - 3] = text[text.size() - 3] == '1' ? '2' : '1';
                 std::istringstream is(text);
                 const auto g = read_ffop(is);
                 const bool same = g.values == f.values && g.k == f.k && g.provenance == f.provenance;
                 return Outcome{same, same ? "bitwise identical" : "round trip altered data"};
               }});

  s.push_back({"sharp-operator-psd", [](bool fault) {
                 FarFieldMatrix f;
                 f.n = 16;
                 f.k = 1.0;
                 f.values = detail::random_matrix(16, 31);
                 auto sh = build_sharp(f, 0.7);
                 if (fault)
                   sh.matrix = -sh.matrix;
                 const auto es = linalg::hermitian_eig(sh.matrix);
                 const double lo = es.eigenvalues.minCoeff();
                 const double bound = -1e-10 * es.eigenvalues.maxCoeff();
                 return check(lo >= bound, "min eigenvalue of F#", lo, bound);
               }});

  s.push_back({"indicator-scaling", [](bool fault) {
                 FarFieldMatrix f;
                 f.n = 32;
                 f.k = 2.0;
                 f.values = detail::random_matrix(32, 41);
                 FarFieldMatrix g = f;
                 g.values *= 2.0;
                 const auto s1 = build_sharp(f), s2 = build_sharp(g);
                 const PicardIndicator w1(s1, 2.0), w2(s2, 2.0);
                 double worst = 0.0;
                 for (const Vec2 z : {Vec2{0.1, 0.2}, Vec2{-1.0, 0.5}, Vec2{2.0, -2.0}}) {
                   const double ratio = w2(z) / w1(z);
                   worst = std::max(worst, std::abs(ratio - (fault ? 3.0 : 2.0)));
                 }
                 return check(worst <= 1e-10, "max |W(2F)/W(F) - 2|", worst, 1e-10);
               }});

  s.push_back({"translation-phase", [](bool fault) {
                 const DirectionGrid grid(16);
                 const Vec2 d{0.7, -0.4};
                 const double k = 2.0;
                 const auto f0 = far_field_from_parts(
                     {{Curve::circle({0.0, 0.0}, 1.0), BoundaryCondition::Dirichlet, 0.0}}, k, grid,
                     32, "0");
                 const auto fd = far_field_from_parts(
                     {{Curve::circle(d, 1.0), BoundaryCondition::Dirichlet, 0.0}}, k, grid, 32, "d");
                 double worst = 0.0;
                 for (int i = 0; i < 16; ++i)
                   for (int j = 0; j < 16; ++j) {
                     const cd phase = std::polar(1.0, k * (grid[j] - grid[i]).dot(fault ? d * 2.0 : d));
                     worst = std::max(worst, std::abs(fd.values(i, j) - phase * f0.values(i, j)));
                   }
                 return check(worst <= 1e-8, "max translation defect", worst, 1e-8);
               }});

  return s;
}

inline std::vector<Result> run_all(const std::string &inject_fault = "")
{
  std::vector<Result> out;
  for (const auto &suite : suites()) {
    Result r;
    r.name = suite.name;
    try {
      const auto o = suite.run(suite.name == inject_fault);
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception &e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace scatterfm::selftest

#endif  // SCATTERFM_SELFTEST_HPP
