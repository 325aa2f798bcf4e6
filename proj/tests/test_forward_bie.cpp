// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "scatterfm/forward_bie.hpp"

#include "oracles.hpp"

using namespace scatterfm;

namespace
{

constexpr double kPi = std::numbers::pi;
const cd I{0.0, 1.0};

using reference::H;
using reference::Hp;
using reference::J;
using reference::Jp;

struct DiscSeries
{
  double k, a;
  BoundaryCondition bc;
  double lambda = 0.0;

  reference::Disc kind() const
  {
    switch (bc) {
      case BoundaryCondition::Dirichlet: return reference::Disc::Dirichlet;
      case BoundaryCondition::Neumann: return reference::Disc::Neumann;
      case BoundaryCondition::Impedance: return reference::Disc::Impedance;
    }
    return reference::Disc::Dirichlet;
  }
  cd c(int m) const { return reference::disc_c(kind(), m, k, a, lambda); }
  cd far(double phi, double theta) const
  {
    return reference::disc_far_field(kind(), k, a, lambda, phi, theta);
  }
};

Vec2 dir(double a) { return {std::cos(a), std::sin(a)}; }

double relative_far_field_error(const ExteriorSolver &solver, const DiscSeries &oracle)
{
  double num = 0.0, den = 0.0;
  for (double theta : {0.0, 1.1, 2.9}) {
    const auto sol = solver.solve_plane_wave(dir(theta));
    for (int i = 0; i < 64; ++i) {
      const double phi = kTwoPi * i / 64;
      const cd ref = oracle.far(phi, theta);
      num += std::norm(sol.far_field(dir(phi)) - ref);
      den += std::norm(ref);
    }
  }
  return std::sqrt(num / den);
}

ComplexVector fourier_mode(const std::vector<CurvePoint> &nodes, int m)
{
  ComplexVector v(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t j = 0; j < nodes.size(); ++j)
    v(static_cast<Eigen::Index>(j)) = std::polar(1.0, m * nodes[j].s);
  return v;
}

std::vector<Curve> unit_circle() { return {Curve::circle({0, 0}, 1.0)}; }

}  // namespace

TEST(ForwardBie, SingleLayerCoerciveAtImaginaryUnit)
{
  for (const auto &curves : {unit_circle(), std::vector<Curve>{Curve::kite({0, 0})}}) {
    const auto s = assemble_boundary_operator(OperatorKind::S, curves, Wavenumber::i(), 32);
    const ComplexMatrix sym = s.symmetrized();
    EXPECT_LT(linalg::max_abs(sym.imag()), 1e-12);
    EXPECT_LT(linalg::max_abs(sym - sym.transpose()), 1e-10 * linalg::max_abs(sym));
    EXPECT_GT(linalg::hermitian_eig(linalg::hermitian_part(sym)).eigenvalues.minCoeff(), 0.0);
  }
}

TEST(ForwardBie, HypersingularNegativeAtImaginaryUnit)
{
  const auto n = assemble_boundary_operator(OperatorKind::N, unit_circle(), Wavenumber::i(), 32);
  const ComplexMatrix sym = n.symmetrized();
  EXPECT_LT(linalg::max_abs(sym - sym.adjoint()), 1e-9 * linalg::max_abs(sym));
  EXPECT_LT(linalg::hermitian_eig(linalg::hermitian_part(sym)).eigenvalues.maxCoeff(), 0.0);
}

TEST(ForwardBie, CircleSingleLayerEigenvalues)
{
  // S e^{ims} = (i pi / 2) J_m(k) H_m(k) e^{ims} on the unit circle.
  const double k = 2.0;
  const auto s = assemble_boundary_operator(OperatorKind::S, unit_circle(), Wavenumber::real(k), 64);
  for (int m = -10; m <= 10; ++m) {
    const ComplexVector e = fourier_mode(s.nodes[0], m);
    const cd expect = 0.5 * I * kPi * J(std::abs(m), k) * H(std::abs(m), k);
    EXPECT_LT((s.matrix * e - expect * e).cwiseAbs().maxCoeff(), 1e-8) << "m=" << m;
  }
}

TEST(ForwardBie, CircleDoubleLayerAndHypersingularEigenvalues)
{
  // K e^{ims} = ((i pi k / 2) J'_m H_m - 1/2) e^{ims},  N e^{ims} = (i pi k^2 / 2) J'_m H'_m e^{ims}.
  const double k = 2.0;
  const auto kk = assemble_boundary_operator(OperatorKind::K, unit_circle(), Wavenumber::real(k), 64);
  const auto nn = assemble_boundary_operator(OperatorKind::N, unit_circle(), Wavenumber::real(k), 64);
  const auto kp =
      assemble_boundary_operator(OperatorKind::KPrime, unit_circle(), Wavenumber::real(k), 64);
  for (int m = 0; m <= 8; ++m) {
    const ComplexVector e = fourier_mode(kk.nodes[0], m);
    const cd ek = 0.5 * I * kPi * k * Jp(m, k) * H(m, k) - 0.5;
    const cd en = 0.5 * I * kPi * k * k * Jp(m, k) * Hp(m, k);
    EXPECT_LT((kk.matrix * e - ek * e).cwiseAbs().maxCoeff(), 1e-8) << "m=" << m;
    EXPECT_LT((nn.matrix * e - en * e).cwiseAbs().maxCoeff(), 1e-7) << "m=" << m;
    // On the circle K' has the same spectrum as K.
    EXPECT_LT((kp.matrix * e - ek * e).cwiseAbs().maxCoeff(), 1e-8) << "m=" << m;
  }
}

TEST(ForwardBie, AssemblyPreconditions)
{
  const std::vector<Curve> overlapping{Curve::circle({0, 0}, 1.0), Curve::circle({1.5, 0}, 1.0)};
  EXPECT_THROW(assemble_boundary_operator(OperatorKind::S, overlapping, Wavenumber::real(1.0), 32),
               ValidationError);
  EXPECT_THROW(assemble_boundary_operator(OperatorKind::S, unit_circle(), Wavenumber::real(1.0), 15),
               std::invalid_argument);
  EXPECT_THROW(assemble_boundary_operator(OperatorKind::S, unit_circle(), Wavenumber::real(1.0), 8),
               std::invalid_argument);
  EXPECT_THROW(Wavenumber::real(-2.0), std::invalid_argument);
}

TEST(ForwardBie, ArcWeightsIntegrateLength)
{
  const auto s = assemble_boundary_operator(OperatorKind::S,
                                            std::vector<Curve>{Curve::circle({0, 0}, 2.0),
                                                               Curve::circle({6, 0}, 0.5)},
                                            Wavenumber::real(1.0), 16);
  EXPECT_NEAR(s.weights.sum(), kTwoPi * 2.5, 1e-12);
  EXPECT_EQ(s.matrix.rows(), 64);
}

TEST(ForwardBie, SoundSoftDiscMatchesSeries)
{
  const DiscSeries oracle{2.0, 1.0, BoundaryCondition::Dirichlet};
  EXPECT_NEAR(oracle.c(0).real(), -0.1614, 5e-4);
  EXPECT_NEAR(oracle.c(0).imag(), 0.3678, 5e-4);
  const ExteriorSolver solver({{Curve::circle({0, 0}, 1.0), BoundaryCondition::Dirichlet, 0.0}},
                              2.0, 64);
  EXPECT_LT(relative_far_field_error(solver, oracle), 1e-6);
}

TEST(ForwardBie, SoundHardDiscMatchesSeries)
{
  const ExteriorSolver solver({{Curve::circle({0, 0}, 1.0), BoundaryCondition::Neumann, 0.0}},
                              2.0, 64);
  EXPECT_LT(relative_far_field_error(solver, {2.0, 1.0, BoundaryCondition::Neumann}), 1e-5);
}

TEST(ForwardBie, ImpedanceDiscMatchesSeries)
{
  for (double lambda : {1.0, 3.0}) {
    const ExteriorSolver solver(
        {{Curve::circle({0, 0}, 1.0), BoundaryCondition::Impedance, lambda}}, 2.0, 64);
    EXPECT_LT(relative_far_field_error(solver, {2.0, 1.0, BoundaryCondition::Impedance, lambda}),
              1e-5);
  }
}

TEST(ForwardBie, ScaledDiscAndOtherWavenumbers)
{
  const ExteriorSolver solver({{Curve::circle({0, 0}, 1.7), BoundaryCondition::Dirichlet, 0.0}},
                              5.0, 64);
  EXPECT_LT(relative_far_field_error(solver, {5.0, 1.7, BoundaryCondition::Dirichlet}), 1e-8);
}

TEST(ForwardBie, DirichletEigenvalueOfDiscIsHarmless)
{
  // The combined-field representation stays uniquely solvable at k = j_{0,1}.
  const double k = 2.404825557695773;
  const ExteriorSolver solver({{Curve::circle({0, 0}, 1.0), BoundaryCondition::Dirichlet, 0.0}},
                              k, 48);
  EXPECT_LT(relative_far_field_error(solver, {k, 1.0, BoundaryCondition::Dirichlet}), 1e-8);
}

TEST(ForwardBie, ZeroDensityHasZeroFarField)
{
  const auto nodes = nystrom::make_layout(unit_circle(), 16).nodes;
  const ForwardSolution sol(2.0, 2.0, 16, nodes, ComplexVector::Zero(32));
  EXPECT_EQ(sol.far_field(dir(0.3)), cd(0.0, 0.0));
  EXPECT_EQ(sol.near_field({3.0, 1.0}), cd(0.0, 0.0));
}

TEST(ForwardBie, ConstantDensityFarFieldClosedForm)
{
  // (D - i eta S) 1 on the unit circle: u_inf = -2 pi k J1(k) - 2 pi i eta J0(k).
  const double k = 2.0, eta = 2.0;
  const auto nodes = nystrom::make_layout(unit_circle(), 32).nodes;
  const ForwardSolution sol(k, eta, 32, nodes, ComplexVector::Ones(64));
  const cd expect = -kTwoPi * k * J(1, k) - kTwoPi * I * eta * J(0, k);
  for (double a : {0.0, 0.7, 4.0})
    EXPECT_LT(std::abs(sol.far_field(dir(a)) - expect), 1e-12);
}

TEST(ForwardBie, FarFieldNormalizationFromNearField)
{
  // u^s(r xhat) sqrt(r) e^{-ikr} / gamma2 -> u_inf as r grows.
  const double k = 3.0;
  const ExteriorSolver solver({{Curve::kite({0.2, -0.1}), BoundaryCondition::Dirichlet, 0.0}}, k, 64);
  const auto sol = solver.solve_plane_wave(dir(0.4));
  const cd gamma2 = std::polar(1.0, kPi / 4) / std::sqrt(8.0 * kPi * k);
  const double r = 4000.0;
  for (double a : {0.0, 2.0, 4.5}) {
    const cd approx = sol.near_field(dir(a) * r) * std::sqrt(r) * std::polar(1.0, -k * r) / gamma2;
    const cd ff = sol.far_field(dir(a));
    EXPECT_LT(std::abs(approx - ff), 5e-3 * std::abs(ff) + 1e-3);
  }
}

TEST(ForwardBie, MirrorSymmetryOnAxis)
{
  const ExteriorSolver solver({{Curve::ellipse({0, 0}, 1.2, 0.6), BoundaryCondition::Neumann, 0.0}},
                              2.5, 48);
  const auto sol = solver.solve_plane_wave({1.0, 0.0});
  for (double a : {0.3, 1.4, 2.2})
    EXPECT_LT(std::abs(sol.far_field(dir(a)) - sol.far_field(dir(-a))), 1e-10);
}

TEST(ForwardBie, TranslationPhaseIdentity)
{
  const double k = 2.0;
  const Vec2 d{1.3, -0.7};
  const Curve c0 = Curve::kite({0, 0}, 0.8, 0.5);
  const ExteriorSolver s0({{c0, BoundaryCondition::Dirichlet, 0.0}}, k, 64);
  const ExteriorSolver s1({{c0.translated(d), BoundaryCondition::Dirichlet, 0.0}}, k, 64);
  for (double t : {0.0, 2.0}) {
    const auto a = s0.solve_plane_wave(dir(t));
    const auto b = s1.solve_plane_wave(dir(t));
    for (double x : {0.5, 3.0, 5.5}) {
      const cd phase = std::polar(1.0, k * (dir(t) - dir(x)).dot(d));
      EXPECT_LT(std::abs(b.far_field(dir(x)) - phase * a.far_field(dir(x))), 1e-8);
    }
  }
}

TEST(ForwardBie, ReciprocityForMixedPair)
{
  const double k = 3.0;
  const ExteriorSolver solver({{Curve::kite({-3, 0}), BoundaryCondition::Dirichlet, 0.0},
                               {Curve::circle({3, 0}, 1.0), BoundaryCondition::Neumann, 0.0},
                               {Curve::circle({0, 3}, 0.5), BoundaryCondition::Impedance, 2.0}},
                              k, 64);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  double worst = 0.0, scale = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    const double x = u(rng), t = u(rng);
    const cd a = solver.solve_plane_wave(dir(t)).far_field(dir(x));
    const cd b = solver.solve_plane_wave(dir(x + kPi)).far_field(dir(t + kPi));
    worst = std::max(worst, std::abs(a - b));
    scale = std::max(scale, std::abs(a));
  }
  EXPECT_LT(worst, 1e-6 * scale);
}

TEST(ForwardBie, RefinedResidualIsSmall)
{
  const ExteriorSolver solver({{Curve::kite({-3, 0}), BoundaryCondition::Dirichlet, 0.0},
                               {Curve::circle({3, 0}, 1.0), BoundaryCondition::Neumann, 0.0}},
                              3.0, 64);
  const auto sol = solver.solve_plane_wave(dir(0.8));
  EXPECT_LT(solver.refined_residual(sol, dir(0.8)), 1e-6);
}

TEST(ForwardBie, GridConvergenceIsFast)
{
  const double k = 2.0;
  const Curve kite = Curve::kite({0, 0});
  auto far = [&](int n) {
    const ExteriorSolver s({{kite, BoundaryCondition::Dirichlet, 0.0}}, k, n);
    const auto sol = s.solve_plane_wave(dir(0.0));
    ComplexVector v(16);
    for (int i = 0; i < 16; ++i)
      v(i) = sol.far_field(dir(kTwoPi * i / 16));
    return v;
  };
  const ComplexVector ref = far(128);
  const double e16 = (far(16) - ref).norm();
  const double e32 = (far(32) - ref).norm();
  EXPECT_GT(e16 / e32, 10.0);
  EXPECT_LT(e32, 1e-6 * ref.norm());
}

TEST(ForwardBie, BatchSolveMatchesSingleSolves)
{
  const ExteriorSolver solver({{Curve::circle({0, 0}, 1.0), BoundaryCondition::Neumann, 0.0}},
                              1.5, 16);
  const std::vector<Vec2> thetas{dir(0.0), dir(1.0), dir(2.0)};
  const ComplexMatrix dens = solver.solve_plane_waves(thetas);
  const ComplexMatrix ff = solver.far_field_matrix(thetas) * dens;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i)
      EXPECT_LT(std::abs(ff(i, j) - solver.solve_plane_wave(thetas[j]).far_field(thetas[i])),
                1e-12);
}

TEST(ForwardBie, SolverRejectsBadInput)
{
  EXPECT_THROW(ExteriorSolver({}, 1.0, 16), std::invalid_argument);
  EXPECT_THROW(ExteriorSolver({{Curve::circle({0, 0}, 1.0), BoundaryCondition::Dirichlet, 0.0}},
                              0.0, 16),
               std::invalid_argument);
  EXPECT_THROW(ExteriorSolver({{Curve::circle({0, 0}, 1.0), BoundaryCondition::Impedance, 0.0}},
                              1.0, 16),
               ValidationError);
}
