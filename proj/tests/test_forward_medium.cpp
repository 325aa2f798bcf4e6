// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "scatterfm/forward_medium.hpp"

#include "oracles.hpp"

using namespace scatterfm;

namespace
{

const cd I{0.0, 1.0};

Vec2 dir(double a) { return {std::cos(a), std::sin(a)}; }

double transmission_error(int m)
{
  const double k = 1.0, q0 = 0.5;
  const Vec2 c{0.3, -0.2};
  const MediumObstacleSolver solver(Curve::circle(c, 1.0), {ContrastForm::Constant, q0},
                                    std::nullopt, k, m, 32);
  double num = 0.0, den = 0.0;
  for (double theta : {0.0, 2.0}) {
    const auto sol = solver.solve(dir(theta));
    for (int i = 0; i < 32; ++i) {
      const double phi = kTwoPi * i / 32;
      const cd ref = reference::disc_far_field(reference::Disc::Transmission, k, 1.0, q0, phi, theta, c.x, c.y);
      num += std::norm(sol.far_field(dir(phi)) - ref);
      den += std::norm(ref);
    }
  }
  return std::sqrt(num / den);
}

cd brute_square(double k, Vec2 p, Vec2 c, double h, int per_axis)
{
  const Kernel kernel(Wavenumber::real(k));
  cd acc = 0.0;
  const double hs = h / per_axis;
  for (int a = 0; a < per_axis; ++a)
    for (int b = 0; b < per_axis; ++b) {
      const Vec2 y{c.x - 0.5 * h + (a + 0.5) * hs, c.y - 0.5 * h + (b + 0.5) * hs};
      acc += kernel.phi((p - y).norm()) * hs * hs;
    }
  return acc;
}

}  // namespace

TEST(ForwardMedium, RadialPrimitiveDifferentiates)
{
  // d/dR of the primitive equals Phi(R) R.
  const double k = 2.0;
  const Kernel kernel(Wavenumber::real(k));
  for (double r : {0.05, 0.4, 1.3}) {
    const double h = 1e-6;
    const cd d = (volume::radial_primitive(k, r + h) - volume::radial_primitive(k, r - h)) / (2 * h);
    EXPECT_LT(std::abs(d - kernel.phi(r) * r), 1e-7);
  }
  EXPECT_EQ(volume::radial_primitive(k, 0.0), cd(0.0, 0.0));
  // R -> 0 limit is continuous.
  EXPECT_LT(std::abs(volume::radial_primitive(k, 1e-9)), 1e-12);
}

TEST(ForwardMedium, SquareIntegralAgainstBruteForce)
{
  const double k = 1.7, h = 0.2;
  const Vec2 c{0.1, -0.3};
  // far point: midpoint sum converges quickly
  const Vec2 far{1.0, 0.5};
  EXPECT_LT(std::abs(volume::square_integral(k, far, c, h) - brute_square(k, far, c, h, 200)),
            1e-8);
  // point on the square's edge and off-center inside: the integrable log singularity needs a
  // finer brute-force rule
  for (const Vec2 p : {Vec2{0.13, -0.28}, Vec2{0.2, -0.3}, c}) {
    const cd exact = volume::square_integral(k, p, c, h);
    const cd brute = brute_square(k, p, c, h, 1000);
    EXPECT_LT(std::abs(exact - brute), 1e-5 * std::abs(exact)) << p.x << "," << p.y;
  }
}

TEST(ForwardMedium, TriangleOrientationAndDegeneracy)
{
  const double k = 1.0;
  const Vec2 p{0, 0}, a{1, 0}, b{0, 1};
  EXPECT_LT(std::abs(volume::triangle_integral(k, p, a, b) + volume::triangle_integral(k, p, b, a)),
            1e-15);
  EXPECT_EQ(volume::triangle_integral(k, p, a, a), cd(0.0, 0.0));
  EXPECT_EQ(volume::triangle_integral(k, p, a, Vec2{2, 0}), cd(0.0, 0.0));
}

TEST(ForwardMedium, GridCoversSupportWithMargin)
{
  const Curve d = Curve::circle({-3.0, 1.0}, 1.5);
  const VolumeGrid g(d, {ContrastForm::Constant, {0.5, 0.0}}, 40);
  double area = 0.0;
  int min_ix = g.m(), max_ix = -1;
  for (const auto &c : g.cells()) {
    area += c.area;
    min_ix = std::min(min_ix, c.ix);
    max_ix = std::max(max_ix, c.ix);
    EXPECT_EQ(c.q, cd(0.5, 0.0));
    EXPECT_GT(c.area, 0.0);
    EXPECT_LE(c.area, g.h() * g.h() * (1 + 1e-12));
  }
  EXPECT_NEAR(area, d.area(), 2e-3 * d.area());
  EXPECT_GE(min_ix, 2);
  EXPECT_LE(max_ix, g.m() - 3);
  EXPECT_TRUE(g.warnings().empty());
  EXPECT_THROW(VolumeGrid(d, {ContrastForm::Constant, {0.5, 0.0}}, 4), std::invalid_argument);
}

TEST(ForwardMedium, CoarseGridWarnsForVaryingContrast)
{
  const Curve d = Curve::circle({0, 0}, 1.0);
  const VolumeGrid coarse(d, {ContrastForm::RadialBump, {1.0, 0.0}}, 8);
  ASSERT_FALSE(coarse.warnings().empty());
  EXPECT_NE(coarse.warnings().front().find("grid-too-coarse"), std::string::npos);
  const VolumeGrid fine(d, {ContrastForm::RadialBump, {1.0, 0.0}}, 48);
  EXPECT_TRUE(fine.warnings().empty());
}

TEST(ForwardMedium, TransmissionDiscMatchesSeries)
{
  EXPECT_LT(transmission_error(64), 1e-3);
}

TEST(ForwardMedium, GridConvergenceIsMonotone)
{
  const double e32 = transmission_error(32);
  const double e64 = transmission_error(64);
  const double e96 = transmission_error(96);
  EXPECT_GT(e32, e64);
  EXPECT_GT(e64, e96);
}

TEST(ForwardMedium, ZeroContrastReducesToObstacle)
{
  const double k = 2.0;
  const Curve omega2 = Curve::circle({3.0, 0.0}, 0.7);
  const MediumObstacleSolver medium(Curve::circle({-3, 0}, 1.0), {ContrastForm::Constant, 0.0},
                                    omega2, k, 24, 32);
  const ExteriorSolver bie({{omega2, BoundaryCondition::Dirichlet, 0.0}}, k, 32);
  for (double t : {0.0, 1.9}) {
    const auto a = medium.solve(dir(t));
    const auto b = bie.solve_plane_wave(dir(t));
    for (double x : {0.2, 2.5, 4.0})
      EXPECT_LT(std::abs(a.far_field(dir(x)) - b.far_field(dir(x))), 1e-8);
  }
}

TEST(ForwardMedium, CoupledReciprocity)
{
  const double k = 2.0;
  const MediumObstacleSolver solver(Curve::circle({-3, 0}, 1.5), {ContrastForm::Constant, 0.5},
                                    Curve::circle({3, 0}, 0.5), k, 48, 48);
  std::vector<Vec2> dirs;
  for (int j = 0; j < 16; ++j)
    dirs.push_back(dir(kTwoPi * j / 16));
  const ComplexMatrix f = solver.far_field_matrix(dirs) * solver.solve_plane_waves(dirs);
  // u_inf(xhat_i, theta_j) = u_inf(-theta_j, -xhat_i); -d_j = d_{j+8}.
  double worst = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      worst = std::max(worst, std::abs(f(i, j) - f((j + 8) % 16, (i + 8) % 16)));
  EXPECT_LT(worst, 1e-4 * linalg::max_abs(f));
}

TEST(ForwardMedium, AbsorbingContrastGivesPositiveImaginaryPart)
{
  const double k = 2.0;
  const MediumObstacleSolver solver(Curve::circle({-3, 0}, 1.0), {ContrastForm::Constant, {0.3, 0.4}},
                                    Curve::circle({3, 0}, 0.5), k, 32, 32);
  std::vector<Vec2> dirs;
  for (int j = 0; j < 24; ++j)
    dirs.push_back(dir(kTwoPi * j / 24));
  const ComplexMatrix f = solver.far_field_matrix(dirs) * solver.solve_plane_waves(dirs);
  const auto es = linalg::hermitian_eig(linalg::anti_hermitian_part(f));
  EXPECT_GE(es.eigenvalues.minCoeff(), -1e-8 * es.eigenvalues.maxCoeff());
}

TEST(ForwardMedium, ExteriorFieldSolvesHelmholtz)
{
  const double k = 2.0;
  const MediumObstacleSolver solver(Curve::circle({-3, 0}, 1.0), {ContrastForm::Constant, 0.5},
                                    Curve::circle({3, 0}, 0.5), k, 32, 32);
  const auto sol = solver.solve(dir(0.5));
  std::vector<Vec2> pts;
  for (int i = 0; i < 100; ++i) {
    const double a = kTwoPi * i / 100;
    pts.push_back(dir(a) * (6.0 + 2.0 * std::sin(3.0 * a)));
  }
  EXPECT_LT(helmholtz_residual(sol, pts), 1e-4);
}

TEST(ForwardMedium, SceneEntryPointChecksCase)
{
  Scene s;
  s.scene_case = SceneCase::MixedObstacles;
  EXPECT_THROW(MediumObstacleSolver::from_scene(s, 16, 16), ValidationError);
  EXPECT_THROW(MediumObstacleSolver(Curve::circle({0, 0}, 1.0), {ContrastForm::Constant, 0.5},
                                    Curve::circle({1.5, 0}, 1.0), 1.0, 16, 16),
               ValidationError);
}

TEST(ForwardMedium, UnknownCountsAndBatchConsistency)
{
  const MediumObstacleSolver solver(Curve::circle({0, 0}, 1.0), {ContrastForm::RadialBump, 0.4},
                                    Curve::circle({4, 0}, 0.5), 1.5, 16, 16);
  EXPECT_EQ(solver.unknowns(), solver.volume_unknowns() + 32);
  const std::vector<Vec2> dirs{dir(0.0), dir(2.0)};
  const ComplexMatrix f = solver.far_field_matrix(dirs) * solver.solve_plane_waves(dirs);
  EXPECT_LT(std::abs(f(1, 0) - solver.solve(dirs[0]).far_field(dirs[1])), 1e-12);
}
