// SPDX-License-Identifier: Apache-2.0

#ifndef SCATTERFM_DISC_ORACLE_HPP
#define SCATTERFM_DISC_ORACLE_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "scatterfm/geometry.hpp"
#include "scatterfm/specfun.hpp"

//
// Separation-of-variables far fields for a disc of radius a centred at c.
//
// For a disc at the origin hit by e^{ik theta.x}, the scattered field is
//   u^s = sum_m i^m c_m H_m(k r) e^{i m (phi - phi_theta)},
// so in the gamma2 convention (u^s ~ gamma2 e^{ikr}/sqrt(r) u_inf):
//   u_inf(xhat, theta) = -4i sum_m c_m e^{i m (phi_x - phi_theta)}.
// A shift by c multiplies the pattern by e^{ik (theta - xhat).c}.
//
namespace scatterfm::oracle
{

enum class DiscCondition
{
  Dirichlet,
  Neumann,
  Impedance,
  Transmission
};

inline std::string to_string(DiscCondition c)
{
  switch (c) {
    case DiscCondition::Dirichlet: return "dirichlet";
    case DiscCondition::Neumann: return "neumann";
    case DiscCondition::Impedance: return "impedance";
    case DiscCondition::Transmission: return "transmission";
  }
  return "?";
}

struct DiscParams
{
  double radius = 1.0;
  Vec2 center{0.0, 0.0};
  double k = 1.0;
  DiscCondition condition = DiscCondition::Dirichlet;
  double lambda0 = 1.0;  // impedance: d/dnu u + i lambda0 u = 0
  double q0 = 0.0;       // transmission: interior wavenumber k sqrt(1 + q0)
};

// c_m for one order m >= 0 (c_{-m} = c_m). Returns 0 when H_m(ka) overflows.
inline cd disc_coefficient(const DiscParams &p, int m)
{
  using namespace specfun;
  const double x = p.k * p.radius;
  try {
    switch (p.condition) {
      case DiscCondition::Dirichlet: return -bessel_j(m, x) / hankel1(m, x);
      case DiscCondition::Neumann: return -bessel_j_prime(m, x) / hankel1_prime(m, x);
      case DiscCondition::Impedance: {
        const cd il(0.0, p.lambda0);
        return -(p.k * bessel_j_prime(m, x) + il * bessel_j(m, x)) /
               (p.k * hankel1_prime(m, x) + il * hankel1(m, x));
      }
      case DiscCondition::Transmission: {
        if (!(1.0 + p.q0 > 0.0))
          throw std::domain_error("transmission oracle needs 1 + q0 > 0");
        const double k1 = p.k * std::sqrt(1.0 + p.q0);
        const double x1 = k1 * p.radius;
        const double ji = bessel_j(m, x1), dji = bessel_j_prime(m, x1);
        const cd num = k1 * dji * bessel_j(m, x) - p.k * bessel_j_prime(m, x) * ji;
        const cd den = p.k * hankel1_prime(m, x) * ji - k1 * dji * hankel1(m, x);
        return num / den;
      }
    }
  } catch (const std::overflow_error &) {
    return {0.0, 0.0};
  }
  return {0.0, 0.0};
}

// c_0 .. c_M with M chosen so that the tail is negligible (|c_m| < 1e-18 max) or order 60.
inline std::vector<cd> disc_coefficients(const DiscParams &p)
{
  std::vector<cd> c;
  double peak = 0.0;
  const int floor_order = static_cast<int>(std::ceil(p.k * p.radius * std::sqrt(
                                               std::max(1.0, 1.0 + p.q0)))) + 5;
  for (int m = 0; m <= specfun::kMaxOrder - 1; ++m) {
    const cd v = disc_coefficient(p, m);
    c.push_back(v);
    peak = std::max(peak, std::abs(v));
    if (m > floor_order && std::abs(v) < 1e-18 * std::max(peak, 1e-300))
      break;
  }
  return c;
}

inline cd disc_far_field(const DiscParams &p, const std::vector<cd> &coef, Vec2 xhat, Vec2 theta)
{
  const double dphi = std::atan2(xhat.y, xhat.x) - std::atan2(theta.y, theta.x);
  cd acc = coef[0];
  for (std::size_t m = 1; m < coef.size(); ++m)
    acc += 2.0 * coef[m] * std::cos(double(m) * dphi);
  const cd shift = std::polar(1.0, p.k * (theta - xhat).dot(p.center));
  return cd(0.0, -4.0) * acc * shift;
}

// Eigenvalue of the continuous far-field operator g -> int u_inf(., theta) g(theta) on e^{im phi}
// (disc at the origin): 2pi (-4i) c_m.
inline cd disc_operator_eigenvalue(const std::vector<cd> &coef, int m)
{
  const std::size_t am = static_cast<std::size_t>(std::abs(m));
  return am < coef.size() ? 2.0 * std::numbers::pi * cd(0.0, -4.0) * coef[am] : cd(0.0, 0.0);
}

}  // namespace scatterfm::oracle

#endif  // SCATTERFM_DISC_ORACLE_HPP
