// SPDX-License-Identifier: Apache-2.0

#ifndef SCATTERFM_KERNEL_HPP
#define SCATTERFM_KERNEL_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "scatterfm/specfun.hpp"

namespace scatterfm
{

using cd = std::complex<double>;

inline constexpr double kEulerGamma = 0.57721566490153286061;

// A positive real wavenumber k, or the imaginary unit (the coercive "k = i" kernels).
struct Wavenumber
{
  double k = 1.0;
  bool imaginary_unit = false;

  static Wavenumber real(double k)
  {
    if (!(k > 0.0) || !std::isfinite(k))
      throw std::invalid_argument("wavenumber must be positive, got " + std::to_string(k));
    return {k, false};
  }
  static Wavenumber i() { return {1.0, true}; }

  // kappa^2: k^2, or -1 for kappa = i.
  double squared() const { return imaginary_unit ? -1.0 : k * k; }

  std::string label() const { return imaginary_unit ? "i" : std::to_string(k); }
};

//
// 2D fundamental solution Phi(x, y) = (i/4) H0(kappa |x - y|) as a function of r = |x - y|,
// together with the pieces the logarithmic splitting of the Nystrom rules needs:
//
//   Phi(r)      = -(1/2pi) J0(kappa r) ln r + smooth
//   Phi'(r)     =  (kappa/2pi) J1(kappa r) ln r - 1/(2pi r) + smooth
//
// For kappa = i: Phi(r) = K0(r) / 2pi, J0(i r) = I0(r), kappa J1(kappa r) = -I1(r).
//
class Kernel
{
public:
  explicit Kernel(Wavenumber w) : w_(w) {}

  Wavenumber wavenumber() const { return w_; }

  cd phi(double r) const
  {
    if (w_.imaginary_unit)
      return {specfun::fast::k0(r) / (2.0 * std::numbers::pi), 0.0};
    return cd(0.0, 0.25) * specfun::fast::h0(w_.k * r);
  }

  // d Phi / dr
  cd dphi(double r) const
  {
    if (w_.imaginary_unit)
      return {-specfun::fast::k1(r) / (2.0 * std::numbers::pi), 0.0};
    return cd(0.0, -0.25 * w_.k) * specfun::fast::h1(w_.k * r);
  }

  // J0(kappa r)
  double j0(double r) const
  {
    return w_.imaginary_unit ? specfun::fast::i0(r) : specfun::fast::j0(w_.k * r);
  }

  // kappa J1(kappa r)
  double kappa_j1(double r) const
  {
    return w_.imaginary_unit ? -specfun::fast::i1(r) : w_.k * specfun::fast::j1(w_.k * r);
  }

  // Limit of 2 Phi(r) + (1/pi) J0(kappa r) ln(r / speed) ... evaluated on the diagonal of
  // the split single-layer kernel, per unit speed:
  //   real k : i/2 - C/pi - (1/pi) ln(k |x'| / 2)
  //   k = i  :     - C/pi - (1/pi) ln(|x'| / 2)
  cd single_layer_diagonal(double speed) const
  {
    const double pi = std::numbers::pi;
    if (w_.imaginary_unit)
      return {-kEulerGamma / pi - std::log(0.5 * speed) / pi, 0.0};
    return {-kEulerGamma / pi - std::log(0.5 * w_.k * speed) / pi, 0.5};
  }

  // d^2 Phi / d nu_x d nu_y for x - y = R, r = |R|.
  cd double_normal(double rx, double ry, double nxx, double nxy, double nyx, double nyy) const
  {
    const double r2 = rx * rx + ry * ry;
    const double r = std::sqrt(r2);
    const cd p = phi(r);
    const cd dp = dphi(r);
    const double nxr = nxx * rx + nxy * ry;
    const double nyr = nyx * rx + nyy * ry;
    const double nn = nxx * nyx + nxy * nyy;
    return (2.0 * dp / r + w_.squared() * p) * (nxr * nyr / r2) - (dp / r) * nn;
  }

private:
  Wavenumber w_;
};

}  // namespace scatterfm

#endif  // SCATTERFM_KERNEL_HPP
