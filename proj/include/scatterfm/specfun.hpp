// SPDX-License-Identifier: Apache-2.0

#ifndef SCATTERFM_SPECFUN_HPP
#define SCATTERFM_SPECFUN_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/bessel.hpp>

namespace scatterfm::specfun
{

using cd = std::complex<double>;

inline constexpr int kMaxOrder = 60;
inline constexpr double kMaxArgument = 200.0;
inline constexpr double kOverflow = 1e300;

namespace detail
{

inline void check_order(int n, const char *who)
{
  if (n < 0 || n > kMaxOrder)
    throw std::domain_error(std::string(who) + ": order " + std::to_string(n) +
                            " outside [0, " + std::to_string(kMaxOrder) + "]");
}

inline void check_argument(double x, bool allow_zero, const char *who)
{
  if (!std::isfinite(x) || x < 0.0 || (!allow_zero && x == 0.0))
    throw std::domain_error(std::string(who) + ": argument " + std::to_string(x) +
                            (allow_zero ? " must be >= 0" : " must be > 0"));
  if (x > kMaxArgument)
    throw std::domain_error(std::string(who) + ": argument " + std::to_string(x) + " exceeds " +
                            std::to_string(kMaxArgument));
}

inline double checked(double v, const char *who)
{
  if (!std::isfinite(v) || std::abs(v) > kOverflow)
    throw std::overflow_error(std::string(who) + ": result magnitude exceeds 1e300");
  return v;
}

template <typename F>
double guarded(F &&f, const char *who)
{
  try {
    return checked(f(), who);
  } catch (const std::overflow_error &) {
    throw std::overflow_error(std::string(who) + ": result magnitude exceeds 1e300");
  }
}

}  // namespace detail

inline double bessel_j(int n, double x)
{
  detail::check_order(n, "bessel_j");
  detail::check_argument(x, true, "bessel_j");
  return detail::guarded([&] { return boost::math::cyl_bessel_j(n, x); }, "bessel_j");
}

inline double bessel_y(int n, double x)
{
  detail::check_order(n, "bessel_y");
  detail::check_argument(x, false, "bessel_y");
  return detail::guarded([&] { return boost::math::cyl_neumann(n, x); }, "bessel_y");
}

inline cd hankel1(int n, double x)
{
  return {bessel_j(n, x), bessel_y(n, x)};
}

inline double bessel_i(int n, double x)
{
  detail::check_order(n, "bessel_i");
  detail::check_argument(x, true, "bessel_i");
  return detail::guarded([&] { return boost::math::cyl_bessel_i(n, x); }, "bessel_i");
}

inline double bessel_k(int n, double x)
{
  detail::check_order(n, "bessel_k");
  detail::check_argument(x, false, "bessel_k");
  return detail::guarded([&] { return boost::math::cyl_bessel_k(n, x); }, "bessel_k");
}

// Derivatives via C'_n = (C_{n-1} - C_{n+1}) / 2, with C_{-1} = -C_1.
inline double bessel_j_prime(int n, double x)
{
  if (n == 0)
    return -bessel_j(1, x);
  return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x));
}

inline double bessel_y_prime(int n, double x)
{
  if (n == 0)
    return -bessel_y(1, x);
  return 0.5 * (bessel_y(n - 1, x) - bessel_y(n + 1, x));
}

inline cd hankel1_prime(int n, double x)
{
  return {bessel_j_prime(n, x), bessel_y_prime(n, x)};
}

// First positive zero of J_0 divided by the disc radius: sqrt of the smallest Dirichlet
// eigenvalue of -Laplace on a disc.
inline double first_dirichlet_eigen_wavenumber(double radius)
{
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::domain_error("first_dirichlet_eigen_wavenumber: radius must be > 0");
  return boost::math::cyl_bessel_j_zero(0.0, 1) / radius;
}

//
// Unchecked order-0/1 kernels for the inner loops of the integral-equation assemblers.
// Arguments are assumed positive and in range.
//
namespace fast
{

inline double j0(double x) { return boost::math::cyl_bessel_j(0, x); }
inline double j1(double x) { return boost::math::cyl_bessel_j(1, x); }
inline double y0(double x) { return boost::math::cyl_neumann(0, x); }
inline double y1(double x) { return boost::math::cyl_neumann(1, x); }
inline double i0(double x) { return boost::math::cyl_bessel_i(0, x); }
inline double i1(double x) { return boost::math::cyl_bessel_i(1, x); }
inline double k0(double x) { return boost::math::cyl_bessel_k(0, x); }
inline double k1(double x) { return boost::math::cyl_bessel_k(1, x); }
inline cd h0(double x) { return {j0(x), y0(x)}; }
inline cd h1(double x) { return {j1(x), y1(x)}; }

}  // namespace fast

}  // namespace scatterfm::specfun

#endif  // SCATTERFM_SPECFUN_HPP
