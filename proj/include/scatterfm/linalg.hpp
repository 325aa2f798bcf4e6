// SPDX-License-Identifier: Apache-2.0

#ifndef SCATTERFM_LINALG_HPP
#define SCATTERFM_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scatterfm/errors.hpp"

namespace scatterfm
{

using cd = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace linalg
{

inline double max_abs(const ComplexMatrix &a)
{
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool all_finite(const ComplexMatrix &a)
{
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
        return false;
  return true;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix &a)
{
  return 0.5 * (a + a.adjoint());
}

// Im(A) in the operator sense: (A - A*) / 2i. Hermitian.
inline ComplexMatrix anti_hermitian_part(const ComplexMatrix &a)
{
  return (a - a.adjoint()) / cd(0.0, 2.0);
}

//
// LU factorization with largest-magnitude partial pivoting. Factor once, solve for as many
// right-hand sides as needed. Eigen's pivot search returns the first maximal entry, so ties
// go to the lowest row index and results are reproducible run to run.
//
class LuSolver
{
public:
  LuSolver() = default;

  explicit LuSolver(const ComplexMatrix &a) { factor(a); }

  void factor(const ComplexMatrix &a)
  {
    if (a.rows() != a.cols())
      throw std::invalid_argument("solve_linear: matrix is not square (" +
                                  std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                  ")");
    if (!all_finite(a))
      throw std::invalid_argument("solve_linear: matrix has non-finite entries");
    const double scale = max_abs(a);
    lu_.compute(a);
    const auto &packed = lu_.matrixLU();
    double smallest = scale;
    for (Eigen::Index i = 0; i < packed.rows(); ++i)
      smallest = std::min(smallest, std::abs(packed(i, i)));
    if (a.rows() > 0 && (scale == 0.0 || smallest < 1e-14 * scale))
      throw SolverError("solve_linear: matrix is singular to working precision (pivot " +
                        std::to_string(smallest) + ", max entry " + std::to_string(scale) + ")");
    dim_ = a.rows();
  }

  Eigen::Index dim() const { return dim_; }

  ComplexMatrix solve(const ComplexMatrix &b) const
  {
    if (b.rows() != dim_)
      throw std::invalid_argument("solve_linear: right-hand side has " + std::to_string(b.rows()) +
                                  " rows, expected " + std::to_string(dim_));
    return lu_.solve(b);
  }

private:
  Eigen::PartialPivLU<ComplexMatrix> lu_;
  Eigen::Index dim_ = 0;
};

inline ComplexMatrix solve_linear(const ComplexMatrix &a, const ComplexMatrix &b)
{
  return LuSolver(a).solve(b);
}

struct HermitianEigensystem
{
  RealVector eigenvalues;      // descending
  ComplexMatrix eigenvectors;  // orthonormal columns, column n pairs with eigenvalues(n)

  Eigen::Index dim() const { return eigenvalues.size(); }
};

inline void require_hermitian(const ComplexMatrix &a, double rel_tol = 1e-10)
{
  if (a.rows() != a.cols())
    throw std::invalid_argument("hermitian_eig: matrix is not square");
  const double scale = max_abs(a);
  const double defect = max_abs(a - a.adjoint());
  if (defect > rel_tol * scale)
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian (defect " +
                                std::to_string(defect) + " vs scale " + std::to_string(scale) +
                                ")");
}

inline HermitianEigensystem hermitian_eig(const ComplexMatrix &a)
{
  require_hermitian(a);
  // Only the lower triangle is read; feed the exactly Hermitian average.
  const ComplexMatrix h = hermitian_part(a);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw SolverError("hermitian_eig: eigensolver did not converge");

  const Eigen::Index n = h.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto &values = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index l, Eigen::Index r) { return values(l) > values(r); });

  HermitianEigensystem out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = values(order[static_cast<std::size_t>(i)]);
    out.eigenvectors.col(i) = solver.eigenvectors().col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

inline ComplexMatrix reassemble(const HermitianEigensystem &es, const RealVector &values)
{
  return es.eigenvectors * values.asDiagonal() * es.eigenvectors.adjoint();
}

// |A| = V |Lambda| V* for Hermitian A.
inline ComplexMatrix abs_operator(const ComplexMatrix &a)
{
  const auto es = hermitian_eig(a);
  return hermitian_part(reassemble(es, es.eigenvalues.cwiseAbs()));
}

}  // namespace linalg
}  // namespace scatterfm

#endif  // SCATTERFM_LINALG_HPP
