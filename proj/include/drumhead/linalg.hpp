#pragma once

#include <algorithm>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "drumhead/errors.hpp"

// Dense kernels. Decompositions are delegated to Eigen; the pseudoinverse and its
// rank truncation are defined here.
namespace drumhead::linalg {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct SymEig {
  Vector<Scalar> values;  // ascending
  Matrix<Scalar> vectors;
};

template <typename Scalar>
struct Svd {
  Matrix<Scalar> U;
  Vector<Scalar> singular_values;  // descending
  Matrix<Scalar> V;
};

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& a, typename Derived::RealScalar rel_tol = 1e-10) {
  if (a.rows() != a.cols()) return false;
  const auto scale = std::max<typename Derived::RealScalar>(a.cwiseAbs().maxCoeff(), 1e-300);
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

/// Eigen-decomposition of a symmetric matrix; throws on non-symmetric input.
template <typename Derived>
SymEig<typename Derived::Scalar> sym_eig(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols()) throw std::invalid_argument("sym_eig: matrix is not square");
  if (a.size() == 0) return {};
  if (!is_symmetric(a)) throw std::invalid_argument("sym_eig: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(a.eval());
  if (es.info() != Eigen::Success) throw NumericalError("sym_eig: QL iteration did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Lower Cholesky factor L with L L^T = A.
template <typename Derived>
Matrix<typename Derived::Scalar> cholesky(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (!is_symmetric(a)) throw std::invalid_argument("cholesky: matrix is not symmetric");
  Eigen::LLT<Matrix<Scalar>> llt(a.eval());
  if (llt.info() != Eigen::Success) throw NumericalError("cholesky: matrix is not positive definite");
  return llt.matrixL();
}

/// Thin SVD, A = U diag(s) V^T.
template <typename Derived>
Svd<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Eigen::JacobiSVD<Matrix<Scalar>> dec(a.eval(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

/// Number of singular values above rel_tol times the largest.
template <typename Scalar>
Eigen::Index numerical_rank(const Vector<Scalar>& singular_values, Scalar rel_tol) {
  if (singular_values.size() == 0 || !(singular_values(0) > Scalar(0))) return 0;
  const Scalar cutoff = rel_tol * singular_values(0);
  Eigen::Index r = 0;
  while (r < singular_values.size() && singular_values(r) > cutoff) ++r;
  return r;
}

/// Moore-Penrose pseudoinverse; singular values below rel_tol * s_max are treated as zero.
template <typename Derived>
Matrix<typename Derived::Scalar> pinv(const Eigen::MatrixBase<Derived>& a,
                                      typename Derived::Scalar rel_tol = 1e-8) {
  using Scalar = typename Derived::Scalar;
  if (rel_tol < Scalar(0)) throw std::invalid_argument("pinv: rel_tol must be non-negative");
  const Svd<Scalar> d = svd(a);
  const Eigen::Index r = numerical_rank(d.singular_values, rel_tol);
  const Vector<Scalar> inv_s = d.singular_values.head(r).cwiseInverse();
  return d.V.leftCols(r) * inv_s.asDiagonal() * d.U.leftCols(r).transpose();
}

/// pinv(a) * v without forming the pseudoinverse.
template <typename Derived, typename VecDerived>
Vector<typename Derived::Scalar> pinv_apply(const Eigen::MatrixBase<Derived>& a,
                                            const Eigen::MatrixBase<VecDerived>& v,
                                            typename Derived::Scalar rel_tol = 1e-8) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != v.size()) throw std::invalid_argument("pinv_apply: dimension mismatch");
  const Svd<Scalar> d = svd(a);
  const Eigen::Index r = numerical_rank(d.singular_values, rel_tol);
  const Vector<Scalar> coords =
      (d.U.leftCols(r).transpose() * v).cwiseQuotient(d.singular_values.head(r));
  return d.V.leftCols(r) * coords;
}

}  // namespace drumhead::linalg
