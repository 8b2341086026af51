#pragma once

#include <algorithm>
#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <lapacke.h>

#include "zenospin/error.hpp"

namespace zenospin {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

/// Largest absolute entry; the entrywise norm used by every tolerance check.
inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

/// Induced infinity norm (max absolute row sum).
inline double norm_inf(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

struct GeneralEigen {
  Vector values;
  Matrix vectors;  // right eigenvectors as columns; empty when not requested
};

/// Dense complex non-Hermitian eigendecomposition (LAPACK zgeev).
inline GeneralEigen general_eigen(Matrix a, bool want_vectors) {
  const auto n = static_cast<lapack_int>(a.rows());
  if (a.rows() != a.cols()) throw InvalidArgument("general_eigen: matrix is not square");
  GeneralEigen out;
  out.values.resize(n);
  if (n == 0) return out;
  if (want_vectors) out.vectors.resize(n, n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n,
      reinterpret_cast<lapack_complex_double*>(a.data()), n,
      reinterpret_cast<lapack_complex_double*>(out.values.data()), nullptr, 1,
      want_vectors ? reinterpret_cast<lapack_complex_double*>(out.vectors.data()) : nullptr,
      want_vectors ? n : 1);
  if (info < 0) throw InvalidArgument("zgeev: illegal argument " + std::to_string(-info));
  if (info > 0)
    throw NumericalError("zgeev: QR algorithm failed to converge (" + std::to_string(info) +
                         " eigenvalues not computed)");
  return out;
}

}  // namespace zenospin
