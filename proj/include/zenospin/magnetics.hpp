#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "zenospin/error.hpp"
#include "zenospin/linalg.hpp"
#include "zenospin/spin_algebra.hpp"

namespace zenospin {

/// Larmor frequency per gauss, in us^-1 (the MHz/G figure taken as angular us^-1).
inline constexpr double kLarmorPerGauss = 2.8;

/// Two-electron, two-nucleus radical pair. Frequencies and rates in us^-1, hbar = 1.
struct SpinSystem {
  Spin I1 = kSpinHalf;
  Spin I2 = kSpinHalf;
  double a1 = 0.0;  // electron 1 <-> nucleus 1 hyperfine coupling
  double a2 = 0.0;  // electron 2 <-> nucleus 2 hyperfine coupling
  double omega = 0.0;
  double kS = 0.0;
  double kT = 0.0;

  CompositeSpace space() const { return {I1, I2}; }
  std::size_t dim() const { return space().dim(); }

  void validate() const {
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(a1) || !finite(a2) || !finite(omega) || !finite(kS) || !finite(kT))
      throw InvalidArgument("spin system: non-finite parameter");
    if (omega < 0.0) throw InvalidArgument("spin system: omega must be >= 0");
    if (kS < 0.0) throw InvalidArgument("spin system: kS must be >= 0");
    if (kT < 0.0) throw InvalidArgument("spin system: kT must be >= 0");
  }

  std::string describe() const {
    std::ostringstream os;
    os << "I1=" << I1.str() << " I2=" << I2.str() << " a1=" << a1 << " a2=" << a2
       << " omega=" << omega << " kS=" << kS << " kT=" << kT;
    return os.str();
  }
};

inline double larmor_frequency(double field_gauss) {
  if (!std::isfinite(field_gauss) || field_gauss < 0.0)
    throw InvalidArgument("invalid field: B must be a finite value >= 0 gauss");
  return kLarmorPerGauss * field_gauss;
}

/// H = omega (s1z + s2z) + a1 I1.s1 + a2 I2.s2.
inline Matrix build_hamiltonian(const SpinSystem& sys) {
  sys.validate();
  const CompositeSpace space = sys.space();
  const SpinOperators s = spin_operators(kSpinHalf);
  const SpinOperators n1 = spin_operators(sys.I1);
  const SpinOperators n2 = spin_operators(sys.I2);

  const auto e1 = [&](const Matrix& m) { return embed(m, Factor::electron1, space); };
  const auto e2 = [&](const Matrix& m) { return embed(m, Factor::electron2, space); };
  const auto u1 = [&](const Matrix& m) { return embed(m, Factor::nucleus1, space); };
  const auto u2 = [&](const Matrix& m) { return embed(m, Factor::nucleus2, space); };

  Matrix h = sys.omega * (e1(s.z) + e2(s.z));
  if (sys.a1 != 0.0)
    h += sys.a1 * (u1(n1.x) * e1(s.x) + u1(n1.y) * e1(s.y) + u1(n1.z) * e1(s.z));
  if (sys.a2 != 0.0)
    h += sys.a2 * (u2(n2.x) * e2(s.x) + u2(n2.y) * e2(s.y) + u2(n2.z) * e2(s.z));
  return h;
}

struct HamiltonianEigensystem {
  RealVector energies;  // ascending
  Matrix vectors;       // orthonormal eigenvectors as columns
};

inline HamiltonianEigensystem hamiltonian_eigensystem(const Matrix& h) {
  const double scale = std::max(1.0, max_abs(h));
  if (!is_hermitian(h, 1e-12 * scale))
    throw InvalidArgument("hamiltonian_eigensystem: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw NumericalError("hamiltonian_eigensystem: Hermitian eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// q_ji = <j|Q_S|i> in the Hamiltonian eigenbasis.
inline Matrix projector_matrix_elements(const Matrix& projector, const HamiltonianEigensystem& eig) {
  if (projector.rows() != eig.vectors.rows() || projector.cols() != eig.vectors.rows())
    throw InvalidArgument("projector_matrix_elements: dimension mismatch");
  return eig.vectors.adjoint() * projector * eig.vectors;
}

}  // namespace zenospin
