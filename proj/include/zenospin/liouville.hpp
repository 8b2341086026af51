#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "zenospin/error.hpp"
#include "zenospin/linalg.hpp"
#include "zenospin/magnetics.hpp"
#include "zenospin/spin_algebra.hpp"

namespace zenospin {

// Column stacking: vec(rho)[i + j N] = rho(i, j), so vec(X rho Y) = (Y^T (x) X) vec(rho).

inline Vector vectorize(const Matrix& rho) {
  if (rho.rows() != rho.cols()) throw InvalidArgument("vectorize: matrix is not square");
  return Eigen::Map<const Vector>(rho.data(), rho.size());
}

inline Matrix devectorize(const Vector& r) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(r.size()))));
  if (n * n != r.size())
    throw InvalidArgument("devectorize: length " + std::to_string(r.size()) +
                          " is not a perfect square");
  return Eigen::Map<const Matrix>(r.data(), n, n);
}

enum class LiouvillianKind { quantum, classical };

inline std::string_view to_string(LiouvillianKind kind) {
  return kind == LiouvillianKind::quantum ? "quantum" : "classical";
}

/// Generator A of dR/dt = A R on column-stacked density matrices.
struct Superoperator {
  Matrix matrix;
  LiouvillianKind kind = LiouvillianKind::quantum;
  SpinSystem source;
  /// Coherence order 2 (M_i - M_j) of each vectorized element rho_ij, where
  /// M is the F_z eigenvalue. A never couples different orders.
  std::vector<int> coherence_order;

  Eigen::Index dim() const { return matrix.rows(); }
};

namespace detail {

inline std::vector<int> coherence_orders(const CompositeSpace& space) {
  const RealVector fz = total_fz(space);
  const auto n = fz.size();
  std::vector<int> order(static_cast<std::size_t>(n * n));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      order[static_cast<std::size_t>(i + j * n)] =
          static_cast<int>(std::lround(2.0 * (fz(i) - fz(j))));
  return order;
}

inline Superoperator assemble_liouvillian(const SpinSystem& sys, LiouvillianKind kind) {
  sys.validate();
  const CompositeSpace space = sys.space();
  const Matrix h = build_hamiltonian(sys);
  const ElectronProjectors q = electron_projectors(space);
  const auto n = static_cast<Eigen::Index>(space.dim());
  const Matrix id = Matrix::Identity(n, n);

  Matrix a = -kI * (kron(id, h) - kron(h.transpose(), id));
  const auto add_measurement = [&](double rate, const Matrix& proj) {
    if (rate == 0.0) return;
    // -k (Q rho + rho Q), plus 2k Q rho Q for the measurement (double commutator) form.
    a -= rate * (kron(id, proj) + kron(proj.transpose(), id));
    if (kind == LiouvillianKind::quantum) a += 2.0 * rate * kron(proj.transpose(), proj);
  };
  add_measurement(sys.kS, q.singlet);
  add_measurement(sys.kT, q.triplet);
  return {std::move(a), kind, sys, coherence_orders(space)};
}

}  // namespace detail

/// drho/dt = -i[H, rho] - kS [Q_S, [Q_S, rho]] - kT [Q_T, [Q_T, rho]].
inline Superoperator build_quantum_liouvillian(const SpinSystem& sys) {
  return detail::assemble_liouvillian(sys, LiouvillianKind::quantum);
}

/// drho/dt = -i[H, rho] - kS (Q_S rho + rho Q_S) - kT (Q_T rho + rho Q_T).
inline Superoperator build_classical_liouvillian(const SpinSystem& sys) {
  return detail::assemble_liouvillian(sys, LiouvillianKind::classical);
}

inline Superoperator build_liouvillian(const SpinSystem& sys, LiouvillianKind kind) {
  return detail::assemble_liouvillian(sys, kind);
}

}  // namespace zenospin
