#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/LU>
#include <Eigen/Sparse>

#include "zenospin/error.hpp"
#include "zenospin/linalg.hpp"
#include "zenospin/liouville.hpp"
#include "zenospin/spectral.hpp"

namespace zenospin {

/// Eigenbases with a larger condition number are not trusted for expansion.
inline constexpr double kMaxEigenbasisCondition = 1e10;

/// Pure electron singlet with unpolarized nuclei: Q_S / Tr Q_S.
inline Matrix initial_singlet_state(const CompositeSpace& space) {
  const Matrix qs = electron_projectors(space).singlet;
  return qs / qs.trace().real();
}

inline cplx expectation(const Matrix& op, const Matrix& rho) { return (op * rho).trace(); }

struct ExpansionTerm {
  double lambda = 0.0;
  double Omega = 0.0;
  cplx amplitude;
};

/// <Q(t)> = sum_l A_l exp((-lambda_l + i Omega_l) t).
struct ModeExpansion {
  std::vector<ExpansionTerm> terms;  // same order as the source EigenmodeSet
  double condition_number = 1.0;
  /// Set when the right-eigenvector matrix is too ill-conditioned to trust;
  /// callers should propagate with evolve_ode instead.
  bool needs_ode_fallback = false;

  cplx at(double t) const {
    cplx sum{0.0, 0.0};
    for (const auto& term : terms)
      sum += term.amplitude * std::exp(cplx(-term.lambda, term.Omega) * t);
    return sum;
  }

  /// Only the terms with lambda below `threshold` (the long-time signal).
  ModeExpansion truncated(double threshold) const {
    ModeExpansion out = *this;
    std::erase_if(out.terms, [&](const ExpansionTerm& t) { return !(t.lambda < threshold); });
    return out;
  }
};

/// Decomposes vec(rho0) over the right eigenvectors and contracts each
/// component with `observable`.
inline ModeExpansion expand_observable(const EigenmodeSet& modes, const Matrix& rho0,
                                       const Matrix& observable) {
  if (!modes.has_vectors())
    throw InvalidArgument("expand_observable: eigenmode set has no eigenvectors");
  const Eigen::Index n2 = modes.right_vectors.rows();
  if (rho0.size() != n2 || observable.size() != n2)
    throw InvalidArgument("expand_observable: dimension mismatch");

  ModeExpansion out;
  Eigen::PartialPivLU<Matrix> lu(modes.right_vectors);
  const double rcond = lu.rcond();
  out.condition_number = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  out.needs_ode_fallback = !(out.condition_number <= kMaxEigenbasisCondition);
  if (out.needs_ode_fallback) return out;

  const Vector coeff = lu.solve(vectorize(rho0));
  // Tr(Q rho) = sum_ij Q_ji rho_ij = vec(Q^T) . vec(rho) without conjugation.
  const Vector weight = vectorize(observable.transpose());
  const Vector projected = modes.right_vectors.transpose() * weight;
  out.terms.reserve(modes.size());
  for (std::size_t l = 0; l < modes.size(); ++l) {
    const auto k = static_cast<Eigen::Index>(l);
    out.terms.push_back({modes.modes[l].lambda, modes.modes[l].Omega, projected(k) * coeff(k)});
  }
  return out;
}

/// Expansion of <Q_S(t)> for the source system of `modes`.
inline ModeExpansion expand_observable(const EigenmodeSet& modes, const Matrix& rho0) {
  return expand_observable(modes, rho0, electron_projectors(modes.source.space()).singlet);
}

struct ExpansionSignal {
  std::vector<double> times;
  std::vector<double> values;     // Re <Q(t)>
  std::vector<double> imag_part;  // Im <Q(t)>, diagnostic

  double max_abs_imag() const {
    double m = 0.0;
    for (double v : imag_part) m = std::max(m, std::abs(v));
    return m;
  }
};

inline ExpansionSignal evolve_expansion(const ModeExpansion& expansion, std::span<const double> times) {
  if (expansion.needs_ode_fallback)
    throw InvalidArgument("evolve_expansion: expansion is flagged for the ODE fallback");
  ExpansionSignal out;
  out.times.assign(times.begin(), times.end());
  out.values.reserve(times.size());
  out.imag_part.reserve(times.size());
  for (double t : times) {
    const cplx v = expansion.at(t);
    out.values.push_back(v.real());
    out.imag_part.push_back(v.imag());
  }
  return out;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<double> qs;     // Tr(rho Q_S)
  std::vector<double> qt;     // Tr(rho Q_T)
  std::vector<double> trace;  // Tr(rho)
  std::vector<Matrix> states; // rho(t); filled only when requested
};

struct OdeOptions {
  bool record_states = false;
  /// Largest step is step_scale / ||A||_inf.
  double step_scale = 1e-3;
};

namespace detail {

inline void check_time_grid(std::span<const double> times) {
  if (times.empty()) throw InvalidArgument("time grid is empty");
  double prev = 0.0;
  for (double t : times) {
    if (!std::isfinite(t) || t < prev)
      throw InvalidArgument("time grid must be finite, start at t >= 0 and be non-decreasing");
    prev = t;
  }
}

}  // namespace detail

/// Fixed-step classical Runge-Kutta integration of dR/dt = A R.
inline Trajectory evolve_ode(const Superoperator& a, const Matrix& rho0, std::span<const double> times,
                             OdeOptions opts = {}) {
  detail::check_time_grid(times);
  if (rho0.size() != a.dim()) throw InvalidArgument("evolve_ode: state dimension mismatch");

  const ElectronProjectors q = electron_projectors(a.source.space());
  const Eigen::SparseMatrix<cplx> gen = a.matrix.sparseView();
  const double norm = norm_inf(a.matrix);
  const double h_max = norm > 0.0 ? opts.step_scale / norm : std::numeric_limits<double>::infinity();

  Trajectory out;
  Vector r = vectorize(rho0);
  Vector k1(r.size()), k2(r.size()), k3(r.size()), k4(r.size());
  double t_now = 0.0;
  const auto record = [&](double t) {
    const Matrix rho = devectorize(r);
    out.times.push_back(t);
    out.qs.push_back(expectation(q.singlet, rho).real());
    out.qt.push_back(expectation(q.triplet, rho).real());
    out.trace.push_back(rho.trace().real());
    if (opts.record_states) out.states.push_back(rho);
  };

  for (double t_target : times) {
    const double span = t_target - t_now;
    if (span > 0.0) {
      const double steps_real = std::ceil(span / h_max);
      if (steps_real > 1e9)
        throw NumericalError("evolve_ode: step size underflow (" + std::to_string(steps_real) +
                             " steps needed)");
      const auto steps = static_cast<long long>(std::max(1.0, steps_real));
      const double h = span / static_cast<double>(steps);
      for (long long s = 0; s < steps; ++s) {
        k1.noalias() = gen * r;
        k2.noalias() = gen * (r + 0.5 * h * k1);
        k3.noalias() = gen * (r + 0.5 * h * k2);
        k4.noalias() = gen * (r + h * k3);
        r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      if (!r.allFinite()) throw NumericalError("evolve_ode: state became non-finite");
      t_now = t_target;
    }
    record(t_target);
  }
  return out;
}

}  // namespace zenospin
