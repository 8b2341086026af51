#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "zenospin/dynamics.hpp"
#include "zenospin/liouville.hpp"
#include "zenospin/magnetics.hpp"
#include "zenospin/spectral.hpp"
#include "zenospin/spin_algebra.hpp"

namespace zenospin {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;  // worst deviation seen
  double tolerance = 0.0;
};

/// Fixed small system used by the self-check: two protons, a2 = 2 a1.
inline SpinSystem validation_system() {
  SpinSystem sys;
  sys.a1 = 1.5;
  sys.a2 = 3.0;
  sys.omega = 1.0;
  sys.kS = 2.0;
  sys.kT = 0.4;
  return sys;
}

/// Invariant suite behind `zenospin validate`.
inline std::vector<CheckResult> run_validation() {
  std::vector<CheckResult> results;
  const auto check = [&](std::string name, double tol, const std::function<double()>& measure) {
    double m = 0.0;
    try {
      m = measure();
    } catch (const Error&) {
      m = std::numeric_limits<double>::infinity();
    }
    results.push_back({std::move(name), m <= tol, m, tol});
  };

  const SpinSystem sys = validation_system();
  const CompositeSpace space = sys.space();
  const auto n = static_cast<Eigen::Index>(space.dim());
  const Matrix id = Matrix::Identity(n, n);
  const ElectronProjectors q = electron_projectors(space);

  check("angular momentum commutators", 1e-12, [] {
    double worst = 0.0;
    for (int twice = 0; twice <= 4; ++twice) {
      const SpinOperators j = spin_operators(Spin::from_twice(twice));
      worst = std::max(worst, max_abs(commutator(j.x, j.y) - kI * j.z));
      worst = std::max(worst, max_abs(commutator(j.y, j.z) - kI * j.x));
      worst = std::max(worst, max_abs(commutator(j.z, j.x) - kI * j.y));
    }
    return worst;
  });

  check("projector algebra", 1e-12, [&] {
    return std::max({max_abs(q.singlet * q.singlet - q.singlet), max_abs(q.triplet * q.triplet - q.triplet),
                     max_abs(q.singlet * q.triplet), max_abs(q.singlet + q.triplet - id)});
  });

  check("hamiltonian conserves F_z", 1e-10, [&] {
    const Matrix fz = total_fz(space).cast<cplx>().asDiagonal();
    return max_abs(commutator(build_hamiltonian(sys), fz));
  });

  const Superoperator quantum = build_quantum_liouvillian(sys);
  const Superoperator classical = build_classical_liouvillian(sys);

  check("quantum trace preservation", 1e-10, [&] {
    const Vector one = vectorize(id);
    return (one.adjoint() * quantum.matrix).cwiseAbs().maxCoeff();
  });

  for (const Superoperator* a : {&quantum, &classical}) {
    const std::string kind(to_string(a->kind));
    const EigenmodeSet modes = eigenmodes(*a);
    const std::vector<cplx> values = eigenvalues_of(modes);

    check(kind + " spectrum closed under conjugation", 1e-8, [&] {
      std::vector<cplx> conj(values);
      for (auto& v : conj) v = std::conj(v);
      return multiset_distance(values, conj);
    });

    check(kind + " sector and dense spectra agree", 1e-8, [&] {
      const EigenmodeSet dense = eigenmodes(*a, {.vectors = false, .method = Decomposition::dense});
      return multiset_distance(values, eigenvalues_of(dense));
    });

    check(kind + " decay-rate sum equals -Re Tr A", 1e-6, [&] {
      double sum = 0.0;
      for (const auto& m : modes.modes) sum += m.lambda;
      const double trace = -a->matrix.trace().real();
      return std::abs(sum - trace) / std::max(1.0, std::abs(trace));
    });

    check(kind + " expansion matches RK4", 1e-8, [&] {
      const Matrix rho0 = initial_singlet_state(space);
      std::vector<double> times;
      for (int i = 0; i <= 50; ++i) times.push_back(0.1 * i);
      const Trajectory ode = evolve_ode(*a, rho0, times);
      const ModeExpansion exp = expand_observable(modes, rho0);
      if (exp.needs_ode_fallback) return std::numeric_limits<double>::infinity();
      const ExpansionSignal sig = evolve_expansion(exp, times);
      double worst = sig.max_abs_imag();
      for (std::size_t i = 0; i < times.size(); ++i) worst = std::max(worst, std::abs(ode.qs[i] - sig.values[i]));
      return worst;
    });
  }

  check("classical singlet trace decay", 1e-6, [&] {
    SpinSystem bare;
    bare.kS = 2.0;
    const Superoperator a = build_classical_liouvillian(bare);
    const std::vector<double> times{0.25, 0.5, 1.0, 1.5};
    const Trajectory traj = evolve_ode(a, initial_singlet_state(bare.space()), times);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double expected = std::exp(-2.0 * bare.kS * times[i]);
      worst = std::max(worst, std::abs(traj.trace[i] - expected) / expected);
    }
    return worst;
  });

  check("projector spectrum in energy basis", 1e-10, [&] {
    const Matrix qm = projector_matrix_elements(q.singlet, hamiltonian_eigensystem(build_hamiltonian(sys)));
    Eigen::SelfAdjointEigenSolver<Matrix> es(qm);
    const RealVector ev = es.eigenvalues();
    const Eigen::Index ones = n / 4;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, std::abs(ev(i) - (i >= n - ones ? 1.0 : 0.0)));
    return worst;
  });

  return results;
}

}  // namespace zenospin
