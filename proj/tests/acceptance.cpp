// Acceptance checks, one per criterion. Usage: acceptance [id ...]
// Prints one "C<id> PASS|FAIL <summary>" line per criterion, with indented
// detail lines after it; exits non-zero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zenospin/shipped_scenarios.hpp"
#include "zenospin/zenospin.hpp"

using namespace zenospin;

namespace {

struct Outcome {
  bool passed = false;
  std::string summary;
  std::vector<std::string> details;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string shipped(std::string_view name) {
  for (const auto& [n, text] : shipped::kScenarios)
    if (n == name) return std::string(text);
  throw InvalidArgument("no shipped scenario " + std::string(name));
}

// Two protons, a2 = 2 a1 = 3 omega, kT = 0.2 kS.
SpinSystem two_proton_system(double kS) {
  SpinSystem sys;
  sys.a1 = 1.5;
  sys.a2 = 3.0;
  sys.omega = 1.0;
  sys.kS = kS;
  sys.kT = 0.2 * kS;
  return sys;
}

std::vector<Eigenmode> spectrum(const SpinSystem& sys, LiouvillianKind kind) {
  return eigenmodes(build_liouvillian(sys, kind), {.vectors = false}).modes;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  GridSpec g{lo, hi, n, Spacing::log};
  return g.values();
}

Outcome criterion1() {
  Outcome out;
  const double a1 = 1.5;
  const std::vector<double> ratios{10, 15, 50, 100};
  bool any = false;
  for (double r : ratios) {
    SpinSystem h;
    h.a1 = a1;
    h.a2 = 2.8 * a1;
    h.omega = 1.0;
    h.kS = r;
    h.kT = 0.2 * r;
    SpinSystem d = h;
    d.I2 = Spin::from_twice(2);
    d.a2 = 0.86 * a1;
    const auto ch = classify_modes(spectrum(h, LiouvillianKind::quantum), 1.0);
    const auto cd = classify_modes(spectrum(d, LiouvillianKind::quantum), 1.0);
    const bool h_ok = ch.n_slow >= 146 && ch.n_slow <= 152 && ch.total() == 256;
    const bool d_ok = cd.n_slow >= 354 && cd.n_slow <= 366 && cd.total() == 576;
    any = any || (h_ok && d_ok);
    out.details.push_back(fmt("kS/omega=%g: H n_slow=%zu/%zu (%.1f%%) %s, D n_slow=%zu/%zu (%.1f%%) %s", r,
                              ch.n_slow, ch.total(), 100 * ch.slow_fraction(), h_ok ? "in [146,152]" : "outside [146,152]",
                              cd.n_slow, cd.total(), 100 * cd.slow_fraction(), d_ok ? "in [354,366]" : "outside [354,366]"));
  }
  out.passed = any;
  out.summary = "H/D slow-mode counts in [146,152]/256 and [354,366]/576 at a common kS/omega in {10,15,50,100}";
  return out;
}

Outcome criterion2() {
  Outcome out;
  SpinSystem a = two_proton_system(1.0);
  SpinSystem b = a;
  b.I2 = Spin::from_twice(2);
  const std::size_t na = spectrum(a, LiouvillianKind::quantum).size();
  const std::size_t nb = spectrum(b, LiouvillianKind::quantum).size();
  out.passed = na == 256 && nb == 576;
  out.summary = fmt("mode counts: I=(1/2,1/2) -> %zu (want 256), I=(1/2,1) -> %zu (want 576)", na, nb);
  return out;
}

struct ScalingReport {
  double worst_residual = 0.0;
  std::size_t worst_index = 0;
  double worst_omega_shift = 0.0;  // in units of max(|Omega_ref|, omega)
};

ScalingReport scaling(LiouvillianKind kind, const std::vector<double>& grid) {
  std::vector<std::vector<Eigenmode>> sets;
  for (double k : grid) sets.push_back(spectrum(two_proton_system(k), kind));
  const std::size_t n = sets.front().size();
  ScalingReport r;
  for (std::size_t l = 0; l < n; ++l) {
    double kk = 0.0, kl = 0.0, ll = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double lam = sets[g][l].lambda;
      kk += grid[g] * grid[g];
      kl += grid[g] * lam;
      ll += lam * lam;
    }
    if (std::sqrt(ll) < 1e-10) continue;  // a zero track is exactly linear
    const double c = kl / kk;
    double res = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) res += std::pow(sets[g][l].lambda - c * grid[g], 2);
    const double rel = std::sqrt(res / ll);
    if (rel > r.worst_residual) {
      r.worst_residual = rel;
      r.worst_index = l;
    }
  }
  const auto omegas = [](const std::vector<Eigenmode>& m) {
    std::vector<double> w;
    for (const auto& e : m) w.push_back(e.Omega);
    std::sort(w.begin(), w.end());
    return w;
  };
  const std::vector<double> ref = omegas(sets.front());
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const std::vector<double> w = omegas(sets[g]);
    for (std::size_t l = 0; l < n; ++l)
      r.worst_omega_shift = std::max(r.worst_omega_shift, std::abs(w[l] - ref[l]) / std::max(std::abs(ref[l]), 1.0));
  }
  return r;
}

Outcome criterion3() {
  Outcome out;
  out.passed = true;
  const auto grid = log_grid(0.01, 0.1, 10);
  for (auto kind : {LiouvillianKind::quantum, LiouvillianKind::classical}) {
    const ScalingReport r = scaling(kind, grid);
    const bool ok = r.worst_residual < 0.01 && r.worst_omega_shift <= 0.01;
    out.passed = out.passed && ok;
    out.details.push_back(fmt("%s, kS/omega in [0.01,0.1]: worst linear-fit residual %.3f%% (mode %zu), "
                              "worst mixing-frequency shift %.3f%% -> %s",
                              std::string(to_string(kind)).c_str(), 100 * r.worst_residual, r.worst_index,
                              100 * r.worst_omega_shift, ok ? "ok" : "exceeds 1%"));
  }
  const auto fine = log_grid(0.001, 0.01, 10);
  for (auto kind : {LiouvillianKind::quantum, LiouvillianKind::classical}) {
    const ScalingReport r = scaling(kind, fine);
    out.details.push_back(fmt("info: %s, kS/omega in [0.001,0.01]: residual %.3f%%, mixing shift %.3f%%",
                              std::string(to_string(kind)).c_str(), 100 * r.worst_residual,
                              100 * r.worst_omega_shift));
  }
  out.summary = "decay rates linear in kS (residual < 1%) and mixing frequencies constant (1%), both kinds";
  return out;
}

double min_nonzero_lambda(const std::vector<Eigenmode>& modes) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : modes)
    if (e.lambda > kDecayFloor) m = std::min(m, e.lambda);
  return m;
}

Outcome criterion4() {
  Outcome out;
  const double q10 = min_nonzero_lambda(spectrum(two_proton_system(10), LiouvillianKind::quantum));
  const double q100 = min_nonzero_lambda(spectrum(two_proton_system(100), LiouvillianKind::quantum));
  const double c10 = min_nonzero_lambda(spectrum(two_proton_system(10), LiouvillianKind::classical));
  const double c100 = min_nonzero_lambda(spectrum(two_proton_system(100), LiouvillianKind::classical));
  const bool quantum_ok = q100 < q10 && q10 < 1.0 && q100 < 1.0;
  const double proportionality = (c100 / c10) / 10.0;
  const bool classical_ok = c100 > c10 && std::abs(proportionality - 1.0) <= 0.05;
  out.passed = quantum_ok && classical_ok;
  out.details.push_back(fmt("quantum: min nonzero lambda %.4g (kS=10) vs %.4g (kS=100), omega=1 -> %s", q10, q100,
                            quantum_ok ? "Zeno branch slows down" : "not satisfied"));
  out.details.push_back(fmt("classical: min lambda %.4g (kS=10) vs %.4g (kS=100), ratio/10 = %.4f -> %s", c10, c100,
                            proportionality, classical_ok ? "proportional to kS" : "not satisfied"));
  out.summary = "quantum slow branch decreases with kS; classical minimum rate grows proportionally";
  return out;
}

Outcome criterion5() {
  Outcome out;
  std::vector<double> times;
  for (int i = 0; i <= 100; ++i) times.push_back(0.1 * i);
  double worst_trace = 0.0;
  for (double k : {0.1, 1.0, 10.0}) {
    const Superoperator a = build_quantum_liouvillian(two_proton_system(k));
    const Trajectory t = evolve_ode(a, initial_singlet_state(a.source.space()), times);
    for (double tr : t.trace) worst_trace = std::max(worst_trace, std::abs(tr - 1.0));
  }
  SpinSystem bare;
  bare.kS = 2.0;
  const Superoperator c = build_classical_liouvillian(bare);
  std::vector<double> short_times;
  for (int i = 0; i <= 40; ++i) short_times.push_back(0.05 * i);
  const Trajectory t = evolve_ode(c, initial_singlet_state(bare.space()), short_times);
  double worst_rel = 0.0;
  for (std::size_t i = 0; i < short_times.size(); ++i) {
    const double expected = std::exp(-2.0 * bare.kS * short_times[i]);
    worst_rel = std::max(worst_rel, std::abs(t.trace[i] - expected) / expected);
  }
  out.passed = worst_trace < 1e-9 && worst_rel < 1e-6;
  out.details.push_back(fmt("quantum max |Tr rho - 1| over t in [0,10], kS/omega in {0.1,1,10}: %.3g (< 1e-9)",
                            worst_trace));
  out.details.push_back(fmt("classical H=0, kT=0, kS=2: max relative |Tr rho - exp(-2 kS t)| over t in [0,2]: %.3g (< 1e-6)",
                            worst_rel));
  out.summary = "trace conserved by the quantum kind; classical singlet loss exp(-2 kS t)";
  return out;
}

Outcome criterion6() {
  Outcome out;
  out.passed = true;
  std::vector<double> times;
  for (int i = 0; i <= 200; ++i) times.push_back(0.05 * i);
  for (auto kind : {LiouvillianKind::quantum, LiouvillianKind::classical}) {
    for (double k : {0.1, 1.0, 10.0}) {
      const Superoperator a = build_liouvillian(two_proton_system(k), kind);
      const Matrix rho0 = initial_singlet_state(a.source.space());
      const ModeExpansion exp = expand_observable(eigenmodes(a), rho0);
      if (exp.needs_ode_fallback) {
        out.passed = false;
        out.details.push_back(fmt("%s kS=%g: eigenbasis ill-conditioned (cond %.3g)",
                                  std::string(to_string(kind)).c_str(), k, exp.condition_number));
        continue;
      }
      const ExpansionSignal sig = evolve_expansion(exp, times);
      const Trajectory ode = evolve_ode(a, rho0, times);
      double worst = sig.max_abs_imag();
      for (std::size_t i = 0; i < times.size(); ++i) worst = std::max(worst, std::abs(sig.values[i] - ode.qs[i]));
      const bool ok = worst < 1e-8;
      out.passed = out.passed && ok;
      out.details.push_back(fmt("%s kS/omega=%g: max |expansion - RK4| = %.3g, eigenbasis cond %.3g",
                                std::string(to_string(kind)).c_str(), k, worst, exp.condition_number));
    }
  }
  out.summary = "mode expansion of <Q_S(t)> equals RK4 to < 1e-8 on t in [0, 10/omega], both kinds";
  return out;
}

Outcome criterion7() {
  Outcome out;
  std::mt19937 gen(20240611);
  std::uniform_int_distribution<int> spin(1, 3);
  std::uniform_real_distribution<double> coupling(0.0, 5.0);
  double worst = 0.0;
  bool counts_ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    SpinSystem sys;
    sys.I1 = Spin::from_twice(spin(gen));
    sys.I2 = Spin::from_twice(spin(gen));
    sys.a1 = coupling(gen);
    sys.a2 = coupling(gen);
    sys.omega = coupling(gen);
    const Matrix qs = electron_projectors(sys.space()).singlet;
    const Matrix q = projector_matrix_elements(qs, hamiltonian_eigensystem(build_hamiltonian(sys)));
    Eigen::SelfAdjointEigenSolver<Matrix> es(q, Eigen::EigenvaluesOnly);
    const auto n = q.rows();
    std::size_t ones = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = es.eigenvalues()(i);
      const double target = v > 0.5 ? 1.0 : 0.0;
      ones += v > 0.5 ? 1 : 0;
      worst = std::max(worst, std::abs(v - target));
    }
    counts_ok = counts_ok && ones * 4 == static_cast<std::size_t>(n);
  }
  out.passed = worst < 1e-10 && counts_ok;
  out.summary = fmt("q = V^dag Q_S V has spectrum {0,1} with multiplicities {3N/4, N/4}: 20 random systems, "
                    "max deviation %.3g, multiplicities %s",
                    worst, counts_ok ? "ok" : "wrong");
  return out;
}

Outcome criterion8() {
  Outcome out;
  const Scenario s = parse_scenario(shipped("fig6"));
  const auto pairs = pydma_pairs(s.deuteration.a_pyrene, s.deuteration.a_dma, s.system.kS, s.system.kT,
                                 s.deuteration.deuterium_scale);
  const DeuterationStudy study = deuteration_study(pairs, s.grid.values(), s.kind);
  out.passed = study.protonated_silent(0.2);
  for (const auto& p : study.pairs)
    out.details.push_back(fmt("%s: max yield_drop %.3f%%, rise above B=%g G %.3f%%", p.name.c_str(),
                              p.scan.max_yield_drop_pct(), study.fields_gauss.front(),
                              p.scan.max_field_response_pct()));
  out.summary = fmt("Py/DMA, kS=%g, kT=%g, B in [%g,%g] G: protonated-pyrene max %.3f%% vs 1/5 of deuterated-pyrene "
                    "min %.3f%% = %.3f%%",
                    s.system.kS, s.system.kT, study.fields_gauss.front(), study.fields_gauss.back(),
                    study.protonated_max_pct(), study.deuterated_min_pct(), 0.2 * study.deuterated_min_pct());
  return out;
}

Outcome criterion9() {
  Outcome out;
  bool validate_ok = true;
  for (const CheckResult& r : run_validation()) {
    validate_ok = validate_ok && r.passed;
    if (!r.passed) out.details.push_back("validate check failed: " + r.name);
  }
  bool identical = true;
  for (const char* name : {"fig2", "fig4", "fig5", "deuteron_swap"}) {
    const Scenario s = parse_scenario(shipped(name));
    const TaskOutput first = compute_scenario(s, 1);
    const TaskOutput second = compute_scenario(s, 2);
    bool same = first.tables.size() == second.tables.size();
    std::size_t bytes = 0;
    for (std::size_t i = 0; same && i < first.tables.size(); ++i) {
      same = first.tables[i].table.text() == second.tables[i].table.text();
      bytes += first.tables[i].table.text().size();
    }
    identical = identical && same;
    out.details.push_back(fmt("%s: re-run %s (%zu bytes)", name, same ? "byte-identical" : "DIFFERS", bytes));
  }
  out.passed = validate_ok && identical;
  out.summary = fmt("validate %s; scenario re-runs %s", validate_ok ? "passes" : "fails",
                    identical ? "byte-identical" : "differ");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<Outcome()>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (!criteria.contains(id)) {
      std::cerr << "unknown criterion '" << argv[i] << "' (expected 1-9)\n";
      return 2;
    }
    selected.push_back(id);
  }
  if (selected.empty())
    for (const auto& [id, fn] : criteria) selected.push_back(id);

  bool all = true;
  for (int id : selected) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria.at(id)();
    } catch (const std::exception& e) {
      o.passed = false;
      o.summary = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "C" << id << (o.passed ? " PASS " : " FAIL ") << o.summary << fmt(" [%.1f s]", secs) << '\n';
    for (const auto& d : o.details) std::cout << "    " << d << '\n';
    all = all && o.passed;
  }
  return all ? 0 : 1;
}
