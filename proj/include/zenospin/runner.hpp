#pragma once

#include <chrono>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "zenospin/csv.hpp"
#include "zenospin/dynamics.hpp"
#include "zenospin/liouville.hpp"
#include "zenospin/magnetics.hpp"
#include "zenospin/scenario.hpp"
#include "zenospin/sensitivity.hpp"
#include "zenospin/spectral.hpp"
#include "zenospin/spin_algebra.hpp"

namespace zenospin {

struct NamedTable {
  std::string suffix;  // appended to the output prefix, e.g. "_branches.csv"
  CsvTable table;
};

struct TaskOutput {
  std::vector<NamedTable> tables;
  std::string summary;
};

namespace detail {

inline std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * fraction);
  return buf;
}

inline TaskOutput run_spectrum(const Scenario& s) {
  std::vector<std::pair<std::string, SpinSystem>> variants{{"base", s.system}};
  if (s.isotope) variants.emplace_back("substituted", substitute_isotope(s.system, *s.isotope));

  CsvTable spectrum({"variant", "lambda_over_omega", "Omega_over_omega", "slow"});
  CsvTable counts({"variant", "I1", "I2", "a1", "a2", "kS", "kT", "n_modes", "n_slow",
                   "slow_fraction", "yield_drop_pct"});
  std::ostringstream summary;
  summary << "spectrum " << s.name << " (" << to_string(s.kind) << ")";
  std::vector<double> fractions;
  for (const auto& [label, sys] : variants) {
    const EigenmodeSet set = eigenmodes(build_liouvillian(sys, s.kind), {.vectors = false});
    const ModeClassification c = classify_modes(set, sys.omega);
    for (const auto& m : set.modes)
      spectrum.add() << label << m.lambda / sys.omega << m.Omega / sys.omega
                     << (m.lambda < c.threshold + kThresholdSlack ? 1 : 0);
    counts.add() << label << sys.I1.str() << sys.I2.str() << sys.a1 << sys.a2 << sys.kS << sys.kT
                 << c.total() << c.n_slow << c.slow_fraction()
                 << yield_drop_estimate(c.slow_fraction());
    fractions.push_back(c.slow_fraction());
    summary << "; " << label << " n=" << c.total() << " n_slow=" << c.n_slow << " ("
            << percent(c.slow_fraction()) << ")";
  }
  if (fractions.size() == 2 && fractions[0] > 0.0)
    summary << "; relative change of slow fraction " << percent(relative_change(fractions[0], fractions[1]));
  return {{{"_spectrum.csv", std::move(spectrum)}, {"_counts.csv", std::move(counts)}}, summary.str()};
}

inline TaskOutput run_branch_scan(const Scenario& s, unsigned threads) {
  const std::vector<double> grid = s.grid.values();
  const double omega = s.system.omega;
  std::vector<double> kS(grid);
  if (s.units == GridUnits::omega)
    for (double& k : kS) k *= omega;
  const auto points = branch_scan(s.system, kS, s.kind, s.kT_ratio, threads);

  CsvTable branches({"kS_over_omega", "lambda_over_omega", "Omega_over_omega"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = s.units == GridUnits::omega ? grid[i] : kS[i] / omega;
    for (const auto& m : points[i].modes) branches.add() << x << m.lambda / omega << m.Omega / omega;
  }
  std::ostringstream summary;
  summary << "scan-k " << s.name << " (" << to_string(s.kind) << "): " << points.size()
          << " kS points, " << points.front().modes.size() << " modes each";
  return {{{"_branches.csv", std::move(branches)}}, summary.str()};
}

inline std::vector<double> field_grid_omegas(const Scenario& s) {
  std::vector<double> v = s.grid.values();
  if (s.units == GridUnits::gauss)
    for (double& b : v) b = larmor_frequency(b);
  return v;
}

inline TaskOutput run_field_scan(const Scenario& s, unsigned threads) {
  const std::vector<double> grid = s.grid.values();
  const std::vector<double> omegas = field_grid_omegas(s);
  const ScanResult scan = field_scan(s.system, omegas, s.kind, {.keep_modes = true, .threads = threads});

  CsvTable field({"B_gauss", "omega", "n_modes", "n_slow", "slow_fraction", "yield_drop_pct"});
  CsvTable rates({"omega", "lambda", "Omega"});
  std::size_t lo = std::numeric_limits<std::size_t>::max();
  std::size_t hi = 0;
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const FieldPoint& p = scan.points[i];
    const double b = s.units == GridUnits::gauss ? grid[i] : p.omega / kLarmorPerGauss;
    field.add() << b << p.omega << p.n_modes << p.n_slow << p.slow_fraction << p.yield_drop_pct;
    for (const auto& m : p.modes) rates.add() << p.omega << m.lambda << m.Omega;
    lo = std::min(lo, p.n_slow);
    hi = std::max(hi, p.n_slow);
  }
  std::ostringstream summary;
  summary << "scan-field " << s.name << " (" << to_string(s.kind) << "): " << scan.points.size()
          << " field points, n_slow range [" << lo << ", " << hi << "] of "
          << scan.points.front().n_modes;
  return {{{"_field.csv", std::move(field)}, {"_field_rates.csv", std::move(rates)}}, summary.str()};
}

inline TaskOutput run_evolve(const Scenario& s) {
  std::vector<double> times = s.grid.values();
  if (s.units == GridUnits::inverse_omega)
    for (double& t : times) t /= s.system.omega;

  const Superoperator a = build_liouvillian(s.system, s.kind);
  const Matrix rho0 = initial_singlet_state(s.system.space());
  const Trajectory traj = evolve_ode(a, rho0, times);
  const ModeExpansion expansion = expand_observable(eigenmodes(a), rho0);

  std::vector<double> qs_exp = traj.qs;
  double max_imag = 0.0;
  if (!expansion.needs_ode_fallback) {
    const ExpansionSignal sig = evolve_expansion(expansion, times);
    qs_exp = sig.values;
    max_imag = sig.max_abs_imag();
  }

  CsvTable table({"t_us", "qs", "qt", "trace", "qs_expansion", "abs_residual"});
  double max_residual = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double residual = std::abs(traj.qs[i] - qs_exp[i]);
    max_residual = std::max(max_residual, residual);
    table.add() << times[i] << traj.qs[i] << traj.qt[i] << traj.trace[i] << qs_exp[i] << residual;
  }
  std::ostringstream summary;
  summary << "evolve " << s.name << " (" << to_string(s.kind) << "): " << times.size()
          << " samples, final trace " << traj.trace.back();
  if (expansion.needs_ode_fallback)
    summary << ", eigenbasis ill-conditioned (cond " << expansion.condition_number
            << "): qs_expansion holds the ODE values";
  else
    summary << ", max |ode - expansion| " << max_residual << ", max |Im| " << max_imag;
  return {{{"_traj.csv", std::move(table)}}, summary.str()};
}

inline TaskOutput run_deuteration(const Scenario& s, unsigned threads) {
  const auto pairs = pydma_pairs(s.deuteration.a_pyrene, s.deuteration.a_dma, s.system.kS,
                                 s.system.kT, s.deuteration.deuterium_scale);
  const std::vector<double> fields = s.grid.values();
  const DeuterationStudy study = deuteration_study(pairs, fields, s.kind, {.threads = threads});

  CsvTable table({"pair", "B_gauss", "omega", "n_slow", "slow_fraction", "yield_drop_pct"});
  std::ostringstream summary;
  summary << "deuteration " << s.name << " (" << to_string(s.kind) << "):";
  for (const auto& pair : study.pairs) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const FieldPoint& p = pair.scan.points[i];
      table.add() << pair.name << fields[i] << p.omega << p.n_slow << p.slow_fraction << p.yield_drop_pct;
    }
    summary << " " << pair.name << " max " << pair.scan.max_yield_drop_pct() << "% (rise "
            << pair.scan.max_field_response_pct() << "%);";
  }
  summary << " protonated-pyrene max " << study.protonated_max_pct() << "% vs deuterated-pyrene min "
          << study.deuterated_min_pct() << "%";
  return {{{"_yield.csv", std::move(table)}}, summary.str()};
}

}  // namespace detail

/// Computes every table of a scenario without touching the file system.
inline TaskOutput compute_scenario(const Scenario& s, unsigned threads = 1) {
  switch (s.task) {
    case Task::spectrum: return detail::run_spectrum(s);
    case Task::branch_scan: return detail::run_branch_scan(s, threads);
    case Task::field_scan: return detail::run_field_scan(s, threads);
    case Task::evolve: return detail::run_evolve(s);
    case Task::deuteration: return detail::run_deuteration(s, threads);
  }
  throw InvalidArgument("unknown task");
}

struct RunReport {
  std::vector<std::filesystem::path> files;
  std::size_t rows = 0;
  std::string summary;
};

/// Runs the scenario and writes `<prefix><suffix>` for every table.
inline RunReport run_scenario(const Scenario& s, const std::string& prefix_override = {},
                              unsigned threads = 1) {
  const auto start = std::chrono::steady_clock::now();
  TaskOutput out = compute_scenario(s, threads);
  const std::string prefix = prefix_override.empty() ? s.output : prefix_override;
  RunReport report;
  for (const auto& t : out.tables) {
    std::filesystem::path path(prefix + t.suffix);
    write_text_file(path, t.table.text());
    report.files.push_back(std::move(path));
    report.rows += t.table.rows();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream os;
  os << out.summary << " | " << report.files.size() << " file(s), " << report.rows << " rows, "
     << seconds << " s";
  report.summary = os.str();
  return report;
}

}  // namespace zenospin
