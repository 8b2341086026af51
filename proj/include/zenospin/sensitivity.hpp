#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "zenospin/error.hpp"
#include "zenospin/liouville.hpp"
#include "zenospin/magnetics.hpp"
#include "zenospin/parallel.hpp"
#include "zenospin/spectral.hpp"

namespace zenospin {

/// Singlet-yield drop estimate in percent: half the slow-mode fraction.
inline double yield_drop_estimate(double slow_fraction) {
  if (!(slow_fraction >= 0.0 && slow_fraction <= 1.0))
    throw InvalidArgument("yield_drop_estimate: fraction must lie in [0, 1]");
  return 50.0 * slow_fraction;
}

/// (after - before) / before.
inline double relative_change(double before, double after) {
  if (before == 0.0) throw InvalidArgument("relative_change: reference value is zero");
  return (after - before) / before;
}

struct FieldPoint {
  double omega = 0.0;
  std::size_t n_modes = 0;
  std::size_t n_slow = 0;
  double slow_fraction = 0.0;
  double yield_drop_pct = 0.0;
  std::vector<Eigenmode> modes;  // kept only on request
};

struct ScanResult {
  std::vector<FieldPoint> points;

  double max_yield_drop_pct() const {
    double m = 0.0;
    for (const auto& p : points) m = std::max(m, p.yield_drop_pct);
    return m;
  }

  /// Largest rise of the yield-drop estimate above its value at the first grid point.
  double max_field_response_pct() const {
    if (points.empty()) return 0.0;
    double m = 0.0;
    for (const auto& p : points) m = std::max(m, p.yield_drop_pct - points.front().yield_drop_pct);
    return m;
  }
};

struct ScanOptions {
  bool keep_modes = false;
  unsigned threads = 1;
};

namespace detail {

inline void check_increasing_positive(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw InvalidArgument(std::string(what) + ": empty grid");
  double prev = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] <= 0.0 || (i > 0 && grid[i] <= prev))
      throw InvalidArgument(std::string(what) + ": grid must be positive and strictly increasing");
    prev = grid[i];
  }
}

inline FieldPoint evaluate_field_point(SpinSystem sys, double omega, LiouvillianKind kind,
                                       bool keep_modes) {
  sys.omega = omega;
  EigenmodeSet set = eigenmodes(build_liouvillian(sys, kind), {.vectors = false});
  const ModeClassification c = classify_modes(set, omega);
  FieldPoint p;
  p.omega = omega;
  p.n_modes = c.total();
  p.n_slow = c.n_slow;
  p.slow_fraction = c.slow_fraction();
  p.yield_drop_pct = yield_drop_estimate(p.slow_fraction);
  if (keep_modes) p.modes = std::move(set.modes);
  return p;
}

}  // namespace detail

/// Slow-mode counts over a Larmor-frequency grid; all other parameters fixed.
inline ScanResult field_scan(const SpinSystem& base, std::span<const double> omega_grid,
                             LiouvillianKind kind, ScanOptions opts = {}) {
  detail::check_increasing_positive(omega_grid, "field_scan");
  ScanResult out;
  out.points.resize(omega_grid.size());
  parallel_for(omega_grid.size(), opts.threads, [&](std::size_t i) {
    out.points[i] = detail::evaluate_field_point(base, omega_grid[i], kind, opts.keep_modes);
  });
  return out;
}

/// Proton -> deuteron magnetic-moment ratio, applied to the hyperfine coupling.
inline constexpr double kDeuteriumCouplingScale = 0.307;

struct IsotopeSubstitution {
  int nucleus = 2;  // 1 or 2
  Spin spin_after = Spin::from_twice(2);
  double coupling_scale = kDeuteriumCouplingScale;

  static IsotopeSubstitution deuterium(int nucleus) {
    return {nucleus, Spin::from_twice(2), kDeuteriumCouplingScale};
  }
};

inline SpinSystem substitute_isotope(SpinSystem sys, const IsotopeSubstitution& sub) {
  if (!(sub.coupling_scale > 0.0) || !std::isfinite(sub.coupling_scale))
    throw InvalidArgument("substitute_isotope: coupling scale must be > 0");
  switch (sub.nucleus) {
    case 1:
      sys.I1 = sub.spin_after;
      sys.a1 *= sub.coupling_scale;
      break;
    case 2:
      sys.I2 = sub.spin_after;
      sys.a2 *= sub.coupling_scale;
      break;
    default:
      throw InvalidArgument("substitute_isotope: nucleus index must be 1 or 2, got " +
                            std::to_string(sub.nucleus));
  }
  return sys;
}

/// One radical pair of the deuteration study. The name is "<pyrene>/<dma>"
/// with h or d per side; nucleus 1 sits on pyrene, nucleus 2 on DMA.
struct RadicalPairConfig {
  std::string name;
  SpinSystem system;  // omega is set per grid point
};

/// The four Py/DMA pairs from protonated effective couplings.
inline std::vector<RadicalPairConfig> pydma_pairs(double a_pyrene, double a_dma, double kS, double kT,
                                                  double deuterium_scale = kDeuteriumCouplingScale) {
  SpinSystem hh;
  hh.a1 = a_pyrene;
  hh.a2 = a_dma;
  hh.kS = kS;
  hh.kT = kT;
  const IsotopeSubstitution d1{1, Spin::from_twice(2), deuterium_scale};
  const IsotopeSubstitution d2{2, Spin::from_twice(2), deuterium_scale};
  return {
      {"h/h", hh},
      {"h/d", substitute_isotope(hh, d2)},
      {"d/h", substitute_isotope(hh, d1)},
      {"d/d", substitute_isotope(substitute_isotope(hh, d1), d2)},
  };
}

struct PairScan {
  std::string name;
  ScanResult scan;
};

struct DeuterationStudy {
  std::vector<double> fields_gauss;
  std::vector<PairScan> pairs;  // sorted by name

  const PairScan& pair(const std::string& name) const {
    for (const auto& p : pairs)
      if (p.name == name) return p;
    throw InvalidArgument("deuteration study has no pair '" + name + "'");
  }

  /// Largest max-yield-drop among the protonated-pyrene pairs (h/h, h/d).
  double protonated_max_pct() const {
    return std::max(pair("h/h").scan.max_yield_drop_pct(), pair("h/d").scan.max_yield_drop_pct());
  }

  /// Smallest max-yield-drop among the deuterated-pyrene pairs (d/h, d/d).
  double deuterated_min_pct() const {
    return std::min(pair("d/h").scan.max_yield_drop_pct(), pair("d/d").scan.max_yield_drop_pct());
  }

  /// Protonated-pyrene pairs show at most `ratio` of the deuterated response.
  bool protonated_silent(double ratio = 0.2) const {
    return protonated_max_pct() < ratio * deuterated_min_pct();
  }
};

inline DeuterationStudy deuteration_study(std::span<const RadicalPairConfig> configs,
                                          std::span<const double> fields_gauss,
                                          LiouvillianKind kind = LiouvillianKind::quantum,
                                          ScanOptions opts = {}) {
  static const std::vector<std::string> required{"d/d", "d/h", "h/d", "h/h"};
  if (configs.size() < required.size())
    throw InvalidArgument("deuteration_study: need the four pairs h/h, h/d, d/h, d/d");
  std::vector<RadicalPairConfig> sorted(configs.begin(), configs.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& x, const auto& y) { return x.name < y.name; });
  for (const auto& name : required)
    if (std::none_of(sorted.begin(), sorted.end(), [&](const auto& c) { return c.name == name; }))
      throw InvalidArgument("deuteration_study: missing pair '" + name + "'");
  detail::check_increasing_positive(fields_gauss, "deuteration_study");

  std::vector<double> omegas;
  for (double b : fields_gauss) omegas.push_back(larmor_frequency(b));

  DeuterationStudy out;
  out.fields_gauss.assign(fields_gauss.begin(), fields_gauss.end());
  out.pairs.resize(sorted.size());
  for (std::size_t p = 0; p < sorted.size(); ++p) {
    out.pairs[p].name = sorted[p].name;
    out.pairs[p].scan.points.resize(omegas.size());
  }
  const std::size_t per_pair = omegas.size();
  parallel_for(sorted.size() * per_pair, opts.threads, [&](std::size_t task) {
    const std::size_t p = task / per_pair;
    const std::size_t g = task % per_pair;
    out.pairs[p].scan.points[g] =
        detail::evaluate_field_point(sorted[p].system, omegas[g], kind, opts.keep_modes);
  });
  return out;
}

}  // namespace zenospin
