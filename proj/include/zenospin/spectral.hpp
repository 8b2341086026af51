#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "zenospin/error.hpp"
#include "zenospin/linalg.hpp"
#include "zenospin/liouville.hpp"
#include "zenospin/parallel.hpp"

namespace zenospin {

/// Decay rates within this distance below zero are rounding noise and are clamped.
inline constexpr double kDecayFloor = 1e-9;
/// Modes this close above the threshold still count as slow.
inline constexpr double kThresholdSlack = 1e-9;

/// One eigenvalue -lambda + i Omega of a superoperator.
struct Eigenmode {
  double lambda = 0.0;  // decay rate, >= 0
  double Omega = 0.0;   // mixing frequency, signed
  cplx value;           // eigenvalue as returned by the solver (unclamped)
};

struct EigenmodeSet {
  std::vector<Eigenmode> modes;  // ascending lambda, ties by Omega
  Matrix right_vectors;          // column l belongs to modes[l]; empty if not requested
  LiouvillianKind kind = LiouvillianKind::quantum;
  SpinSystem source;

  std::size_t size() const { return modes.size(); }
  bool has_vectors() const { return right_vectors.size() > 0; }
};

enum class Decomposition {
  sectors,  // block by coherence order, one zgeev per block
  dense,    // one zgeev on the full N^2 x N^2 matrix
};

struct EigenmodeOptions {
  bool vectors = true;
  Decomposition method = Decomposition::sectors;
};

namespace detail {

inline void append_block(const Matrix& block, const std::vector<Eigen::Index>& index,
                         bool want_vectors, std::vector<cplx>& values, Matrix& vectors,
                         Eigen::Index& column) {
  GeneralEigen eig = general_eigen(block, want_vectors);
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    values.push_back(eig.values(k));
    if (want_vectors) {
      for (std::size_t r = 0; r < index.size(); ++r)
        vectors(index[r], column) = eig.vectors(static_cast<Eigen::Index>(r), k);
    }
    ++column;
  }
}

}  // namespace detail

/// Full spectrum of A with n = N^2 modes counted with multiplicity.
inline EigenmodeSet eigenmodes(const Superoperator& a, EigenmodeOptions opts = {}) {
  const Eigen::Index n = a.dim();
  std::vector<cplx> values;
  values.reserve(static_cast<std::size_t>(n));
  Matrix vectors;
  if (opts.vectors) vectors = Matrix::Zero(n, n);
  Eigen::Index column = 0;

  try {
    const bool blocked = opts.method == Decomposition::sectors &&
                         a.coherence_order.size() == static_cast<std::size_t>(n);
    if (blocked) {
      std::map<int, std::vector<Eigen::Index>> sectors;
      for (Eigen::Index i = 0; i < n; ++i)
        sectors[a.coherence_order[static_cast<std::size_t>(i)]].push_back(i);
      for (const auto& [order, index] : sectors) {
        const auto m = static_cast<Eigen::Index>(index.size());
        Matrix block(m, m);
        for (Eigen::Index c = 0; c < m; ++c)
          for (Eigen::Index r = 0; r < m; ++r)
            block(r, c) = a.matrix(index[static_cast<std::size_t>(r)], index[static_cast<std::size_t>(c)]);
        detail::append_block(block, index, opts.vectors, values, vectors, column);
      }
    } else {
      std::vector<Eigen::Index> index(static_cast<std::size_t>(n));
      std::iota(index.begin(), index.end(), Eigen::Index{0});
      detail::append_block(a.matrix, index, opts.vectors, values, vectors, column);
    }
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " [" + std::string(to_string(a.kind)) + " " +
                         a.source.describe() + "]");
  }

  std::vector<Eigenmode> raw(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double decay = -values[k].real();
    if (!std::isfinite(decay) || !std::isfinite(values[k].imag()))
      throw NumericalError("eigenmodes: non-finite eigenvalue [" + a.source.describe() + "]");
    if (decay < -kDecayFloor)
      throw NumericalError("eigenmodes: growing mode with rate " + std::to_string(-decay) + " [" +
                           a.source.describe() + "]");
    raw[k] = {std::max(0.0, decay), values[k].imag(), values[k]};
  }

  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (raw[x].lambda != raw[y].lambda) return raw[x].lambda < raw[y].lambda;
    return raw[x].Omega < raw[y].Omega;
  });

  EigenmodeSet out;
  out.kind = a.kind;
  out.source = a.source;
  out.modes.reserve(raw.size());
  for (std::size_t k : order) out.modes.push_back(raw[k]);
  if (opts.vectors) {
    out.right_vectors.resize(n, n);
    for (std::size_t k = 0; k < order.size(); ++k)
      out.right_vectors.col(static_cast<Eigen::Index>(k)) =
          vectors.col(static_cast<Eigen::Index>(order[k]));
  }
  return out;
}

struct ModeClassification {
  std::size_t n_slow = 0;
  std::size_t n_fast = 0;
  double threshold = 0.0;

  std::size_t total() const { return n_slow + n_fast; }
  double slow_fraction() const {
    return total() == 0 ? 0.0 : static_cast<double>(n_slow) / static_cast<double>(total());
  }
};

/// Counts modes below the lambda = omega line.
inline ModeClassification classify_modes(std::span<const Eigenmode> modes, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw InvalidArgument("classify_modes: threshold omega must be > 0");
  ModeClassification c;
  c.threshold = omega;
  for (const auto& m : modes) (m.lambda < omega + kThresholdSlack ? c.n_slow : c.n_fast)++;
  return c;
}

inline ModeClassification classify_modes(const EigenmodeSet& set, double omega) {
  return classify_modes(std::span<const Eigenmode>(set.modes), omega);
}

/// Largest distance between paired entries of two equally sized multisets,
/// pairing each value of `a` with its nearest unused value of `b`.
inline double multiset_distance(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const cplx& x : a) {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == b.size()) return std::numeric_limits<double>::infinity();
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

inline std::vector<cplx> eigenvalues_of(const EigenmodeSet& set) {
  std::vector<cplx> v;
  v.reserve(set.size());
  for (const auto& m : set.modes) v.push_back(m.value);
  return v;
}

struct BranchPoint {
  double kS = 0.0;
  double kT = 0.0;
  std::vector<Eigenmode> modes;  // ascending lambda, ties by Omega
};

/// Spectrum of A over a kS grid with kT = kT_ratio * kS; results in grid order.
inline std::vector<BranchPoint> branch_scan(const SpinSystem& base, std::span<const double> kS_grid,
                                            LiouvillianKind kind, double kT_ratio = 0.2,
                                            unsigned threads = 1) {
  if (kS_grid.empty()) throw InvalidArgument("branch_scan: empty kS grid");
  for (double k : kS_grid)
    if (!(k > 0.0) || !std::isfinite(k))
      throw InvalidArgument("branch_scan: kS grid values must be finite and > 0");
  if (!(kT_ratio >= 0.0)) throw InvalidArgument("branch_scan: kT ratio must be >= 0");

  std::vector<BranchPoint> out(kS_grid.size());
  parallel_for(kS_grid.size(), threads, [&](std::size_t i) {
    SpinSystem sys = base;
    sys.kS = kS_grid[i];
    sys.kT = kT_ratio * kS_grid[i];
    EigenmodeSet set = eigenmodes(build_liouvillian(sys, kind), {.vectors = false});
    out[i] = {sys.kS, sys.kT, std::move(set.modes)};
  });
  return out;
}

}  // namespace zenospin
