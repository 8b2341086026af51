#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include "zenospin/error.hpp"
#include "zenospin/linalg.hpp"

namespace zenospin {

/// Angular-momentum quantum number, stored as twice its value so that
/// half-integers are exact.
class Spin {
 public:
  constexpr Spin() = default;

  static Spin from_twice(int twice) {
    if (twice < 0) throw InvalidArgument("invalid spin: negative quantum number");
    Spin s;
    s.twice_ = twice;
    return s;
  }

  /// Accepts 0, 0.5, 1, 1.5, ... exactly (up to 1e-12).
  static Spin from_double(double value) {
    const double twice = 2.0 * value;
    if (!std::isfinite(value) || value < 0.0 || std::abs(twice - std::round(twice)) > 1e-12)
      throw InvalidArgument("invalid spin " + std::to_string(value) +
                            ": must be a non-negative half-integer");
    return from_twice(static_cast<int>(std::lround(twice)));
  }

  /// Parses "1/2", "3/2", "1", "0.5".
  static Spin parse(std::string_view text) {
    const auto bad = [&] {
      return InvalidArgument("invalid spin '" + std::string(text) + "'");
    };
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      int num = 0;
      int den = 0;
      auto num_text = text.substr(0, slash);
      auto den_text = text.substr(slash + 1);
      auto r1 = std::from_chars(num_text.data(), num_text.data() + num_text.size(), num);
      auto r2 = std::from_chars(den_text.data(), den_text.data() + den_text.size(), den);
      if (r1.ec != std::errc{} || r1.ptr != num_text.data() + num_text.size() ||
          r2.ec != std::errc{} || r2.ptr != den_text.data() + den_text.size())
        throw bad();
      if (den == 2) return from_twice(num);
      if (den == 1) return from_twice(2 * num);
      throw bad();
    }
    double v = 0.0;
    auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) throw bad();
    return from_double(v);
  }

  constexpr int twice() const noexcept { return twice_; }
  constexpr double value() const noexcept { return 0.5 * twice_; }
  constexpr std::size_t dim() const noexcept { return static_cast<std::size_t>(twice_) + 1; }

  std::string str() const {
    return twice_ % 2 == 0 ? std::to_string(twice_ / 2) : std::to_string(twice_) + "/2";
  }

  friend constexpr bool operator==(Spin, Spin) = default;

 private:
  int twice_ = 0;
};

inline const Spin kSpinHalf = Spin::from_twice(1);

struct SpinOperators {
  Matrix x;
  Matrix y;
  Matrix z;
};

/// Jx, Jy, Jz in the |J, m> basis ordered m = J, J-1, ..., -J.
inline SpinOperators spin_operators(Spin j) {
  const auto d = static_cast<Eigen::Index>(j.dim());
  const double jv = j.value();
  Matrix raise = Matrix::Zero(d, d);
  Matrix jz = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double m = jv - static_cast<double>(k);
    jz(k, k) = m;
    // <m+1|J+|m> sits above the diagonal because m descends with the index.
    if (k > 0) raise(k - 1, k) = std::sqrt(jv * (jv + 1.0) - m * (m + 1.0));
  }
  const Matrix lower = raise.adjoint();
  return {(raise + lower) * 0.5, (raise - lower) * cplx(0.0, -0.5), jz};
}

/// Tensor factors, in the fixed order used for every composite operator.
enum class Factor : std::size_t { electron1 = 0, electron2 = 1, nucleus1 = 2, nucleus2 = 3 };

/// electron-1 (x) electron-2 (x) nucleus-1 (x) nucleus-2.
class CompositeSpace {
 public:
  CompositeSpace(Spin nucleus1, Spin nucleus2) : nuclei_{nucleus1, nucleus2} {}

  Spin nucleus(int which) const {
    if (which != 1 && which != 2) throw InvalidArgument("nucleus index must be 1 or 2");
    return nuclei_[static_cast<std::size_t>(which - 1)];
  }

  std::size_t factor_dim(Factor f) const {
    switch (f) {
      case Factor::electron1:
      case Factor::electron2:
        return 2;
      case Factor::nucleus1:
        return nuclei_[0].dim();
      case Factor::nucleus2:
        return nuclei_[1].dim();
    }
    return 0;
  }

  std::array<std::size_t, 4> factor_dims() const {
    return {2, 2, nuclei_[0].dim(), nuclei_[1].dim()};
  }

  /// N = 4 (2 I1 + 1)(2 I2 + 1).
  std::size_t dim() const { return 4 * nuclei_[0].dim() * nuclei_[1].dim(); }
  std::size_t nuclear_dim() const { return nuclei_[0].dim() * nuclei_[1].dim(); }

 private:
  std::array<Spin, 2> nuclei_;
};

/// 1 (x) ... (x) op (x) ... (x) 1 with op in the given slot.
inline Matrix embed(const Matrix& op, Factor slot, const CompositeSpace& space) {
  const auto dims = space.factor_dims();
  const auto s = static_cast<std::size_t>(slot);
  if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != dims[s])
    throw InvalidArgument("embed: operator of dim " + std::to_string(op.rows()) +
                          " does not fit factor of dim " + std::to_string(dims[s]));
  std::size_t left = 1;
  std::size_t right = 1;
  for (std::size_t k = 0; k < s; ++k) left *= dims[k];
  for (std::size_t k = s + 1; k < dims.size(); ++k) right *= dims[k];
  const auto l = static_cast<Eigen::Index>(left);
  const auto r = static_cast<Eigen::Index>(right);
  return kron(kron(Matrix::Identity(l, l), op), Matrix::Identity(r, r));
}

/// Electron singlet and triplet projectors, identity on the nuclei.
struct ElectronProjectors {
  Matrix singlet;
  Matrix triplet;
};

inline ElectronProjectors electron_projectors(const CompositeSpace& space) {
  const SpinOperators s = spin_operators(kSpinHalf);
  const Matrix i2 = Matrix::Identity(2, 2);
  // Q_S = 1/4 - s1.s2 on the two electrons.
  Matrix qs_e = 0.25 * Matrix::Identity(4, 4) - kron(s.x, s.x) - kron(s.y, s.y) - kron(s.z, s.z);
  const auto nd = static_cast<Eigen::Index>(space.nuclear_dim());
  ElectronProjectors out;
  out.singlet = kron(qs_e, Matrix::Identity(nd, nd));
  const auto n = static_cast<Eigen::Index>(space.dim());
  out.triplet = Matrix::Identity(n, n) - out.singlet;
  return out;
}

/// Total z-projection F_z = s1z + s2z + I1z + I2z; diagonal in the product basis.
inline RealVector total_fz(const CompositeSpace& space) {
  const auto dims = space.factor_dims();
  const std::array<double, 4> top{0.5, 0.5, space.nucleus(1).value(), space.nucleus(2).value()};
  RealVector fz(static_cast<Eigen::Index>(space.dim()));
  Eigen::Index idx = 0;
  for (std::size_t a = 0; a < dims[0]; ++a)
    for (std::size_t b = 0; b < dims[1]; ++b)
      for (std::size_t c = 0; c < dims[2]; ++c)
        for (std::size_t d = 0; d < dims[3]; ++d)
          fz(idx++) = (top[0] - a) + (top[1] - b) + (top[2] - c) + (top[3] - d);
  return fz;
}

}  // namespace zenospin
