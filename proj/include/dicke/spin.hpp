#pragma once

#include <cmath>
#include <stdexcept>

#include "dicke/linalg.hpp"

namespace dicke {

/// Collective spin operators of N atoms in the ascending-m Dicke basis.
struct SpinOperators {
  int n_particles;
  CMatrix j_plus;
  CMatrix j_minus;
  CMatrix j_x;
  CMatrix j_y;
  CMatrix j_z;
};

/// Amplitude of J+ taking index i (m = i - N/2) to i + 1.
inline double raising_amplitude(int n, int i) {
  return std::sqrt(static_cast<double>(n - i) * static_cast<double>(i + 1));
}

/// Amplitude of J- taking index i to i - 1.
inline double lowering_amplitude(int n, int i) {
  return std::sqrt(static_cast<double>(i) * static_cast<double>(n - i + 1));
}

inline SpinOperators build_spin_operators(int n) {
  if (n < 1) throw std::invalid_argument("build_spin_operators: n must be >= 1");
  const int d = n + 1;
  SpinOperators ops{n, CMatrix::Zero(d, d), {}, {}, {}, CMatrix::Zero(d, d)};
  for (int i = 0; i + 1 < d; ++i) ops.j_plus(i + 1, i) = raising_amplitude(n, i);
  ops.j_minus = ops.j_plus.adjoint();
  ops.j_x = 0.5 * (ops.j_plus + ops.j_minus);
  ops.j_y = (ops.j_plus - ops.j_minus) / cplx(0.0, 2.0);
  for (int i = 0; i < d; ++i) ops.j_z(i, i) = i - 0.5 * n;
  return ops;
}

/// Model parameters at fixed decay rate Gamma = 1.
///
/// The drive enters as H = rabi() * (J+ + J-) with rabi() = Omega * N / 2, i.e.
/// H = Omega * N * Jx. This places the dissipative transition at Omega = 1/2
/// for every N and gives 2<Jz>/N -> -sqrt(1 - 4 Omega^2) in the pure phase.
struct ModelParams {
  int n_particles = 1;
  double omega = 0.0;

  static constexpr double kGamma = 1.0;

  double gamma() const noexcept { return kGamma; }
  double rabi() const noexcept { return omega * kGamma * n_particles / 2.0; }
  /// Parameter of the closed-form steady state sum over (J-/g)^l (J+/g*)^l'.
  /// Equal to -2i * rabi / Gamma, the value consistent with the master equation.
  cplx g() const noexcept { return cplx(0.0, -2.0 * rabi() / kGamma); }

  void validate() const {
    if (n_particles < 1) throw std::invalid_argument("ModelParams: n_particles must be >= 1");
    if (!(omega >= 0.0) || !std::isfinite(omega))
      throw std::invalid_argument("ModelParams: omega must be finite and non-negative");
  }
};

}  // namespace dicke
