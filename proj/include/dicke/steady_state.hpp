#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/linalg.hpp"
#include "dicke/spin.hpp"
#include "dicke/state.hpp"

namespace dicke {

/// Norm of the master-equation right-hand side
///   -i[H, rho] + Gamma (J- rho J+ - {J+J-, rho}/2),   H = rabi (J+ + J-).
inline double lindblad_residual(const DickeDensityMatrix& rho, const ModelParams& params) {
  params.validate();
  if (rho.n_particles() != params.n_particles)
    throw std::invalid_argument("lindblad_residual: state has N = " +
                                std::to_string(rho.n_particles()) + ", params have N = " +
                                std::to_string(params.n_particles));
  const auto ops = build_spin_operators(params.n_particles);
  const CMatrix& r = rho.matrix();
  const CMatrix h = params.rabi() * (ops.j_plus + ops.j_minus);
  const CMatrix jpjm = ops.j_plus * ops.j_minus;
  const CMatrix rhs = cplx(0.0, -1.0) * (h * r - r * h) +
                      params.gamma() * (ops.j_minus * r * ops.j_plus - 0.5 * (jpjm * r + r * jpjm));
  return rhs.norm();
}

/// Closed-form steady state of the driven collective decay model.
///
/// rho is proportional to X X^dagger with X = sum_l (J-/g)^l. With g purely
/// imaginary, X_ik = i^{k-i} r_ik with r_ik >= 0, so
///   rho_ij = i^{j-i} sum_{k >= max(i,j)} r_ik r_jk
/// and every sum is over positive terms. Each element is accumulated in log
/// space and normalized at the end, which keeps the factorially growing
/// ladder products finite for large N.
inline DickeDensityMatrix steady_state(const ModelParams& params) {
  params.validate();
  const int n = params.n_particles;
  const int d = n + 1;
  if (params.omega == 0.0) return DickeDensityMatrix::ground(n);

  // cum[k] = log of the J- amplitude product from index k down to index 0.
  std::vector<double> cum(d, 0.0);
  for (int k = 1; k < d; ++k) cum[k] = cum[k - 1] + std::log(lowering_amplitude(n, k));
  const double log_g = std::log(std::abs(params.g()));
  auto log_r = [&](int i, int k) { return cum[k] - cum[i] - (k - i) * log_g; };

  RMatrix log_rho(d, d);
  std::vector<double> terms;
  terms.reserve(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      terms.clear();
      for (int k = j; k < d; ++k) terms.push_back(log_r(i, k) + log_r(j, k));
      log_rho(i, j) = log_rho(j, i) = linalg::log_sum_exp(terms);
    }
  }
  std::vector<double> diag(d);
  for (int i = 0; i < d; ++i) diag[i] = log_rho(i, i);
  const double log_trace = linalg::log_sum_exp(diag);

  static constexpr cplx kPowersOfI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  CMatrix rho(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      rho(i, j) = std::exp(log_rho(i, j) - log_trace) * kPowersOfI[((j - i) % 4 + 4) % 4];

  DickeDensityMatrix out(n, std::move(rho));
  const double residual = lindblad_residual(out, params);
  if (!(residual <= 1e-9 * out.matrix().norm()))
    throw NumericalError("steady_state: residual " + std::to_string(residual) +
                         " exceeds 1e-9 relative target at N = " + std::to_string(n) +
                         ", Omega = " + std::to_string(params.omega));
  return out;
}

/// Superoperator of the master equation acting on column-major vec(rho).
inline CMatrix liouvillian(const ModelParams& params) {
  params.validate();
  const auto ops = build_spin_operators(params.n_particles);
  const int d = params.n_particles + 1;
  const CMatrix id = CMatrix::Identity(d, d);
  const CMatrix h = params.rabi() * (ops.j_plus + ops.j_minus);
  const CMatrix jpjm = ops.j_plus * ops.j_minus;
  using linalg::kron;
  // vec(A X B) = (B^T kron A) vec(X)
  CMatrix l = cplx(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
  l += params.gamma() * (kron(ops.j_plus.transpose(), ops.j_minus) - 0.5 * kron(id, jpjm) -
                         0.5 * kron(jpjm.transpose(), id));
  return l;
}

/// Steady state from the kernel of the dense Liouvillian (independent check of
/// the closed form).
inline DickeDensityMatrix steady_state_nullspace(const ModelParams& params) {
  params.validate();
  const int n = params.n_particles;
  if (n > 32) throw std::invalid_argument("steady_state_nullspace: N must be <= 32");
  const int d = n + 1;
  const CMatrix l = liouvillian(params);
  Eigen::BDCSVD<CMatrix> svd(l, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, sv(0));
  int kernel_dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= cutoff) ++kernel_dim;
  if (kernel_dim != 1)
    throw NumericalError("steady_state_nullspace: kernel dimension " + std::to_string(kernel_dim) +
                         " (expected 1)");
  const CVector v = svd.matrixV().col(sv.size() - 1);
  CMatrix rho = Eigen::Map<const CMatrix>(v.data(), d, d);
  rho = linalg::hermitize(rho);
  rho /= rho.trace();
  return {n, rho};
}

struct Observables {
  double jx;
  double jy;
  double jz;
  double purity;
};

inline Observables observables(const DickeDensityMatrix& rho) {
  const auto ops = build_spin_operators(rho.n_particles());
  const CMatrix& r = rho.matrix();
  auto expect = [&](const CMatrix& op, const char* name) {
    const cplx v = (r * op).trace();
    if (std::abs(v.imag()) >= 1e-10)
      throw NumericalError(std::string("observables: <") + name + "> has imaginary part " +
                           std::to_string(v.imag()));
    return v.real();
  };
  return {expect(ops.j_x, "Jx"), expect(ops.j_y, "Jy"), expect(ops.j_z, "Jz"),
          (r * r).trace().real()};
}

}  // namespace dicke
