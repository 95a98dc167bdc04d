#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dicke/clebsch_gordan.hpp"
#include "dicke/linalg.hpp"
#include "dicke/state.hpp"

namespace dicke {

inline constexpr double kDiagonalityTol = 1e-10;
inline constexpr double kHankelPsdTol = -1e-10;

/// Weights of rho = sum_k chi_k |D_k><D_k| over unnormalized Dicke states
/// |D_k> (sum of all strings with k ground-state atoms, norm^2 = C(N, k)).
struct DiagonalSymmetricCoeffs {
  int n_particles = 0;
  std::vector<double> chi;

  /// Density matrix in the ascending-m basis (index N - k carries chi_k C(N, k)).
  DickeDensityMatrix to_density_matrix() const {
    CMatrix m = CMatrix::Zero(n_particles + 1, n_particles + 1);
    for (int k = 0; k <= n_particles; ++k) m(n_particles - k, n_particles - k) = chi[k] * linalg::binomial(n_particles, k);
    return {n_particles, m};
  }
};

inline double off_diagonal_mass(const CMatrix& m) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

inline DiagonalSymmetricCoeffs diagonal_symmetric_chi(const DickeDensityMatrix& rho, double tol = kDiagonalityTol) {
  const double off = off_diagonal_mass(rho.matrix());
  if (off > tol)
    throw std::invalid_argument("diagonal_symmetric_chi: state is not diagonal (off-diagonal mass " +
                                std::to_string(off) + " > " + std::to_string(tol) + ")");
  const int n = rho.n_particles();
  DiagonalSymmetricCoeffs c{n, std::vector<double>(n + 1)};
  for (int k = 0; k <= n; ++k) c.chi[k] = rho(n - k, n - k).real() / linalg::binomial(n, k);
  return c;
}

/// Weights of the large-drive limit, the uniform mixture of all Dicke levels.
inline DiagonalSymmetricCoeffs uniform_mixture_chi(int n) {
  if (n < 1) throw std::invalid_argument("uniform_mixture_chi: N must be >= 1");
  DiagonalSymmetricCoeffs c{n, std::vector<double>(n + 1)};
  for (int k = 0; k <= n; ++k) c.chi[k] = std::exp(linalg::log_factorial(k) + linalg::log_factorial(n - k) - linalg::log_factorial(n + 1));
  return c;
}

/// (H0)_ij = chi_{i+j}, 0 <= i,j <= floor(N/2); (H1)_ij = chi_{i+j+1}, 0 <= i,j <= floor((N-1)/2).
inline std::pair<RMatrix, RMatrix> hankel_matrices(const DiagonalSymmetricCoeffs& c) {
  const int n = c.n_particles;
  if (static_cast<int>(c.chi.size()) != n + 1) throw std::invalid_argument("hankel_matrices: need N + 1 weights");
  const int d0 = n / 2 + 1;
  const int d1 = (n - 1) / 2 + 1;
  RMatrix h0(d0, d0), h1(d1, d1);
  for (int i = 0; i < d0; ++i)
    for (int j = 0; j < d0; ++j) h0(i, j) = c.chi[i + j];
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j) h1(i, j) = c.chi[i + j + 1];
  return {h0, h1};
}

struct HankelVerdict {
  bool separable;
  double min_eig_h0;
  double min_eig_h1;
};

inline HankelVerdict hankel_test(const DiagonalSymmetricCoeffs& c) {
  const auto [h0, h1] = hankel_matrices(c);
  const double e0 = linalg::eigenvalues_symmetric(h0).minCoeff();
  const double e1 = linalg::eigenvalues_symmetric(h1).minCoeff();
  return {e0 >= kHankelPsdTol && e1 >= kHankelPsdTol, e0, e1};
}

/// Exact for mixtures of Dicke states: separable iff both Hankel matrices are PSD.
inline bool is_separable_diagonal_symmetric(const DickeDensityMatrix& rho, double tol = kDiagonalityTol) {
  return hankel_test(diagonal_symmetric_chi(rho, tol)).separable;
}

/// Moment matrix int_0^1 x^{i+j+delta} (1-x)^{2J-i-j-delta} dx = (i+j+delta)!(2J-i-j-delta)!/(2J+1)!
/// of the functions x^{delta/2} (x/(1-x))^k under the weight (1-x)^{2J-delta}; with
/// the large-drive weights it reproduces H_delta entry by entry.
inline RMatrix gram_oracle(HalfInt j, int delta) {
  if (j.twice() < 1) throw std::invalid_argument("gram_oracle: j must be >= 1/2");
  if (delta != 0 && delta != 1) throw std::invalid_argument("gram_oracle: delta must be 0 or 1");
  const int n = j.twice();
  const int d = (n - delta) / 2 + 1;
  RMatrix g(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const int k = a + b + delta;
      g(a, b) = std::exp(std::lgamma(k + 1.0) + std::lgamma(n - k + 1.0) - std::lgamma(n + 2.0));
    }
  return g;
}

}  // namespace dicke
