#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dicke {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Raised when a computation cannot reach its accuracy target.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace linalg {

inline double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

inline CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

/// Ascending eigenvalues of the Hermitian part of `m`.
inline RVector eigenvalues_hermitian(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline RVector eigenvalues_symmetric(const RMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double min_eigenvalue(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return eigenvalues_hermitian(m).minCoeff();
}

inline double min_eigenvalue(const RMatrix& m) {
  if (m.size() == 0) return 0.0;
  return eigenvalues_symmetric(m).minCoeff();
}

/// Half the trace norm of a - b.
inline double trace_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  return 0.5 * eigenvalues_hermitian(a - b).cwiseAbs().sum();
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline double log_sum_exp(std::span<const double> xs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : xs) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// Exact in double precision while the result stays below 2^53.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  if (n > 60) return std::exp(log_binomial(n, k));
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace linalg
}  // namespace dicke
