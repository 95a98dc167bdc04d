#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "dicke/linalg.hpp"

namespace dicke {

/// Density matrix on the (N+1)-dimensional symmetric subspace of N two-level atoms.
///
/// Rows and columns are ordered by ascending magnetic number: index i holds
/// |J, m> with m = i - N/2, so index 0 is the all-ground state |J,-J>. Every
/// module in the library shares this ordering.
class DickeDensityMatrix {
 public:
  static constexpr double kHermiticityTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kPsdFloor = -1e-10;

  DickeDensityMatrix(int n_particles, CMatrix matrix)
      : n_(n_particles), rho_(std::move(matrix)) {
    if (n_ < 1) throw std::invalid_argument("DickeDensityMatrix: n_particles must be >= 1");
    if (rho_.rows() != n_ + 1 || rho_.cols() != n_ + 1)
      throw std::invalid_argument("DickeDensityMatrix: matrix must be (N+1)x(N+1) for N = " +
                                  std::to_string(n_));
  }

  int n_particles() const noexcept { return n_; }
  int dim() const noexcept { return n_ + 1; }
  const CMatrix& matrix() const noexcept { return rho_; }
  cplx operator()(int i, int j) const { return rho_(i, j); }

  /// |J,m><J,m| for m = index - N/2.
  static DickeDensityMatrix dicke_projector(int n, int index) {
    if (index < 0 || index > n) throw std::invalid_argument("dicke_projector: index out of range");
    CMatrix m = CMatrix::Zero(n + 1, n + 1);
    m(index, index) = 1.0;
    return {n, std::move(m)};
  }

  static DickeDensityMatrix ground(int n) { return dicke_projector(n, 0); }

  /// Equal-weight mixture of all N+1 Dicke levels.
  static DickeDensityMatrix uniform_mixture(int n) {
    CMatrix m = CMatrix::Identity(n + 1, n + 1) / static_cast<double>(n + 1);
    return {n, std::move(m)};
  }

  struct Diagnostics {
    double hermiticity_defect;
    double trace_error;
    double min_eigenvalue;
    bool ok() const {
      return hermiticity_defect <= kHermiticityTol && trace_error <= kTraceTol &&
             min_eigenvalue >= kPsdFloor;
    }
  };

  Diagnostics diagnose() const {
    return {linalg::hermiticity_defect(rho_), std::abs(rho_.trace() - cplx(1.0)),
            linalg::min_eigenvalue(rho_)};
  }

 private:
  int n_;
  CMatrix rho_;
};

}  // namespace dicke
