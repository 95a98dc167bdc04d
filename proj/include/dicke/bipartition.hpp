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

enum class Subsystem { A, B };

/// A symmetric state written on Sym(N_A) (x) Sym(N_B).
///
/// Pair index (ka, kb) of excitation counts is laid out a-major:
/// row = ka * (N_B + 1) + kb.
class BipartiteSymmetricState {
 public:
  BipartiteSymmetricState(int n_a, int n_b, CMatrix matrix)
      : n_a_(n_a), n_b_(n_b), m_(std::move(matrix)) {
    if (n_a_ < 1 || n_b_ < 1) throw std::invalid_argument("BipartiteSymmetricState: empty subsystem");
    const Eigen::Index d = static_cast<Eigen::Index>(n_a_ + 1) * (n_b_ + 1);
    if (m_.rows() != d || m_.cols() != d)
      throw std::invalid_argument("BipartiteSymmetricState: dimension mismatch");
  }

  int n_a() const noexcept { return n_a_; }
  int n_b() const noexcept { return n_b_; }
  int dim_a() const noexcept { return n_a_ + 1; }
  int dim_b() const noexcept { return n_b_ + 1; }
  const CMatrix& matrix() const noexcept { return m_; }
  Eigen::Index index(int ka, int kb) const { return static_cast<Eigen::Index>(ka) * (n_b_ + 1) + kb; }

 private:
  int n_a_;
  int n_b_;
  CMatrix m_;
};

namespace detail {

inline void check_split(int n, int n_a, const char* who) {
  if (n_a < 1 || n_a > n - 1)
    throw std::invalid_argument(std::string(who) + ": split n_a = " + std::to_string(n_a) +
                                " invalid for N = " + std::to_string(n));
}

/// Apply the CG isometry Sym(N) -> Sym(n_a) (x) Sym(N - n_a) to any operator.
inline CMatrix embed_operator(const CMatrix& op, int n_a, const CGTable& cg) {
  const int n = static_cast<int>(op.rows()) - 1;
  const int n_b = n - n_a;
  const int db = n_b + 1;
  const Eigen::Index d = static_cast<Eigen::Index>(n_a + 1) * db;
  CMatrix out = CMatrix::Zero(d, d);
  for (int ka = 0; ka <= n_a; ++ka)
    for (int kb = 0; kb <= n_b; ++kb) {
      const double c = cg.at(ka + kb, ka);
      if (c == 0.0) continue;
      for (int ka2 = 0; ka2 <= n_a; ++ka2)
        for (int kb2 = 0; kb2 <= n_b; ++kb2)
          out(ka * db + kb, ka2 * db + kb2) = c * cg.at(ka2 + kb2, ka2) * op(ka + kb, ka2 + kb2);
    }
  return out;
}

/// Partial trace of an operator on C^{da} (x) C^{db}.
inline CMatrix trace_out(const CMatrix& m, int da, int db, Subsystem keep) {
  if (keep == Subsystem::A) {
    CMatrix out = CMatrix::Zero(da, da);
    for (int a = 0; a < da; ++a)
      for (int a2 = 0; a2 < da; ++a2) {
        cplx s = 0.0;
        for (int b = 0; b < db; ++b) s += m(a * db + b, a2 * db + b);
        out(a, a2) = s;
      }
    return out;
  }
  CMatrix out = CMatrix::Zero(db, db);
  for (int b = 0; b < db; ++b)
    for (int b2 = 0; b2 < db; ++b2) {
      cplx s = 0.0;
      for (int a = 0; a < da; ++a) s += m(a * db + b, a * db + b2);
      out(b, b2) = s;
    }
  return out;
}

/// Partial transpose of an operator on C^{da} (x) C^{db}.
inline CMatrix transpose_part(const CMatrix& m, int da, int db, Subsystem which) {
  CMatrix out(m.rows(), m.cols());
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b)
      for (int a2 = 0; a2 < da; ++a2)
        for (int b2 = 0; b2 < db; ++b2) {
          const auto src = which == Subsystem::B ? m(a * db + b2, a2 * db + b)
                                                 : m(a2 * db + b, a * db + b2);
          out(a * db + b, a2 * db + b2) = src;
        }
  return out;
}

/// Reduce an operator on Sym(N) to Sym(n_keep) (linear; works for any matrix).
inline CMatrix reduce_symmetric_operator(const CMatrix& op, int n_keep) {
  const int n = static_cast<int>(op.rows()) - 1;
  if (n_keep == n) return op;
  check_split(n, n_keep, "reduce_symmetric_operator");
  const auto cg = cg_table(HalfInt::from_twice(n_keep), HalfInt::from_twice(n - n_keep));
  const int n_b = n - n_keep;
  const int db = n_b + 1;
  CMatrix out = CMatrix::Zero(n_keep + 1, n_keep + 1);
  for (int ka = 0; ka <= n_keep; ++ka)
    for (int ka2 = 0; ka2 <= n_keep; ++ka2) {
      cplx s = 0.0;
      for (int kb = 0; kb < db; ++kb)
        s += cg->at(ka + kb, ka) * cg->at(ka2 + kb, ka2) * op(ka + kb, ka2 + kb);
      out(ka, ka2) = s;
    }
  return out;
}

}  // namespace detail

inline BipartiteSymmetricState embed_bipartite(const DickeDensityMatrix& rho, int n_a) {
  const int n = rho.n_particles();
  detail::check_split(n, n_a, "embed_bipartite");
  const auto cg = cg_table(HalfInt::from_twice(n_a), HalfInt::from_twice(n - n_a));
  return {n_a, n - n_a, detail::embed_operator(rho.matrix(), n_a, *cg)};
}

inline CMatrix partial_transpose(const BipartiteSymmetricState& state, Subsystem which) {
  return detail::transpose_part(state.matrix(), state.dim_a(), state.dim_b(), which);
}

inline DickeDensityMatrix partial_trace(const BipartiteSymmetricState& state, Subsystem keep) {
  const int n_keep = keep == Subsystem::A ? state.n_a() : state.n_b();
  return {n_keep, detail::trace_out(state.matrix(), state.dim_a(), state.dim_b(), keep)};
}

/// Reduced state of n_r atoms (the remaining N - n_r traced out).
inline DickeDensityMatrix reduce_dicke(const DickeDensityMatrix& rho, int n_r) {
  detail::check_split(rho.n_particles(), n_r, "reduce_dicke");
  return {n_r, detail::reduce_symmetric_operator(rho.matrix(), n_r)};
}

// ---------------------------------------------------------------------------
// explicit qubit registers
//
// Qubit q of an n-qubit register is bit (n - 1 - q) of the basis index
// (Kronecker order); bit value 1 is the excited state |e>.

inline constexpr int kMaxExpandQubits = 6;

/// Isometry columns: |J,m> -> normalized symmetric superposition with J+m excitations.
inline RMatrix dicke_to_qubit_isometry(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  RMatrix v = RMatrix::Zero(dim, n + 1);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const int k = __builtin_popcountll(static_cast<unsigned long long>(s));
    v(s, k) = 1.0 / std::sqrt(linalg::binomial(n, k));
  }
  return v;
}

inline CMatrix expand_to_qubits(const DickeDensityMatrix& rho, int max_qubits = kMaxExpandQubits) {
  const int n = rho.n_particles();
  if (n > max_qubits)
    throw std::invalid_argument("expand_to_qubits: N = " + std::to_string(n) + " exceeds cap of " +
                                std::to_string(max_qubits));
  const RMatrix v = dicke_to_qubit_isometry(n);
  return v.cast<cplx>() * rho.matrix() * v.transpose().cast<cplx>();
}

inline int qubit_count(const CMatrix& m) {
  const Eigen::Index dim = m.rows();
  if (dim < 2 || m.cols() != dim || (dim & (dim - 1)) != 0)
    throw std::invalid_argument("qubit register dimension must be a power of two >= 2");
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

/// Bitmask with bit (n-1-q) set for each qubit q in `qubits`.
inline unsigned qubit_mask(int n, const std::vector<int>& qubits) {
  unsigned mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n) throw std::invalid_argument("qubit index out of range");
    mask |= 1u << (n - 1 - q);
  }
  return mask;
}

/// Partial transpose on the qubits selected by `mask` (basis-index bits).
inline CMatrix qubit_partial_transpose(const CMatrix& m, unsigned mask) {
  const Eigen::Index dim = m.rows();
  CMatrix out(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      const Eigen::Index swap = (r ^ c) & mask;
      out(r ^ swap, c ^ swap) = m(r, c);
    }
  return out;
}

/// Reduced matrix on the qubits in `keep` (ascending order is preserved).
inline CMatrix qubit_partial_trace(const CMatrix& m, const std::vector<int>& keep) {
  const int n = qubit_count(m);
  const int k = static_cast<int>(keep.size());
  const unsigned keep_mask = qubit_mask(n, keep);
  const unsigned full = (n == 32) ? ~0u : ((1u << n) - 1u);
  const unsigned trace_mask = full & ~keep_mask;
  // compact index of kept bits
  std::vector<int> keep_bits;
  for (int q : keep) keep_bits.push_back(n - 1 - q);
  auto compact = [&](unsigned s) {
    unsigned r = 0;
    for (int i = 0; i < k; ++i)
      if (s & (1u << keep_bits[i])) r |= 1u << (k - 1 - i);
    return r;
  };
  std::vector<unsigned> traced;
  for (unsigned s = 0; s <= full; ++s)
    if ((s & keep_mask) == 0) traced.push_back(s);
  std::vector<unsigned> kept;
  for (unsigned s = 0; s <= full; ++s)
    if ((s & trace_mask) == 0) kept.push_back(s);
  CMatrix out = CMatrix::Zero(Eigen::Index{1} << k, Eigen::Index{1} << k);
  for (unsigned r : kept)
    for (unsigned c : kept) {
      cplx s = 0.0;
      for (unsigned t : traced) s += m(r | t, c | t);
      out(compact(r), compact(c)) = s;
    }
  return out;
}

/// Permutation unitary sending qubit q to position perm[q].
inline RMatrix qubit_permutation(int n, const std::vector<int>& perm) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  RMatrix u = RMatrix::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    Eigen::Index t = 0;
    for (int q = 0; q < n; ++q)
      if (s & (Eigen::Index{1} << (n - 1 - q))) t |= Eigen::Index{1} << (n - 1 - perm[q]);
    u(t, s) = 1.0;
  }
  return u;
}

/// Largest deviation of m from its images under adjacent qubit swaps.
inline double permutation_asymmetry(const CMatrix& m) {
  const int n = qubit_count(m);
  double worst = 0.0;
  for (int q = 0; q + 1 < n; ++q) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::swap(perm[q], perm[q + 1]);
    const CMatrix u = qubit_permutation(n, perm).cast<cplx>();
    worst = std::max(worst, (u * m * u.adjoint() - m).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace dicke
