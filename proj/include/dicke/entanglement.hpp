#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/bipartition.hpp"
#include "dicke/linalg.hpp"
#include "dicke/sdp.hpp"
#include "dicke/state.hpp"

namespace dicke {

inline constexpr double kNegativeEigenvalueThreshold = -1e-12;

struct NegativityReport {
  int n = 0;    // size of the system the state was taken from
  int n_a = 0;
  int n_b = 0;
  int n_r = 0;  // size of the evaluated (possibly reduced) state
  double omega = std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
};

inline double negative_part(const RVector& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues(i) < kNegativeEigenvalueThreshold) s += eigenvalues(i);
  return s == 0.0 ? 0.0 : -s;
}

inline NegativityReport negativity(const DickeDensityMatrix& rho, int n_a) {
  const int n = rho.n_particles();
  if (n_a < 1 || n_a > n / 2)
    throw std::invalid_argument("negativity: n_a = " + std::to_string(n_a) + " outside [1, N/2] for N = " +
                                std::to_string(n));
  const auto state = embed_bipartite(rho, n_a);
  NegativityReport r;
  r.n = r.n_r = n;
  r.n_a = n_a;
  r.n_b = n - n_a;
  r.value = negative_part(linalg::eigenvalues_hermitian(partial_transpose(state, Subsystem::B)));
  return r;
}

/// One report per split size; by permutation symmetry the sizes label all bipartitions.
inline std::vector<NegativityReport> negativity_all_bipartitions(const DickeDensityMatrix& rho) {
  const int n = rho.n_particles();
  if (n < 2) throw std::invalid_argument("negativity_all_bipartitions: N must be >= 2");
  std::vector<NegativityReport> out;
  for (int n_a = 1; n_a <= n / 2; ++n_a) out.push_back(negativity(rho, n_a));
  return out;
}

inline bool is_ppt(const DickeDensityMatrix& rho, int n_a) {
  const auto state = embed_bipartite(rho, n_a);
  return linalg::min_eigenvalue(partial_transpose(state, Subsystem::B)) >= kNegativeEigenvalueThreshold;
}

/// Wootters concurrence of a two-qubit density matrix.
inline double concurrence_two_qubit(const CMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw std::invalid_argument("concurrence: expected a 4x4 matrix");
  CMatrix yy = CMatrix::Zero(4, 4);
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;
  const CMatrix flipped = yy * rho.conjugate() * yy;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(linalg::hermitize(rho));
  RVector ev = es.eigenvalues().cwiseMax(0.0);
  const CMatrix sqrt_rho = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  RVector lam = linalg::eigenvalues_hermitian(sqrt_rho * flipped * sqrt_rho).cwiseMax(0.0).cwiseSqrt();
  std::sort(lam.data(), lam.data() + 4, std::greater<>());
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

inline double concurrence_pairwise(const DickeDensityMatrix& rho) {
  if (rho.n_particles() < 2) throw std::invalid_argument("concurrence_pairwise: N must be >= 2");
  const auto pair = rho.n_particles() == 2 ? rho : reduce_dicke(rho, 2);
  return concurrence_two_qubit(expand_to_qubits(pair));
}

// ---------------------------------------------------------------------------
// genuine multiparticle negativity

enum class WitnessNormalization {
  Bounded,    // 0 <= P_S, Q_S <= I
  UnitTrace,  // Tr W = 1, P_S, Q_S >= 0
};

enum class SymmetryMode { Auto, Never };

struct GmnOptions {
  WitnessNormalization normalization = WitnessNormalization::Bounded;
  SymmetryMode symmetry = SymmetryMode::Auto;
  double symmetry_tol = 1e-12;
  sdp::SolverOptions solver{};
};

inline constexpr int kMaxGmnQubits = 5;
inline constexpr int kMaxGmnQubitsUnreduced = 4;

/// W = P_S + Q_S^{T_S} for the bipartition whose side S is `mask` (basis-index bits).
struct WitnessPart {
  unsigned mask;
  CMatrix p;
  CMatrix q;
};

struct WitnessResult {
  double gmn = 0.0;
  double objective = 0.0;  // Tr(rho W)
  CMatrix witness;
  std::vector<WitnessPart> parts;  // one per bipartition solved for
  bool symmetric = false;           // parts cover one bipartition per size; others follow by permutation
  double duality_gap = 0.0;
  double complementary_slackness = 0.0;
  int iterations = 0;
  sdp::Status status = sdp::Status::MaxIter;
  WitnessNormalization normalization = WitnessNormalization::Bounded;
};

namespace detail {

/// Real basis of Hermitian matrices on n qubits that are invariant under
/// permuting qubits within each group. Each group contributes the counts of
/// (row bit, column bit) pairs to the orbit label of an entry.
inline std::vector<sdp::SparseHerm> invariant_hermitian_basis(int n, const std::vector<std::vector<int>>& groups) {
  const int dim = 1 << n;
  auto key_of = [&](int r, int c, bool transpose) {
    std::uint64_t key = 0;
    for (const auto& g : groups) {
      int cnt[4] = {0, 0, 0, 0};
      for (int q : g) {
        const int bit = n - 1 - q;
        const int br = (r >> bit) & 1, bc = (c >> bit) & 1;
        ++cnt[transpose ? (bc << 1 | br) : (br << 1 | bc)];
      }
      for (int v : cnt) key = key * 8 + static_cast<std::uint64_t>(v);
    }
    return key;
  };
  std::map<std::uint64_t, int> id;
  std::vector<std::vector<std::pair<int, int>>> members;
  std::vector<std::uint64_t> keys;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      const auto k = key_of(r, c, false);
      auto [it, fresh] = id.emplace(k, static_cast<int>(members.size()));
      if (fresh) {
        members.emplace_back();
        keys.push_back(k);
      }
      members[it->second].emplace_back(r, c);
    }
  std::vector<sdp::SparseHerm> basis;
  for (std::size_t o = 0; o < members.size(); ++o) {
    const auto& [r0, c0] = members[o].front();
    const int partner = id.at(key_of(r0, c0, true));
    if (partner == static_cast<int>(o)) {
      sdp::SparseHerm e;
      for (auto [r, c] : members[o]) e.push_back({r, c, cplx(1.0)});
      basis.push_back(std::move(e));
    } else if (partner > static_cast<int>(o)) {
      sdp::SparseHerm re, im;
      for (auto [r, c] : members[o]) {
        re.push_back({r, c, cplx(1.0)});
        re.push_back({c, r, cplx(1.0)});
        im.push_back({r, c, cplx(0.0, 1.0)});
        im.push_back({c, r, cplx(0.0, -1.0)});
      }
      basis.push_back(std::move(re));
      basis.push_back(std::move(im));
    }
  }
  return basis;
}

inline sdp::SparseHerm sparse_partial_transpose(const sdp::SparseHerm& s, unsigned mask) {
  sdp::SparseHerm out;
  out.reserve(s.size());
  for (const auto& e : s) {
    const unsigned swap = (static_cast<unsigned>(e.row) ^ static_cast<unsigned>(e.col)) & mask;
    out.push_back({static_cast<int>(e.row ^ swap), static_cast<int>(e.col ^ swap), e.value});
  }
  return out;
}

inline sdp::SparseHerm scaled(const sdp::SparseHerm& s, double f) {
  sdp::SparseHerm out = s;
  for (auto& e : out) e.value *= f;
  return out;
}

inline std::vector<int> range(int lo, int hi) {
  std::vector<int> v;
  for (int i = lo; i < hi; ++i) v.push_back(i);
  return v;
}

/// Permutation of qubits sending the first |from| entries of `from` onto `to` and the rest in order.
inline std::vector<int> side_permutation(int n, unsigned rep_mask, unsigned target_mask) {
  std::vector<int> src_in, src_out, dst_in, dst_out;
  for (int q = 0; q < n; ++q) {
    const unsigned bit = 1u << (n - 1 - q);
    ((rep_mask & bit) ? src_in : src_out).push_back(q);
    ((target_mask & bit) ? dst_in : dst_out).push_back(q);
  }
  std::vector<int> perm(n);
  for (std::size_t i = 0; i < src_in.size(); ++i) perm[src_in[i]] = dst_in[i];
  for (std::size_t i = 0; i < src_out.size(); ++i) perm[src_out[i]] = dst_out[i];
  return perm;
}

/// Masks of one side of every bipartition (the side holding qubit 0).
inline std::vector<unsigned> all_bipartition_masks(int n) {
  std::vector<unsigned> out;
  const unsigned top = 1u << (n - 1);
  for (unsigned rest = 0; rest < top; ++rest) {
    const unsigned m = top | rest;
    if (m != (1u << n) - 1u) out.push_back(m);
  }
  return out;
}

}  // namespace detail

/// Genuine multiparticle negativity from the fully decomposable witness program
///   minimize Tr(rho W)  s.t.  W = P_S + Q_S^{T_S} for every bipartition S,
/// with P_S, Q_S in the chosen normalization. Permutation-invariant inputs are
/// solved over invariant W and one bipartition per size, which is exact for
/// such states.
inline WitnessResult gmn(const CMatrix& rho, const GmnOptions& opts = {}) {
  const int n = qubit_count(rho);
  if (n < 2) throw std::invalid_argument("gmn: need at least 2 qubits");
  if (n > kMaxGmnQubits) throw std::invalid_argument("gmn: at most 5 qubits supported");
  if (linalg::hermiticity_defect(rho) > 1e-12) throw std::invalid_argument("gmn: input is not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0)) > 1e-10) throw std::invalid_argument("gmn: input trace is not 1");
  if (linalg::min_eigenvalue(rho) < -1e-10) throw std::invalid_argument("gmn: input is not positive semidefinite");

  const bool symmetric =
      opts.symmetry == SymmetryMode::Auto && permutation_asymmetry(rho) <= opts.symmetry_tol;
  if (!symmetric && n > kMaxGmnQubitsUnreduced)
    throw std::invalid_argument("gmn: non-symmetric input limited to 4 qubits");
  const int dim = 1 << n;
  const bool bounded = opts.normalization == WitnessNormalization::Bounded;

  std::vector<std::vector<int>> singletons;
  for (int q = 0; q < n; ++q) singletons.push_back({q});
  const auto w_basis =
      detail::invariant_hermitian_basis(n, symmetric ? std::vector<std::vector<int>>{detail::range(0, n)} : singletons);

  std::vector<unsigned> masks;
  if (symmetric) {
    for (int k = 1; k <= n / 2; ++k) masks.push_back(qubit_mask(n, detail::range(0, k)));
  } else {
    masks = detail::all_bipartition_masks(n);
  }

  // LMI data: F_k(y) = F0_k + sum_i y_i F_ik >= 0, minimize c^T y (+ offset)
  const CMatrix id = CMatrix::Identity(dim, dim);
  const auto id_sparse = sdp::sparse_from_dense(id);
  std::vector<sdp::SparseHerm> w_elems = w_basis;
  CMatrix w_constant = CMatrix::Zero(dim, dim);
  if (!bounded) {
    // W = I/dim + traceless part
    for (auto& e : w_elems) {
      cplx tr = 0.0;
      for (const auto& x : e)
        if (x.row == x.col) tr += x.value;
      if (tr != 0.0)
        for (int i = 0; i < dim; ++i) e.push_back({i, i, -tr / static_cast<double>(dim)});
    }
    w_constant = id / static_cast<double>(dim);
  }

  sdp::SDPProblem prob;
  const int nw = static_cast<int>(w_elems.size());
  std::vector<double> cost;
  for (const auto& e : w_elems) {
    cost.push_back((rho * sdp::dense_from_sparse(e, dim)).trace().real());
    prob.constraints.emplace_back();
  }
  struct BlockIds {
    int p, p_up, q, q_up;
    int first_var, num_vars;
  };
  std::vector<BlockIds> ids;
  for (unsigned mask : masks) {
    BlockIds b{};
    const std::string tag = std::to_string(mask);
    b.p = prob.add_block("P" + tag, dim);
    b.q = prob.add_block("Q" + tag, dim);
    b.p_up = bounded ? prob.add_block("I-P" + tag, dim) : -1;
    b.q_up = bounded ? prob.add_block("I-Q" + tag, dim) : -1;
    if (bounded) {
      prob.objective[b.p_up] = id;
      prob.objective[b.q_up] = id;
    }
    prob.objective[b.q] = qubit_partial_transpose(w_constant, mask);

    std::vector<std::vector<int>> groups;
    if (symmetric) {
      const int k = __builtin_popcount(mask);
      groups = {detail::range(0, k), detail::range(k, n)};
    } else {
      groups = singletons;
    }
    const auto p_basis = detail::invariant_hermitian_basis(n, groups);
    b.first_var = static_cast<int>(prob.constraints.size());
    b.num_vars = static_cast<int>(p_basis.size());
    for (const auto& e : p_basis) {
      sdp::SDPProblem::Constraint con;  // A = -F for each block the variable enters
      const auto et = detail::sparse_partial_transpose(e, mask);
      con.terms.push_back({b.p, detail::scaled(e, -1.0)});
      con.terms.push_back({b.q, et});
      if (bounded) {
        con.terms.push_back({b.p_up, e});
        con.terms.push_back({b.q_up, detail::scaled(et, -1.0)});
      }
      con.rhs = 0.0;
      prob.constraints.push_back(std::move(con));
      cost.push_back(0.0);
    }
    for (int a = 0; a < nw; ++a) {
      const auto bt = detail::sparse_partial_transpose(w_elems[a], mask);
      prob.constraints[a].terms.push_back({b.q, detail::scaled(bt, -1.0)});
      if (bounded) prob.constraints[a].terms.push_back({b.q_up, bt});
    }
    ids.push_back(b);
  }
  for (std::size_t i = 0; i < cost.size(); ++i) prob.constraints[i].rhs = -cost[i];

  const auto sol = sdp::solve(prob, opts.solver);

  WitnessResult res;
  res.symmetric = symmetric;
  res.normalization = opts.normalization;
  res.status = sol.status;
  res.iterations = sol.iterations;
  res.duality_gap = sol.duality_gap;
  res.complementary_slackness = sol.complementary_slackness;
  res.witness = w_constant;
  for (int a = 0; a < nw; ++a)
    for (const auto& e : w_elems[a]) res.witness(e.row, e.col) += sol.y(a) * e.value;
  res.witness = linalg::hermitize(res.witness);
  res.objective = (rho * res.witness).trace().real();
  res.gmn = std::max(0.0, -res.objective);
  for (std::size_t s = 0; s < masks.size(); ++s)
    res.parts.push_back({masks[s], sol.z[ids[s].p], sol.z[ids[s].q]});
  return res;
}

struct WitnessValidity {
  double min_eig_p = std::numeric_limits<double>::infinity();
  double min_eig_q = std::numeric_limits<double>::infinity();
  double max_eig_p = -std::numeric_limits<double>::infinity();
  double max_eig_q = -std::numeric_limits<double>::infinity();
  double max_residual = 0.0;  // max_S ||W - P_S - Q_S^{T_S}||_F
  double trace = 0.0;
  int bipartitions = 0;

  bool ok(WitnessNormalization norm, double eig_tol = 1e-9, double residual_tol = 1e-8) const {
    bool good = min_eig_p >= -eig_tol && min_eig_q >= -eig_tol && max_residual <= residual_tol;
    if (norm == WitnessNormalization::Bounded) good = good && max_eig_p <= 1.0 + eig_tol && max_eig_q <= 1.0 + eig_tol;
    if (norm == WitnessNormalization::UnitTrace) good = good && std::abs(trace - 1.0) <= eig_tol;
    return good;
  }
};

/// Checks the decomposition on every bipartition of the register, mapping the
/// stored parts by qubit permutations where the result was solved by symmetry.
inline WitnessValidity check_witness(const WitnessResult& res) {
  const int n = qubit_count(res.witness);
  WitnessValidity v;
  v.trace = res.witness.trace().real();
  auto account = [&](unsigned mask, const CMatrix& p, const CMatrix& q) {
    const RVector ep = linalg::eigenvalues_hermitian(p), eq = linalg::eigenvalues_hermitian(q);
    v.min_eig_p = std::min(v.min_eig_p, ep.minCoeff());
    v.max_eig_p = std::max(v.max_eig_p, ep.maxCoeff());
    v.min_eig_q = std::min(v.min_eig_q, eq.minCoeff());
    v.max_eig_q = std::max(v.max_eig_q, eq.maxCoeff());
    v.max_residual = std::max(v.max_residual, (res.witness - p - qubit_partial_transpose(q, mask)).norm());
    ++v.bipartitions;
  };
  if (!res.symmetric) {
    for (const auto& part : res.parts) account(part.mask, part.p, part.q);
    return v;
  }
  for (unsigned target : detail::all_bipartition_masks(n)) {
    const int t = __builtin_popcount(target);
    const int k = std::min(t, n - t);
    const unsigned side = t == k ? target : (((1u << n) - 1u) & ~target);
    const WitnessPart* rep = nullptr;
    for (const auto& part : res.parts)
      if (__builtin_popcount(part.mask) == k) rep = &part;
    if (rep == nullptr) throw std::logic_error("check_witness: missing representative bipartition");
    const CMatrix u = qubit_permutation(n, detail::side_permutation(n, rep->mask, side)).cast<cplx>();
    account(side, u * rep->p * u.adjoint(), u * rep->q * u.adjoint());
  }
  return v;
}

}  // namespace dicke
