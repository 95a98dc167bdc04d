#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dicke/bipartition.hpp"
#include "dicke/clebsch_gordan.hpp"
#include "dicke/steady_state.hpp"

using namespace dicke;

namespace {

// Closed form for the stretched coupling: C^2 = binom(2ja, ka) binom(2jb, kb) / binom(2J, K).
double cg_closed_form(int na, int nb, int ka, int kb) {
  return std::sqrt(linalg::binomial(na, ka) * linalg::binomial(nb, kb) / linalg::binomial(na + nb, ka + kb));
}

RVector sorted_nonzero_spectrum(const CMatrix& m, int keep) {
  RVector ev = linalg::eigenvalues_hermitian(m);
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
  return ev.head(keep);
}

}  // namespace

TEST(ClebschGordan, Examples) {
  EXPECT_DOUBLE_EQ(clebsch_gordan(half(1), half(1), HalfInt::integer(1), HalfInt::integer(1), half(1), half(1)), 1.0);
  EXPECT_NEAR(clebsch_gordan(half(1), half(1), HalfInt::integer(1), HalfInt::integer(0), half(1), half(-1)),
              1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(clebsch_gordan(half(1), half(1), HalfInt::integer(1), HalfInt::integer(1), half(1), half(-1)), 0.0);
}

TEST(ClebschGordan, RejectsInvalidNumbers) {
  EXPECT_THROW(clebsch_gordan(half(1), half(1), HalfInt::integer(0), HalfInt::integer(0), half(1), half(-1)),
               std::invalid_argument);
  EXPECT_THROW(clebsch_gordan(half(1), half(1), HalfInt::integer(1), HalfInt::integer(2), half(1), half(1)),
               std::invalid_argument);
  EXPECT_THROW(clebsch_gordan(half(1), half(1), HalfInt::integer(1), HalfInt::integer(0), half(3), half(-1)),
               std::invalid_argument);
  EXPECT_THROW(clebsch_gordan(half(1), half(1), HalfInt::integer(1), HalfInt::integer(0), HalfInt::integer(0),
                              HalfInt::integer(0)),
               std::invalid_argument);
}

TEST(ClebschGordan, MatchesClosedFormAndNormalization) {
  for (int na = 1; na <= 16; ++na)
    for (int nb = 1; na + nb <= 32; ++nb) {
      const CGTable t(half(na), half(nb));
      EXPECT_LT(t.row_normalization_defect(), 1e-12);
      if (na + nb > 16) continue;
      EXPECT_DOUBLE_EQ(t.at(na + nb, na), 1.0);
      for (int k = 0; k <= na + nb; ++k)
        for (int ka = std::max(0, k - nb); ka <= std::min(na, k); ++ka)
          EXPECT_NEAR(t.at(k, ka), cg_closed_form(na, nb, ka, k - ka), 1e-12) << na << " " << nb << " " << k;
    }
}

TEST(ClebschGordan, CacheReturnsSameTable) {
  EXPECT_EQ(cg_table(half(3), half(5)).get(), cg_table(half(3), half(5)).get());
}

TEST(Embed, StretchedProduct) {
  const auto s = embed_bipartite(DickeDensityMatrix::dicke_projector(2, 2), 1);
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(s.index(1, 1), s.index(1, 1)) = 1.0;
  EXPECT_LT((s.matrix() - expected).norm(), 1e-15);
}

TEST(Embed, TripletIsSymmetricBell) {
  const auto s = embed_bipartite(DickeDensityMatrix::dicke_projector(2, 1), 1);
  CVector v = CVector::Zero(4);
  v(s.index(1, 0)) = v(s.index(0, 1)) = 1.0 / std::sqrt(2.0);
  EXPECT_LT((s.matrix() - v * v.adjoint()).norm(), 1e-15);
  EXPECT_NEAR(linalg::min_eigenvalue(partial_transpose(s, Subsystem::B)), -0.5, 1e-14);
}

TEST(Embed, RejectsBadSplit) {
  const auto rho = DickeDensityMatrix::ground(4);
  EXPECT_THROW(embed_bipartite(rho, 0), std::invalid_argument);
  EXPECT_THROW(embed_bipartite(rho, 4), std::invalid_argument);
  EXPECT_THROW(reduce_dicke(rho, 4), std::invalid_argument);
}

TEST(Embed, IsometryPreservesSpectrum) {
  for (int n = 2; n <= 10; ++n)
    for (double w : {0.05, 0.3, 0.5, 1.0, 20.0}) {
      const auto rho = steady_state({n, w});
      const RVector src = sorted_nonzero_spectrum(rho.matrix(), n + 1);
      for (int na = 1; na < n; ++na) {
        const auto s = embed_bipartite(rho, na);
        EXPECT_LT(linalg::hermiticity_defect(s.matrix()), 1e-12);
        EXPECT_NEAR(s.matrix().trace().real(), 1.0, 1e-12);
        const RVector dst = sorted_nonzero_spectrum(s.matrix(), n + 1);
        EXPECT_LT((src - dst).cwiseAbs().maxCoeff(), 1e-10) << n << " " << na << " " << w;
      }
    }
}

TEST(PartialTranspose, InvolutionAndSideSymmetry) {
  for (int n : {3, 6, 9}) {
    const auto rho = steady_state({n, 0.45});
    for (int na = 1; na < n; ++na) {
      const auto s = embed_bipartite(rho, na);
      const CMatrix tb = partial_transpose(s, Subsystem::B);
      const CMatrix back = detail::transpose_part(tb, s.dim_a(), s.dim_b(), Subsystem::B);
      EXPECT_LT((back - s.matrix()).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_LT(linalg::hermiticity_defect(tb), 1e-12);
      RVector ea = linalg::eigenvalues_hermitian(partial_transpose(s, Subsystem::A));
      RVector eb = linalg::eigenvalues_hermitian(tb);
      EXPECT_LT((ea - eb).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(PartialTranspose, ProductStateSpectrumUnchanged) {
  CMatrix ra(3, 3), rb(2, 2);
  ra << 0.5, cplx(0.1, 0.2), 0.0, cplx(0.1, -0.2), 0.3, cplx(0, 0.05), 0.0, cplx(0, -0.05), 0.2;
  rb << 0.6, cplx(0.2, -0.1), cplx(0.2, 0.1), 0.4;
  const BipartiteSymmetricState s(2, 1, linalg::kron(ra, rb));
  const RVector a = linalg::eigenvalues_hermitian(s.matrix());
  const RVector b = linalg::eigenvalues_hermitian(partial_transpose(s, Subsystem::B));
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PartialTrace, GroundStateAndTrace) {
  const auto s = embed_bipartite(DickeDensityMatrix::ground(7), 3);
  EXPECT_LT((partial_trace(s, Subsystem::A).matrix() - DickeDensityMatrix::ground(3).matrix()).norm(), 1e-14);
  EXPECT_LT((partial_trace(s, Subsystem::B).matrix() - DickeDensityMatrix::ground(4).matrix()).norm(), 1e-14);
  const auto r = partial_trace(embed_bipartite(steady_state({7, 0.6}), 3), Subsystem::B);
  EXPECT_NEAR(r.matrix().trace().real(), 1.0, 1e-12);
}

TEST(PartialTrace, DiagonalStaysDiagonal) {
  const auto r = reduce_dicke(DickeDensityMatrix::uniform_mixture(4), 2);
  CMatrix off = r.matrix();
  off.diagonal().setZero();
  EXPECT_LT(off.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ReduceDicke, ChainConsistency) {
  for (int n = 3; n <= 8; ++n) {
    const auto rho = steady_state({n, 0.55});
    for (int k = 2; k < n; ++k)
      for (int k2 = 1; k2 < k; ++k2) {
        const CMatrix chained = reduce_dicke(reduce_dicke(rho, k), k2).matrix();
        const CMatrix direct = reduce_dicke(rho, k2).matrix();
        EXPECT_LT((chained - direct).cwiseAbs().maxCoeff(), 1e-12);
      }
  }
}

TEST(ReduceDicke, MatchesQubitPartialTrace) {
  for (int n = 2; n <= 6; ++n) {
    const auto rho = steady_state({n, 0.5});
    const CMatrix q = expand_to_qubits(rho);
    for (int k = 1; k < n; ++k) {
      std::vector<int> keep(k);
      for (int i = 0; i < k; ++i) keep[i] = i;
      const CMatrix brute = qubit_partial_trace(q, keep);
      const CMatrix via = expand_to_qubits(reduce_dicke(rho, k));
      EXPECT_LT((brute - via).cwiseAbs().maxCoeff(), 1e-12) << n << " " << k;
    }
  }
}

TEST(ReduceDicke, PureGround) {
  const auto r = reduce_dicke(DickeDensityMatrix::ground(9), 4);
  EXPECT_LT((r.matrix() - DickeDensityMatrix::ground(4).matrix()).norm(), 1e-15);
}

TEST(Expand, TripletAndCap) {
  const CMatrix q = expand_to_qubits(DickeDensityMatrix::dicke_projector(2, 1));
  CVector v = CVector::Zero(4);
  v(1) = v(2) = 1.0 / std::sqrt(2.0);
  EXPECT_LT((q - v * v.adjoint()).norm(), 1e-15);
  EXPECT_THROW(expand_to_qubits(DickeDensityMatrix::ground(7)), std::invalid_argument);
}

TEST(Expand, PermutationInvariantSpectrumPreserved) {
  for (int n = 2; n <= 6; ++n) {
    const auto rho = steady_state({n, 0.7});
    const CMatrix q = expand_to_qubits(rho);
    EXPECT_LT(permutation_asymmetry(q), 1e-13);
    EXPECT_NEAR(q.trace().real(), 1.0, 1e-12);
    const RVector a = sorted_nonzero_spectrum(rho.matrix(), n + 1);
    const RVector b = sorted_nonzero_spectrum(q, n + 1);
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
    const CMatrix first = qubit_partial_trace(q, {0});
    for (int i = 1; i < n; ++i) EXPECT_LT((qubit_partial_trace(q, {i}) - first).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Expand, QubitPartialTransposeAgreesWithEmbedding) {
  const auto rho = steady_state({3, 0.5});
  const CMatrix q = expand_to_qubits(rho);
  const RVector a = linalg::eigenvalues_hermitian(qubit_partial_transpose(q, qubit_mask(3, {0})));
  const RVector b = linalg::eigenvalues_hermitian(partial_transpose(embed_bipartite(rho, 1), Subsystem::A));
  auto neg = [](const RVector& e) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i)
      if (e(i) < 0) s -= e(i);
    return s;
  };
  EXPECT_GT(neg(b), 1e-3);
  EXPECT_NEAR(neg(a), neg(b), 1e-10);
}
