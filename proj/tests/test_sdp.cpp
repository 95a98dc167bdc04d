#include <gtest/gtest.h>

#include <random>

#include "dicke/sdp.hpp"

using namespace dicke;
using namespace dicke::sdp;

namespace {

CMatrix random_hermitian(int d, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  return linalg::hermitize(m);
}

// minimize tr(C X) subject to tr(X) = 1, X >= 0
SDPProblem eigenvalue_problem(const CMatrix& c) {
  SDPProblem p;
  const int d = static_cast<int>(c.rows());
  const int b = p.add_block("X", d);
  p.objective[b] = c;
  SDPProblem::Constraint tr;
  tr.terms.push_back({b, sparse_from_dense(CMatrix::Identity(d, d))});
  tr.rhs = 1.0;
  p.constraints.push_back(tr);
  return p;
}

}  // namespace

TEST(HermitianToReal, RealInputDuplicates) {
  CMatrix h(2, 2);
  h << 1.0, 2.0, 2.0, 3.0;
  const RMatrix r = hermitian_to_real(h);
  EXPECT_EQ(r.topLeftCorner(2, 2), h.real());
  EXPECT_EQ(r.bottomRightCorner(2, 2), h.real());
  EXPECT_EQ(r.topRightCorner(2, 2).norm(), 0.0);
}

TEST(HermitianToReal, PauliYSpectrumDoubled) {
  CMatrix h(2, 2);
  h << 0.0, cplx(0, 1), cplx(0, -1), 0.0;
  const RVector ev = linalg::eigenvalues_symmetric(hermitian_to_real(h));
  RVector expected(4);
  expected << -1, -1, 1, 1;
  EXPECT_LT((ev - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(HermitianToReal, RandomSpectrumDoubledAndRoundTrip) {
  const CMatrix h = random_hermitian(4, 7);
  const RVector e = linalg::eigenvalues_hermitian(h);
  const RVector er = linalg::eigenvalues_symmetric(hermitian_to_real(h));
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(er(2 * i), e(i), 1e-12);
    EXPECT_NEAR(er(2 * i + 1), e(i), 1e-12);
  }
  EXPECT_LT((real_to_hermitian(hermitian_to_real(h)) - h).norm(), 1e-15);
}

TEST(HermitianToReal, RejectsNonHermitian) {
  CMatrix h(2, 2);
  h << 0.0, 1.0, 0.0, 0.0;
  EXPECT_THROW(hermitian_to_real(h), std::invalid_argument);
}

TEST(Solve, ScalarWithoutConstraints) {
  SDPProblem p;
  const int b = p.add_block("x", 1);
  p.objective[b](0, 0) = 1.0;
  const auto s = solve(p);
  EXPECT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.primal_objective, 0.0, 1e-8);
}

TEST(Solve, DiagonalEigenvalue) {
  CMatrix c = CMatrix::Zero(2, 2);
  c(0, 0) = 1.0;
  c(1, 1) = -1.0;
  const auto s = solve(eigenvalue_problem(c));
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.primal_objective, -1.0, 1e-8);
  EXPECT_NEAR(s.x[0](1, 1).real(), 1.0, 1e-6);
  EXPECT_NEAR(s.y(0), -1.0, 1e-8);
}

TEST(Solve, RandomEigenvalueMinimization) {
  for (int d : {1, 2, 3, 5, 8, 12, 16}) {
    const CMatrix c = random_hermitian(d, 100 + d);
    const auto s = solve(eigenvalue_problem(c));
    ASSERT_EQ(s.status, Status::Optimal) << d;
    EXPECT_NEAR(s.primal_objective, linalg::min_eigenvalue(c), 1e-7) << d;
    EXPECT_LE(std::abs(s.duality_gap), 1e-7);
    EXPECT_LE(s.primal_infeasibility, 1e-8);
    EXPECT_LE(s.complementary_slackness, 1e-6);
    EXPECT_GE(linalg::min_eigenvalue(s.x[0]), -1e-9);
    EXPECT_GE(linalg::min_eigenvalue(s.z[0]), -1e-9);
  }
}

TEST(Solve, MultipleBlocksAndConstraints) {
  // minimize tr(C1 X1) + tr(C2 X2) with tr(X1) + tr(X2) = 1: picks the smaller minimum eigenvalue
  const CMatrix c1 = random_hermitian(3, 1), c2 = random_hermitian(4, 2);
  SDPProblem p;
  p.add_block("a", 3);
  p.add_block("b", 4);
  p.objective[0] = c1;
  p.objective[1] = c2;
  SDPProblem::Constraint con;
  con.terms.push_back({0, sparse_from_dense(CMatrix::Identity(3, 3))});
  con.terms.push_back({1, sparse_from_dense(CMatrix::Identity(4, 4))});
  con.rhs = 1.0;
  p.constraints.push_back(con);
  const auto s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.primal_objective, std::min(linalg::min_eigenvalue(c1), linalg::min_eigenvalue(c2)), 1e-7);
}

TEST(Solve, WeakDualityAlongFeasibleIterates) {
  const CMatrix c = random_hermitian(6, 5);
  const auto s = solve(eigenvalue_problem(c));
  ASSERT_EQ(s.status, Status::Optimal);
  int checked = 0;
  for (const auto& it : s.history)
    if (it.primal_infeasibility <= 1e-9 && it.dual_infeasibility <= 1e-9) {
      EXPECT_LE(it.dual_objective, it.primal_objective + 1e-9);
      ++checked;
    }
  EXPECT_GT(checked, 0);
}

TEST(Solve, Deterministic) {
  const auto p = eigenvalue_problem(random_hermitian(7, 9));
  const auto a = solve(p), b = solve(p);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].primal_objective, b.history[i].primal_objective);
    EXPECT_EQ(a.history[i].dual_objective, b.history[i].dual_objective);
  }
  EXPECT_EQ(a.y, b.y);
}

TEST(Solve, DetectsPrimalInfeasibility) {
  SDPProblem p;
  p.add_block("x", 1);
  SDPProblem::Constraint con;
  con.terms.push_back({0, {{0, 0, cplx(1.0)}}});
  con.rhs = -1.0;
  p.constraints.push_back(con);
  EXPECT_EQ(solve(p).status, Status::PrimalInfeasible);
}

TEST(Solve, DetectsUnboundedPrimal) {
  SDPProblem p;
  p.add_block("x", 2);
  p.objective[0] = -CMatrix::Identity(2, 2);
  EXPECT_EQ(solve(p).status, Status::DualInfeasible);
}

TEST(Solve, ReportsMaxIter) {
  SolverOptions opts;
  opts.max_iterations = 2;
  const auto s = solve(eigenvalue_problem(random_hermitian(5, 3)), opts);
  EXPECT_EQ(s.status, Status::MaxIter);
}

TEST(Problem, Validation) {
  SDPProblem p;
  p.add_block("x", 2);
  SDPProblem::Constraint con;
  con.terms.push_back({0, {{0, 1, cplx(1.0)}}});  // missing (1,0)
  p.constraints.push_back(con);
  EXPECT_THROW(solve(p), std::invalid_argument);
  SDPProblem q;
  q.add_block("x", 2);
  SDPProblem::Constraint bad;
  bad.terms.push_back({3, {}});
  q.constraints.push_back(bad);
  EXPECT_THROW(solve(q), std::invalid_argument);
}
