#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "dicke/clebsch_gordan.hpp"
#include "dicke/correlations.hpp"
#include "dicke/entanglement.hpp"
#include "dicke/grid.hpp"
#include "dicke/sdp.hpp"
#include "dicke/separability.hpp"
#include "dicke/steady_state.hpp"

namespace dicke {

enum class VerifyLevel { Quick, Full };

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::Quick;
  bool tamper_cg = false;  // perturb a private CG table copy before the orthonormality check
};

struct VerifyCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
  }
  const VerifyCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

/// max |V^T V - I| for the isometry Sym(N) -> Sym(N_A) (x) Sym(N_B) given by the table.
inline double cg_isometry_defect(const CGTable& cg) {
  const int na = cg.n_a(), nb = cg.n_b(), n = na + nb;
  RMatrix v = RMatrix::Zero((na + 1) * (nb + 1), n + 1);
  for (int k = 0; k <= n; ++k)
    for (int ka = 0; ka <= na; ++ka) {
      const int kb = k - ka;
      if (kb >= 0 && kb <= nb) v(ka * (nb + 1) + kb, k) = cg.at(k, ka);
    }
  return (v.transpose() * v - RMatrix::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff();
}

inline CMatrix random_hermitian(int d, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
  return linalg::hermitize(m);
}

inline sdp::SDPProblem eigenvalue_problem(const CMatrix& c) {
  const int d = static_cast<int>(c.rows());
  sdp::SDPProblem p;
  p.add_block("x", d);
  p.objective[0] = c;
  sdp::SDPProblem::Constraint con;
  con.terms.push_back({0, sdp::sparse_from_dense(CMatrix::Identity(d, d))});
  con.rhs = 1.0;
  p.constraints.push_back(con);
  return p;
}

inline CMatrix ghz_state(int n) {
  const int d = 1 << n;
  CVector v = CVector::Zero(d);
  v(0) = v(d - 1) = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

inline double xlog2x(double x) { return x > 0 ? x * std::log2(x) : 0.0; }

template <class F>
void timed_check(VerifyReport& report, std::string name, double tolerance, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyCheck c{std::move(name), false, std::numeric_limits<double>::infinity(), tolerance, 0.0};
  try {
    c.residual = body();
    c.passed = std::isfinite(c.residual) && c.residual <= tolerance;
  } catch (const std::exception&) {
    c.passed = false;
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report.checks.push_back(std::move(c));
}

}  // namespace detail

inline VerifyReport verify(const VerifyOptions& opts = {}) {
  const bool full = opts.level == VerifyLevel::Full;
  VerifyReport report;
  using detail::timed_check;

  timed_check(report, "steady-state oracle equivalence", 1e-8, [&] {
    std::vector<int> ns{1, 2, 4, 8};
    if (full) ns.push_back(10);
    double worst = 0.0;
    for (int n : ns)
      for (double w : {0.1, 0.5, 1.0, 5.0}) {
        const ModelParams p{n, w};
        worst = std::max(worst, linalg::trace_distance(steady_state(p).matrix(), steady_state_nullspace(p).matrix()));
      }
    return worst;
  });

  timed_check(report, "lindblad residual", 1e-9, [&] {
    const int n_max = full ? 32 : 16;
    double worst = 0.0;
    for (int n = 1; n <= n_max; ++n)
      for (double w : default_omega_grid(true)) {
        const ModelParams p{n, w};
        worst = std::max(worst, lindblad_residual(steady_state(p), p));
      }
    return worst;
  });

  timed_check(report, "clebsch-gordan orthonormality", 1e-12, [&] {
    const int n_max = full ? 32 : 12;
    double worst = 0.0;
    for (int n = 2; n <= n_max; ++n)
      for (int na = 1; na < n; ++na) {
        CGTable t = *cg_table(half(na), half(n - na));
        if (opts.tamper_cg) t.raw(n / 2, std::min(na, n / 2)) += 1e-3;
        worst = std::max(worst, detail::cg_isometry_defect(t));
      }
    return worst;
  });

  WitnessResult ghz_witness;
  timed_check(report, "ghz3 genuine multiparticle negativity", 1e-6, [&] {
    ghz_witness = gmn(detail::ghz_state(3));
    if (ghz_witness.status != sdp::Status::Optimal) return std::numeric_limits<double>::infinity();
    return std::abs(ghz_witness.gmn - 0.5);
  });

  timed_check(report, "witness validity", 1e-8, [&] {
    if (ghz_witness.witness.size() == 0) return std::numeric_limits<double>::infinity();
    const auto v = check_witness(ghz_witness);
    // eigenvalue violations folded in with the decomposition residual
    double r = v.max_residual;
    r = std::max(r, -v.min_eig_p);
    r = std::max(r, -v.min_eig_q);
    r = std::max(r, v.max_eig_p - 1.0);
    r = std::max(r, v.max_eig_q - 1.0);
    return r;
  });

  timed_check(report, "entropy conventions", 1e-8, [&] {
    CVector s = CVector::Zero(4);
    s(1) = 1.0 / std::sqrt(2.0);
    s(2) = -1.0 / std::sqrt(2.0);
    const CMatrix singlet = s * s.adjoint();
    double r = std::abs(von_neumann_entropy(CMatrix(CMatrix::Identity(4, 4) / 4.0)) - 2.0);
    r = std::max(r, std::abs(discord_2qubit(singlet).discord - 1.0));
    for (double p : {0.3, 0.7}) {
      const CMatrix w = p * singlet + (1.0 - p) / 4.0 * CMatrix::Identity(4, 4);
      const double classical = 0.5 * (detail::xlog2x(1 - p) + detail::xlog2x(1 + p));
      r = std::max(r, std::abs(discord_2qubit(w).classical - classical));
    }
    return r;
  });

  timed_check(report, "hankel/gram agreement", 1e-12, [&] {
    const int n_max = full ? 40 : 16;
    double worst = 0.0;
    for (int n = 1; n <= n_max; ++n) {
      const auto [h0, h1] = hankel_matrices(uniform_mixture_chi(n));
      worst = std::max(worst, (gram_oracle(half(n), 0) - h0).cwiseAbs().maxCoeff());
      worst = std::max(worst, (gram_oracle(half(n), 1) - h1).cwiseAbs().maxCoeff());
    }
    return worst;
  });

  timed_check(report, "hankel positivity", 1e-12, [&] {
    const int n_max = full ? 40 : 16;
    double worst = 0.0;
    for (int n = 1; n <= n_max; ++n) {
      const auto v = hankel_test(uniform_mixture_chi(n));
      worst = std::max({worst, -v.min_eig_h0, -v.min_eig_h1});
    }
    return worst;
  });

  timed_check(report, "sdp eigenvalue minimization", 1e-7, [&] {
    const std::vector<int> dims = full ? std::vector<int>{1, 2, 3, 5, 8, 12, 16} : std::vector<int>{2, 5, 8};
    double worst = 0.0;
    for (int d : dims) {
      const CMatrix c = detail::random_hermitian(d, 100 + d);
      const auto s = sdp::solve(detail::eigenvalue_problem(c));
      if (s.status != sdp::Status::Optimal) return std::numeric_limits<double>::infinity();
      worst = std::max({worst, std::abs(s.primal_objective - linalg::min_eigenvalue(c)), std::abs(s.duality_gap)});
    }
    return worst;
  });

  return report;
}

inline void print_report(std::ostream& os, const VerifyReport& report) {
  char line[256];
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof line, "%-4s %-40s residual=%.3e tol=%.1e (%.2fs)\n", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.residual, c.tolerance, c.seconds);
    os << line;
  }
  os << (report.passed() ? "verify: all checks passed\n" : "verify: FAILED\n");
}

}  // namespace dicke
