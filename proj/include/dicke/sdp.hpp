#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dicke/linalg.hpp"

namespace dicke::sdp {

/// Block form [[Re H, -Im H], [Im H, Re H]] of a Hermitian matrix.
inline RMatrix hermitian_to_real(const CMatrix& h, double tol = 1e-12) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (linalg::hermiticity_defect(h) > tol * scale)
    throw std::invalid_argument("hermitian_to_real: input is not Hermitian");
  const Eigen::Index d = h.rows();
  RMatrix r(2 * d, 2 * d);
  r.topLeftCorner(d, d) = h.real();
  r.bottomRightCorner(d, d) = h.real();
  r.bottomLeftCorner(d, d) = h.imag();
  r.topRightCorner(d, d) = -h.imag();
  return r;
}

/// Inverse of hermitian_to_real, averaging the redundant copies.
inline CMatrix real_to_hermitian(const RMatrix& r) {
  const Eigen::Index d = r.rows() / 2;
  CMatrix h(d, d);
  h.real() = 0.5 * (r.topLeftCorner(d, d) + r.bottomRightCorner(d, d));
  h.imag() = 0.5 * (r.bottomLeftCorner(d, d) - r.topRightCorner(d, d));
  return linalg::hermitize(h);
}

/// One entry of a sparse Hermitian matrix; both (r,c) and (c,r) must be listed.
struct HermEntry {
  int row;
  int col;
  cplx value;
};
using SparseHerm = std::vector<HermEntry>;

inline SparseHerm sparse_from_dense(const CMatrix& m, double drop = 0.0) {
  SparseHerm out;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (std::abs(m(r, c)) > drop) out.push_back({static_cast<int>(r), static_cast<int>(c), m(r, c)});
  return out;
}

inline CMatrix dense_from_sparse(const SparseHerm& s, int dim) {
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const auto& e : s) m(e.row, e.col) += e.value;
  return m;
}

struct BlockSpec {
  std::string name;
  int dim;  // complex dimension; every block is Hermitian and constrained PSD
};

/// Standard-form pair over Hermitian PSD blocks X_k:
///   primal  min sum_k <C_k, X_k>  s.t.  sum_k <A_ik, X_k> = b_i,  X_k >= 0
///   dual    max b^T y             s.t.  sum_i y_i A_ik + Z_k = C_k,  Z_k >= 0
/// with <A, X> = tr(A X).
struct SDPProblem {
  struct Term {
    int block;
    SparseHerm matrix;
  };
  struct Constraint {
    std::vector<Term> terms;
    double rhs = 0.0;
  };

  std::vector<BlockSpec> blocks;
  std::vector<CMatrix> objective;  // C_k, one dense Hermitian matrix per block
  std::vector<Constraint> constraints;

  int add_block(std::string name, int dim) {
    blocks.push_back({std::move(name), dim});
    objective.push_back(CMatrix::Zero(dim, dim));
    return static_cast<int>(blocks.size()) - 1;
  }

  void validate() const {
    if (objective.size() != blocks.size())
      throw std::invalid_argument("SDPProblem: one objective matrix per block required");
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      if (blocks[k].dim <= 0) throw std::invalid_argument("SDPProblem: block dimension must be positive");
      if (objective[k].rows() != blocks[k].dim || objective[k].cols() != blocks[k].dim)
        throw std::invalid_argument("SDPProblem: objective block has wrong shape");
      if (linalg::hermiticity_defect(objective[k]) > 1e-12 * std::max(1.0, objective[k].norm()))
        throw std::invalid_argument("SDPProblem: objective block is not Hermitian");
    }
    for (const auto& con : constraints)
      for (const auto& t : con.terms) {
        if (t.block < 0 || t.block >= static_cast<int>(blocks.size()))
          throw std::invalid_argument("SDPProblem: constraint refers to unknown block");
        const CMatrix a = dense_from_sparse(t.matrix, blocks[t.block].dim);
        if (linalg::hermiticity_defect(a) > 1e-12 * std::max(1.0, a.norm()))
          throw std::invalid_argument("SDPProblem: constraint matrix is not Hermitian");
      }
  }
};

enum class Status { Optimal, MaxIter, PrimalInfeasible, DualInfeasible };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::MaxIter: return "max-iter";
    case Status::PrimalInfeasible: return "infeasible";
    case Status::DualInfeasible: return "dual-infeasible";
  }
  return "unknown";
}

struct IterateInfo {
  double primal_objective;
  double dual_objective;
  double primal_infeasibility;
  double dual_infeasibility;
  double complementarity;  // <X, Z>
};

struct SDPSolution {
  std::vector<CMatrix> x;  // primal blocks
  std::vector<CMatrix> z;  // dual slack blocks
  RVector y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;             // primal - dual objective
  double primal_infeasibility = 0.0;    // ||b - A(X)||
  double dual_infeasibility = 0.0;      // ||C - Z - A^T y||_F
  double complementary_slackness = 0.0;  // max_k ||X_k Z_k||_F
  int iterations = 0;
  Status status = Status::MaxIter;
  std::vector<IterateInfo> history;
};

struct SolverOptions {
  double gap_tol = 1e-8;   // relative duality gap
  double feas_tol = 1e-8;   // relative primal/dual residuals
  int max_iterations = 100;
  double step_fraction = 0.98;
  double infeasibility_tol = 1e-8;
  bool verbose = false;  // per-iteration log on stderr
};

namespace detail {

struct RealEntry {
  int row;
  int col;
  double value;
};

struct RealTerm {
  int constraint;
  std::vector<RealEntry> entries;
  RMatrix dense;  // W A W cache for wide terms, refreshed every iteration
};

inline std::vector<RealEntry> embed_sparse(const SparseHerm& s, int dim) {
  std::vector<RealEntry> out;
  out.reserve(s.size() * 4);
  for (const auto& e : s) {
    const double re = e.value.real();
    const double im = e.value.imag();
    if (re != 0.0) {
      out.push_back({e.row, e.col, re});
      out.push_back({e.row + dim, e.col + dim, re});
    }
    if (im != 0.0) {
      out.push_back({e.row + dim, e.col, im});
      out.push_back({e.row, e.col + dim, -im});
    }
  }
  return out;
}

inline double dot(const std::vector<RealEntry>& a, const RMatrix& m) {
  double s = 0.0;
  for (const auto& e : a) s += e.value * m(e.row, e.col);
  return s;
}

inline void axpy(double alpha, const std::vector<RealEntry>& a, RMatrix& m) {
  for (const auto& e : a) m(e.row, e.col) += alpha * e.value;
}

/// Largest step t in (0, inf] keeping L L^T + t dM positive semidefinite.
inline double max_step(const RMatrix& chol_lower, const RMatrix& dm) {
  const auto tri = chol_lower.triangularView<Eigen::Lower>();
  RMatrix tmp = tri.solve(dm);
  tmp = tri.solve(tmp.transpose()).transpose();
  const double lam = linalg::eigenvalues_symmetric(tmp).minCoeff();
  return lam < 0.0 ? -1.0 / lam : std::numeric_limits<double>::infinity();
}

struct Scaling {
  RMatrix g;       // X = G Lambda G^T, Z = G^-T Lambda G^-1
  RMatrix g_inv;
  RMatrix w;       // G G^T, satisfies W Z W = X
  RVector lambda;  // NT-scaled point
  RMatrix chol_x;
  RMatrix chol_z;
};

inline bool nt_scaling(const RMatrix& x, const RMatrix& z, Scaling& s) {
  Eigen::LLT<RMatrix> lx(x), lz(z);
  if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
  s.chol_x = lx.matrixL();
  s.chol_z = lz.matrixL();
  Eigen::JacobiSVD<RMatrix> svd(s.chol_z.transpose() * s.chol_x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  s.lambda = svd.singularValues();
  if (s.lambda.minCoeff() <= 0.0) return false;
  const RVector inv_sqrt = s.lambda.cwiseSqrt().cwiseInverse();
  s.g = s.chol_x * svd.matrixV() * inv_sqrt.asDiagonal();
  // G^-1 = Lambda^{1/2} V^T L^-1
  const RMatrix l_inv =
      s.chol_x.triangularView<Eigen::Lower>().solve(RMatrix::Identity(x.rows(), x.cols()));
  s.g_inv = s.lambda.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() * l_inv;
  s.w = s.g * s.g.transpose();
  return true;
}

inline RMatrix sym(const RMatrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace detail

/// Primal-dual path-following solver (Nesterov-Todd direction, Mehrotra
/// predictor-corrector, infeasible start from scaled identities).
inline SDPSolution solve(const SDPProblem& problem, const SolverOptions& opts = {}) {
  problem.validate();
  using detail::RealEntry;
  using detail::RealTerm;
  const int nblocks = static_cast<int>(problem.blocks.size());
  const int m = static_cast<int>(problem.constraints.size());

  std::vector<int> dims(nblocks);
  std::vector<RMatrix> c(nblocks);
  std::vector<std::vector<RealTerm>> terms(nblocks);  // per block: constraints touching it
  int total_dim = 0;
  for (int k = 0; k < nblocks; ++k) {
    dims[k] = 2 * problem.blocks[k].dim;
    total_dim += dims[k];
    c[k] = hermitian_to_real(linalg::hermitize(problem.objective[k]));
  }
  RVector b(m);
  for (int i = 0; i < m; ++i) {
    b(i) = problem.constraints[i].rhs;
    for (const auto& t : problem.constraints[i].terms) {
      auto entries = detail::embed_sparse(t.matrix, problem.blocks[t.block].dim);
      if (!entries.empty()) terms[t.block].push_back({i, std::move(entries), {}});
    }
  }

  auto apply_a = [&](const std::vector<RMatrix>& x) {
    RVector out = RVector::Zero(m);
    for (int k = 0; k < nblocks; ++k)
      for (const auto& t : terms[k]) out(t.constraint) += detail::dot(t.entries, x[k]);
    return out;
  };
  auto apply_at = [&](const RVector& y) {
    std::vector<RMatrix> out(nblocks);
    for (int k = 0; k < nblocks; ++k) {
      out[k] = RMatrix::Zero(dims[k], dims[k]);
      for (const auto& t : terms[k]) detail::axpy(y(t.constraint), t.entries, out[k]);
    }
    return out;
  };
  auto inner = [&](const std::vector<RMatrix>& a, const std::vector<RMatrix>& bb) {
    double s = 0.0;
    for (int k = 0; k < nblocks; ++k) s += (a[k].array() * bb[k].array()).sum();
    return s;
  };

  // starting point
  std::vector<double> a_norm(m, 0.0);
  for (int k = 0; k < nblocks; ++k)
    for (const auto& t : terms[k]) {
      double s = 0.0;
      for (const auto& e : t.entries) s += e.value * e.value;
      a_norm[t.constraint] += s;
    }
  for (auto& v : a_norm) v = std::sqrt(v);
  std::vector<RMatrix> x(nblocks), z(nblocks);
  for (int k = 0; k < nblocks; ++k) {
    const double n_k = dims[k];
    double xi = std::max(10.0, std::sqrt(n_k));
    double eta = std::max({10.0, std::sqrt(n_k), c[k].norm()});
    for (const auto& t : terms[k]) {
      double an = 0.0;
      for (const auto& e : t.entries) an += e.value * e.value;
      an = std::sqrt(an);
      xi = std::max(xi, n_k * (1.0 + std::abs(b(t.constraint))) / (1.0 + an));
      eta = std::max(eta, an);
    }
    x[k] = xi * RMatrix::Identity(dims[k], dims[k]);
    z[k] = eta * RMatrix::Identity(dims[k], dims[k]);
  }
  RVector y = RVector::Zero(m);

  double c_norm = 0.0;
  for (int k = 0; k < nblocks; ++k) c_norm += c[k].squaredNorm();
  c_norm = std::sqrt(c_norm);
  const double b_norm = b.norm();

  SDPSolution sol;
  std::vector<detail::Scaling> sc(nblocks);

  auto finish = [&](Status status, int iters) {
    sol.status = status;
    sol.iterations = iters;
    sol.y = y;
    sol.x.resize(nblocks);
    sol.z.resize(nblocks);
    sol.complementary_slackness = 0.0;
    for (int k = 0; k < nblocks; ++k) {
      sol.x[k] = 2.0 * real_to_hermitian(x[k]);
      sol.z[k] = real_to_hermitian(z[k]);
      sol.complementary_slackness =
          std::max(sol.complementary_slackness, (sol.x[k] * sol.z[k]).norm());
    }
    sol.primal_objective = inner(c, x);
    sol.dual_objective = b.dot(y);
    sol.duality_gap = sol.primal_objective - sol.dual_objective;
    sol.primal_infeasibility = (b - apply_a(x)).norm();
    const auto aty = apply_at(y);
    double rd = 0.0;
    for (int k = 0; k < nblocks; ++k) rd += (c[k] - z[k] - aty[k]).squaredNorm();
    sol.dual_infeasibility = std::sqrt(rd);
    return sol;
  };

  // best iterate by the largest of the three relative stopping measures
  double best_score = std::numeric_limits<double>::infinity();
  std::vector<RMatrix> best_x, best_z;
  RVector best_y;
  std::optional<Eigen::LLT<RMatrix>> gram;  // A A^T, built on first use

  auto restore_best = [&] {
    if (best_x.empty()) return;
    x = best_x;
    z = best_z;
    y = best_y;
  };

  for (int iter = 0; iter <= opts.max_iterations; ++iter) {
    const RVector rp = b - apply_a(x);
    const auto aty = apply_at(y);
    std::vector<RMatrix> rd(nblocks);
    double rd_norm = 0.0;
    for (int k = 0; k < nblocks; ++k) {
      rd[k] = detail::sym(c[k] - z[k] - aty[k]);
      rd_norm += rd[k].squaredNorm();
    }
    rd_norm = std::sqrt(rd_norm);
    const double pobj = inner(c, x);
    const double dobj = b.dot(y);
    const double xz = inner(x, z);
    sol.history.push_back({pobj, dobj, rp.norm(), rd_norm, xz});

    const double rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double pinf = rp.norm() / (1.0 + b_norm);
    const double dinf = rd_norm / (1.0 + c_norm);
    const double rel_xz = xz / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double score = std::max({rel_gap, rel_xz, pinf, dinf});
    if (score < best_score) {
      best_score = score;
      best_x = x;
      best_z = z;
      best_y = y;
    }
    if (opts.verbose)
      std::fprintf(stderr, "%3d pobj % .10e dobj % .10e pinf %.2e dinf %.2e gap %.2e\n", iter, pobj, dobj,
                   pinf, dinf, rel_gap);
    if (rel_gap <= opts.gap_tol && rel_xz <= opts.gap_tol && pinf <= opts.feas_tol &&
        dinf <= opts.feas_tol)
      return finish(Status::Optimal, iter);

    // certificates of infeasibility
    if (dobj > 0.0) {
      double s = 0.0;
      for (int k = 0; k < nblocks; ++k) s += (aty[k] + z[k]).squaredNorm();
      if (std::sqrt(s) / dobj < opts.infeasibility_tol) return finish(Status::PrimalInfeasible, iter);
    }
    if (pobj < 0.0 && (b - rp).norm() / -pobj < opts.infeasibility_tol)
      return finish(Status::DualInfeasible, iter);
    if (iter == opts.max_iterations) break;

    bool ok = true;
    for (int k = 0; k < nblocks && ok; ++k) ok = detail::nt_scaling(x[k], z[k], sc[k]);
    if (!ok) {
      if (opts.verbose) std::fprintf(stderr, "stop: iterate left the cone\n");
      break;
    }

    // Schur complement M_ij = sum_k <A_ik, W_k A_jk W_k>
    RMatrix schur = RMatrix::Zero(m, m);
    for (int k = 0; k < nblocks; ++k) {
      const RMatrix& w = sc[k].w;
      auto& tk = terms[k];
      const std::size_t wide = static_cast<std::size_t>(dims[k]);
      for (auto& t : tk) {
        if (t.entries.size() > wide) {
          RMatrix a = RMatrix::Zero(dims[k], dims[k]);
          detail::axpy(1.0, t.entries, a);
          t.dense = w * a * w;
        } else {
          t.dense.resize(0, 0);
        }
      }
      for (std::size_t p = 0; p < tk.size(); ++p) {
        const auto& ti = tk[p];
        for (std::size_t q = 0; q <= p; ++q) {
          const auto& tj = tk[q];
          double s = 0.0;
          if (ti.dense.size() > 0) {
            s = detail::dot(tj.entries, ti.dense);
          } else if (tj.dense.size() > 0) {
            s = detail::dot(ti.entries, tj.dense);
          } else {
            for (const auto& ej : tj.entries)
              for (const auto& ei : ti.entries) s += ej.value * ei.value * w(ej.row, ei.row) * w(ei.col, ej.col);
          }
          schur(ti.constraint, tj.constraint) += s;
          if (ti.constraint != tj.constraint) schur(tj.constraint, ti.constraint) += s;
        }
      }
    }
    // factor the diagonally scaled Schur complement; fall back to LDL^T when
    // rounding has made it slightly indefinite
    RVector dscale = schur.diagonal().cwiseMax(std::numeric_limits<double>::min()).cwiseSqrt().cwiseInverse();
    const RMatrix scaled = dscale.asDiagonal() * schur * dscale.asDiagonal();
    Eigen::LLT<RMatrix> llt(scaled);
    Eigen::LDLT<RMatrix> ldlt;
    const bool use_llt = llt.info() == Eigen::Success;
    if (!use_llt) ldlt.compute(scaled);  // solves stay usable even when info() flags indefiniteness
    auto schur_solve = [&](const RVector& r) {
      const RVector rs = dscale.cwiseProduct(r);
      return RVector(dscale.cwiseProduct(use_llt ? RVector(llt.solve(rs)) : RVector(ldlt.solve(rs))));
    };

    // W Rd W is shared by predictor and corrector
    std::vector<RMatrix> wrdw(nblocks);
    for (int k = 0; k < nblocks; ++k) wrdw[k] = sc[k].w * rd[k] * sc[k].w;
    const RVector a_wrdw = apply_a(wrdw);

    struct Direction {
      std::vector<RMatrix> dx, dz;
      RVector dy;
      bool ok = true;
    };
    auto direction = [&](const std::vector<RMatrix>& rc) {
      Direction dir;
      std::vector<RMatrix> gdg(nblocks);
      for (int k = 0; k < nblocks; ++k) {
        const RVector& lam = sc[k].lambda;
        RMatrix d(dims[k], dims[k]);
        for (int i = 0; i < dims[k]; ++i)
          for (int j = 0; j < dims[k]; ++j) d(i, j) = 2.0 * rc[k](i, j) / (lam(i) + lam(j));
        gdg[k] = detail::sym(sc[k].g * d * sc[k].g.transpose());
      }
      const RVector rhs = rp - apply_a(gdg) + a_wrdw;
      dir.dy = RVector::Zero(m);
      if (m > 0) {
        dir.dy = schur_solve(rhs);
        double res = (rhs - schur * dir.dy).norm();
        for (int pass = 0; pass < 5 && res > 0.0; ++pass) {
          const RVector cand = dir.dy + schur_solve(RVector(rhs - schur * dir.dy));
          const double r2 = (rhs - schur * cand).norm();
          if (!(r2 < res)) break;
          dir.dy = cand;
          res = r2;
        }
        if (!dir.dy.allFinite()) dir.ok = false;
      }
      const auto at_dy = apply_at(dir.dy);
      dir.dz.resize(nblocks);
      dir.dx.resize(nblocks);
      for (int k = 0; k < nblocks; ++k) {
        dir.dz[k] = detail::sym(rd[k] - at_dy[k]);
        dir.dx[k] = detail::sym(gdg[k] - sc[k].w * dir.dz[k] * sc[k].w);
      }
      return dir;
    };
    auto step_lengths = [&](const Direction& dir) {
      double ap = std::numeric_limits<double>::infinity(), ad = ap;
      for (int k = 0; k < nblocks; ++k) {
        ap = std::min(ap, detail::max_step(sc[k].chol_x, dir.dx[k]));
        ad = std::min(ad, detail::max_step(sc[k].chol_z, dir.dz[k]));
      }
      return std::make_pair(ap, ad);
    };

    const double mu = xz / total_dim;
    std::vector<RMatrix> rc(nblocks);
    for (int k = 0; k < nblocks; ++k)
      rc[k] = -RMatrix(sc[k].lambda.array().square().matrix().asDiagonal());
    const Direction pred = direction(rc);
    if (!pred.ok) {
      if (opts.verbose) std::fprintf(stderr, "stop: Schur complement solve failed\n");
      break;
    }
    auto [ap_max, ad_max] = step_lengths(pred);
    const double ap = std::min(1.0, ap_max), ad = std::min(1.0, ad_max);
    double mu_aff = 0.0;
    for (int k = 0; k < nblocks; ++k)
      mu_aff += ((x[k] + ap * pred.dx[k]).array() * (z[k] + ad * pred.dz[k]).array()).sum();
    mu_aff /= total_dim;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    for (int k = 0; k < nblocks; ++k) {
      const RMatrix dxs = sc[k].g_inv * pred.dx[k] * sc[k].g_inv.transpose();
      const RMatrix dzs = sc[k].g.transpose() * pred.dz[k] * sc[k].g;
      rc[k] = sigma * mu * RMatrix::Identity(dims[k], dims[k]) -
              RMatrix(sc[k].lambda.array().square().matrix().asDiagonal()) - detail::sym(dxs * dzs);
    }
    const Direction corr = direction(rc);
    if (!corr.ok) {
      if (opts.verbose) std::fprintf(stderr, "stop: Schur complement solve failed\n");
      break;
    }
    auto [cp_max, cd_max] = step_lengths(corr);
    const double alpha_p = std::min(1.0, opts.step_fraction * cp_max);
    const double alpha_d = std::min(1.0, opts.step_fraction * cd_max);
    if (opts.verbose) std::fprintf(stderr, "    sigma %.3e alpha_p %.3e alpha_d %.3e\n", sigma, alpha_p, alpha_d);
    if (alpha_p < 1e-12 && alpha_d < 1e-12) {
      if (opts.verbose) std::fprintf(stderr, "stop: step length vanished\n");
      break;
    }
    for (int k = 0; k < nblocks; ++k) {
      x[k] = detail::sym(x[k] + alpha_p * corr.dx[k]);
      z[k] = detail::sym(z[k] + alpha_d * corr.dz[k]);
    }
    if (m > 0) y += alpha_d * corr.dy;

    // near the optimum the Schur system loses accuracy and X drifts off A x = b;
    // pull it back along the range of A^T when that keeps it positive definite
    if (m > 0) {
      const RVector rp_new = b - apply_a(x);
      if (rp_new.norm() > 1e-3 * opts.feas_tol * (1.0 + b_norm)) {
        if (!gram) {
          RMatrix g(m, m);
          for (int j = 0; j < m; ++j) g.col(j) = apply_a(apply_at(RVector::Unit(m, j)));
          gram.emplace(g + 1e-14 * std::max(1.0, g.diagonal().maxCoeff()) * RMatrix::Identity(m, m));
        }
        const auto dx = apply_at(gram->solve(rp_new));
        double t = 1.0;
        bool pd = true;
        for (int k = 0; k < nblocks && pd; ++k) {
          Eigen::LLT<RMatrix> lx(x[k]);
          pd = lx.info() == Eigen::Success;
          if (pd) t = std::min(t, 0.9 * detail::max_step(lx.matrixL(), dx[k]));
        }
        if (pd && t > 0.0)
          for (int k = 0; k < nblocks; ++k) x[k] = detail::sym(x[k] + t * dx[k]);
      }
    }
  }
  const int iters = static_cast<int>(sol.history.size()) - 1;
  restore_best();
  return finish(Status::MaxIter, iters);
}

}  // namespace dicke::sdp
