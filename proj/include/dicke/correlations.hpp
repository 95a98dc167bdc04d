#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dicke/bipartition.hpp"
#include "dicke/clebsch_gordan.hpp"
#include "dicke/linalg.hpp"
#include "dicke/state.hpp"

namespace dicke {

inline constexpr double kEntropyFloor = 1e-15;

/// Shannon entropy (base 2) of a probability vector; entries below the floor count as zero.
inline double shannon_entropy(const RVector& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > kEntropyFloor) s -= p(i) * std::log2(p(i));
  return s;
}

inline double von_neumann_entropy(const CMatrix& rho) { return shannon_entropy(linalg::eigenvalues_hermitian(rho)); }

inline double von_neumann_entropy(const DickeDensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

inline double mutual_information(const DickeDensityMatrix& rho, int n_a) {
  const auto s = embed_bipartite(rho, n_a);
  return von_neumann_entropy(partial_trace(s, Subsystem::A)) + von_neumann_entropy(partial_trace(s, Subsystem::B)) -
         von_neumann_entropy(s.matrix());
}

// ---------------------------------------------------------------------------
// measurements

struct MeasurementSet {
  std::vector<CVector> vectors;   // outcome states; operators are their projectors
  std::vector<CMatrix> operators;
  std::vector<double> parameters;  // theta, phi

  static MeasurementSet from_vectors(std::vector<CVector> vs, std::vector<double> params) {
    MeasurementSet m;
    for (const auto& v : vs) m.operators.push_back(v * v.adjoint());
    m.vectors = std::move(vs);
    m.parameters = std::move(params);
    return m;
  }

  double completeness_defect() const {
    CMatrix s = CMatrix::Zero(operators.front().rows(), operators.front().cols());
    for (const auto& p : operators) s += p;
    return (s - CMatrix::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
  }

  double idempotence_defect() const {
    double worst = 0.0;
    for (const auto& p : operators) worst = std::max(worst, (p * p - p).cwiseAbs().maxCoeff());
    return worst;
  }
};

/// Map (theta, phi) into theta in [0, pi], phi in [0, 2 pi) describing the same measurement.
inline std::pair<double, double> wrap_angles(double theta, double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  theta = std::fmod(theta, two_pi);
  if (theta < 0) theta += two_pi;
  if (theta > std::numbers::pi) {
    theta = two_pi - theta;
    phi += std::numbers::pi;
  }
  phi = std::fmod(phi, two_pi);
  if (phi < 0) phi += two_pi;
  return {theta, phi};
}

/// Projectors on |+> = cos(theta/2)|e> + e^{i phi} sin(theta/2)|g> and its orthogonal
/// partner |-> = -e^{-i phi} sin(theta/2)|e> + cos(theta/2)|g>; basis order (g, e).
inline MeasurementSet qubit_measurement_ops(double theta, double phi) {
  std::tie(theta, phi) = wrap_angles(theta, phi);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const cplx e = std::polar(1.0, phi);
  CVector plus(2), minus(2);
  plus << e * s, c;
  minus << c, -std::conj(e) * s;
  return MeasurementSet::from_vectors({plus, minus}, {theta, phi});
}

/// Wigner small-d matrix d^j_{m',m}(beta), rows and columns in ascending m.
inline RMatrix wigner_d(HalfInt j, double beta) {
  const int tj = j.twice();
  if (tj < 0) throw std::invalid_argument("wigner_d: j must be non-negative");
  const int d = tj + 1;
  const double c = std::cos(beta / 2), s = std::sin(beta / 2);
  RMatrix out = RMatrix::Zero(d, d);
  // jp = j + m', jm = j + m
  for (int jp = 0; jp < d; ++jp)
    for (int jm = 0; jm < d; ++jm) {
      const int mp_minus_m = jp - jm;
      const double pref = 0.5 * (linalg::log_factorial(jp) + linalg::log_factorial(tj - jp) +
                                 linalg::log_factorial(jm) + linalg::log_factorial(tj - jm));
      double sum = 0.0;
      for (int k = std::max(0, -mp_minus_m); k <= std::min(jm, tj - jp); ++k) {
        const double logden = linalg::log_factorial(jm - k) + linalg::log_factorial(k) +
                              linalg::log_factorial(mp_minus_m + k) + linalg::log_factorial(tj - jp - k);
        const int pc = tj + jm - jp - 2 * k;
        const int ps = mp_minus_m + 2 * k;
        const double sign = ((mp_minus_m + k) % 2 == 0) ? 1.0 : -1.0;
        sum += sign * std::exp(pref - logden) * std::pow(c, pc) * std::pow(s, ps);
      }
      out(jp, jm) = sum;
    }
  return out;
}

/// Rotated Dicke projectors pi_m = |v_m><v_m| with v_m(n) = e^{-i phi n} d^j_{n,m}(theta).
inline MeasurementSet euler_measurement_ops(HalfInt j, double theta, double phi) {
  if (j.twice() < 1) throw std::invalid_argument("euler_measurement_ops: j must be >= 1/2");
  const int d = j.twice() + 1;
  const RMatrix dm = wigner_d(j, theta);
  std::vector<CVector> vs;
  for (int m = 0; m < d; ++m) {
    CVector v(d);
    for (int n = 0; n < d; ++n) v(n) = std::polar(dm(n, m), -phi * (n - 0.5 * j.twice()));
    vs.push_back(std::move(v));
  }
  return MeasurementSet::from_vectors(std::move(vs), {theta, phi});
}

/// sum_k p_k S(rho_{B|k}) for outcome states `vs` measured on A of a da x db matrix (a-major).
inline double conditional_entropy(const CMatrix& rho, int da, int db, const std::vector<CVector>& vs) {
  double total = 0.0;
  for (const auto& v : vs) {
    CMatrix rb = CMatrix::Zero(db, db);
    for (int a = 0; a < da; ++a) {
      if (v(a) == 0.0) continue;
      for (int a2 = 0; a2 < da; ++a2) {
        if (v(a2) == 0.0) continue;
        rb += std::conj(v(a)) * v(a2) * rho.block(a * db, a2 * db, db, db);
      }
    }
    const double p = rb.trace().real();
    if (p <= kEntropyFloor) continue;
    total += p * von_neumann_entropy(CMatrix(rb / p));
  }
  return total;
}

// ---------------------------------------------------------------------------
// angle optimization

struct AngleSearchOptions {
  int grid = 64;          // points per angle
  int starts = 5;         // local refinements from the best grid points
  double tol = 1e-8;      // simplex size in angle
  int max_evaluations = 4000;
};

struct AngleOptimum {
  double value;
  std::vector<double> angles;
  double best_grid_value;
};

/// Derivative-free simplex minimization.
inline std::pair<std::vector<double>, double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                                          std::vector<double> x0, double step, double tol,
                                                          int max_evaluations) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  std::vector<double> vals(n + 1);
  int evals = 0;
  for (std::size_t i = 0; i <= n; ++i, ++evals) vals[i] = f(pts[i]);
  std::vector<std::size_t> order(n + 1);
  while (evals < max_evaluations) {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const auto& best = pts[order[0]];
    double size = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) size = std::max(size, std::abs(pts[order[i]][k] - best[k]));
    if (size < tol) break;
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[order[i]][k] / n;
    const std::size_t worst = order[n];
    auto along = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + t * (pts[worst][k] - centroid[k]);
      return p;
    };
    const auto xr = along(-1.0);
    const double fr = f(xr);
    ++evals;
    if (fr < vals[order[0]]) {
      const auto xe = along(-2.0);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
    } else if (fr < vals[order[n - 1]]) {
      pts[worst] = xr;
      vals[worst] = fr;
    } else {
      const bool outside = fr < vals[worst];
      const auto xc = along(outside ? -0.5 : 0.5);
      const double fc = f(xc);
      ++evals;
      if (fc < std::min(fr, vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          auto& p = pts[order[i]];
          for (std::size_t k = 0; k < n; ++k) p[k] = best[k] + 0.5 * (p[k] - best[k]);
          vals[order[i]] = f(p);
          ++evals;
        }
      }
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  return {pts[it - vals.begin()], *it};
}

/// Minimize f(theta, phi): grid scan then simplex refinement from the best grid points.
inline AngleOptimum minimize_over_angles(const std::function<double(double, double)>& f,
                                         const AngleSearchOptions& opts = {}) {
  struct Cand {
    double v, t, p;
  };
  std::vector<Cand> grid;
  const double dt = std::numbers::pi / (opts.grid - 1);
  const double dp = 2.0 * std::numbers::pi / opts.grid;
  for (int i = 0; i < opts.grid; ++i)
    for (int k = 0; k < opts.grid; ++k) grid.push_back({f(i * dt, k * dp), i * dt, k * dp});
  std::stable_sort(grid.begin(), grid.end(), [](const Cand& a, const Cand& b) { return a.v < b.v; });
  AngleOptimum best{grid.front().v, {grid.front().t, grid.front().p}, grid.front().v};
  const int starts = std::min<int>(opts.starts, static_cast<int>(grid.size()));
  auto g = [&](const std::vector<double>& x) { return f(x[0], x[1]); };
  for (int s = 0; s < starts; ++s) {
    auto [x, v] = nelder_mead(g, {grid[s].t, grid[s].p}, 0.5 * dt, opts.tol, opts.max_evaluations);
    if (v < best.value) best = {v, x, best.best_grid_value};
  }
  auto [t, p] = wrap_angles(best.angles[0], best.angles[1]);
  best.angles = {t, p};
  return best;
}

// ---------------------------------------------------------------------------
// bipartite discord

struct CorrelationTriple {
  double total = 0.0;
  double classical = 0.0;
  double discord = 0.0;
  std::vector<double> optimal_angles;
  double conditional_entropy = 0.0;
};

namespace detail {

inline CorrelationTriple discord_from_search(const CMatrix& rho, int da, int db,
                                             const std::function<std::vector<CVector>(double, double)>& meas,
                                             const AngleSearchOptions& opts) {
  const CMatrix ra = detail::trace_out(rho, da, db, Subsystem::A);
  const CMatrix rb = detail::trace_out(rho, da, db, Subsystem::B);
  const double sa = von_neumann_entropy(ra), sb = von_neumann_entropy(rb), sab = von_neumann_entropy(rho);
  const auto opt = minimize_over_angles(
      [&](double t, double p) { return conditional_entropy(rho, da, db, meas(t, p)); }, opts);
  CorrelationTriple out;
  out.total = sa + sb - sab;
  out.classical = sb - opt.value;
  out.discord = out.total - out.classical;
  out.optimal_angles = opt.angles;
  out.conditional_entropy = opt.value;
  return out;
}

}  // namespace detail

/// Discord with von Neumann measurements on the first qubit of a two-qubit state.
inline CorrelationTriple discord_2qubit(const CMatrix& rho4, const AngleSearchOptions& opts = {}) {
  if (rho4.rows() != 4 || rho4.cols() != 4) throw std::invalid_argument("discord_2qubit: expected a 4x4 matrix");
  return detail::discord_from_search(
      rho4, 2, 2, [](double t, double p) { return qubit_measurement_ops(t, p).vectors; }, opts);
}

inline CorrelationTriple discord_2qubit(const DickeDensityMatrix& rho, const AngleSearchOptions& opts = {}) {
  if (rho.n_particles() < 2) throw std::invalid_argument("discord_2qubit: N must be >= 2");
  const auto pair = rho.n_particles() == 2 ? rho : reduce_dicke(rho, 2);
  return discord_2qubit(expand_to_qubits(pair), opts);
}

/// Upper bound on discord (lower bound on classical correlation) using rotated
/// Dicke-basis measurements on the n_a-atom subsystem.
inline CorrelationTriple discord_bipartite_upper(const DickeDensityMatrix& rho, int n_a,
                                                 const AngleSearchOptions& opts = {}) {
  const auto s = embed_bipartite(rho, n_a);
  const HalfInt j = HalfInt::from_twice(n_a);
  return detail::discord_from_search(
      s.matrix(), s.dim_a(), s.dim_b(), [j](double t, double p) { return euler_measurement_ops(j, t, p).vectors; },
      opts);
}

// ---------------------------------------------------------------------------
// global discord

inline constexpr int kMaxGlobalDiscordOptimizeQubits = 6;
inline constexpr int kMaxGlobalDiscordFixedQubits = 8;

namespace detail {

/// Diagonal of U^dagger rho U for U = u_0 (x) ... (x) u_{n-1}.
inline RVector product_basis_populations(const CMatrix& rho, const std::vector<Eigen::Matrix2cd>& us) {
  const int n = static_cast<int>(us.size());
  CMatrix m = rho;
  const Eigen::Index dim = m.rows();
  for (int q = 0; q < n; ++q) {
    const Eigen::Index bit = Eigen::Index{1} << (n - 1 - q);
    const Eigen::Matrix2cd& u = us[q];
    // m <- (u^dagger on q) m (u on q)
    for (Eigen::Index c = 0; c < dim; ++c)
      for (Eigen::Index r = 0; r < dim; ++r) {
        if (r & bit) continue;
        const cplx a = m(r, c), b = m(r | bit, c);
        m(r, c) = std::conj(u(0, 0)) * a + std::conj(u(1, 0)) * b;
        m(r | bit, c) = std::conj(u(0, 1)) * a + std::conj(u(1, 1)) * b;
      }
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (c & bit) continue;
      for (Eigen::Index r = 0; r < dim; ++r) {
        const cplx a = m(r, c), b = m(r, c | bit);
        m(r, c) = a * u(0, 0) + b * u(1, 0);
        m(r, c | bit) = a * u(0, 1) + b * u(1, 1);
      }
    }
  }
  return m.diagonal().real();
}

inline Eigen::Matrix2cd measurement_unitary(double theta, double phi) {
  const auto ms = qubit_measurement_ops(theta, phi);
  Eigen::Matrix2cd u;
  u.col(0) = ms.vectors[0];
  u.col(1) = ms.vectors[1];
  return u;
}

}  // namespace detail

/// Measurement-induced relative-entropy discord for local projective measurements
/// with angles (theta_0, phi_0, theta_1, phi_1, ...).
inline double global_discord_at(const CMatrix& rho, const std::vector<double>& angles) {
  const int n = qubit_count(rho);
  if (n > kMaxGlobalDiscordFixedQubits) throw std::invalid_argument("global_discord: at most 8 qubits");
  if (static_cast<int>(angles.size()) != 2 * n) throw std::invalid_argument("global_discord: need 2n angles");
  std::vector<Eigen::Matrix2cd> us(n);
  for (int q = 0; q < n; ++q) us[q] = detail::measurement_unitary(angles[2 * q], angles[2 * q + 1]);
  double d = shannon_entropy(detail::product_basis_populations(rho, us)) - von_neumann_entropy(rho);
  for (int q = 0; q < n; ++q) {
    const CMatrix rq = qubit_partial_trace(rho, {q});
    d -= shannon_entropy(detail::product_basis_populations(rq, {us[q]})) - von_neumann_entropy(rq);
  }
  return d;
}

struct GlobalDiscordResult {
  double value;
  std::vector<double> angles;
};

/// Minimized over all local angles: multistart simplex search with a fixed seed.
/// The starts include the all-Z and all-X settings, so the optimum never exceeds them.
inline GlobalDiscordResult global_discord_optimized(const CMatrix& rho, int restarts = 8, unsigned seed = 20240611u,
                                                    double tol = 1e-8) {
  const int n = qubit_count(rho);
  if (n > kMaxGlobalDiscordOptimizeQubits)
    throw std::invalid_argument("global_discord: optimization limited to 6 qubits");
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> th(0.0, std::numbers::pi), ph(0.0, 2.0 * std::numbers::pi);
  std::vector<std::vector<double>> starts;
  starts.push_back(std::vector<double>(2 * n, 0.0));
  std::vector<double> x(2 * n, 0.0);
  for (int q = 0; q < n; ++q) x[2 * q] = std::numbers::pi / 2;
  starts.push_back(x);
  while (static_cast<int>(starts.size()) < restarts) {
    for (int q = 0; q < n; ++q) {
      x[2 * q] = th(rng);
      x[2 * q + 1] = ph(rng);
    }
    starts.push_back(x);
  }
  auto f = [&](const std::vector<double>& a) { return global_discord_at(rho, a); };
  GlobalDiscordResult best{std::numeric_limits<double>::infinity(), {}};
  for (const auto& s : starts) {
    auto [a, v] = nelder_mead(f, s, 0.2, tol, 400 * n * n);
    if (v < best.value) best = {v, a};
  }
  for (int q = 0; q < n; ++q) std::tie(best.angles[2 * q], best.angles[2 * q + 1]) = wrap_angles(best.angles[2 * q], best.angles[2 * q + 1]);
  return best;
}

// ---------------------------------------------------------------------------
// multipartite correlations

inline constexpr int kMaxMultipartiteQubits = 9;

/// Alternating-sign sum of subset entropies: sum over nonempty T of (-1)^{|T|-1} S(rho_T).
inline double multipartite_mutual_information(const CMatrix& rho, double symmetry_tol = 1e-12) {
  const int n = qubit_count(rho);
  if (n > kMaxMultipartiteQubits) throw std::invalid_argument("multipartite_mutual_information: at most 9 qubits");
  double total = 0.0;
  if (permutation_asymmetry(rho) <= symmetry_tol) {
    for (int k = 1; k <= n; ++k) {
      std::vector<int> keep(k);
      for (int i = 0; i < k; ++i) keep[i] = i;
      const double s = k == n ? von_neumann_entropy(rho) : von_neumann_entropy(qubit_partial_trace(rho, keep));
      total += (k % 2 == 1 ? 1.0 : -1.0) * linalg::binomial(n, k) * s;
    }
    return total;
  }
  for (unsigned subset = 1; subset < (1u << n); ++subset) {
    std::vector<int> keep;
    for (int q = 0; q < n; ++q)
      if (subset & (1u << q)) keep.push_back(q);
    const int k = static_cast<int>(keep.size());
    const double s = k == n ? von_neumann_entropy(rho) : von_neumann_entropy(qubit_partial_trace(rho, keep));
    total += (k % 2 == 1 ? 1.0 : -1.0) * s;
  }
  return total;
}

/// Multipartite mutual information after the measurement (theta, phi) on atom 0.
///
/// Works on C^2 (x) Sym(N-1): the post-measurement subsets are labeled by whether
/// they contain the measured atom and by how many of the others they hold.
inline double multipartite_classical_correlation_at(const DickeDensityMatrix& rho, double theta, double phi) {
  const int n = rho.n_particles();
  if (n < 2) throw std::invalid_argument("multipartite_classical_correlation: N must be >= 2");
  if (n > kMaxMultipartiteQubits) throw std::invalid_argument("multipartite_classical_correlation: N must be <= 9");
  const auto s = embed_bipartite(rho, 1);
  const int db = n;  // Sym(N-1)
  const auto ms = qubit_measurement_ops(theta, phi);
  // post-measurement state: blocks (a, a2) of size db
  CMatrix post = CMatrix::Zero(2 * db, 2 * db);
  for (const auto& p : ms.operators)
    for (int a = 0; a < 2; ++a)
      for (int a2 = 0; a2 < 2; ++a2) {
        CMatrix blk = CMatrix::Zero(db, db);
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y)
            if (p(a, x) != 0.0 && p(y, a2) != 0.0) blk += p(a, x) * p(y, a2) * s.matrix().block(x * db, y * db, db, db);
        post.block(a * db, a2 * db, db, db) += blk;
      }
  double total = 0.0;
  // subsets holding the measured atom and k others
  for (int k = 0; k <= n - 1; ++k) {
    const int dk = k + 1;
    CMatrix red(2 * dk, 2 * dk);
    for (int a = 0; a < 2; ++a)
      for (int a2 = 0; a2 < 2; ++a2) {
        const CMatrix blk = post.block(a * db, a2 * db, db, db);
        if (k == 0) {
          red(a, a2) = blk.trace();
        } else {
          red.block(a * dk, a2 * dk, dk, dk) = detail::reduce_symmetric_operator(blk, k);
        }
      }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    total += sign * linalg::binomial(n - 1, k) * von_neumann_entropy(red);
  }
  // subsets of the unmeasured atoms only; the measurement leaves their marginal unchanged
  for (int k = 1; k <= n - 1; ++k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    const CMatrix rk = k == n - 1 ? partial_trace(s, Subsystem::B).matrix() : reduce_dicke(rho, k).matrix();
    total += sign * linalg::binomial(n - 1, k) * von_neumann_entropy(rk);
  }
  return total;
}

struct ClassicalCorrelationResult {
  double value;
  std::vector<double> angles;
};

/// Maximum over single-atom measurements of the post-measurement multipartite mutual information.
inline ClassicalCorrelationResult multipartite_classical_correlation(const DickeDensityMatrix& rho,
                                                                     const AngleSearchOptions& opts = {}) {
  const auto opt = minimize_over_angles(
      [&](double t, double p) { return -multipartite_classical_correlation_at(rho, t, p); }, opts);
  return {-opt.value, opt.angles};
}

}  // namespace dicke
