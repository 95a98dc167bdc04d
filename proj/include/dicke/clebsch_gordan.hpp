#pragma once

#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dicke/linalg.hpp"

namespace dicke {

/// Half-integer quantum number stored as twice its value.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  static constexpr HalfInt from_twice(int twice) { return HalfInt(twice); }
  static constexpr HalfInt integer(int v) { return HalfInt(2 * v); }

  constexpr int twice() const noexcept { return twice_; }
  constexpr double value() const noexcept { return twice_ / 2.0; }

  constexpr HalfInt operator+(HalfInt o) const { return HalfInt(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return HalfInt(twice_ - o.twice_); }
  constexpr HalfInt operator-() const { return HalfInt(-twice_); }
  constexpr auto operator<=>(const HalfInt&) const = default;

 private:
  constexpr explicit HalfInt(int twice) : twice_(twice) {}
  int twice_ = 0;
};

inline constexpr HalfInt half(int numerator) { return HalfInt::from_twice(numerator); }

/// Coefficients <j_a a; j_b b | J M> for the stretched coupling J = j_a + j_b.
///
/// Indexed by excitation counts: K = J + M in [0, 2J], ka = j_a + a in [0, 2j_a],
/// with kb = K - ka. Built by applying J- = J-_A + J-_B repeatedly to the
/// stretched state |j_a j_a>|j_b j_b>.
class CGTable {
 public:
  CGTable(HalfInt j_a, HalfInt j_b) : na_(j_a.twice()), nb_(j_b.twice()) {
    if (na_ < 0 || nb_ < 0) throw std::invalid_argument("CGTable: spins must be non-negative");
    const int n = na_ + nb_;
    rows_.assign(n + 1, std::vector<double>(na_ + 1, 0.0));
    rows_[n][na_] = 1.0;
    // lowering amplitude from excitation count k to k-1 for spin with 2j = twice
    auto lower = [](int twice, int k) {
      return std::sqrt(static_cast<double>(k) * static_cast<double>(twice - k + 1));
    };
    for (int big_k = n; big_k > 0; --big_k) {
      const double norm = lower(n, big_k);
      auto& next = rows_[big_k - 1];
      const auto& cur = rows_[big_k];
      for (int ka = 0; ka <= na_; ++ka) {
        const int kb = big_k - 1 - ka;
        if (kb < 0 || kb > nb_) continue;
        double acc = 0.0;
        if (ka + 1 <= na_) acc += cur[ka + 1] * lower(na_, ka + 1);
        if (kb + 1 <= nb_) acc += cur[ka] * lower(nb_, kb + 1);
        next[ka] = acc / norm;
      }
    }
  }

  HalfInt j_a() const noexcept { return HalfInt::from_twice(na_); }
  HalfInt j_b() const noexcept { return HalfInt::from_twice(nb_); }
  int n_a() const noexcept { return na_; }
  int n_b() const noexcept { return nb_; }

  /// Coefficient for total excitations K and A-excitations ka (zero if kb is out of range).
  double at(int big_k, int ka) const {
    const int kb = big_k - ka;
    if (big_k < 0 || big_k > na_ + nb_ || ka < 0 || ka > na_ || kb < 0 || kb > nb_) return 0.0;
    return rows_[big_k][ka];
  }

  /// Largest deviation of sum_{a+b=M} C^2 from 1 over all M.
  double row_normalization_defect() const {
    double worst = 0.0;
    for (const auto& row : rows_) {
      double s = 0.0;
      for (double c : row) s += c * c;
      worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
  }

  /// Mutable access for fault-injection in self-checks.
  double& raw(int big_k, int ka) { return rows_.at(big_k).at(ka); }

 private:
  int na_;
  int nb_;
  std::vector<std::vector<double>> rows_;
};

/// Shared read-only table for (j_a, j_b), computed on first use.
inline std::shared_ptr<const CGTable> cg_table(HalfInt j_a, HalfInt j_b) {
  static std::shared_mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const CGTable>> cache;
  const auto key = std::make_pair(j_a.twice(), j_b.twice());
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto table = std::make_shared<const CGTable>(j_a, j_b);
  std::unique_lock lock(mutex);
  return cache.emplace(key, std::move(table)).first->second;
}

/// Condon-Shortley coefficient C(J; j_a, j_b, M; a, b) for J = j_a + j_b.
inline double clebsch_gordan(HalfInt j_a, HalfInt j_b, HalfInt big_j, HalfInt big_m, HalfInt a,
                             HalfInt b) {
  auto parity_ok = [](HalfInt j, HalfInt m) { return std::abs(j.twice() - m.twice()) % 2 == 0; };
  if (j_a.twice() < 0 || j_b.twice() < 0)
    throw std::invalid_argument("clebsch_gordan: spins must be non-negative");
  if (big_j != j_a + j_b)
    throw std::invalid_argument("clebsch_gordan: only the stretched coupling J = j_a + j_b is supported");
  if (std::abs(big_m.twice()) > big_j.twice() || std::abs(a.twice()) > j_a.twice() ||
      std::abs(b.twice()) > j_b.twice() || !parity_ok(big_j, big_m) || !parity_ok(j_a, a) ||
      !parity_ok(j_b, b))
    throw std::invalid_argument("clebsch_gordan: magnetic number out of range");
  if (big_m != a + b) return 0.0;
  const int big_k = (big_j + big_m).twice() / 2;
  const int ka = (j_a + a).twice() / 2;
  return cg_table(j_a, j_b)->at(big_k, ka);
}

}  // namespace dicke
