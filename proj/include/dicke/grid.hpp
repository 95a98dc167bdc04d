#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dicke {

enum class GridScale { Linear, Log };

inline std::vector<double> omega_grid(double lo, double hi, int steps, GridScale scale) {
  if (!(lo < hi)) throw std::invalid_argument("omega_grid: min must be below max");
  if (steps < 2) throw std::invalid_argument("omega_grid: steps must be >= 2");
  if (scale == GridScale::Log && lo <= 0.0) throw std::invalid_argument("omega_grid: log grid needs min > 0");
  std::vector<double> g(steps);
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    g[i] = scale == GridScale::Log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                                   : lo + t * (hi - lo);
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

/// Merge a step-0.01 band over [0.3, 0.8] into `grid` (sorted, duplicates within 1e-9 dropped).
inline std::vector<double> densify_transition(std::vector<double> grid) {
  for (int k = 30; k <= 80; ++k) grid.push_back(k / 100.0);
  std::sort(grid.begin(), grid.end());
  std::vector<double> out;
  for (double w : grid)
    if (out.empty() || w - out.back() > 1e-9) out.push_back(w);
  return out;
}

inline constexpr double kDefaultOmegaMin = 0.05;
inline constexpr double kDefaultOmegaMax = 20.0;
inline constexpr int kDefaultOmegaSteps = 60;

inline std::vector<double> default_omega_grid(bool densify = false) {
  auto g = omega_grid(kDefaultOmegaMin, kDefaultOmegaMax, kDefaultOmegaSteps, GridScale::Log);
  return densify ? densify_transition(std::move(g)) : g;
}

}  // namespace dicke
