// Prints how the N = 8 steady state changes across the driving transition.
#include <cstdio>

#include "dicke/correlations.hpp"
#include "dicke/entanglement.hpp"
#include "dicke/steady_state.hpp"

int main() {
  const int n = 8;
  std::printf("%8s %10s %10s %12s %12s %10s\n", "omega", "2<Jz>/N", "purity", "negativity", "concurrence", "discord");
  for (double w : {0.05, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0, 2.0, 5.0, 20.0}) {
    const auto rho = dicke::steady_state({n, w});
    const auto obs = dicke::observables(rho);
    std::printf("%8.3f %10.5f %10.5f %12.3e %12.3e %10.5f\n", w, 2.0 * obs.jz / n, obs.purity,
                dicke::negativity(rho, n / 2).value, dicke::concurrence_pairwise(rho),
                dicke::discord_2qubit(rho).discord);
  }
}
