// Coefficients of D(tau) and guarded evaluations of (e^{2g}/2) D(g e^{2g}).
#include <cstdio>
#include <iostream>

#include "lapgraph/lapgraph.hpp"

int main() {
  using namespace lapgraph;
  const PowerSeries D = free_energy_series(8);
  for (int k = 1; k <= D.order(); ++k) std::cout << "D_" << k << " = " << to_string(D[k]) << '\n';
  for (double g : {-0.02, 0.0, 0.01, 0.05, 0.2}) {
    try {
      const FreeEnergy f = free_energy_sparse(g, 20);
      std::printf("g=%6.3f  value=%.12g  residual<=%.2e\n", g, f.value, f.residual);
    } catch (const ConvergenceError& e) {
      std::printf("g=%6.3f  refused: %s\n", g, e.what());
    }
  }
}
