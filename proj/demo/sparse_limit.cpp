// Normalized Monte Carlo cumulants of sum deg^2 against 2^{k-1} d_k.
#include <cstdio>

#include "lapgraph/lapgraph.hpp"

int main() {
  using namespace lapgraph;
  const std::uint64_t seed = 7;
  std::printf("%8s %6s %2s %12s %10s %8s\n", "n", "cbar", "k", "normalized", "std_err", "target");
  for (std::int64_t n : {1000, 10000}) {
    for (double cbar : {10.0, 30.0}) {
      for (const auto& e : estimate_cumulants(n, cbar, 2, 100, seed)) {
        const double scale = static_cast<double>(n) * std::pow(cbar, e.k + 1);
        std::printf("%8lld %6.0f %2d %12.5f %10.5f %8.0f\n", static_cast<long long>(n), cbar, e.k, e.normalized,
                    e.std_error / scale, e.target);
      }
    }
  }
}
