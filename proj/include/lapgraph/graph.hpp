#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lapgraph/errors.hpp"
#include "lapgraph/random.hpp"
#include "lapgraph/rational.hpp"

namespace lapgraph {

/// Simple labelled graph on vertices 0..n-1, adjacency stored as packed
/// upper-triangle bits.
class Graph {
 public:
  explicit Graph(int n) : n_(n) {
    if (n < 0) throw ValidationError("graph needs n >= 0");
    words_.assign((pair_count() + 63) / 64, 0);
  }

  int n() const noexcept { return n_; }
  std::int64_t pair_count() const noexcept { return static_cast<std::int64_t>(n_) * (n_ - 1) / 2; }
  std::int64_t edge_count() const noexcept { return edges_; }

  bool has_edge(int i, int j) const {
    if (i == j) return false;
    auto idx = index(i, j);
    return (words_[idx / 64] >> (idx % 64)) & 1U;
  }

  void add_edge(int i, int j) {
    if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_) {
      throw ValidationError("invalid edge (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
    }
    auto idx = index(i, j);
    auto bit = std::uint64_t{1} << (idx % 64);
    if (!(words_[idx / 64] & bit)) {
      words_[idx / 64] |= bit;
      ++edges_;
    }
  }

  /// Edges as (i, j) with i < j, in row-major order.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(edges_));
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        auto idx = static_cast<std::int64_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
        out.push_back(pair_of(idx));
      }
    }
    return out;
  }

  std::vector<std::int64_t> degrees() const {
    std::vector<std::int64_t> deg(static_cast<std::size_t>(n_), 0);
    for (auto [i, j] : edges()) {
      ++deg[i];
      ++deg[j];
    }
    return deg;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  // Row i holds pairs (i, j>i); offset(i) = i*n - i(i+1)/2.
  std::int64_t index(int i, int j) const {
    if (i > j) std::swap(i, j);
    std::int64_t a = i;
    return a * n_ - a * (a + 1) / 2 + (j - i - 1);
  }

  std::pair<int, int> pair_of(std::int64_t idx) const {
    int i = 0;
    std::int64_t row = n_ - 1;
    while (idx >= row) {
      idx -= row;
      ++i;
      --row;
    }
    return {i, static_cast<int>(i + 1 + idx)};
  }

  int n_;
  std::int64_t edges_ = 0;
  std::vector<std::uint64_t> words_;
};

/// e^{-2b}/(1+e^{-2b}), evaluated without overflow for either sign of b.
inline double beta_to_p(double beta_prime) {
  if (!std::isfinite(beta_prime)) {
    if (std::isnan(beta_prime)) throw ValidationError("beta' must be finite");
    return beta_prime > 0 ? 0.0 : 1.0;
  }
  if (beta_prime >= 0) {
    double e = std::exp(-2.0 * beta_prime);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(2.0 * beta_prime));
}

/// Model parameters: inverse temperature, coupling, and the induced edge law.
struct ModelParams {
  int n = 0;
  double beta = 0;
  double g = 0;
  double beta_prime = 0;  // beta - g
  double p = 0;
  double cbar = 0;  // set in sparse mode only
  bool sparse = false;

  static ModelParams from_beta(int n, double beta, double g) {
    if (beta < 0) throw ValidationError("beta must be >= 0");
    ModelParams m;
    m.n = n;
    m.beta = beta;
    m.g = g;
    m.beta_prime = beta - g;
    m.p = beta_to_p(m.beta_prime);
    return m;
  }

  /// Sparse regime, p = cbar/n exactly.
  static ModelParams sparse_regime(int n, double cbar) {
    if (n < 1 || cbar < 0 || cbar > n) throw ValidationError("sparse regime needs 0 <= cbar <= n");
    ModelParams m;
    m.n = n;
    m.cbar = cbar;
    m.sparse = true;
    m.p = cbar / n;
    m.beta_prime = m.p > 0 ? 0.5 * std::log((1.0 - m.p) / m.p) : INFINITY;
    m.beta = m.beta_prime;
    return m;
  }
};

inline Graph sample_graph(int n, double p, std::uint64_t seed) {
  if (n < 1) throw ValidationError("sample_graph needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("edge probability must be in [0, 1]");
  Graph g(n);
  Rng rng(seed);
  for_each_random_edge(n, p, rng, [&](std::int64_t v, std::int64_t w) {
    g.add_edge(static_cast<int>(w), static_cast<int>(v));
  });
  return g;
}

/// sum_i deg(i)^2 from a degree sequence.
inline std::int64_t degree_square_sum(const std::vector<std::int64_t>& deg) {
  std::int64_t x = 0;
  for (auto d : deg) x += d * d;
  return x;
}

namespace detail {

/// 1^T A^q 1 by repeated sparse products; exact, switching to big integers
/// only if 64-bit arithmetic would overflow.
inline BigInt walk_count(const Graph& graph, int q) {
  const auto edges = graph.edges();
  const auto n = static_cast<std::size_t>(graph.n());
  std::vector<std::int64_t> v(n, 1);
  bool overflow = false;
  for (int step = 0; step < q && !overflow; ++step) {
    std::vector<std::int64_t> next(n, 0);
    for (auto [i, j] : edges) {
      overflow |= __builtin_add_overflow(next[i], v[j], &next[i]);
      overflow |= __builtin_add_overflow(next[j], v[i], &next[j]);
    }
    v = std::move(next);
  }
  if (!overflow) {
    BigInt total = 0;
    for (auto x : v) total += x;
    return total;
  }
  std::vector<BigInt> w(n, 1);
  for (int step = 0; step < q; ++step) {
    std::vector<BigInt> next(n, 0);
    for (auto [i, j] : edges) {
      next[i] += w[j];
      next[j] += w[i];
    }
    w = std::move(next);
  }
  BigInt total = 0;
  for (const auto& x : w) total += x;
  return total;
}

}  // namespace detail

/// X^{(q)} = sum_{i,j} (A^q)_{ij}. For q = 2 this is sum_l deg(l)^2.
inline BigInt x_stat(const Graph& graph, int q) {
  if (q < 1) throw ValidationError("x_stat needs q >= 1");
  if (q == 2) return BigInt(degree_square_sum(graph.degrees()));
  return detail::walk_count(graph, q);
}

struct LaplacianTraces {
  std::int64_t trace = 0;     // Tr L = 2|E|
  std::int64_t trace_sq = 0;  // Tr L^2 = X + 2|E|

  friend bool operator==(const LaplacianTraces&, const LaplacianTraces&) = default;
};

inline LaplacianTraces traces_from_degrees(const std::vector<std::int64_t>& deg) {
  LaplacianTraces t;
  for (auto d : deg) {
    t.trace += d;
    t.trace_sq += d * d + d;
  }
  return t;
}

inline LaplacianTraces laplacian_traces(const Graph& graph) { return traces_from_degrees(graph.degrees()); }

/// Dense Laplacian B - A with B the diagonal degree matrix.
class LaplacianMatrix {
 public:
  explicit LaplacianMatrix(const Graph& graph) : n_(graph.n()), entries_(static_cast<std::size_t>(n_) * n_, 0) {
    for (auto [i, j] : graph.edges()) {
      at(i, j) = -1;
      at(j, i) = -1;
      ++at(i, i);
      ++at(j, j);
    }
  }

  int n() const noexcept { return n_; }
  std::int64_t operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * n_ + j]; }

  std::int64_t row_sum(int i) const {
    std::int64_t s = 0;
    for (int j = 0; j < n_; ++j) s += (*this)(i, j);
    return s;
  }

  /// Traces computed from the matrix entries (Tr L^2 = sum_ij L_ij L_ji).
  LaplacianTraces direct_traces() const {
    LaplacianTraces t;
    for (int i = 0; i < n_; ++i) {
      t.trace += (*this)(i, i);
      for (int j = 0; j < n_; ++j) t.trace_sq += (*this)(i, j) * (*this)(j, i);
    }
    return t;
  }

 private:
  std::int64_t& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * n_ + j]; }

  int n_;
  std::vector<std::int64_t> entries_;
};

/// Edge-list text: "n m" then one "i j" line per edge, vertices 1-based.
inline void write_edge_list(std::ostream& os, const Graph& g) {
  os << g.n() << ' ' << g.edge_count() << '\n';
  for (auto [i, j] : g.edges()) os << i + 1 << ' ' << j + 1 << '\n';
}

inline Graph read_edge_list(std::istream& is) {
  long long n = 0;
  long long m = 0;
  if (!(is >> n >> m) || n < 0 || m < 0) throw ValidationError("edge list: bad header");
  Graph g(static_cast<int>(n));
  for (long long e = 0; e < m; ++e) {
    long long i = 0;
    long long j = 0;
    if (!(is >> i >> j)) throw ValidationError("edge list: expected " + std::to_string(m) + " edges");
    if (i < 1 || j < 1 || i > n || j > n || i == j) throw ValidationError("edge list: invalid edge");
    if (g.has_edge(static_cast<int>(i - 1), static_cast<int>(j - 1))) {
      throw ValidationError("edge list: duplicate edge");
    }
    g.add_edge(static_cast<int>(i - 1), static_cast<int>(j - 1));
  }
  return g;
}

}  // namespace lapgraph
