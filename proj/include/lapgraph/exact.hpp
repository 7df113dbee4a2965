#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lapgraph/errors.hpp"
#include "lapgraph/graph.hpp"
#include "lapgraph/parallel.hpp"
#include "lapgraph/rational.hpp"
#include "lapgraph/set_partition.hpp"

namespace lapgraph {

/// Multiplicity of every (edge count m, X = sum deg^2) pair over all
/// 2^{n(n-1)/2} labelled graphs on n vertices.
struct GraphHistogram {
  int n = 0;
  int pair_count = 0;  // M = n(n-1)/2
  std::map<std::pair<int, std::int64_t>, std::uint64_t> counts;

  BigInt total() const {
    BigInt t = 0;
    for (const auto& [key, c] : counts) t += c;
    return t;
  }

  friend bool operator==(const GraphHistogram&, const GraphHistogram&) = default;
};

namespace detail {

constexpr int kHardMaxHistogramN = 11;  // masks must fit in 64 bits

/// Bitmask, per vertex, of the upper-triangle pair indices touching it.
/// Pairs are numbered row-major: (0,1), (0,2), .., (0,n-1), (1,2), ...
inline std::vector<std::uint64_t> incidence_masks(int n) {
  std::vector<std::uint64_t> inc(static_cast<std::size_t>(n), 0);
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++idx) {
      inc[i] |= std::uint64_t{1} << idx;
      inc[j] |= std::uint64_t{1} << idx;
    }
  }
  return inc;
}

inline void check_histogram_budget(int n, int max_n) {
  if (n < 0) throw ValidationError("graph enumeration needs n >= 0");
  if (n > max_n) {
    throw BudgetError("n=" + std::to_string(n) + " exceeds the enumeration budget " + std::to_string(max_n),
                      "--max-n");
  }
  if (n > kHardMaxHistogramN) throw BudgetError("n > 11 cannot be enumerated exhaustively", "--max-n");
}

/// Fixed chunking of the mask range; depends on the range only, never on
/// the thread count.
inline std::size_t mask_chunks(std::uint64_t total) {
  return total >= (std::uint64_t{1} << 16) ? 64 : 1;
}

}  // namespace detail

inline GraphHistogram graph_histogram(int n, int max_n = Budgets{}.max_histogram_n, unsigned threads = 1) {
  detail::check_histogram_budget(n, max_n);
  const int pairs = n * (n - 1) / 2;
  const std::uint64_t total = std::uint64_t{1} << pairs;
  const auto inc = detail::incidence_masks(n);
  const std::int64_t xmax = static_cast<std::int64_t>(n) * (n - 1) * (n - 1);
  const auto width = static_cast<std::size_t>(xmax + 1);
  const std::size_t chunks = detail::mask_chunks(total);

  auto partial = parallel_chunks<std::vector<std::uint64_t>>(chunks, threads, [&](std::size_t c) {
    std::vector<std::uint64_t> dense(static_cast<std::size_t>(pairs + 1) * width, 0);
    const std::uint64_t lo = total / chunks * c;
    const std::uint64_t hi = c + 1 == chunks ? total : total / chunks * (c + 1);
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      std::int64_t x = 0;
      for (auto m : inc) {
        const int d = std::popcount(mask & m);
        x += d * d;
      }
      ++dense[static_cast<std::size_t>(std::popcount(mask)) * width + static_cast<std::size_t>(x)];
    }
    return dense;
  });

  GraphHistogram h;
  h.n = n;
  h.pair_count = pairs;
  for (int m = 0; m <= pairs; ++m) {
    for (std::int64_t x = 0; x <= xmax; ++x) {
      std::uint64_t count = 0;
      for (const auto& dense : partial) count += dense[static_cast<std::size_t>(m) * width + static_cast<std::size_t>(x)];
      if (count) h.counts[{m, x}] = count;
    }
  }
  return h;
}

/// Text cache: header "n M total", then "m x count" lines sorted by (m, x).
inline void write_histogram(std::ostream& os, const GraphHistogram& h) {
  os << h.n << ' ' << h.pair_count << ' ' << h.total().str() << '\n';
  for (const auto& [key, c] : h.counts) os << key.first << ' ' << key.second << ' ' << c << '\n';
}

inline GraphHistogram read_histogram(std::istream& is) {
  GraphHistogram h;
  std::string total_text;
  if (!(is >> h.n >> h.pair_count >> total_text)) throw ValidationError("histogram cache: bad header");
  if (h.n < 0 || h.n > detail::kHardMaxHistogramN || h.pair_count != h.n * (h.n - 1) / 2) {
    throw ValidationError("histogram cache: inconsistent n and M");
  }
  int m = 0;
  std::int64_t x = 0;
  std::uint64_t c = 0;
  while (is >> m >> x >> c) {
    if (m < 0 || m > h.pair_count || x < 0 || (x & 1) || c == 0) {
      throw ValidationError("histogram cache: invalid row");
    }
    if (!h.counts.emplace(std::make_pair(m, x), c).second) throw ValidationError("histogram cache: duplicate row");
  }
  if (!is.eof()) throw ValidationError("histogram cache: trailing garbage");
  const BigInt expected = ipow(BigInt(2), static_cast<unsigned>(h.pair_count));
  if (h.total() != expected || parse_integer(total_text) != expected) {
    throw ValidationError("histogram cache: counts do not sum to 2^M");
  }
  return h;
}

/// E[X^0..X^k_max] under independent edges of probability p, exactly.
inline std::vector<BigRational> exact_moments(const GraphHistogram& h, int k_max, const BigRational& p) {
  if (p < 0 || p > 1) throw ValidationError("edge probability must be in [0, 1]");
  if (k_max < 0) throw ValidationError("k_max must be >= 0");
  std::vector<BigRational> weight(static_cast<std::size_t>(h.pair_count) + 1);
  for (int m = 0; m <= h.pair_count; ++m) weight[m] = rpow(p, m) * rpow(1 - p, h.pair_count - m);
  std::vector<BigRational> mom(static_cast<std::size_t>(k_max) + 1, BigRational(0));
  for (const auto& [key, c] : h.counts) {
    const BigRational w = weight[key.first] * BigRational(BigInt(c));
    if (w == 0) continue;
    BigInt xp = 1;
    for (int k = 0; k <= k_max; ++k) {
      mom[k] += w * xp;
      xp *= key.second;
    }
  }
  return mom;
}

inline BigRational exact_moment(const GraphHistogram& h, int k, const BigRational& p) {
  return exact_moments(h, k, p)[static_cast<std::size_t>(k)];
}

/// Cumulants from raw moments by summing over set partitions:
///   kappa_k = sum_pi (-1)^{s-1} (s-1)! prod_{B in pi} m_{|B|}.
/// moments[i] holds m_{i+1}; the result's entry i is kappa_{i+1}.
inline std::vector<BigRational> moments_to_cumulants(std::span<const BigRational> moments,
                                                     int max_k = Budgets{}.max_partition_k) {
  std::vector<BigRational> out;
  for (int k = 1; k <= static_cast<int>(moments.size()); ++k) {
    // Partitions only matter through their block-size multiset.
    std::map<std::vector<int>, BigInt> shapes;
    for (const auto& pi : set_partitions(k, max_k)) {
      std::vector<int> sizes;
      for (const auto& b : pi.blocks()) sizes.push_back(static_cast<int>(b.size()));
      std::sort(sizes.begin(), sizes.end());
      const int s = pi.block_count();
      BigInt sign_fact = factorial(static_cast<unsigned>(s - 1));
      shapes[sizes] += (s % 2 == 1) ? sign_fact : BigInt(-sign_fact);
    }
    BigRational kappa = 0;
    for (const auto& [sizes, coeff] : shapes) {
      BigRational term = BigRational(coeff);
      for (int size : sizes) term *= moments[static_cast<std::size_t>(size - 1)];
      kappa += term;
    }
    out.push_back(kappa);
  }
  return out;
}

struct CumulantTable {
  int n = 0;
  BigRational p;
  int k_max = 0;
  std::vector<BigRational> moments;    // [i] = E X^{i+1}
  std::vector<BigRational> cumulants;  // [i] = Cum_{i+1}(X)

  const BigRational& moment(int k) const { return moments.at(static_cast<std::size_t>(k - 1)); }
  const BigRational& cumulant(int k) const { return cumulants.at(static_cast<std::size_t>(k - 1)); }
};

inline CumulantTable exact_cumulants(const GraphHistogram& h, const BigRational& p, int k_max,
                                     int max_k = Budgets{}.max_partition_k) {
  if (k_max < 1) throw ValidationError("k_max must be >= 1");
  CumulantTable t;
  t.n = h.n;
  t.p = p;
  t.k_max = k_max;
  auto raw = exact_moments(h, k_max, p);
  t.moments.assign(raw.begin() + 1, raw.end());
  t.cumulants = moments_to_cumulants(t.moments, max_k);
  return t;
}

/// Histograms computed on demand and kept for reuse.
class HistogramCache {
 public:
  explicit HistogramCache(int max_n = Budgets{}.max_histogram_n, unsigned threads = 1)
      : max_n_(max_n), threads_(threads) {}

  const GraphHistogram& get(int n) {
    auto it = cache_.find(n);
    if (it == cache_.end()) it = cache_.emplace(n, graph_histogram(n, max_n_, threads_)).first;
    return it->second;
  }

  void insert(GraphHistogram h) { cache_.insert_or_assign(h.n, std::move(h)); }

 private:
  int max_n_;
  unsigned threads_;
  std::map<int, GraphHistogram> cache_;
};

namespace detail {

inline long double softplus(long double y) {
  return y > 0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y));
}

/// Streaming log(sum exp(v)).
class LogSumExp {
 public:
  void add(long double v, long double multiplicity = 1) {
    if (std::isinf(v) && v < 0) return;
    const long double lv = v + std::log(multiplicity);
    if (lv <= max_) {
      sum_ += std::exp(lv - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - lv) + 1;
      max_ = lv;
    }
  }

  long double value() const { return max_ + std::log(sum_); }

 private:
  long double max_ = -INFINITY;
  long double sum_ = 0;
};

}  // namespace detail

/// Partition function of exp(-beta Tr L + g Tr L^2) over all graphs on n
/// vertices, and its decomposition Zhat = prefactor * E_{beta'} e^{gX}.
struct PartitionFunction {
  int n = 0;
  long double beta = 0;
  long double g = 0;
  long double beta_prime = 0;
  long double log_z = 0;       // log Z by direct summation over graphs
  long double z = 0;
  long double z_hat = 0;       // Z / Z(beta, 0)
  long double log_prefactor = 0;
  long double prefactor = 0;   // ((1 + e^{-2 beta'}) / (1 + e^{-2 beta}))^M
  long double expectation = 0; // E_{beta'} e^{g X}
  long double relative_gap = 0;
};

inline PartitionFunction partition_function(const GraphHistogram& h, long double beta, long double g) {
  const int n = h.n;
  const int pairs = h.pair_count;
  PartitionFunction pf;
  pf.n = n;
  pf.beta = beta;
  pf.g = g;
  pf.beta_prime = beta - g;

  // Direct sum over every graph, traces from the degree sequence.
  const auto inc = detail::incidence_masks(n);
  detail::LogSumExp direct;
  const std::uint64_t total = std::uint64_t{1} << pairs;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::int64_t tr = 0;
    std::int64_t tr2 = 0;
    for (auto m : inc) {
      const std::int64_t d = std::popcount(mask & m);
      tr += d;
      tr2 += d * d + d;
    }
    direct.add(-beta * static_cast<long double>(tr) + g * static_cast<long double>(tr2));
  }
  pf.log_z = direct.value();
  pf.z = std::exp(pf.log_z);
  const long double log_z0 = pairs * detail::softplus(-2 * beta);
  pf.z_hat = std::exp(pf.log_z - log_z0);

  // Bernoulli(p') expectation from the histogram.
  const long double bp = pf.beta_prime;
  const long double log_p = -2 * bp - detail::softplus(-2 * bp);
  const long double log_q = -detail::softplus(-2 * bp);
  detail::LogSumExp expect;
  for (const auto& [key, c] : h.counts) {
    const int m = key.first;
    const long double lw = (m ? m * log_p : 0.0L) + ((pairs - m) ? (pairs - m) * log_q : 0.0L);
    expect.add(lw + g * static_cast<long double>(key.second), static_cast<long double>(c));
  }
  pf.expectation = std::exp(expect.value());
  pf.log_prefactor = pairs * (detail::softplus(-2 * bp) - detail::softplus(-2 * beta));
  pf.prefactor = std::exp(pf.log_prefactor);
  const long double log_rhs = pf.log_prefactor + expect.value();
  pf.relative_gap = std::fabs(std::expm1(log_rhs - (pf.log_z - log_z0)));
  return pf;
}

/// Cum_k(X_n)/n^{k+2} over a list of n, with first-order Richardson
/// elimination of the 1/n term between consecutive entries.
struct Extrapolation {
  int k = 0;
  BigRational p;
  std::vector<int> n_values;
  std::vector<BigRational> ratios;      // Cum_k(X_n) / n^{k+2}
  std::vector<BigRational> richardson;  // (n a_n - m a_m)/(n - m), consecutive pairs
  double estimate = 0;                  // last Richardson value
  double residual = 0;                  // |last - previous Richardson value|
  bool monotone = false;                // ratios strictly monotone in n
};

inline Extrapolation coefficient_extrapolate(int k, const BigRational& p, std::vector<int> n_list,
                                             HistogramCache& cache) {
  if (n_list.size() < 3) throw ValidationError("extrapolation needs at least three n values");
  if (k < 1 || k > 4) throw ValidationError("extrapolation supports 1 <= k <= 4");
  std::sort(n_list.begin(), n_list.end());
  if (std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end() || n_list.front() < 1) {
    throw ValidationError("n values must be distinct and positive");
  }
  Extrapolation e;
  e.k = k;
  e.p = p;
  e.n_values = n_list;
  for (int n : n_list) {
    const auto table = exact_cumulants(cache.get(n), p, k);
    e.ratios.push_back(table.cumulant(k) / BigRational(ipow(BigInt(n), static_cast<unsigned>(k + 2))));
  }
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    const BigRational hi = n_list[i];
    const BigRational lo = n_list[i - 1];
    e.richardson.push_back((hi * e.ratios[i] - lo * e.ratios[i - 1]) / (hi - lo));
  }
  e.estimate = to_double(e.richardson.back());
  e.residual = std::fabs(to_double(e.richardson.back() - e.richardson[e.richardson.size() - 2]));
  bool up = true;
  bool down = true;
  for (std::size_t i = 1; i < e.ratios.size(); ++i) {
    up = up && e.ratios[i] > e.ratios[i - 1];
    down = down && e.ratios[i] < e.ratios[i - 1];
  }
  e.monotone = up || down;
  return e;
}

/// Monomial coefficients c_0..c_{N-1} of the polynomial through (x_i, y_i).
inline std::vector<BigRational> interpolate_polynomial(std::span<const BigRational> xs,
                                                       std::span<const BigRational> ys) {
  if (xs.size() != ys.size() || xs.empty()) throw ValidationError("interpolation needs matching, non-empty data");
  const std::size_t n = xs.size();
  std::vector<BigRational> dd(ys.begin(), ys.end());  // Newton divided differences
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      if (xs[i] == xs[i - level]) throw ValidationError("interpolation nodes must be distinct");
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
    }
  }
  std::vector<BigRational> coeffs(n, BigRational(0));
  for (std::size_t i = n; i-- > 0;) {
    // coeffs = coeffs * (x - xs[i]) + dd[i]
    for (std::size_t j = n - 1; j > 0; --j) coeffs[j] = coeffs[j - 1] - xs[i] * coeffs[j];
    coeffs[0] = -xs[i] * coeffs[0] + dd[i];
  }
  return coeffs;
}

/// Cum_k(X_n) is a polynomial in n of degree at most k+2. Interpolates it
/// exactly from n = 0..n_max (needs n_max >= k+2) and returns its monomial
/// coefficients; entries above degree k+2 must come out zero.
inline std::vector<BigRational> cumulant_polynomial_in_n(int k, const BigRational& p, int n_max,
                                                         HistogramCache& cache) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (n_max < k + 2) throw ValidationError("need n_max >= k+2 points to fix a degree k+2 polynomial");
  std::vector<BigRational> xs;
  std::vector<BigRational> ys;
  for (int n = 0; n <= n_max; ++n) {
    xs.emplace_back(n);
    ys.push_back(exact_cumulants(cache.get(n), p, k).cumulant(k));
  }
  return interpolate_polynomial(xs, ys);
}

}  // namespace lapgraph
