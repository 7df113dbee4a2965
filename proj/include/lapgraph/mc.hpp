#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <utility>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lapgraph/errors.hpp"
#include "lapgraph/parallel.hpp"
#include "lapgraph/random.hpp"
#include "lapgraph/rational.hpp"
#include "lapgraph/weights.hpp"

namespace lapgraph {

/// Power sums S_1..S_4 of a sample, exact.
struct PowerSums {
  std::int64_t count = 0;
  std::array<BigInt, 5> s{};  // s[j] = sum x^j, s[0] = count

  void add(const BigInt& x, int sign = 1) {
    BigInt xp = 1;
    for (int j = 0; j <= 4; ++j) {
      s[j] += sign > 0 ? xp : BigInt(-xp);
      xp *= x;
    }
    count += sign;
  }
};

/// Unbiased k-statistic of order j (1..4) from power sums, exactly.
inline BigRational k_statistic(const PowerSums& ps, int j) {
  const BigRational n = ps.count;
  const BigRational s1 = ps.s[1];
  const BigRational s2 = ps.s[2];
  const BigRational s3 = ps.s[3];
  const BigRational s4 = ps.s[4];
  switch (j) {
    case 1:
      if (ps.count < 1) break;
      return s1 / n;
    case 2:
      if (ps.count < 2) break;
      return (n * s2 - s1 * s1) / (n * (n - 1));
    case 3:
      if (ps.count < 3) break;
      return (2 * s1 * s1 * s1 - 3 * n * s1 * s2 + n * n * s3) / (n * (n - 1) * (n - 2));
    case 4:
      if (ps.count < 4) break;
      return (-6 * s1 * s1 * s1 * s1 + 12 * n * s1 * s1 * s2 - 3 * n * (n - 1) * s2 * s2 -
              4 * n * (n + 1) * s1 * s3 + n * n * (n + 1) * s4) /
             (n * (n - 1) * (n - 2) * (n - 3));
    default:
      throw ValidationError("k-statistics are implemented for orders 1..4");
  }
  throw ValidationError("sample too small for a k-statistic of order " + std::to_string(j));
}

inline std::vector<BigRational> k_statistics(std::span<const BigInt> xs, int k_max) {
  PowerSums ps;
  for (const auto& x : xs) ps.add(x);
  std::vector<BigRational> out;
  for (int j = 1; j <= k_max; ++j) out.push_back(k_statistic(ps, j));
  return out;
}

/// Leave-one-out jackknife standard error of the order-j k-statistic.
inline double jackknife_error(std::span<const BigInt> xs, int j) {
  PowerSums all;
  for (const auto& x : xs) all.add(x);
  const auto r = static_cast<double>(xs.size());
  std::vector<double> loo;
  loo.reserve(xs.size());
  for (const auto& x : xs) {
    PowerSums ps = all;
    ps.add(x, -1);
    loo.push_back(to_double(k_statistic(ps, j)));
  }
  double mean = 0;
  for (double v : loo) mean += v;
  mean /= r;
  double ss = 0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  return std::sqrt((r - 1) / r * ss);
}

struct McEstimate {
  std::int64_t n = 0;
  double cbar = 0;
  int k = 0;
  int replicates = 0;
  double estimate = 0;
  double std_error = 0;
  double normalized = 0;  // estimate / (n cbar^{k+1})
  double target = 0;      // 2^{k-1} d_k
  std::uint64_t seed = 0;
};

/// sum_i deg(i)^2 of one G(n, cbar/n) sample.
inline std::int64_t sample_x(std::int64_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::int64_t> deg(static_cast<std::size_t>(n), 0);
  for_each_random_edge(n, p, rng, [&](std::int64_t v, std::int64_t w) {
    ++deg[static_cast<std::size_t>(v)];
    ++deg[static_cast<std::size_t>(w)];
  });
  std::int64_t x = 0;
  for (auto d : deg) x += d * d;
  return x;
}

inline void validate_mc(std::int64_t n, double cbar, int k_max, int replicates) {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (!(cbar >= 0) || !std::isfinite(cbar)) throw ValidationError("cbar must be finite and >= 0");
  if (cbar >= static_cast<double>(n)) throw ValidationError("cbar must be < n");
  if (k_max < 1 || k_max > 4) throw ValidationError("k must be in 1..4");
  if (replicates < 2) throw ValidationError("at least 2 replicates are needed");
  if (k_max >= 2 && replicates < 30) throw ValidationError("cumulants of order >= 2 need at least 30 replicates");
}

/// X for every replicate; replicate r uses derive_seed(seed, r).
inline std::vector<BigInt> sample_replicates(std::int64_t n, double cbar, int replicates, std::uint64_t seed,
                                             unsigned threads = 1) {
  const double p = cbar / static_cast<double>(n);
  auto xs = parallel_chunks<std::int64_t>(static_cast<std::size_t>(replicates), threads,
                                          [&](std::size_t r) { return sample_x(n, p, derive_seed(seed, r)); });
  return {xs.begin(), xs.end()};
}

inline std::vector<McEstimate> estimates_from_sample(std::span<const BigInt> xs, std::int64_t n, double cbar,
                                                     int k_max, std::uint64_t seed) {
  std::vector<McEstimate> out;
  const auto ks = k_statistics(xs, k_max);
  for (int j = 1; j <= k_max; ++j) {
    McEstimate e;
    e.n = n;
    e.cbar = cbar;
    e.k = j;
    e.replicates = static_cast<int>(xs.size());
    e.estimate = to_double(ks[static_cast<std::size_t>(j - 1)]);
    e.std_error = jackknife_error(xs, j);
    const double scale = static_cast<double>(n) * std::pow(cbar, j + 1);
    e.normalized = scale > 0 ? e.estimate / scale : 0.0;
    e.target = sparse_coefficient(j).convert_to<double>();
    e.seed = seed;
    out.push_back(e);
  }
  return out;
}

/// k-statistics of X over `replicates` samples of G(n, cbar/n).
inline std::vector<McEstimate> estimate_cumulants(std::int64_t n, double cbar, int k_max, int replicates,
                                                  std::uint64_t seed, unsigned threads = 1) {
  validate_mc(n, cbar, k_max, replicates);
  const auto xs = sample_replicates(n, cbar, replicates, seed, threads);
  return estimates_from_sample(xs, n, cbar, k_max, seed);
}

struct ConvergenceCell {
  std::int64_t n = 0;
  double cbar = 0;
  std::vector<McEstimate> estimates;  // orders 1..k_max; empty on error
  std::string error;
};

struct Trend {
  int k = 0;
  double target = 0;
  /// Per cbar: whether |normalized - target| never grows as n increases.
  std::vector<std::pair<double, bool>> monotone_in_n;
  /// Per n with at least two usable cells: slope of log estimate on log cbar.
  std::vector<std::pair<std::int64_t, double>> cbar_slopes;
};

struct ConvergenceTable {
  int k_max = 0;
  std::vector<std::int64_t> n_values;
  std::vector<double> cbar_values;
  std::vector<ConvergenceCell> cells;  // n-major, in input order
  std::vector<Trend> trends;           // one per order
};

/// Slope of log y against log x.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("slope needs at least two points");
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw ValidationError("log-log slope needs positive data");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0;
  double sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

/// Grid of normalized estimates of orders 1..k_max. Every cell reuses
/// `seed`, so cells share random streams. Invalid cells carry an error.
inline ConvergenceTable convergence_table(int k_max, const std::vector<std::int64_t>& n_list,
                                          const std::vector<double>& cbar_list, int replicates,
                                          std::uint64_t seed, unsigned threads = 1) {
  if (n_list.empty() || cbar_list.empty()) throw ValidationError("n and cbar lists must be non-empty");
  if (k_max < 1 || k_max > 4) throw ValidationError("k must be in 1..4");
  ConvergenceTable t;
  t.k_max = k_max;
  t.n_values = n_list;
  t.cbar_values = cbar_list;
  for (auto n : n_list) {
    for (double c : cbar_list) {
      ConvergenceCell cell{n, c, {}, {}};
      try {
        validate_mc(n, c, k_max, replicates);
        const auto xs = sample_replicates(n, c, replicates, seed, threads);
        cell.estimates = estimates_from_sample(xs, n, c, k_max, seed);
      } catch (const ValidationError& e) {
        cell.error = e.what();
      }
      t.cells.push_back(std::move(cell));
    }
  }
  const std::size_t width = cbar_list.size();
  for (int k = 1; k <= k_max; ++k) {
    Trend tr;
    tr.k = k;
    tr.target = sparse_coefficient(k).convert_to<double>();
    for (std::size_t ci = 0; ci < width; ++ci) {
      bool mono = true;
      double prev = INFINITY;
      for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        const auto& cell = t.cells[ni * width + ci];
        if (cell.estimates.empty()) continue;
        const double dev = std::fabs(cell.estimates[k - 1].normalized - tr.target);
        mono = mono && dev <= prev;
        prev = dev;
      }
      tr.monotone_in_n.emplace_back(cbar_list[ci], mono);
    }
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
      std::vector<double> xs;
      std::vector<double> ys;
      for (std::size_t ci = 0; ci < width; ++ci) {
        const auto& cell = t.cells[ni * width + ci];
        if (!cell.estimates.empty() && cell.estimates[k - 1].estimate > 0 && cell.cbar > 0) {
          xs.push_back(cell.cbar);
          ys.push_back(cell.estimates[k - 1].estimate);
        }
      }
      if (xs.size() >= 2) tr.cbar_slopes.emplace_back(n_list[ni], loglog_slope(xs, ys));
    }
    t.trends.push_back(std::move(tr));
  }
  return t;
}

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void write_csv_header(std::ostream& os) { os << "n,cbar,k,R,estimate,std_error,normalized,target,seed\n"; }

inline void write_csv_row(std::ostream& os, const McEstimate& e) {
  os << e.n << ',' << format_real(e.cbar) << ',' << e.k << ',' << e.replicates << ',' << format_real(e.estimate)
     << ',' << format_real(e.std_error) << ',' << format_real(e.normalized) << ',' << format_real(e.target) << ','
     << e.seed << '\n';
}

}  // namespace lapgraph
