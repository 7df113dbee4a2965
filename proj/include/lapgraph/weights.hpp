#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lapgraph/counting.hpp"
#include "lapgraph/diagrams.hpp"
#include "lapgraph/errors.hpp"
#include "lapgraph/parallel.hpp"
#include "lapgraph/power_series.hpp"
#include "lapgraph/rational.hpp"
#include "lapgraph/set_partition.hpp"

namespace lapgraph {

/// Integer polynomial in the edge probability p, sparse by exponent.
struct WeightPolynomial {
  int k = 0;
  std::map<int, BigInt> coeffs;

  void add(int exponent, const BigInt& c) {
    auto& slot = coeffs[exponent];
    slot += c;
    if (slot == 0) coeffs.erase(exponent);
  }

  BigInt coefficient(int exponent) const {
    auto it = coeffs.find(exponent);
    return it == coeffs.end() ? BigInt(0) : it->second;
  }

  int lowest_exponent() const { return coeffs.empty() ? -1 : coeffs.begin()->first; }
  int highest_exponent() const { return coeffs.empty() ? -1 : coeffs.rbegin()->first; }

  BigRational evaluate(const BigRational& p) const {
    BigRational acc = 0;
    for (const auto& [e, c] : coeffs) acc += BigRational(c) * rpow(p, e);
    return acc;
  }

  double evaluate(double p) const {
    double acc = 0;
    for (const auto& [e, c] : coeffs) acc += c.convert_to<double>() * std::pow(p, e);
    return acc;
  }

  WeightPolynomial scaled(const BigInt& factor) const {
    WeightPolynomial out{k, {}};
    for (const auto& [e, c] : coeffs) out.add(e, c * factor);
    return out;
  }

  friend bool operator==(const WeightPolynomial&, const WeightPolynomial&) = default;
};

inline std::string to_string(const WeightPolynomial& w) {
  if (w.coeffs.empty()) return "0";
  std::string s;
  for (const auto& [e, c] : w.coeffs) {
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    const BigInt mag = c < 0 ? BigInt(-c) : c;
    if (mag != 1 || e == 0) s += mag.str();
    if (e > 0) s += (mag != 1 ? "*p" : "p") + (e > 1 ? "^" + std::to_string(e) : std::string());
  }
  return s;
}

namespace detail {

inline void check_weight_budget(int k, int max_k) {
  if (k < 1) throw ValidationError("weights need k >= 1");
  if (k > max_k) {
    throw BudgetError("k=" + std::to_string(k) + " exceeds the weight budget " + std::to_string(max_k), "--max-k");
  }
}

/// (-1)^{s-1} (s-1)!
inline BigInt partition_sign(int blocks) {
  const BigInt f = factorial(static_cast<unsigned>(blocks - 1));
  return blocks % 2 == 1 ? f : BigInt(-f);
}

/// For one partition: table[mask] = number of blocks meeting the vertex set
/// `mask` (bit v-1 for vertex v).
inline std::vector<std::uint8_t> blocks_touched_table(const SetPartition& pi) {
  const int k = pi.ground_size();
  std::vector<std::uint64_t> block_bits(static_cast<std::size_t>(pi.block_count()), 0);
  std::vector<std::uint8_t> table(std::size_t{1} << k, 0);
  for (std::uint64_t mask = 1; mask < table.size(); ++mask) {
    std::uint64_t blocks = 0;
    for (int v = 0; v < k; ++v) {
      if (mask >> v & 1) blocks |= std::uint64_t{1} << pi.block_of(v + 1);
    }
    table[mask] = static_cast<std::uint8_t>(std::popcount(blocks));
  }
  return table;
}

}  // namespace detail

/// Exponent of p contributed by partition pi to the weight of d:
/// grey off-spreads plus, per color group, the number of blocks it touches.
inline int partition_weight_exponent(const Diagram& d, const SetPartition& pi) {
  if (d.q() != 2) throw ValidationError("weights are defined for q = 2 only");
  if (pi.ground_size() != d.k()) throw ValidationError("partition and diagram sizes differ");
  int e = d.grey_count();
  for (const auto& group : d.groups()) {
    std::uint64_t blocks = 0;
    for (const auto& o : group) blocks |= std::uint64_t{1} << pi.block_of(o.vertex);
    e += std::popcount(blocks);
  }
  return e;
}

/// w(d; p) = sum_pi (-1)^{s-1} (s-1)! p^{e(d, pi)}.
inline WeightPolynomial diagram_weight(const Diagram& d, int max_k = Budgets{}.max_weight_k) {
  detail::check_weight_budget(d.k(), max_k);
  if (d.q() != 2) throw ValidationError("weights are defined for q = 2 only");
  if (!is_valid_diagram(d)) throw ValidationError("not a connected acyclic diagram: " + to_string(d));
  WeightPolynomial w{d.k(), {}};
  for (const auto& pi : set_partitions(d.k(), std::max(d.k(), Budgets{}.max_partition_k))) {
    w.add(partition_weight_exponent(d, pi), detail::partition_sign(pi.block_count()));
  }
  return w;
}

namespace detail {

/// counts[pi][e] = number of diagrams whose exponent under pi is e.
inline std::vector<std::vector<std::uint64_t>> exponent_counts(int k, const std::vector<SetPartition>& parts,
                                                               unsigned threads) {
  std::vector<DiagramShape> shapes;
  for_each_diagram_shape(k, 2, [&](const DiagramShape& s) { shapes.push_back(s); });
  std::vector<std::vector<std::uint8_t>> tables;
  for (const auto& pi : parts) tables.push_back(blocks_touched_table(pi));

  const std::size_t width = static_cast<std::size_t>(2 * k) + 1;
  const std::size_t chunks = std::min<std::size_t>(64, std::max<std::size_t>(1, shapes.size()));
  auto partial = parallel_chunks<std::vector<std::uint64_t>>(chunks, threads, [&](std::size_t c) {
    std::vector<std::uint64_t> acc(parts.size() * width, 0);
    for (std::size_t s = c; s < shapes.size(); s += chunks) {
      const auto& shape = shapes[s];
      for (std::size_t i = 0; i < parts.size(); ++i) {
        int e = shape.grey;
        for (auto m : shape.group_masks) e += tables[i][m];
        ++acc[i * width + static_cast<std::size_t>(e)];
      }
    }
    return acc;
  });

  std::vector<std::vector<std::uint64_t>> counts(parts.size(), std::vector<std::uint64_t>(width, 0));
  for (const auto& acc : partial) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      for (std::size_t e = 0; e < width; ++e) counts[i][e] += acc[i * width + e];
    }
  }
  return counts;
}

}  // namespace detail

/// C_k(p) = 2^{k-1} sum over diagrams of w(d; p): the predicted limit of
/// Cum_k(X_n)/n^{k+2}.
inline WeightPolynomial cumulant_coefficient(int k, int max_k = Budgets{}.max_weight_k, unsigned threads = 1) {
  detail::check_weight_budget(k, max_k);
  const auto parts = set_partitions(k, std::max(k, Budgets{}.max_partition_k));
  const auto counts = detail::exponent_counts(k, parts, threads);
  WeightPolynomial sum{k, {}};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const BigInt sign = detail::partition_sign(parts[i].block_count());
    for (std::size_t e = 0; e < counts[i].size(); ++e) {
      if (counts[i][e]) sum.add(static_cast<int>(e), sign * BigInt(counts[i][e]));
    }
  }
  return sum.scaled(ipow(BigInt(2), static_cast<unsigned>(k - 1)));
}

/// 2^{k-1} d_k (with d_1 = 1).
inline BigInt sparse_coefficient(int k) {
  if (k < 1) throw ValidationError("sparse_coefficient needs k >= 1");
  const BigRational d = d_sequence(std::max(k, 2)).at(k);
  return ipow(BigInt(2), static_cast<unsigned>(k - 1)) * numerator(d);
}

/// Partition-first regrouping: for each block-size shape of pi, the signed
/// sum over diagrams of p^{e(d, pi)} (no orientation factor).
struct PartitionWeight {
  std::vector<int> block_sizes;  // non-increasing
  int partitions = 0;            // set partitions with this shape
  WeightPolynomial weight;
};

inline std::vector<PartitionWeight> partition_weights(int k, int max_k = Budgets{}.max_weight_k,
                                                      unsigned threads = 1) {
  detail::check_weight_budget(k, max_k);
  const auto parts = set_partitions(k, std::max(k, Budgets{}.max_partition_k));
  const auto counts = detail::exponent_counts(k, parts, threads);
  std::map<std::vector<int>, PartitionWeight, std::greater<>> by_shape;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<int> sizes;
    for (const auto& b : parts[i].blocks()) sizes.push_back(static_cast<int>(b.size()));
    std::sort(sizes.rbegin(), sizes.rend());
    auto& entry = by_shape[sizes];
    entry.block_sizes = sizes;
    entry.weight.k = k;
    ++entry.partitions;
    const BigInt sign = detail::partition_sign(parts[i].block_count());
    for (std::size_t e = 0; e < counts[i].size(); ++e) {
      if (counts[i][e]) entry.weight.add(static_cast<int>(e), sign * BigInt(counts[i][e]));
    }
  }
  std::vector<PartitionWeight> out;
  for (auto& [sizes, w] : by_shape) out.push_back(std::move(w));
  return out;
}

/// D(tau) = sum_{k>=1} 2^{k-1} d_k / k! tau^k, truncated at `order`.
inline PowerSeries free_energy_series(int order, int max_order = Budgets{}.max_order) {
  if (order < 1) throw ValidationError("free-energy series needs order >= 1");
  if (order > max_order) {
    throw BudgetError("order " + std::to_string(order) + " exceeds budget " + std::to_string(max_order),
                      "--max-order");
  }
  const auto d = d_sequence(std::max(order, 2));
  std::vector<BigRational> c(static_cast<std::size_t>(order) + 1, BigRational(0));
  for (int k = 1; k <= order; ++k) {
    c[k] = BigRational(ipow(BigInt(2), static_cast<unsigned>(k - 1))) * d.at(k) /
           BigRational(factorial(static_cast<unsigned>(k)));
  }
  return PowerSeries(std::move(c));
}

/// Truncated evaluation of (e^{2g}/2) D(g e^{2g}).
struct FreeEnergy {
  double g = 0;
  int order = 0;
  double tau = 0;          // g e^{2g}
  double value = 0;        // (e^{2g}/2) * partial sum
  double partial_sum = 0;  // sum_{k<=order} D_k tau^k
  double last_term = 0;
  double last_ratio = 0;   // |t_order / t_{order-1}|
  double ratio_limit = 0;  // sup of term ratios, 4e|tau|
  double residual = 0;     // bound on the dropped tail, in units of `value`
};

/// Term ratios of D increase monotonically to 4e|tau|, so the tail beyond
/// the last term t_N is at most |t_N| r/(1-r) with r = 4e|tau|. Refuses
/// unless r < 1 and that bound is below 1e-3 of the partial sum.
inline FreeEnergy free_energy_sparse(double g, int order, int max_order = Budgets{}.max_order) {
  if (!std::isfinite(g)) throw ValidationError("g must be finite");
  const PowerSeries D = free_energy_series(order, max_order);
  FreeEnergy f;
  f.g = g;
  f.order = order;
  f.tau = g * std::exp(2 * g);
  f.ratio_limit = 4 * std::exp(1.0) * std::fabs(f.tau);
  if (g == 0) return f;
  double tpow = 1;
  double prev = 0;
  for (int k = 1; k <= order; ++k) {
    tpow *= f.tau;
    const double t = to_double(D[k]) * tpow;
    f.partial_sum += t;
    if (k == order) {
      f.last_term = t;
      f.last_ratio = order >= 2 ? std::fabs(t / prev) : 0.0;
    }
    prev = t;
  }
  if (f.ratio_limit >= 1) {
    throw ConvergenceError("free-energy series diverges: term ratio tends to 4e|g e^{2g}| = " +
                           std::to_string(f.ratio_limit) + " >= 1");
  }
  const double tail = std::fabs(f.last_term) * f.ratio_limit / (1 - f.ratio_limit);
  if (!(tail < 1e-3 * std::fabs(f.partial_sum))) {
    throw ConvergenceError("truncation at order " + std::to_string(order) + " leaves a tail bound of " +
                           std::to_string(tail / std::fabs(f.partial_sum)) +
                           " relative to the partial sum (needs < 1e-3); raise --order");
  }
  const double half = std::exp(2 * g) / 2;
  f.value = half * f.partial_sum;
  f.residual = half * tail;
  return f;
}

}  // namespace lapgraph
