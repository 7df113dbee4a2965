#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "lapgraph/errors.hpp"
#include "lapgraph/rational.hpp"

namespace lapgraph {

/// A partition of {1..k} into non-empty blocks.
///
/// Stored as its restricted growth string: element i (1-based) lies in block
/// rgs[i-1], blocks numbered 0.. in order of their minimum element.
class SetPartition {
 public:
  explicit SetPartition(std::vector<int> rgs) : rgs_(std::move(rgs)) {
    int next = 0;
    for (int b : rgs_) {
      if (b < 0 || b > next) throw ValidationError("not a restricted growth string");
      if (b == next) ++next;
    }
    block_count_ = next;
  }

  int ground_size() const noexcept { return static_cast<int>(rgs_.size()); }
  int block_count() const noexcept { return block_count_; }

  /// Block index (0-based) of element i in 1..k.
  int block_of(int element) const { return rgs_.at(static_cast<std::size_t>(element - 1)); }

  const std::vector<int>& growth_string() const noexcept { return rgs_; }

  /// Blocks as sorted 1-based element lists, ordered by minimum element.
  std::vector<std::vector<int>> blocks() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(block_count_));
    for (int i = 0; i < ground_size(); ++i) out[rgs_[i]].push_back(i + 1);
    return out;
  }

  friend bool operator==(const SetPartition&, const SetPartition&) = default;

 private:
  std::vector<int> rgs_;
  int block_count_ = 0;
};

inline std::string to_string(const SetPartition& p) {
  std::string out;
  for (const auto& block : p.blocks()) {
    out += '{';
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(block[i]);
    }
    out += '}';
  }
  return out;
}

/// Bell numbers via the recurrence B_{n+1} = sum_j C(n,j) B_j.
inline BigInt bell_number(int n) {
  if (n < 0) throw ValidationError("bell_number needs n >= 0");
  std::vector<BigInt> bell{1};
  for (int m = 0; m < n; ++m) {
    BigInt next = 0;
    for (int j = 0; j <= m; ++j) next += binomial(m, j) * bell[j];
    bell.push_back(next);
  }
  return bell[n];
}

/// All set partitions of {1..k} in restricted-growth-string order.
inline std::vector<SetPartition> set_partitions(int k, int max_k = Budgets{}.max_partition_k) {
  if (k < 1) throw ValidationError("set_partitions needs k >= 1");
  if (k > max_k) {
    throw BudgetError("k=" + std::to_string(k) + " exceeds the partition budget " + std::to_string(max_k),
                      "--max-k");
  }
  std::vector<SetPartition> out;
  std::vector<int> rgs(static_cast<std::size_t>(k), 0);
  std::vector<int> prefix_max(static_cast<std::size_t>(k), 0);  // max(rgs[0..i])
  // Odometer over restricted growth strings; rgs[0] is always 0.
  while (true) {
    out.emplace_back(rgs);
    int i = k - 1;
    while (i > 0 && rgs[i] == prefix_max[i - 1] + 1) --i;
    if (i == 0) break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (int j = i + 1; j < k; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  return out;
}

}  // namespace lapgraph
