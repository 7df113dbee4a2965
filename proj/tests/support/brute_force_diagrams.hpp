#pragma once

#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "lapgraph/diagrams.hpp"

namespace lapgraph::oracle {

// Walks every set partition of the q*k off-spreads (all Bell(q*k) of them)
// and keeps those whose blocks of size >= 2 avoid repeated vertices, carry
// k-1 arcs in total and connect the k vertices.
struct BruteForce {
  BruteForce(int k_, int q_) : k(k_), q(q_) {}

  int k;
  int q;
  std::uint64_t count = 0;
  std::set<std::string> texts;
  bool keep_texts = false;

  void run() {
    std::vector<int> rgs(static_cast<std::size_t>(k * q), 0);
    recurse(rgs, 1, 0);
  }

  void recurse(std::vector<int>& rgs, int pos, int max_label) {
    if (pos == k * q) {
      check(rgs, max_label + 1);
      return;
    }
    for (int b = 0; b <= max_label + 1; ++b) {
      rgs[pos] = b;
      recurse(rgs, pos + 1, std::max(max_label, b));
    }
  }

  void check(const std::vector<int>& rgs, int blocks) {
    std::vector<std::vector<int>> members(static_cast<std::size_t>(blocks));
    for (int i = 0; i < k * q; ++i) members[rgs[i]].push_back(i);
    std::vector<int> parent(static_cast<std::size_t>(k));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    int arcs = 0;
    for (const auto& m : members) {
      if (m.size() < 2) continue;
      std::set<int> vertices;
      for (int i : m) vertices.insert(i / q);
      if (vertices.size() != m.size()) return;
      arcs += static_cast<int>(m.size()) - 1;
      for (int v : vertices) parent[find(v)] = find(*vertices.begin());
    }
    if (arcs != k - 1) return;
    for (int v = 0; v < k; ++v) {
      if (find(v) != find(0)) return;
    }
    ++count;
    if (keep_texts) {
      std::vector<std::vector<OffSpread>> groups;
      for (const auto& m : members) {
        if (m.size() < 2) continue;
        std::vector<OffSpread> g;
        for (int i : m) g.push_back({i / q + 1, i % q + 1});
        groups.push_back(g);
      }
      texts.insert(to_string(Diagram(k, q, groups)));
    }
  }
};

}  // namespace lapgraph::oracle
