#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "lapgraph/errors.hpp"
#include "lapgraph/rational.hpp"

namespace lapgraph {

/// One of the q ordered legs of a star vertex. Both fields are 1-based.
struct OffSpread {
  int vertex = 1;
  int slot = 1;

  friend auto operator<=>(const OffSpread&, const OffSpread&) = default;
};

inline std::string to_string(const OffSpread& o) {
  return std::to_string(o.vertex) + "." + std::to_string(o.slot);
}

/// A coloring of the q*k off-spreads of k star vertices.
///
/// Only color groups (blocks of two or more glued off-spreads) are stored;
/// every other off-spread is grey. Groups are kept sorted internally and
/// ordered by their smallest member, so equal colorings compare equal.
class Diagram {
 public:
  Diagram(int k, int q, std::vector<std::vector<OffSpread>> groups) : k_(k), q_(q), groups_(std::move(groups)) {
    if (k < 1 || k > 64) throw ValidationError("diagram vertex count must be in 1..64");
    if (q < 1) throw ValidationError("diagram valence must be >= 1");
    std::vector<bool> seen(static_cast<std::size_t>(k * q), false);
    for (auto& g : groups_) {
      if (g.size() < 2) throw ValidationError("a color group needs at least two off-spreads");
      for (const auto& o : g) {
        if (o.vertex < 1 || o.vertex > k || o.slot < 1 || o.slot > q) {
          throw ValidationError("off-spread " + to_string(o) + " out of range");
        }
        auto idx = static_cast<std::size_t>((o.vertex - 1) * q + (o.slot - 1));
        if (seen[idx]) throw ValidationError("off-spread " + to_string(o) + " appears twice");
        seen[idx] = true;
      }
      std::sort(g.begin(), g.end());
    }
    std::sort(groups_.begin(), groups_.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  }

  int k() const noexcept { return k_; }
  int q() const noexcept { return q_; }
  const std::vector<std::vector<OffSpread>>& groups() const noexcept { return groups_; }
  int group_count() const noexcept { return static_cast<int>(groups_.size()); }

  /// mu_s = |group s| - 1, the number of arcs in each group.
  std::vector<int> mu() const {
    std::vector<int> out;
    for (const auto& g : groups_) out.push_back(static_cast<int>(g.size()) - 1);
    return out;
  }

  int colored_count() const {
    int n = 0;
    for (const auto& g : groups_) n += static_cast<int>(g.size());
    return n;
  }

  int grey_count() const { return k_ * q_ - colored_count(); }

  std::vector<OffSpread> grey() const {
    std::vector<OffSpread> out;
    for (int v = 1; v <= k_; ++v) {
      for (int s = 1; s <= q_; ++s) {
        OffSpread o{v, s};
        bool colored = std::any_of(groups_.begin(), groups_.end(), [&](const auto& g) {
          return std::find(g.begin(), g.end(), o) != g.end();
        });
        if (!colored) out.push_back(o);
      }
    }
    return out;
  }

  /// Bit v-1 is set when the group touches vertex v.
  std::uint64_t vertex_mask(std::size_t group) const {
    std::uint64_t m = 0;
    for (const auto& o : groups_.at(group)) m |= std::uint64_t{1} << (o.vertex - 1);
    return m;
  }

  friend bool operator==(const Diagram&, const Diagram&) = default;

 private:
  int k_;
  int q_;
  std::vector<std::vector<OffSpread>> groups_;
};

/// Canonical text form: groups as "[v.s v.s ...]", grey legs omitted, "[]"
/// for a diagram without groups.
inline std::string to_string(const Diagram& d) {
  if (d.groups().empty()) return "[]";
  std::string out;
  for (const auto& g : d.groups()) {
    out += '[';
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (i) out += ' ';
      out += to_string(g[i]);
    }
    out += ']';
  }
  return out;
}

inline Diagram parse_diagram(int k, int q, std::string_view text) {
  std::vector<std::vector<OffSpread>> groups;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw ValidationError("cannot parse diagram '" + std::string(text) + "': " + why);
  };
  auto read_int = [&]() {
    std::size_t start = i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
    if (start == i) fail("expected a number");
    return std::stoi(std::string(text.substr(start, i - start)));
  };
  while (i < text.size()) {
    if (text[i] == ' ') {
      ++i;
      continue;
    }
    if (text[i] != '[') fail("expected '['");
    ++i;
    std::vector<OffSpread> group;
    while (i < text.size() && text[i] != ']') {
      if (text[i] == ' ') {
        ++i;
        continue;
      }
      int v = read_int();
      if (i >= text.size() || text[i] != '.') fail("expected '.'");
      ++i;
      int s = read_int();
      group.push_back({v, s});
    }
    if (i >= text.size()) fail("unterminated group");
    ++i;
    if (!group.empty()) groups.push_back(std::move(group));
  }
  return Diagram(k, q, std::move(groups));
}

/// True iff no group glues a vertex to itself, the arc count sum(mu) is k-1,
/// and the groups connect all k vertices (together: a hypertree).
inline bool is_valid_diagram(const Diagram& d) {
  int arcs = 0;
  std::vector<int> parent(static_cast<std::size_t>(d.k()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t s = 0; s < d.groups().size(); ++s) {
    const auto& g = d.groups()[s];
    if (std::popcount(d.vertex_mask(s)) != static_cast<int>(g.size())) return false;
    arcs += static_cast<int>(g.size()) - 1;
    for (std::size_t i = 1; i < g.size(); ++i) parent[find(g[i].vertex - 1)] = find(g[0].vertex - 1);
  }
  if (arcs != d.k() - 1) return false;
  for (int v = 1; v < d.k(); ++v) {
    if (find(v) != find(0)) return false;
  }
  return true;
}

enum class Orientation { direct, inverse };

struct Arc {
  OffSpread from;
  OffSpread to;
  Orientation orientation = Orientation::direct;

  friend bool operator==(const Arc&, const Arc&) = default;
};

struct ArcList {
  std::vector<Arc> arcs;
};

/// Nearest-neighbour arcs: inside each group, members joined consecutively in
/// vertex order. All arcs carry the direct orientation.
inline ArcList reduced_arcs(const Diagram& d) {
  if (!is_valid_diagram(d)) throw ValidationError("reduced_arcs needs a valid diagram");
  ArcList out;
  for (const auto& g : d.groups()) {
    for (std::size_t i = 1; i < g.size(); ++i) out.arcs.push_back({g[i - 1], g[i], Orientation::direct});
  }
  return out;
}

/// The coloring realised by a set of arcs (glued off-spreads share a group).
inline Diagram diagram_from_arcs(int k, int q, const ArcList& arcs) {
  const int slots = k * q;
  std::vector<int> parent(static_cast<std::size_t>(slots));
  std::iota(parent.begin(), parent.end(), 0);
  auto index = [&](const OffSpread& o) {
    if (o.vertex < 1 || o.vertex > k || o.slot < 1 || o.slot > q) {
      throw ValidationError("arc endpoint " + to_string(o) + " out of range");
    }
    return (o.vertex - 1) * q + (o.slot - 1);
  };
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& a : arcs.arcs) parent[find(index(a.from))] = find(index(a.to));
  std::vector<std::vector<OffSpread>> by_root(static_cast<std::size_t>(slots));
  for (int i = 0; i < slots; ++i) by_root[find(i)].push_back({i / q + 1, i % q + 1});
  std::vector<std::vector<OffSpread>> groups;
  for (auto& g : by_root) {
    if (g.size() >= 2) groups.push_back(std::move(g));
  }
  return Diagram(k, q, std::move(groups));
}

/// Two gluing senses per arc: 2^(k-1).
inline BigInt orientation_multiplicity(const Diagram& d) {
  if (!is_valid_diagram(d)) throw ValidationError("orientation_multiplicity needs a valid diagram");
  return ipow(BigInt(2), static_cast<unsigned>(d.k() - 1));
}

/// Compact view of an enumerated diagram: one vertex bitmask per color
/// group plus the grey count. Enough to evaluate weights.
struct DiagramShape {
  std::vector<std::uint64_t> group_masks;
  int grey = 0;
};

namespace detail {

/// Depth-first block assignment over off-spreads in (vertex, slot) order.
/// Each off-spread either joins an existing block (first by block index) or
/// opens a new one, i.e. restricted-growth-string order. A join is refused
/// if the block already touches the vertex or if it would close a cycle.
class DiagramSearch {
 public:
  DiagramSearch(int k, int q) : k_(k), q_(q), slots_(k * q) {}

  template <class Leaf>
  void run(Leaf&& leaf) {
    std::vector<int> comp(static_cast<std::size_t>(k_));
    std::iota(comp.begin(), comp.end(), 0);
    recurse(0, 0, comp, leaf);
  }

  const std::vector<std::vector<int>>& members() const noexcept { return members_; }
  const std::vector<std::uint64_t>& masks() const noexcept { return masks_; }

 private:
  template <class Leaf>
  void recurse(int i, int arcs, const std::vector<int>& comp, Leaf& leaf) {
    if (i == slots_) {
      if (arcs == k_ - 1) leaf();
      return;
    }
    if (arcs + (slots_ - i) < k_ - 1) return;
    const int v = i / q_;
    const std::uint64_t vbit = std::uint64_t{1} << v;
    if (arcs < k_ - 1) {
      for (std::size_t b = 0; b < masks_.size(); ++b) {
        if (masks_[b] & vbit) continue;
        const int other = comp[static_cast<std::size_t>(std::countr_zero(masks_[b]))];
        const int mine = comp[static_cast<std::size_t>(v)];
        if (other == mine) continue;
        std::vector<int> merged = comp;
        for (auto& c : merged) {
          if (c == other) c = mine;
        }
        masks_[b] |= vbit;
        members_[b].push_back(i);
        recurse(i + 1, arcs + 1, merged, leaf);
        members_[b].pop_back();
        masks_[b] &= ~vbit;
      }
    }
    masks_.push_back(vbit);
    members_.push_back({i});
    recurse(i + 1, arcs, comp, leaf);
    members_.pop_back();
    masks_.pop_back();
  }

  int k_;
  int q_;
  int slots_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::vector<int>> members_;
};

inline void check_diagram_budget(int k, int q, int max_slots) {
  if (k < 1) throw ValidationError("diagram enumeration needs k >= 1");
  if (q < 2) throw ValidationError("diagram enumeration needs q >= 2");
  if (k > 64) throw ValidationError("diagram enumeration supports at most 64 vertices");
  if (k * q > max_slots) {
    throw BudgetError("q*k=" + std::to_string(k * q) + " exceeds the diagram budget of " +
                          std::to_string(max_slots) + " off-spreads",
                      "--max-slots");
  }
}

}  // namespace detail

/// Calls fn(const DiagramShape&) for every diagram, in enumeration order.
template <class Fn>
void for_each_diagram_shape(int k, int q, Fn&& fn, int max_slots = Budgets{}.max_diagram_slots) {
  detail::check_diagram_budget(k, q, max_slots);
  detail::DiagramSearch search(k, q);
  DiagramShape shape;
  search.run([&] {
    shape.group_masks.clear();
    int colored = 0;
    for (std::size_t b = 0; b < search.masks().size(); ++b) {
      const auto size = static_cast<int>(search.members()[b].size());
      if (size >= 2) {
        shape.group_masks.push_back(search.masks()[b]);
        colored += size;
      }
    }
    shape.grey = k * q - colored;
    fn(static_cast<const DiagramShape&>(shape));
  });
}

/// Calls fn(const Diagram&) for every connected reduced acyclic diagram.
template <class Fn>
void for_each_diagram(int k, int q, Fn&& fn, int max_slots = Budgets{}.max_diagram_slots) {
  detail::check_diagram_budget(k, q, max_slots);
  detail::DiagramSearch search(k, q);
  search.run([&] {
    std::vector<std::vector<OffSpread>> groups;
    for (const auto& block : search.members()) {
      if (block.size() < 2) continue;
      std::vector<OffSpread> g;
      for (int idx : block) g.push_back({idx / q + 1, idx % q + 1});
      groups.push_back(std::move(g));
    }
    fn(Diagram(k, q, std::move(groups)));
  });
}

inline std::vector<Diagram> enumerate_diagrams(int k, int q, int max_slots = Budgets{}.max_diagram_slots) {
  std::vector<Diagram> out;
  for_each_diagram(k, q, [&](const Diagram& d) { out.push_back(d); }, max_slots);
  return out;
}

inline std::uint64_t count_diagrams(int k, int q, int max_slots = Budgets{}.max_diagram_slots) {
  detail::check_diagram_budget(k, q, max_slots);
  detail::DiagramSearch search(k, q);
  std::uint64_t n = 0;
  search.run([&] { ++n; });
  return n;
}

}  // namespace lapgraph
