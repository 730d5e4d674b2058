#pragma once

// Brute-force oracles and the shared fixture corpus for the test suites.
// Oracles touch only raw data (relation membership, minimal-open tables,
// bonding tables) and follow the definitions literally.

#include <cellstruct/examples.hpp>

#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using namespace cellstruct;

inline IndexSet all_cells(std::size_t n) {
  IndexSet s(n);
  for (Index i = 0; i < n; ++i) s[i] = i;
  return s;
}

/// k-step expansion, scanning every candidate cell.
inline IndexSet ball(const CellularGraph& g, Index u, int k) {
  std::vector<bool> in(g.size(), false);
  in[u] = true;
  for (int step = 0; step < k; ++step) {
    std::vector<bool> next = in;
    for (Index a = 0; a < g.size(); ++a)
      if (in[a])
        for (Index b = 0; b < g.size(); ++b)
          if (g.relation().contains(a, b)) next[b] = true;
    in = std::move(next);
  }
  IndexSet out;
  for (Index a = 0; a < g.size(); ++a)
    if (in[a]) out.push_back(a);
  return out;
}

inline bool is_open(const FiniteTopology& t, const IndexSet& s) {
  for (Index u : s)
    for (Index v : t.min_open(u))
      if (std::find(s.begin(), s.end(), v) == s.end()) return false;
  return true;
}

/// Every subset of an n-point space, as sorted index lists (n <= 16).
inline std::vector<IndexSet> power_set(std::size_t n) {
  std::vector<IndexSet> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    IndexSet s;
    for (Index i = 0; i < n; ++i)
      if (mask >> i & 1U) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<IndexSet> open_sets(const FiniteTopology& t) {
  std::vector<IndexSet> out;
  for (auto& s : power_set(t.size()))
    if (is_open(t, s)) out.push_back(std::move(s));
  return out;
}

/// Preimage of every open set is open; needs the full open-set list.
inline bool is_continuous(const FiniteTopology& src, const FiniteTopology& dst,
                          const std::vector<Index>& f) {
  for (const auto& w : open_sets(dst)) {
    IndexSet pre;
    for (Index x = 0; x < f.size(); ++x)
      if (std::find(w.begin(), w.end(), f[x]) != w.end()) pre.push_back(x);
    if (!is_open(src, pre)) return false;
  }
  return true;
}

/// Filter of the full level product.
inline std::vector<Thread> threads(const InverseSequence& s, int depth) {
  std::vector<Thread> out;
  std::vector<Index> digit(static_cast<std::size_t>(depth), 0);
  while (true) {
    bool ok = true;
    for (int n = 1; n < depth && ok; ++n)
      ok = s.bonding(n)[digit[static_cast<std::size_t>(n)]] == digit[static_cast<std::size_t>(n - 1)];
    if (ok) out.push_back(Thread{digit});
    int p = depth - 1;
    while (p >= 0 && ++digit[static_cast<std::size_t>(p)] == s.level(p + 1).size()) {
      digit[static_cast<std::size_t>(p)] = 0;
      --p;
    }
    if (p < 0) break;
  }
  return out;
}

inline std::size_t product_size(const InverseSequence& s, int depth) {
  std::size_t p = 1;
  for (int n = 1; n <= depth; ++n) p *= s.level(n).size();
  return p;
}

inline bool related(const InverseSequence& s, const Thread& a, const Thread& b) {
  for (int n = 1; n <= a.depth(); ++n)
    if (!s.level(n).relation().contains(a.at(n), b.at(n))) return false;
  return true;
}

/// Components of the thread relation by repeated relabelling.
inline std::vector<Index> components(const InverseSequence& s, const std::vector<Thread>& ts) {
  std::vector<Index> label(ts.size());
  for (Index i = 0; i < ts.size(); ++i) label[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (Index a = 0; a < ts.size(); ++a)
      for (Index b = 0; b < ts.size(); ++b)
        if (related(s, ts[a], ts[b]) && label[b] < label[a]) {
          label[a] = label[b];
          changed = true;
        }
  }
  return label;
}

/// Product topology open test: every member's product box lies in the set.
inline bool product_open(const InverseSequence& s, const std::vector<Thread>& ts, const IndexSet& set) {
  for (Index t : set)
    for (Index o = 0; o < ts.size(); ++o) {
      bool inside = true;
      for (int n = 1; n <= ts[t].depth() && inside; ++n) {
        const auto& u = s.level(n).topology().min_open(ts[t].at(n));
        inside = std::find(u.begin(), u.end(), ts[o].at(n)) != u.end();
      }
      if (inside && std::find(set.begin(), set.end(), o) == set.end()) return false;
    }
  return true;
}

/// A_{x_i,U} straight from the displayed condition.
inline std::set<Index> a_set(const TruncatedLimit& lim, int i, const IndexSet& u) {
  const InverseSequence& s = lim.sequence();
  const CellularGraph& g = s.level(i);
  auto in_u = [&](Index c) { return std::find(u.begin(), u.end(), c) != u.end(); };
  std::vector<bool> ring(g.size(), false);
  for (Index a : u)
    for (Index b = 0; b < g.size(); ++b)
      if (g.relation().contains(a, b) && !in_u(b)) ring[b] = true;
  std::set<Index> out;
  for (Index z = 0; z < lim.size(); ++z) {
    if (!in_u(lim.thread(z).at(i))) continue;
    bool some_j = false;
    for (int j = i + 1; j <= lim.depth() && !some_j; ++j) {
      bool all_w = true;
      for (Index w = 0; w < lim.size() && all_w; ++w)
        if (ring[lim.thread(w).at(i)] &&
            s.level(j).relation().contains(lim.thread(z).at(j), lim.thread(w).at(j)))
          all_w = false;
      some_j = all_w;
    }
    if (some_j) out.insert(lim.quotient().class_of[z]);
  }
  return out;
}

/// Closeness straight from the definition.
inline bool close(const InverseSequence& s, CellRef a, CellRef b) {
  const int k = std::min(a.level, b.level);
  Index pa = a.cell, pb = b.cell;
  for (int n = a.level; n > k; --n) pa = s.bonding(n - 1)[pa];
  for (int n = b.level; n > k; --n) pb = s.bonding(n - 1)[pb];
  return s.level(k).relation().contains(pa, pb);
}

/// Random valid finite topology: minimal opens are reachability sets of a
/// random relation.
inline FiniteTopology random_topology(std::size_t n, std::mt19937& rng, double density) {
  std::bernoulli_distribution edge(density);
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (Index a = 0; a < n; ++a) {
    reach[a][a] = true;
    for (Index b = 0; b < n; ++b)
      if (a != b && edge(rng)) reach[a][b] = true;
  }
  for (Index k = 0; k < n; ++k)
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b)
        if (reach[a][k] && reach[k][b]) reach[a][b] = true;
  std::vector<IndexSet> table(n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      if (reach[a][b]) table[a].push_back(b);
  return FiniteTopology::from_min_open(std::move(table));
}

/// Random sequence with total bondings; relations, bondings and topologies
/// are unconstrained, so it need not pass validate_sequence.
inline InverseSequence random_sequence(std::mt19937& rng, int levels, std::size_t max_cells,
                                       bool topologies) {
  std::uniform_int_distribution<std::size_t> size_dist(1, max_cells);
  std::bernoulli_distribution edge(0.3);
  std::vector<CellularGraph> gs;
  std::vector<std::vector<Index>> bondings;
  std::size_t prev = 0;
  for (int n = 1; n <= levels; ++n) {
    const std::size_t size = size_dist(rng);
    std::vector<CellId> cells;
    for (std::size_t c = 0; c < size; ++c)
      cells.push_back("c" + std::string(1, static_cast<char>('a' + c / 26)) +
                      std::string(1, static_cast<char>('a' + c % 26)));
    std::vector<IndexPair> pairs;
    for (Index a = 0; a < size; ++a)
      for (Index b = a + 1; b < size; ++b)
        if (edge(rng)) pairs.emplace_back(a, b);
    FiniteTopology t = topologies ? random_topology(size, rng, 0.2) : FiniteTopology::discrete(size);
    gs.emplace_back(std::move(cells), Relation::closure(size, pairs), std::move(t));
    if (n > 1) {
      std::uniform_int_distribution<Index> parent(0, prev - 1);
      std::vector<Index> table(size);
      for (auto& p : table) p = parent(rng);
      bondings.push_back(std::move(table));
    }
    prev = size;
  }
  return InverseSequence(std::move(gs), std::move(bondings));
}

struct Fixture {
  std::string name;
  InverseSequence seq;
};

/// Named generator fixtures plus seeded random ones.
inline std::vector<Fixture> corpus() {
  std::vector<Fixture> out;
  for (int l = 1; l <= 5; ++l) out.push_back({"dyadic L=" + std::to_string(l), generate({"dyadic_interval", l, 2, false})});
  for (int l = 1; l <= 4; ++l) out.push_back({"cantor L=" + std::to_string(l), generate({"cantor", l, 2, false})});
  for (bool k : {false, true}) {
    const std::string tag = k ? " khalimsky" : "";
    out.push_back({"ex_fcont_G m=2 L=3" + tag, generate({"ex_fcont_G", 3, 2, k})});
    out.push_back({"ex_fcont_H m=2 L=3" + tag, generate({"ex_fcont_H", 3, 2, k})});
    out.push_back({"ex_fcont_H m=3 L=2" + tag, generate({"ex_fcont_H", 2, 3, k})});
    out.push_back({"sine_curve_H m=2 L=3" + tag, generate({"sine_curve_H", 3, 2, k})});
    out.push_back({"sine_curve_H m=3 L=4" + tag, generate({"sine_curve_H", 4, 3, k})});
  }
  out.push_back({"khalimsky m=2 L=2", generate({"khalimsky_interval", 2, 2, false})});
  auto fi = full_image_fixture(3);
  out.push_back({"full_image source", fi.source});
  out.push_back({"full_image target", fi.target});
  std::mt19937 rng(20240601);
  for (int r = 0; r < 12; ++r)
    out.push_back({"random#" + std::to_string(r), random_sequence(rng, 2 + r % 3, 5, r % 2 == 1)});
  return out;
}

}  // namespace oracle
