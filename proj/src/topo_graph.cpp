#include <cellstruct/topo_graph.hpp>

#include <string>

namespace cellstruct {

Relation Relation::closure(std::size_t n, std::span<const IndexPair> pairs) {
  Relation r;
  r.adj_.assign(n, {});
  r.bits_.assign(n * n, false);
  auto add = [&](Index a, Index b) {
    if (!r.bits_[a * n + b]) {
      r.bits_[a * n + b] = true;
      r.adj_[a].push_back(b);
    }
  };
  for (Index u = 0; u < n; ++u) add(u, u);
  for (const auto& [a, b] : pairs) {
    if (a >= n || b >= n) throw Error("relation pair references index outside the level");
    add(a, b);
    add(b, a);
  }
  for (auto& row : r.adj_) std::sort(row.begin(), row.end());
  return r;
}

Relation Relation::diagonal(std::size_t n) { return closure(n, {}); }

Relation Relation::complete(std::size_t n) {
  std::vector<IndexPair> all;
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b) all.emplace_back(a, b);
  return closure(n, all);
}

std::vector<IndexPair> Relation::pairs() const {
  std::vector<IndexPair> out;
  for (Index a = 0; a < adj_.size(); ++a)
    for (Index b : adj_[a]) out.emplace_back(a, b);
  return out;
}

std::size_t Relation::pair_count() const {
  std::size_t total = 0;
  for (const auto& row : adj_) total += row.size();
  return total;
}

bool Relation::is_diagonal() const { return pair_count() == size(); }

bool Relation::is_complete() const { return pair_count() == size() * size(); }

FiniteTopology FiniteTopology::discrete(std::size_t n) {
  FiniteTopology t;
  t.min_open_.resize(n);
  for (Index u = 0; u < n; ++u) t.min_open_[u] = {u};
  return t;
}

FiniteTopology FiniteTopology::from_min_open(std::vector<IndexSet> table) {
  const std::size_t n = table.size();
  for (auto& entry : table) {
    normalize(entry);
    if (!entry.empty() && entry.back() >= n)
      throw Error("minimal-open table references index outside the level");
  }
  for (Index u = 0; u < n; ++u) {
    if (!contains(table[u], u))
      throw Error("minimal open set of point " + std::to_string(u) + " does not contain it");
    for (Index v : table[u])
      if (!is_subset(table[v], table[u]))
        throw Error("minimal-open table is not nested at points " + std::to_string(u) + ", " +
                    std::to_string(v));
  }
  FiniteTopology t;
  t.min_open_ = std::move(table);
  return t;
}

bool FiniteTopology::is_open(const IndexSet& s) const {
  for (Index u : s)
    if (!is_subset(min_open_.at(u), s)) return false;
  return true;
}

IndexSet FiniteTopology::up_closure(const IndexSet& s) const {
  IndexSet out;
  for (Index u : s) out.insert(out.end(), min_open_.at(u).begin(), min_open_.at(u).end());
  normalize(out);
  return out;
}

bool FiniteTopology::is_discrete() const {
  for (const auto& entry : min_open_)
    if (entry.size() != 1) return false;
  return true;
}

std::optional<IndexPair> FiniteTopology::hausdorff_violation(const IndexSet& s) const {
  // A finite space is T2 iff it is discrete.
  for (Index u : s)
    for (Index v : min_open_.at(u))
      if (v != u && contains(s, v)) return IndexPair{u, v};
  return std::nullopt;
}

CellularGraph::CellularGraph(std::vector<CellId> cells, Relation relation,
                             FiniteTopology topology)
    : cells_(std::move(cells)), relation_(std::move(relation)), topology_(std::move(topology)) {
  if (cells_.empty()) throw Error("a level must contain at least one cell");
  for (std::size_t i = 1; i < cells_.size(); ++i)
    if (!(cells_[i - 1] < cells_[i]))
      throw Error("cell ids must be unique and sorted (offending id '" + cells_[i] + "')");
  if (relation_.size() != cells_.size() || topology_.size() != cells_.size())
    throw Error("relation or topology size does not match the cell set");
}

std::optional<Index> CellularGraph::find(const CellId& id) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), id);
  if (it == cells_.end() || *it != id) return std::nullopt;
  return static_cast<Index>(it - cells_.begin());
}

Index CellularGraph::index_of(const CellId& id) const {
  if (auto found = find(id)) return *found;
  throw Error("unknown cell id '" + id + "'");
}

CellularGraph CellularGraph::with_topology(FiniteTopology topology) const {
  return CellularGraph(cells_, relation_, std::move(topology));
}

Relation close_relation(const std::vector<CellId>& cells,
                        const std::vector<std::pair<CellId, CellId>>& pairs) {
  std::map<CellId, Index> pos;
  for (Index i = 0; i < cells.size(); ++i) pos.emplace(cells[i], i);
  auto lookup = [&](const CellId& id) {
    auto it = pos.find(id);
    if (it == pos.end()) throw Error("unknown cell id '" + id + "' in relation");
    return it->second;
  };
  std::vector<IndexPair> idx;
  idx.reserve(pairs.size());
  for (const auto& [a, b] : pairs) idx.emplace_back(lookup(a), lookup(b));
  return Relation::closure(cells.size(), idx);
}

CellularGraph make_graph(std::vector<CellId> cells,
                         const std::vector<std::pair<CellId, CellId>>& pairs,
                         const std::map<CellId, std::vector<CellId>>& min_open) {
  std::sort(cells.begin(), cells.end());
  if (std::adjacent_find(cells.begin(), cells.end()) != cells.end())
    throw Error("duplicate cell id in level");
  Relation relation = close_relation(cells, pairs);
  FiniteTopology topology = FiniteTopology::discrete(cells.size());
  if (!min_open.empty()) {
    std::vector<IndexSet> table(cells.size());
    for (Index u = 0; u < cells.size(); ++u) table[u] = {u};
    for (const auto& [id, members] : min_open) {
      auto it = std::lower_bound(cells.begin(), cells.end(), id);
      if (it == cells.end() || *it != id) throw Error("unknown cell id '" + id + "' in min_open");
      IndexSet entry;
      for (const auto& m : members) {
        auto jt = std::lower_bound(cells.begin(), cells.end(), m);
        if (jt == cells.end() || *jt != m)
          throw Error("unknown cell id '" + m + "' in min_open");
        entry.push_back(static_cast<Index>(jt - cells.begin()));
      }
      table[static_cast<Index>(it - cells.begin())] = std::move(entry);
    }
    topology = FiniteTopology::from_min_open(std::move(table));
  }
  return CellularGraph(std::move(cells), std::move(relation), std::move(topology));
}

namespace detail {
IndexSet expand(const Relation& r, IndexSet seed, int steps) {
  normalize(seed);
  for (int s = 0; s < steps; ++s) {
    IndexSet next;
    for (Index u : seed) next.insert(next.end(), r.neighbors(u).begin(), r.neighbors(u).end());
    normalize(next);
    seed = std::move(next);
  }
  return seed;
}
}  // namespace detail

IndexSet ball(const CellularGraph& g, Index u, int k) {
  if (u >= g.size()) throw Error("ball: unknown cell index " + std::to_string(u));
  if (k < 1 || k > 3) throw Error("ball: radius multiplier must be 1, 2 or 3");
  return detail::expand(g.relation(), {u}, k);
}

IndexSet ball_of_set(const CellularGraph& g, const IndexSet& a) {
  for (Index u : a)
    if (u >= g.size()) throw Error("ball_of_set: unknown cell index " + std::to_string(u));
  return detail::expand(g.relation(), a, 1);
}

bool is_open(const CellularGraph& g, const IndexSet& s) {
  for (Index u : s)
    if (u >= g.size()) throw Error("is_open: unknown cell index " + std::to_string(u));
  IndexSet sorted = s;
  normalize(sorted);
  return g.topology().is_open(sorted);
}

ContinuityReport is_continuous_map(const FiniteTopology& src, const FiniteTopology& dst,
                                   std::span<const Index> f) {
  if (f.size() != src.size()) throw Error("map table is not total on the source");
  for (Index y : f)
    if (y >= dst.size()) throw Error("map table references a point outside the target");
  // Continuity on finite spaces is monotonicity for the specialization order:
  // f(U(x)) must lie in U(f(x)).
  for (Index x = 0; x < src.size(); ++x) {
    const IndexSet& target = dst.min_open(f[x]);
    for (Index y : src.min_open(x))
      if (!contains(target, f[y])) return {false, IndexPair{x, y}};
  }
  return {};
}

ContinuityReport is_continuous_map(const CellularGraph& src, const CellularGraph& dst,
                                   std::span<const Index> f) {
  return is_continuous_map(src.topology(), dst.topology(), f);
}

}  // namespace cellstruct
