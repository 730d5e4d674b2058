#pragma once

// Finite cellular graphs: a cell set with a reflexive symmetric relation and
// a finite topology given by its minimal-open-neighbourhood table.

#include <cellstruct/core.hpp>

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cellstruct {

using IndexPair = std::pair<Index, Index>;

/// Reflexive and symmetric relation on the points {0, ..., n-1}.
class Relation {
 public:
  Relation() = default;

  /// Reflexive-symmetric closure of `pairs`. Throws Error on an index >= n.
  static Relation closure(std::size_t n, std::span<const IndexPair> pairs);
  static Relation diagonal(std::size_t n);
  static Relation complete(std::size_t n);

  std::size_t size() const { return adj_.size(); }
  bool contains(Index a, Index b) const { return bits_[a * adj_.size() + b]; }
  /// B(u, r): every v with (u, v) in the relation, ascending.
  const IndexSet& neighbors(Index u) const { return adj_[u]; }

  /// All ordered pairs, lexicographically.
  std::vector<IndexPair> pairs() const;
  /// Number of ordered pairs.
  std::size_t pair_count() const;
  bool is_diagonal() const;
  /// Every pair of points related.
  bool is_complete() const;

  friend bool operator==(const Relation& a, const Relation& b) { return a.adj_ == b.adj_; }

 private:
  std::vector<IndexSet> adj_;
  std::vector<bool> bits_;
};

/// Finite topology stored as the table u -> smallest open set containing u.
///
/// A table is valid iff u lies in its own entry and the entries are nested
/// along membership (v in U(u) implies U(v) subset of U(u)); opens are then
/// exactly the unions of entries.
class FiniteTopology {
 public:
  FiniteTopology() = default;

  static FiniteTopology discrete(std::size_t n);
  /// Validates the table; entries need not be sorted. Throws Error.
  static FiniteTopology from_min_open(std::vector<IndexSet> table);

  std::size_t size() const { return min_open_.size(); }
  const IndexSet& min_open(Index u) const { return min_open_[u]; }
  const std::vector<IndexSet>& table() const { return min_open_; }

  bool is_open(const IndexSet& s) const;
  /// Smallest open set containing `s`.
  IndexSet up_closure(const IndexSet& s) const;
  bool is_discrete() const;
  /// Whether the subspace topology on `s` is T2. On failure returns the point
  /// u of `s` whose subspace neighbourhood is not {u}, together with an
  /// offending member of that neighbourhood.
  std::optional<IndexPair> hausdorff_violation(const IndexSet& s) const;

  friend bool operator==(const FiniteTopology& a, const FiniteTopology& b) {
    return a.min_open_ == b.min_open_;
  }

 private:
  std::vector<IndexSet> min_open_;
};

/// One level G_n. Cell ids are strictly ascending so that index order is the
/// lexicographic order on ids.
class CellularGraph {
 public:
  CellularGraph() = default;
  CellularGraph(std::vector<CellId> cells, Relation relation, FiniteTopology topology);

  std::size_t size() const { return cells_.size(); }
  const std::vector<CellId>& cells() const { return cells_; }
  const CellId& id(Index u) const { return cells_.at(u); }
  /// Throws Error for an unknown id.
  Index index_of(const CellId& id) const;
  std::optional<Index> find(const CellId& id) const;

  const Relation& relation() const { return relation_; }
  const FiniteTopology& topology() const { return topology_; }

  CellularGraph with_topology(FiniteTopology topology) const;

  friend bool operator==(const CellularGraph& a, const CellularGraph& b) {
    return a.cells_ == b.cells_ && a.relation_ == b.relation_ && a.topology_ == b.topology_;
  }

 private:
  std::vector<CellId> cells_;
  Relation relation_;
  FiniteTopology topology_;
};

/// Reflexive-symmetric closure over `cells` (indices follow the given order).
/// Throws Error on ids missing from `cells`.
Relation close_relation(const std::vector<CellId>& cells,
                        const std::vector<std::pair<CellId, CellId>>& pairs);

/// Builds a level from ids. Cells are sorted; `min_open` (id -> ids) defaults
/// to the discrete topology when empty.
CellularGraph make_graph(std::vector<CellId> cells,
                         const std::vector<std::pair<CellId, CellId>>& pairs,
                         const std::map<CellId, std::vector<CellId>>& min_open = {});

/// B(u, k r) for k in {1, 2, 3}.
IndexSet ball(const CellularGraph& g, Index u, int k);
/// B(A, r).
IndexSet ball_of_set(const CellularGraph& g, const IndexSet& a);
bool is_open(const CellularGraph& g, const IndexSet& s);

struct ContinuityReport {
  bool continuous = true;
  /// (x, y) with y in U(x) but f(y) outside U(f(x)); lexicographically first.
  std::optional<IndexPair> witness;
};

ContinuityReport is_continuous_map(const FiniteTopology& src, const FiniteTopology& dst,
                                   std::span<const Index> f);
ContinuityReport is_continuous_map(const CellularGraph& src, const CellularGraph& dst,
                                   std::span<const Index> f);

namespace detail {
/// `steps`-fold relational expansion of `seed`.
IndexSet expand(const Relation& r, IndexSet seed, int steps);
}  // namespace detail

}  // namespace cellstruct
