#pragma once

// Inverse sequences of cellular graphs truncated at a finite depth D.
//
// Everything that depends on the inverse limit is evaluated on the depth-D
// truncation: threads are bonding-compatible vectors (x_1, ..., x_D), the
// natural relation compares coordinates at levels <= D, and the quotient is
// taken by the transitive closure of that relation. Levels are 1-based in the
// public API.

#include <cellstruct/topo_graph.hpp>

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cellstruct {

inline constexpr Index kUnmapped = std::numeric_limits<Index>::max();

class InverseSequence {
 public:
  InverseSequence() = default;
  /// `bondings[n - 1]` is the table of g_n^{n+1} (level n+1 -> level n).
  /// Entries may be kUnmapped; validate_sequence reports them.
  InverseSequence(std::vector<CellularGraph> levels, std::vector<std::vector<Index>> bondings);

  int depth() const { return static_cast<int>(levels_.size()); }
  const CellularGraph& level(int n) const;
  const std::vector<CellularGraph>& levels() const { return levels_; }
  /// Table of g_n^{n+1}.
  const std::vector<Index>& bonding(int n) const;
  const std::vector<std::vector<Index>>& bondings() const { return bondings_; }
  /// Cells of level n+1 that g_n^{n+1} sends to x, ascending.
  const IndexSet& children(int n, Index x) const;

  bool is_total() const;
  /// g_to^from(x).
  Index project(int from, Index x, int to) const;

  InverseSequence with_levels(std::vector<CellularGraph> levels) const;

  friend bool operator==(const InverseSequence& a, const InverseSequence& b) {
    return a.levels_ == b.levels_ && a.bondings_ == b.bondings_;
  }

 private:
  void check_level(int n) const;

  std::vector<CellularGraph> levels_;
  std::vector<std::vector<Index>> bondings_;
  std::vector<std::vector<IndexSet>> children_;
};

// ---------------------------------------------------------------------------
// Validation

struct LevelValidation {
  int level = 0;  ///< bonding g_level^{level+1}
  bool total = true;
  std::optional<Index> untotal_cell;  ///< level+1 cell without image
  bool edges_preserved = true;
  std::optional<IndexPair> edge_witness;  ///< related pair at level+1 mapped apart
  bool continuous = true;
  std::optional<IndexPair> continuity_witness;  ///< (x, y) at level+1, y in U(x)
};

struct SequenceValidation {
  std::vector<LevelValidation> bondings;
  bool ok() const;
};

SequenceValidation validate_sequence(const InverseSequence& s);

/// Table of g_i^j on level j; g_i^i is the identity.
std::vector<Index> compose_bonding(const InverseSequence& s, int i, int j);

// ---------------------------------------------------------------------------
// Threads

struct Thread {
  std::vector<Index> coords;  ///< coords[n - 1] lies in G_n

  int depth() const { return static_cast<int>(coords.size()); }
  Index at(int level) const { return coords.at(static_cast<std::size_t>(level - 1)); }
  friend auto operator<=>(const Thread&, const Thread&) = default;
};

/// All depth-D threads, lexicographically ordered.
std::vector<Thread> enumerate_threads(const InverseSequence& s, int depth);

struct ThreadRelation {
  Relation relation;  ///< over enumerate_threads order
  bool transitive = true;
  /// Threads (a, b, c) with a~b, b~c but not a~c; lexicographically first.
  std::optional<std::array<Index, 3>> witness;
};

ThreadRelation thread_relation(const InverseSequence& s, int depth);

struct QuotientSpace {
  int depth = 0;
  /// Classes of the transitive closure of the depth-D relation, as sorted
  /// thread indices, ordered by least member.
  std::vector<IndexSet> classes;
  std::vector<Index> class_of;
  /// Quotient of the depth-D product topology.
  FiniteTopology topology;
  bool transitive = true;
  std::optional<std::array<Index, 3>> transitivity_witness;

  std::size_t size() const { return classes.size(); }
  /// pi^{-1}(pi(S)).
  IndexSet saturate(const IndexSet& threads) const;
};

QuotientSpace quotient(const InverseSequence& s, int depth);

/// The depth-D truncation of the inverse limit with everything derived from it:
/// threads, natural relation, product topology and quotient.
class TruncatedLimit {
 public:
  TruncatedLimit() = default;
  TruncatedLimit(InverseSequence seq, int depth);

  const InverseSequence& sequence() const { return seq_; }
  int depth() const { return depth_; }
  const std::vector<Thread>& threads() const { return threads_; }
  std::size_t size() const { return threads_.size(); }
  const Thread& thread(Index t) const { return threads_.at(t); }
  std::optional<Index> find_thread(const Thread& t) const;
  Index thread_index(const Thread& t) const;
  /// Index of the thread whose level-D coordinate is x.
  Index thread_ending_at(Index x) const { return by_last_.at(x); }
  /// p_level^{-1}(x), ascending.
  IndexSet threads_through(int level, Index x) const;

  const ThreadRelation& relation() const { return relation_; }
  const FiniteTopology& topology() const { return topology_; }
  const QuotientSpace& quotient() const { return quotient_; }

 private:
  InverseSequence seq_;
  int depth_ = 0;
  std::vector<Thread> threads_;
  std::vector<Index> by_last_;
  ThreadRelation relation_;
  FiniteTopology topology_;
  QuotientSpace quotient_;
};

/// Subspace-of-product topology on the depth-D threads.
FiniteTopology product_topology(const InverseSequence& s, const std::vector<Thread>& threads);

/// A_{x_i,U}: classes with a member z, z_i in U, that for some i < j <= D is
/// r_j-separated at level j from every thread through B(U, r_i) \ U.
/// Requires U open in G_i and i < D.
IndexSet a_set(const TruncatedLimit& lim, int level, Index x, const IndexSet& u);

// ---------------------------------------------------------------------------
// Cell-structure axioms

struct ThreadAxiomEntry {
  Index thread = 0;
  int level = 0;                ///< i
  std::optional<int> least_j;   ///< least i <= j <= D with the contraction
};

struct CellStructureReport {
  int depth = 0;
  bool levels_discrete = true;
  /// (a) g_i^j(B(x_j, 2r_j)) subset of B(x_i, r_i), per thread and i < D.
  std::vector<ThreadAxiomEntry> per_thread;
  bool per_thread_ok = true;
  std::optional<ThreadAxiomEntry> per_thread_witness;
  /// (b) least j working for every x in G_j at once, indexed by i - 1, i < D.
  std::vector<std::optional<int>> uniform_least_j;
  bool uniform_ok = true;
  /// (c) projected 1-balls are finite; holds for finite levels.
  bool finiteness_ok = true;
  /// (d) 3-ball contraction g_i^j(B(x_j, 3r_j)) subset of B(x_i, r_i).
  std::vector<ThreadAxiomEntry> three_ball;
  bool three_ball_ok = true;
  std::optional<ThreadAxiomEntry> three_ball_witness;

  /// Cell-structure axioms (a) and (c) on discrete levels, at depth D.
  bool is_cell_structure() const { return levels_discrete && per_thread_ok && finiteness_ok; }
};

CellStructureReport check_cell_structure(const InverseSequence& s, int depth);

// ---------------------------------------------------------------------------
// Closeness, Cauchy sequences, limits

struct CellRef {
  int level = 1;
  Index cell = 0;
  friend auto operator<=>(const CellRef&, const CellRef&) = default;
};

/// (g_k^m(a), g_k^n(b)) in r_k with k = min(m, n).
bool is_close(const InverseSequence& s, CellRef a, CellRef b);

/// Finite prefix of a sequence of cells; positions past `declared_n` form the tail.
struct CellSequence {
  std::vector<CellRef> entries;
  std::size_t declared_n = 0;
};

struct CauchyReport {
  bool cauchy = true;
  /// Tail levels strictly increase (finite stand-in for deg -> infinity).
  bool degree_ok = true;
  std::optional<std::pair<std::size_t, std::size_t>> degree_witness;  ///< 1-based positions
  bool close_ok = true;
  std::optional<std::pair<std::size_t, std::size_t>> close_witness;  ///< 1-based positions
};

CauchyReport is_cauchy(const InverseSequence& s, const CellSequence& seq);
bool converges_to(const InverseSequence& s, const CellSequence& seq, const Thread& t);
/// Depth-D thread the sequence converges to, or nullopt. At each level the
/// projection of the deepest tail entry is tried first, then cells by id.
std::optional<Thread> find_limit(const InverseSequence& s, const CellSequence& seq, int depth);

}  // namespace cellstruct
