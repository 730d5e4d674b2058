#pragma once

// Maps between inverse sequences: thread maps (weak g-cell maps), set-valued
// level maps (g-cell maps), single-valued level-graded maps (DT cell maps),
// class maps on the quotients, and the constructions relating them.
//
// All source/target contexts are depth-D truncations (TruncatedLimit); both
// sides of a map must be truncated at the same depth.

#include <cellstruct/sequence.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cellstruct {

/// Thread map f: G_inf -> H_inf at depth D, by thread index.
struct WeakGCellMap {
  int depth = 0;
  std::vector<Index> table;
  friend bool operator==(const WeakGCellMap&, const WeakGCellMap&) = default;
};

/// Class map F: G* -> H*, by class index.
struct QuotientMap {
  int depth = 0;
  std::vector<Index> table;
  friend bool operator==(const QuotientMap&, const QuotientMap&) = default;
};

/// Per-level single-valued maps f_i: G_i -> H_i.
struct LevelMapFamily {
  std::vector<std::vector<Index>> maps;  ///< maps[i - 1] is f_i
};

/// Single-valued level-graded map: a cell of G_n goes to a cell of
/// H_{profile[n - 1]}.
struct DTCellMap {
  std::vector<int> profile;
  std::vector<std::vector<Index>> table;  ///< table[n - 1][x]
};

/// Set-valued map from the union of source levels to the union of target
/// levels, stored as f(x) cap H_k.
class GCellMap {
 public:
  GCellMap() = default;
  GCellMap(const InverseSequence& src, const InverseSequence& dst);

  int source_depth() const { return static_cast<int>(images_.size()); }
  int target_depth() const { return static_cast<int>(target_sizes_.size()); }
  std::size_t source_size(int level) const { return images_.at(level - 1).size(); }

  /// f(x) cap H_k for x in G_i.
  const IndexSet& image(int i, Index x, int k) const;
  void set_image(int i, Index x, int k, IndexSet cells);
  void insert(int i, Index x, int k, Index y);
  /// Every cell of f(x), ordered by (level, index).
  std::vector<CellRef> image(int i, Index x) const;

  friend bool operator==(const GCellMap&, const GCellMap&) = default;

 private:
  std::vector<std::vector<std::vector<IndexSet>>> images_;  // [i-1][x][k-1]
  std::vector<std::size_t> target_sizes_;
};

// ---------------------------------------------------------------------------
// Weak g-cell maps and induced class maps

struct WeakCheckReport {
  bool ok = true;
  /// Related source threads whose images are unrelated.
  std::optional<IndexPair> witness;
};

WeakCheckReport check_weak_gcell(const WeakGCellMap& f, const TruncatedLimit& src,
                                 const TruncatedLimit& dst);

struct InducedQuotientReport {
  QuotientMap map;
  bool well_defined = true;
  /// Two members of one source class whose images land in different classes.
  std::optional<IndexPair> witness;
  /// pi' o f == f^ o pi, checked thread by thread.
  bool commutes = true;
};

InducedQuotientReport induce_quotient_map(const WeakGCellMap& f, const TruncatedLimit& src,
                                          const TruncatedLimit& dst);

/// Continuity of a class map for the quotient topologies.
ContinuityReport check_quotient_map_continuity(const QuotientMap& f, const TruncatedLimit& src,
                                               const TruncatedLimit& dst);

/// Continuity of a thread map for the depth-D product topologies.
ContinuityReport check_thread_map_continuity(const WeakGCellMap& f, const TruncatedLimit& src,
                                             const TruncatedLimit& dst);

// ---------------------------------------------------------------------------
// Semicontinuity

enum class SemicontinuitySide { upper, lower };

struct SemicontinuityWitness {
  int target_level = 0;
  IndexSet open_set;      ///< W, open in the target level
  int source_level = 0;
  Index point = 0;        ///< in the preimage set
  Index neighbor = 0;     ///< in U(point) but not in the preimage set
};

struct SemicontinuityReport {
  bool ok = true;
  std::optional<SemicontinuityWitness> witness;
};

/// Upper: {x : f(x) cap H_k subset W} open for every open W of H_k.
/// Lower: {x : f(x) cap W nonempty} open for every open W of H_k.
/// Opens of the union are the per-level opens of the source.
SemicontinuityReport check_semicontinuity(const GCellMap& f, const InverseSequence& src,
                                          const InverseSequence& dst, SemicontinuitySide side);

// ---------------------------------------------------------------------------
// g-cell map conditions

struct NestingWitness {       ///< condition (1)
  int source_level = 0;
  Index cell = 0;
  int lower = 0;              ///< target level i
  int upper = 0;              ///< target level j >= i
  Index offending = 0;        ///< b in f(x) cap H_j with h_i^j(b) outside f(x) cap H_i
};

struct CompatibilityWitness {  ///< condition (2)
  int lower = 0;              ///< i
  int upper = 0;              ///< j, x in G_j
  Index cell = 0;
  int target_level = 0;       ///< k
  bool empty = false;         ///< f(x) cap H_k empty although f(g_i^j(x)) cap H_k is not
  Index offending = 0;        ///< otherwise: element of f(x) cap H_k outside f(g_i^j(x))
};

struct EdgeWitness {           ///< condition (3)
  int source_level = 0;
  IndexPair cells;
  int target_level = 0;
  IndexPair images;
};

struct CompactnessWitness {    ///< condition (4)
  Index thread = 0;
  int target_level = 0;
};

struct GCellReport {
  int depth = 0;
  bool nesting = true;
  std::optional<NestingWitness> nesting_witness;
  bool compatibility = true;
  std::optional<CompatibilityWitness> compatibility_witness;
  bool edges = true;
  std::optional<EdgeWitness> edge_witness;
  bool compact_nonempty = true;
  std::optional<CompactnessWitness> compact_witness;

  bool first_three() const { return nesting && compatibility && edges; }
  bool ok() const { return first_three() && compact_nonempty; }
};

/// Conditions (1)-(3) over levels <= D; condition (4) over depth-D threads
/// of `src` and target levels <= D.
GCellReport check_gcell_map(const GCellMap& f, const TruncatedLimit& src,
                            const TruncatedLimit& dst);

struct ClosenessWitness {
  std::pair<CellRef, CellRef> source;  ///< close thread coordinates
  std::pair<CellRef, CellRef> image;   ///< non-close a, b
};

struct ClosenessReport {
  /// Same-level pairs (x_i, y_i) in r_i.
  bool same_level = true;
  std::optional<ClosenessWitness> same_level_witness;
  /// Close pairs x_i, y_j with i < j.
  bool cross_level = true;
  std::optional<ClosenessWitness> cross_level_witness;
  bool ok() const { return same_level && cross_level; }
};

/// Every a in f(x_i), b in f(y_j) close whenever thread coordinates x_i, y_j
/// are close.
ClosenessReport check_closeness_preservation(const GCellMap& f, const TruncatedLimit& src,
                                             const TruncatedLimit& dst);

/// f(x) = { h_m^i(f_i(x)) : 1 <= m <= i } for x in G_i. Throws Error if a
/// square does not commute or some f_i does not preserve edges.
GCellMap family_to_gcell(const LevelMapFamily& fam, const InverseSequence& src,
                         const InverseSequence& dst);

struct InduceTrace {
  std::vector<int> alpha;      ///< alpha_i for i = 1..D, non-decreasing
  std::vector<IndexSet> k;     ///< K_i = f(x_{alpha_i}) cap H_i
};

struct InducedWeakMap {
  WeakGCellMap map;
  std::vector<InduceTrace> trace;  ///< one per source thread
};

/// Builds f-bar: for each source thread picks alpha_i, forms K_i and returns
/// the lexicographically least target thread through the K_i. Throws Error
/// if some K_i is empty or the K_i are not nested.
InducedWeakMap gcell_induce_weak(const GCellMap& f, const TruncatedLimit& src,
                                 const TruncatedLimit& dst);

struct SingletonContinuityReport {
  bool upper_semicontinuous = true;
  std::optional<SemicontinuityWitness> semicontinuity_witness;
  bool singleton = true;
  std::optional<std::pair<Index, int>> singleton_witness;  ///< (thread, level)
  bool hypotheses() const { return upper_semicontinuous && singleton; }

  std::optional<InducedWeakMap> induced;
  std::string induce_error;
  std::optional<ContinuityReport> conclusion;  ///< continuity of f-bar
};

SingletonContinuityReport check_singleton_continuity(const GCellMap& f, const TruncatedLimit& src,
                                                     const TruncatedLimit& dst);

// ---------------------------------------------------------------------------
// DT cell maps

struct DTInduced {
  WeakGCellMap map;
  WeakCheckReport weak;
  /// 3-ball contraction of the target at depth D; gates the weak-map guarantee.
  bool target_three_ball = false;
};

/// Throws Error if close cells go to non-close cells, an image sequence is not
/// Cauchy, or no depth-D limit exists.
DTInduced dt_induce_weak(const DTCellMap& f, const TruncatedLimit& src, const TruncatedLimit& dst);

// ---------------------------------------------------------------------------
// Lifting class maps

struct LevelNeighborhoodWitness {
  int level = 0;
  Index cell = 0;
  IndexSet u;          ///< smallest open containing B(x, r)
  Index offending = 0; ///< cell of B(U(x), r) outside u
};

struct RepresentativeSearch {
  bool exhaustive = false;        ///< false when the choice space exceeded the cap
  std::size_t choices = 0;
  std::size_t continuous_choices = 0;
  /// First continuous choice: representative thread per target class.
  std::optional<std::vector<Index>> first_continuous;
};

struct LiftReport {
  WeakGCellMap lift;
  bool induces_F = true;
  ContinuityReport f_continuity;  ///< continuity of F on the quotients
  // Condition (1).
  bool projection_open = true;
  std::optional<Index> projection_open_witness;   ///< thread y with pi'(U(y)) not open
  bool opens_saturated = true;
  std::optional<Index> saturation_witness;        ///< thread y with U(y) not saturated
  bool condition1() const { return projection_open && opens_saturated; }
  // Condition (2), on the target levels.
  bool condition2 = true;
  std::optional<LevelNeighborhoodWitness> condition2_witness;
  // Condition (2) on the source levels.
  bool condition2_source = true;
  std::optional<LevelNeighborhoodWitness> condition2_source_witness;

  ContinuityReport lift_continuity;
  bool theorem_applies() const { return f_continuity.continuous && (condition1() || condition2); }
  RepresentativeSearch representatives;
};

/// Default search cap on the number of representative choices.
inline constexpr std::size_t kRepresentativeCap = 100000;

LiftReport lift_quotient_map(const QuotientMap& F, const TruncatedLimit& src,
                             const TruncatedLimit& dst,
                             std::size_t representative_cap = kRepresentativeCap);

/// For every level, cell x: B(U(x), r) within the least open containing B(x, r).
bool neighborhood_condition(const InverseSequence& s, int depth,
                            std::optional<LevelNeighborhoodWitness>* witness = nullptr);

struct ConstructOptions {
  /// Raise Error on failed hypotheses instead of recording them.
  bool enforce_hypotheses = true;
};

struct ConstructReport {
  GCellMap map;
  bool h1_simplex = true;
  ContinuityReport f_continuity;
  bool nonempty_hypothesis = true;
  std::optional<CompactnessWitness> nonempty_witness;
  GCellReport conditions;
  /// Experimental: continuity of the thread map induced by the constructed map.
  std::optional<bool> induced_continuity_probe;
  std::string probe_note;
  std::string interpretation;
};

ConstructReport construct_gcell_from_quotient_map(const QuotientMap& F, const TruncatedLimit& src,
                                                  const TruncatedLimit& dst,
                                                  ConstructOptions options = {});

}  // namespace cellstruct
