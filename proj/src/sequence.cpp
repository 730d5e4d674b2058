#include <cellstruct/sequence.hpp>

#include <functional>
#include <numeric>

namespace cellstruct {

namespace {

std::string level_str(int n) { return std::to_string(n); }

void require_depth(const InverseSequence& s, int depth) {
  if (depth < 1 || depth > s.depth())
    throw Error("depth " + level_str(depth) + " out of range 1.." + level_str(s.depth()));
  for (int n = 1; n < depth; ++n)
    for (Index x : s.bonding(n))
      if (x == kUnmapped)
        throw Error("bonding g_" + level_str(n) + "^" + level_str(n + 1) + " is not total");
}

// Disjoint-set forest with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }
  Index find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<Index> parent_;
  std::vector<std::size_t> size_;
};

std::vector<Index> last_coordinate_lookup(const InverseSequence& s,
                                          const std::vector<Thread>& threads, int depth) {
  std::vector<Index> by_last(s.level(depth).size(), kUnmapped);
  for (Index t = 0; t < threads.size(); ++t) by_last[threads[t].coords.back()] = t;
  return by_last;
}

ThreadRelation relation_over(const InverseSequence& s, const std::vector<Thread>& threads,
                             const std::vector<Index>& by_last) {
  const int depth = threads.empty() ? 0 : threads.front().depth();
  std::vector<IndexPair> pairs;
  for (Index a = 0; a < threads.size(); ++a) {
    const Thread& ta = threads[a];
    // A thread is determined by its level-D cell, so candidates come from B(a_D, r_D).
    for (Index yd : s.level(depth).relation().neighbors(ta.coords.back())) {
      Index b = by_last[yd];
      if (b <= a) continue;
      const Thread& tb = threads[b];
      bool related = true;
      for (int n = 1; n < depth && related; ++n)
        related = s.level(n).relation().contains(ta.at(n), tb.at(n));
      if (related) pairs.emplace_back(a, b);
    }
  }
  ThreadRelation out;
  out.relation = Relation::closure(threads.size(), pairs);
  const Relation& r = out.relation;
  for (Index a = 0; a < r.size() && out.transitive; ++a)
    for (Index b : r.neighbors(a)) {
      for (Index c : r.neighbors(b))
        if (!r.contains(a, c)) {
          out.transitive = false;
          out.witness = std::array<Index, 3>{a, b, c};
          break;
        }
      if (!out.transitive) break;
    }
  return out;
}

QuotientSpace quotient_over(const ThreadRelation& rel, const FiniteTopology& topology,
                            int depth) {
  const std::size_t n = rel.relation.size();
  DisjointSets sets(n);
  for (const auto& [a, b] : rel.relation.pairs()) sets.unite(a, b);

  QuotientSpace q;
  q.depth = depth;
  q.transitive = rel.transitive;
  q.transitivity_witness = rel.witness;
  q.class_of.assign(n, kUnmapped);
  std::vector<Index> class_of_root(n, kUnmapped);
  for (Index t = 0; t < n; ++t) {
    Index root = sets.find(t);
    if (class_of_root[root] == kUnmapped) {
      class_of_root[root] = q.classes.size();
      q.classes.emplace_back();
    }
    q.class_of[t] = class_of_root[root];
    q.classes[q.class_of[t]].push_back(t);
  }

  // Minimal open of a class: least saturated open set containing its members.
  std::vector<IndexSet> table(q.classes.size());
  for (Index c = 0; c < q.classes.size(); ++c) {
    IndexSet members = q.classes[c];
    while (true) {
      IndexSet next = q.saturate(topology.up_closure(members));
      if (next == members) break;
      members = std::move(next);
    }
    IndexSet cls;
    for (Index t : members) cls.push_back(q.class_of[t]);
    normalize(cls);
    table[c] = std::move(cls);
  }
  q.topology = FiniteTopology::from_min_open(std::move(table));
  return q;
}

}  // namespace

// ---------------------------------------------------------------------------

InverseSequence::InverseSequence(std::vector<CellularGraph> levels,
                                 std::vector<std::vector<Index>> bondings)
    : levels_(std::move(levels)), bondings_(std::move(bondings)) {
  if (levels_.empty()) throw Error("an inverse sequence needs at least one level");
  if (bondings_.size() + 1 != levels_.size())
    throw Error("expected " + std::to_string(levels_.size() - 1) + " bonding maps, got " +
                std::to_string(bondings_.size()));
  children_.resize(levels_.size());
  for (int n = 1; n < depth(); ++n) {
    const auto& table = bondings_[n - 1];
    if (table.size() != level(n + 1).size())
      throw Error("bonding g_" + level_str(n) + "^" + level_str(n + 1) +
                  " must have one entry per cell of level " + level_str(n + 1));
    auto& kids = children_[n - 1];
    kids.assign(level(n).size(), {});
    for (Index x = 0; x < table.size(); ++x) {
      if (table[x] == kUnmapped) continue;
      if (table[x] >= level(n).size())
        throw Error("bonding g_" + level_str(n) + "^" + level_str(n + 1) +
                    " maps outside level " + level_str(n));
      kids[table[x]].push_back(x);
    }
  }
}

void InverseSequence::check_level(int n) const {
  if (n < 1 || n > depth()) throw Error("level " + level_str(n) + " out of range");
}

const CellularGraph& InverseSequence::level(int n) const {
  check_level(n);
  return levels_[static_cast<std::size_t>(n - 1)];
}

const std::vector<Index>& InverseSequence::bonding(int n) const {
  if (n < 1 || n >= depth()) throw Error("no bonding map g_" + level_str(n) + "^" + level_str(n + 1));
  return bondings_[static_cast<std::size_t>(n - 1)];
}

const IndexSet& InverseSequence::children(int n, Index x) const {
  if (n < 1 || n >= depth()) throw Error("level " + level_str(n) + " has no successor");
  return children_[static_cast<std::size_t>(n - 1)].at(x);
}

bool InverseSequence::is_total() const {
  for (const auto& table : bondings_)
    for (Index x : table)
      if (x == kUnmapped) return false;
  return true;
}

Index InverseSequence::project(int from, Index x, int to) const {
  check_level(from);
  check_level(to);
  if (to > from) throw Error("cannot project level " + level_str(from) + " up to " + level_str(to));
  if (x >= level(from).size()) throw Error("cell index out of range at level " + level_str(from));
  for (int n = from - 1; n >= to; --n) {
    x = bondings_[static_cast<std::size_t>(n - 1)][x];
    if (x == kUnmapped)
      throw Error("bonding g_" + level_str(n) + "^" + level_str(n + 1) + " is not total");
  }
  return x;
}

InverseSequence InverseSequence::with_levels(std::vector<CellularGraph> levels) const {
  return InverseSequence(std::move(levels), bondings_);
}

bool SequenceValidation::ok() const {
  for (const auto& b : bondings)
    if (!b.total || !b.edges_preserved || !b.continuous) return false;
  return true;
}

SequenceValidation validate_sequence(const InverseSequence& s) {
  SequenceValidation report;
  for (int n = 1; n < s.depth(); ++n) {
    LevelValidation lv;
    lv.level = n;
    const auto& table = s.bonding(n);
    const CellularGraph& upper = s.level(n + 1);
    const CellularGraph& lower = s.level(n);
    for (Index x = 0; x < table.size(); ++x)
      if (table[x] == kUnmapped) {
        lv.total = false;
        lv.untotal_cell = x;
        break;
      }
    if (lv.total) {
      for (const auto& [x, y] : upper.relation().pairs())
        if (!lower.relation().contains(table[x], table[y])) {
          lv.edges_preserved = false;
          lv.edge_witness = IndexPair{x, y};
          break;
        }
      auto cont = is_continuous_map(upper, lower, table);
      lv.continuous = cont.continuous;
      lv.continuity_witness = cont.witness;
    } else {
      lv.edges_preserved = false;
      lv.continuous = false;
    }
    report.bondings.push_back(lv);
  }
  return report;
}

std::vector<Index> compose_bonding(const InverseSequence& s, int i, int j) {
  if (i > j) throw Error("compose_bonding: i must not exceed j");
  if (i < 1 || j > s.depth()) throw Error("compose_bonding: level out of range");
  std::vector<Index> table(s.level(j).size());
  for (Index x = 0; x < table.size(); ++x) table[x] = s.project(j, x, i);
  return table;
}

std::vector<Thread> enumerate_threads(const InverseSequence& s, int depth) {
  require_depth(s, depth);
  std::vector<Thread> out;
  Thread current;
  current.coords.reserve(static_cast<std::size_t>(depth));
  std::function<void(int, Index)> descend = [&](int n, Index x) {
    current.coords.push_back(x);
    if (n == depth) {
      out.push_back(current);
    } else {
      for (Index child : s.children(n, x)) descend(n + 1, child);
    }
    current.coords.pop_back();
  };
  for (Index x = 0; x < s.level(1).size(); ++x) descend(1, x);
  return out;
}

ThreadRelation thread_relation(const InverseSequence& s, int depth) {
  auto threads = enumerate_threads(s, depth);
  return relation_over(s, threads, last_coordinate_lookup(s, threads, depth));
}

FiniteTopology product_topology(const InverseSequence& s, const std::vector<Thread>& threads) {
  if (threads.empty()) return FiniteTopology::from_min_open({});
  const int depth = threads.front().depth();
  auto by_last = last_coordinate_lookup(s, threads, depth);
  std::vector<IndexSet> table(threads.size());
  for (Index a = 0; a < threads.size(); ++a) {
    const Thread& ta = threads[a];
    for (Index yd : s.level(depth).topology().min_open(ta.coords.back())) {
      Index b = by_last[yd];
      const Thread& tb = threads[b];
      bool inside = true;
      for (int n = 1; n < depth && inside; ++n)
        inside = contains(s.level(n).topology().min_open(ta.at(n)), tb.at(n));
      if (inside) table[a].push_back(b);
    }
  }
  return FiniteTopology::from_min_open(std::move(table));
}

IndexSet QuotientSpace::saturate(const IndexSet& threads) const {
  IndexSet out;
  for (Index t : threads) {
    const IndexSet& cls = classes[class_of.at(t)];
    out.insert(out.end(), cls.begin(), cls.end());
  }
  normalize(out);
  return out;
}

QuotientSpace quotient(const InverseSequence& s, int depth) {
  auto threads = enumerate_threads(s, depth);
  auto rel = relation_over(s, threads, last_coordinate_lookup(s, threads, depth));
  return quotient_over(rel, product_topology(s, threads), depth);
}

TruncatedLimit::TruncatedLimit(InverseSequence seq, int depth)
    : seq_(std::move(seq)), depth_(depth) {
  threads_ = enumerate_threads(seq_, depth_);
  by_last_ = last_coordinate_lookup(seq_, threads_, depth_);
  relation_ = relation_over(seq_, threads_, by_last_);
  topology_ = product_topology(seq_, threads_);
  quotient_ = quotient_over(relation_, topology_, depth_);
}

std::optional<Index> TruncatedLimit::find_thread(const Thread& t) const {
  if (t.depth() != depth_) return std::nullopt;
  if (t.coords.back() >= by_last_.size()) return std::nullopt;
  Index idx = by_last_[t.coords.back()];
  if (threads_[idx] != t) return std::nullopt;
  return idx;
}

Index TruncatedLimit::thread_index(const Thread& t) const {
  if (auto idx = find_thread(t)) return *idx;
  throw Error("vector is not a depth-" + std::to_string(depth_) + " thread");
}

IndexSet TruncatedLimit::threads_through(int level, Index x) const {
  if (level < 1 || level > depth_) throw Error("level out of range for the truncation");
  IndexSet out;
  for (Index t = 0; t < threads_.size(); ++t)
    if (threads_[t].at(level) == x) out.push_back(t);
  return out;
}

IndexSet a_set(const TruncatedLimit& lim, int level, Index x, const IndexSet& u) {
  const InverseSequence& s = lim.sequence();
  if (level < 1 || level >= lim.depth())
    throw Error("a_set: level must satisfy 1 <= i < D");
  const CellularGraph& g = s.level(level);
  if (x >= g.size()) throw Error("a_set: unknown cell");
  IndexSet uu = u;
  normalize(uu);
  if (!is_open(g, uu)) throw Error("a_set: U is not open in level " + std::to_string(level));

  IndexSet ring = set_difference(ball_of_set(g, uu), uu);
  std::vector<Index> boundary_threads;
  for (Index t = 0; t < lim.size(); ++t)
    if (contains(ring, lim.thread(t).at(level))) boundary_threads.push_back(t);

  IndexSet classes;
  for (Index z = 0; z < lim.size(); ++z) {
    const Thread& tz = lim.thread(z);
    if (!contains(uu, tz.at(level))) continue;
    for (int j = level + 1; j <= lim.depth(); ++j) {
      const Relation& rj = s.level(j).relation();
      bool separated = true;
      for (Index w : boundary_threads)
        if (rj.contains(tz.at(j), lim.thread(w).at(j))) {
          separated = false;
          break;
        }
      if (separated) {
        classes.push_back(lim.quotient().class_of[z]);
        break;
      }
    }
  }
  normalize(classes);
  return classes;
}

// ---------------------------------------------------------------------------

CellStructureReport check_cell_structure(const InverseSequence& s, int depth) {
  auto threads = enumerate_threads(s, depth);
  CellStructureReport rep;
  rep.depth = depth;
  for (int n = 1; n <= depth; ++n) rep.levels_discrete &= s.level(n).topology().is_discrete();

  // proj[j][i] = table of g_i^j.
  std::vector<std::vector<std::vector<Index>>> proj(static_cast<std::size_t>(depth) + 1);
  for (int j = 1; j <= depth; ++j) {
    proj[j].resize(static_cast<std::size_t>(j) + 1);
    for (int i = 1; i <= j; ++i) proj[j][i] = compose_bonding(s, i, j);
  }
  auto contracts = [&](int i, int j, Index xj, int k) {
    Index xi = proj[j][i][xj];
    const Relation& ri = s.level(i).relation();
    for (Index b : ball(s.level(j), xj, k))
      if (!ri.contains(xi, proj[j][i][b])) return false;
    return true;
  };

  for (Index t = 0; t < threads.size(); ++t) {
    for (int i = 1; i < depth; ++i) {
      ThreadAxiomEntry two{t, i, std::nullopt};
      ThreadAxiomEntry three{t, i, std::nullopt};
      Index xj_top = threads[t].coords.back();
      for (int j = i; j <= depth; ++j) {
        Index xj = s.project(depth, xj_top, j);
        if (!two.least_j && contracts(i, j, xj, 2)) two.least_j = j;
        if (!three.least_j && contracts(i, j, xj, 3)) three.least_j = j;
      }
      if (!two.least_j && rep.per_thread_ok) {
        rep.per_thread_ok = false;
        rep.per_thread_witness = two;
      }
      if (!three.least_j && rep.three_ball_ok) {
        rep.three_ball_ok = false;
        rep.three_ball_witness = three;
      }
      rep.per_thread.push_back(two);
      rep.three_ball.push_back(three);
    }
  }

  for (int i = 1; i < depth; ++i) {
    std::optional<int> found;
    for (int j = i; j <= depth && !found; ++j) {
      bool all = true;
      for (Index x = 0; x < s.level(j).size() && all; ++x) all = contracts(i, j, x, 2);
      if (all) found = j;
    }
    rep.uniform_ok &= found.has_value();
    rep.uniform_least_j.push_back(found);
  }
  return rep;
}

bool is_close(const InverseSequence& s, CellRef a, CellRef b) {
  if (a.level < 1 || a.level > s.depth() || b.level < 1 || b.level > s.depth())
    throw Error("is_close: level out of range");
  const int k = std::min(a.level, b.level);
  return s.level(k).relation().contains(s.project(a.level, a.cell, k),
                                        s.project(b.level, b.cell, k));
}

CauchyReport is_cauchy(const InverseSequence& s, const CellSequence& seq) {
  if (seq.declared_n >= seq.entries.size())
    throw Error("declared N must be smaller than the prefix length");
  CauchyReport rep;
  const auto& e = seq.entries;
  for (std::size_t p = seq.declared_n; p + 1 < e.size(); ++p)
    if (e[p + 1].level <= e[p].level) {
      rep.degree_ok = false;
      rep.degree_witness = std::pair{p + 1, p + 2};
      break;
    }
  for (std::size_t p = seq.declared_n; p < e.size() && rep.close_ok; ++p)
    for (std::size_t q = p + 1; q < e.size(); ++q)
      if (!is_close(s, e[p], e[q])) {
        rep.close_ok = false;
        rep.close_witness = std::pair{p + 1, q + 1};
        break;
      }
  rep.cauchy = rep.degree_ok && rep.close_ok;
  return rep;
}

namespace {
int max_tail_level(const CellSequence& seq) {
  int m = 0;
  for (std::size_t p = seq.declared_n; p < seq.entries.size(); ++p)
    m = std::max(m, seq.entries[p].level);
  return m;
}
}  // namespace

bool converges_to(const InverseSequence& s, const CellSequence& seq, const Thread& t) {
  if (t.depth() < max_tail_level(seq))
    throw Error("converges_to: thread depth is below the deepest tail entry");
  for (int i = static_cast<int>(seq.declared_n) + 1; i <= t.depth(); ++i)
    for (std::size_t p = seq.declared_n; p < seq.entries.size(); ++p)
      if (!is_close(s, CellRef{i, t.at(i)}, seq.entries[p])) return false;
  return true;
}

std::optional<Thread> find_limit(const InverseSequence& s, const CellSequence& seq, int depth) {
  if (!is_cauchy(s, seq).cauchy) throw Error("find_limit: sequence is not Cauchy");
  // Partial bondings are allowed here: the search only walks mapped cells.
  if (depth < 1 || depth > s.depth())
    throw Error("depth " + level_str(depth) + " out of range 1.." + level_str(s.depth()));
  if (depth < max_tail_level(seq))
    throw Error("find_limit: depth is below the deepest tail entry");

  // Deepest tail entry; its projections are preferred at every level it reaches.
  CellRef anchor = seq.entries[seq.declared_n];
  for (std::size_t p = seq.declared_n; p < seq.entries.size(); ++p)
    if (seq.entries[p].level >= anchor.level) anchor = seq.entries[p];

  auto admissible = [&](int level, Index x) {
    if (level <= static_cast<int>(seq.declared_n)) return true;
    for (std::size_t p = seq.declared_n; p < seq.entries.size(); ++p)
      if (!is_close(s, CellRef{level, x}, seq.entries[p])) return false;
    return true;
  };
  auto ordered = [&](int level, IndexSet candidates) {
    if (level <= anchor.level) {
      Index preferred = s.project(anchor.level, anchor.cell, level);
      auto it = std::find(candidates.begin(), candidates.end(), preferred);
      if (it != candidates.end()) std::rotate(candidates.begin(), it, it + 1);
    }
    return candidates;
  };

  std::vector<std::vector<bool>> dead(static_cast<std::size_t>(depth) + 1);
  for (int n = 1; n <= depth; ++n) dead[n].assign(s.level(n).size(), false);
  Thread current;
  std::function<bool(int, Index)> descend = [&](int n, Index x) {
    if (dead[n][x] || !admissible(n, x)) return false;
    current.coords.push_back(x);
    if (n == depth) return true;
    for (Index child : ordered(n + 1, s.children(n, x)))
      if (descend(n + 1, child)) return true;
    current.coords.pop_back();
    dead[n][x] = true;
    return false;
  };
  IndexSet roots(s.level(1).size());
  std::iota(roots.begin(), roots.end(), Index{0});
  for (Index x : ordered(1, roots))
    if (descend(1, x)) return current;
  return std::nullopt;
}

}  // namespace cellstruct
