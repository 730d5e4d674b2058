#include <cellstruct/maps.hpp>

#include <limits>

namespace cellstruct {

namespace {

void require_same_depth(const TruncatedLimit& src, const TruncatedLimit& dst, int depth) {
  if (src.depth() != dst.depth()) throw Error("source and target truncation depths differ");
  if (depth != src.depth()) throw Error("map depth does not match the truncation depth");
}

void require_thread_map(const WeakGCellMap& f, const TruncatedLimit& src,
                        const TruncatedLimit& dst) {
  require_same_depth(src, dst, f.depth);
  if (f.table.size() != src.size()) throw Error("thread map is not total on the source threads");
  for (Index y : f.table)
    if (y >= dst.size()) throw Error("thread map references an unknown target thread");
}

void require_class_map(const QuotientMap& F, const TruncatedLimit& src,
                       const TruncatedLimit& dst) {
  require_same_depth(src, dst, F.depth);
  if (F.table.size() != src.quotient().size())
    throw Error("class map is not total on the source classes");
  for (Index c : F.table)
    if (c >= dst.quotient().size()) throw Error("class map references an unknown target class");
}

void require_gcell_shape(const GCellMap& f, const TruncatedLimit& src, const TruncatedLimit& dst) {
  if (src.depth() != dst.depth()) throw Error("source and target truncation depths differ");
  if (f.source_depth() < src.depth() || f.target_depth() < dst.depth())
    throw Error("g-cell map does not cover the truncation depth");
  for (int i = 1; i <= src.depth(); ++i)
    if (f.source_size(i) != src.sequence().level(i).size())
      throw Error("g-cell map level sizes do not match the source sequence");
}

bool is_simplex(const Relation& r, const IndexSet& cells) {
  for (Index a : cells)
    for (Index b : cells)
      if (!r.contains(a, b)) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

GCellMap::GCellMap(const InverseSequence& src, const InverseSequence& dst) {
  for (const auto& g : dst.levels()) target_sizes_.push_back(g.size());
  for (const auto& g : src.levels())
    images_.emplace_back(g.size(), std::vector<IndexSet>(target_sizes_.size()));
}

const IndexSet& GCellMap::image(int i, Index x, int k) const {
  return images_.at(static_cast<std::size_t>(i - 1)).at(x).at(static_cast<std::size_t>(k - 1));
}

void GCellMap::set_image(int i, Index x, int k, IndexSet cells) {
  normalize(cells);
  if (!cells.empty() && cells.back() >= target_sizes_.at(static_cast<std::size_t>(k - 1)))
    throw Error("g-cell image references a cell outside target level " + std::to_string(k));
  images_.at(static_cast<std::size_t>(i - 1)).at(x).at(static_cast<std::size_t>(k - 1)) =
      std::move(cells);
}

void GCellMap::insert(int i, Index x, int k, Index y) {
  IndexSet cells = image(i, x, k);
  cells.push_back(y);
  set_image(i, x, k, std::move(cells));
}

std::vector<CellRef> GCellMap::image(int i, Index x) const {
  std::vector<CellRef> out;
  for (int k = 1; k <= target_depth(); ++k)
    for (Index y : image(i, x, k)) out.push_back(CellRef{k, y});
  return out;
}

// ---------------------------------------------------------------------------

WeakCheckReport check_weak_gcell(const WeakGCellMap& f, const TruncatedLimit& src,
                                 const TruncatedLimit& dst) {
  require_thread_map(f, src, dst);
  const Relation& s = dst.relation().relation;
  for (const auto& [a, b] : src.relation().relation.pairs())
    if (!s.contains(f.table[a], f.table[b])) return {false, IndexPair{a, b}};
  return {};
}

InducedQuotientReport induce_quotient_map(const WeakGCellMap& f, const TruncatedLimit& src,
                                          const TruncatedLimit& dst) {
  require_thread_map(f, src, dst);
  const QuotientSpace& qg = src.quotient();
  const QuotientSpace& qh = dst.quotient();
  InducedQuotientReport rep;
  rep.map.depth = f.depth;
  rep.map.table.resize(qg.size());
  for (Index c = 0; c < qg.size(); ++c) rep.map.table[c] = qh.class_of[f.table[qg.classes[c].front()]];
  for (Index t = 0; t < src.size(); ++t) {
    Index c = qg.class_of[t];
    if (qh.class_of[f.table[t]] != rep.map.table[c]) {
      rep.commutes = false;
      if (rep.well_defined) {
        rep.well_defined = false;
        rep.witness = IndexPair{qg.classes[c].front(), t};
      }
    }
  }
  return rep;
}

ContinuityReport check_quotient_map_continuity(const QuotientMap& f, const TruncatedLimit& src,
                                               const TruncatedLimit& dst) {
  require_class_map(f, src, dst);
  return is_continuous_map(src.quotient().topology, dst.quotient().topology, f.table);
}

ContinuityReport check_thread_map_continuity(const WeakGCellMap& f, const TruncatedLimit& src,
                                             const TruncatedLimit& dst) {
  require_thread_map(f, src, dst);
  return is_continuous_map(src.topology(), dst.topology(), f.table);
}

// ---------------------------------------------------------------------------

SemicontinuityReport check_semicontinuity(const GCellMap& f, const InverseSequence& src,
                                          const InverseSequence& dst, SemicontinuitySide side) {
  if (f.source_depth() != src.depth() || f.target_depth() != dst.depth())
    throw Error("g-cell map shape does not match the sequences");
  // The preimage sets are open for every open W iff they are open for the
  // least opens around f(x) cap H_k (upper) or around each of its points (lower).
  for (int k = 1; k <= dst.depth(); ++k) {
    const FiniteTopology& th = dst.level(k).topology();
    for (int i = 1; i <= src.depth(); ++i) {
      const FiniteTopology& tg = src.level(i).topology();
      for (Index x = 0; x < tg.size(); ++x) {
        const IndexSet& fx = f.image(i, x, k);
        if (side == SemicontinuitySide::upper) {
          IndexSet w = th.up_closure(fx);
          for (Index y : tg.min_open(x))
            if (!is_subset(f.image(i, y, k), w))
              return {false, SemicontinuityWitness{k, w, i, x, y}};
        } else {
          for (Index a : fx) {
            const IndexSet& w = th.min_open(a);
            for (Index y : tg.min_open(x))
              if (set_intersection(f.image(i, y, k), w).empty())
                return {false, SemicontinuityWitness{k, w, i, x, y}};
          }
        }
      }
    }
  }
  return {};
}

GCellReport check_gcell_map(const GCellMap& f, const TruncatedLimit& src,
                            const TruncatedLimit& dst) {
  require_gcell_shape(f, src, dst);
  const InverseSequence& g = src.sequence();
  const InverseSequence& h = dst.sequence();
  const int depth = src.depth();
  GCellReport rep;
  rep.depth = depth;

  // (1) h_i^j(f(x) cap H_j) subset f(x) cap H_i.
  for (int i = 1; i <= depth && rep.nesting; ++i)
    for (Index x = 0; x < g.level(i).size() && rep.nesting; ++x)
      for (int lo = 1; lo <= depth && rep.nesting; ++lo)
        for (int hi = lo + 1; hi <= depth && rep.nesting; ++hi)
          for (Index b : f.image(i, x, hi))
            if (!contains(f.image(i, x, lo), h.project(hi, b, lo))) {
              rep.nesting = false;
              rep.nesting_witness = NestingWitness{i, x, lo, hi, b};
              break;
            }

  // (2) f(g_i^j(x)) cap H_k nonempty => f(x) cap H_k nonempty and inside f(g_i^j(x)).
  for (int i = 1; i <= depth && rep.compatibility; ++i)
    for (int j = i + 1; j <= depth && rep.compatibility; ++j)
      for (Index x = 0; x < g.level(j).size() && rep.compatibility; ++x) {
        Index gx = g.project(j, x, i);
        for (int k = 1; k <= depth; ++k) {
          const IndexSet& below = f.image(i, gx, k);
          if (below.empty()) continue;
          const IndexSet& here = f.image(j, x, k);
          if (here.empty()) {
            rep.compatibility = false;
            rep.compatibility_witness = CompatibilityWitness{i, j, x, k, true, 0};
            break;
          }
          IndexSet extra = set_difference(here, below);
          if (!extra.empty()) {
            rep.compatibility = false;
            rep.compatibility_witness = CompatibilityWitness{i, j, x, k, false, extra.front()};
            break;
          }
        }
      }

  // (3) related sources have related images inside each H_k.
  for (int i = 1; i <= depth && rep.edges; ++i)
    for (const auto& [x, y] : g.level(i).relation().pairs()) {
      for (int k = 1; k <= depth && rep.edges; ++k) {
        const Relation& sk = h.level(k).relation();
        for (Index a : f.image(i, x, k)) {
          for (Index b : f.image(i, y, k))
            if (!sk.contains(a, b)) {
              rep.edges = false;
              rep.edge_witness = EdgeWitness{i, {x, y}, k, {a, b}};
              break;
            }
          if (!rep.edges) break;
        }
      }
      if (!rep.edges) break;
    }

  // (4) some f(x_i) cap H_k nonempty, compact (finite) and Hausdorff.
  for (Index t = 0; t < src.size() && rep.compact_nonempty; ++t)
    for (int k = 1; k <= depth; ++k) {
      bool found = false;
      for (int i = 1; i <= depth && !found; ++i) {
        const IndexSet& img = f.image(i, src.thread(t).at(i), k);
        found = !img.empty() && !h.level(k).topology().hausdorff_violation(img);
      }
      if (!found) {
        rep.compact_nonempty = false;
        rep.compact_witness = CompactnessWitness{t, k};
        break;
      }
    }
  return rep;
}

ClosenessReport check_closeness_preservation(const GCellMap& f, const TruncatedLimit& src,
                                             const TruncatedLimit& dst) {
  require_gcell_shape(f, src, dst);
  std::vector<CellRef> coords;
  for (const auto& t : src.threads())
    for (int i = 1; i <= t.depth(); ++i) coords.push_back(CellRef{i, t.at(i)});
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

  std::vector<std::vector<CellRef>> images;
  images.reserve(coords.size());
  for (const auto& c : coords) {
    std::vector<CellRef> img;
    for (const auto& r : f.image(c.level, c.cell))
      if (r.level <= dst.depth()) img.push_back(r);
    images.push_back(std::move(img));
  }

  const InverseSequence& g = src.sequence();
  const InverseSequence& h = dst.sequence();
  ClosenessReport rep;
  for (std::size_t p = 0; p < coords.size(); ++p)
    for (std::size_t q = p; q < coords.size(); ++q) {
      const bool same = coords[p].level == coords[q].level;
      if ((same && !rep.same_level) || (!same && !rep.cross_level)) continue;
      if (!is_close(g, coords[p], coords[q])) continue;
      for (const auto& a : images[p])
        for (const auto& b : images[q])
          if (!is_close(h, a, b)) {
            ClosenessWitness w{{coords[p], coords[q]}, {a, b}};
            if (same) {
              rep.same_level = false;
              rep.same_level_witness = w;
            } else if (rep.cross_level) {
              rep.cross_level = false;
              rep.cross_level_witness = w;
            }
            goto next_pair;
          }
    next_pair:;
    }
  return rep;
}

GCellMap family_to_gcell(const LevelMapFamily& fam, const InverseSequence& src,
                         const InverseSequence& dst) {
  const int levels = static_cast<int>(fam.maps.size());
  if (levels < 1 || levels > src.depth() || levels > dst.depth())
    throw Error("level family length must be between 1 and the depth of both sequences");
  for (int i = 1; i <= levels; ++i) {
    const auto& fi = fam.maps[static_cast<std::size_t>(i - 1)];
    if (fi.size() != src.level(i).size())
      throw Error("f_" + std::to_string(i) + " is not total on level " + std::to_string(i));
    for (Index y : fi)
      if (y >= dst.level(i).size())
        throw Error("f_" + std::to_string(i) + " maps outside target level " + std::to_string(i));
  }
  for (int i = 1; i < levels; ++i) {
    const auto& lower = fam.maps[static_cast<std::size_t>(i - 1)];
    const auto& upper = fam.maps[static_cast<std::size_t>(i)];
    for (Index x = 0; x < upper.size(); ++x)
      if (lower[src.bonding(i)[x]] != dst.bonding(i)[upper[x]])
        throw Error("square at level " + std::to_string(i) + " does not commute at cell '" +
                    src.level(i + 1).id(x) + "' of level " + std::to_string(i + 1));
  }
  for (int i = 1; i <= levels; ++i) {
    const auto& fi = fam.maps[static_cast<std::size_t>(i - 1)];
    for (const auto& [x, y] : src.level(i).relation().pairs())
      if (!dst.level(i).relation().contains(fi[x], fi[y]))
        throw Error("f_" + std::to_string(i) + " does not preserve the edge ('" +
                    src.level(i).id(x) + "', '" + src.level(i).id(y) + "')");
  }

  GCellMap out(src, dst);
  for (int i = 1; i <= levels; ++i) {
    const auto& fi = fam.maps[static_cast<std::size_t>(i - 1)];
    for (Index x = 0; x < fi.size(); ++x)
      for (int m = 1; m <= i; ++m) out.insert(i, x, m, dst.project(i, fi[x], m));
  }
  return out;
}

InducedWeakMap gcell_induce_weak(const GCellMap& f, const TruncatedLimit& src,
                                 const TruncatedLimit& dst) {
  require_gcell_shape(f, src, dst);
  const InverseSequence& h = dst.sequence();
  const int depth = src.depth();
  InducedWeakMap out;
  out.map.depth = depth;

  for (Index t = 0; t < src.size(); ++t) {
    const Thread& x = src.thread(t);
    InduceTrace tr;
    for (int k = 1; k <= depth; ++k) {
      int alpha = 0;
      for (int i = 1; i <= depth && alpha == 0; ++i) {
        const IndexSet& img = f.image(i, x.at(i), k);
        if (!img.empty() && !h.level(k).topology().hausdorff_violation(img)) alpha = i;
      }
      if (alpha == 0)
        throw Error("condition (4) unsatisfiable at depth " + std::to_string(depth) + ": thread " +
                    std::to_string(t) + " has f(x_i) cap H_" + std::to_string(k) +
                    " empty or non-Hausdorff for every i");
      if (!tr.alpha.empty()) alpha = std::max(alpha, tr.alpha.back());
      tr.alpha.push_back(alpha);
      IndexSet kset = f.image(alpha, x.at(alpha), k);
      if (kset.empty())
        throw Error("K_" + std::to_string(k) + " is empty after reindexing (thread " +
                    std::to_string(t) + "); condition (2) is violated");
      tr.k.push_back(std::move(kset));
    }
    for (int k = 1; k < depth; ++k)
      for (Index b : tr.k[static_cast<std::size_t>(k)])
        if (!contains(tr.k[static_cast<std::size_t>(k - 1)], h.bonding(k)[b]))
          throw Error("K_" + std::to_string(k + 1) + " is not mapped into K_" + std::to_string(k) +
                      " (thread " + std::to_string(t) + "); conditions (1)/(2) are violated");

    // feasible[k-1]: cells of K_k that start a compatible path up to level D.
    std::vector<IndexSet> feasible(static_cast<std::size_t>(depth));
    feasible.back() = tr.k.back();
    for (int k = depth - 1; k >= 1; --k)
      for (Index y : tr.k[static_cast<std::size_t>(k - 1)])
        if (!set_intersection(h.children(k, y), feasible[static_cast<std::size_t>(k)]).empty())
          feasible[static_cast<std::size_t>(k - 1)].push_back(y);
    Thread y;
    y.coords.push_back(feasible.front().front());
    for (int k = 2; k <= depth; ++k)
      y.coords.push_back(set_intersection(h.children(k - 1, y.coords.back()),
                                          feasible[static_cast<std::size_t>(k - 1)])
                             .front());
    out.map.table.push_back(dst.thread_index(y));
    out.trace.push_back(std::move(tr));
  }
  return out;
}

SingletonContinuityReport check_singleton_continuity(const GCellMap& f, const TruncatedLimit& src,
                                                     const TruncatedLimit& dst) {
  require_gcell_shape(f, src, dst);
  SingletonContinuityReport rep;
  auto usc = check_semicontinuity(f, src.sequence(), dst.sequence(), SemicontinuitySide::upper);
  rep.upper_semicontinuous = usc.ok;
  rep.semicontinuity_witness = usc.witness;
  for (Index t = 0; t < src.size() && rep.singleton; ++t)
    for (int i = 1; i <= src.depth(); ++i)
      if (f.image(i, src.thread(t).at(i), i).size() != 1) {
        rep.singleton = false;
        rep.singleton_witness = std::pair{t, i};
        break;
      }
  try {
    rep.induced = gcell_induce_weak(f, src, dst);
    rep.conclusion = check_thread_map_continuity(rep.induced->map, src, dst);
  } catch (const Error& e) {
    rep.induce_error = e.what();
  }
  return rep;
}

// ---------------------------------------------------------------------------

DTInduced dt_induce_weak(const DTCellMap& f, const TruncatedLimit& src, const TruncatedLimit& dst) {
  if (src.depth() != dst.depth()) throw Error("source and target truncation depths differ");
  const InverseSequence& g = src.sequence();
  const InverseSequence& h = dst.sequence();
  if (f.profile.size() != static_cast<std::size_t>(g.depth()) ||
      f.table.size() != static_cast<std::size_t>(g.depth()))
    throw Error("DT map needs a level profile and a table for every source level");
  for (std::size_t n = 0; n < f.profile.size(); ++n) {
    if (f.profile[n] < 1 || f.profile[n] > h.depth())
      throw Error("DT level profile leaves the target levels");
    if (n > 0 && f.profile[n] < f.profile[n - 1])
      throw Error("DT level profile must be non-decreasing");
    if (f.table[n].size() != g.level(static_cast<int>(n) + 1).size())
      throw Error("DT table is not total on level " + std::to_string(n + 1));
    for (Index y : f.table[n])
      if (y >= h.level(f.profile[n]).size()) throw Error("DT table maps outside its target level");
  }
  if (f.profile.size() >= 2 && f.profile.back() <= f.profile.front())
    throw Error("DT level profile must grow within the fixture");

  auto image = [&](CellRef c) {
    return CellRef{f.profile[static_cast<std::size_t>(c.level - 1)],
                   f.table[static_cast<std::size_t>(c.level - 1)][c.cell]};
  };
  std::vector<CellRef> cells;
  for (int n = 1; n <= g.depth(); ++n)
    for (Index x = 0; x < g.level(n).size(); ++x) cells.push_back(CellRef{n, x});
  for (std::size_t p = 0; p < cells.size(); ++p)
    for (std::size_t q = p + 1; q < cells.size(); ++q)
      if (is_close(g, cells[p], cells[q]) && !is_close(h, image(cells[p]), image(cells[q])))
        throw Error("DT map sends close cells (level " + std::to_string(cells[p].level) + " '" +
                    g.level(cells[p].level).id(cells[p].cell) + "', level " +
                    std::to_string(cells[q].level) + " '" +
                    g.level(cells[q].level).id(cells[q].cell) + "') to non-close cells");

  const int depth = src.depth();
  std::size_t declared_n = 0;
  for (int p = 1; p < depth; ++p)
    if (f.profile[static_cast<std::size_t>(p)] <= f.profile[static_cast<std::size_t>(p - 1)])
      declared_n = static_cast<std::size_t>(p);
  const int limit_depth = std::max(depth, f.profile[static_cast<std::size_t>(depth - 1)]);

  DTInduced out;
  out.map.depth = depth;
  for (Index t = 0; t < src.size(); ++t) {
    CellSequence seq;
    seq.declared_n = declared_n;
    for (int n = 1; n <= depth; ++n) seq.entries.push_back(image(CellRef{n, src.thread(t).at(n)}));
    auto cauchy = is_cauchy(h, seq);
    if (!cauchy.cauchy)
      throw Error("image sequence of thread " + std::to_string(t) + " is not Cauchy");
    auto limit = find_limit(h, seq, limit_depth);
    if (!limit) throw Error("no depth-" + std::to_string(limit_depth) + " limit for thread " +
                            std::to_string(t));
    limit->coords.resize(static_cast<std::size_t>(depth));
    out.map.table.push_back(dst.thread_index(*limit));
  }
  out.weak = check_weak_gcell(out.map, src, dst);
  out.target_three_ball = check_cell_structure(h, depth).three_ball_ok;
  return out;
}

// ---------------------------------------------------------------------------

bool neighborhood_condition(const InverseSequence& s, int depth,
                            std::optional<LevelNeighborhoodWitness>* witness) {
  // With U the least open around B(x, r) and O = U(x) the least open around x,
  // the condition for all U, O reduces to B(U(x), r) subset of U.
  for (int n = 1; n <= depth; ++n) {
    const CellularGraph& g = s.level(n);
    for (Index x = 0; x < g.size(); ++x) {
      IndexSet u = g.topology().up_closure(ball(g, x, 1));
      IndexSet extra = set_difference(ball_of_set(g, g.topology().min_open(x)), u);
      if (!extra.empty()) {
        if (witness) *witness = LevelNeighborhoodWitness{n, x, u, extra.front()};
        return false;
      }
    }
  }
  return true;
}

LiftReport lift_quotient_map(const QuotientMap& F, const TruncatedLimit& src,
                             const TruncatedLimit& dst, std::size_t representative_cap) {
  require_class_map(F, src, dst);
  const QuotientSpace& qg = src.quotient();
  const QuotientSpace& qh = dst.quotient();
  LiftReport rep;

  rep.lift.depth = F.depth;
  for (Index t = 0; t < src.size(); ++t)
    rep.lift.table.push_back(qh.classes[F.table[qg.class_of[t]]].front());
  rep.induces_F = induce_quotient_map(rep.lift, src, dst).map == F;
  rep.f_continuity = check_quotient_map_continuity(F, src, dst);

  for (Index y = 0; y < dst.size(); ++y) {
    const IndexSet& u = dst.topology().min_open(y);
    if (rep.projection_open) {
      IndexSet image;
      for (Index t : u) image.push_back(qh.class_of[t]);
      normalize(image);
      if (!qh.topology.is_open(image)) {
        rep.projection_open = false;
        rep.projection_open_witness = y;
      }
    }
    if (rep.opens_saturated && qh.saturate(u) != u) {
      rep.opens_saturated = false;
      rep.saturation_witness = y;
    }
  }
  rep.condition2 = neighborhood_condition(dst.sequence(), dst.depth(), &rep.condition2_witness);
  rep.condition2_source =
      neighborhood_condition(src.sequence(), src.depth(), &rep.condition2_source_witness);
  rep.lift_continuity = check_thread_map_continuity(rep.lift, src, dst);

  // Every way of picking one representative per target class in the image of F.
  IndexSet used(F.table.begin(), F.table.end());
  normalize(used);
  std::size_t choices = 1;
  bool overflow = false;
  for (Index c : used) {
    const std::size_t n = qh.classes[c].size();
    if (choices > representative_cap / n) {
      overflow = true;
      break;
    }
    choices *= n;
  }
  rep.representatives.exhaustive = !overflow;
  if (!overflow) {
    rep.representatives.choices = choices;
    std::vector<std::size_t> digit(used.size(), 0);
    std::vector<Index> slot(qh.size(), kUnmapped);
    for (std::size_t u = 0; u < used.size(); ++u) slot[used[u]] = u;
    std::vector<Index> table(src.size());
    for (std::size_t iter = 0; iter < choices; ++iter) {
      for (Index t = 0; t < src.size(); ++t) {
        Index c = F.table[qg.class_of[t]];
        table[t] = qh.classes[c][digit[slot[c]]];
      }
      if (is_continuous_map(src.topology(), dst.topology(), table).continuous) {
        ++rep.representatives.continuous_choices;
        if (!rep.representatives.first_continuous) {
          std::vector<Index> reps;
          for (std::size_t u = 0; u < used.size(); ++u) reps.push_back(qh.classes[used[u]][digit[u]]);
          rep.representatives.first_continuous = std::move(reps);
        }
      }
      for (std::size_t u = 0; u < used.size(); ++u) {
        if (++digit[u] < qh.classes[used[u]].size()) break;
        digit[u] = 0;
      }
    }
  }
  return rep;
}

ConstructReport construct_gcell_from_quotient_map(const QuotientMap& F, const TruncatedLimit& src,
                                                  const TruncatedLimit& dst,
                                                  ConstructOptions options) {
  require_class_map(F, src, dst);
  const InverseSequence& g = src.sequence();
  const InverseSequence& h = dst.sequence();
  const int depth = src.depth();
  const QuotientSpace& qg = src.quotient();
  const QuotientSpace& qh = dst.quotient();

  ConstructReport rep;
  rep.interpretation =
      "<x> is read as the set of depth-" + std::to_string(depth) +
      " threads through x, and h_j as the projection of threads to level j";
  rep.h1_simplex = h.level(1).relation().is_complete();
  if (options.enforce_hypotheses && !rep.h1_simplex)
    throw Error("hypothesis 'H_1 is a simplex' is violated: level 1 of the target has unrelated cells");
  rep.f_continuity = check_quotient_map_continuity(F, src, dst);
  if (options.enforce_hypotheses && !rep.f_continuity.continuous)
    throw Error("hypothesis 'F is continuous' is violated");

  // proj[j - 1] = cells of H_j met by pi'^{-1}(F(pi(threads))).
  auto projections = [&](const IndexSet& threads) {
    IndexSet target_classes;
    for (Index t : threads) target_classes.push_back(F.table[qg.class_of[t]]);
    normalize(target_classes);
    std::vector<IndexSet> proj(static_cast<std::size_t>(depth));
    for (Index c : target_classes)
      for (Index y : qh.classes[c])
        for (int j = 1; j <= depth; ++j) proj[static_cast<std::size_t>(j - 1)].push_back(dst.thread(y).at(j));
    for (auto& p : proj) normalize(p);
    return proj;
  };

  std::vector<std::vector<std::vector<IndexSet>>> point_proj(static_cast<std::size_t>(depth));
  rep.map = GCellMap(g, h);
  for (int i = 1; i <= depth; ++i) {
    const CellularGraph& level = g.level(i);
    for (Index x = 0; x < level.size(); ++x) {
      auto at_x = projections(src.threads_through(i, x));
      IndexSet around;
      for (Index b : ball(level, x, 1)) around = set_union(around, src.threads_through(i, b));
      auto at_ball = projections(around);
      for (int j = 1; j <= depth; ++j) {
        const IndexSet& bj = at_ball[static_cast<std::size_t>(j - 1)];
        if (!bj.empty() && is_simplex(h.level(j).relation(), bj))
          rep.map.set_image(i, x, j, at_x[static_cast<std::size_t>(j - 1)]);
      }
      point_proj[static_cast<std::size_t>(i - 1)].push_back(std::move(at_x));
    }
  }

  for (Index t = 0; t < src.size() && rep.nonempty_hypothesis; ++t)
    for (int k = 1; k <= depth; ++k) {
      bool found = false;
      for (int i = 1; i <= depth && !found; ++i) {
        const IndexSet& p = point_proj[static_cast<std::size_t>(i - 1)][src.thread(t).at(i)]
                                      [static_cast<std::size_t>(k - 1)];
        found = !p.empty() && !h.level(k).topology().hausdorff_violation(p);
      }
      if (!found) {
        rep.nonempty_hypothesis = false;
        rep.nonempty_witness = CompactnessWitness{t, k};
        break;
      }
    }
  if (options.enforce_hypotheses && !rep.nonempty_hypothesis)
    throw Error("hypothesis on nonempty compact Hausdorff projections fails at depth " +
                std::to_string(depth));

  rep.conditions = check_gcell_map(rep.map, src, dst);
  try {
    auto induced = gcell_induce_weak(rep.map, src, dst);
    rep.induced_continuity_probe = check_thread_map_continuity(induced.map, src, dst).continuous;
    rep.probe_note = "experimental: continuity of the induced thread map on the depth-" +
                     std::to_string(depth) + " model; not a verdict on the general question";
  } catch (const Error& e) {
    rep.probe_note = std::string("experimental probe not run: ") + e.what();
  }
  return rep;
}

}  // namespace cellstruct
