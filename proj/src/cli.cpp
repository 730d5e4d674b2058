#include <cellstruct/cli.hpp>

#include <cellstruct/examples.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace cellstruct::cli {

namespace {

using Report = nlohmann::ordered_json;

struct UsageError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Report rendering

bool is_scalar(const Report& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const Report& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "yes" : "no";
  return j.dump();
}

void render(const Report& j, std::ostream& out, int indent);

void render_value(const std::string& key, const Report& v, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (is_scalar(v)) {
    out << pad << key << ": " << scalar_text(v) << '\n';
  } else if (v.is_array() && std::all_of(v.begin(), v.end(), is_scalar)) {
    out << pad << key << ": [";
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar_text(v[i]);
    out << "]\n";
  } else {
    out << pad << key << ":\n";
    render(v, out, indent + 2);
  }
}

void render(const Report& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_value(k, v, out, indent);
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (is_scalar(v)) {
        out << pad << "- " << scalar_text(v) << '\n';
      } else if (v.is_array() && std::all_of(v.begin(), v.end(), is_scalar)) {
        out << pad << "- [";
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar_text(v[i]);
        out << "]\n";
      } else {
        std::ostringstream item;
        render(v, item, indent + 2);
        std::string text = item.str();
        out << pad << "- " << text.substr(std::min(text.size(), pad.size() + 2));
      }
    }
  }
}

void emit(const Report& rep, bool as_json, std::ostream& out) {
  if (as_json)
    out << rep.dump(2) << '\n';
  else
    render(rep, out, 0);
}

// ---------------------------------------------------------------------------
// Naming helpers

std::string cell_name(const InverseSequence& s, int level, Index x) {
  return describe(s, CellRef{level, x});
}

std::string thread_name(const TruncatedLimit& lim, Index t) {
  return describe(lim.sequence(), lim.thread(t));
}

std::string class_name(const TruncatedLimit& lim, Index c) {
  return "[" + thread_name(lim, lim.quotient().classes[c].front()) + "]";
}

Report cell_list(const InverseSequence& s, int level, const IndexSet& cells) {
  Report out = Report::array();
  for (Index x : cells) out.push_back(s.level(level).id(x));
  return out;
}

// ---------------------------------------------------------------------------
// Shared option handling

int max_depth(const StructureFile& file) {
  return std::min(file.source.depth(), file.target_or_source().depth());
}

int choose_depth(const StructureFile& file, std::optional<int> flag, std::optional<int> map_depth) {
  const int limit = max_depth(file);
  if (flag && (*flag < 1 || *flag > limit))
    throw UsageError("depth " + std::to_string(*flag) + " out of range 1.." + std::to_string(limit));
  if (flag && map_depth && *flag != *map_depth)
    throw UsageError("--depth " + std::to_string(*flag) + " conflicts with the map's depth " +
                     std::to_string(*map_depth));
  if (flag) return *flag;
  if (map_depth) {
    if (*map_depth > limit) throw UsageError("map depth exceeds the sequence depth");
    return *map_depth;
  }
  return std::min(kDefaultDepth, limit);
}

StructureFile load(const std::string& path) {
  try {
    return load_structure_file(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

Report notices_of(const StructureFile& file) {
  Report out = Report::array();
  for (const auto& n : file.notices) out.push_back(n);
  return out;
}

// ---------------------------------------------------------------------------
// check

Report validation_report(const InverseSequence& s, bool& ok) {
  SequenceValidation v = validate_sequence(s);
  ok = v.ok();
  Report levels = Report::array();
  for (const auto& b : v.bondings) {
    Report e;
    e["bonding"] = "g_" + std::to_string(b.level) + "^" + std::to_string(b.level + 1);
    e["total"] = b.total;
    if (b.untotal_cell) e["unmapped_cell"] = cell_name(s, b.level + 1, *b.untotal_cell);
    e["edges_preserved"] = b.edges_preserved;
    if (b.edge_witness)
      e["edge_witness"] = {cell_name(s, b.level + 1, b.edge_witness->first),
                           cell_name(s, b.level + 1, b.edge_witness->second)};
    e["continuous"] = b.continuous;
    if (b.continuity_witness)
      e["continuity_witness"] = {cell_name(s, b.level + 1, b.continuity_witness->first),
                                 cell_name(s, b.level + 1, b.continuity_witness->second)};
    levels.push_back(std::move(e));
  }
  Report rep;
  rep["ok"] = ok;
  rep["bondings"] = std::move(levels);
  return rep;
}

Report axiom_entry(const TruncatedLimit& lim, const ThreadAxiomEntry& e) {
  Report r;
  r["thread"] = thread_name(lim, e.thread);
  r["i"] = e.level;
  r["least_j"] = e.least_j ? Report(*e.least_j) : Report("not found within depth");
  return r;
}

Report sequence_check(const InverseSequence& s, int depth, bool& valid, bool& cell_structure,
                      bool& transitive) {
  Report rep;
  rep["levels"] = s.depth();
  Report sizes = Report::array();
  for (const auto& g : s.levels()) sizes.push_back(g.size());
  rep["level_sizes"] = std::move(sizes);
  rep["validation"] = validation_report(s, valid);
  cell_structure = false;
  transitive = true;
  if (!s.is_total()) {
    rep["note"] = "bondings are not total; thread-based checks skipped";
    return rep;
  }
  CellStructureReport cs = check_cell_structure(s, depth);
  TruncatedLimit lim(s, depth);
  cell_structure = cs.is_cell_structure();

  Report axioms;
  axioms["levels_discrete"] = cs.levels_discrete;
  axioms["a_per_thread"] = cs.per_thread_ok;
  if (cs.per_thread_witness) axioms["a_witness"] = axiom_entry(lim, *cs.per_thread_witness);
  Report uniform = Report::array();
  for (std::size_t i = 0; i < cs.uniform_least_j.size(); ++i) {
    Report u;
    u["i"] = i + 1;
    u["least_j"] = cs.uniform_least_j[i] ? Report(*cs.uniform_least_j[i]) : Report("not found within depth");
    uniform.push_back(std::move(u));
  }
  axioms["b_uniform"] = cs.uniform_ok;
  axioms["b_least_j"] = std::move(uniform);
  axioms["c_finiteness"] = cs.finiteness_ok;
  axioms["d_three_ball"] = cs.three_ball_ok;
  if (cs.three_ball_witness) axioms["d_witness"] = axiom_entry(lim, *cs.three_ball_witness);
  axioms["is_cell_structure"] = cell_structure;
  rep["cell_structure"] = std::move(axioms);

  rep["threads"] = lim.size();
  const ThreadRelation& r = lim.relation();
  transitive = r.transitive;
  Report rel;
  rel["pairs"] = r.relation.pair_count();
  rel["transitive"] = r.transitive;
  if (r.witness) {
    Report w = Report::array();
    for (Index t : *r.witness) w.push_back(thread_name(lim, t));
    rel["witness"] = std::move(w);
    rel["note"] =
        "r_D is not an equivalence relation at this depth; the quotient uses its transitive closure";
  }
  rep["natural_relation"] = std::move(rel);

  Report q;
  q["classes"] = lim.quotient().size();
  Report classes = Report::array();
  for (const auto& c : lim.quotient().classes) {
    Report members = Report::array();
    for (Index t : c) members.push_back(thread_name(lim, t));
    classes.push_back(std::move(members));
  }
  q["members"] = std::move(classes);
  q["topology_discrete"] = lim.quotient().topology.is_discrete();
  rep["quotient"] = std::move(q);
  return rep;
}

struct CheckOptions {
  std::string path;
  std::optional<int> depth;
  bool strict_equivalence = false;
  bool cell_structure = false;
  bool json = false;
};

int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
  StructureFile file = load(o.path);
  const int depth = choose_depth(file, o.depth, std::nullopt);
  Report rep;
  rep["command"] = "check";
  rep["file"] = o.path;
  rep["depth"] = depth;
  rep["semantics"] = "limit-dependent verdicts are evaluated at depth " + std::to_string(depth);
  rep["notices"] = notices_of(file);

  bool ok = true;
  bool all_transitive = true;
  auto run_one = [&](const char* key, const InverseSequence& s) {
    bool valid = false, cs = false, transitive = true;
    rep[key] = sequence_check(s, depth, valid, cs, transitive);
    ok = ok && valid && (!o.cell_structure || cs);
    all_transitive = all_transitive && transitive;
  };
  run_one("source", file.source);
  if (file.target) run_one("target", *file.target);
  if (!all_transitive && o.strict_equivalence) ok = false;
  rep["ok"] = ok;
  emit(rep, o.json, out);
  if (!all_transitive && !o.strict_equivalence)
    err << "warning: the natural relation is not transitive at depth " << depth << '\n';
  return ok ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------
// map

struct MapOptions {
  std::string action;
  std::string path;
  std::string name;
  std::optional<int> depth;
  std::string side = "both";
  bool force = false;
  bool json = false;
};

const std::vector<std::string>& kinds_for(const std::string& action) {
  static const std::map<std::string, std::vector<std::string>> table{
      {"check-weak", {"weak"}},
      {"check-gcell", {"gcell", "family"}},
      {"induce", {"weak", "gcell", "family", "dt"}},
      {"lift", {"quotient"}},
      {"construct", {"quotient"}},
      {"semicontinuity", {"gcell", "family"}},
      {"singleton", {"gcell", "family"}},
  };
  return table.at(action);
}

std::pair<std::string, const MapSpec*> pick_map(const StructureFile& file, const MapOptions& o) {
  const auto& kinds = kinds_for(o.action);
  auto accepts = [&](const MapSpec& m) {
    return std::find(kinds.begin(), kinds.end(), map_kind(m)) != kinds.end();
  };
  if (!o.name.empty()) {
    auto it = file.maps.find(o.name);
    if (it == file.maps.end()) throw UsageError("no map named '" + o.name + "' in " + o.path);
    if (!accepts(it->second))
      throw UsageError("map '" + o.name + "' has kind " + map_kind(it->second) + ", which '" +
                       o.action + "' does not take");
    return {it->first, &it->second};
  }
  std::vector<std::string> candidates;
  for (const auto& [name, m] : file.maps)
    if (accepts(m)) candidates.push_back(name);
  if (candidates.size() != 1) {
    std::string list;
    for (const auto& c : candidates) list += (list.empty() ? "" : ", ") + c;
    throw UsageError(candidates.empty() ? "no suitable map in " + o.path
                                        : "several suitable maps (" + list + "); pass --name");
  }
  return {candidates.front(), &file.maps.at(candidates.front())};
}

std::optional<int> spec_depth(const MapSpec& m) {
  if (const auto* w = std::get_if<WeakMapSpec>(&m)) return w->table.depth;
  if (const auto* q = std::get_if<QuotientMapSpec>(&m)) return q->table.depth;
  return std::nullopt;
}

GCellMap as_gcell(const MapSpec& m, const StructureFile& file) {
  if (const auto* f = std::get_if<GCellMap>(&m)) return *f;
  return family_to_gcell(std::get<LevelMapFamily>(m), file.source, file.target_or_source());
}

Report continuity_json(const ContinuityReport& c, const std::function<std::string(Index)>& name) {
  Report r;
  r["continuous"] = c.continuous;
  if (c.witness) r["witness"] = {name(c.witness->first), name(c.witness->second)};
  return r;
}

Report semicontinuity_json(const SemicontinuityReport& s, const StructureFile& file) {
  Report r;
  r["ok"] = s.ok;
  if (s.witness) {
    const auto& w = *s.witness;
    Report wj;
    wj["target_level"] = w.target_level;
    wj["open_set"] = cell_list(file.target_or_source(), w.target_level, w.open_set);
    wj["point"] = cell_name(file.source, w.source_level, w.point);
    wj["neighbor_outside"] = cell_name(file.source, w.source_level, w.neighbor);
    r["witness"] = std::move(wj);
  }
  return r;
}

Report gcell_report_json(const GCellReport& g, const TruncatedLimit& src, const StructureFile& file) {
  const InverseSequence& gs = file.source;
  const InverseSequence& hs = file.target_or_source();
  Report r;
  r["nesting"] = g.nesting;
  if (g.nesting_witness) {
    const auto& w = *g.nesting_witness;
    r["nesting_witness"] = {{"cell", cell_name(gs, w.source_level, w.cell)},
                            {"i", w.lower},
                            {"j", w.upper},
                            {"offending", cell_name(hs, w.upper, w.offending)}};
  }
  r["compatibility"] = g.compatibility;
  if (g.compatibility_witness) {
    const auto& w = *g.compatibility_witness;
    Report wj{{"i", w.lower}, {"j", w.upper}, {"cell", cell_name(gs, w.upper, w.cell)}, {"k", w.target_level}};
    if (w.empty)
      wj["problem"] = "f(x) cap H_k is empty";
    else
      wj["offending"] = cell_name(hs, w.target_level, w.offending);
    r["compatibility_witness"] = std::move(wj);
  }
  r["edges"] = g.edges;
  if (g.edge_witness) {
    const auto& w = *g.edge_witness;
    r["edge_witness"] = {{"cells", {cell_name(gs, w.source_level, w.cells.first), cell_name(gs, w.source_level, w.cells.second)}},
                         {"images", {cell_name(hs, w.target_level, w.images.first), cell_name(hs, w.target_level, w.images.second)}}};
  }
  r["compact_nonempty_hausdorff"] = g.compact_nonempty;
  if (g.compact_witness)
    r["compact_witness"] = {{"thread", thread_name(src, g.compact_witness->thread)},
                            {"k", g.compact_witness->target_level}};
  r["ok"] = g.ok();
  return r;
}

Report trace_json(const InducedWeakMap& ind, const TruncatedLimit& src, const TruncatedLimit& dst) {
  Report rows = Report::array();
  for (Index t = 0; t < src.size(); ++t) {
    const auto& tr = ind.trace[t];
    Report k = Report::array();
    for (std::size_t i = 0; i < tr.k.size(); ++i)
      k.push_back(cell_list(dst.sequence(), static_cast<int>(i) + 1, tr.k[i]));
    rows.push_back({{"thread", thread_name(src, t)},
                    {"alpha", tr.alpha},
                    {"K", std::move(k)},
                    {"image", thread_name(dst, ind.map.table[t])}});
  }
  return rows;
}

Report thread_table_json(const WeakGCellMap& f, const TruncatedLimit& src, const TruncatedLimit& dst) {
  Report rows = Report::object();
  for (Index t = 0; t < f.table.size(); ++t) rows[thread_name(src, t)] = thread_name(dst, f.table[t]);
  return rows;
}

Report class_table_json(const QuotientMap& F, const TruncatedLimit& src, const TruncatedLimit& dst) {
  Report rows = Report::object();
  for (Index c = 0; c < F.table.size(); ++c) rows[class_name(src, c)] = class_name(dst, F.table[c]);
  return rows;
}

int cmd_map(const MapOptions& o, std::ostream& out, std::ostream&) {
  StructureFile file = load(o.path);
  auto [name, spec] = pick_map(file, o);
  const int depth = choose_depth(file, o.depth, spec_depth(*spec));

  Report rep;
  rep["command"] = "map " + o.action;
  rep["file"] = o.path;
  rep["map"] = name;
  rep["kind"] = map_kind(*spec);
  rep["depth"] = depth;
  rep["notices"] = notices_of(file);

  TruncatedLimit src(file.source, depth);
  TruncatedLimit dst(file.target_or_source(), depth);
  auto src_thread = [&](Index t) { return thread_name(src, t); };
  auto src_class = [&](Index c) { return class_name(src, c); };
  bool ok = true;

  try {
    if (o.action == "check-weak") {
      WeakGCellMap f = resolve(std::get<WeakMapSpec>(*spec), src, dst);
      auto w = check_weak_gcell(f, src, dst);
      rep["weak_gcell"] = w.ok;
      if (w.witness) rep["witness"] = {src_thread(w.witness->first), src_thread(w.witness->second)};
      rep["thread_continuity"] = continuity_json(check_thread_map_continuity(f, src, dst), src_thread);
      ok = w.ok;
    } else if (o.action == "check-gcell") {
      GCellMap f = as_gcell(*spec, file);
      GCellReport g = check_gcell_map(f, src, dst);
      rep["conditions"] = gcell_report_json(g, src, file);
      auto c = check_closeness_preservation(f, src, dst);
      auto witness_json = [&](const std::optional<ClosenessWitness>& w) {
        Report j;
        if (w)
          j = {{"source", {describe(file.source, w->source.first), describe(file.source, w->source.second)}},
               {"images", {describe(file.target_or_source(), w->image.first),
                           describe(file.target_or_source(), w->image.second)}}};
        return j;
      };
      Report cj{{"same_level", c.same_level}, {"cross_level", c.cross_level}};
      if (c.same_level_witness) cj["same_level_witness"] = witness_json(c.same_level_witness);
      if (c.cross_level_witness) cj["cross_level_witness"] = witness_json(c.cross_level_witness);
      rep["closeness_preservation"] = std::move(cj);
      ok = g.ok();
    } else if (o.action == "induce") {
      if (const auto* w = std::get_if<WeakMapSpec>(spec)) {
        WeakGCellMap f = resolve(*w, src, dst);
        auto q = induce_quotient_map(f, src, dst);
        rep["well_defined"] = q.well_defined;
        if (q.witness) rep["witness"] = {src_thread(q.witness->first), src_thread(q.witness->second)};
        rep["commutes"] = q.commutes;
        if (q.well_defined) {
          rep["induced_class_map"] = class_table_json(q.map, src, dst);
          rep["thread_continuity"] = continuity_json(check_thread_map_continuity(f, src, dst), src_thread);
          rep["class_map_continuity"] =
              continuity_json(check_quotient_map_continuity(q.map, src, dst), src_class);
        }
        ok = q.well_defined && q.commutes;
      } else if (const auto* d = std::get_if<DTCellMap>(spec)) {
        auto ind = dt_induce_weak(*d, src, dst);
        rep["induced_thread_map"] = thread_table_json(ind.map, src, dst);
        rep["weak_gcell"] = ind.weak.ok;
        rep["target_three_ball"] = ind.target_three_ball;
        ok = ind.weak.ok || !ind.target_three_ball;
      } else {
        GCellMap f = as_gcell(*spec, file);
        auto ind = gcell_induce_weak(f, src, dst);
        rep["trace"] = trace_json(ind, src, dst);
        auto w = check_weak_gcell(ind.map, src, dst);
        rep["weak_gcell"] = w.ok;
        ok = w.ok;
      }
    } else if (o.action == "lift") {
      QuotientMap F = resolve(std::get<QuotientMapSpec>(*spec), src, dst);
      LiftReport l = lift_quotient_map(F, src, dst);
      rep["lift"] = thread_table_json(l.lift, src, dst);
      rep["induces_F"] = l.induces_F;
      rep["F_continuity"] = continuity_json(l.f_continuity, src_class);
      Report c1{{"holds", l.condition1()}, {"projection_open", l.projection_open}};
      if (l.projection_open_witness) c1["projection_witness"] = thread_name(dst, *l.projection_open_witness);
      c1["opens_saturated"] = l.opens_saturated;
      if (l.saturation_witness) c1["saturation_witness"] = thread_name(dst, *l.saturation_witness);
      rep["condition_1"] = std::move(c1);
      auto nb = [&](bool holds, const std::optional<LevelNeighborhoodWitness>& w, const InverseSequence& s) {
        Report r{{"holds", holds}};
        if (w)
          r["witness"] = {{"cell", cell_name(s, w->level, w->cell)},
                          {"least_open_around_ball", cell_list(s, w->level, w->u)},
                          {"outside", cell_name(s, w->level, w->offending)}};
        return r;
      };
      rep["condition_2"] = nb(l.condition2, l.condition2_witness, file.target_or_source());
      rep["condition_2_source_levels"] = nb(l.condition2_source, l.condition2_source_witness, file.source);
      rep["theorem_applies"] = l.theorem_applies();
      rep["lift_continuity"] = continuity_json(l.lift_continuity, src_thread);
      Report rs{{"exhaustive", l.representatives.exhaustive},
                {"choices", l.representatives.choices},
                {"continuous_choices", l.representatives.continuous_choices}};
      if (l.representatives.first_continuous) {
        Report reps = Report::array();
        for (Index y : *l.representatives.first_continuous) reps.push_back(thread_name(dst, y));
        rs["first_continuous"] = std::move(reps);
      }
      rep["representative_search"] = std::move(rs);
    } else if (o.action == "construct") {
      QuotientMap F = resolve(std::get<QuotientMapSpec>(*spec), src, dst);
      ConstructReport c = construct_gcell_from_quotient_map(F, src, dst, {!o.force});
      rep["interpretation"] = c.interpretation;
      rep["h1_simplex"] = c.h1_simplex;
      rep["F_continuity"] = continuity_json(c.f_continuity, src_class);
      rep["nonempty_hypothesis"] = c.nonempty_hypothesis;
      if (c.nonempty_witness)
        rep["nonempty_witness"] = {{"thread", thread_name(src, c.nonempty_witness->thread)},
                                   {"k", c.nonempty_witness->target_level}};
      Report table = Report::object();
      for (int i = 1; i <= depth; ++i)
        for (Index x = 0; x < file.source.level(i).size(); ++x) {
          Report img = Report::array();
          for (const auto& y : c.map.image(i, x))
            if (y.level <= depth) img.push_back(describe(file.target_or_source(), y));
          table[cell_name(file.source, i, x)] = std::move(img);
        }
      rep["constructed_map"] = std::move(table);
      rep["conditions"] = gcell_report_json(c.conditions, src, file);
      if (c.induced_continuity_probe) rep["experimental_probe_continuous"] = *c.induced_continuity_probe;
      rep["probe_note"] = c.probe_note;
      ok = c.conditions.ok();
    } else if (o.action == "semicontinuity") {
      GCellMap f = as_gcell(*spec, file);
      if (o.side != "lower") {
        auto u = check_semicontinuity(f, file.source, file.target_or_source(), SemicontinuitySide::upper);
        rep["upper"] = semicontinuity_json(u, file);
        ok = ok && u.ok;
      }
      if (o.side != "upper") {
        auto l = check_semicontinuity(f, file.source, file.target_or_source(), SemicontinuitySide::lower);
        rep["lower"] = semicontinuity_json(l, file);
        ok = ok && l.ok;
      }
    } else if (o.action == "singleton") {
      GCellMap f = as_gcell(*spec, file);
      auto s = check_singleton_continuity(f, src, dst);
      rep["upper_semicontinuous"] = s.upper_semicontinuous;
      if (s.semicontinuity_witness) rep["semicontinuity_witness"] = semicontinuity_json({false, s.semicontinuity_witness}, file)["witness"];
      rep["singleton"] = s.singleton;
      if (s.singleton_witness)
        rep["singleton_witness"] = {{"thread", thread_name(src, s.singleton_witness->first)},
                                    {"level", s.singleton_witness->second}};
      rep["hypotheses"] = s.hypotheses();
      if (s.induced) rep["induced_thread_map"] = thread_table_json(s.induced->map, src, dst);
      if (!s.induce_error.empty()) rep["induce_error"] = s.induce_error;
      if (s.conclusion) {
        rep["induced_continuity"] = continuity_json(*s.conclusion, src_thread);
        if (!s.hypotheses()) rep["note"] = "hypotheses fail; continuity is reported, not asserted";
      }
      ok = s.hypotheses() && s.conclusion && s.conclusion->continuous;
    }
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    rep["error"] = e.what();
    ok = false;
  }
  rep["ok"] = ok;
  emit(rep, o.json, out);
  return ok ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------
// export / gen

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
  if (!f) throw UsageError("cannot write '" + path + "'");
}

struct ExportOptions {
  std::string path;
  std::string format = "json";
  std::string out_path;
};

int cmd_export(const ExportOptions& o, std::ostream& out, std::ostream& err) {
  StructureFile file = load(o.path);
  for (const auto& n : file.notices) err << "notice: " << n << '\n';
  write_output(o.format == "dot" ? to_dot(file) : save_structure(file), o.out_path, out);
  return kExitOk;
}

struct GenOptions {
  std::string name;
  int levels = 4;
  int m = 2;
  std::string topology;
  std::optional<int> depth;
  std::string out_path;
};

int cmd_gen(const GenOptions& o, std::ostream& out) {
  GeneratorSpec spec{o.name, o.levels, o.m, o.topology == "khalimsky"};
  const int depth = o.depth.value_or(o.levels);
  StructureFile file;
  try {
    file = generate_file(spec, depth);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  write_output(save_structure(file), o.out_path, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification tool for cell structures and g-cell structures", "cellstruct"};
  app.require_subcommand(1);

  CheckOptions check;
  auto* c = app.add_subcommand("check", "Validate a structure file and report the axioms");
  c->add_option("file", check.path, "Structure file")->required();
  c->add_option("--depth,-d", check.depth, "Truncation depth D (default 4)");
  c->add_flag("--strict-equivalence", check.strict_equivalence,
              "Fail when the natural relation is not transitive");
  c->add_flag("--cell-structure", check.cell_structure, "Fail unless the cell-structure axioms hold");
  c->add_flag("--json", check.json, "Machine-readable report");

  MapOptions map;
  auto* m = app.add_subcommand("map", "Run a map check or construction");
  m->add_option("action", map.action, "Operation")
      ->required()
      ->check(CLI::IsMember({"check-weak", "check-gcell", "induce", "lift", "construct",
                             "semicontinuity", "singleton"}));
  m->add_option("file", map.path, "Structure file")->required();
  m->add_option("--name,-n", map.name, "Map name inside the file");
  m->add_option("--depth,-d", map.depth, "Truncation depth D");
  m->add_option("--side", map.side, "Semicontinuity side")->check(CLI::IsMember({"upper", "lower", "both"}));
  m->add_flag("--force", map.force, "construct: record failed hypotheses instead of stopping");
  m->add_flag("--json", map.json, "Machine-readable report");

  ExportOptions exp;
  auto* e = app.add_subcommand("export", "Write canonical JSON or DOT");
  e->add_option("file", exp.path, "Structure file")->required();
  e->add_option("--format,-f", exp.format, "Output format")->check(CLI::IsMember({"dot", "json"}));
  e->add_option("--out,-o", exp.out_path, "Output path (default stdout)");

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a fixture structure file");
  std::vector<std::string> gen_names = generator_names();
  gen_names.insert(gen_names.end(), {"ex_fcont", "sine_curve"});
  g->add_option("name", gen.name, "Generator")->required()->check(CLI::IsMember(gen_names));
  g->add_option("--levels,-L", gen.levels, "Number of levels");
  g->add_option("--m", gen.m, "Grid resolution exponent (step 2^-m)");
  g->add_option("--topology", gen.topology, "Level topology")
      ->check(CLI::IsMember({"khalimsky", "discrete"}));
  g->add_option("--depth,-d", gen.depth, "Depth of bundled thread maps (default: levels)");
  g->add_option("--out,-o", gen.out_path, "Output path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  }

  try {
    if (c->parsed()) return cmd_check(check, out, err);
    if (m->parsed()) return cmd_map(map, out, err);
    if (e->parsed()) return cmd_export(exp, out, err);
    return cmd_gen(gen, out);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitFail;
  }
}

}  // namespace cellstruct::cli
