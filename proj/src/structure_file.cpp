#include <cellstruct/structure_file.hpp>

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace cellstruct {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error("structure file: " + what); }

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where + ": missing \"" + key + "\"");
  return obj.at(key);
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where + ": expected a string");
  return v.get<std::string>();
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where + ": expected an integer");
  return v.get<int>();
}

const json& as_array(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where + ": expected an array");
  return v;
}

Index cell_at(const InverseSequence& s, int level, const std::string& id, const std::string& where) {
  if (level < 1 || level > s.depth()) fail(where + ": level " + std::to_string(level) + " out of range");
  auto idx = s.level(level).find(id);
  if (!idx) fail(where + ": unknown cell id '" + id + "' at level " + std::to_string(level));
  return *idx;
}

CellRef parse_cell_ref(const InverseSequence& s, const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) fail(where + ": expected [level, \"id\"]");
  int level = as_int(v[0], where);
  return CellRef{level, cell_at(s, level, as_string(v[1], where), where)};
}

json cell_ref_json(const InverseSequence& s, CellRef c) {
  return json::array({c.level, s.level(c.level).id(c.cell)});
}

InverseSequence parse_sequence(const json& obj, const std::string& where,
                               std::vector<std::string>& notices) {
  const json& levels = as_array(field(obj, "levels", where), where + ".levels");
  if (levels.empty()) fail(where + ": at least one level is required");
  std::vector<CellularGraph> graphs;
  for (std::size_t n = 0; n < levels.size(); ++n) {
    const std::string lw = where + ".levels[" + std::to_string(n) + "]";
    const json& lv = levels[n];
    std::vector<CellId> cells;
    for (const auto& c : as_array(field(lv, "cells", lw), lw + ".cells"))
      cells.push_back(as_string(c, lw + ".cells"));
    std::vector<std::pair<CellId, CellId>> pairs;
    if (lv.contains("relation"))
      for (const auto& p : as_array(lv.at("relation"), lw + ".relation")) {
        if (!p.is_array() || p.size() != 2) fail(lw + ".relation: expected [a, b] pairs");
        pairs.emplace_back(as_string(p[0], lw + ".relation"), as_string(p[1], lw + ".relation"));
      }
    std::map<CellId, std::vector<CellId>> min_open;
    if (lv.contains("min_open")) {
      const json& mo = lv.at("min_open");
      if (!mo.is_object()) fail(lw + ".min_open: expected an object");
      for (const auto& [id, members] : mo.items())
        for (const auto& m : as_array(members, lw + ".min_open"))
          min_open[id].push_back(as_string(m, lw + ".min_open"));
    }
    CellularGraph g = [&] {
      try {
        return make_graph(cells, pairs, min_open);
      } catch (const Error& e) {
        fail(lw + ": " + e.what());
      }
    }();
    std::set<std::pair<CellId, CellId>> given(pairs.begin(), pairs.end());
    if (g.relation().pair_count() > given.size())
      notices.push_back(where + " level " + std::to_string(n + 1) + ": relation closed (" +
                        std::to_string(g.relation().pair_count() - given.size()) +
                        " pairs added)");
    graphs.push_back(std::move(g));
  }

  std::vector<std::vector<Index>> tables(graphs.size() - 1);
  std::vector<bool> seen(graphs.size() - 1, false);
  const json empty = json::array();
  const json& bondings = obj.contains("bondings") ? as_array(obj.at("bondings"), where + ".bondings")
                                                  : empty;
  for (const auto& b : bondings) {
    const std::string bw = where + ".bondings";
    int from = as_int(field(b, "from_level", bw), bw + ".from_level");
    if (from < 2 || from > static_cast<int>(graphs.size()))
      fail(bw + ": from_level " + std::to_string(from) + " out of range");
    if (seen[from - 2]) fail(bw + ": duplicate bonding from level " + std::to_string(from));
    seen[from - 2] = true;
    const CellularGraph& upper = graphs[from - 1];
    const CellularGraph& lower = graphs[from - 2];
    auto& table = tables[from - 2];
    table.assign(upper.size(), kUnmapped);
    const json& t = field(b, "table", bw);
    if (!t.is_object()) fail(bw + ".table: expected an object");
    for (const auto& [child, parent] : t.items()) {
      auto c = upper.find(child);
      if (!c) fail(bw + ": unknown cell id '" + child + "' at level " + std::to_string(from));
      auto p = lower.find(as_string(parent, bw + ".table"));
      if (!p)
        fail(bw + ": unknown cell id '" + parent.get<std::string>() + "' at level " +
             std::to_string(from - 1));
      table[*c] = *p;
    }
    std::size_t missing = std::count(table.begin(), table.end(), kUnmapped);
    if (missing > 0)
      notices.push_back(where + " bonding from level " + std::to_string(from) + ": " +
                        std::to_string(missing) + " cells without image");
  }
  for (std::size_t n = 0; n < seen.size(); ++n)
    if (!seen[n]) fail(where + ": missing bonding from level " + std::to_string(n + 2));
  return InverseSequence(std::move(graphs), std::move(tables));
}

json sequence_json(const InverseSequence& s) {
  json levels = json::array();
  for (const auto& g : s.levels()) {
    json lv;
    lv["cells"] = g.cells();
    json rel = json::array();
    for (const auto& [a, b] : g.relation().pairs()) rel.push_back({g.id(a), g.id(b)});
    lv["relation"] = std::move(rel);
    if (!g.topology().is_discrete()) {
      json mo = json::object();
      for (Index u = 0; u < g.size(); ++u) {
        json members = json::array();
        for (Index v : g.topology().min_open(u)) members.push_back(g.id(v));
        mo[g.id(u)] = std::move(members);
      }
      lv["min_open"] = std::move(mo);
    }
    levels.push_back(std::move(lv));
  }
  json bondings = json::array();
  for (int n = 1; n < s.depth(); ++n) {
    json table = json::object();
    const auto& b = s.bonding(n);
    for (Index x = 0; x < b.size(); ++x)
      if (b[x] != kUnmapped) table[s.level(n + 1).id(x)] = s.level(n).id(b[x]);
    bondings.push_back({{"from_level", n + 1}, {"table", std::move(table)}});
  }
  return {{"levels", std::move(levels)}, {"bondings", std::move(bondings)}};
}

Thread parse_thread(const InverseSequence& s, const json& v, int depth, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != depth)
    fail(where + ": thread must list " + std::to_string(depth) + " cell ids");
  Thread t;
  for (int n = 1; n <= depth; ++n)
    t.coords.push_back(cell_at(s, n, as_string(v[static_cast<std::size_t>(n - 1)], where), where));
  for (int n = 1; n < depth; ++n)
    if (s.bonding(n)[t.at(n + 1)] != t.at(n)) fail(where + ": coordinates are not bonding-compatible");
  return t;
}

json thread_json(const InverseSequence& s, const Thread& t) {
  json out = json::array();
  for (int n = 1; n <= t.depth(); ++n) out.push_back(s.level(n).id(t.at(n)));
  return out;
}

ThreadTable parse_thread_table(const json& m, const InverseSequence& src, const InverseSequence& dst,
                               const std::string& where) {
  ThreadTable table;
  table.depth = as_int(field(m, "depth", where), where + ".depth");
  if (table.depth < 1 || table.depth > src.depth() || table.depth > dst.depth())
    fail(where + ": depth out of range");
  for (const auto& e : as_array(field(m, "table", where), where + ".table")) {
    if (!e.is_array() || e.size() != 2) fail(where + ".table: expected [source, target] entries");
    table.entries.emplace_back(parse_thread(src, e[0], table.depth, where),
                               parse_thread(dst, e[1], table.depth, where));
  }
  std::sort(table.entries.begin(), table.entries.end());
  for (std::size_t i = 1; i < table.entries.size(); ++i)
    if (table.entries[i - 1].first == table.entries[i].first)
      fail(where + ": source thread listed twice");
  return table;
}

json thread_table_json(const ThreadTable& t, const InverseSequence& src, const InverseSequence& dst) {
  json entries = json::array();
  for (const auto& [a, b] : t.entries) entries.push_back(json::array({thread_json(src, a), thread_json(dst, b)}));
  return {{"depth", t.depth}, {"table", std::move(entries)}};
}

MapSpec parse_map(const json& m, const InverseSequence& src, const InverseSequence& dst,
                  const std::string& where) {
  const std::string kind = as_string(field(m, "kind", where), where + ".kind");
  if (kind == "weak") return WeakMapSpec{parse_thread_table(m, src, dst, where)};
  if (kind == "quotient") return QuotientMapSpec{parse_thread_table(m, src, dst, where)};
  if (kind == "gcell") {
    GCellMap f(src, dst);
    for (const auto& e : as_array(field(m, "table", where), where + ".table")) {
      CellRef x = parse_cell_ref(src, field(e, "cell", where), where + ".cell");
      for (const auto& img : as_array(field(e, "image", where), where + ".image")) {
        CellRef y = parse_cell_ref(dst, img, where + ".image");
        f.insert(x.level, x.cell, y.level, y.cell);
      }
    }
    return f;
  }
  if (kind == "family") {
    LevelMapFamily fam;
    const json& levels = as_array(field(m, "levels", where), where + ".levels");
    if (static_cast<int>(levels.size()) > std::min(src.depth(), dst.depth()))
      fail(where + ": family has more levels than the sequences");
    for (std::size_t n = 0; n < levels.size(); ++n) {
      const int level = static_cast<int>(n) + 1;
      const json& t = levels[n];
      if (!t.is_object()) fail(where + ".levels: expected objects");
      std::vector<Index> table(src.level(level).size(), kUnmapped);
      for (const auto& [a, b] : t.items())
        table[cell_at(src, level, a, where)] = cell_at(dst, level, as_string(b, where), where);
      if (std::count(table.begin(), table.end(), kUnmapped) > 0)
        fail(where + ": f_" + std::to_string(level) + " is not total");
      fam.maps.push_back(std::move(table));
    }
    return fam;
  }
  if (kind == "dt") {
    DTCellMap f;
    for (const auto& p : as_array(field(m, "profile", where), where + ".profile"))
      f.profile.push_back(as_int(p, where + ".profile"));
    if (static_cast<int>(f.profile.size()) != src.depth())
      fail(where + ": profile needs one entry per source level");
    for (int n = 1; n <= src.depth(); ++n) {
      int k = f.profile[static_cast<std::size_t>(n - 1)];
      if (k < 1 || k > dst.depth()) fail(where + ": profile entry out of range");
      f.table.emplace_back(src.level(n).size(), kUnmapped);
    }
    for (const auto& e : as_array(field(m, "table", where), where + ".table")) {
      CellRef x = parse_cell_ref(src, field(e, "cell", where), where + ".cell");
      CellRef y = parse_cell_ref(dst, field(e, "image", where), where + ".image");
      if (y.level != f.profile[static_cast<std::size_t>(x.level - 1)])
        fail(where + ": image level disagrees with the profile");
      f.table[static_cast<std::size_t>(x.level - 1)][x.cell] = y.cell;
    }
    for (const auto& t : f.table)
      if (std::count(t.begin(), t.end(), kUnmapped) > 0) fail(where + ": DT table is not total");
    return f;
  }
  fail(where + ": unknown map kind '" + kind + "'");
}

json map_json(const MapSpec& spec, const InverseSequence& src, const InverseSequence& dst) {
  return std::visit(
      [&](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, WeakMapSpec> || std::is_same_v<T, QuotientMapSpec>) {
          json out = thread_table_json(m.table, src, dst);
          out["kind"] = std::is_same_v<T, WeakMapSpec> ? "weak" : "quotient";
          return out;
        } else if constexpr (std::is_same_v<T, GCellMap>) {
          json table = json::array();
          for (int i = 1; i <= m.source_depth(); ++i)
            for (Index x = 0; x < m.source_size(i); ++x) {
              auto img = m.image(i, x);
              if (img.empty()) continue;
              json cells = json::array();
              for (const auto& y : img) cells.push_back(cell_ref_json(dst, y));
              table.push_back({{"cell", cell_ref_json(src, CellRef{i, x})}, {"image", std::move(cells)}});
            }
          return {{"kind", "gcell"}, {"table", std::move(table)}};
        } else if constexpr (std::is_same_v<T, LevelMapFamily>) {
          json levels = json::array();
          for (std::size_t n = 0; n < m.maps.size(); ++n) {
            const int level = static_cast<int>(n) + 1;
            json t = json::object();
            for (Index x = 0; x < m.maps[n].size(); ++x)
              t[src.level(level).id(x)] = dst.level(level).id(m.maps[n][x]);
            levels.push_back(std::move(t));
          }
          return {{"kind", "family"}, {"levels", std::move(levels)}};
        } else {
          json table = json::array();
          for (std::size_t n = 0; n < m.table.size(); ++n) {
            const int level = static_cast<int>(n) + 1;
            for (Index x = 0; x < m.table[n].size(); ++x)
              table.push_back({{"cell", cell_ref_json(src, CellRef{level, x})},
                               {"image", cell_ref_json(dst, CellRef{m.profile[n], m.table[n][x]})}});
          }
          return {{"kind", "dt"}, {"profile", m.profile}, {"table", std::move(table)}};
        }
      },
      spec);
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void dot_sequence(std::ostringstream& out, const InverseSequence& s, const std::string& prefix) {
  for (int n = 1; n <= s.depth(); ++n) {
    const CellularGraph& g = s.level(n);
    const std::string tag = prefix + std::to_string(n);
    out << "  subgraph " << dot_quote("cluster_" + tag) << " {\n";
    out << "    label=" << dot_quote(prefix + "_" + std::to_string(n)) << ";\n";
    for (Index u = 0; u < g.size(); ++u)
      out << "    " << dot_quote(tag + ":" + g.id(u)) << " [label=" << dot_quote(g.id(u)) << "];\n";
    for (const auto& [a, b] : g.relation().pairs())
      if (a < b)
        out << "    " << dot_quote(tag + ":" + g.id(a)) << " -> " << dot_quote(tag + ":" + g.id(b))
            << " [dir=none];\n";
    out << "  }\n";
  }
  for (int n = 1; n < s.depth(); ++n) {
    const auto& b = s.bonding(n);
    for (Index x = 0; x < b.size(); ++x)
      if (b[x] != kUnmapped)
        out << "  " << dot_quote(prefix + std::to_string(n + 1) + ":" + s.level(n + 1).id(x)) << " -> "
            << dot_quote(prefix + std::to_string(n) + ":" + s.level(n).id(b[x]))
            << " [style=dotted];\n";
  }
}

}  // namespace

std::string map_kind(const MapSpec& m) {
  switch (m.index()) {
    case 0: return "weak";
    case 1: return "quotient";
    case 2: return "gcell";
    case 3: return "family";
    default: return "dt";
  }
}

StructureFile load_structure(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");
  const std::string version = as_string(field(doc, "version", "top level"), "version");
  if (version != kFormatVersion) fail("unsupported version '" + version + "'");
  for (const auto& [key, value] : doc.items())
    if (key != "version" && key != "levels" && key != "bondings" && key != "target" && key != "maps")
      fail("unknown top-level key '" + key + "'");

  StructureFile file;
  file.source = parse_sequence(doc, "source", file.notices);
  if (doc.contains("target")) file.target = parse_sequence(doc.at("target"), "target", file.notices);
  if (doc.contains("maps")) {
    const json& maps = doc.at("maps");
    if (!maps.is_object()) fail("\"maps\" must be an object");
    for (const auto& [name, m] : maps.items())
      file.maps.emplace(name, parse_map(m, file.source, file.target_or_source(), "maps." + name));
  }
  return file;
}

StructureFile load_structure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_structure(buf.str());
}

std::string save_structure(const StructureFile& file) {
  json doc = sequence_json(file.source);
  doc["version"] = kFormatVersion;
  if (file.target) doc["target"] = sequence_json(*file.target);
  if (!file.maps.empty()) {
    json maps = json::object();
    for (const auto& [name, m] : file.maps)
      maps[name] = map_json(m, file.source, file.target_or_source());
    doc["maps"] = std::move(maps);
  }
  return doc.dump(2) + "\n";
}

std::string to_dot(const StructureFile& file) {
  std::ostringstream out;
  out << "digraph cellstruct {\n";
  out << "  compound=true;\n";
  dot_sequence(out, file.source, "G");
  const char* target_prefix = file.target ? "H" : "G";
  if (file.target) dot_sequence(out, *file.target, "H");
  for (const auto& [name, m] : file.maps) {
    if (const auto* f = std::get_if<GCellMap>(&m)) {
      for (int i = 1; i <= f->source_depth(); ++i)
        for (Index x = 0; x < f->source_size(i); ++x)
          for (const auto& y : f->image(i, x))
            out << "  " << dot_quote("G" + std::to_string(i) + ":" + file.source.level(i).id(x))
                << " -> "
                << dot_quote(target_prefix + std::to_string(y.level) + ":" +
                             file.target_or_source().level(y.level).id(y.cell))
                << " [style=dashed, label=" << dot_quote(name) << "];\n";
    } else if (const auto* d = std::get_if<DTCellMap>(&m)) {
      for (std::size_t n = 0; n < d->table.size(); ++n)
        for (Index x = 0; x < d->table[n].size(); ++x)
          out << "  " << dot_quote("G" + std::to_string(n + 1) + ":" + file.source.level(static_cast<int>(n) + 1).id(x))
              << " -> "
              << dot_quote(target_prefix + std::to_string(d->profile[n]) + ":" +
                           file.target_or_source().level(d->profile[n]).id(d->table[n][x]))
              << " [style=bold, label=" << dot_quote(name) << "];\n";
    } else if (const auto* fam = std::get_if<LevelMapFamily>(&m)) {
      for (std::size_t n = 0; n < fam->maps.size(); ++n)
        for (Index x = 0; x < fam->maps[n].size(); ++x)
          out << "  " << dot_quote("G" + std::to_string(n + 1) + ":" + file.source.level(static_cast<int>(n) + 1).id(x))
              << " -> "
              << dot_quote(target_prefix + std::to_string(n + 1) + ":" +
                           file.target_or_source().level(static_cast<int>(n) + 1).id(fam->maps[n][x]))
              << " [style=bold, label=" << dot_quote(name) << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

WeakGCellMap resolve(const WeakMapSpec& spec, const TruncatedLimit& src, const TruncatedLimit& dst) {
  if (spec.table.depth != src.depth() || spec.table.depth != dst.depth())
    throw Error("weak map depth " + std::to_string(spec.table.depth) +
                " does not match the truncation depth " + std::to_string(src.depth()));
  WeakGCellMap f;
  f.depth = spec.table.depth;
  f.table.assign(src.size(), kUnmapped);
  for (const auto& [a, b] : spec.table.entries) f.table[src.thread_index(a)] = dst.thread_index(b);
  if (std::count(f.table.begin(), f.table.end(), kUnmapped) > 0)
    throw Error("weak map is not total on the depth-" + std::to_string(f.depth) + " threads");
  return f;
}

QuotientMap resolve(const QuotientMapSpec& spec, const TruncatedLimit& src,
                    const TruncatedLimit& dst) {
  if (spec.table.depth != src.depth() || spec.table.depth != dst.depth())
    throw Error("quotient map depth " + std::to_string(spec.table.depth) +
                " does not match the truncation depth " + std::to_string(src.depth()));
  QuotientMap F;
  F.depth = spec.table.depth;
  F.table.assign(src.quotient().size(), kUnmapped);
  for (const auto& [a, b] : spec.table.entries) {
    Index c = src.quotient().class_of[src.thread_index(a)];
    Index d = dst.quotient().class_of[dst.thread_index(b)];
    if (F.table[c] != kUnmapped && F.table[c] != d)
      throw Error("quotient map sends one class to two classes");
    F.table[c] = d;
  }
  if (std::count(F.table.begin(), F.table.end(), kUnmapped) > 0)
    throw Error("quotient map is not total on the source classes");
  return F;
}

WeakMapSpec to_spec(const WeakGCellMap& f, const TruncatedLimit& src, const TruncatedLimit& dst) {
  WeakMapSpec spec;
  spec.table.depth = f.depth;
  for (Index t = 0; t < f.table.size(); ++t)
    spec.table.entries.emplace_back(src.thread(t), dst.thread(f.table[t]));
  return spec;
}

QuotientMapSpec to_spec(const QuotientMap& f, const TruncatedLimit& src, const TruncatedLimit& dst) {
  QuotientMapSpec spec;
  spec.table.depth = f.depth;
  for (Index c = 0; c < f.table.size(); ++c)
    spec.table.entries.emplace_back(src.thread(src.quotient().classes[c].front()),
                                    dst.thread(dst.quotient().classes[f.table[c]].front()));
  return spec;
}

std::string describe(const InverseSequence& s, const Thread& t) {
  std::string out;
  for (int n = 1; n <= t.depth(); ++n) {
    if (n > 1) out += '/';
    out += s.level(n).id(t.at(n));
  }
  return out;
}

std::string describe(const InverseSequence& s, CellRef c) {
  return s.level(c.level).id(c.cell) + "@" + std::to_string(c.level);
}

}  // namespace cellstruct
