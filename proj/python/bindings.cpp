#include <cellstruct/cli.hpp>
#include <cellstruct/examples.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace cellstruct;

namespace {

// Python-facing view of a structure file; everything is keyed by cell id.
class Structure {
 public:
  explicit Structure(StructureFile f) : file_(std::move(f)) {}

  const StructureFile& file() const { return file_; }

  const InverseSequence& side(const std::string& which) const {
    if (which == "source") return file_.source;
    if (which == "target") {
      if (!file_.target) throw py::value_error("structure has no target sequence");
      return *file_.target;
    }
    throw py::value_error("side must be 'source' or 'target'");
  }

  std::vector<std::string> thread_names(const TruncatedLimit& lim, const IndexSet& ts) const {
    std::vector<std::string> out;
    for (Index t : ts) out.push_back(describe(lim.sequence(), lim.thread(t)));
    return out;
  }

  std::pair<TruncatedLimit, TruncatedLimit> limits(int depth) const {
    return {TruncatedLimit(file_.source, depth), TruncatedLimit(file_.target_or_source(), depth)};
  }

  const MapSpec& map(const std::string& name) const {
    auto it = file_.maps.find(name);
    if (it == file_.maps.end()) throw py::key_error("no map named '" + name + "'");
    return it->second;
  }

 private:
  StructureFile file_;
};

std::vector<std::vector<std::string>> levels_of(const InverseSequence& s) {
  std::vector<std::vector<std::string>> out;
  for (const auto& g : s.levels()) out.push_back(g.cells());
  return out;
}

py::dict quotient_dict(const Structure& st, const std::string& side, int depth) {
  TruncatedLimit lim(st.side(side), depth);
  const auto& q = lim.quotient();
  py::list classes;
  for (const auto& c : q.classes) classes.append(st.thread_names(lim, c));
  py::dict d;
  d["classes"] = classes;
  d["transitive"] = q.transitive;
  if (q.transitivity_witness) {
    const auto& w = *q.transitivity_witness;
    d["witness"] = st.thread_names(lim, {w[0], w[1], w[2]});
  } else {
    d["witness"] = py::none();
  }
  return d;
}

std::optional<std::pair<std::string, std::string>> pair_names(const TruncatedLimit& lim,
                                                              const std::optional<IndexPair>& p) {
  if (!p) return std::nullopt;
  return std::pair{describe(lim.sequence(), lim.thread(p->first)),
                   describe(lim.sequence(), lim.thread(p->second))};
}

py::dict weak_dict(const Structure& st, const std::string& name) {
  const auto* spec = std::get_if<WeakMapSpec>(&st.map(name));
  if (!spec) throw py::value_error("map '" + name + "' is not a weak map");
  auto [g, h] = st.limits(spec->table.depth);
  WeakGCellMap f = resolve(*spec, g, h);
  auto weak = check_weak_gcell(f, g, h);
  auto cont = check_thread_map_continuity(f, g, h);
  auto ind = induce_quotient_map(f, g, h);
  py::dict d;
  d["depth"] = f.depth;
  d["weak"] = weak.ok;
  d["weak_witness"] = pair_names(g, weak.witness);
  d["continuous"] = cont.continuous;
  d["continuity_witness"] = pair_names(g, cont.witness);
  d["induced_well_defined"] = ind.well_defined;
  d["induced_table"] = ind.map.table;
  d["induced_continuous"] = ind.well_defined && check_quotient_map_continuity(ind.map, g, h).continuous;
  return d;
}

py::dict lift_dict(const Structure& st, const std::string& name) {
  const auto* spec = std::get_if<QuotientMapSpec>(&st.map(name));
  if (!spec) throw py::value_error("map '" + name + "' is not a quotient map");
  auto [g, h] = st.limits(spec->table.depth);
  QuotientMap F = resolve(*spec, g, h);
  auto rep = lift_quotient_map(F, g, h);
  py::dict d;
  d["induces_F"] = rep.induces_F;
  d["F_continuous"] = rep.f_continuity.continuous;
  d["condition1"] = rep.condition1();
  d["condition2"] = rep.condition2;
  d["lift_continuous"] = rep.lift_continuity.continuous;
  d["choices"] = rep.representatives.choices;
  d["continuous_choices"] = rep.representatives.continuous_choices;
  d["exhaustive"] = rep.representatives.exhaustive;
  return d;
}

py::dict gcell_dict(const Structure& st, const std::string& name, int depth) {
  const auto* f = std::get_if<GCellMap>(&st.map(name));
  if (!f) throw py::value_error("map '" + name + "' is not a g-cell map");
  auto [g, h] = st.limits(depth);
  auto rep = check_gcell_map(*f, g, h);
  auto close = check_closeness_preservation(*f, g, h);
  const auto& src = st.file().source;
  const auto& dst = st.file().target_or_source();
  py::dict d;
  d["nesting"] = rep.nesting;
  d["compatibility"] = rep.compatibility;
  d["edges"] = rep.edges;
  d["compact_nonempty"] = rep.compact_nonempty;
  d["closeness_same_level"] = close.same_level;
  d["closeness_cross_level"] = close.cross_level;
  d["upper_semicontinuous"] = check_semicontinuity(*f, src, dst, SemicontinuitySide::upper).ok;
  d["lower_semicontinuous"] = check_semicontinuity(*f, src, dst, SemicontinuitySide::lower).ok;
  d["induced"] = py::none();
  if (rep.ok()) {
    auto induced = gcell_induce_weak(*f, g, h);
    std::vector<std::string> images;
    for (Index y : induced.map.table) images.push_back(describe(dst, h.thread(y)));
    d["induced"] = images;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_cellstruct, m) {
  m.doc() = "Inverse sequences of cellular graphs, their limits and maps";

  py::register_exception<Error>(m, "CellstructError", PyExc_ValueError);

  py::class_<Structure>(m, "Structure")
      .def_property_readonly("depth", [](const Structure& s) { return s.file().source.depth(); })
      .def_property_readonly("has_target", [](const Structure& s) { return s.file().target.has_value(); })
      .def_property_readonly("notices", [](const Structure& s) { return s.file().notices; })
      .def_property_readonly("map_names",
                             [](const Structure& s) {
                               std::vector<std::string> names;
                               for (const auto& [k, v] : s.file().maps) names.push_back(k);
                               return names;
                             })
      .def("map_kind", [](const Structure& s, const std::string& name) { return map_kind(s.map(name)); })
      .def("levels", [](const Structure& s, const std::string& side) { return levels_of(s.side(side)); },
           py::arg("side") = "source")
      .def("validate", [](const Structure& s, const std::string& side) {
             return validate_sequence(s.side(side)).ok();
           }, py::arg("side") = "source")
      .def("ball",
           [](const Structure& s, int level, const std::string& cell, int k, const std::string& side) {
             const auto& g = s.side(side).level(level);
             std::vector<std::string> out;
             for (Index b : ball(g, g.index_of(cell), k)) out.push_back(g.id(b));
             return out;
           },
           py::arg("level"), py::arg("cell"), py::arg("k") = 1, py::arg("side") = "source")
      .def("threads",
           [](const Structure& s, int depth, const std::string& side) {
             std::vector<std::vector<std::string>> out;
             const auto& seq = s.side(side);
             for (const auto& t : enumerate_threads(seq, depth)) {
               std::vector<std::string> ids;
               for (int n = 1; n <= depth; ++n) ids.push_back(seq.level(n).id(t.at(n)));
               out.push_back(std::move(ids));
             }
             return out;
           },
           py::arg("depth"), py::arg("side") = "source")
      .def("quotient", &quotient_dict, py::arg("side") = "source", py::arg("depth") = 4)
      .def("cell_structure",
           [](const Structure& s, int depth, const std::string& side) {
             auto rep = check_cell_structure(s.side(side), depth);
             py::dict d;
             d["is_cell_structure"] = rep.is_cell_structure();
             d["per_thread"] = rep.per_thread_ok;
             d["uniform"] = rep.uniform_ok;
             d["three_ball"] = rep.three_ball_ok;
             d["uniform_least_j"] = rep.uniform_least_j;
             return d;
           },
           py::arg("depth"), py::arg("side") = "source")
      .def("check_weak", &weak_dict, py::arg("name"))
      .def("lift", &lift_dict, py::arg("name"))
      .def("check_gcell", &gcell_dict, py::arg("name"), py::arg("depth"))
      .def("save", [](const Structure& s) { return save_structure(s.file()); })
      .def("to_dot", [](const Structure& s) { return to_dot(s.file()); });

  m.def("generator_names", &generator_names);
  m.def("generate",
        [](const std::string& name, int levels, int m_, bool khalimsky, std::optional<int> depth) {
          GeneratorSpec spec{name, levels, m_, khalimsky};
          return Structure(generate_file(spec, depth.value_or(levels)));
        },
        py::arg("name"), py::arg("levels") = 4, py::arg("m") = 2, py::arg("khalimsky") = false,
        py::arg("depth") = py::none());
  m.def("loads", [](const std::string& text) { return Structure(load_structure(text)); }, py::arg("text"));
  m.def("load", [](const std::string& path) { return Structure(load_structure_file(path)); }, py::arg("path"));
  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          int code = cli::run(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line interface in-process; returns (exit code, stdout, stderr).");
}
