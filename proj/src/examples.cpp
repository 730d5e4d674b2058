#include <cellstruct/examples.hpp>

namespace cellstruct {

namespace {

std::string pad(long k, int width) {
  std::string s = std::to_string(k);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

int digits(long n) { return static_cast<int>(std::to_string(n).size()); }

void require(bool ok, const std::string& what) {
  if (!ok) throw Error("generator: " + what);
}

CellularGraph level_of(std::vector<CellId> cells, const std::vector<IndexPair>& pairs,
                       std::vector<IndexSet> min_open = {}) {
  const std::size_t n = cells.size();
  Relation r = Relation::closure(n, pairs);
  FiniteTopology t = min_open.empty() ? FiniteTopology::discrete(n)
                                      : FiniteTopology::from_min_open(std::move(min_open));
  return CellularGraph(std::move(cells), std::move(r), std::move(t));
}

std::vector<IndexSet> discrete_table(std::size_t n) {
  std::vector<IndexSet> t(n);
  for (Index u = 0; u < n; ++u) t[u] = {u};
  return t;
}

// Khalimsky structure along `line`: odd positions are open points whose
// minimal open also holds both neighbours.
void install_khalimsky(std::vector<IndexSet>& table, const std::vector<Index>& line) {
  for (std::size_t p = 1; p < line.size(); p += 2) {
    IndexSet u{line[p - 1], line[p]};
    if (p + 1 < line.size()) u.push_back(line[p + 1]);
    normalize(u);
    table[line[p]] = std::move(u);
  }
}

InverseSequence repeat_level(const CellularGraph& g, int levels) {
  std::vector<Index> id(g.size());
  for (Index x = 0; x < g.size(); ++x) id[x] = x;
  return InverseSequence(std::vector<CellularGraph>(static_cast<std::size_t>(levels), g),
                         std::vector<std::vector<Index>>(static_cast<std::size_t>(levels - 1), id));
}

long grid_size(int m) { return 1L << m; }

InverseSequence dyadic_interval(int levels, bool complete) {
  require(levels >= 1 && levels <= 20, "dyadic levels must lie in 1..20");
  const int width = digits((1L << levels) - 1);
  std::vector<CellularGraph> gs;
  std::vector<std::vector<Index>> bondings;
  for (int n = 1; n <= levels; ++n) {
    const Index size = Index{1} << n;
    std::vector<CellId> cells;
    std::vector<IndexPair> pairs;
    for (Index k = 0; k < size; ++k) {
      cells.push_back("d" + pad(static_cast<long>(k), width));
      if (complete) {
        for (Index l = k + 1; l < size; ++l) pairs.emplace_back(k, l);
      } else if (k + 1 < size) {
        pairs.emplace_back(k, k + 1);
      }
    }
    gs.push_back(level_of(std::move(cells), pairs));
    if (n > 1) {
      std::vector<Index> parent(size);
      for (Index k = 0; k < size; ++k) parent[k] = k / 2;
      bondings.push_back(std::move(parent));
    }
  }
  return InverseSequence(std::move(gs), std::move(bondings));
}

InverseSequence cantor(int levels) {
  require(levels >= 1 && levels <= 16, "cantor levels must lie in 1..16");
  std::vector<CellularGraph> gs;
  std::vector<std::vector<Index>> bondings;
  for (int n = 1; n <= levels; ++n) {
    const Index size = Index{1} << n;
    std::vector<CellId> cells;
    for (Index k = 0; k < size; ++k) {
      std::string bits;
      for (int b = n - 1; b >= 0; --b) bits += ((k >> b) & 1U) ? '1' : '0';
      cells.push_back(std::move(bits));
    }
    gs.push_back(level_of(std::move(cells), {}));
    if (n > 1) {
      std::vector<Index> prefix(size);
      for (Index k = 0; k < size; ++k) prefix[k] = k >> 1U;
      bondings.push_back(std::move(prefix));
    }
  }
  return InverseSequence(std::move(gs), std::move(bondings));
}

CellularGraph grid_line(const std::string& prefix, int m, bool khalimsky) {
  const long n = grid_size(m);
  std::vector<CellId> cells;
  std::vector<Index> line;
  for (long k = 0; k <= n; ++k) {
    cells.push_back(grid_id(prefix, k, m));
    line.push_back(static_cast<Index>(k));
  }
  auto table = discrete_table(cells.size());
  if (khalimsky) install_khalimsky(table, line);
  return level_of(std::move(cells), {}, std::move(table));
}

CellularGraph ex_fcont_h_level(int m, bool khalimsky) {
  const long n = grid_size(m);
  const Index mid = static_cast<Index>(n / 2);
  std::vector<CellId> cells;
  std::vector<Index> horizontal, vertical{mid};
  for (long k = 0; k <= n; ++k) {
    cells.push_back(grid_id("h", k, m));
    horizontal.push_back(static_cast<Index>(k));
  }
  std::vector<IndexPair> pairs;
  for (long l = 1; l <= n; ++l) {
    cells.push_back(grid_id("v", l, m));
    const Index v = static_cast<Index>(n + l);
    vertical.push_back(v);
    pairs.emplace_back(v, mid);
  }
  auto table = discrete_table(cells.size());
  if (khalimsky) {
    install_khalimsky(table, horizontal);
    install_khalimsky(table, vertical);
  }
  return level_of(std::move(cells), pairs, std::move(table));
}

InverseSequence sine_curve_h(int m, int levels, bool khalimsky) {
  const long n = grid_size(m);
  const long half = n / 2;
  std::vector<CellId> cells;
  std::vector<IndexPair> pairs;
  std::vector<Index> upper;
  for (long k = 0; k <= n; ++k) {
    cells.push_back(grid_id("s", k, m));
    if (k >= half) {
      pairs.emplace_back(static_cast<Index>(k), static_cast<Index>(half));
      upper.push_back(static_cast<Index>(k));
    }
  }
  auto table = discrete_table(cells.size());
  // Khalimsky only on [1/2, 1], where the bonding is the identity.
  if (khalimsky) install_khalimsky(table, upper);
  CellularGraph g = level_of(std::move(cells), pairs, std::move(table));

  std::vector<Index> h(static_cast<std::size_t>(n + 1));
  for (long k = 0; k <= n; ++k) {
    long y = k <= n / 4 ? 4 * k : (k <= half ? 3 * n / 2 - 2 * k : k);
    h[static_cast<std::size_t>(k)] = static_cast<Index>(y);
  }
  return InverseSequence(std::vector<CellularGraph>(static_cast<std::size_t>(levels), g),
                         std::vector<std::vector<Index>>(static_cast<std::size_t>(levels - 1), h));
}

Thread constant_thread(Index x, int depth) {
  return Thread{std::vector<Index>(static_cast<std::size_t>(depth), x)};
}

Thread thread_ending_at(const InverseSequence& s, Index x, int depth) {
  Thread t;
  for (int n = 1; n <= depth; ++n) t.coords.push_back(s.project(depth, x, n));
  return t;
}

void require_depth(int depth, int levels) {
  require(depth >= 1 && depth <= levels, "map depth must lie in 1..levels");
}

}  // namespace

const std::vector<std::string>& generator_names() {
  static const std::vector<std::string> names{"dyadic_interval", "cantor",       "ex_fcont_G",
                                              "ex_fcont_H",      "sine_curve_H", "khalimsky_interval",
                                              "full_image_map"};
  return names;
}

std::string grid_id(const std::string& prefix, long k, int m) {
  return prefix + pad(k, digits(grid_size(m)));
}

InverseSequence generate(const GeneratorSpec& spec) {
  require(spec.levels >= 1, "levels must be at least 1");
  const bool grid = spec.name == "ex_fcont_G" || spec.name == "ex_fcont_H" ||
                    spec.name == "sine_curve_H" || spec.name == "khalimsky_interval";
  if (grid) require(spec.m >= 2 && spec.m <= 12, "m must lie in 2..12");
  if (spec.name == "dyadic_interval" || spec.name == "cantor")
    require(!spec.khalimsky, spec.name + " has no Khalimsky variant");

  if (spec.name == "dyadic_interval") return dyadic_interval(spec.levels, false);
  if (spec.name == "cantor") return cantor(spec.levels);
  if (spec.name == "ex_fcont_G") return repeat_level(grid_line("x", spec.m, spec.khalimsky), spec.levels);
  if (spec.name == "ex_fcont_H") return repeat_level(ex_fcont_h_level(spec.m, spec.khalimsky), spec.levels);
  if (spec.name == "sine_curve_H") return sine_curve_h(spec.m, spec.levels, spec.khalimsky);
  if (spec.name == "khalimsky_interval") return repeat_level(grid_line("k", spec.m, true), spec.levels);
  if (spec.name == "full_image_map") throw Error("generator: full_image_map yields a map bundle, not a sequence");
  throw Error("generator: unknown name '" + spec.name + "'");
}

FullImageFixture full_image_fixture(int levels) {
  FullImageFixture fx{dyadic_interval(levels, false), dyadic_interval(levels, true), {}};
  fx.map = GCellMap(fx.source, fx.target);
  for (int i = 1; i <= levels; ++i)
    for (Index x = 0; x < fx.source.level(i).size(); ++x)
      for (int k = 1; k <= i; ++k) {
        IndexSet all(fx.target.level(k).size());
        for (Index y = 0; y < all.size(); ++y) all[y] = y;
        fx.map.set_image(i, x, k, std::move(all));
      }
  return fx;
}

StructureFile ex_fcont_file(int m, int levels, int depth, bool khalimsky) {
  require_depth(depth, levels);
  StructureFile file;
  file.source = generate({"ex_fcont_G", levels, m, khalimsky});
  file.target = generate({"ex_fcont_H", levels, m, khalimsky});
  const Index n = static_cast<Index>(grid_size(m));
  WeakMapSpec jump, straight;
  jump.table.depth = straight.table.depth = depth;
  for (Index x = 0; x <= n; ++x) {
    const Thread src = constant_thread(x, depth);
    straight.table.entries.emplace_back(src, constant_thread(x, depth));
    // 1/2 jumps to the top of the vertical segment, v<N>.
    jump.table.entries.emplace_back(src, constant_thread(x == n / 2 ? 2 * n : x, depth));
  }
  QuotientMapSpec identity{straight.table};
  file.maps.emplace("jump", std::move(jump));
  file.maps.emplace("straight", std::move(straight));
  file.maps.emplace("identity", std::move(identity));
  return file;
}

StructureFile sine_curve_file(int m, int levels, int depth, bool khalimsky) {
  require_depth(depth, levels);
  StructureFile file;
  file.source = generate({"ex_fcont_G", levels, m, khalimsky});
  file.target = generate({"sine_curve_H", levels, m, khalimsky});
  QuotientMapSpec identity;
  identity.table.depth = depth;
  for (Index x = 0; x < file.source.level(1).size(); ++x)
    identity.table.entries.emplace_back(constant_thread(x, depth),
                                        thread_ending_at(*file.target, x, depth));
  file.maps.emplace("identity", std::move(identity));
  return file;
}

StructureFile full_image_file(int levels) {
  FullImageFixture fx = full_image_fixture(levels);
  StructureFile file;
  file.source = std::move(fx.source);
  file.target = std::move(fx.target);
  file.maps.emplace("full_image", std::move(fx.map));
  return file;
}

StructureFile generate_file(const GeneratorSpec& spec, int depth) {
  if (spec.name == "ex_fcont") return ex_fcont_file(spec.m, spec.levels, depth, spec.khalimsky);
  if (spec.name == "sine_curve") return sine_curve_file(spec.m, spec.levels, depth, spec.khalimsky);
  if (spec.name == "full_image_map") return full_image_file(spec.levels);
  StructureFile file;
  file.source = generate(spec);
  return file;
}

std::vector<MapFixture> paper_counterexample_maps() {
  StructureFile ex = ex_fcont_file(2, 4, 4);
  return {{"jump", ex, "jump"}, {"straight", ex, "straight"}, {"full_image", full_image_file(3), "full_image"}};
}

}  // namespace cellstruct
