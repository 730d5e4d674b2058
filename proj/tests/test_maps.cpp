#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "exhaustive.hpp"
#include "support.hpp"

using namespace cellstruct;

namespace {

InverseSequence dyadic(int levels) { return generate({"dyadic_interval", levels, 2, false}); }
InverseSequence cantor(int levels) { return generate({"cantor", levels, 2, false}); }

WeakGCellMap identity_map(const TruncatedLimit& lim) {
  WeakGCellMap f{lim.depth(), {}};
  for (Index t = 0; t < lim.size(); ++t) f.table.push_back(t);
  return f;
}

QuotientMap identity_classes(const TruncatedLimit& lim) {
  QuotientMap f{lim.depth(), {}};
  for (Index c = 0; c < lim.quotient().size(); ++c) f.table.push_back(c);
  return f;
}

LevelMapFamily identity_family(const InverseSequence& s, int levels) {
  LevelMapFamily fam;
  for (int n = 1; n <= levels; ++n) {
    std::vector<Index> id(s.level(n).size());
    for (Index x = 0; x < id.size(); ++x) id[x] = x;
    fam.maps.push_back(std::move(id));
  }
  return fam;
}

struct Bundle {
  TruncatedLimit g;
  TruncatedLimit h;
};

Bundle limits(const StructureFile& file, int depth) {
  return {TruncatedLimit(file.source, depth), TruncatedLimit(file.target_or_source(), depth)};
}

// One level {a, b, c} with a ~ b, and a discrete two-point target.
Bundle two_to_one() {
  InverseSequence g({make_graph({"a", "b", "c"}, {{"a", "b"}})}, {});
  InverseSequence h({make_graph({"p", "q"}, {})}, {});
  return {TruncatedLimit(g, 1), TruncatedLimit(h, 1)};
}

// a, c open points, b closed with U(b) = {a, b, c}; diagonal relation.
InverseSequence closed_middle() {
  return InverseSequence({make_graph({"a", "b", "c"}, {}, {{"b", {"a", "b", "c"}}})}, {});
}

InverseSequence khalimsky_line() { return generate({"khalimsky_interval", 1, 2, false}); }

GCellMap pointwise(const InverseSequence& g, const InverseSequence& h, std::vector<Index> image) {
  GCellMap f(g, h);
  for (Index x = 0; x < image.size(); ++x) f.set_image(1, x, 1, {image[x]});
  return f;
}

// Upper / lower semicontinuity straight from the definition over all opens.
bool semicontinuous_oracle(const GCellMap& f, const InverseSequence& g, const InverseSequence& h,
                           SemicontinuitySide side) {
  for (int k = 1; k <= h.depth(); ++k)
    for (const auto& w : oracle::open_sets(h.level(k).topology()))
      for (int i = 1; i <= g.depth(); ++i) {
        IndexSet pre;
        for (Index x = 0; x < g.level(i).size(); ++x) {
          const IndexSet& fx = f.image(i, x, k);
          bool in = side == SemicontinuitySide::upper ? is_subset(fx, w)
                                                      : !set_intersection(fx, w).empty();
          if (in) pre.push_back(x);
        }
        if (!oracle::is_open(g.level(i).topology(), pre)) return false;
      }
  return true;
}

GCellMap random_gcell(const InverseSequence& g, const InverseSequence& h, std::mt19937& rng) {
  std::bernoulli_distribution bit(0.35);
  GCellMap f(g, h);
  for (int i = 1; i <= g.depth(); ++i)
    for (Index x = 0; x < g.level(i).size(); ++x)
      for (int k = 1; k <= h.depth(); ++k) {
        IndexSet s;
        for (Index y = 0; y < h.level(k).size(); ++y)
          if (bit(rng)) s.push_back(y);
        f.set_image(i, x, k, std::move(s));
      }
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// Thread maps

TEST_CASE("check_weak_gcell: identity and the Ex:Fcont maps") {
  auto file = ex_fcont_file(2, 3, 3);
  auto [g, h] = limits(file, 3);
  CHECK(check_weak_gcell(identity_map(g), g, g).ok);
  CHECK(check_weak_gcell(identity_map(h), h, h).ok);
  for (const char* name : {"jump", "straight"}) {
    auto f = resolve(std::get<WeakMapSpec>(file.maps.at(name)), g, h);
    CHECK_MESSAGE(check_weak_gcell(f, g, h).ok, name);
  }
}

TEST_CASE("check_weak_gcell: related dyadic threads sent to distinct Cantor threads") {
  TruncatedLimit g(dyadic(2), 2), h(cantor(2), 2);
  WeakGCellMap f{2, {}};
  for (Index t = 0; t < g.size(); ++t) f.table.push_back(t % h.size());
  auto rep = check_weak_gcell(f, g, h);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.witness);
  auto [a, b] = *rep.witness;
  CHECK(g.relation().relation.contains(a, b));
  CHECK_FALSE(h.relation().relation.contains(f.table[a], f.table[b]));

  CHECK_THROWS_AS(check_weak_gcell(WeakGCellMap{1, f.table}, g, h), Error);
  CHECK_THROWS_AS(check_weak_gcell(WeakGCellMap{2, {0}}, g, h), Error);
  TruncatedLimit h3(cantor(3), 3);
  CHECK_THROWS_AS(check_weak_gcell(f, g, h3), Error);
}

TEST_CASE("induce_quotient_map: identity, Ex:Fcont and an ill-defined map") {
  auto file = ex_fcont_file(2, 4, 4);
  auto [g, h] = limits(file, 4);
  auto id = induce_quotient_map(identity_map(g), g, g);
  CHECK(id.well_defined);
  CHECK(id.commutes);
  CHECK(id.map == identity_classes(g));

  REQUIRE(g.quotient().size() == 5);
  REQUIRE(h.quotient().size() == 5);
  auto expected = resolve(std::get<QuotientMapSpec>(file.maps.at("identity")), g, h);
  for (const char* name : {"jump", "straight"}) {
    auto f = resolve(std::get<WeakMapSpec>(file.maps.at(name)), g, h);
    auto rep = induce_quotient_map(f, g, h);
    CHECK(rep.well_defined);
    CHECK(rep.map == expected);
    CHECK(check_quotient_map_continuity(rep.map, g, h).continuous);
  }
  auto jump = resolve(std::get<WeakMapSpec>(file.maps.at("jump")), g, h);
  CHECK_FALSE(check_thread_map_continuity(jump, g, h).continuous);
  auto straight = resolve(std::get<WeakMapSpec>(file.maps.at("straight")), g, h);
  CHECK(check_thread_map_continuity(straight, g, h).continuous);

  auto [s, t] = two_to_one();
  WeakGCellMap bad{1, {0, 1, 0}};
  CHECK_FALSE(check_weak_gcell(bad, s, t).ok);
  auto rep = induce_quotient_map(bad, s, t);
  CHECK_FALSE(rep.well_defined);
  CHECK_FALSE(rep.commutes);
  REQUIRE(rep.witness);
  CHECK(*rep.witness == IndexPair{0, 1});
}

TEST_CASE("check_quotient_map_continuity: a closed point sent to an open one") {
  TruncatedLimit g(closed_middle(), 1);
  REQUIRE(g.quotient().size() == 3);
  CHECK(check_quotient_map_continuity(identity_classes(g), g, g).continuous);
  auto rep = check_quotient_map_continuity(QuotientMap{1, {0, 0, 2}}, g, g);
  CHECK_FALSE(rep.continuous);
  REQUIRE(rep.witness);
  CHECK(rep.witness->first == 1);
  CHECK(rep.witness->second == 2);
  CHECK(check_quotient_map_continuity(QuotientMap{1, {1, 1, 1}}, g, g).continuous);
  CHECK_THROWS_AS(check_quotient_map_continuity(QuotientMap{1, {0, 0}}, g, g), Error);
  CHECK_THROWS_AS(check_quotient_map_continuity(QuotientMap{1, {0, 0, 5}}, g, g), Error);
}

TEST_CASE("thread maps on small pairs: weak maps induce class maps, continuity descends") {
  struct Case {
    InverseSequence g, h;
    int depth;
  };
  std::vector<Case> cases{
      {generate({"ex_fcont_G", 2, 2, true}), generate({"khalimsky_interval", 2, 2, false}), 1},
      {closed_middle(), khalimsky_line(), 1},
      {generate({"ex_fcont_G", 2, 2, true}), closed_middle(), 1},
      {dyadic(2), cantor(2), 2},
      {cantor(2), dyadic(2), 2},
  };
  for (const auto& c : cases) {
    TruncatedLimit g(c.g, c.depth), h(c.h, c.depth);
    const std::size_t n = g.size(), m = h.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= m;
    REQUIRE(total <= 100000);
    std::size_t weak = 0, continuous = 0;
    for (std::size_t code = 0; code < total; ++code) {
      WeakGCellMap f{c.depth, std::vector<Index>(n)};
      std::size_t rest = code;
      for (auto& y : f.table) {
        y = rest % m;
        rest /= m;
      }
      bool is_weak = check_weak_gcell(f, g, h).ok;
      auto induced = induce_quotient_map(f, g, h);
      if (is_weak) {
        ++weak;
        CHECK(induced.well_defined);
        CHECK(induced.commutes);
      }
      bool cont = check_thread_map_continuity(f, g, h).continuous;
      CHECK(cont == oracle::is_continuous(g.topology(), h.topology(), f.table));
      if (cont && induced.well_defined) {
        ++continuous;
        CHECK(check_quotient_map_continuity(induced.map, g, h).continuous);
      }
    }
    CHECK(weak > 0);
    CHECK(continuous > 0);
  }
}

// ---------------------------------------------------------------------------
// Semicontinuity

TEST_CASE("check_semicontinuity: discrete sources accept every map") {
  std::mt19937 rng(11);
  auto g = cantor(2);
  auto h = generate({"ex_fcont_H", 2, 2, true});
  for (int trial = 0; trial < 50; ++trial) {
    auto f = random_gcell(g, h, rng);
    CHECK(check_semicontinuity(f, g, h, SemicontinuitySide::upper).ok);
    CHECK(check_semicontinuity(f, g, h, SemicontinuitySide::lower).ok);
  }
}

TEST_CASE("check_semicontinuity: full image is upper and lower semicontinuous") {
  auto fx = full_image_fixture(3);
  CHECK(check_semicontinuity(fx.map, fx.source, fx.target, SemicontinuitySide::upper).ok);
  CHECK(check_semicontinuity(fx.map, fx.source, fx.target, SemicontinuitySide::lower).ok);
}

TEST_CASE("check_semicontinuity: a jump across a closed point fails upper") {
  auto k = khalimsky_line();
  auto f = pointwise(k, k, {0, 1, 4, 3, 4});
  auto rep = check_semicontinuity(f, k, k, SemicontinuitySide::upper);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.witness);
  CHECK(rep.witness->target_level == 1);
  CHECK(rep.witness->source_level == 1);
  CHECK(rep.witness->point == 1);
  CHECK(rep.witness->neighbor == 2);
  CHECK(rep.witness->open_set == IndexSet{0, 1, 2});
  CHECK_FALSE(semicontinuous_oracle(f, k, k, SemicontinuitySide::upper));
  CHECK(check_semicontinuity(pointwise(k, k, {0, 1, 2, 3, 4}), k, k, SemicontinuitySide::upper).ok);
  CHECK_THROWS_AS(check_semicontinuity(f, k, cantor(2), SemicontinuitySide::upper), Error);
}

TEST_CASE("check_semicontinuity agrees with the all-opens oracle") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    auto g = oracle::random_sequence(rng, 2, 4, true);
    auto h = oracle::random_sequence(rng, 2, 4, true);
    auto f = random_gcell(g, h, rng);
    for (auto side : {SemicontinuitySide::upper, SemicontinuitySide::lower}) {
      auto rep = check_semicontinuity(f, g, h, side);
      CHECK(rep.ok == semicontinuous_oracle(f, g, h, side));
      if (!rep.ok) {
        REQUIRE(rep.witness);
        CHECK(h.level(rep.witness->target_level).topology().is_open(rep.witness->open_set));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// g-cell maps

TEST_CASE("check_gcell_map: full image passes, a nesting mutation fails") {
  auto fx = full_image_fixture(3);
  TruncatedLimit g(fx.source, 3), h(fx.target, 3);
  CHECK(check_gcell_map(fx.map, g, h).ok());

  GCellMap broken = fx.map;
  IndexSet k1 = broken.image(2, 0, 1);
  k1.erase(k1.begin());
  broken.set_image(2, 0, 1, k1);
  auto rep = check_gcell_map(broken, g, h);
  CHECK_FALSE(rep.nesting);
  REQUIRE(rep.nesting_witness);
  CHECK(rep.nesting_witness->source_level == 2);
  CHECK(rep.nesting_witness->cell == 0);
  CHECK(rep.nesting_witness->lower == 1);
  CHECK(rep.nesting_witness->upper == 2);
  CHECK(fx.target.project(2, rep.nesting_witness->offending, 1) == 0);

  TruncatedLimit g2(fx.source, 2);
  CHECK_THROWS_AS(check_gcell_map(fx.map, g2, h), Error);
}

TEST_CASE("check_gcell_map: compatibility, edge and compactness witnesses") {
  auto fx = full_image_fixture(2);
  TruncatedLimit g(fx.source, 2), h(fx.target, 2);

  GCellMap empty_above = fx.map;
  empty_above.set_image(2, 1, 1, {});
  auto rep = check_gcell_map(empty_above, g, h);
  CHECK_FALSE(rep.compatibility);
  REQUIRE(rep.compatibility_witness);
  CHECK(rep.compatibility_witness->empty);
  CHECK(rep.compatibility_witness->cell == 1);

  auto d = dyadic(2);
  auto c = cantor(2);
  TruncatedLimit dg(d, 2), ch(c, 2);
  GCellMap f(d, c);
  for (int i = 1; i <= 2; ++i)
    for (Index x = 0; x < d.level(i).size(); ++x) f.set_image(i, x, i, {x % c.level(i).size()});
  auto edges = check_gcell_map(f, dg, ch);
  CHECK_FALSE(edges.edges);
  REQUIRE(edges.edge_witness);
  auto [a, b] = edges.edge_witness->images;
  CHECK_FALSE(c.level(edges.edge_witness->target_level).relation().contains(a, b));

  GCellMap nothing(d, c);
  auto compact = check_gcell_map(nothing, dg, ch);
  CHECK(compact.first_three());
  CHECK_FALSE(compact.compact_nonempty);
  REQUIRE(compact.compact_witness);
  CHECK(compact.compact_witness->thread == 0);
  CHECK(compact.compact_witness->target_level == 1);
}

TEST_CASE("family_to_gcell: identity, Ex:Fcont (x,0) and a broken square") {
  auto d = dyadic(3);
  auto f = family_to_gcell(identity_family(d, 3), d, d);
  for (Index x = 0; x < d.level(3).size(); ++x) {
    CHECK(f.image(3, x, 3) == IndexSet{x});
    CHECK(f.image(3, x, 1) == IndexSet{d.project(3, x, 1)});
  }
  TruncatedLimit dl(d, 3);
  CHECK(check_gcell_map(f, dl, dl).ok());
  CHECK(check_closeness_preservation(f, dl, dl).ok());

  auto g = generate({"ex_fcont_G", 3, 2, true});
  auto h = generate({"ex_fcont_H", 3, 2, true});
  LevelMapFamily fam;
  for (int n = 1; n <= 3; ++n) {
    std::vector<Index> fn;
    for (long k = 0; k <= 4; ++k) fn.push_back(h.level(n).index_of(grid_id("h", k, 2)));
    fam.maps.push_back(fn);
  }
  auto straight = family_to_gcell(fam, g, h);
  for (long k = 0; k <= 4; ++k) {
    Index x = g.level(2).index_of(grid_id("x", k, 2));
    CHECK(straight.image(2, x, 1) == IndexSet{h.level(1).index_of(grid_id("h", k, 2))});
    CHECK(straight.image(2, x, 3).empty());
  }
  TruncatedLimit gl(g, 3), hl(h, 3);
  CHECK(check_gcell_map(straight, gl, hl).ok());

  auto perturbed = fam;
  perturbed.maps[1][0] = h.level(2).index_of("v1");
  CHECK_THROWS_WITH_AS(family_to_gcell(perturbed, g, h), doctest::Contains("does not commute"), Error);

  auto c = cantor(2);
  std::vector<Index> collapse(d.level(1).size(), 0);
  collapse.back() = 1;
  CHECK_THROWS_WITH_AS(family_to_gcell(LevelMapFamily{{collapse}}, d, c),
                       doctest::Contains("does not preserve"), Error);
  CHECK_THROWS_AS(family_to_gcell(LevelMapFamily{}, d, d), Error);
}

TEST_CASE("family_to_gcell: commuting edge-preserving families satisfy (1)-(4)") {
  auto pairs = exhaustive::pairs();
  for (const auto& p : pairs) {
    TruncatedLimit g(p.g, 2), h(p.h, 2);
    const std::size_t g1 = p.g.level(1).size(), g2 = p.g.level(2).size();
    const std::size_t h1 = p.h.level(1).size(), h2 = p.h.level(2).size();
    std::size_t n1 = 1, n2 = 1;
    for (std::size_t i = 0; i < g1; ++i) n1 *= h1;
    for (std::size_t i = 0; i < g2; ++i) n2 *= h2;
    std::size_t accepted = 0;
    for (std::size_t a = 0; a < n1; ++a)
      for (std::size_t b = 0; b < n2; ++b) {
        LevelMapFamily fam{{std::vector<Index>(g1), std::vector<Index>(g2)}};
        std::size_t r = a;
        for (auto& y : fam.maps[0]) y = r % h1, r /= h1;
        r = b;
        for (auto& y : fam.maps[1]) y = r % h2, r /= h2;
        GCellMap f;
        try {
          f = family_to_gcell(fam, p.g, p.h);
        } catch (const Error&) {
          continue;
        }
        ++accepted;
        auto rep = check_gcell_map(f, g, h);
        CHECK_MESSAGE(rep.ok(), p.name);
        CHECK(check_closeness_preservation(f, g, h).ok());
        auto sc = check_singleton_continuity(f, g, h);
        CHECK(sc.singleton);
        REQUIRE(sc.induced);
        for (Index t = 0; t < g.size(); ++t) {
          const Thread& y = h.thread(sc.induced->map.table[t]);
          CHECK(y.at(2) == fam.maps[1][g.thread(t).at(2)]);
        }
      }
    CHECK_MESSAGE(accepted > 0, p.name);
  }
}

TEST_CASE("check_closeness_preservation: a witness pair") {
  auto d = dyadic(2);
  auto c = cantor(2);
  TruncatedLimit dg(d, 2), ch(c, 2);
  GCellMap f(d, c);
  for (Index x = 0; x < d.level(2).size(); ++x) f.set_image(2, x, 2, {x % c.level(2).size()});
  auto rep = check_closeness_preservation(f, dg, ch);
  CHECK_FALSE(rep.ok());
  CHECK_FALSE(rep.same_level);
  REQUIRE(rep.same_level_witness);
  const auto& w = *rep.same_level_witness;
  CHECK(w.source.first.level == w.source.second.level);
  CHECK(oracle::close(d, w.source.first, w.source.second));
  CHECK_FALSE(oracle::close(c, w.image.first, w.image.second));
}

TEST_CASE("exhaustive: (1)-(3) preserve same-level closeness; (1)-(4) give a weak map") {
  for (const auto& p : exhaustive::pairs()) {
    TruncatedLimit g(p.g, 2), h(p.h, 2);
    std::size_t three = 0, four = 0, cross = 0;
    exhaustive::for_each_table(p, [&](const GCellMap& f) {
      auto rep = check_gcell_map(f, g, h);
      if (!rep.first_three()) return;
      ++three;
      auto c = check_closeness_preservation(f, g, h);
      if (!c.same_level) FAIL("same-level closeness fails on a table passing (1)-(3)");
      if (!c.cross_level) ++cross;
      if (!rep.compact_nonempty) return;
      ++four;
      auto induced = gcell_induce_weak(f, g, h);
      if (!check_weak_gcell(induced.map, g, h).ok) FAIL("induced map is not weak");
    });
    CHECK_MESSAGE(three > 0, p.name);
    CHECK_MESSAGE(four > 0, p.name);
    MESSAGE(p.name << ": " << three << " tables pass (1)-(3), " << cross << " break cross-level closeness");
  }
}

// Cross-level closeness is not implied by (1)-(4): f(b) is empty, so (2)
// puts no bound on f(b0), and a ~ b = g(b0).
TEST_CASE("cross-level closeness can fail under (1)-(4)") {
  auto p = exhaustive::pairs()[2];  // G(2,2)/H(2,2)
  TruncatedLimit g(p.g, 2), h(p.h, 2);
  GCellMap f(p.g, p.h);
  f.set_image(1, 0, 1, {1});
  f.set_image(1, 0, 2, {1});
  f.set_image(2, 0, 1, {1});
  f.set_image(2, 0, 2, {1});
  f.set_image(2, 1, 1, {0});
  f.set_image(2, 1, 2, {0});
  CHECK(check_gcell_map(f, g, h).ok());
  auto c = check_closeness_preservation(f, g, h);
  CHECK(c.same_level);
  CHECK_FALSE(c.cross_level);
  REQUIRE(c.cross_level_witness);
  CHECK(c.cross_level_witness->source == std::pair{CellRef{1, 0}, CellRef{2, 1}});
  CHECK(c.cross_level_witness->image == std::pair{CellRef{2, 1}, CellRef{2, 0}});
}

TEST_CASE("gcell_induce_weak: full image trace") {
  auto fx = full_image_fixture(3);
  TruncatedLimit g(fx.source, 3), h(fx.target, 3);
  auto out = gcell_induce_weak(fx.map, g, h);
  REQUIRE(out.trace.size() == g.size());
  for (Index t = 0; t < g.size(); ++t) {
    CHECK(out.map.table[t] == 0);
    CHECK(out.trace[t].alpha == std::vector<int>{1, 2, 3});
    for (int k = 1; k <= 3; ++k)
      CHECK(out.trace[t].k[static_cast<std::size_t>(k - 1)] == oracle::all_cells(fx.target.level(k).size()));
  }
  CHECK(check_weak_gcell(out.map, g, h).ok);
}

TEST_CASE("gcell_induce_weak: an empty K_2 is reported") {
  auto fx = full_image_fixture(2);
  TruncatedLimit g(fx.source, 2), h(fx.target, 2);
  GCellMap f = fx.map;
  for (int i = 1; i <= 2; ++i)
    for (Index x = 0; x < fx.source.level(i).size(); ++x) f.set_image(i, x, 2, {});
  CHECK_THROWS_WITH_AS(gcell_induce_weak(f, g, h), doctest::Contains("condition (4)"), Error);
}

TEST_CASE("check_singleton_continuity: family maps pass, full image fails the hypothesis") {
  auto d = dyadic(3);
  TruncatedLimit dl(d, 3);
  auto rep = check_singleton_continuity(family_to_gcell(identity_family(d, 3), d, d), dl, dl);
  CHECK(rep.hypotheses());
  REQUIRE(rep.induced);
  CHECK(rep.induced->map == identity_map(dl));
  REQUIRE(rep.conclusion);
  CHECK(rep.conclusion->continuous);

  auto fx = full_image_fixture(3);
  TruncatedLimit g(fx.source, 3), h(fx.target, 3);
  auto fi = check_singleton_continuity(fx.map, g, h);
  CHECK(fi.upper_semicontinuous);
  CHECK_FALSE(fi.singleton);
  REQUIRE(fi.singleton_witness);
  CHECK(fi.singleton_witness->second == 1);
  CHECK_FALSE(fi.hypotheses());
}

// ---------------------------------------------------------------------------
// DT cell maps

TEST_CASE("dt_induce_weak: levelwise identity") {
  auto d = dyadic(3);
  TruncatedLimit dl(d, 3);
  DTCellMap f{{1, 2, 3}, identity_family(d, 3).maps};
  auto out = dt_induce_weak(f, dl, dl);
  CHECK(out.map == identity_map(dl));
  CHECK(out.weak.ok);
}

TEST_CASE("dt_induce_weak: level shift on identity bondings") {
  auto g = generate({"ex_fcont_G", 4, 2, false});
  TruncatedLimit gl(g, 4);
  DTCellMap f{{1, 1, 2, 3}, identity_family(g, 4).maps};
  auto out = dt_induce_weak(f, gl, gl);
  CHECK(out.map == identity_map(gl));
  CHECK(out.weak.ok);
}

TEST_CASE("dt_induce_weak: rejects close cells sent apart and bad profiles") {
  auto d = dyadic(3);
  TruncatedLimit dl(d, 3);
  auto tables = identity_family(d, 3).maps;
  std::swap(tables[2].front(), tables[2].back());
  CHECK_THROWS_WITH_AS(dt_induce_weak(DTCellMap{{1, 2, 3}, tables}, dl, dl),
                       doctest::Contains("non-close"), Error);
  auto id = identity_family(d, 3).maps;
  CHECK_THROWS_AS(dt_induce_weak(DTCellMap{{2, 1, 3}, id}, dl, dl), Error);
  CHECK_THROWS_AS(dt_induce_weak(DTCellMap{{1, 1, 1}, id}, dl, dl), Error);
  CHECK_THROWS_AS(dt_induce_weak(DTCellMap{{1, 2}, id}, dl, dl), Error);
  CHECK_THROWS_AS(dt_induce_weak(DTCellMap{{1, 2, 4}, id}, dl, dl), Error);
}

TEST_CASE("dt_induce_weak: levelwise identity is the identity on valid fixtures") {
  for (const auto& fx : oracle::corpus()) {
    const auto& s = fx.seq;
    if (s.depth() < 2 || !validate_sequence(s).ok()) continue;
    const int depth = std::min(s.depth(), 3);
    std::size_t cells = 0;
    for (int n = 1; n <= depth; ++n) cells += s.level(n).size();
    if (cells > 120) continue;
    std::vector<CellularGraph> levels(s.levels().begin(), s.levels().begin() + depth);
    std::vector<std::vector<Index>> bondings(s.bondings().begin(), s.bondings().begin() + depth - 1);
    InverseSequence cut(levels, bondings);
    TruncatedLimit lim(cut, depth);
    std::vector<int> profile;
    for (int n = 1; n <= depth; ++n) profile.push_back(n);
    auto out = dt_induce_weak(DTCellMap{profile, identity_family(cut, depth).maps}, lim, lim);
    CHECK_MESSAGE(out.map == identity_map(lim), fx.name);
  }
}

// ---------------------------------------------------------------------------
// Lifting and construction

TEST_CASE("lift_quotient_map: discrete levels satisfy condition (2)") {
  auto c = cantor(3);
  TruncatedLimit cl(c, 3);
  auto rep = lift_quotient_map(identity_classes(cl), cl, cl);
  CHECK(rep.condition2);
  CHECK(rep.condition2_source);
  CHECK(rep.induces_F);
  CHECK(rep.theorem_applies());
  CHECK(rep.lift_continuity.continuous);
  CHECK(rep.lift == identity_map(cl));
  CHECK(rep.representatives.exhaustive);
  CHECK(rep.representatives.choices == 1);
}

TEST_CASE("lift_quotient_map: Ex:Fcont has one continuous representative choice") {
  auto file = ex_fcont_file(2, 4, 4);
  auto [g, h] = limits(file, 4);
  auto F = resolve(std::get<QuotientMapSpec>(file.maps.at("identity")), g, h);
  auto rep = lift_quotient_map(F, g, h);
  CHECK(rep.induces_F);
  CHECK(rep.f_continuity.continuous);
  CHECK(rep.representatives.exhaustive);
  CHECK(rep.representatives.choices == 5);
  CHECK(rep.representatives.continuous_choices == 1);
  REQUIRE(rep.representatives.first_continuous);
  auto straight = resolve(std::get<WeakMapSpec>(file.maps.at("straight")), g, h);
  for (Index rep_thread : *rep.representatives.first_continuous)
    CHECK(std::find(straight.table.begin(), straight.table.end(), rep_thread) != straight.table.end());

  auto capped = lift_quotient_map(F, g, h, 2);
  CHECK_FALSE(capped.representatives.exhaustive);
}

TEST_CASE("lift_quotient_map: the sine curve fails both conditions") {
  auto file = sine_curve_file(3, 4, 4);
  auto [g, h] = limits(file, 4);
  auto F = resolve(std::get<QuotientMapSpec>(file.maps.at("identity")), g, h);
  auto rep = lift_quotient_map(F, g, h);
  CHECK(rep.induces_F);
  CHECK_FALSE(rep.condition1());
  CHECK_FALSE(rep.condition2);
  REQUIRE(rep.condition2_witness);
  CHECK(rep.condition2_witness->level == 1);
  CHECK(rep.condition2_source);
  CHECK_FALSE(rep.f_continuity.continuous);
  CHECK(rep.representatives.choices == 5);
  CHECK(rep.representatives.continuous_choices == 0);
}

TEST_CASE("lift_quotient_map: lifts induce F, and the theorem's conclusion holds") {
  struct Case {
    InverseSequence g, h;
    int depth;
  };
  std::vector<Case> cases{
      {cantor(2), generate({"ex_fcont_H", 2, 2, true}), 2},
      {cantor(2), generate({"ex_fcont_H", 2, 2, false}), 2},
      {generate({"ex_fcont_G", 2, 2, true}), generate({"ex_fcont_H", 2, 2, true}), 2},
      {generate({"ex_fcont_G", 1, 2, true}), khalimsky_line(), 1},
      {closed_middle(), closed_middle(), 1},
  };
  std::size_t applied = 0;
  for (const auto& c : cases) {
    TruncatedLimit g(c.g, c.depth), h(c.h, c.depth);
    const std::size_t n = g.quotient().size(), m = h.quotient().size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= m;
    REQUIRE(total <= 5000);
    for (std::size_t code = 0; code < total; ++code) {
      QuotientMap F{c.depth, std::vector<Index>(n)};
      std::size_t r = code;
      for (auto& y : F.table) y = r % m, r /= m;
      auto rep = lift_quotient_map(F, g, h);
      CHECK(rep.induces_F);
      if (rep.theorem_applies()) {
        ++applied;
        CHECK(rep.representatives.continuous_choices > 0);
      }
    }
  }
  CHECK(applied > 0);
}

TEST_CASE("construct: complete target levels satisfy (1)-(4)") {
  auto fx = full_image_fixture(2);
  for (const auto& src : {cantor(2), dyadic(2), fx.source}) {
    TruncatedLimit g(src, 2), h(fx.target, 2);
    REQUIRE(h.quotient().size() == 1);
    QuotientMap F{2, std::vector<Index>(g.quotient().size(), 0)};
    auto rep = construct_gcell_from_quotient_map(F, g, h);
    CHECK(rep.h1_simplex);
    CHECK(rep.nonempty_hypothesis);
    CHECK(rep.conditions.ok());
    CHECK_FALSE(rep.interpretation.empty());
  }
}

TEST_CASE("construct: H_1 that is not a simplex") {
  auto file = ex_fcont_file(2, 3, 3);
  auto [g, h] = limits(file, 3);
  auto F = resolve(std::get<QuotientMapSpec>(file.maps.at("identity")), g, h);
  CHECK_THROWS_WITH_AS(construct_gcell_from_quotient_map(F, g, h), doctest::Contains("simplex"), Error);
  auto rep = construct_gcell_from_quotient_map(F, g, h, {false});
  CHECK_FALSE(rep.h1_simplex);
  Index x2 = file.source.level(1).index_of("x2");
  CHECK(rep.map.image(1, x2, 1).empty());
  CHECK_FALSE(rep.conditions.compact_nonempty);
}
