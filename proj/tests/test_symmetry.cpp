#include "doctest.h"
#include "symmetry.hpp"

#include <random>

using namespace exfill;

namespace {
ExtSlope fr(std::int64_t p, std::int64_t q = 1) { return normalize_slope(p, q); }
ExtSlope E() { return slope_empty(); }
ExtSlope INF() { return slope_infinity(); }

FillingInstruction random_tuple(std::mt19937& rng, int n,
                                bool first_minus_one = false) {
  std::uniform_int_distribution<int> P(-9, 9), Q(1, 5);
  FillingInstruction f(n);
  for (int i = 0; i < n; ++i) f[i] = fr(P(rng), Q(rng));
  if (first_minus_one) f[0] = fr(-1);
  return f;
}
}  // namespace

TEST_CASE("builtin family sizes are 3 / 8 / 6 / 5") {
  CHECK(builtin_map_families(Manifold::M2).size() == 3);
  CHECK(builtin_map_families(Manifold::M3).size() == 8);
  CHECK(builtin_map_families(Manifold::M4).size() == 6);
  CHECK(builtin_map_families(Manifold::M5).size() == 5);
}

TEST_CASE("5-chain transposition map acts projectively on infinity") {
  auto maps = builtin_map_families(Manifold::M5);
  const auto& tr = maps[2];
  auto a = apply_filling_map(tr, {INF(), E(), E(), E(), E()});
  REQUIRE(a.has_value());
  CHECK(*a == FillingInstruction{E(), fr(0), E(), E(), E()});
  auto b = apply_filling_map(tr, {E(), E(), E(), INF(), E()});
  REQUIRE(b.has_value());
  CHECK(*b == FillingInstruction{E(), E(), E(), fr(1), E()});
}

TEST_CASE("5-chain guarded maps: images and guard failures") {
  auto maps = builtin_map_families(Manifold::M5);
  auto blow = maps[3], amph = maps[4];
  auto a = apply_filling_map(blow, {fr(-1), fr(-2), fr(-2), fr(-2), fr(-2)});
  REQUIRE(a.has_value());
  CHECK(*a == FillingInstruction{fr(-1), fr(-3), fr(-2), fr(-1), fr(-2)});
  CHECK_FALSE(
      apply_filling_map(amph, {fr(-1), fr(-2), fr(-2), fr(-3), fr(7)}));
}

TEST_CASE("involution and order properties of the map families") {
  std::mt19937 rng(5);
  auto m5 = builtin_map_families(Manifold::M5);
  auto m2 = builtin_map_families(Manifold::M2);
  for (int t = 0; t < 100; ++t) {
    auto f5 = random_tuple(rng, 5);
    auto g = apply_filling_map(m5[2], f5);  // transposition map
    REQUIRE(g);
    auto h = apply_filling_map(m5[2], *g);
    REQUIRE(h);
    CHECK(*h == f5);

    auto f2 = random_tuple(rng, 2);
    auto s = apply_filling_map(m2[0], f2);
    REQUIRE(s);
    auto s2 = apply_filling_map(m2[0], *s);
    REQUIRE(s2);
    CHECK(*s2 == f2);

    // guarded blow-down map has order 4 on its domain
    auto fb = random_tuple(rng, 5, true);
    auto cur = fb;
    for (int k = 0; k < 4; ++k) {
      auto nxt = apply_filling_map(m5[3], cur);
      REQUIRE(nxt);
      cur = *nxt;
    }
    CHECK(cur == fb);

    // guarded amphichirality map is an involution on its domain
    FillingInstruction fa{fr(-1), fr(-2), fr(-2), fr(-2),
                          random_tuple(rng, 1)[0]};
    auto a1 = apply_filling_map(m5[4], fa);
    REQUIRE(a1);
    auto a2 = apply_filling_map(m5[4], *a1);
    REQUIRE(a2);
    CHECK(*a2 == fa);
  }
}

TEST_CASE("position maps generate an S5 action of size 120") {
  auto maps = builtin_map_families(Manifold::M5);
  std::vector<FillingMap> s5{maps[0], maps[1], maps[2]};
  // Track where a generic tuple travels: the closure acting on distinct
  // generic rationals yields exactly 120 distinct images.
  FillingInstruction f{fr(23, 7), fr(31, 5), fr(-17, 3), fr(41, 11), fr(-29, 13)};
  auto orb = orbit_closure(f, s5, 30);
  CHECK(orb.stabilized);
  CHECK(orb.elements.size() == 120);
}

TEST_CASE("published orbits on the 5-chain manifold") {
  auto maps = builtin_map_families(Manifold::M5);
  auto orb_inf = orbit_closure({INF(), E(), E(), E(), E()}, maps, 12);
  CHECK(orb_inf.elements.size() == 15);

  auto orb_m1 = orbit_closure({fr(-1), E(), E(), E(), E()}, maps, 12);
  CHECK(orb_m1.elements.size() == 15);
  std::set<ExtSlope> slopes;
  for (const auto& t : orb_m1.elements)
    for (const auto& s : t)
      if (!s.is_empty()) slopes.insert(s);
  CHECK(slopes == std::set<ExtSlope>{fr(-1), fr(1, 2), fr(2)});

  auto orb_empty = orbit_closure({E(), E(), E(), E(), E()}, maps, 12);
  CHECK(orb_empty.elements.size() == 1);
}

TEST_CASE("per-cusp orbit of -1 under the 4-chain cusp-preserving maps") {
  auto maps = builtin_map_families(Manifold::M4);
  std::vector<FillingMap> gens{maps[2], maps[3]};  // the two Klein generators
  auto orb = orbit_closure({fr(-1), E(), E(), E()}, gens, 12);
  std::set<ExtSlope> slopes;
  for (const auto& t : orb.elements)
    if (!t[0].is_empty()) slopes.insert(t[0]);
  CHECK(slopes == std::set<ExtSlope>{fr(-1), fr(3, 2), fr(3), fr(1, 2)});
}

TEST_CASE("the seven main-theorem fillings are pairwise inequivalent") {
  auto maps = builtin_map_families(Manifold::M5);
  std::vector<FillingInstruction> seven{
      {INF(), E(), E(), E(), E()},
      {fr(-1), fr(-2), fr(-2), fr(-1), E()},
      {fr(-2), fr(-1, 2), fr(3), fr(3), fr(-1, 2)},
      {fr(-1), fr(-2), fr(-2), fr(-3), fr(-5)},
      {fr(-1), fr(-2), fr(-3), fr(-2), fr(-4)},
      {fr(-1), fr(-3), fr(-2), fr(-2), fr(-3)},
      {fr(-2), fr(-2), fr(-2), fr(-2), fr(-2)}};
  auto part = partition_classes(seven, maps, 12);
  CHECK(part.classes.size() == 7);
}

TEST_CASE("class partition of the published 2-cusp exceptional sets") {
  auto maps = builtin_map_families(Manifold::M2);
  std::vector<FillingInstruction> one_cusp;
  for (auto s : {fr(0), fr(1), fr(2), fr(3), fr(4), INF()}) {
    one_cusp.push_back({s, E()});
    one_cusp.push_back({E(), s});
  }
  CHECK(one_cusp.size() == 12);
  CHECK(partition_classes(one_cusp, maps, 12).classes.size() == 6);

  std::vector<FillingInstruction> two_cusp;
  auto add = [&](ExtSlope a, ExtSlope b) { two_cusp.push_back({a, b}); };
  add(fr(-4), fr(-1)); add(fr(-3), fr(-1)); add(fr(-2), fr(-2));
  add(fr(-2), fr(-1)); add(fr(-1), fr(-4)); add(fr(-1), fr(-3));
  add(fr(-1), fr(-2)); add(fr(-1), fr(-1)); add(fr(3, 2), fr(5));
  add(fr(4, 3), fr(5)); add(fr(5), fr(3, 2)); add(fr(5), fr(4, 3));
  add(fr(5, 2), fr(7, 2)); add(fr(7, 2), fr(5, 2));
  CHECK(two_cusp.size() == 14);
  CHECK(partition_classes(two_cusp, maps, 12).classes.size() == 8);

  CHECK(partition_classes({{fr(7), E()}}, maps, 12).classes.size() == 1);
}

TEST_CASE("class representatives are lexicographic minima") {
  auto maps = builtin_map_families(Manifold::M2);
  std::vector<FillingInstruction> all;
  for (auto s : {fr(0), fr(1), fr(2), fr(3), fr(4), INF()}) {
    all.push_back({s, E()});
    all.push_back({E(), s});
  }
  auto part = partition_classes(all, maps, 12);
  // representatives are lexicographically minimal: (∅, s) sorts before (s, ∅)
  for (const auto& cls : part.classes) CHECK(cls.representative[0] == E());
}

TEST_CASE("map families load from JSON") {
  std::string doc = R"json([
    {"sigma":[1,0],"mats":[[1,0,0,1],[1,0,0,1]]},
    {"sigma":[0,1],"mats":[[1,0,0,1],[-1,0,0,1]],"guard":[[0,"(-1,1)"]]}
  ])json";
  auto fam = map_family_from_json(doc);
  REQUIRE(fam.size() == 2);
  auto r = apply_filling_map(fam[0], {fr(3), fr(5)});
  REQUIRE(r);
  CHECK(*r == FillingInstruction{fr(5), fr(3)});
  CHECK_FALSE(apply_filling_map(fam[1], {fr(2), fr(5)}));
  auto g = apply_filling_map(fam[1], {fr(-1), fr(5)});
  REQUIRE(g);
  CHECK(*g == FillingInstruction{fr(-1), fr(-5)});
  CHECK_THROWS(map_family_from_json(R"([{"sigma":[0],"mats":[[2,0,0,1]]}])"));
}

TEST_CASE("instruction text round-trip") {
  FillingInstruction f{fr(-1, 2), E(), INF()};
  CHECK(instruction_text(f) == "[(-1,2),(0,0),(1,0)]");
  CHECK(parse_instruction("[(-1,2),(0,0),(1,0)]") == f);
  CHECK_THROWS(parse_instruction("nope"));
}
