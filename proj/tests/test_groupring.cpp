#include <random>

#include "doctest.h"
#include "zgunits/error.hpp"
#include "zgunits/groupring.hpp"

using namespace zgunits;

namespace {

// sum c_k x^k for the cyclic group generated by x = element 1.
GroupRingElement cyc(long n, std::vector<long> c) {
  AbelianGroup g({n});
  std::vector<Int> v(static_cast<std::size_t>(n), 0);
  for (std::size_t k = 0; k < c.size(); ++k) v[k % static_cast<std::size_t>(n)] += c[k];
  return GroupRingElement::from_int_coeffs(g, v);
}

GroupRingElement random_element(std::mt19937_64& rng, const AbelianGroup& g, bool rational) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 4);
  std::vector<Rat> c;
  for (long i = 0; i < g.order(); ++i) c.emplace_back(num(rng), rational ? den(rng) : 1);
  return GroupRingElement::from_coeffs(g, c);
}

std::vector<AbelianGroup> test_groups() {
  std::vector<AbelianGroup> out;
  for (auto& g : abelian_groups_up_to(24)) out.push_back(g);
  for (const char* s : {"C40", "C2xC20", "C3xC9", "C2xC2xC6"}) out.push_back(AbelianGroup::parse(s));
  return out;
}

}  // namespace

TEST_CASE("group ring arithmetic examples") {
  AbelianGroup g({5});
  CHECK((GroupRingElement::basis(g, 2) * GroupRingElement::basis(g, 3)).is_one());
  CHECK((cyc(2, {1, 1}) * cyc(2, {1, -1})).is_zero());
  CHECK((cyc(5, {1, -1, 1}) * cyc(5, {0, 1, 1, 0, -1})).is_one());
  CHECK(cyc(3, {0, 1}).pow(3).is_one());
  CHECK_THROWS_AS(cyc(2, {1}) * cyc(3, {1}), Error);
}

TEST_CASE("idempotent examples") {
  auto m = primitive_idempotents(AbelianGroup({2}));
  REQUIRE(m.size() == 2);
  CHECK(m[0].idempotent == cyc(2, {1, 1}) * Rat(1, 2));
  CHECK(m[1].idempotent == cyc(2, {1, -1}) * Rat(1, 2));
  m = primitive_idempotents(AbelianGroup({3}));
  REQUIRE(m.size() == 2);
  CHECK(m[0].idempotent == cyc(3, {1, 1, 1}) * Rat(1, 3));
  CHECK(m[1].idempotent == cyc(3, {2, -1, -1}) * Rat(1, 3));
  m = primitive_idempotents(AbelianGroup({6}));
  std::vector<long> orders;
  for (const auto& c : m) orders.push_back(c.order);
  std::sort(orders.begin(), orders.end());
  CHECK(orders == std::vector<long>{1, 2, 3, 6});
}

TEST_CASE("decomposition examples") {
  using V = std::vector<std::pair<long, long>>;
  CHECK(decomposition(AbelianGroup({6})) == V{{1, 1}, {2, 1}, {3, 1}, {6, 1}});
  CHECK(decomposition(AbelianGroup({2, 2})) == V{{1, 1}, {2, 3}});
  CHECK(decomposition(AbelianGroup()) == V{{1, 1}});
  for (const auto& g : test_groups()) {
    long total = 0;
    for (auto [d, t] : decomposition(g)) total += t * euler_phi(d);
    CHECK(total == g.order());
    CHECK(primitive_idempotents(g).size() == cyclic_subgroups(g).size());
  }
}

TEST_CASE("idempotents are orthogonal and complete") {
  for (const auto& g : test_groups()) {
    CAPTURE(g.name());
    auto maps = primitive_idempotents(g);
    GroupRingElement sum = GroupRingElement::zero(g);
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const auto& e = maps[i].idempotent;
      sum = sum + e;
      CHECK(e * e == e);
      for (std::size_t j = i + 1; j < maps.size(); ++j) CHECK((e * maps[j].idempotent).is_zero());
      for (std::size_t j = 0; j < maps.size(); ++j) {
        CycElt p = component_project(maps[j], e);
        CHECK(p == (i == j ? CycElt::one(maps[j].conductor) : CycElt::zero(maps[j].conductor)));
      }
    }
    CHECK(sum.is_one());
  }
}

TEST_CASE("component projections") {
  AbelianGroup c2({2});
  auto m = primitive_idempotents(c2);
  CHECK(component_project(m[0], cyc(2, {3, 4})) == CycElt::from_int(1, 7));
  AbelianGroup c4({4});
  m = primitive_idempotents(c4);
  bool found = false;
  for (const auto& c : m)
    if (c.order == 4) {
      CycElt z = component_project(c, cyc(4, {0, 1}));
      CHECK(z.pow(4).is_one());
      CHECK(!z.pow(2).is_one());
      found = true;
    }
  CHECK(found);
  // C2 with components (1, -1) lifts to the generator.
  m = primitive_idempotents(c2);
  CHECK(component_lift(c2, m, {CycElt::from_int(1, 1), CycElt::from_int(1, -1)}) == cyc(2, {0, 1}));
  CHECK_THROWS_AS(component_lift(c2, m, {CycElt::one(1), CycElt::one(3)}), Error);
}

TEST_CASE("projections are ring homomorphisms and lifting inverts them") {
  std::mt19937_64 rng(17);
  for (const auto& g : test_groups()) {
    CAPTURE(g.name());
    auto maps = primitive_idempotents(g);
    for (int t = 0; t < 3; ++t) {
      GroupRingElement a = random_element(rng, g, true), b = random_element(rng, g, false);
      std::vector<CycElt> comps;
      for (const auto& m : maps) {
        CHECK(component_project(m, a * b) == component_project(m, a) * component_project(m, b));
        CHECK(component_project(m, a + b) == component_project(m, a) + component_project(m, b));
        comps.push_back(component_project(m, a));
      }
      CHECK(component_lift(g, maps, comps) == a);
    }
    std::vector<CycElt> ones;
    for (const auto& m : maps) ones.push_back(CycElt::one(m.conductor));
    CHECK(component_lift(g, maps, ones).is_one());
  }
}

TEST_CASE("inverses in the integral group ring") {
  AbelianGroup g({5});
  CHECK(inverse_in_zg(GroupRingElement::basis(g, 1)) == GroupRingElement::basis(g, 4));
  CHECK(inverse_in_zg(cyc(5, {1, -1, 1})) == cyc(5, {0, 1, 1, 0, -1}));
  try {
    inverse_in_zg(cyc(2, {1, 1}));
    FAIL("expected NotAUnit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAUnit);
  }
  // 1 + x is a unit in every component of ZC3 except at the trivial character.
  CHECK_THROWS_AS(inverse_in_zg(cyc(3, {1, 1})), Error);
  // Units of QG that are not units of ZG.
  CHECK_THROWS_AS(inverse_in_zg(cyc(3, {2})), Error);
  // Trivial units of a larger group.
  AbelianGroup h = AbelianGroup::parse("C2xC6");
  for (long x = 0; x < h.order(); ++x) {
    auto u = -GroupRingElement::basis(h, static_cast<std::size_t>(x));
    CHECK(inverse_in_zg(u) == -GroupRingElement::basis(h, h.inverse(static_cast<std::size_t>(x))));
  }
}
