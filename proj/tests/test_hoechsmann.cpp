#include <string>

#include "doctest.h"
#include "test_support.hpp"
#include "zgunits/hoechsmann.hpp"

using namespace zgunits;
using namespace zgunits::testing;

namespace {

Lattice constructable_lattice(const ZGUnitGroup& z, long l_shift) {
  const auto& m = z.merged;
  IntMatrix rows(0, m.dim());
  for (const auto& u : constructable_group(m.group, l_shift)) {
    std::vector<CycElt> comps;
    for (auto c : m.merged) comps.push_back(component_project(m.maps[c], u));
    rows.append_row(m.exponents_of(comps));
  }
  rows.append_rows(m.torsion_relations().basis());
  return Lattice::from_generators(rows);
}

Rat augmentation(const GroupRingElement& u) {
  Rat s = 0;
  for (const auto& c : u.coeffs()) s += c;
  return s;
}

}  // namespace

TEST_CASE("constructable unit examples") {
  const AbelianGroup g = AbelianGroup::parse("C5");
  const std::size_t x = 1;
  auto u = constructable_unit(g, x, 2, 3, 3);
  CHECK(u.k == 1);
  CHECK(u.element == GroupRingElement::from_int_coeffs(g, vec({1, -1, 1, 0, 0})));
  auto t = constructable_unit(g, x, 1, 4, 1);
  CHECK(t.k == 0);
  CHECK(t.element.is_one());
  CHECK_THROWS_AS(constructable_unit(g, x, 2, 3, 2), Error);
  auto all = hoechsmann_units_cyclic(g, x);
  CHECK(all.size() == 16);
  for (const auto& w : all) CHECK(w.l * w.i == 1 + w.k * w.n);
}

TEST_CASE("constructable units are units with augmentation +-1") {
  for (std::string spec : {"C5", "C7", "C8", "C9", "C12", "C2xC6", "C15"}) {
    CAPTURE(spec);
    const AbelianGroup g = AbelianGroup::parse(spec);
    for (const auto& c : cyclic_subgroups(g)) {
      if (c.order <= 2) continue;
      for (const auto& u : hoechsmann_units_cyclic(g, c.generator)) {
        CHECK((u.element * inverse_in_zg(u.element)).is_one());
        CHECK(abs(augmentation(u.element)) == 1);
      }
    }
  }
}

TEST_CASE("constructable groups of small groups") {
  CHECK(constructable_group(AbelianGroup::parse("C2xC2")).size() == 3);
  for (std::string spec : {"C4", "C5", "C2xC2", "C6"}) {
    CAPTURE(spec);
    const AbelianGroup g = AbelianGroup::parse(spec);
    auto r = hoechsmann_index(g);
    CHECK(r.constructable_rank == static_cast<std::size_t>(ayoub_rank(g)));
    REQUIRE(r.index.has_value());
    CHECK(*r.index == 1);
  }
}

TEST_CASE("index agrees with the relation lattice method") {
  for (std::string spec : {"C5", "C7", "C8", "C10", "C12"}) {
    CAPTURE(spec);
    auto z = unit_group_zg(AbelianGroup::parse(spec));
    auto fast = hoechsmann_index(z);
    auto slow = hoechsmann_index_by_relations(z);
    REQUIRE(fast.index.has_value());
    REQUIRE(slow.has_value());
    CHECK(*fast.index == *slow);
  }
}

TEST_CASE("index does not depend on the choice of l") {
  for (std::string spec : {"C5", "C7", "C9"}) {
    CAPTURE(spec);
    auto z = unit_group_zg(AbelianGroup::parse(spec));
    Lattice a = constructable_lattice(z, 0), b = constructable_lattice(z, 1), c = constructable_lattice(z, 3);
    CHECK(a.contains(b));
    CHECK(b.contains(a));
    CHECK(a == c);
    HoechsmannOptions o;
    o.l_shift = 2;
    CHECK(hoechsmann_index(z, o).index == hoechsmann_index(z).index);
  }
}

TEST_CASE("index is one for groups of order at most 12") {
  for (const auto& g : abelian_groups_up_to(12)) {
    CAPTURE(g.name());
    auto r = hoechsmann_index(g);
    REQUIRE(r.index.has_value());
    CHECK(*r.index == 1);
  }
}
