#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "zgunits/relations.hpp"

using namespace zgunits;
using namespace zgunits::testing;

namespace {

CycElt poly(long n, std::vector<long> c) {
  std::vector<Int> v(c.begin(), c.end());
  return CycElt::from_power_sum(n, v);
}

// A unit of infinite order in each test field.
CycElt free_unit(long n) {
  if (n == 5) return poly(5, {0, 0, 1, 1});
  if (n == 8) return CycElt::zeta(8, -1) * poly(8, {1, 1, 1});
  if (n == 12) return poly(12, {1, 1});
  FAIL("no unit for conductor");
  return {};
}

}  // namespace

TEST_CASE("standard generators") {
  auto p = standard_gens(Lattice::from_generators(mat({{2, 0}, {0, 5}})));
  REQUIRE(p.size() == 1);
  CHECK(p.orders[0] == 10);
  CHECK(p.torsion_order() == 10);

  p = standard_gens(Lattice::from_generators(mat({{2, -1}})));
  REQUIRE(p.size() == 1);
  CHECK(p.orders[0] == 0);
  CHECK(p.rank() == 1);

  p = standard_gens(Lattice(0));
  CHECK(p.size() == 0);

  // Z/2 x Z/4 x Z given with a redundant generator.
  Lattice rel = Lattice::from_generators(mat({{2, 0, 0, 0}, {0, 4, 0, 0}, {1, 1, 0, -1}}));
  p = standard_gens(rel);
  CHECK(p.orders == vec({2, 4, 0}));
  // Relations map to zero coordinates.
  for (std::size_t i = 0; i < rel.rank(); ++i) CHECK(is_zero(p.coordinates_of(rel.basis().row(i))));
  // Standard generators expressed back have the stated coordinates.
  for (std::size_t j = 0; j < p.size(); ++j) {
    auto c = p.coordinates_of(p.transform.row(j));
    for (std::size_t t = 0; t < p.size(); ++t) CHECK(c[t] == (t == j ? 1 : 0));
  }
}

TEST_CASE("homomorphism kernels and preimages") {
  CHECK(hom_kernel(mat({{0}, {0}}), vec({3})) == Lattice::full(2));
  CHECK(hom_preimage(mat({{1}}), vec({2}), IntMatrix(0, 1)) == Lattice::from_generators(mat({{2}})));
  CHECK(hom_kernel(mat({{1}, {2}}), vec({4})) == Lattice::from_generators(mat({{2, 1}, {4, 0}})));
  CHECK(hom_preimage(mat({{2}}), vec({4}), mat({{2}})) == Lattice::full(1));
  CHECK_THROWS_AS(hom_preimage(mat({{2}}), vec({4}), mat({{1}})), Error);
  auto x = solve_in_span(mat({{2, 0}, {1, 3}}), vec({4, 6}));
  REQUIRE(x.has_value());
  CHECK(row_times(*x, mat({{2, 0}, {1, 3}})) == vec({4, 6}));
  CHECK(!solve_in_span(mat({{2, 0}}), vec({1, 0})).has_value());
}

TEST_CASE("relation lattice examples") {
  const CycElt xi = free_unit(5);
  CHECK(relation_lattice_cyc({CycElt::from_int(5, -1), CycElt::zeta(5)}) ==
        Lattice::from_generators(mat({{2, 0}, {0, 5}})));
  CHECK(relation_lattice_cyc({xi, unit_inverse(xi)}) == Lattice::from_generators(mat({{1, 1}})));
  CHECK(relation_lattice_cyc({-(xi * xi), xi.pow(3)}) == Lattice::from_generators(mat({{6, -4}})));
  CHECK(relation_lattice_cyc({xi}).is_zero());
  CHECK_THROWS_AS(relation_lattice_cyc({CycElt::from_int(5, 2)}), Error);
}

TEST_CASE("subgroup index examples") {
  const CycElt u = free_unit(5);
  // <u^3> in <u>
  auto rel = relation_lattice_cyc({u.pow(3), u});
  CHECK(subgroup_index(rel, 1) == Int(3));
  // <xi^2, mu_10> in <xi, mu_10>
  const CycElt w = -CycElt::zeta(5);
  rel = relation_lattice_cyc({u * u, w, u, w});
  CHECK(subgroup_index(rel, 2) == Int(2));
  rel = relation_lattice_cyc({u, u});
  CHECK(subgroup_index(rel, 1) == Int(1));
  // <u> in <u^2> fails containment
  rel = relation_lattice_cyc({u, u * u});
  CHECK_THROWS_AS(subgroup_index(rel, 1), Error);
  // infinite index
  rel = relation_lattice_cyc({w, w, u});
  CHECK(!subgroup_index(rel, 1).has_value());
}

TEST_CASE("relation lattice against exhaustive search in a box") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> small(-3, 3);
  const long box = 6;
  for (long n : {5L, 8L, 12L}) {
    const CycElt w = torsion_generator(n);
    const CycElt f = free_unit(n);
    const long m = torsion_order(n);
    for (int trial = 0; trial < 8; ++trial) {
      std::size_t k = 1 + static_cast<std::size_t>(trial % 3);
      std::vector<CycElt> units;
      for (std::size_t i = 0; i < k; ++i) units.push_back(w.pow(((small(rng) % m) + m) % m) * f.pow(small(rng)));
      CAPTURE(n);
      CAPTURE(k);
      Lattice rel = relation_lattice_cyc(units);
      // Every basis vector verifies exactly.
      std::vector<CycElt> inv;
      for (const auto& u : units) inv.push_back(unit_inverse(u));
      for (std::size_t i = 0; i < rel.rank(); ++i)
        CHECK(power_product(units, inv, rel.basis().row(i), CycElt::one(n),
                            [](const CycElt& a, const CycElt& b) { return a * b; })
                  .is_one());
      // Table of powers for the exhaustive pass.
      std::vector<std::vector<CycElt>> pw(k);
      for (std::size_t i = 0; i < k; ++i)
        for (long e = -box; e <= box; ++e) pw[i].push_back(units[i].pow(e));
      std::vector<long> idx(k, -box);
      long agree = 0, total = 0;
      while (true) {
        CycElt p = CycElt::one(n);
        std::vector<Int> alpha;
        for (std::size_t i = 0; i < k; ++i) {
          p = p * pw[i][static_cast<std::size_t>(idx[i] + box)];
          alpha.emplace_back(idx[i]);
        }
        ++total;
        if (p.is_one() == rel.contains(alpha)) ++agree;
        std::size_t t = 0;
        while (t < k && idx[t] == box) idx[t++] = -box;
        if (t == k) break;
        ++idx[t];
      }
      CHECK(agree == total);
    }
  }
}

TEST_CASE("toral relation lattices") {
  const AbelianGroup c4 = AbelianGroup::parse("C4");
  const auto maps4 = primitive_idempotents(c4);
  const auto one4 = GroupRingElement::one(c4);
  CHECK(relation_lattice_toral({-one4, GroupRingElement::basis(c4, 1)}, maps4) ==
        Lattice::from_generators(mat({{2, 0}, {0, 4}})));

  const AbelianGroup c5 = AbelianGroup::parse("C5");
  const auto maps5 = primitive_idempotents(c5);
  const auto x = GroupRingElement::basis(c5, 1);
  const auto one5 = GroupRingElement::one(c5);
  const auto u = one5 - x + x * x;
  CHECK(relation_lattice_toral({u}, maps5).is_zero());
  // Oracle: exact products over a box.
  const std::vector<GroupRingElement> units = {u, u * u * x, -one5};
  Lattice rel = relation_lattice_toral(units, maps5);
  std::vector<GroupRingElement> inv;
  for (const auto& w : units) inv.push_back(inverse_in_zg(w));
  for (long a = -5; a <= 5; ++a)
    for (long b = -5; b <= 5; ++b)
      for (long c = 0; c <= 1; ++c) {
        GroupRingElement p = power_product(units, inv, vec({a, b, c}), one5,
                                           [](const GroupRingElement& s, const GroupRingElement& t) { return s * t; });
        CHECK(p.is_one() == rel.contains(vec({a, b, c})));
      }
}
