#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "zgunits/abgroup.hpp"
#include "zgunits/error.hpp"

using namespace zgunits;

namespace {

std::vector<long> subgroup_orders(const AbelianGroup& g) {
  std::vector<long> out;
  for (const auto& c : cyclic_subgroups(g)) out.push_back(c.order);
  return out;
}

std::vector<std::size_t> orbit_sizes(const AbelianGroup& g) {
  std::vector<std::size_t> out;
  for (const auto& o : galois_orbits(g, irreducible_characters(g))) out.push_back(o.size());
  std::sort(out.begin(), out.end());
  return out;
}

// Cyclic subgroups counted as distinct element sets, by brute force.
std::set<std::set<std::size_t>> brute_cyclic_subgroups(const AbelianGroup& g) {
  std::set<std::set<std::size_t>> out;
  for (std::size_t x = 0; x < static_cast<std::size_t>(g.order()); ++x) {
    std::set<std::size_t> s;
    std::size_t y = 0;
    do {
      s.insert(y);
      y = g.mul(y, x);
    } while (y != 0);
    out.insert(s);
  }
  return out;
}

}  // namespace

TEST_CASE("parsing and normalization") {
  CHECK(AbelianGroup::parse("C2xC4").invariant_factors() == std::vector<long>{2, 4});
  CHECK(AbelianGroup::parse("c4 x c2").invariant_factors() == std::vector<long>{2, 4});
  CHECK(AbelianGroup::parse("[2,4]") == AbelianGroup::parse("C4xC2"));
  CHECK(AbelianGroup::parse("C2xC3").invariant_factors() == std::vector<long>{6});
  CHECK(AbelianGroup::parse("C1").order() == 1);
  CHECK(AbelianGroup::parse("[]").order() == 1);
  CHECK(AbelianGroup::parse("[6,4]").name() == "C2xC12");
  for (const char* bad : {"", "C", "C0", "D4", "C2xx", "[2,", "[2;3]", "C2 C3"}) {
    CAPTURE(bad);
    try {
      AbelianGroup::parse(bad);
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
    }
  }
  CHECK_THROWS_AS(AbelianGroup(std::vector<long>{4, 2}), Error);
}

TEST_CASE("element indexing") {
  AbelianGroup g({2, 6});
  CHECK(g.order() == 12);
  CHECK(g.exponent() == 6);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(g.index_of(g.element(i)) == i);
    CHECK(g.mul(i, g.inverse(i)) == g.identity());
    CHECK(g.power(i, g.element_order(i)) == g.identity());
  }
  CHECK(g.element(1).exponents == std::vector<long>{0, 1});
  CHECK(g.element(6).exponents == std::vector<long>{1, 0});
}

TEST_CASE("cyclic subgroup examples") {
  auto c1 = cyclic_subgroups(AbelianGroup());
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].order == 1);
  CHECK(c1[0].generator == 0);
  CHECK(subgroup_orders(AbelianGroup({6})) == std::vector<long>{1, 2, 3, 6});
  CHECK(subgroup_orders(AbelianGroup({2, 2})) == std::vector<long>{1, 2, 2, 2});
  // C5: generator of the whole group is the lexicographically smallest one.
  CHECK(cyclic_subgroups(AbelianGroup({5})).back().generator == 1);
}

TEST_CASE("character examples") {
  auto c2 = irreducible_characters(AbelianGroup({2}));
  CHECK(c2.size() == 2);
  AbelianGroup v4({2, 2});
  for (const auto& chi : irreducible_characters(v4)) CHECK(chi.order <= 2);
  CHECK(orbit_sizes(AbelianGroup({2})) == std::vector<std::size_t>{1, 1});
  CHECK(orbit_sizes(AbelianGroup({3})) == std::vector<std::size_t>{1, 2});
  CHECK(orbit_sizes(AbelianGroup({5})) == std::vector<std::size_t>{1, 4});
}

TEST_CASE("ayoub rank examples") {
  CHECK(ayoub_rank(AbelianGroup({4})) == 0);
  CHECK(ayoub_rank(AbelianGroup({5})) == 1);
  CHECK(ayoub_rank(AbelianGroup({8})) == 1);
  for (const char* s : {"C1", "C2", "C3", "C4", "C6", "C2xC2"}) CHECK(ayoub_rank(AbelianGroup::parse(s)) == 0);
}

TEST_CASE("group enumeration") {
  auto groups = abelian_groups_up_to(24);
  CHECK(groups.size() == 37);
  std::map<long, int> counts;
  for (const auto& g : groups) ++counts[g.order()];
  CHECK(counts[16] == 5);
  CHECK(counts[8] == 3);
  CHECK(counts[24] == 3);
}

TEST_CASE("properties over all groups of order <= 40") {
  for (const auto& g : abelian_groups_up_to(40)) {
    CAPTURE(g.name());
    const auto subs = cyclic_subgroups(g);
    CHECK(subs.size() == brute_cyclic_subgroups(g).size());

    // Sum over cyclic subgroups of phi(order) counts each element once.
    long total = 0;
    for (const auto& c : subs) total += euler_phi(c.order);
    CHECK(total == g.order());

    // Canonical generator: smallest index among all generators of the subgroup.
    for (const auto& c : subs)
      for (long a = 1; a < c.order; ++a)
        if (gcd_long(a, c.order) == 1) CHECK(g.power(c.generator, a) >= c.generator);

    const auto chars = irreducible_characters(g);
    std::set<std::vector<long>> distinct;
    for (const auto& chi : chars) distinct.insert(chi.image_exponents);
    CHECK(distinct.size() == static_cast<std::size_t>(g.order()));

    // Homomorphism, order, and separation of points.
    const long m = g.exponent();
    for (const auto& chi : chars) {
      for (std::size_t x = 0; x < static_cast<std::size_t>(g.order()); x += 3)
        for (std::size_t y = 0; y < static_cast<std::size_t>(g.order()); y += 5)
          CHECK((character_exponent(g, chi, x) + character_exponent(g, chi, y)) % m ==
                character_exponent(g, chi, g.mul(x, y)));
      long image_order = 1;
      for (std::size_t x = 0; x < static_cast<std::size_t>(g.order()); ++x) {
        long s = character_exponent(g, chi, x);
        image_order = std::max(image_order, m / gcd_long(m, s));
      }
      CHECK(image_order == chi.order);
      CHECK(m % chi.order == 0);
    }
    for (std::size_t x = 1; x < static_cast<std::size_t>(g.order()); ++x) {
      bool separated = false;
      for (const auto& chi : chars) separated = separated || character_exponent(g, chi, x) != 0;
      CHECK(separated);
    }

    // Galois orbits of characters with order d correspond to cyclic subgroups of order d.
    std::map<long, long> orbit_count, subgroup_count;
    for (const auto& orbit : galois_orbits(g, chars)) {
      ++orbit_count[chars[orbit.front()].order];
      CHECK(static_cast<long>(orbit.size()) == euler_phi(chars[orbit.front()].order));
    }
    for (const auto& c : subs) ++subgroup_count[c.order];
    CHECK(orbit_count == subgroup_count);

    CHECK(ayoub_rank(g) >= 0);
  }
}
