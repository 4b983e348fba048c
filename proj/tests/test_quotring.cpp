#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "zgunits/error.hpp"
#include "zgunits/quotring.hpp"

using namespace zgunits;
using namespace zgunits::testing;

namespace {

Lattice scaled_full(std::size_t d, long m) {
  std::vector<Int> diag(d, m);
  return Lattice::from_generators(IntMatrix::diagonal(diag));
}

FiniteRing integers_mod(long m) { return FiniteRing::quotient(OrderLattice::cyclotomic_integers(1), scaled_full(1, m)); }

// Ideal of Z[zeta_n] generated by m and the given elements.
Lattice ideal(long n, long m, const std::vector<CycElt>& gens) {
  const std::size_t phi = cyc_field(n).phi;
  IntMatrix rows = IntMatrix::diagonal(std::vector<Int>(phi, m));
  for (const auto& a : gens)
    for (std::size_t k = 0; k < phi; ++k) rows.append_row((a * CycElt::zeta(n, static_cast<long>(k))).numerators());
  return Lattice::from_generators(rows);
}

std::uint64_t count_units(const FiniteRing& r) {
  std::uint64_t c = 0;
  for (std::uint64_t i = 0; i < r.size(); ++i) c += r.is_unit(r.element(i));
  return c;
}

void check_unit_group(const FiniteUnitGroup& u) {
  const FiniteRing& r = u.ring();
  for (std::size_t j = 0; j < u.generators().size(); ++j) {
    CHECK(r.is_unit(u.generators()[j]));
    std::vector<Int> e(u.generators().size(), 0);
    e[j] = 1;
    CHECK(u.discrete_log(u.generators()[j]) == e);
    CHECK(r.pow(u.generators()[j], u.orders()[j]) == r.one());
    if (j + 1 < u.orders().size()) CHECK(mpz_divisible_p(u.orders()[j + 1].get_mpz_t(), u.orders()[j].get_mpz_t()));
  }
  CHECK(is_zero(u.discrete_log(r.one())));
}

// Both strategies describe the same group.
void compare_strategies(const FiniteRing& r) {
  UnitGroupOptions a_opts, b_opts;
  a_opts.strategy = UnitStrategy::Enumerate;
  b_opts.strategy = UnitStrategy::Local;
  FiniteUnitGroup a = unit_group(r, a_opts), b = unit_group(r, b_opts);
  CHECK(a.orders() == b.orders());
  CHECK(a.order() == Int(static_cast<unsigned long>(count_units(r))));
  check_unit_group(a);
  check_unit_group(b);
  for (const auto& g : a.generators()) CHECK(b.evaluate(b.discrete_log(g)) == g);
  for (const auto& g : b.generators()) CHECK(a.evaluate(a.discrete_log(g)) == g);
}

}  // namespace

TEST_CASE("ideal intersections in ZC2 and ZC3") {
  for (long n : {2L, 3L}) {
    AbelianGroup g({n});
    OrderLattice o = OrderLattice::group_ring_image(g, primitive_idempotents(g));
    CHECK(o.is_order());
    OrderSplit s = ideal_intersections(o, 1);
    CHECK(sublattice_index(s.j, o.lattice) == Int(n));
    CHECK(s.j.rank() == o.dim());
    CHECK(s.first_ideal == Lattice::from_generators(mat({{n}})));
    FiniteRing r = FiniteRing::quotient(o, s.j);
    CHECK(r.size() == static_cast<std::uint64_t>(n));
  }
  AbelianGroup g({2});
  OrderLattice o = OrderLattice::group_ring_image(g, primitive_idempotents(g));
  OrderSplit s = ideal_intersections(o, 1);
  CHECK(s.second_ideal == Lattice::from_generators(mat({{2}})));
  CHECK(FiniteRing::quotient(o, o.lattice).size() == 1);
}

TEST_CASE("finite ring unit group examples") {
  // Z[i] / (2)
  FiniteRing r = FiniteRing::quotient(OrderLattice::cyclotomic_integers(4), scaled_full(2, 2));
  CHECK(r.size() == 4);
  FiniteUnitGroup u = unit_group(r);
  CHECK(u.orders() == vec({2}));
  CHECK(r.from_ambient(vec({0, 1})) == u.generators()[0]);
  // Z[zeta_3] / (2) is the field with four elements.
  r = FiniteRing::quotient(OrderLattice::cyclotomic_integers(3), scaled_full(2, 2));
  u = unit_group(r);
  CHECK(u.orders() == vec({3}));
  // Trivial ring.
  r = FiniteRing::quotient(OrderLattice::cyclotomic_integers(5), Lattice::full(4));
  CHECK(r.size() == 1);
  CHECK(unit_group(r).orders().empty());
  // Z/8 needs the filtration by powers of the radical.
  u = unit_group(integers_mod(8));
  CHECK(u.orders() == vec({2, 2}));
}

TEST_CASE("discrete logarithm in (Z/15)^*") {
  FiniteRing r = integers_mod(15);
  FiniteUnitGroup u = unit_group(r);
  REQUIRE(u.orders() == vec({2, 4}));
  for (long a = 0; a < 2; ++a)
    for (long b = 0; b < 4; ++b) {
      FElem x = u.evaluate(vec({a, b}));
      CHECK(u.discrete_log(x) == vec({a, b}));
    }
  CHECK_THROWS_AS(u.discrete_log(r.from_ambient(vec({3}))), Error);
}

TEST_CASE("strategies agree on random quotient rings") {
  std::mt19937_64 rng(99);
  const std::vector<long> conductors{1, 3, 4, 5, 7, 8, 9, 12, 15, 16};
  std::uniform_int_distribution<std::size_t> pick(0, conductors.size() - 1);
  std::uniform_int_distribution<long> coeff(-3, 3), modulus(2, 12);
  int done = 0;
  while (done < 50) {
    const long n = conductors[pick(rng)];
    const std::size_t phi = cyc_field(n).phi;
    std::vector<CycElt> gens;
    for (int t = 0; t < 2; ++t) {
      std::vector<Int> c(phi);
      for (auto& x : c) x = coeff(rng);
      gens.push_back(CycElt::from_int_coeffs(n, c));
    }
    const long m = modulus(rng);
    FiniteRing r = FiniteRing::quotient(OrderLattice::cyclotomic_integers(n), ideal(n, m, gens));
    if (r.size() > 10000 || r.size() < 2) continue;
    CAPTURE(n);
    CAPTURE(m);
    compare_strategies(r);
    ++done;
  }
}

TEST_CASE("strategies agree on quotients of group ring orders") {
  for (const char* spec : {"C4", "C6", "C8", "C2xC2", "C2xC4", "C9", "C12", "C2xC6", "C3xC3", "C10"}) {
    AbelianGroup g = AbelianGroup::parse(spec);
    auto maps = primitive_idempotents(g);
    OrderLattice o = OrderLattice::group_ring_image(g, maps);
    for (std::size_t k = 1; k < maps.size(); ++k) {
      CAPTURE(spec);
      CAPTURE(k);
      PhiMaps phi = phi_maps(o, k);
      if (phi.ring.size() > 10000) continue;
      compare_strategies(phi.ring);
    }
  }
}

TEST_CASE("phi maps are ring homomorphisms with the expected kernels") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> coeff(-5, 5);
  for (const char* spec : {"C2", "C4", "C6", "C2xC2", "C8", "C12", "C3xC3"}) {
    AbelianGroup g = AbelianGroup::parse(spec);
    auto maps = primitive_idempotents(g);
    OrderLattice o = OrderLattice::group_ring_image(g, maps);
    const std::size_t d = o.dim();
    for (std::size_t k = 1; k < maps.size(); ++k) {
      CAPTURE(spec);
      CAPTURE(k);
      PhiMaps phi = phi_maps(o, k);
      const std::size_t d1 = phi.split.dim1;
      const FiniteRing& r = phi.ring;
      auto random_element = [&] {
        std::vector<Int> c(o.lattice.rank());
        for (auto& x : c) x = coeff(rng);
        return row_times(c, o.lattice.basis());
      };
      auto first = [&](const std::vector<Int>& v) { return std::vector<Int>(v.begin(), v.begin() + static_cast<long>(d1)); };
      auto second = [&](const std::vector<Int>& v) { return std::vector<Int>(v.begin() + static_cast<long>(d1), v.end()); };
      CHECK(phi.phi1(first(o.identity())) == r.one());
      for (int t = 0; t < 20; ++t) {
        auto a = random_element(), b = random_element();
        auto ab = o.multiply(a, b);
        CHECK(phi.phi1(first(a)) == phi.phi2(second(a)));
        CHECK(r.mul(phi.phi1(first(a)), phi.phi1(first(b))) == phi.phi1(first(ab)));
        CHECK(r.mul(phi.phi2(second(a)), phi.phi2(second(b))) == phi.phi2(second(ab)));
      }
      for (std::size_t i = 0; i < phi.split.first_ideal.rank(); ++i)
        CHECK(r.is_zero(phi.phi1(phi.split.first_ideal.basis().row_vector(i))));
      for (std::size_t i = 0; i < phi.split.second_ideal.rank(); ++i)
        CHECK(r.is_zero(phi.phi2(phi.split.second_ideal.basis().row_vector(i))));
      CHECK(sublattice_index(phi.split.j, o.lattice) == Int(static_cast<unsigned long>(r.size())));
      (void)d;
    }
  }
}
