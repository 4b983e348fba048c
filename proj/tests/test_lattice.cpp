#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "zgunits/error.hpp"

using namespace zgunits;
using namespace zgunits::testing;

TEST_CASE("hnf examples") {
  CHECK(hnf(IntMatrix::identity(2)) == IntMatrix::identity(2));
  CHECK(hnf(mat({{0, 1}, {1, 0}})) == IntMatrix::identity(2));
  CHECK(hnf(mat({{2}, {3}})) == mat({{1}, {0}}));
  CHECK(hnf(mat({{4, 6}, {2, 7}})) == mat({{2, 7}, {0, 8}}));
}

TEST_CASE("snf examples") {
  auto s = snf(IntMatrix::identity(3));
  CHECK(s.d == IntMatrix::identity(3));
  CHECK(s.u == IntMatrix::identity(3));
  CHECK(s.v == IntMatrix::identity(3));
  CHECK(snf(mat({{2, 4}, {6, 8}})).diagonal() == vec({2, 4}));
  CHECK(snf(mat({{2, 0}, {0, 3}})).diagonal() == vec({1, 6}));
}

TEST_CASE("integer kernel examples") {
  CHECK(integer_kernel(IntMatrix::identity(2)).is_zero());
  CHECK(integer_kernel(mat({{2}, {-1}})).basis() == mat({{1, 2}}));
  CHECK(integer_kernel(mat({{1, 1}, {1, 1}})).basis() == mat({{1, -1}}));
}

TEST_CASE("pure closure examples") {
  auto l = Lattice::from_generators(mat({{1, 0}}));
  CHECK(pure_closure(l) == l);
  CHECK(pure_closure(Lattice::from_generators(mat({{2, 4}}))).basis() == mat({{1, 2}}));
  CHECK(pure_closure(Lattice::from_generators(mat({{2, 0}, {0, 3}}))) == Lattice::full(2));
}

TEST_CASE("intersection examples") {
  CHECK(intersect(Lattice::full(2), Lattice::full(2)) == Lattice::full(2));
  auto a = Lattice::from_generators(mat({{2, 0}, {0, 1}}));
  auto b = Lattice::from_generators(mat({{1, 0}, {0, 3}}));
  CHECK(intersect(a, b).basis() == mat({{2, 0}, {0, 3}}));
  CHECK(intersect(Lattice::from_generators(mat({{1, 1}})), Lattice::from_generators(mat({{1, -1}}))).is_zero());
}

TEST_CASE("sublattice index examples") {
  auto z2 = Lattice::full(2);
  CHECK(*sublattice_index(z2, z2) == 1);
  CHECK(*sublattice_index(Lattice::from_generators(mat({{2, 0}, {0, 3}})), z2) == 6);
  CHECK(*sublattice_index(Lattice::from_generators(mat({{2, 0}})), Lattice::from_generators(mat({{1, 0}}))) == 2);
  CHECK_FALSE(sublattice_index(Lattice::from_generators(mat({{2, 0}})), z2).has_value());
  CHECK_THROWS_AS(sublattice_index(z2, Lattice::from_generators(mat({{2, 0}}))), Error);
}

TEST_CASE("zero lattice keeps its ambient rank") {
  Lattice z(3);
  CHECK(z.rank() == 0);
  CHECK(z.ambient_rank() == 3);
  CHECK(z.contains(vec({0, 0, 0})));
  CHECK_FALSE(z.contains(vec({0, 1, 0})));
}

TEST_CASE("lll reduces a skewed basis") {
  IntMatrix t;
  auto b = mat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  auto skew = mat({{1, 0, 0}, {57, 1, 0}, {-23, 91, 1}}) * b;
  auto red = lll_reduce(skew, 99, 100, &t);
  CHECK(t * skew == red);
  CHECK(std::abs(determinant(t).get_si()) == 1);
  CHECK(Lattice::from_generators(red) == Lattice::full(3));
  for (std::size_t i = 0; i < 3; ++i) {
    Int n = 0;
    for (std::size_t j = 0; j < 3; ++j) n += red(i, j) * red(i, j);
    CHECK(n == 1);
  }
}

// Oracle suite: 100 random matrices up to 4x4 with entries in [-5, 5].
TEST_CASE("lattice operations agree with brute-force search") {
  std::mt19937_64 rng(20240517);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = dim(rng), cols = dim(rng);
    IntMatrix m = random_matrix(rng, rows, cols, -5, 5);
    CAPTURE(m.to_string());

    auto h = hnf(m);
    CHECK(hnf(h) == h);
    auto s = snf(m);
    CHECK(s.u * m * s.v == s.d);
    CHECK(abs(determinant(s.u)) == 1);
    CHECK(abs(determinant(s.v)) == 1);
    auto diag = s.diagonal();
    for (std::size_t i = 0; i + 1 < diag.size(); ++i)
      if (diag[i] != 0) CHECK(mpz_divisible_p(diag[i + 1].get_mpz_t(), diag[i].get_mpz_t()));
    CHECK(snf(s.d).d == s.d);

    Lattice k = integer_kernel(m);
    CHECK(k.rank() == rows - rational_rank(m));
    for (std::size_t i = 0; i < k.rank(); ++i) CHECK(is_zero(row_times(k.basis().row(i), m)));
    for_each_in_box(rows, 10, [&](const std::vector<long>& v) {
      auto w = vec(v);
      if (is_zero(row_times(w, m))) CHECK(k.contains(w));
    });

    Lattice l = Lattice::from_generators(m);
    Lattice pc = pure_closure(l);
    CHECK(pc.contains(l));
    CHECK(pure_closure(pc) == pc);
    CHECK(pc.rank() == l.rank());
    CHECK(sublattice_index(l, pc).has_value());
    for_each_in_box(cols, 3, [&](const std::vector<long>& v) {
      IntMatrix aug = l.basis();
      aug.append_row(vec(v));
      bool in_span = rational_rank(aug) == l.rank();
      CHECK(pc.contains(vec(v)) == in_span);
    });

    IntMatrix m2 = random_matrix(rng, rows, cols, -5, 5);
    Lattice l2 = Lattice::from_generators(m2);
    Lattice both = intersect(l, l2);
    CHECK(both == intersect(l2, l));
    CHECK(intersect(l, Lattice::full(cols)) == l);
    for_each_in_box(cols, 4, [&](const std::vector<long>& v) {
      auto w = vec(v);
      CHECK(both.contains(w) == (l.contains(w) && l2.contains(w)));
    });
    IntMatrix m3 = random_matrix(rng, rows, cols, -5, 5);
    Lattice l3 = Lattice::from_generators(m3);
    CHECK(intersect(intersect(l, l2), l3) == intersect(l, intersect(l2, l3)));
  }
}
