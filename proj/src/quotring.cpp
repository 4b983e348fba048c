#include "zgunits/quotring.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <unordered_map>

#include "zgunits/cyclotomic.hpp"
#include "zgunits/error.hpp"

namespace zgunits {

namespace {

using i128 = __int128;

std::int64_t mod64(i128 a, std::int64_t m) {
  i128 r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

std::int64_t to_i64(const Int& x) {
  if (!x.fits_slong_p()) fail(ErrorKind::EnumerationBoundExceeded, "finite ring too large for 64-bit arithmetic");
  return x.get_si();
}

std::vector<std::size_t> block_offsets(const std::vector<long>& conductors) {
  std::vector<std::size_t> off{0};
  for (long n : conductors) off.push_back(off.back() + cyc_field(n).phi);
  return off;
}

std::size_t pivot_of(std::span<const Int> row) {
  for (std::size_t j = 0; j < row.size(); ++j)
    if (row[j] != 0) return j;
  return row.size();
}

}  // namespace

std::vector<Int> OrderLattice::multiply(std::span<const Int> a, std::span<const Int> b) const {
  const auto off = block_offsets(conductors);
  std::vector<Int> out;
  out.reserve(off.back());
  for (std::size_t i = 0; i < conductors.size(); ++i) {
    std::vector<Int> x(a.begin() + static_cast<long>(off[i]), a.begin() + static_cast<long>(off[i + 1]));
    std::vector<Int> y(b.begin() + static_cast<long>(off[i]), b.begin() + static_cast<long>(off[i + 1]));
    CycElt p = CycElt::from_int_coeffs(conductors[i], std::move(x)) * CycElt::from_int_coeffs(conductors[i], std::move(y));
    for (const auto& c : p.numerators()) out.push_back(c);
  }
  return out;
}

std::vector<Int> OrderLattice::identity() const {
  const auto off = block_offsets(conductors);
  std::vector<Int> e(off.back(), 0);
  for (std::size_t i = 0; i < conductors.size(); ++i) e[off[i]] = 1;
  return e;
}

bool OrderLattice::is_order() const {
  if (!lattice.contains(identity())) return false;
  const IntMatrix& b = lattice.basis();
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = i; j < b.rows(); ++j)
      if (!lattice.contains(multiply(b.row(i), b.row(j)))) return false;
  return true;
}

OrderLattice OrderLattice::cyclotomic_integers(long n) {
  n = normalize_conductor(n);
  return {{n}, Lattice::full(cyc_field(n).phi)};
}

OrderLattice OrderLattice::group_ring_image(const AbelianGroup& g, const std::vector<ComponentMap>& maps) {
  OrderLattice o;
  for (const auto& m : maps) o.conductors.push_back(m.conductor);
  const auto off = block_offsets(o.conductors);
  IntMatrix rows(0, off.back());
  for (long x = 0; x < g.order(); ++x) {
    const auto e = GroupRingElement::basis(g, static_cast<std::size_t>(x));
    std::vector<Int> row;
    for (const auto& m : maps) {
      const CycElt c = component_project(m, e);
      row.insert(row.end(), c.numerators().begin(), c.numerators().end());
    }
    rows.append_row(row);
  }
  o.lattice = Lattice::from_generators(rows);
  return o;
}

OrderSplit ideal_intersections(const OrderLattice& o, std::size_t k) {
  if (k == 0 || k >= o.conductors.size()) fail(ErrorKind::BadParameters, "split must leave both parts nonempty");
  const auto off = block_offsets(o.conductors);
  const std::size_t d1 = off[k], d = off.back();
  OrderSplit s;
  s.k = k;
  s.dim1 = d1;
  s.first.conductors.assign(o.conductors.begin(), o.conductors.begin() + static_cast<long>(k));
  s.second.conductors.assign(o.conductors.begin() + static_cast<long>(k), o.conductors.end());
  const IntMatrix& b = o.lattice.basis();
  IntMatrix top(0, d), bottom(0, d - d1);
  for (std::size_t i = 0; i < b.rows(); ++i) {
    if (pivot_of(b.row(i)) < d1)
      top.append_row(b.row(i));
    else
      bottom.append_row(b.cols_range(d1, d).row(i));
  }
  s.top = top;
  s.first.lattice = Lattice::from_generators(top.cols_range(0, d1));
  s.second.lattice = Lattice::from_generators(b.cols_range(d1, d));
  s.second_ideal = bottom.rows() ? Lattice::from_generators(bottom) : Lattice(d - d1);
  // Reorder the columns so the second block comes first.
  IntMatrix swapped = IntMatrix::hconcat(b.cols_range(d1, d), b.cols_range(0, d1));
  Lattice sw = Lattice::from_generators(swapped);
  IntMatrix first_rows(0, d1);
  for (std::size_t i = 0; i < sw.basis().rows(); ++i)
    if (pivot_of(sw.basis().row(i)) >= d - d1) first_rows.append_row(sw.basis().cols_range(d - d1, d).row(i));
  s.first_ideal = first_rows.rows() ? Lattice::from_generators(first_rows) : Lattice(d1);
  IntMatrix jrows(0, d);
  for (std::size_t i = 0; i < s.first_ideal.rank(); ++i) {
    std::vector<Int> r(d, 0);
    for (std::size_t j = 0; j < d1; ++j) r[j] = s.first_ideal.basis()(i, j);
    jrows.append_row(r);
  }
  for (std::size_t i = 0; i < s.second_ideal.rank(); ++i) {
    std::vector<Int> r(d, 0);
    for (std::size_t j = 0; j < d - d1; ++j) r[d1 + j] = s.second_ideal.basis()(i, j);
    jrows.append_row(r);
  }
  s.j = Lattice::from_generators(jrows);
  return s;
}

std::uint64_t FiniteRing::size() const {
  std::uint64_t s = 1;
  for (auto n : orders_) {
    if (s > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(n))
      fail(ErrorKind::EnumerationBoundExceeded, "finite ring has more than 2^62 elements");
    s *= static_cast<std::uint64_t>(n);
  }
  return s;
}

FElem FiniteRing::basis(std::size_t i) const {
  FElem e = zero();
  e.at(i) = 1 % orders_[i];
  return e;
}

FElem FiniteRing::add(const FElem& a, const FElem& b) const {
  FElem c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = mod64(static_cast<i128>(a[i]) + b[i], orders_[i]);
  return c;
}

FElem FiniteRing::sub(const FElem& a, const FElem& b) const {
  FElem c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = mod64(static_cast<i128>(a[i]) - b[i], orders_[i]);
  return c;
}

FElem FiniteRing::neg(const FElem& a) const { return sub(zero(), a); }

FElem FiniteRing::scale(const FElem& a, std::int64_t c) const {
  FElem r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = mod64(static_cast<i128>(a[i]) * mod64(c, orders_[i]), orders_[i]);
  return r;
}

FElem FiniteRing::mul(const FElem& a, const FElem& b) const {
  const std::size_t k = orders_.size();
  std::vector<i128> acc(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < k; ++j) {
      if (b[j] == 0) continue;
      const i128 ab = static_cast<i128>(a[i]) * b[j];
      const FElem& t = table_[i][j];
      for (std::size_t s = 0; s < k; ++s)
        if (t[s] != 0) acc[s] = (acc[s] + (ab % orders_[s]) * t[s]) % orders_[s];
    }
  }
  FElem c(k);
  for (std::size_t s = 0; s < k; ++s) c[s] = mod64(acc[s], orders_[s]);
  return c;
}

FElem FiniteRing::pow(const FElem& a, const Int& e) const {
  if (e < 0) fail(ErrorKind::BadParameters, "negative power in a finite ring");
  FElem result = one_, base = a;
  Int x = e;
  while (x > 0) {
    if (mpz_odd_p(x.get_mpz_t())) result = mul(result, base);
    x >>= 1;
    if (x > 0) base = mul(base, base);
  }
  return result;
}

bool FiniteRing::is_zero(const FElem& a) const {
  return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

bool FiniteRing::is_unit(const FElem& a) const {
  const std::size_t k = orders_.size();
  if (k == 0) return true;
  IntMatrix m(0, k);
  for (std::size_t i = 0; i < k; ++i) {
    FElem r = mul(a, basis(i));
    m.append_row(std::vector<Int>(r.begin(), r.end()));
  }
  std::vector<Int> ord(orders_.begin(), orders_.end());
  m.append_rows(IntMatrix::diagonal(ord));
  return Lattice::from_generators(m).contains(std::vector<Int>(one_.begin(), one_.end()));
}

std::uint64_t FiniteRing::index(const FElem& a) const {
  std::uint64_t idx = 0;
  for (std::size_t i = a.size(); i-- > 0;) idx = idx * static_cast<std::uint64_t>(orders_[i]) + static_cast<std::uint64_t>(a[i]);
  return idx;
}

FElem FiniteRing::element(std::uint64_t index) const {
  FElem a(orders_.size());
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    a[i] = static_cast<std::int64_t>(index % static_cast<std::uint64_t>(orders_[i]));
    index /= static_cast<std::uint64_t>(orders_[i]);
  }
  return a;
}

FElem FiniteRing::from_ambient(std::span<const Int> v) const {
  auto c = row_times(v, to_ring_);
  FElem out(orders_.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!mpz_divisible_p(c[i].get_mpz_t(), to_ring_den_.get_mpz_t()))
      fail(ErrorKind::NotInImage, "element does not lie in the order of the quotient");
    Int q = c[i] / to_ring_den_;
    out[i] = static_cast<std::int64_t>(mpz_fdiv_ui(q.get_mpz_t(), static_cast<unsigned long>(orders_[i])));
  }
  return out;
}

Int FiniteRing::ambient_modulus() const {
  Int n = 1;
  for (auto o : orders_) n = std::max(n, Int(static_cast<long>(o)));
  return n * to_ring_den_;
}

FiniteRing FiniteRing::from_table(std::vector<std::int64_t> orders, std::vector<std::vector<FElem>> table, FElem one) {
  FiniteRing r;
  r.orders_ = std::move(orders);
  r.table_ = std::move(table);
  r.one_ = std::move(one);
  r.to_ring_ = IntMatrix::identity(r.orders_.size());
  return r;
}

FiniteRing FiniteRing::quotient(const OrderLattice& o, const Lattice& j) {
  const std::size_t m = o.dim();
  if (o.lattice.rank() != m || j.rank() != m) fail(ErrorKind::BadParameters, "quotient needs full-rank lattices");
  const IntMatrix& b = o.lattice.basis();
  RatMatrix br(m, std::vector<Rat>(m));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) br[r][c] = Rat(b(r, c));
  const RatMatrix binv = rat_inverse(br);
  // Coordinates over the basis of O, as integers.
  auto coords = [&](std::span<const Int> v) {
    std::vector<Int> out(m);
    for (std::size_t c = 0; c < m; ++c) {
      Rat s = 0;
      for (std::size_t r = 0; r < m; ++r)
        if (v[r] != 0) s += Rat(v[r]) * binv[r][c];
      if (s.get_den() != 1) fail(ErrorKind::NotASublattice, "element is not in the order");
      out[c] = s.get_num();
    }
    return out;
  };
  IntMatrix jc(0, m);
  for (std::size_t r = 0; r < m; ++r) jc.append_row(coords(j.basis().row(r)));
  auto s = snf(jc);
  const auto diag = s.diagonal();
  std::vector<std::size_t> keep;
  FiniteRing ring;
  for (std::size_t t = 0; t < m; ++t) {
    if (diag[t] == 0) fail(ErrorKind::BadParameters, "ideal does not have full rank");
    if (diag[t] == 1) continue;
    keep.push_back(t);
    ring.orders_.push_back(to_i64(diag[t]));
  }
  const IntMatrix vinv = unimodular_inverse(s.v);
  // ring coordinates of O-coordinates y are y * v restricted to keep.
  auto to_ring = [&](std::span<const Int> y) {
    FElem out;
    for (std::size_t a = 0; a < keep.size(); ++a) {
      Int acc = 0;
      for (std::size_t r = 0; r < m; ++r) acc += y[r] * s.v(r, keep[a]);
      out.push_back(static_cast<std::int64_t>(mpz_fdiv_ui(acc.get_mpz_t(), static_cast<unsigned long>(ring.orders_[a]))));
    }
    return out;
  };
  std::vector<std::vector<Int>> gens;
  for (std::size_t a = 0; a < keep.size(); ++a) gens.push_back(row_times(vinv.row(keep[a]), b));
  ring.table_.assign(keep.size(), std::vector<FElem>(keep.size()));
  for (std::size_t x = 0; x < keep.size(); ++x)
    for (std::size_t y = x; y < keep.size(); ++y) {
      ring.table_[x][y] = to_ring(coords(o.multiply(gens[x], gens[y])));
      ring.table_[y][x] = ring.table_[x][y];
    }
  // Ambient to ring: binv * v, with a common denominator.
  Int den = 1;
  for (const auto& row : binv)
    for (const auto& q : row) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  ring.to_ring_den_ = den;
  ring.to_ring_ = IntMatrix(m, keep.size());
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t a = 0; a < keep.size(); ++a) {
      Rat acc = 0;
      for (std::size_t t = 0; t < m; ++t)
        if (binv[r][t] != 0) acc += binv[r][t] * Rat(s.v(t, keep[a]));
      acc *= Rat(den);
      ring.to_ring_(r, a) = acc.get_num();
    }
  ring.one_ = ring.from_ambient(o.identity());
  return ring;
}

// Unit groups.

struct FiniteUnitGroup::Impl {
  UnitStrategy strategy = UnitStrategy::Auto;
  std::vector<FElem> raw_gens;
  Lattice relations;
  std::function<std::vector<Int>(const FElem&)> raw_log;
};

namespace {

// Incremental enumeration of the subgroup generated by a list of units,
// recording exponents and a complete set of relations.
struct Closure {
  const FiniteRing* ring = nullptr;
  std::uint64_t bound = 0;
  std::vector<FElem> gens;
  std::unordered_map<std::uint64_t, std::vector<long>> table;
  std::vector<std::vector<Int>> relations;

  Closure(const FiniteRing& r, std::uint64_t b) : ring(&r), bound(b) { table[r.index(r.one())] = {}; }

  bool contains(const FElem& x) const { return table.count(ring->index(x)) != 0; }

  void add(const FElem& g) {
    const std::size_t t = gens.size();
    gens.push_back(g);
    FElem p = g;
    long e = 1;
    auto it = table.find(ring->index(p));
    while (it == table.end()) {
      p = ring->mul(p, g);
      ++e;
      if (table.size() * static_cast<std::uint64_t>(e) > bound)
        fail(ErrorKind::EnumerationBoundExceeded, "unit group enumeration exceeds the bound");
      it = table.find(ring->index(p));
    }
    std::vector<Int> rel(t + 1, 0);
    rel[t] = e;
    for (std::size_t i = 0; i < it->second.size(); ++i) rel[i] = -it->second[i];
    relations.push_back(std::move(rel));
    if (e == 1) return;
    std::vector<std::pair<std::uint64_t, std::vector<long>>> old(table.begin(), table.end());
    FElem gj = g;
    for (long j = 1; j < e; ++j, gj = ring->mul(gj, g)) {
      for (const auto& [idx, v] : old) {
        std::vector<long> w = v;
        w.resize(t + 1, 0);
        w[t] = j;
        table.emplace(ring->index(ring->mul(ring->element(idx), gj)), std::move(w));
      }
    }
  }

  std::optional<std::vector<Int>> log(const FElem& x) const {
    auto it = table.find(ring->index(x));
    if (it == table.end()) return std::nullopt;
    std::vector<Int> out(gens.size(), 0);
    for (std::size_t i = 0; i < it->second.size(); ++i) out[i] = it->second[i];
    return out;
  }

  Lattice relation_lattice() const {
    IntMatrix m(0, gens.size());
    for (auto r : relations) {
      r.resize(gens.size(), 0);
      m.append_row(r);
    }
    return Lattice::from_generators(m);
  }
};

std::shared_ptr<FiniteUnitGroup::Impl> enumerate_units(const FiniteRing& ring, const UnitGroupOptions& opts) {
  const std::uint64_t size = ring.size();
  if (size > opts.enumeration_bound) fail(ErrorKind::EnumerationBoundExceeded, "ring too large to enumerate");
  std::vector<std::uint64_t> units;
  for (std::uint64_t i = 0; i < size; ++i)
    if (ring.is_unit(ring.element(i))) units.push_back(i);
  auto closure = std::make_shared<Closure>(ring, opts.enumeration_bound);
  for (auto idx : units) {
    if (closure->table.size() == units.size()) break;
    if (!closure->table.count(idx)) closure->add(ring.element(idx));
  }
  auto impl = std::make_shared<FiniteUnitGroup::Impl>();
  impl->strategy = UnitStrategy::Enumerate;
  impl->raw_gens = closure->gens;
  impl->relations = closure->relation_lattice();
  impl->raw_log = [closure](const FElem& x) {
    auto v = closure->log(x);
    if (!v) fail(ErrorKind::NotInSubgroup, "element is not a unit");
    return *v;
  };
  return impl;
}

// Linear algebra over F_p on dense vectors.
using VecP = std::vector<long>;

long inv_p(long a, long p) {
  long r0 = p, r1 = ((a % p) + p) % p, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const long q = r0 / r1;
    std::tie(r0, r1) = std::pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::pair(s1, s0 - q * s1);
  }
  return ((s0 % p) + p) % p;
}

// Reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(std::vector<VecP>& rows, long p) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const long inv = inv_p(rows[r][c], p);
    for (auto& x : rows[r]) x = x * inv % p;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const long f = rows[i][c];
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] = ((rows[i][j] - f * rows[r][j]) % p + p) % p;
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

// Basis of {v : sum v_i rows[i] = 0}.
std::vector<VecP> left_kernel(const std::vector<VecP>& rows, std::size_t cols, long p) {
  const std::size_t n = rows.size();
  std::vector<VecP> aug;
  for (std::size_t i = 0; i < n; ++i) {
    VecP r = rows[i];
    r.resize(cols + n, 0);
    r[cols + i] = 1;
    aug.push_back(std::move(r));
  }
  rref(aug, p);
  std::vector<VecP> out;
  for (const auto& r : aug) {
    bool zero = true;
    for (std::size_t j = 0; j < cols && zero; ++j) zero = r[j] == 0;
    if (zero) out.emplace_back(r.begin() + static_cast<long>(cols), r.end());
  }
  return out;
}

// A finite-dimensional commutative F_p-algebra.
struct FpAlgebra {
  long p = 2;
  std::size_t dim = 0;
  std::vector<std::vector<VecP>> table;
  VecP one;

  VecP zero() const { return VecP(dim, 0); }
  VecP unit_vector(std::size_t i) const {
    VecP v = zero();
    v[i] = 1;
    return v;
  }
  VecP add(const VecP& a, const VecP& b) const {
    VecP c(dim);
    for (std::size_t i = 0; i < dim; ++i) c[i] = (a[i] + b[i]) % p;
    return c;
  }
  VecP sub(const VecP& a, const VecP& b) const {
    VecP c(dim);
    for (std::size_t i = 0; i < dim; ++i) c[i] = ((a[i] - b[i]) % p + p) % p;
    return c;
  }
  VecP scale(const VecP& a, long s) const {
    VecP c(dim);
    for (std::size_t i = 0; i < dim; ++i) c[i] = a[i] * (((s % p) + p) % p) % p;
    return c;
  }
  VecP mul(const VecP& a, const VecP& b) const {
    VecP c(dim, 0);
    for (std::size_t i = 0; i < dim; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        if (b[j] == 0) continue;
        const long ab = a[i] * b[j] % p;
        for (std::size_t s = 0; s < dim; ++s) c[s] = (c[s] + ab * table[i][j][s]) % p;
      }
    }
    return c;
  }
  VecP pow(const VecP& a, Int e) const {
    VecP result = one, base = a;
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) result = mul(result, base);
      e >>= 1;
      if (e > 0) base = mul(base, base);
    }
    return result;
  }
  bool is_zero(const VecP& a) const {
    return std::all_of(a.begin(), a.end(), [](long x) { return x == 0; });
  }
};

std::vector<std::int64_t> factor_small(std::int64_t n) {
  std::vector<std::int64_t> f;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    f.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) f.push_back(n);
  return f;
}

// x with base^x = target in a cyclic group of order m generated by base,
// by Pohlig-Hellman with baby-step giant-step on each prime.
std::optional<std::int64_t> cyclic_log(const FpAlgebra& s, const VecP& identity, const VecP& base, const VecP& target,
                                       std::int64_t m, std::uint64_t bound) {
  std::int64_t x = 0, modulus = 1;
  for (std::int64_t l : factor_small(m)) {
    std::int64_t lk = 1;
    int k = 0;
    while (m % (lk * l) == 0) {
      lk *= l;
      ++k;
    }
    const VecP g = s.pow(base, m / lk);
    const VecP h = s.pow(target, m / lk);
    const VecP gamma = s.pow(g, lk / l);  // order l
    const std::int64_t steps = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(l))));
    if (static_cast<std::uint64_t>(steps) > bound)
      fail(ErrorKind::EnumerationBoundExceeded, "discrete logarithm exceeds the step bound");
    std::map<VecP, std::int64_t> baby;
    VecP cur = identity;
    for (std::int64_t j = 0; j < steps; ++j, cur = s.mul(cur, gamma)) baby.emplace(cur, j);
    // gamma^-steps
    const VecP giant = s.pow(gamma, Int(static_cast<long>(l - steps % l) % l));
    std::int64_t digits = 0, lpow = 1;
    for (int i = 0; i < k; ++i, lpow *= l) {
      // (h * g^-digits)^(l^(k-1-i)) lies in <gamma>.
      const VecP ginv_d = s.pow(g, Int(static_cast<long>((lk - digits % lk) % lk)));
      VecP y = s.pow(s.mul(h, ginv_d), Int(static_cast<long>(lk / lpow / l)));
      std::optional<std::int64_t> d;
      for (std::int64_t a = 0; a <= steps && !d; ++a, y = s.mul(y, giant)) {
        auto it = baby.find(y);
        if (it != baby.end()) d = (a * steps + it->second) % l;
      }
      if (!d) return std::nullopt;
      digits += *d * lpow;
    }
    if (!(s.mul(identity, s.pow(g, Int(static_cast<long>(digits)))) == h)) return std::nullopt;
    // CRT with the previous moduli.
    std::int64_t t = static_cast<std::int64_t>(
        static_cast<i128>(((digits - x) % lk + lk) % lk) * inv_p(static_cast<long>(modulus % lk), static_cast<long>(lk)) % lk);
    x += modulus * t;
    modulus *= lk;
  }
  return x % m;
}

struct FieldPart {
  VecP idempotent;      // in S
  std::int64_t order;   // q - 1
  FElem teich;          // unit of R of order q - 1
  VecP teich_image;     // its image in S
};

struct PrimePart {
  long p = 2;
  FElem eps;                  // CRT idempotent of the p-part
  std::vector<std::size_t> cols;  // ring coordinates with p | n_j
  FpAlgebra s;                // R / rad(R / pR) presented on complement columns
  std::vector<VecP> rad_rows; // rref of the radical in R/pR coordinates
  std::vector<std::size_t> rad_pivots;
  std::vector<std::size_t> complement;
  std::vector<FieldPart> fields;
  std::shared_ptr<Closure> one_plus_j;
};

VecP to_quotient_coords(const PrimePart& pp, const FElem& x) {
  VecP a;
  for (auto j : pp.cols) a.push_back(static_cast<long>(x[j] % pp.p));
  for (std::size_t r = 0; r < pp.rad_rows.size(); ++r) {
    const long c = a[pp.rad_pivots[r]];
    if (c == 0) continue;
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = ((a[j] - c * pp.rad_rows[r][j]) % pp.p + pp.p) % pp.p;
  }
  VecP out;
  for (auto j : pp.complement) out.push_back(a[j]);
  return out;
}

FElem lift_from_quotient(const FiniteRing& ring, const PrimePart& pp, const VecP& s) {
  FElem x = ring.zero();
  for (std::size_t i = 0; i < pp.complement.size(); ++i) x[pp.cols[pp.complement[i]]] = s[i];
  return ring.mul(pp.eps, x);
}

Lattice subgroup_lattice(const FiniteRing& ring, const std::vector<FElem>& gens) {
  IntMatrix m(0, ring.rank());
  for (const auto& g : gens) m.append_row(std::vector<Int>(g.begin(), g.end()));
  m.append_rows(IntMatrix::diagonal(std::vector<Int>(ring.orders().begin(), ring.orders().end())));
  return Lattice::from_generators(m);
}

std::vector<FElem> lattice_elements(const FiniteRing& ring, const Lattice& l) {
  std::vector<FElem> out;
  for (std::size_t i = 0; i < l.rank(); ++i) {
    FElem e(ring.rank());
    bool zero = true;
    for (std::size_t j = 0; j < ring.rank(); ++j) {
      e[j] = static_cast<std::int64_t>(mpz_fdiv_ui(l.basis()(i, j).get_mpz_t(), static_cast<unsigned long>(ring.orders()[j])));
      zero = zero && e[j] == 0;
    }
    if (!zero) out.push_back(std::move(e));
  }
  return out;
}

PrimePart prime_part(const FiniteRing& ring, long p, std::int64_t pa, std::int64_t big_n, const UnitGroupOptions& opts,
                     std::mt19937_64& rng) {
  PrimePart pp;
  pp.p = p;
  // c = 1 mod p^a and 0 mod N / p^a
  const std::int64_t rest = big_n / pa;
  const std::int64_t c = static_cast<std::int64_t>(static_cast<i128>(rest) * inv_p(static_cast<long>(rest % pa), static_cast<long>(pa)) % big_n);
  pp.eps = ring.scale(ring.one(), c);
  for (std::size_t j = 0; j < ring.rank(); ++j)
    if (ring.orders()[j] % p == 0) pp.cols.push_back(j);
  const std::size_t d = pp.cols.size();

  // A = R / pR.
  FpAlgebra a;
  a.p = p;
  a.dim = d;
  a.table.assign(d, std::vector<VecP>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      FElem prod = ring.mul(ring.basis(pp.cols[i]), ring.basis(pp.cols[j]));
      VecP v;
      for (auto t : pp.cols) v.push_back(static_cast<long>(prod[t] % p));
      a.table[i][j] = std::move(v);
    }
  for (auto t : pp.cols) a.one.push_back(static_cast<long>(ring.one()[t] % p));

  // Nilradical: kernel of a high Frobenius power.
  Int ps = p;
  while (ps < Int(static_cast<long>(d))) ps *= p;
  std::vector<VecP> frob;
  for (std::size_t i = 0; i < d; ++i) frob.push_back(a.pow(a.unit_vector(i), ps));
  pp.rad_rows = left_kernel(frob, d, p);
  pp.rad_pivots = rref(pp.rad_rows, p);
  for (std::size_t j = 0; j < d; ++j)
    if (std::find(pp.rad_pivots.begin(), pp.rad_pivots.end(), j) == pp.rad_pivots.end()) pp.complement.push_back(j);

  // S = A / rad(A).
  auto reduce = [&](VecP v) {
    for (std::size_t r = 0; r < pp.rad_rows.size(); ++r) {
      const long cf = v[pp.rad_pivots[r]];
      if (cf == 0) continue;
      for (std::size_t j = 0; j < d; ++j) v[j] = ((v[j] - cf * pp.rad_rows[r][j]) % p + p) % p;
    }
    VecP out;
    for (auto j : pp.complement) out.push_back(v[j]);
    return out;
  };
  FpAlgebra& s = pp.s;
  s.p = p;
  s.dim = pp.complement.size();
  s.table.assign(s.dim, std::vector<VecP>(s.dim));
  for (std::size_t i = 0; i < s.dim; ++i)
    for (std::size_t j = 0; j < s.dim; ++j) s.table[i][j] = reduce(a.table[pp.complement[i]][pp.complement[j]]);
  s.one = reduce(a.one);

  // Primitive idempotents from the Frobenius-fixed subalgebra.
  std::vector<VecP> fixed_rows;
  for (std::size_t i = 0; i < s.dim; ++i) fixed_rows.push_back(s.sub(s.pow(s.unit_vector(i), Int(p)), s.unit_vector(i)));
  const auto fixed = left_kernel(fixed_rows, s.dim, p);
  std::vector<VecP> idem;
  if (s.dim > 0) idem.push_back(s.one);
  for (const auto& y : fixed) {
    std::vector<VecP> next;
    for (const auto& e : idem)
      for (long cval = 0; cval < p; ++cval) {
        VecP f = s.mul(e, s.sub(s.one, s.pow(s.sub(y, s.scale(s.one, cval)), Int(p - 1))));
        if (!s.is_zero(f)) next.push_back(f);
      }
    idem = std::move(next);
  }

  // |J| from the additive subgroup generated by the radical and pR.
  std::vector<FElem> jgens;
  for (const auto& r : pp.rad_rows) {
    FElem x = ring.zero();
    for (std::size_t t = 0; t < d; ++t) x[pp.cols[t]] = r[t];
    jgens.push_back(ring.mul(pp.eps, x));
  }
  for (auto j : pp.cols) jgens.push_back(ring.mul(pp.eps, ring.scale(ring.basis(j), p)));
  const Lattice zero_lat = subgroup_lattice(ring, {});
  const Lattice jl = subgroup_lattice(ring, jgens);
  const Int jsize = *sublattice_index(zero_lat, jl);

  for (const auto& e : idem) {
    std::vector<VecP> span;
    for (std::size_t i = 0; i < s.dim; ++i) span.push_back(s.mul(e, s.unit_vector(i)));
    const std::size_t f = rref(span, p).size();
    Int q = 1;
    for (std::size_t i = 0; i < f; ++i) q *= p;
    if (q > Int("1000000000000")) fail(ErrorKind::EnumerationBoundExceeded, "residue field too large");
    const std::int64_t m = q.get_si() - 1;
    const auto ls = factor_small(m);
    std::uniform_int_distribution<long> digit(0, p - 1);
    VecP g;
    for (int attempt = 0; attempt < 10000 && g.empty(); ++attempt) {
      VecP x(s.dim);
      for (auto& v : x) v = digit(rng);
      x = s.mul(e, x);
      if (s.is_zero(x) || !(s.pow(x, Int(static_cast<long>(m))) == e)) continue;
      bool primitive = true;
      for (auto l : ls) primitive = primitive && !(s.pow(x, Int(static_cast<long>(m / l))) == e);
      if (primitive) g = x;
    }
    if (g.empty()) fail(ErrorKind::Internal, "no generator found for a residue field");
    const FElem x = lift_from_quotient(ring, pp, s.add(g, s.sub(s.one, e)));
    const FElem u = ring.add(x, ring.sub(ring.one(), pp.eps));
    FieldPart fp;
    fp.idempotent = e;
    fp.order = m;
    fp.teich = ring.pow(u, jsize);
    fp.teich_image = to_quotient_coords(pp, fp.teich);
    pp.fields.push_back(std::move(fp));
  }

  // 1 + J from the filtration J, J^2, ...
  pp.one_plus_j = std::make_shared<Closure>(ring, opts.enumeration_bound);
  Lattice cur = jl;
  const auto jbasis = lattice_elements(ring, jl);
  while (!(cur == zero_lat)) {
    const auto elems = lattice_elements(ring, cur);
    for (const auto& b : elems) {
      FElem w = ring.add(ring.one(), b);
      if (!pp.one_plus_j->contains(w)) pp.one_plus_j->add(w);
    }
    std::vector<FElem> prods;
    for (const auto& x : elems)
      for (const auto& y : jbasis) prods.push_back(ring.mul(x, y));
    cur = subgroup_lattice(ring, prods);
  }
  if (Int(static_cast<unsigned long>(pp.one_plus_j->table.size())) != jsize)
    fail(ErrorKind::Internal, "1 + J has the wrong order");
  return pp;
}

std::shared_ptr<FiniteUnitGroup::Impl> local_units(const FiniteRing& ring, const UnitGroupOptions& opts) {
  std::int64_t big_n = 1;
  for (auto n : ring.orders()) big_n = std::max(big_n, n);
  std::mt19937_64 rng(opts.seed);
  auto parts = std::make_shared<std::vector<PrimePart>>();
  for (auto p : factor_small(big_n)) {
    std::int64_t pa = 1;
    while (big_n % (pa * p) == 0) pa *= p;
    parts->push_back(prime_part(ring, static_cast<long>(p), pa, big_n, opts, rng));
  }
  auto impl = std::make_shared<FiniteUnitGroup::Impl>();
  impl->strategy = UnitStrategy::Local;
  std::vector<std::vector<Int>> rel_rows;
  std::size_t total = 0;
  for (const auto& pp : *parts) total += pp.fields.size() + pp.one_plus_j->gens.size();
  std::size_t offset = 0;
  for (const auto& pp : *parts) {
    for (const auto& f : pp.fields) {
      impl->raw_gens.push_back(f.teich);
      std::vector<Int> r(total, 0);
      r[offset++] = f.order;
      rel_rows.push_back(std::move(r));
    }
    const auto& c = *pp.one_plus_j;
    for (const auto& g : c.gens) impl->raw_gens.push_back(g);
    for (auto rr : c.relations) {
      std::vector<Int> r(total, 0);
      for (std::size_t i = 0; i < rr.size(); ++i) r[offset + i] = rr[i];
      rel_rows.push_back(std::move(r));
    }
    offset += c.gens.size();
  }
  IntMatrix rel(0, total);
  for (const auto& r : rel_rows) rel.append_row(r);
  impl->relations = Lattice::from_generators(rel);
  const std::uint64_t bound = opts.dlog_bound;
  auto ring_copy = std::make_shared<FiniteRing>(ring);
  impl->raw_log = [parts, ring_copy, total, bound](const FElem& x) {
    const FiniteRing& r = *ring_copy;
    std::vector<Int> out;
    out.reserve(total);
    for (const auto& pp : *parts) {
      FElem u = r.add(r.mul(pp.eps, x), r.sub(r.one(), pp.eps));
      const VecP z = to_quotient_coords(pp, x);
      for (const auto& f : pp.fields) {
        const VecP target = pp.s.mul(f.idempotent, z);
        if (pp.s.is_zero(target)) fail(ErrorKind::NotInSubgroup, "element is not a unit");
        auto k = cyclic_log(pp.s, f.idempotent, pp.s.mul(f.idempotent, f.teich_image), target, f.order, bound);
        if (!k) fail(ErrorKind::NotInSubgroup, "element is not a unit");
        out.emplace_back(static_cast<long>(*k));
        u = r.mul(u, r.pow(f.teich, Int(static_cast<long>((f.order - *k) % f.order))));
      }
      auto rest = pp.one_plus_j->log(u);
      if (!rest) fail(ErrorKind::NotInSubgroup, "element is not a unit");
      out.insert(out.end(), rest->begin(), rest->end());
    }
    return out;
  };
  return impl;
}

}  // namespace

FiniteUnitGroup::FiniteUnitGroup(std::shared_ptr<const FiniteRing> ring, std::shared_ptr<const Impl> impl)
    : ring_(std::move(ring)), impl_(std::move(impl)), strategy_(impl_->strategy) {
  Presentation pres = standard_gens(impl_->relations);
  Int group_order = pres.torsion_order();
  for (std::size_t j = 0; j < pres.size(); ++j) {
    if (pres.orders[j] == 0) fail(ErrorKind::Internal, "unit group of a finite ring is infinite");
    FElem g = ring_->one();
    for (std::size_t i = 0; i < impl_->raw_gens.size(); ++i) {
      Int e = pres.transform(j, i);
      mpz_fdiv_r(e.get_mpz_t(), e.get_mpz_t(), group_order.get_mpz_t());
      if (e != 0) g = ring_->mul(g, ring_->pow(impl_->raw_gens[i], e));
    }
    gens_.push_back(std::move(g));
    orders_.push_back(pres.orders[j]);
  }
  // Keep the presentation for discrete logarithms.
  auto full = std::make_shared<Impl>(*impl_);
  auto raw = impl_->raw_log;
  full->raw_log = [raw, pres](const FElem& x) { return pres.coordinates_of(raw(x)); };
  impl_ = full;
}

Int FiniteUnitGroup::order() const {
  Int o = 1;
  for (const auto& d : orders_) o *= d;
  return o;
}

std::vector<Int> FiniteUnitGroup::discrete_log(const FElem& x) const {
  if (x.size() != ring_->rank()) fail(ErrorKind::BadParameters, "element of a different ring");
  return impl_->raw_log(x);
}

FElem FiniteUnitGroup::evaluate(std::span<const Int> exps) const {
  FElem r = ring_->one();
  for (std::size_t j = 0; j < gens_.size(); ++j) {
    Int e = exps[j];
    mpz_fdiv_r(e.get_mpz_t(), e.get_mpz_t(), orders_[j].get_mpz_t());
    if (e != 0) r = ring_->mul(r, ring_->pow(gens_[j], e));
  }
  return r;
}

FiniteUnitGroup unit_group(const FiniteRing& r, const UnitGroupOptions& opts) {
  auto ring = std::make_shared<const FiniteRing>(r);
  switch (opts.strategy) {
    case UnitStrategy::Enumerate:
      return FiniteUnitGroup(ring, enumerate_units(r, opts));
    case UnitStrategy::Local:
      return FiniteUnitGroup(ring, local_units(r, opts));
    case UnitStrategy::Auto:
      break;
  }
  try {
    return FiniteUnitGroup(ring, local_units(r, opts));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EnumerationBoundExceeded) throw;
    return FiniteUnitGroup(ring, enumerate_units(r, opts));
  }
}

PhiMaps phi_maps(const OrderLattice& o, std::size_t k) {
  PhiMaps m{ideal_intersections(o, k), FiniteRing{}};
  m.ring = FiniteRing::quotient(m.split.second, m.split.second_ideal);
  return m;
}

FElem PhiMaps::phi1(std::span<const Int> x) const {
  const std::size_t d = split.top.cols();
  auto c = solve_in_span(split.top.cols_range(0, split.dim1), x);
  if (!c) fail(ErrorKind::NotInImage, "element is not in the projection of the order");
  auto full = row_times(*c, split.top);
  return ring.from_ambient(std::span<const Int>(full).subspan(split.dim1, d - split.dim1));
}

FElem PhiMaps::phi2(std::span<const Int> y) const { return ring.from_ambient(y); }

}  // namespace zgunits
