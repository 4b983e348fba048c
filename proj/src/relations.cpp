#include "zgunits/relations.hpp"

#include <algorithm>

namespace zgunits {

std::size_t Presentation::torsion_count() const {
  std::size_t c = 0;
  for (const auto& d : orders)
    if (d != 0) ++c;
  return c;
}

Int Presentation::torsion_order() const {
  Int p = 1;
  for (const auto& d : orders)
    if (d != 0) p *= d;
  return p;
}

std::vector<Int> Presentation::coordinates_of(std::span<const Int> x) const {
  auto c = row_times(x, coordinates);
  reduce_mod_orders(c, orders);
  return c;
}

void reduce_mod_orders(std::vector<Int>& v, const std::vector<Int>& orders) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (orders[j] == 0) continue;
    mpz_fdiv_r(v[j].get_mpz_t(), v[j].get_mpz_t(), orders[j].get_mpz_t());
  }
}

Presentation standard_gens(const Lattice& relations) {
  const std::size_t k = relations.ambient_rank();
  Presentation p;
  if (relations.is_zero()) {
    p.orders.assign(k, 0);
    p.transform = IntMatrix::identity(k);
    p.coordinates = IntMatrix::identity(k);
    return p;
  }
  auto s = snf(relations.basis());
  const auto diag = s.diagonal();
  const IntMatrix vinv = unimodular_inverse(s.v);
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < k; ++j) {
    Int d = j < diag.size() ? diag[j] : Int(0);
    if (d == 1) continue;
    keep.push_back(j);
    p.orders.push_back(d);
  }
  p.transform = IntMatrix(keep.size(), k);
  p.coordinates = IntMatrix(k, keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t i = 0; i < k; ++i) {
      p.transform(a, i) = vinv(keep[a], i);
      p.coordinates(i, a) = s.v(i, keep[a]);
    }
  return p;
}

std::optional<std::vector<Int>> solve_in_span(const IntMatrix& gens, std::span<const Int> v) {
  if (gens.rows() == 0) {
    if (is_zero(v)) return std::vector<Int>{};
    return std::nullopt;
  }
  auto h = hnf_with_transform(gens);
  Lattice lat = Lattice::from_generators(gens);
  auto c = lat.coordinates(v);
  if (!c) return std::nullopt;
  return row_times(*c, h.transform.rows_range(0, h.rank));
}

namespace {

IntMatrix stack(const std::vector<const IntMatrix*>& parts, std::size_t cols) {
  IntMatrix m(0, cols);
  for (const IntMatrix* p : parts) m.append_rows(*p);
  return m;
}

IntMatrix diag_of(const std::vector<Int>& orders) { return IntMatrix::diagonal(orders); }

Lattice truncated_kernel(const IntMatrix& m, std::size_t k) {
  Lattice ker = integer_kernel(m);
  if (ker.is_zero()) return Lattice(k);
  return Lattice::from_generators(ker.basis().cols_range(0, k));
}

}  // namespace

Lattice hom_kernel(const IntMatrix& images, const std::vector<Int>& target_orders) {
  const std::size_t k = images.rows();
  if (images.cols() == 0) return Lattice::full(k);
  IntMatrix d = diag_of(target_orders);
  return truncated_kernel(stack({&images, &d}, images.cols()), k);
}

Lattice hom_preimage(const IntMatrix& images, const std::vector<Int>& target_orders, const IntMatrix& targets) {
  const std::size_t k = images.rows();
  if (images.cols() == 0) return Lattice::full(k);
  IntMatrix d = diag_of(target_orders);
  Lattice image = Lattice::from_generators(stack({&images, &d}, images.cols()));
  for (std::size_t j = 0; j < targets.rows(); ++j)
    if (!image.contains(targets.row(j))) fail(ErrorKind::NotInImage, "target is not in the image of the homomorphism");
  return truncated_kernel(stack({&images, &targets, &d}, images.cols()), k);
}

std::optional<Int> subgroup_index(const Lattice& rel, std::size_t num_sub) {
  const std::size_t total = rel.ambient_rank();
  const std::size_t num_full = total - num_sub;
  if (num_sub > 0) {
    Lattice ps = rel.is_zero() ? Lattice(num_sub) : Lattice::from_generators(rel.basis().cols_range(0, num_sub));
    if (!(ps == Lattice::full(num_sub))) fail(ErrorKind::NotASubgroup, "subgroup generators are not in the group");
  }
  if (num_full == 0) return Int(1);
  Lattice pf = rel.is_zero() ? Lattice(num_full) : Lattice::from_generators(rel.basis().cols_range(num_sub, total));
  return sublattice_index(pf, Lattice::full(num_full));
}

Int real_to_int(const Real& x) {
  Int z;
  mpfr_get_z(z.get_mpz_t(), x.backend().data(), MPFR_RNDN);
  return z;
}

std::optional<std::size_t> numeric_rank(std::vector<std::vector<Real>> rows, unsigned precision) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  PrecisionScope scope(precision + 20);
  const Real hi = pow(Real(10), -static_cast<long>(precision) / 3);
  const Real lo = pow(Real(10), -2 * static_cast<long>(precision) / 3);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t best = rank;
    for (std::size_t i = rank + 1; i < rows.size(); ++i)
      if (abs(rows[i][c]) > abs(rows[best][c])) best = i;
    const Real piv = abs(rows[best][c]);
    if (piv <= lo) continue;
    if (piv < hi) return std::nullopt;
    std::swap(rows[rank], rows[best]);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      const Real f = rows[i][c] / rows[rank][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

namespace {

std::optional<Lattice> relations_at(const std::vector<CycElt>& units, const std::vector<CycElt>& inverses,
                                    unsigned prec) {
  const std::size_t k = units.size();
  const long n = units.front().conductor();
  std::vector<std::vector<Real>> logs;
  for (const auto& u : units) logs.push_back(log_embedding(u, prec).entries);
  const std::size_t r = logs.front().size();

  IntMatrix b(k, k + r);
  {
    PrecisionScope scope(prec + 20);
    const Real scale = pow(Real(10), static_cast<long>(prec));
    for (std::size_t i = 0; i < k; ++i) {
      b(i, i) = 1;
      for (std::size_t j = 0; j < r; ++j) b(i, k + j) = real_to_int(logs[i][j] * scale);
    }
  }
  IntMatrix red = lll_reduce(b);
  IntMatrix candidates(0, k);
  {
    PrecisionScope scope(prec + 20);
    const Real threshold = pow(Real(10), -static_cast<long>(prec) / 2);
    for (std::size_t i = 0; i < red.rows(); ++i) {
      std::vector<Int> alpha(red.row(i).begin(), red.row(i).begin() + static_cast<long>(k));
      if (is_zero(alpha)) continue;
      bool small = true;
      for (std::size_t j = 0; j < r && small; ++j) {
        Real s = 0;
        for (std::size_t t = 0; t < k; ++t)
          if (alpha[t] != 0) s += Real(alpha[t].get_mpz_t()) * logs[t][j];
        small = abs(s) < threshold;
      }
      if (small) candidates.append_row(alpha);
    }
  }
  auto img_rank = numeric_rank(logs, prec);
  if (!img_rank) return std::nullopt;
  Lattice k0 = candidates.rows() ? pure_closure(Lattice::from_generators(candidates)) : Lattice(k);
  if (k0.rank() + *img_rank != k) return std::nullopt;
  if (k0.is_zero()) return Lattice(k);

  IntMatrix basis = lll_reduce(k0.basis());
  const long m = torsion_order(n);
  IntMatrix tors(basis.rows() + 1, 1);
  for (std::size_t i = 0; i < basis.rows(); ++i) {
    CycElt p = power_product(units, inverses, basis.row(i), CycElt::one(n),
                             [](const CycElt& x, const CycElt& y) { return x * y; });
    auto t = torsion_log(p);
    if (!t) return std::nullopt;
    tors(i, 0) = *t;
  }
  tors(basis.rows(), 0) = m;
  Lattice coeffs = truncated_kernel(tors, basis.rows());
  return Lattice::from_generators(coeffs.basis() * basis);
}

}  // namespace

Lattice relation_lattice_cyc(const std::vector<CycElt>& units, const RelationOptions& opts) {
  if (units.empty()) return Lattice(0);
  const long n = units.front().conductor();
  std::vector<CycElt> inverses;
  for (const auto& u : units) {
    if (u.conductor() != n) fail(ErrorKind::ConductorMismatch, "units from different cyclotomic fields");
    inverses.push_back(unit_inverse(u));
  }
  unsigned prec = opts.precision;
  for (unsigned attempt = 0; attempt <= opts.max_doublings; ++attempt, prec *= 2) {
    if (auto l = relations_at(units, inverses, prec)) return *l;
  }
  fail(ErrorKind::PrecisionExhausted,
       "relation lattice not certified up to " + std::to_string(prec / 2) + " digits");
}

Lattice relation_lattice_toral(const std::vector<GroupRingElement>& units, const std::vector<ComponentMap>& maps,
                               const RelationOptions& opts) {
  Lattice l = Lattice::full(units.size());
  if (units.empty()) return l;
  for (const auto& m : maps) {
    std::vector<CycElt> proj;
    for (const auto& u : units) proj.push_back(component_project(m, u));
    l = intersect(l, relation_lattice_cyc(proj, opts));
  }
  return l;
}

}  // namespace zgunits
