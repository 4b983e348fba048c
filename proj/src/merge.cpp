#include "zgunits/merge.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <limits>
#include <set>

namespace zgunits {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

void mod_in_place(Int& x, const Int& k) { mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), k.get_mpz_t()); }

// Arithmetic in (Z/k)[x] / Phi_n in power-basis coordinates.
struct ModCyc {
  const CycField* field;
  Int k;

  std::vector<Int> reduce(const CycElt& x) const {
    if (!x.is_integral()) fail(ErrorKind::Internal, "unit with a denominator");
    std::vector<Int> v = x.numerators();
    for (auto& c : v) mod_in_place(c, k);
    return v;
  }

  std::vector<Int> one() const {
    std::vector<Int> v(field->phi, 0);
    v[0] = 1;
    mod_in_place(v[0], k);
    return v;
  }

  std::vector<Int> mul(const std::vector<Int>& a, const std::vector<Int>& b) const {
    const std::size_t d = field->phi;
    std::vector<Int> p(2 * d - 1, 0);
    for (std::size_t i = 0; i < d; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) p[i + j] += a[i] * b[j];
    }
    for (std::size_t t = 2 * d - 1; t-- > d;) {
      if (p[t] == 0) continue;
      mod_in_place(p[t], k);
      for (std::size_t j = 0; j < d; ++j) p[t - d + j] -= p[t] * field->cyclotomic[j];
    }
    p.resize(d);
    for (auto& c : p) mod_in_place(c, k);
    return p;
  }
};

// Residues of the generators of one component unit group and their inverses.
struct ComponentResidues {
  ModCyc ring;
  std::vector<std::vector<Int>> gens;
  std::vector<std::vector<Int>> inverses;

  ComponentResidues(const UnitGroupDesc& desc, const Int& k) : ring{&cyc_field(desc.conductor), k} {
    gens.push_back(ring.reduce(desc.torsion_gen));
    inverses.push_back(ring.reduce(desc.torsion_gen.pow(desc.torsion_order - 1)));
    for (std::size_t j = 0; j < desc.rank(); ++j) {
      gens.push_back(ring.reduce(desc.free_gens[j]));
      inverses.push_back(ring.reduce(desc.free_inverses[j]));
    }
  }

  std::vector<Int> evaluate(std::span<const Int> exps) const {
    return power_product(gens, inverses, exps, ring.one(),
                         [this](const std::vector<Int>& a, const std::vector<Int>& b) { return ring.mul(a, b); });
  }
};

Lattice truncated_kernel(const IntMatrix& m, std::size_t k) {
  Lattice ker = integer_kernel(m);
  if (ker.is_zero()) return Lattice(k);
  return Lattice::from_generators(ker.basis().cols_range(0, k));
}

IntMatrix stacked(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m = a;
  m.append_rows(b);
  return m;
}

// Relation lattice {c : c * gens in rel} of the rows of gens modulo rel.
Lattice relations_modulo(const IntMatrix& gens, const Lattice& rel) {
  if (gens.rows() == 0) return Lattice(0);
  return truncated_kernel(stacked(gens, rel.basis()), gens.rows());
}

// Standard generators of the group generated by the rows of gens modulo rel.
struct StandardSet {
  IntMatrix gens;
  std::vector<Int> orders;
};

StandardSet standardize(const IntMatrix& gens, const Lattice& rel) {
  auto p = standard_gens(relations_modulo(gens, rel));
  return {p.transform * gens, p.orders};
}

Lattice torsion_lattice(const std::vector<UnitGroupDesc>& descs) {
  std::size_t dim = 0;
  for (const auto& d : descs) dim += 1 + d.rank();
  IntMatrix rows(0, dim);
  std::size_t off = 0;
  for (const auto& d : descs) {
    std::vector<Int> r(dim, 0);
    r[off] = d.torsion_order;
    rows.append_row(r);
    off += 1 + d.rank();
  }
  return Lattice::from_generators(rows);
}

std::vector<ComponentMap> select(const std::vector<ComponentMap>& maps, const std::vector<std::size_t>& idx) {
  std::vector<ComponentMap> out;
  for (auto i : idx) out.push_back(maps[i]);
  return out;
}

std::vector<Int> concat(std::span<const Int> a, std::span<const Int> b) {
  std::vector<Int> v(a.begin(), a.end());
  v.insert(v.end(), b.begin(), b.end());
  return v;
}

}  // namespace

std::vector<std::size_t> MergedUnitGroup::offsets() const {
  std::vector<std::size_t> off{0};
  for (const auto& d : descs) off.push_back(off.back() + 1 + d.rank());
  return off;
}

Lattice MergedUnitGroup::torsion_relations() const { return torsion_lattice(descs); }

OrderLattice MergedUnitGroup::order() const { return OrderLattice::group_ring_image(group, select(maps, merged)); }

GroupRingElement MergedUnitGroup::idempotent() const {
  GroupRingElement e = GroupRingElement::zero(group);
  for (auto c : merged) e = e + maps[c].idempotent;
  return e;
}

std::vector<CycElt> MergedUnitGroup::components(std::span<const Int> exps) const {
  if (exps.size() != dim()) fail(ErrorKind::BadParameters, "exponent vector of the wrong length");
  const auto off = offsets();
  std::vector<CycElt> comps;
  for (std::size_t i = 0; i < descs.size(); ++i) {
    Int t = exps[off[i]];
    mod_in_place(t, Int(descs[i].torsion_order));
    UnitLog lg{t.get_si(), std::vector<Int>(exps.begin() + static_cast<long>(off[i] + 1),
                                            exps.begin() + static_cast<long>(off[i + 1]))};
    comps.push_back(unit_from_log(descs[i], lg));
  }
  return comps;
}

GroupRingElement MergedUnitGroup::element(std::span<const Int> exps) const {
  return component_lift(group, select(maps, merged), components(exps));
}

std::vector<Int> MergedUnitGroup::exponents_of(const std::vector<CycElt>& comps) const {
  if (comps.size() != descs.size()) fail(ErrorKind::BadParameters, "one component per merged component is required");
  std::vector<Int> v;
  for (std::size_t i = 0; i < descs.size(); ++i) {
    auto lg = unit_log(descs[i], comps[i]);
    v.emplace_back(lg.torsion);
    v.insert(v.end(), lg.free.begin(), lg.free.end());
  }
  return v;
}

std::vector<std::vector<Int>> MergedUnitGroup::generator_exponents() const {
  const auto off = offsets();
  const std::size_t n = dim();
  const Lattice tor = torsion_relations();
  std::vector<bool> is_torsion_coord(n, false);
  for (std::size_t i = 0; i < descs.size(); ++i) is_torsion_coord[off[i]] = true;

  // Torsion units: the part of the lattice with vanishing free coordinates.
  IntMatrix tcoords(0, n);
  for (std::size_t i = 0; i < n; ++i)
    if (is_torsion_coord[i]) {
      std::vector<Int> r(n, 0);
      r[i] = 1;
      tcoords.append_row(r);
    }
  Lattice tors_part = intersect(units, Lattice::from_generators(tcoords));
  auto ts = standardize(tors_part.basis(), tor);

  std::vector<std::vector<Int>> out;
  for (std::size_t i = 0; i < ts.gens.rows(); ++i) out.push_back(tor.reduce(ts.gens.row(i)));

  // Free part: LLL-reduced projection onto the free coordinates, lifted back.
  const IntMatrix& b = units.basis();
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_torsion_coord[j]) free_cols.push_back(j);
  IntMatrix proj(b.rows(), free_cols.size());
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < free_cols.size(); ++j) proj(i, j) = b(i, free_cols[j]);
  Lattice pl = Lattice::from_generators(proj);
  if (!pl.is_zero()) {
    IntMatrix red = lll_reduce(pl.basis());
    for (std::size_t i = 0; i < red.rows(); ++i) {
      auto c = solve_in_span(proj, red.row(i));
      if (!c) fail(ErrorKind::Internal, "free generator does not lift");
      out.push_back(tor.reduce(row_times(*c, b)));
    }
  }
  return out;
}

Presentation MergedUnitGroup::presentation() const {
  const auto gens = generator_exponents();
  const Lattice tor = torsion_relations();
  IntMatrix g(0, dim());
  for (const auto& v : gens) g.append_row(v);
  Presentation p;
  p.orders = standard_gens(relations_modulo(g, tor)).orders;
  if (p.orders.size() != gens.size()) fail(ErrorKind::Internal, "generators are not standard");
  // transform: coordinates of the standard generators over the basis of units.
  p.transform = IntMatrix(0, units.rank());
  for (const auto& v : gens) {
    auto c = units.coordinates(v);
    if (!c) fail(ErrorKind::Internal, "generator outside the unit lattice");
    p.transform.append_row(*c);
  }
  // coordinates: each basis vector of units over the standard generators.
  const IntMatrix all = stacked(g, tor.basis());
  p.coordinates = IntMatrix(units.rank(), gens.size());
  for (std::size_t i = 0; i < units.rank(); ++i) {
    auto c = solve_in_span(all, units.basis().row(i));
    if (!c) fail(ErrorKind::Internal, "generators do not span the unit lattice");
    for (std::size_t j = 0; j < gens.size(); ++j) p.coordinates(i, j) = (*c)[j];
  }
  return p;
}

Lattice lambda_from_congruences(const IntMatrix& mu, const IntMatrix& nu, const std::vector<Int>& orders) {
  const std::size_t s = mu.rows(), t = nu.rows(), r = orders.size();
  if (r == 0) return Lattice::full(s + t);
  if (mu.cols() != r || nu.cols() != r) fail(ErrorKind::BadParameters, "congruence matrices of the wrong width");
  IntMatrix m(0, r);
  m.append_rows(mu);
  for (std::size_t k = 0; k < t; ++k) {
    std::vector<Int> row(nu.row(k).begin(), nu.row(k).end());
    for (auto& x : row) x = -x;
    m.append_row(row);
  }
  m.append_rows(IntMatrix::diagonal(orders));
  return truncated_kernel(m, s + t);
}

MergedUnitGroup single_component(const AbelianGroup& g, const std::vector<ComponentMap>& maps, std::size_t c,
                                 const FullUnitOptions& opts) {
  MergedUnitGroup u;
  u.group = g;
  u.maps = maps;
  u.merged = {c};
  u.descs = {full_unit_group(maps[c].conductor, opts)};
  u.units = Lattice::full(1 + u.descs[0].rank());
  return u;
}

MergedUnitGroup merge_two(const MergedUnitGroup& u, std::size_t c, const MergeOptions& opts, MergeStep* step) {
  const auto start = Clock::now();
  if (std::find(u.merged.begin(), u.merged.end(), c) != u.merged.end())
    fail(ErrorKind::BadParameters, "component already merged");
  const UnitGroupDesc desc2 = full_unit_group(u.maps[c].conductor, opts.component_units);

  MergedUnitGroup out;
  out.group = u.group;
  out.maps = u.maps;
  out.merged = u.merged;
  out.merged.push_back(c);
  out.descs = u.descs;
  out.descs.push_back(desc2);

  // Steps 1 and 2: the split of the order and R = e2 O / (e2 O cap O).
  const std::size_t k = u.merged.size();
  const PhiMaps pm = phi_maps(out.order(), k);
  const FiniteRing& ring = pm.ring;
  const FiniteUnitGroup ru = unit_group(ring, opts.ring_units);
  const std::vector<Int>& rorders = ru.orders();
  const std::size_t r = rorders.size();

  const std::size_t n1 = u.dim(), n2 = 1 + desc2.rank();
  const Lattice& l1 = u.units;
  const Lattice tor1 = u.torsion_relations();
  MergedUnitGroup second;
  second.descs = {desc2};
  const Lattice tor2 = second.torsion_relations();

  // Step 3: images of generators of O1^* and O2^* in R^*.
  IntMatrix m1(l1.rank(), r), m2(n2, r);
  if (r > 0) {
    const Int namb = ring.ambient_modulus();
    const std::size_t dim1 = pm.split.dim1, dim = pm.split.top.cols();
    const IntMatrix t1 = pm.split.top.cols_range(0, dim1);
    const IntMatrix t2 = pm.split.top.cols_range(dim1, dim);
    const Int det = determinant(t1);
    RatMatrix rt1(dim1, std::vector<Rat>(dim1));
    for (std::size_t i = 0; i < dim1; ++i)
      for (std::size_t j = 0; j < dim1; ++j) rt1[i][j] = t1(i, j);
    const RatMatrix inv = rat_inverse(rt1);
    IntMatrix adj(dim1, dim1);
    for (std::size_t i = 0; i < dim1; ++i)
      for (std::size_t j = 0; j < dim1; ++j) {
        Rat q = inv[i][j] * det;
        if (q.get_den() != 1) fail(ErrorKind::Internal, "adjugate is not integral");
        adj(i, j) = q.get_num();
      }
    const Int modulus = namb * abs(det);
    std::vector<ComponentResidues> res;
    for (const auto& d : u.descs) res.emplace_back(d, modulus);
    const auto off = u.offsets();
    for (std::size_t i = 0; i < l1.rank(); ++i) {
      std::vector<Int> x;
      for (std::size_t cpt = 0; cpt < u.descs.size(); ++cpt) {
        auto exps = l1.basis().row(i).subspan(off[cpt], off[cpt + 1] - off[cpt]);
        auto v = res[cpt].evaluate(exps);
        x.insert(x.end(), v.begin(), v.end());
      }
      auto coeffs = row_times(x, adj);
      for (auto& q : coeffs) {
        if (!mpz_divisible_p(q.get_mpz_t(), det.get_mpz_t())) fail(ErrorKind::Internal, "unit outside e1 O");
        mpz_divexact(q.get_mpz_t(), q.get_mpz_t(), det.get_mpz_t());
        mod_in_place(q, namb);
      }
      auto y = row_times(coeffs, t2);
      for (auto& q : y) mod_in_place(q, namb);
      auto lg = ru.discrete_log(ring.from_ambient(y));
      for (std::size_t j = 0; j < r; ++j) m1(i, j) = lg[j];
    }
    ComponentResidues res2(desc2, namb);
    for (std::size_t i = 0; i < n2; ++i) {
      auto lg = ru.discrete_log(pm.phi2(res2.gens[i]));
      for (std::size_t j = 0; j < r; ++j) m2(i, j) = lg[j];
    }
  }

  // Step 4: H = H1 cap H2 and its standard generators.
  const IntMatrix dor = IntMatrix::diagonal(rorders);
  const Lattice h = r ? intersect(Lattice::from_generators(stacked(m1, dor)), Lattice::from_generators(stacked(m2, dor)))
                      : Lattice(0);
  const auto hs = r ? standardize(h.basis(), Lattice::from_generators(dor)) : StandardSet{IntMatrix(0, 0), {}};
  auto h_coords = [&](std::span<const Int> x) {
    std::vector<Int> full = std::vector<Int>(x.begin(), x.end());
    auto c = solve_in_span(stacked(hs.gens, dor), full);
    if (!c) fail(ErrorKind::Internal, "image outside H");
    std::vector<Int> v(c->begin(), c->begin() + static_cast<long>(hs.gens.rows()));
    reduce_mod_orders(v, hs.orders);
    return v;
  };

  // Step 5: M_i = phi_i^-1(H), standardized.
  IntMatrix m1_gens(0, n1), m2_gens(0, n2);
  if (r) {
    Lattice pre1 = hom_preimage(m1, rorders, h.basis());
    m1_gens = pre1.basis() * l1.basis();
    Lattice pre2 = hom_preimage(m2, rorders, h.basis());
    m2_gens = pre2.basis();
  } else {
    m1_gens = l1.basis();
    m2_gens = IntMatrix::identity(n2);
  }
  m1_gens.append_rows(tor1.basis());
  m2_gens.append_rows(tor2.basis());
  const StandardSet a = standardize(m1_gens, tor1);
  const StandardSet b = standardize(m2_gens, tor2);

  IntMatrix mu(a.gens.rows(), hs.gens.rows()), nu(b.gens.rows(), hs.gens.rows());
  if (r) {
    for (std::size_t i = 0; i < a.gens.rows(); ++i) {
      auto c = l1.coordinates(a.gens.row(i));
      if (!c) fail(ErrorKind::Internal, "standard generator outside O1^*");
      auto v = h_coords(row_times(*c, m1));
      for (std::size_t j = 0; j < v.size(); ++j) mu(i, j) = v[j];
    }
    for (std::size_t i = 0; i < b.gens.rows(); ++i) {
      auto v = h_coords(row_times(b.gens.row(i), m2));
      for (std::size_t j = 0; j < v.size(); ++j) nu(i, j) = v[j];
    }
  }
  const Lattice lambda = lambda_from_congruences(mu, nu, hs.orders);

  IntMatrix rows(0, n1 + n2);
  for (std::size_t i = 0; i < lambda.rank(); ++i) {
    auto row = lambda.basis().row(i);
    auto x = row_times(row.subspan(0, a.gens.rows()), a.gens);
    auto y = row_times(row.subspan(a.gens.rows()), b.gens);
    rows.append_row(concat(x, y));
  }
  rows.append_rows(out.torsion_relations().basis());
  out.units = Lattice::from_generators(rows);

  if (step) {
    step->component = c;
    step->conductor = u.maps[c].conductor;
    step->ring_size = ring.size();
    step->ring_unit_order = ru.order();
    auto idx = sublattice_index(lambda, Lattice::full(lambda.ambient_rank()));
    step->lambda_index = idx ? *idx : Int(0);
    step->seconds = seconds_since(start);
  }
  return out;
}

std::vector<std::size_t> default_merge_order(const AbelianGroup& g, const std::vector<ComponentMap>& maps) {
  std::vector<std::size_t> order;
  std::set<std::size_t> left;
  for (std::size_t i = 0; i < maps.size(); ++i) left.insert(i);
  auto take = [&](std::size_t i) {
    order.push_back(i);
    left.erase(i);
  };
  // The trivial character comes first: smallest conductor, smallest index.
  std::size_t first = *std::min_element(left.begin(), left.end(), [&](std::size_t x, std::size_t y) {
    return std::pair(maps[x].conductor, x) < std::pair(maps[y].conductor, y);
  });
  take(first);
  while (!left.empty()) {
    long best_cond = std::numeric_limits<long>::max();
    for (auto i : left) best_cond = std::min(best_cond, maps[i].conductor);
    std::size_t best = maps.size();
    std::uint64_t best_size = std::numeric_limits<std::uint64_t>::max();
    for (auto i : left) {
      if (maps[i].conductor != best_cond) continue;
      std::vector<std::size_t> trial = order;
      trial.push_back(i);
      std::uint64_t size = std::numeric_limits<std::uint64_t>::max();
      try {
        size = phi_maps(OrderLattice::group_ring_image(g, select(maps, trial)), order.size()).ring.size();
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::EnumerationBoundExceeded) throw;
      }
      if (best == maps.size() || size < best_size) {
        best = i;
        best_size = size;
      }
    }
    take(best);
  }
  return order;
}

MergedUnitGroup assemble(const AbelianGroup& g, const MergeOptions& opts, MergeReport* report) {
  const auto start = Clock::now();
  const auto maps = primitive_idempotents(g);
  for (const auto& m : maps)
    if (!conductor_supported(m.conductor))
      fail(ErrorKind::UnsupportedConductor,
           "component Q(zeta_" + std::to_string(m.conductor) + ") is outside the supported range");

  // Component unit groups, one task per distinct conductor.
  std::set<long> conductors;
  for (const auto& m : maps) conductors.insert(m.conductor);
  std::vector<std::future<UnitGroupDesc>> tasks;
  for (long n : conductors)
    tasks.push_back(std::async(std::launch::async, [n, &opts] { return full_unit_group(n, opts.component_units); }));
  for (auto& t : tasks) t.get();
  const double comp_seconds = seconds_since(start);

  std::vector<std::size_t> order = opts.order.empty() ? default_merge_order(g, maps) : opts.order;
  {
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted.size() != maps.size() || sorted[i] != i)
        fail(ErrorKind::BadParameters, "merge order is not a permutation of the components");
  }

  const auto merge_start = Clock::now();
  MergedUnitGroup u = single_component(g, maps, order[0], opts.component_units);
  std::vector<MergeStep> steps;
  for (std::size_t i = 1; i < order.size(); ++i) {
    MergeStep st;
    u = merge_two(u, order[i], opts, &st);
    steps.push_back(st);
  }
  if (report) {
    report->steps = steps;
    report->component_seconds = comp_seconds;
    report->merge_seconds = seconds_since(merge_start);
    report->total_seconds = seconds_since(start);
  }
  return u;
}

ZGUnitGroup unit_group_zg(const AbelianGroup& g, const MergeOptions& opts) {
  const auto start = Clock::now();
  ZGUnitGroup z;
  z.merged = assemble(g, opts, &z.report);
  const auto lift_start = Clock::now();
  z.exponents = z.merged.generator_exponents();
  z.presentation = z.merged.presentation();
  z.orders = z.presentation.orders;
  for (const auto& v : z.exponents) {
    GroupRingElement e = z.merged.element(v);
    if (!e.is_integral()) fail(ErrorKind::Internal, "generator is not integral");
    inverse_in_zg(e);
    z.generators.push_back(std::move(e));
  }
  if (static_cast<long>(z.rank()) != ayoub_rank(g))
    fail(ErrorKind::Internal, "rank " + std::to_string(z.rank()) + " differs from the rank formula " +
                                  std::to_string(ayoub_rank(g)));
  if (z.presentation.torsion_order() != 2 * g.order())
    fail(ErrorKind::Internal, "torsion subgroup is not +-G");
  z.report.lift_seconds = seconds_since(lift_start);
  z.report.total_seconds = seconds_since(start);
  return z;
}

}  // namespace zgunits
