#include "zgunits/hoechsmann.hpp"

#include <chrono>
#include <set>

#include "zgunits/relations.hpp"

namespace zgunits {

GroupRingElement geometric_sum(const AbelianGroup& g, std::size_t y, long m) {
  std::vector<Int> c(static_cast<std::size_t>(g.order()), 0);
  for (long t = 0; t < m; ++t) c[g.power(y, t)] += 1;
  return GroupRingElement::from_int_coeffs(g, c);
}

ConstructableUnit constructable_unit(const AbelianGroup& g, std::size_t x, long i, long j, long l) {
  const long n = g.element_order(x);
  if (i <= 0 || j <= 0 || l <= 0 || (l * i - 1) % n != 0)
    fail(ErrorKind::BadParameters, "constructable unit needs l i = 1 mod n");
  ConstructableUnit u{x, n, i, j, l, (l * i - 1) / n, {}};
  u.element = geometric_sum(g, g.power(x, i), l) * geometric_sum(g, g.power(x, j), i) -
              geometric_sum(g, x, n) * Rat(u.k);
  return u;
}

std::vector<ConstructableUnit> hoechsmann_units_cyclic(const AbelianGroup& g, std::size_t x, long l_shift) {
  const long n = g.element_order(x);
  std::vector<ConstructableUnit> out;
  if (n <= 2) return out;
  for (long i = 1; i < n; ++i) {
    if (gcd_long(i, n) != 1) continue;
    long l = 1;
    while ((l * i) % n != 1) ++l;
    for (long j = 1; j < n; ++j)
      if (gcd_long(j, n) == 1) out.push_back(constructable_unit(g, x, i, j, l + l_shift * n));
  }
  return out;
}

std::vector<GroupRingElement> constructable_group(const AbelianGroup& g, long l_shift) {
  std::vector<GroupRingElement> out{-GroupRingElement::one(g)};
  for (std::size_t f = 0; f < g.num_factors(); ++f) {
    std::vector<long> e(g.num_factors(), 0);
    e[f] = 1;
    out.push_back(GroupRingElement::basis(g, g.index_of(GroupElement{e})));
  }
  std::set<std::vector<Rat>> seen;
  for (const auto& c : cyclic_subgroups(g)) {
    if (c.order <= 2) continue;
    for (auto& u : hoechsmann_units_cyclic(g, c.generator, l_shift)) {
      if (u.element.is_one() || !seen.insert(u.element.coeffs()).second) continue;
      out.push_back(std::move(u.element));
    }
  }
  return out;
}

HoechsmannResult hoechsmann_index(const AbelianGroup& g, const HoechsmannOptions& opts) {
  return hoechsmann_index(unit_group_zg(g, opts.merge), opts);
}

HoechsmannResult hoechsmann_index(const ZGUnitGroup& units, const HoechsmannOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const MergedUnitGroup& m = units.merged;
  const auto gens = constructable_group(m.group, opts.l_shift);
  IntMatrix rows(0, m.dim());
  for (const auto& u : gens) {
    std::vector<CycElt> comps;
    for (auto c : m.merged) comps.push_back(component_project(m.maps[c], u));
    rows.append_row(m.exponents_of(comps));
  }
  rows.append_rows(m.torsion_relations().basis());
  const Lattice sub = Lattice::from_generators(rows);
  if (!m.units.contains(sub)) fail(ErrorKind::Internal, "constructable unit outside the computed unit group");

  HoechsmannResult r;
  r.num_generators = gens.size();
  r.rank = units.rank();
  r.constructable_rank = sub.rank() - m.descs.size();
  r.index = sublattice_index(sub, m.units);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::optional<Int> hoechsmann_index_by_relations(const ZGUnitGroup& units, long l_shift) {
  const MergedUnitGroup& m = units.merged;
  auto all = constructable_group(m.group, l_shift);
  const std::size_t num_sub = all.size();
  all.insert(all.end(), units.generators.begin(), units.generators.end());
  return subgroup_index(relation_lattice_toral(all, m.maps), num_sub);
}

}  // namespace zgunits
