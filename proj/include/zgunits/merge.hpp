#pragma once

// Unit groups of the projections e O of ZG, assembled one Wedderburn
// component at a time, up to the full unit group (ZG)^*.
//
// A unit of e O is stored as an exponent vector over the generators of the
// full unit groups of its components: for each merged component the torsion
// exponent followed by the free exponents. The unit group of e O is then a
// lattice in this exponent space containing the torsion relations.

#include <cstddef>
#include <vector>

#include "zgunits/cycunits.hpp"
#include "zgunits/groupring.hpp"
#include "zgunits/lattice.hpp"
#include "zgunits/quotring.hpp"
#include "zgunits/relations.hpp"

namespace zgunits {

struct MergedUnitGroup {
  AbelianGroup group;
  std::vector<ComponentMap> maps;     // all components of QG
  std::vector<std::size_t> merged;    // indices into maps, in merge order
  std::vector<UnitGroupDesc> descs;   // full unit group of each merged component
  Lattice units;                      // exponent vectors of units of e O

  std::size_t dim() const { return units.ambient_rank(); }
  // First exponent coordinate of each merged component, plus the total.
  std::vector<std::size_t> offsets() const;
  // Exponent vectors that represent 1 (torsion orders on torsion coordinates).
  Lattice torsion_relations() const;
  OrderLattice order() const;
  GroupRingElement idempotent() const;

  // Component units of an exponent vector, in merge order.
  std::vector<CycElt> components(std::span<const Int> exps) const;
  // The unit of e O as a rational group ring element.
  GroupRingElement element(std::span<const Int> exps) const;
  // Exponent vector of a unit of e O given by its components in merge order.
  std::vector<Int> exponents_of(const std::vector<CycElt>& comps) const;

  // Standard generators of units / torsion_relations, as exponent vectors.
  Presentation presentation() const;
  std::vector<std::vector<Int>> generator_exponents() const;
};

// Basis of {(alpha, beta) : sum_i mu_ij alpha_i - sum_k nu_kj beta_k = 0 mod orders_j}.
Lattice lambda_from_congruences(const IntMatrix& mu, const IntMatrix& nu, const std::vector<Int>& orders);

struct MergeOptions {
  UnitGroupOptions ring_units;
  FullUnitOptions component_units;
  // Merge order as indices into primitive_idempotents; empty for the default.
  std::vector<std::size_t> order;
};

struct MergeStep {
  std::size_t component = 0;
  long conductor = 1;
  std::uint64_t ring_size = 1;
  Int ring_unit_order = 1;
  Int lambda_index = 1;
  double seconds = 0;
};

struct MergeReport {
  std::vector<MergeStep> steps;
  double component_seconds = 0;
  double merge_seconds = 0;
  double lift_seconds = 0;
  double total_seconds = 0;
};

// The unit group of a single component.
MergedUnitGroup single_component(const AbelianGroup& g, const std::vector<ComponentMap>& maps, std::size_t c,
                                 const FullUnitOptions& opts = {});

// Merges the primitive component c into u.
MergedUnitGroup merge_two(const MergedUnitGroup& u, std::size_t c, const MergeOptions& opts = {},
                          MergeStep* step = nullptr);

// Default merge order: ascending conductor, then ascending size of the
// quotient ring at the step where a component is added.
std::vector<std::size_t> default_merge_order(const AbelianGroup& g, const std::vector<ComponentMap>& maps);

MergedUnitGroup assemble(const AbelianGroup& g, const MergeOptions& opts = {}, MergeReport* report = nullptr);

struct ZGUnitGroup {
  MergedUnitGroup merged;
  Presentation presentation;
  std::vector<GroupRingElement> generators;  // standard generators, torsion first
  std::vector<Int> orders;                   // 0 for free generators
  std::vector<std::vector<Int>> exponents;   // exponent vector of each generator
  std::size_t rank() const { return presentation.rank(); }
  MergeReport report;
};

// (ZG)^* with every generator checked for integrality and invertibility in ZG
// and the rank checked against the rank formula.
ZGUnitGroup unit_group_zg(const AbelianGroup& g, const MergeOptions& opts = {});

}  // namespace zgunits
