#pragma once

// Finitely generated abelian groups given by exponent lattices, and
// multiplicative relation lattices of cyclotomic units.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "zgunits/cyclotomic.hpp"
#include "zgunits/error.hpp"
#include "zgunits/groupring.hpp"
#include "zgunits/lattice.hpp"

namespace zgunits {

// Standard generating set of Z^k / relations.
//
// Standard generator j is prod_i g_i^transform(j, i). Its order is orders[j]
// (0 for infinite order); the finite orders come first and divide each
// other. An exponent vector x over the original generators has coordinates
// x * coordinates over the standard ones, modulo the orders.
struct Presentation {
  std::vector<Int> orders;
  IntMatrix transform;    // s x k
  IntMatrix coordinates;  // k x s
  std::size_t size() const { return orders.size(); }
  std::size_t torsion_count() const;
  std::size_t rank() const { return size() - torsion_count(); }
  // Order of the torsion subgroup.
  Int torsion_order() const;
  std::vector<Int> coordinates_of(std::span<const Int> x) const;
};

Presentation standard_gens(const Lattice& relations);

// v reduced coordinatewise into [0, orders[j]) where orders[j] > 0.
void reduce_mod_orders(std::vector<Int>& v, const std::vector<Int>& orders);

// Coefficients c with c * gens = v, if v lies in the row span of gens.
std::optional<std::vector<Int>> solve_in_span(const IntMatrix& gens, std::span<const Int> v);

// Kernel {x : x * images = 0 modulo target_orders} of a homomorphism from Z^k
// into the finite group prod Z/target_orders.
Lattice hom_kernel(const IntMatrix& images, const std::vector<Int>& target_orders);
// Preimage of the subgroup generated by the rows of targets; throws NotInImage
// when some target is not in the image.
Lattice hom_preimage(const IntMatrix& images, const std::vector<Int>& target_orders, const IntMatrix& targets);

// rel is the relation lattice of the concatenated list (sub generators,
// full generators). Returns [full : sub], nullopt if infinite; throws
// NotASubgroup unless every sub generator lies in the full group.
std::optional<Int> subgroup_index(const Lattice& rel, std::size_t num_sub);

// Power product prod gens[i]^exps[i]; negative exponents use inverses[i].
template <class T, class Mul>
T power_product(const std::vector<T>& gens, const std::vector<T>& inverses, std::span<const Int> exps, T one,
                Mul mul) {
  T result = std::move(one);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (exps[i] == 0) continue;
    const T& base0 = exps[i] > 0 ? gens[i] : inverses[i];
    Int e = abs(exps[i]);
    T base = base0;
    while (true) {
      if (mpz_odd_p(e.get_mpz_t())) result = mul(result, base);
      e >>= 1;
      if (e == 0) break;
      base = mul(base, base);
    }
  }
  return result;
}

struct RelationOptions {
  unsigned precision = kDefaultPrecision;  // initial decimal digits
  unsigned max_doublings = 3;
};

// Exact basis of {a : prod units[i]^a[i] = 1} for units of one Z[zeta_n].
Lattice relation_lattice_cyc(const std::vector<CycElt>& units, const RelationOptions& opts = {});

// Relation lattice of units of ZG: the intersection over the given
// components of the relation lattices of their projections.
Lattice relation_lattice_toral(const std::vector<GroupRingElement>& units, const std::vector<ComponentMap>& maps,
                               const RelationOptions& opts = {});

// Numeric rank of a real matrix, certified against the perturbation level
// 10^-precision; nullopt when a pivot is ambiguous.
std::optional<std::size_t> numeric_rank(std::vector<std::vector<Real>> rows, unsigned precision);

Int real_to_int(const Real& x);  // nearest integer

}  // namespace zgunits
