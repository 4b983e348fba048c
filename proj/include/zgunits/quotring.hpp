#pragma once

// Orders in a product of cyclotomic fields, their finite quotient rings and
// the unit groups of those quotients.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "zgunits/abgroup.hpp"
#include "zgunits/groupring.hpp"
#include "zgunits/lattice.hpp"
#include "zgunits/relations.hpp"

namespace zgunits {

// A full-rank lattice in Q(zeta_{n_1}) x ... x Q(zeta_{n_s}), written in the
// concatenated power-basis coordinates of the factors.
struct OrderLattice {
  std::vector<long> conductors;
  Lattice lattice;

  std::size_t dim() const { return lattice.ambient_rank(); }
  std::vector<Int> multiply(std::span<const Int> a, std::span<const Int> b) const;
  std::vector<Int> identity() const;
  // Closed under multiplication and containing the identity.
  bool is_order() const;

  static OrderLattice cyclotomic_integers(long n);
  // Image of ZG under the given components.
  static OrderLattice group_ring_image(const AbelianGroup& g, const std::vector<ComponentMap>& maps);
};

// O split as e1 O + e2 O where e1 covers the first k factors.
struct OrderSplit {
  std::size_t k = 0;
  std::size_t dim1 = 0;
  OrderLattice first;       // e1 O
  OrderLattice second;      // e2 O
  Lattice first_ideal;      // e1 O cap O, first-block coordinates
  Lattice second_ideal;     // e2 O cap O, second-block coordinates
  Lattice j;                // (e1 O cap O) + (e2 O cap O), full coordinates
  IntMatrix top;            // rows of O whose first blocks span e1 O
};

OrderSplit ideal_intersections(const OrderLattice& o, std::size_t k);

using FElem = std::vector<std::int64_t>;

// A finite commutative ring with additive group Z/n_1 x ... x Z/n_k, n_i | n_{i+1}.
class FiniteRing {
 public:
  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::size_t rank() const { return orders_.size(); }
  // Number of elements; EnumerationBoundExceeded beyond 2^62.
  std::uint64_t size() const;
  const FElem& one() const { return one_; }
  FElem zero() const { return FElem(orders_.size(), 0); }
  // Basis element i.
  FElem basis(std::size_t i) const;

  FElem add(const FElem& a, const FElem& b) const;
  FElem sub(const FElem& a, const FElem& b) const;
  FElem neg(const FElem& a) const;
  FElem scale(const FElem& a, std::int64_t c) const;
  FElem mul(const FElem& a, const FElem& b) const;
  FElem pow(const FElem& a, const Int& e) const;
  bool is_zero(const FElem& a) const;
  // Invertibility from the image of multiplication by a.
  bool is_unit(const FElem& a) const;

  std::uint64_t index(const FElem& a) const;
  FElem element(std::uint64_t index) const;

  // Image of an ambient element of the order the ring was built from.
  FElem from_ambient(std::span<const Int> v) const;
  // from_ambient(v) only depends on v modulo this number.
  Int ambient_modulus() const;

  // O / J for a full-rank sublattice J of O.
  static FiniteRing quotient(const OrderLattice& o, const Lattice& j);
  static FiniteRing from_table(std::vector<std::int64_t> orders, std::vector<std::vector<FElem>> table, FElem one);

 private:
  std::vector<std::int64_t> orders_;
  std::vector<std::vector<FElem>> table_;
  FElem one_;
  IntMatrix to_ring_;  // ambient coordinates times to_ring_ / to_ring_den_ give ring coordinates
  Int to_ring_den_ = 1;
};

enum class UnitStrategy { Auto, Enumerate, Local };

struct UnitGroupOptions {
  UnitStrategy strategy = UnitStrategy::Auto;
  std::uint64_t enumeration_bound = 1'000'000;
  std::uint64_t dlog_bound = 100'000;
  std::uint64_t seed = 0;
};

// Standard generating set of R^*.
class FiniteUnitGroup {
 public:
  const FiniteRing& ring() const { return *ring_; }
  const std::vector<FElem>& generators() const { return gens_; }
  const std::vector<Int>& orders() const { return orders_; }
  Int order() const;
  UnitStrategy strategy() const { return strategy_; }
  // Exponents over the standard generators, reduced; NotInSubgroup for non-units.
  std::vector<Int> discrete_log(const FElem& x) const;
  FElem evaluate(std::span<const Int> exps) const;

  struct Impl;
  FiniteUnitGroup(std::shared_ptr<const FiniteRing> ring, std::shared_ptr<const Impl> impl);

 private:
  std::shared_ptr<const FiniteRing> ring_;
  std::shared_ptr<const Impl> impl_;
  std::vector<FElem> gens_;
  std::vector<Int> orders_;
  UnitStrategy strategy_ = UnitStrategy::Auto;
};

FiniteUnitGroup unit_group(const FiniteRing& r, const UnitGroupOptions& opts = {});

// phi_1 : e1 O -> R and phi_2 : e2 O -> R with R = O / J = e2 O / (e2 O cap O).
struct PhiMaps {
  OrderSplit split;
  FiniteRing ring;
  FElem phi1(std::span<const Int> x) const;
  FElem phi2(std::span<const Int> y) const;
};

PhiMaps phi_maps(const OrderLattice& o, std::size_t k);

}  // namespace zgunits
