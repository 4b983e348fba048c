#pragma once

// The rational group ring QG of a finite abelian group and its Wedderburn
// decomposition into cyclotomic fields, one per Galois orbit of characters.
//
// Coefficient i of an element belongs to the group element with index i in
// the lexicographic order of AbelianGroup.

#include <cstddef>
#include <string>
#include <vector>

#include "zgunits/abgroup.hpp"
#include "zgunits/cyclotomic.hpp"
#include "zgunits/lattice.hpp"

namespace zgunits {

class GroupRingElement {
 public:
  GroupRingElement() = default;
  static GroupRingElement zero(const AbelianGroup& g);
  static GroupRingElement one(const AbelianGroup& g);
  static GroupRingElement basis(const AbelianGroup& g, std::size_t element);
  static GroupRingElement from_coeffs(const AbelianGroup& g, std::vector<Rat> coeffs);
  static GroupRingElement from_int_coeffs(const AbelianGroup& g, const std::vector<Int>& coeffs);

  const AbelianGroup& group() const { return group_; }
  const std::vector<Rat>& coeffs() const { return coeffs_; }
  const Rat& coeff(std::size_t i) const { return coeffs_[i]; }
  std::size_t size() const { return coeffs_.size(); }
  bool is_integral() const;
  bool is_zero() const;
  bool is_one() const;
  // Integer coefficients; requires is_integral().
  std::vector<Int> int_coeffs() const;

  GroupRingElement operator-() const;
  friend GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b);
  friend GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b);
  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b);
  friend GroupRingElement operator*(const GroupRingElement& a, const Rat& c);
  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) = default;
  GroupRingElement pow(long e) const;  // e >= 0

  // "[c0,c1,...]" in element order.
  std::string to_string() const;

 private:
  AbelianGroup group_;
  std::vector<Rat> coeffs_;
};

// Table t with t[a * |G| + b] the index of the product of elements a and b.
const std::vector<std::size_t>& multiplication_table(const AbelianGroup& g);

struct ComponentMap {
  GroupRingElement idempotent;
  Character character;               // representative of the orbit
  std::vector<std::size_t> orbit;    // character indices
  long order = 1;                    // order of the character
  long conductor = 1;                // normalized conductor of Q(zeta_order)
  std::vector<long> exponents;       // chi(g) = zeta_order^exponents[g]
};

// One component per Galois orbit, ordered by the smallest character index.
std::vector<ComponentMap> primitive_idempotents(const AbelianGroup& g);

// (d, t_d): t_d components isomorphic to Q(zeta_d), by increasing d.
std::vector<std::pair<long, long>> decomposition(const AbelianGroup& g);

CycElt component_project(const ComponentMap& map, const GroupRingElement& a);
// The rational element whose projections are comps; ConductorMismatch when a
// component lies in the wrong field.
GroupRingElement component_lift(const AbelianGroup& g, const std::vector<ComponentMap>& maps,
                                const std::vector<CycElt>& comps);
// Inverse of a unit of ZG; NotAUnit otherwise.
GroupRingElement inverse_in_zg(const GroupRingElement& u);

// Trace from Q(zeta_n) to Q.
Rat cyc_trace(const CycElt& x);

}  // namespace zgunits
