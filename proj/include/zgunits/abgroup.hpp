#pragma once

// Finite abelian groups given by invariant factors d1 | d2 | ... | dk.
//
// Elements are exponent vectors (g_1, ..., g_k) with 0 <= g_i < d_i and are
// indexed in lexicographic order, the first coordinate most significant.
// This index order is the coefficient order of every group ring element.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace zgunits {

struct GroupElement {
  std::vector<long> exponents;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

// A degree-one character: generator i is sent to zeta_m^(e_i * m / d_i).
struct Character {
  std::vector<long> image_exponents;  // e_i taken mod d_i
  long order = 1;
  friend bool operator==(const Character& a, const Character& b) {
    return a.image_exponents == b.image_exponents;
  }
};

struct CyclicSubgroup {
  long order = 1;
  std::size_t generator = 0;  // element index of the canonical generator
};

class AbelianGroup {
 public:
  AbelianGroup() : AbelianGroup(std::vector<long>{}) {}
  // Requires a divisibility chain of factors >= 2.
  explicit AbelianGroup(std::vector<long> invariant_factors);

  // Any list of cyclic orders; normalized to invariant factors.
  static AbelianGroup from_cyclic_orders(const std::vector<long>& orders);
  // "C2xC4" (case-insensitive) or "[2,4]".
  static AbelianGroup parse(std::string_view spec);

  const std::vector<long>& invariant_factors() const { return factors_; }
  long order() const { return order_; }
  long exponent() const { return factors_.empty() ? 1 : factors_.back(); }
  std::size_t num_factors() const { return factors_.size(); }
  std::string name() const;

  GroupElement element(std::size_t index) const;
  std::size_t index_of(const GroupElement& g) const;
  std::size_t identity() const { return 0; }
  std::size_t mul(std::size_t a, std::size_t b) const;
  std::size_t inverse(std::size_t a) const;
  std::size_t power(std::size_t a, long k) const;
  long element_order(std::size_t a) const;

  friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) { return a.factors_ == b.factors_; }

 private:
  std::vector<long> factors_;
  long order_ = 1;
};

// One entry per cyclic subgroup, sorted by (order, generator index).
std::vector<CyclicSubgroup> cyclic_subgroups(const AbelianGroup& g);

std::vector<Character> irreducible_characters(const AbelianGroup& g);
// chi(g) = zeta_m^s, returns s in [0, m) with m the exponent of the group.
long character_exponent(const AbelianGroup& g, const Character& chi, std::size_t element);
long character_order(const AbelianGroup& g, const std::vector<long>& image_exponents);

// Partition of character indices into orbits under chi -> chi^a, gcd(a, m) = 1.
// Orbits are listed by their smallest member index; members ascending.
std::vector<std::vector<std::size_t>> galois_orbits(const AbelianGroup& g, const std::vector<Character>& chars);

// (|G| + 1 + t_2 - 2 l) / 2 with t_2 the number of involutions and l the
// number of cyclic subgroups.
long ayoub_rank(const AbelianGroup& g);

// Every abelian group of order <= max_order, sorted by (order, factors).
std::vector<AbelianGroup> abelian_groups_up_to(long max_order);

long gcd_long(long a, long b);
long euler_phi(long n);
long mod_pow(long base, long exp, long mod);
std::vector<long> prime_factors(long n);  // distinct, ascending

}  // namespace zgunits
