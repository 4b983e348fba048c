#pragma once

// Constructable units u_{i,j}(x) = s_l(x^i) s_i(x^j) - k s_n(x) of cyclic
// subgroups, the group they generate together with +-G, and its index in
// (ZG)^*.

#include <cstddef>
#include <optional>
#include <vector>

#include "zgunits/abgroup.hpp"
#include "zgunits/groupring.hpp"
#include "zgunits/merge.hpp"

namespace zgunits {

struct ConstructableUnit {
  std::size_t x = 0;  // element index of the generator of the cyclic subgroup
  long n = 1;
  long i = 1, j = 1, l = 1, k = 0;  // l i = 1 + k n
  GroupRingElement element;
};

// s_m(y) = 1 + y + ... + y^(m-1).
GroupRingElement geometric_sum(const AbelianGroup& g, std::size_t y, long m);

// u_{i,j}(x) for x of order n; BadParameters unless l i = 1 mod n.
ConstructableUnit constructable_unit(const AbelianGroup& g, std::size_t x, long i, long j, long l);

// All u_{i,j}(x) with 0 < i, j < n coprime to n = ord(x) > 2. l is the least
// positive inverse of i modulo n, plus l_shift * n.
std::vector<ConstructableUnit> hoechsmann_units_cyclic(const AbelianGroup& g, std::size_t x, long l_shift = 0);

// Generators of the constructable group: -1, generators of G, and the
// distinct nontrivial u_{i,j} over the canonical generators of the cyclic
// subgroups of order > 2.
std::vector<GroupRingElement> constructable_group(const AbelianGroup& g, long l_shift = 0);

struct HoechsmannResult {
  std::optional<Int> index;  // nullopt when the index is infinite
  std::size_t num_generators = 0;
  std::size_t rank = 0;      // rank of (ZG)^*
  std::size_t constructable_rank = 0;
  double seconds = 0;
};

struct HoechsmannOptions {
  MergeOptions merge;
  long l_shift = 0;
};

// Index of the constructable group in (ZG)^*, from the discrete logarithms of
// the constructable units in the exponent lattice of (ZG)^*.
HoechsmannResult hoechsmann_index(const AbelianGroup& g, const HoechsmannOptions& opts = {});
HoechsmannResult hoechsmann_index(const ZGUnitGroup& units, const HoechsmannOptions& opts = {});

// The same index from the multiplicative relation lattice of the
// concatenation (constructable generators, full generators). Much slower.
std::optional<Int> hoechsmann_index_by_relations(const ZGUnitGroup& units, long l_shift = 0);

}  // namespace zgunits
