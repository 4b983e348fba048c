#pragma once

// Generators of the unit group of Z[zeta_n] for phi(n) < 66.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "zgunits/cyclotomic.hpp"
#include "zgunits/lattice.hpp"

namespace zgunits {

struct UnitGroupDesc {
  long conductor = 1;
  CycElt torsion_gen;
  long torsion_order = 2;
  std::vector<CycElt> free_gens;
  std::vector<CycElt> free_inverses;
  // False when saturation was skipped and the group may be a proper subgroup.
  bool complete = true;
  std::size_t rank() const { return free_gens.size(); }
};

// u = torsion_gen^torsion * prod free_gens[i]^free[i]
struct UnitLog {
  long torsion = 0;
  std::vector<Int> free;
};

// xi_a = zeta^((1-a)/2) (1 - zeta^a) / (1 - zeta) for a prime power n.
CycElt xi_prime_power(long n, long a);

// A lift of the norm elements N_{F_i} for each prime power p_i^e_i || n.
// Group ring elements of Gal(Q(zeta_n)/Q) are maps a -> multiplicity.
struct BetaMap {
  long n = 1;
  std::vector<long> primes;
  std::vector<long> prime_powers;
  std::vector<std::map<long, long>> beta;
};

// The lift sends F_i^k to a with a = +-p_i^k mod n/p_i^e_i and a = local_residue
// mod p_i^e_i; the sign is + unless negate is set.
BetaMap greither_beta(long n, long local_residue = 1, bool negate = false);

// xi_a(beta) = zeta^(d_a) sigma_a(z(beta)) / z(beta) with z = zeta_n.
CycElt greither_xi(long n, long a, const BetaMap& beta);

struct RamData {
  long p = 0;
  long e = 1;
  long f = 1;
  long g = 1;
};

// Ramification, inertia and decomposition numbers of p in Q(zeta_n)^+.
RamData ramification_data(long n, long p);
// prod e_i^(g_i - 1) f_i^(2 g_i - 1) over the primes dividing n.
long index_i_beta(long n);

struct SaturationOptions {
  unsigned precision = kDefaultPrecision;
  std::uint64_t seed = 0;
  std::size_t max_candidates = 1'000'000;
  int stable_primes = 5;
};

// Enlarges v so that p does not divide the index in the full unit group.
UnitGroupDesc saturate_at_p(const UnitGroupDesc& v, long p, const SaturationOptions& opts = {});

// y with y^p = w exactly, if w is a p-th power in Q(zeta_n).
std::optional<CycElt> pth_root(const CycElt& w, long p, unsigned precision = kDefaultPrecision);

struct FullUnitOptions {
  bool saturate = true;
  SaturationOptions saturation;
};

// Complete description of Z[zeta_n]^*; results are cached per conductor.
// Throws UnsupportedConductor when phi(n) >= 66.
UnitGroupDesc full_unit_group(long n, const FullUnitOptions& opts = {});
bool conductor_supported(long n);

// Discrete logarithm in the group described by desc; NotInSubgroup otherwise.
UnitLog unit_log(const UnitGroupDesc& desc, const CycElt& u, unsigned precision = kDefaultPrecision);
CycElt unit_from_log(const UnitGroupDesc& desc, const UnitLog& log);

// |log regulator| of the free generators, for cross-checks.
Real regulator(const UnitGroupDesc& desc, unsigned precision = kDefaultPrecision);

}  // namespace zgunits
