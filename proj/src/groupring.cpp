#include "zgunits/groupring.hpp"

#include <map>
#include <numeric>
#include <memory>
#include <mutex>

#include "zgunits/error.hpp"

namespace zgunits {

namespace {

void check_same(const GroupRingElement& a, const GroupRingElement& b) {
  if (!(a.group() == b.group())) fail(ErrorKind::GroupMismatch, "group ring elements of different groups");
}

long moebius(long n) {
  long result = 1;
  for (long p : prime_factors(n)) {
    if ((n / p) % p == 0) return 0;
    result = -result;
  }
  return result;
}

// Ramanujan sum: trace of zeta_n^j.
long ramanujan_sum(long n, long j) {
  const long g = std::gcd(n, ((j % n) + n) % n);
  const long q = n / g;
  return moebius(q) * (euler_phi(n) / euler_phi(q));
}

const std::vector<ComponentMap>& cached_components(const AbelianGroup& g) {
  static std::mutex mutex;
  static std::map<std::vector<long>, std::unique_ptr<std::vector<ComponentMap>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[g.invariant_factors()];
  if (!slot) slot = std::make_unique<std::vector<ComponentMap>>(primitive_idempotents(g));
  return *slot;
}

}  // namespace

GroupRingElement GroupRingElement::zero(const AbelianGroup& g) {
  GroupRingElement a;
  a.group_ = g;
  a.coeffs_.assign(static_cast<std::size_t>(g.order()), Rat(0));
  return a;
}

GroupRingElement GroupRingElement::one(const AbelianGroup& g) { return basis(g, g.identity()); }

GroupRingElement GroupRingElement::basis(const AbelianGroup& g, std::size_t element) {
  GroupRingElement a = zero(g);
  a.coeffs_.at(element) = 1;
  return a;
}

GroupRingElement GroupRingElement::from_coeffs(const AbelianGroup& g, std::vector<Rat> coeffs) {
  if (coeffs.size() != static_cast<std::size_t>(g.order()))
    fail(ErrorKind::BadParameters, "expected " + std::to_string(g.order()) + " coefficients");
  GroupRingElement a;
  a.group_ = g;
  a.coeffs_ = std::move(coeffs);
  for (auto& c : a.coeffs_) c.canonicalize();
  return a;
}

GroupRingElement GroupRingElement::from_int_coeffs(const AbelianGroup& g, const std::vector<Int>& coeffs) {
  return from_coeffs(g, std::vector<Rat>(coeffs.begin(), coeffs.end()));
}

bool GroupRingElement::is_integral() const {
  for (const auto& c : coeffs_)
    if (c.get_den() != 1) return false;
  return true;
}

bool GroupRingElement::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool GroupRingElement::is_one() const { return *this == one(group_); }

std::vector<Int> GroupRingElement::int_coeffs() const {
  if (!is_integral()) fail(ErrorKind::BadParameters, "group ring element is not integral");
  std::vector<Int> out;
  for (const auto& c : coeffs_) out.push_back(c.get_num());
  return out;
}

GroupRingElement GroupRingElement::operator-() const {
  GroupRingElement a = *this;
  for (auto& c : a.coeffs_) c = -c;
  return a;
}

GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b) {
  check_same(a, b);
  GroupRingElement c = a;
  for (std::size_t i = 0; i < c.coeffs_.size(); ++i) c.coeffs_[i] += b.coeffs_[i];
  return c;
}

GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b) { return a + (-b); }

GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
  check_same(a, b);
  const std::size_t n = a.coeffs_.size();
  const auto& table = multiplication_table(a.group_);
  GroupRingElement c = GroupRingElement::zero(a.group_);
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b.coeffs_[j] == 0) continue;
      c.coeffs_[table[i * n + j]] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return c;
}

GroupRingElement operator*(const GroupRingElement& a, const Rat& s) {
  GroupRingElement c = a;
  for (auto& x : c.coeffs_) x *= s;
  return c;
}

GroupRingElement GroupRingElement::pow(long e) const {
  if (e < 0) fail(ErrorKind::BadParameters, "negative power of a group ring element");
  GroupRingElement result = one(group_), base = *this;
  for (; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    base = base * base;
  }
  return result;
}

std::string GroupRingElement::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) s += ",";
    s += coeffs_[i].get_str();
  }
  return s + "]";
}

const std::vector<std::size_t>& multiplication_table(const AbelianGroup& g) {
  static std::mutex mutex;
  static std::map<std::vector<long>, std::unique_ptr<std::vector<std::size_t>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[g.invariant_factors()];
  if (!slot) {
    const std::size_t n = static_cast<std::size_t>(g.order());
    slot = std::make_unique<std::vector<std::size_t>>(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) (*slot)[a * n + b] = g.mul(a, b);
  }
  return *slot;
}

std::vector<ComponentMap> primitive_idempotents(const AbelianGroup& g) {
  const auto chars = irreducible_characters(g);
  const auto orbits = galois_orbits(g, chars);
  const std::size_t n = static_cast<std::size_t>(g.order());
  const long m = g.exponent();
  std::vector<ComponentMap> maps;
  for (const auto& orbit : orbits) {
    ComponentMap c;
    c.orbit = orbit;
    c.character = chars[orbit.front()];
    c.order = c.character.order;
    c.conductor = normalize_conductor(c.order);
    std::vector<Rat> coeffs(n);
    for (std::size_t x = 0; x < n; ++x) {
      const long s = character_exponent(g, c.character, x) / (m / c.order);
      c.exponents.push_back(s);
      // Sum over the orbit of chi(x^-1) is the trace of zeta_d^-s.
      coeffs[x] = Rat(ramanujan_sum(c.order, -s), g.order());
    }
    c.idempotent = GroupRingElement::from_coeffs(g, std::move(coeffs));
    maps.push_back(std::move(c));
  }
  return maps;
}

std::vector<std::pair<long, long>> decomposition(const AbelianGroup& g) {
  std::map<long, long> counts;
  for (const auto& c : cyclic_subgroups(g)) ++counts[c.order];
  return {counts.begin(), counts.end()};
}

CycElt component_project(const ComponentMap& map, const GroupRingElement& a) {
  if (a.size() != map.exponents.size()) fail(ErrorKind::GroupMismatch, "component map of a different group");
  Int den = 1;
  for (const auto& c : a.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Int> sums(static_cast<std::size_t>(map.order), 0);
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (a.coeff(x) == 0) continue;
    sums[static_cast<std::size_t>(map.exponents[x])] += a.coeff(x).get_num() * (den / a.coeff(x).get_den());
  }
  return CycElt::from_power_sum(map.order, sums, den);
}

Rat cyc_trace(const CycElt& x) {
  const long n = x.conductor();
  Rat t = 0;
  for (std::size_t j = 0; j < x.degree(); ++j)
    if (x.numerators()[j] != 0) t += Rat(x.numerators()[j] * ramanujan_sum(n, static_cast<long>(j)));
  return t / Rat(x.denominator());
}

GroupRingElement component_lift(const AbelianGroup& g, const std::vector<ComponentMap>& maps,
                                const std::vector<CycElt>& comps) {
  if (comps.size() != maps.size()) fail(ErrorKind::BadParameters, "one component value per component is required");
  const std::size_t n = static_cast<std::size_t>(g.order());
  std::vector<Rat> coeffs(n, Rat(0));
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto& map = maps[i];
    if (comps[i].conductor() != map.conductor)
      fail(ErrorKind::ConductorMismatch, "component " + std::to_string(i) + " lies in the wrong field");
    if (comps[i].is_zero()) continue;
    // a_x = Tr(c * zeta_d^-s(x)) / |G|, computed once per exponent.
    std::map<long, Rat> traces;
    for (std::size_t x = 0; x < n; ++x) {
      const long s = map.exponents[x];
      auto it = traces.find(s);
      if (it == traces.end()) it = traces.emplace(s, cyc_trace(comps[i] * CycElt::zeta(map.order, -s))).first;
      coeffs[x] += it->second;
    }
  }
  for (auto& c : coeffs) c /= g.order();
  return GroupRingElement::from_coeffs(g, std::move(coeffs));
}

GroupRingElement inverse_in_zg(const GroupRingElement& u) {
  if (!u.is_integral()) fail(ErrorKind::NotAUnit, "element is not integral");
  const AbelianGroup& g = u.group();
  const auto& maps = cached_components(g);
  std::vector<CycElt> inv;
  for (const auto& m : maps) inv.push_back(unit_inverse(component_project(m, u)));
  GroupRingElement v = component_lift(g, maps, inv);
  if (!v.is_integral()) fail(ErrorKind::NotAUnit, "inverse is not integral");
  if (!(u * v).is_one()) fail(ErrorKind::Internal, "group ring inverse failed to verify");
  return v;
}

}  // namespace zgunits
