#include "zgunits/abgroup.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

#include "zgunits/error.hpp"
#include "zgunits/lattice.hpp"

namespace zgunits {

long gcd_long(long a, long b) { return std::gcd(a, b); }

long euler_phi(long n) {
  long result = n;
  for (long p : prime_factors(n)) result = result / p * (p - 1);
  return result;
}

long mod_pow(long base, long exp, long mod) {
  if (mod == 1) return 0;
  __int128 result = 1, b = ((base % mod) + mod) % mod;
  while (exp > 0) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<long>(result);
}

std::vector<long> prime_factors(long n) {
  std::vector<long> out;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

AbelianGroup::AbelianGroup(std::vector<long> invariant_factors) : factors_(std::move(invariant_factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i] < 2) fail(ErrorKind::BadParameters, "invariant factors must be >= 2");
    if (i + 1 < factors_.size() && factors_[i + 1] % factors_[i] != 0)
      fail(ErrorKind::BadParameters, "invariant factors must form a divisibility chain");
  }
  for (long d : factors_) order_ *= d;
}

AbelianGroup AbelianGroup::from_cyclic_orders(const std::vector<long>& orders) {
  std::vector<Int> diag;
  for (long d : orders) {
    if (d < 1) fail(ErrorKind::BadParameters, "cyclic orders must be positive");
    diag.emplace_back(d);
  }
  auto s = snf(IntMatrix::diagonal(diag));
  std::vector<long> factors;
  for (const Int& d : s.diagonal())
    if (d > 1) factors.push_back(d.get_si());
  return AbelianGroup(factors);
}

namespace {

[[noreturn]] void parse_error(std::string_view spec, std::size_t pos, std::size_t len) {
  std::string token(spec.substr(pos, std::max<std::size_t>(len, 1)));
  fail(ErrorKind::ParseError, "cannot parse group spec '" + std::string(spec) + "' at token '" + token + "'");
}

long parse_positive(std::string_view spec, std::size_t& pos) {
  std::size_t start = pos;
  long value = 0;
  while (pos < spec.size() && std::isdigit(static_cast<unsigned char>(spec[pos]))) {
    value = value * 10 + (spec[pos] - '0');
    if (value > 1'000'000'000) parse_error(spec, start, pos - start + 1);
    ++pos;
  }
  if (pos == start || value == 0) parse_error(spec, start, pos - start);
  return value;
}

void skip_space(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

}  // namespace

AbelianGroup AbelianGroup::parse(std::string_view spec) {
  std::vector<long> orders;
  std::size_t pos = 0;
  skip_space(spec, pos);
  if (pos == spec.size()) parse_error(spec, 0, spec.size());
  if (spec[pos] == '[') {
    ++pos;
    skip_space(spec, pos);
    if (pos < spec.size() && spec[pos] == ']') {
      ++pos;
    } else {
      while (true) {
        skip_space(spec, pos);
        orders.push_back(parse_positive(spec, pos));
        skip_space(spec, pos);
        if (pos < spec.size() && spec[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < spec.size() && spec[pos] == ']') {
          ++pos;
          break;
        }
        parse_error(spec, pos, 1);
      }
    }
  } else {
    while (true) {
      skip_space(spec, pos);
      if (pos >= spec.size() || std::toupper(static_cast<unsigned char>(spec[pos])) != 'C') parse_error(spec, pos, 1);
      ++pos;
      orders.push_back(parse_positive(spec, pos));
      skip_space(spec, pos);
      if (pos < spec.size() && std::tolower(static_cast<unsigned char>(spec[pos])) == 'x') {
        ++pos;
        continue;
      }
      break;
    }
  }
  skip_space(spec, pos);
  if (pos != spec.size()) parse_error(spec, pos, spec.size() - pos);
  return from_cyclic_orders(orders);
}

std::string AbelianGroup::name() const {
  if (factors_.empty()) return "C1";
  std::string s;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) s += 'x';
    s += 'C' + std::to_string(factors_[i]);
  }
  return s;
}

GroupElement AbelianGroup::element(std::size_t index) const {
  GroupElement g{std::vector<long>(factors_.size())};
  for (std::size_t i = factors_.size(); i-- > 0;) {
    g.exponents[i] = static_cast<long>(index % factors_[i]);
    index /= factors_[i];
  }
  return g;
}

std::size_t AbelianGroup::index_of(const GroupElement& g) const {
  if (g.exponents.size() != factors_.size()) fail(ErrorKind::GroupMismatch, "element has wrong length");
  std::size_t index = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    long e = ((g.exponents[i] % factors_[i]) + factors_[i]) % factors_[i];
    index = index * factors_[i] + static_cast<std::size_t>(e);
  }
  return index;
}

std::size_t AbelianGroup::mul(std::size_t a, std::size_t b) const {
  std::size_t result = 0, stride = 1;
  for (std::size_t i = factors_.size(); i-- > 0;) {
    const std::size_t d = factors_[i];
    std::size_t ea = a % d, eb = b % d;
    result += ((ea + eb) % d) * stride;
    stride *= d;
    a /= d;
    b /= d;
  }
  return result;
}

std::size_t AbelianGroup::inverse(std::size_t a) const {
  std::size_t result = 0, stride = 1;
  for (std::size_t i = factors_.size(); i-- > 0;) {
    const std::size_t d = factors_[i];
    result += ((d - a % d) % d) * stride;
    stride *= d;
    a /= d;
  }
  return result;
}

std::size_t AbelianGroup::power(std::size_t a, long k) const {
  auto g = element(a);
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    g.exponents[i] = static_cast<long>((static_cast<__int128>(g.exponents[i]) * k % factors_[i] + factors_[i]) %
                                       factors_[i]);
  }
  return index_of(g);
}

long AbelianGroup::element_order(std::size_t a) const {
  auto g = element(a);
  long ord = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    long d = factors_[i];
    long o = d / std::gcd(d, g.exponents[i]);
    ord = std::lcm(ord, o);
  }
  return ord;
}

std::vector<CyclicSubgroup> cyclic_subgroups(const AbelianGroup& g) {
  std::vector<CyclicSubgroup> out;
  std::vector<bool> seen(static_cast<std::size_t>(g.order()), false);
  // Ascending index order means the first generator met is the
  // lexicographically smallest one of its subgroup.
  for (std::size_t x = 0; x < static_cast<std::size_t>(g.order()); ++x) {
    if (seen[x]) continue;
    long ord = g.element_order(x);
    for (long a = 1; a <= ord; ++a)
      if (std::gcd(a, ord) == 1) seen[g.power(x, a)] = true;
    out.push_back({ord, x});
  }
  std::stable_sort(out.begin(), out.end(), [](const CyclicSubgroup& a, const CyclicSubgroup& b) {
    return a.order < b.order;
  });
  return out;
}

long character_order(const AbelianGroup& g, const std::vector<long>& e) {
  const long m = g.exponent();
  long gg = m;
  for (std::size_t i = 0; i < e.size(); ++i) gg = std::gcd(gg, (e[i] * (m / g.invariant_factors()[i])) % m);
  return m / gg;
}

std::vector<Character> irreducible_characters(const AbelianGroup& g) {
  std::vector<Character> out;
  out.reserve(static_cast<std::size_t>(g.order()));
  // Characters are enumerated in the same lexicographic order as elements.
  for (std::size_t idx = 0; idx < static_cast<std::size_t>(g.order()); ++idx) {
    Character chi{g.element(idx).exponents, 1};
    chi.order = character_order(g, chi.image_exponents);
    out.push_back(std::move(chi));
  }
  return out;
}

long character_exponent(const AbelianGroup& g, const Character& chi, std::size_t element) {
  const long m = g.exponent();
  auto x = g.element(element);
  long s = 0;
  for (std::size_t i = 0; i < x.exponents.size(); ++i) {
    long step = (chi.image_exponents[i] * (m / g.invariant_factors()[i])) % m;
    s = static_cast<long>((s + static_cast<__int128>(step) * x.exponents[i]) % m);
  }
  return s;
}

std::vector<std::vector<std::size_t>> galois_orbits(const AbelianGroup& g, const std::vector<Character>& chars) {
  const long m = g.exponent();
  std::map<std::vector<long>, std::size_t> index;
  for (std::size_t i = 0; i < chars.size(); ++i) index[chars[i].image_exponents] = i;
  std::vector<bool> seen(chars.size(), false);
  std::vector<std::vector<std::size_t>> orbits;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> orbit;
    for (long a = 1; a <= m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      std::vector<long> e = chars[i].image_exponents;
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = (e[k] * a) % g.invariant_factors()[k];
      auto it = index.find(e);
      if (it == index.end()) fail(ErrorKind::Internal, "incomplete character list");
      if (!seen[it->second]) {
        seen[it->second] = true;
        orbit.push_back(it->second);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

namespace {

void extend_chains(long remaining, std::vector<long>& chain, std::vector<std::vector<long>>& out) {
  if (remaining == 1) {
    out.push_back(chain);
    return;
  }
  // Build the chain from the largest factor down: each new factor divides the previous one.
  long bound = chain.empty() ? remaining : chain.back();
  for (long d = 2; d <= bound; ++d) {
    if (remaining % d || (!chain.empty() && chain.back() % d)) continue;
    chain.push_back(d);
    extend_chains(remaining / d, chain, out);
    chain.pop_back();
  }
}

}  // namespace

std::vector<AbelianGroup> abelian_groups_up_to(long max_order) {
  std::vector<AbelianGroup> out;
  for (long n = 1; n <= max_order; ++n) {
    std::vector<std::vector<long>> chains;
    std::vector<long> chain;
    extend_chains(n, chain, chains);
    std::vector<std::vector<long>> normalized;
    for (auto& c : chains) {
      std::reverse(c.begin(), c.end());
      normalized.push_back(c);
    }
    std::sort(normalized.begin(), normalized.end());
    for (auto& c : normalized) out.emplace_back(c);
  }
  return out;
}

long ayoub_rank(const AbelianGroup& g) {
  long t2 = 0;
  for (std::size_t x = 0; x < static_cast<std::size_t>(g.order()); ++x)
    if (g.element_order(x) == 2) ++t2;
  long l = static_cast<long>(cyclic_subgroups(g).size());
  return (g.order() + 1 + t2 - 2 * l) / 2;
}

}  // namespace zgunits
