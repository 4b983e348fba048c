#include "zgunits/cycunits.hpp"

#include <algorithm>
#include <future>
#include <mutex>
#include <numeric>
#include <random>
#include <tuple>

#include "zgunits/abgroup.hpp"
#include "zgunits/error.hpp"
#include "zgunits/relations.hpp"

namespace zgunits {

namespace {

long mod(long a, long m) { return ((a % m) + m) % m; }

long mod_inverse(long a, long m) {
  long r0 = m, r1 = mod(a, m), s0 = 0, s1 = 1;
  while (r1 != 0) {
    const long q = r0 / r1;
    std::tie(r0, r1) = std::pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::pair(s1, s0 - q * s1);
  }
  if (r0 != 1) fail(ErrorKind::NotCoprime, std::to_string(a) + " is not invertible modulo " + std::to_string(m));
  return mod(s0, m);
}

// x with x = a mod m1 and x = b mod m2 for coprime m1, m2.
long crt(long a, long m1, long b, long m2) {
  const long t = mod((b - a) % m2 * mod_inverse(m1, m2), m2);
  return mod(a + m1 * t, m1 * m2);
}

bool is_prime_power(long n, long* prime = nullptr) {
  if (n < 2) return false;
  auto ps = prime_factors(n);
  if (ps.size() != 1) return false;
  if (prime) *prime = ps.front();
  return true;
}

// 1 + x + ... + x^(a-1) with x = zeta_n^k.
CycElt geometric_sum(long n, long k, long a) {
  std::vector<Int> c(static_cast<std::size_t>(n), 0);
  for (long j = 0; j < a; ++j) c[static_cast<std::size_t>(mod(j * k, n))] += 1;
  return CycElt::from_power_sum(n, c);
}

using GroupRingElt = std::map<long, long>;

GroupRingElt gr_mul(const GroupRingElt& x, const GroupRingElt& y, long n) {
  GroupRingElt out;
  for (const auto& [a, ca] : x)
    for (const auto& [b, cb] : y) out[a * b % n] += ca * cb;
  return out;
}

}  // namespace

CycElt xi_prime_power(long n, long a) {
  long p = 0;
  if (normalize_conductor(n) != n || !is_prime_power(n, &p) || n < 3)
    fail(ErrorKind::BadParameters, "conductor " + std::to_string(n) + " is not a prime power above 2");
  if (a < 1 || a % p == 0) fail(ErrorKind::BadParameters, "exponent " + std::to_string(a) + " is not a positive unit");
  return zeta_half_power(n, 1 - a) * geometric_sum(n, 1, a);
}

BetaMap greither_beta(long n, long local_residue, bool negate) {
  if (normalize_conductor(n) != n || n < 3 || is_prime_power(n))
    fail(ErrorKind::BadParameters, "conductor " + std::to_string(n) + " must be composite and not 2 mod 4");
  BetaMap b;
  b.n = n;
  for (long p : prime_factors(n)) {
    long q = 1;
    while (n % (q * p) == 0) q *= p;
    if (local_residue % p == 0)
      fail(ErrorKind::BadParameters, "local residue is not a unit modulo " + std::to_string(q));
    const long m = n / q;
    long o = 1, pk = p % m;
    while (pk != 1 && pk != m - 1) {
      pk = pk * p % m;
      ++o;
    }
    std::map<long, long> beta;
    long r = 1;
    for (long k = 0; k < o; ++k, r = r * p % m) beta[crt(negate ? mod(-r, m) : r, m, mod(local_residue, q), q)] += 1;
    b.primes.push_back(p);
    b.prime_powers.push_back(q);
    b.beta.push_back(std::move(beta));
  }
  return b;
}

CycElt greither_xi(long n, long a, const BetaMap& beta) {
  if (beta.n != n) fail(ErrorKind::ConductorMismatch, "beta map belongs to another conductor");
  if (a <= 1 || gcd_long(a, n) != 1) fail(ErrorKind::BadParameters, "exponent must exceed 1 and be prime to n");
  const std::size_t s = beta.primes.size();
  CycElt ratio = CycElt::one(n);
  long t_sum = 0;  // T = sum_b m_b b with t = sum_b m_b sigma_b
  for (unsigned mask = 0; mask + 1 < (1u << s); ++mask) {
    GroupRingElt bi{{1, 1}};
    long n_i = 1;
    for (std::size_t i = 0; i < s; ++i)
      if (mask & (1u << i)) {
        bi = gr_mul(bi, beta.beta[i], n);
        n_i *= beta.prime_powers[i];
      }
    for (const auto& [b, c] : bi) {
      if (c == 0) continue;
      // sigma_a(1 - x) / (1 - x) with x = zeta^(b n_I)
      CycElt g = geometric_sum(n, b * n_i % n, a);
      ratio *= c > 0 ? g.pow(c) : unit_inverse(g).pow(-c);
      t_sum = mod(t_sum - n_i * c % (2 * n) * b, 2 * n);
    }
  }
  return zeta_half_power(n, mod((1 - a) * t_sum, 2 * n)) * ratio;
}

RamData ramification_data(long n, long p) {
  if (normalize_conductor(n) != n || n < 3 || n % p != 0 || prime_factors(p).size() != 1 || prime_factors(p)[0] != p)
    fail(ErrorKind::BadParameters, "ramification data needs a prime dividing a conductor above 2");
  long pk = 1;
  while (n % (pk * p) == 0) pk *= p;
  const long m = n / pk;
  RamData d;
  d.p = p;
  d.e = euler_phi(pk);
  d.f = 1;
  if (m > 1) {
    long x = p % m;
    while (x != 1) {
      x = x * p % m;
      ++d.f;
    }
  }
  d.g = euler_phi(m) / d.f;
  // Descend from Q(zeta_n) to its real subfield, of index 2.
  bool minus_one = false;
  if (m > 2) {
    long x = 1;
    for (long k = 0; k < d.f; ++k, x = x * p % m) minus_one = minus_one || x == m - 1;
  }
  if (m <= 2)
    d.e /= 2;
  else if (minus_one)
    d.f /= 2;
  else
    d.g /= 2;
  return d;
}

long index_i_beta(long n) {
  if (normalize_conductor(n) != n || n < 3 || is_prime_power(n))
    fail(ErrorKind::BadParameters, "conductor must be composite and not 2 mod 4");
  long result = 1;
  for (long p : prime_factors(n)) {
    RamData d = ramification_data(n, p);
    for (long k = 0; k < d.g - 1; ++k) result *= d.e;
    for (long k = 0; k < 2 * d.g - 1; ++k) result *= d.f;
  }
  return result;
}

namespace {

struct Cx {
  Real re = 0;
  Real im = 0;
};

Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
Cx operator*(const Cx& a, const Cx& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
Cx operator/(const Cx& a, const Cx& b) {
  const Real d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
Real abs2(const Cx& a) { return a.re * a.re + a.im * a.im; }
Cx polar(const Real& r, const Real& theta) { return {r * cos(theta), r * sin(theta)}; }

// Columns of E^-1 for the representative embeddings, where E(a, i) = zeta^(a i)
// over all a prime to n. Coefficients of x are sum_a 2 Re(col_a sigma_a(x)).
std::vector<std::vector<Cx>> inverse_embedding_columns(const CycField& f) {
  const std::size_t phi = f.phi;
  std::vector<long> all;
  for (long a : f.embedding_reps) all.push_back(a);
  for (long a : f.embedding_reps)
    if (f.n - a != a && f.n > 2) all.push_back(f.n - a);
  const Real two_pi = 4 * acos(Real(0));
  std::vector<std::vector<Cx>> m(phi, std::vector<Cx>(2 * phi));
  for (std::size_t r = 0; r < phi; ++r) {
    for (std::size_t i = 0; i < phi; ++i)
      m[r][i] = polar(Real(1), two_pi * Real(all[r] * static_cast<long>(i) % f.n) / Real(f.n));
    m[r][phi + r] = {1, 0};
  }
  for (std::size_t c = 0; c < phi; ++c) {
    std::size_t best = c;
    for (std::size_t r = c + 1; r < phi; ++r)
      if (abs2(m[r][c]) > abs2(m[best][c])) best = r;
    std::swap(m[c], m[best]);
    const Cx piv = m[c][c];
    for (auto& x : m[c]) x = x / piv;
    for (std::size_t r = 0; r < phi; ++r) {
      if (r == c) continue;
      const Cx factor = m[r][c];
      for (std::size_t j = c; j < 2 * phi; ++j) m[r][j] = m[r][j] - factor * m[c][j];
    }
  }
  std::vector<std::vector<Cx>> cols(f.embedding_reps.size(), std::vector<Cx>(phi));
  for (std::size_t k = 0; k < f.embedding_reps.size(); ++k)
    for (std::size_t i = 0; i < phi; ++i) cols[k][i] = m[i][phi + k];
  return cols;
}

}  // namespace

namespace {

bool is_prime(long q) {
  if (q < 2) return false;
  for (long d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

Int powm(const Int& b, const Int& e, const Int& m) {
  Int r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int invm(const Int& a, const Int& m) {
  Int r;
  if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t())) fail(ErrorKind::Internal, "not invertible");
  return r;
}

Int horner(const std::vector<Int>& c, const Int& x, const Int& m) {
  Int acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = acc * x + c[i];
    mpz_fdiv_r(acc.get_mpz_t(), acc.get_mpz_t(), m.get_mpz_t());
  }
  return acc;
}

// Newton iteration for a simple root of f mod q^e, starting from a root mod q.
template <class F, class DF>
Int hensel_lift(Int r, const Int& q, long e, F f, DF df) {
  Int mod = q;
  long have = 1;
  while (have < e) {
    have = std::min(2 * have, e);
    mod = 1;
    mpz_pow_ui(mod.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(have));
    r = r - f(r, mod) * invm(df(r, mod), mod);
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  }
  return r;
}

// A prime q = 1 mod n with q not dividing p, and a root of Phi_n mod q.
struct SplitPrime {
  long q;
  long a;
};

std::vector<SplitPrime> split_primes(long n, long p, std::size_t count) {
  std::vector<SplitPrime> out;
  const auto qs = prime_factors(n);
  for (long q = n + 1; out.size() < count; q += n) {
    if (!is_prime(q) || q == p) continue;
    for (long t = 2; t < q; ++t) {
      const long a = mod_pow(t, (q - 1) / n, q);
      bool primitive = true;
      for (long r : qs) primitive = primitive && mod_pow(a, n / r, q) != 1;
      if (n == 1 || primitive) {
        out.push_back({q, a});
        break;
      }
    }
  }
  return out;
}

// y with y^p = w for integral w, by lifting a root modulo a degree-one prime
// above q and recovering the short representative with LLL.
std::optional<CycElt> pth_root_integral(const CycElt& w, long p, unsigned precision) {
  const CycField& f = w.field();
  const long n = f.n;
  const std::size_t phi = f.phi;
  std::vector<Int> phi_poly(f.cyclotomic.begin(), f.cyclotomic.end());
  std::vector<Int> dphi;
  for (std::size_t i = 1; i < phi_poly.size(); ++i) dphi.push_back(phi_poly[i] * static_cast<long>(i));

  // Power residue tests at several split primes.
  const auto primes = split_primes(n, p, 6);
  for (const auto& sp : primes) {
    const Int q = sp.q;
    const Int s = horner(w.numerators(), sp.a, q);
    if (s == 0) continue;
    const long g = gcd_long(p, sp.q - 1);
    if (powm(s, (sp.q - 1) / g, q) != 1) return std::nullopt;
  }

  // Coefficient bound from the absolute values of the conjugates of the root.
  double bound = 1;
  {
    auto emb = embeddings(w, precision);
    PrecisionScope scope(precision + 10);
    auto cols = inverse_embedding_columns(f);
    const Real factor = f.n > 2 ? Real(2) : Real(1);
    for (std::size_t i = 0; i < phi; ++i) {
      Real b = 0;
      for (std::size_t k = 0; k < f.embedding_reps.size(); ++k) {
        const Real r = pow(sqrt(abs2(Cx{emb[k].re, emb[k].im})), Real(1) / Real(p));
        b += factor * sqrt(abs2(cols[k][i])) * r;
      }
      bound = std::max(bound, b.convert_to<double>());
    }
  }
  const double target_bits = std::log2(std::sqrt(static_cast<double>(phi)) * bound + 1) + 2;
  const double proven_bits = static_cast<double>(phi) * (target_bits + static_cast<double>(phi) / 2 + 2);

  const SplitPrime sp = [&] {
    for (const auto& c : primes)
      if (horner(w.numerators(), c.a, Int(c.q)) != 0) return c;
    fail(ErrorKind::Internal, "no split prime prime to the element");
  }();
  const Int q = sp.q;
  std::vector<Int> roots;
  {
    const Int s = horner(w.numerators(), sp.a, q);
    for (long r = 1; r < sp.q; ++r)
      if (powm(Int(r), p, q) == s) roots.emplace_back(r);
  }
  if (roots.empty()) return std::nullopt;

  const double qbits = std::log2(static_cast<double>(sp.q));
  long e = std::max(2L, static_cast<long>(std::ceil((static_cast<double>(phi) * target_bits + 20) / qbits)));
  const long e_max = static_cast<long>(std::ceil(proven_bits / qbits)) + 1;
  while (true) {
    Int mod;
    mpz_pow_ui(mod.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(e));
    const Int a = hensel_lift(
        Int(sp.a), q, e, [&](const Int& x, const Int& m) -> Int { return horner(phi_poly, x, m); },
        [&](const Int& x, const Int& m) -> Int { return horner(dphi, x, m); });
    const Int s = horner(w.numerators(), a, mod);
    // Basis of the ideal (q^e, zeta - a) with an extra column for the target.
    const Int weight = Int(static_cast<long>(std::ceil(std::sqrt(static_cast<double>(phi)) * bound))) + 1;
    IntMatrix base(phi, phi + 1);
    base(0, 0) = mod;
    Int ai = 1;
    for (std::size_t i = 1; i < phi; ++i) {
      ai = ai * a % mod;
      base(i, 0) = (mod - ai) % mod;
      base(i, i) = 1;
    }
    for (const auto& r0 : roots) {
      const Int r = hensel_lift(
          r0, q, e, [&](const Int& x, const Int& m) -> Int { return (powm(x, p, m) - s) % m; },
          [&](const Int& x, const Int& m) -> Int { return Int(p) * powm(x, p - 1, m) % m; });
      IntMatrix m = base;
      std::vector<Int> t(phi + 1, 0);
      t[0] = r;
      t[phi] = weight;
      m.append_row(t);
      IntMatrix red = lll_reduce(m);
      for (std::size_t i = 0; i < red.rows(); ++i) {
        const Int& last = red(i, phi);
        if (abs(last) != weight) continue;
        std::vector<Int> c(red.row(i).begin(), red.row(i).begin() + static_cast<long>(phi));
        if (last < 0)
          for (auto& x : c) x = -x;
        CycElt y = CycElt::from_int_coeffs(n, c);
        if (y.pow(p) == w) return y;
      }
    }
    if (e >= e_max) return std::nullopt;
    e = std::min(2 * e, e_max);
  }
}

std::optional<CycElt> pth_root_at(const CycElt& w, long p, unsigned precision) {
  const long n = w.conductor();
  const CycField& f = w.field();
  if (p < 2 || w.is_zero()) fail(ErrorKind::BadParameters, "p-th roots need p >= 2 and a nonzero element");
  if (f.phi == 1) {
    for (long s : {1L, -1L}) {
      CycElt y = CycElt::from_int(n, s);
      if (y.pow(p) == w) return y;
    }
    return std::nullopt;
  }
  if (w.is_integral()) return pth_root_integral(w, p, precision);
  // (d y)^p = w d^p for the denominator d of w.
  const Int d = w.denominator();
  Int dp;
  mpz_pow_ui(dp.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(p));
  auto y = pth_root_integral(w * dp, p, precision);
  if (!y) return std::nullopt;
  return CycElt::from_int_coeffs(n, y->numerators(), y->denominator() * d);
}

}  // namespace

std::optional<CycElt> pth_root(const CycElt& w, long p, unsigned precision) {
  return pth_root_at(w, p, precision);
}

namespace {

long reduce_mod(const CycElt& u, long q, const std::vector<long>& powers) {
  Int acc = 0;
  const auto& num = u.numerators();
  for (std::size_t i = 0; i < num.size(); ++i) acc += num[i] * powers[i];
  long r = mpz_fdiv_ui(acc.get_mpz_t(), static_cast<unsigned long>(q));
  if (u.denominator() != 1) {
    const long d = mpz_fdiv_ui(u.denominator().get_mpz_t(), static_cast<unsigned long>(q));
    r = static_cast<long>(static_cast<__int128>(r) * mod_inverse(d, q) % q);
  }
  return r;
}

// Row echelon constraints over F_p; add returns true when the rank grows.
struct ModpEchelon {
  long p;
  std::size_t dim;
  std::vector<std::vector<long>> rows;
  std::vector<std::size_t> pivots;

  bool add(std::vector<long> v) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const long c = v[pivots[r]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) v[j] = mod(v[j] - c * rows[r][j], p);
    }
    std::size_t piv = dim;
    for (std::size_t j = 0; j < dim && piv == dim; ++j)
      if (v[j] != 0) piv = j;
    if (piv == dim) return false;
    const long inv = mod_inverse(v[piv], p);
    for (auto& x : v) x = x * inv % p;
    for (auto& row : rows) {
      const long c = row[piv];
      if (c == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) row[j] = mod(row[j] - c * v[j], p);
    }
    rows.push_back(std::move(v));
    pivots.push_back(piv);
    return true;
  }

  std::vector<std::vector<long>> kernel() const {
    std::vector<std::vector<long>> out;
    for (std::size_t j = 0; j < dim; ++j) {
      if (std::find(pivots.begin(), pivots.end(), j) != pivots.end()) continue;
      std::vector<long> v(dim, 0);
      v[j] = 1;
      for (std::size_t r = 0; r < rows.size(); ++r) v[pivots[r]] = mod(-rows[r][j], p);
      out.push_back(std::move(v));
    }
    return out;
  }
};

}  // namespace

UnitGroupDesc saturate_at_p(const UnitGroupDesc& v0, long p, const SaturationOptions& opts) {
  if (p < 2 || !is_prime(p)) fail(ErrorKind::BadParameters, "saturation needs a prime");
  UnitGroupDesc v = v0;
  const long n = v.conductor;
  const std::size_t phi = cyc_field(n).phi;
  std::mt19937_64 rng(opts.seed);
  while (true) {
    const std::size_t r = v.rank();
    if (r == 0) return v;
    const bool with_torsion = v.torsion_order % p == 0;
    const std::size_t off = with_torsion ? 1 : 0;
    const std::size_t dim = r + off;
    std::vector<const CycElt*> gens;
    if (with_torsion) gens.push_back(&v.torsion_gen);
    for (const auto& u : v.free_gens) gens.push_back(&u);

    // Characters x -> x^((q-1)/p) at the primes above q = 1 mod lcm(n, p).
    ModpEchelon ech{p, dim, {}, {}};
    const long step = std::lcm(n, p);
    int stable = 0;
    for (long q = step + 1; stable < opts.stable_primes && ech.rows.size() < dim; q += step) {
      if (!is_prime(q)) continue;
      long h = 0;
      std::uniform_int_distribution<long> pick(2, q - 1);
      while (h == 0) {
        const long cand = mod_pow(pick(rng), (q - 1) / n, q);
        bool primitive = true;
        for (long l : prime_factors(n)) primitive = primitive && mod_pow(cand, n / l, q) != 1;
        if (n == 1 || primitive) h = cand;
      }
      long rho = 1;
      while (rho == 1) rho = mod_pow(pick(rng), (q - 1) / p, q);
      std::vector<long> rho_pow(static_cast<std::size_t>(p));
      for (long e = 0, x = 1; e < p; ++e, x = static_cast<long>(static_cast<__int128>(x) * rho % q))
        rho_pow[static_cast<std::size_t>(e)] = x;
      bool grew = false;
      for (long k = 1; k <= std::max<long>(n - 1, 1); ++k) {
        if (std::gcd(k, n) != 1) continue;
        std::vector<long> powers(phi);
        const long hk = mod_pow(h, k, q);
        for (std::size_t i = 0; i < phi; ++i) powers[i] = i == 0 ? 1 : static_cast<long>(static_cast<__int128>(powers[i - 1]) * hk % q);
        std::vector<long> row(dim);
        for (std::size_t g = 0; g < dim; ++g) {
          const long val = mod_pow(reduce_mod(*gens[g], q, powers), (q - 1) / p, q);
          row[g] = std::find(rho_pow.begin(), rho_pow.end(), val) - rho_pow.begin();
        }
        grew = ech.add(std::move(row)) || grew;
      }
      stable = grew ? 0 : stable + 1;
    }
    auto ker = ech.kernel();
    if (ker.empty()) return v;
    double count = 1;
    for (std::size_t i = 0; i < ker.size(); ++i) count *= static_cast<double>(p);
    if (count > static_cast<double>(opts.max_candidates))
      fail(ErrorKind::EnumerationBoundExceeded, "too many saturation candidates");

    // Enumerate the kernel up to scalars: leading nonzero coefficient 1.
    bool replaced = false;
    std::vector<long> coef(ker.size(), 0);
    while (!replaced) {
      std::size_t t = 0;
      while (t < coef.size() && coef[t] == p - 1) coef[t++] = 0;
      if (t == coef.size()) break;
      ++coef[t];
      std::size_t lead = 0;
      while (coef[lead] == 0) ++lead;
      if (coef[lead] != 1) continue;
      std::vector<long> c(dim, 0);
      for (std::size_t b = 0; b < ker.size(); ++b)
        for (std::size_t j = 0; j < dim; ++j) c[j] = mod(c[j] + coef[b] * ker[b][j], p);
      std::size_t j0 = off;
      while (j0 < dim && c[j0] == 0) ++j0;
      if (j0 == dim) continue;
      const long s = mod_inverse(c[j0], p);
      CycElt w = CycElt::one(n);
      for (std::size_t j = 0; j < dim; ++j) w *= gens[j]->pow(c[j] * s % p);
      if (auto y = pth_root(w, p, opts.precision)) {
        v.free_inverses[j0 - off] = unit_inverse(*y);
        v.free_gens[j0 - off] = std::move(*y);
        replaced = true;
      }
    }
    if (!replaced) return v;
  }
}

namespace {

// log|sigma_a(u)| for the first r representatives, as rows per unit.
std::vector<std::vector<Real>> log_rows(const std::vector<CycElt>& units, std::size_t r, unsigned precision) {
  std::vector<std::vector<Real>> rows;
  for (const auto& u : units) {
    auto lv = log_embedding(u, precision).entries;
    lv.resize(r);
    rows.push_back(std::move(lv));
  }
  return rows;
}

// x with x * a = b for a square matrix a, by Gaussian elimination.
std::vector<Real> solve_left(std::vector<std::vector<Real>> a, std::vector<Real> b) {
  const std::size_t r = a.size();
  // Transpose so that the unknowns are columns: a^T x^T = b^T.
  std::vector<std::vector<Real>> m(r, std::vector<Real>(r + 1));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) m[i][j] = a[j][i];
    m[i][r] = b[i];
  }
  for (std::size_t c = 0; c < r; ++c) {
    std::size_t best = c;
    for (std::size_t i = c + 1; i < r; ++i)
      if (abs(m[i][c]) > abs(m[best][c])) best = i;
    std::swap(m[c], m[best]);
    if (m[c][c] == 0) fail(ErrorKind::Internal, "singular regulator matrix");
    for (std::size_t i = 0; i < r; ++i) {
      if (i == c) continue;
      const Real f = m[i][c] / m[c][c];
      for (std::size_t j = c; j <= r; ++j) m[i][j] -= f * m[c][j];
    }
  }
  std::vector<Real> x(r);
  for (std::size_t i = 0; i < r; ++i) x[i] = m[i][r] / m[i][i];
  return x;
}

Real determinant_abs(std::vector<std::vector<Real>> m) {
  const std::size_t r = m.size();
  Real det = 1;
  for (std::size_t c = 0; c < r; ++c) {
    std::size_t best = c;
    for (std::size_t i = c + 1; i < r; ++i)
      if (abs(m[i][c]) > abs(m[best][c])) best = i;
    std::swap(m[c], m[best]);
    det *= m[c][c];
    if (det == 0) return det;
    for (std::size_t i = c + 1; i < r; ++i) {
      const Real f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < r; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return abs(det);
}

// Replaces the free generators by an LLL-reduced basis of their log lattice.
void reduce_generators(UnitGroupDesc& d) {
  const std::size_t r = d.rank();
  if (r < 2) return;
  const unsigned prec = 60;
  auto logs = log_rows(d.free_gens, r + 1, prec);
  IntMatrix b(r, r + 1);
  {
    PrecisionScope scope(prec);
    const Real scale = pow(Real(10), 20);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j <= r; ++j) b(i, j) = real_to_int(logs[i][j] * scale);
  }
  IntMatrix t;
  lll_reduce(b, 99, 100, &t);
  std::vector<CycElt> gens, invs;
  const auto mul = [](const CycElt& x, const CycElt& y) { return x * y; };
  for (std::size_t i = 0; i < r; ++i) {
    gens.push_back(power_product(d.free_gens, d.free_inverses, t.row(i), CycElt::one(d.conductor), mul));
    invs.push_back(unit_inverse(gens.back()));
  }
  d.free_gens = std::move(gens);
  d.free_inverses = std::move(invs);
}

UnitGroupDesc compute_unit_group(long n, const FullUnitOptions& opts) {
  UnitGroupDesc d;
  d.conductor = n;
  d.torsion_gen = torsion_generator(n);
  d.torsion_order = torsion_order(n);
  if (n >= 3) {
    long p = 0;
    if (is_prime_power(n, &p)) {
      for (long a = 2; 2 * a < n; ++a)
        if (a % p != 0) d.free_gens.push_back(xi_prime_power(n, a));
    } else {
      const BetaMap beta = greither_beta(n);
      for (long a = 2; 2 * a < n; ++a)
        if (std::gcd(a, n) == 1) d.free_gens.push_back(greither_xi(n, a, beta));
    }
  }
  for (const auto& u : d.free_gens) d.free_inverses.push_back(unit_inverse(u));
  if (d.rank() + 1 != std::max<std::size_t>(cyc_field(n).embedding_reps.size(), 1))
    fail(ErrorKind::Internal, "wrong number of fundamental unit candidates");

  // Index of the starting group in the full unit group, given h+ = 1.
  const long bound = (n >= 3 && !is_prime_power(n)) ? 2 * index_i_beta(n) : 1;
  const Real start_reg = d.rank() ? regulator(d, 60) : Real(1);
  if (bound > 1) {
    if (opts.saturate) {
      for (long p : prime_factors(bound)) d = saturate_at_p(d, p, opts.saturation);
      PrecisionScope scope(60);
      const Real ratio = start_reg / regulator(d, 60);
      if (abs(ratio - Real(bound)) > Real("1e-20"))
        fail(ErrorKind::Internal, "saturation of conductor " + std::to_string(n) + " reached index " +
                                      ratio.str(10) + " instead of " + std::to_string(bound));
    } else {
      d.complete = false;
    }
  }
  reduce_generators(d);

  // The generators are independent modulo torsion.
  std::vector<CycElt> all{d.torsion_gen};
  all.insert(all.end(), d.free_gens.begin(), d.free_gens.end());
  IntMatrix expected(1, all.size());
  expected(0, 0) = d.torsion_order;
  if (!(relation_lattice_cyc(all) == Lattice::from_generators(expected)))
    fail(ErrorKind::Internal, "unit generators of conductor " + std::to_string(n) + " are dependent");
  return d;
}

}  // namespace

bool conductor_supported(long n) {
  n = normalize_conductor(n);
  return euler_phi(n) < 66;
}

UnitGroupDesc full_unit_group(long n, const FullUnitOptions& opts) {
  if (n < 1) fail(ErrorKind::BadParameters, "conductor must be positive");
  n = normalize_conductor(n);
  if (!conductor_supported(n))
    fail(ErrorKind::UnsupportedConductor, "conductor " + std::to_string(n) + " has phi(n) >= 66; h+ is not known");
  if (!opts.saturate) return compute_unit_group(n, opts);
  static std::mutex mutex;
  static std::map<long, std::shared_future<UnitGroupDesc>> cache;
  std::promise<UnitGroupDesc> promise;
  std::shared_future<UnitGroupDesc> result;
  bool owner = false;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
      it = cache.emplace(n, promise.get_future().share()).first;
      owner = true;
    }
    result = it->second;
  }
  if (owner) {
    try {
      promise.set_value(compute_unit_group(n, opts));
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard<std::mutex> lock(mutex);
      cache.erase(n);
    }
  }
  return result.get();
}

UnitLog unit_log(const UnitGroupDesc& desc, const CycElt& u, unsigned precision) {
  if (u.conductor() != desc.conductor) fail(ErrorKind::ConductorMismatch, "unit from a different cyclotomic field");
  if (u.is_zero() || !u.is_integral()) fail(ErrorKind::NotInSubgroup, "element is not a unit");
  const std::size_t r = desc.rank();
  UnitLog out;
  if (r == 0) {
    auto t = torsion_log(u);
    if (!t) fail(ErrorKind::NotInSubgroup, "element is not a root of unity");
    out.torsion = *t;
    return out;
  }
  unsigned prec = precision;
  for (int attempt = 0; attempt < 3; ++attempt, prec *= 2) {
    auto a = log_rows(desc.free_gens, r, prec);
    auto b = log_rows({u}, r, prec).front();
    PrecisionScope scope(prec + 20);
    auto x = solve_left(std::move(a), std::move(b));
    out.free.clear();
    bool near = true;
    for (const auto& xi : x) {
      out.free.push_back(real_to_int(xi));
      near = near && abs(xi - Real(out.free.back().get_mpz_t())) < Real("1e-6");
    }
    if (!near) continue;
    std::vector<Int> neg;
    for (const auto& e : out.free) neg.push_back(-e);
    CycElt rest = power_product(desc.free_gens, desc.free_inverses, neg, u,
                                [](const CycElt& x1, const CycElt& y1) { return x1 * y1; });
    if (auto t = torsion_log(rest)) {
      out.torsion = *t;
      return out;
    }
  }
  fail(ErrorKind::NotInSubgroup, "unit is not in the described group");
}

CycElt unit_from_log(const UnitGroupDesc& desc, const UnitLog& log) {
  CycElt u = desc.torsion_gen.pow(log.torsion % desc.torsion_order);
  return power_product(desc.free_gens, desc.free_inverses, log.free, u,
                       [](const CycElt& x, const CycElt& y) { return x * y; });
}

Real regulator(const UnitGroupDesc& desc, unsigned precision) {
  const std::size_t r = desc.rank();
  if (r == 0) return Real(1);
  auto a = log_rows(desc.free_gens, r, precision);
  PrecisionScope scope(precision + 20);
  return determinant_abs(std::move(a));
}

}  // namespace zgunits
