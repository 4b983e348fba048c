#include "zgunits/cyclotomic.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "zgunits/abgroup.hpp"
#include "zgunits/error.hpp"

namespace zgunits {

PrecisionScope::PrecisionScope(unsigned digits) : saved_(Real::default_precision()) {
  Real::default_precision(digits);
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_); }

long normalize_conductor(long n) {
  if (n < 1) fail(ErrorKind::BadParameters, "conductor must be positive");
  return n % 4 == 2 ? n / 2 : n;
}

namespace {

using Poly = std::vector<long>;

// Exact division of integer polynomials by a monic divisor.
Poly divide_monic(Poly a, const Poly& b) {
  const std::size_t db = b.size() - 1;
  Poly q(a.size() - db, 0);
  for (std::size_t i = a.size(); i-- > db;) {
    long t = a[i];
    q[i - db] = t;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= t * b[j];
  }
  return q;
}

Poly cyclotomic_poly(long n) {
  Poly p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(n)] = 1;
  for (long d = 1; d < n; ++d)
    if (n % d == 0) p = divide_monic(p, cyclotomic_poly(d));
  return p;
}

std::unique_ptr<CycField> build_field(long n) {
  auto f = std::make_unique<CycField>();
  f->n = n;
  f->cyclotomic = cyclotomic_poly(n);
  f->phi = f->cyclotomic.size() - 1;
  const std::size_t phi = f->phi;
  std::vector<Int> cur(phi, 0);
  cur[0] = 1;
  for (long k = 0; k < n; ++k) {
    f->zeta_pow.push_back(cur);
    // multiply by zeta
    Int top = cur[phi - 1];
    for (std::size_t j = phi - 1; j > 0; --j) cur[j] = cur[j - 1];
    cur[0] = 0;
    for (std::size_t j = 0; j < phi; ++j) cur[j] -= top * f->cyclotomic[j];
  }
  for (long a = 1; 2 * a <= std::max<long>(n, 2); ++a)
    if (std::gcd(a, n) == 1) f->embedding_reps.push_back(a);
  return f;
}

void add_scaled(std::vector<Int>& acc, const std::vector<Int>& v, const Int& c) {
  for (std::size_t j = 0; j < v.size(); ++j)
    if (v[j] != 0) mpz_addmul(acc[j].get_mpz_t(), v[j].get_mpz_t(), c.get_mpz_t());
}

}  // namespace

const CycField& cyc_field(long n) {
  n = normalize_conductor(n);
  static std::mutex mu;
  static std::map<long, std::unique_ptr<CycField>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = build_field(n);
  return *slot;
}

void CycElt::normalize() {
  if (den_ < 0) {
    den_ = -den_;
    for (auto& c : num_) c = -c;
  }
  if (den_ == 1) return;
  Int g = den_;
  for (const auto& c : num_) {
    if (g == 1) break;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  }
  if (g != 1) {
    den_ /= g;
    for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }
}

CycElt CycElt::zero(long n) {
  CycElt e;
  e.n_ = normalize_conductor(n);
  e.num_.assign(cyc_field(e.n_).phi, 0);
  e.den_ = 1;
  return e;
}

CycElt CycElt::one(long n) { return from_int(n, 1); }

CycElt CycElt::from_int(long n, const Int& c) {
  CycElt e = zero(n);
  e.num_[0] = c;
  return e;
}

CycElt CycElt::zeta(long n, long k) {
  std::vector<Int> c(static_cast<std::size_t>(n), 0);
  c[static_cast<std::size_t>(((k % n) + n) % n)] = 1;
  return from_power_sum(n, c);
}

CycElt CycElt::from_coeffs(long n, const std::vector<Rat>& coeffs) {
  Int den = 1;
  for (const auto& q : coeffs) den = lcm(den, Int(q.get_den()));
  std::vector<Int> num;
  for (const auto& q : coeffs) num.push_back(Int(q.get_num()) * (den / Int(q.get_den())));
  return from_int_coeffs(n, std::move(num), den);
}

CycElt CycElt::from_int_coeffs(long n, std::vector<Int> coeffs, Int den) {
  const CycField& f = cyc_field(n);
  if (coeffs.size() != f.phi) return from_power_sum(n, coeffs, den);
  if (den == 0) fail(ErrorKind::BadParameters, "zero denominator");
  CycElt e;
  e.n_ = f.n;
  e.num_ = std::move(coeffs);
  e.den_ = std::move(den);
  e.normalize();
  return e;
}

CycElt CycElt::from_power_sum(long n, const std::vector<Int>& c, const Int& den) {
  if (den == 0) fail(ErrorKind::BadParameters, "zero denominator");
  const long m = normalize_conductor(n);
  const CycField& f = cyc_field(m);
  CycElt e = zero(m);
  const long h = (m + 1) / 2;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    const long kk = static_cast<long>(k % static_cast<std::size_t>(n));
    if (m == n) {
      add_scaled(e.num_, f.zeta_pow[static_cast<std::size_t>(kk)], c[k]);
    } else {
      // zeta_n^k = (-1)^k zeta_m^(k h)
      const auto idx = static_cast<std::size_t>((kk * h) % m);
      add_scaled(e.num_, f.zeta_pow[idx], (kk % 2) ? Int(-c[k]) : c[k]);
    }
  }
  e.den_ = den;
  e.normalize();
  return e;
}

Rat CycElt::coeff(std::size_t i) const {
  Rat q(num_[i], den_);
  q.canonicalize();
  return q;
}

std::vector<Rat> CycElt::coeffs() const {
  std::vector<Rat> out;
  for (std::size_t i = 0; i < num_.size(); ++i) out.push_back(coeff(i));
  return out;
}

bool CycElt::is_zero() const {
  for (const auto& c : num_)
    if (c != 0) return false;
  return true;
}

bool CycElt::is_one() const {
  if (den_ != 1 || num_[0] != 1) return false;
  for (std::size_t i = 1; i < num_.size(); ++i)
    if (num_[i] != 0) return false;
  return true;
}

namespace {

void check_same(const CycElt& a, const CycElt& b) {
  if (a.conductor() != b.conductor())
    fail(ErrorKind::ConductorMismatch, "conductors " + std::to_string(a.conductor()) + " and " +
                                           std::to_string(b.conductor()) + " differ");
}

}  // namespace

CycElt CycElt::operator-() const {
  CycElt e = *this;
  for (auto& c : e.num_) c = -c;
  return e;
}

CycElt operator+(const CycElt& a, const CycElt& b) {
  check_same(a, b);
  CycElt e = a;
  if (a.den_ == b.den_) {
    for (std::size_t i = 0; i < e.num_.size(); ++i) e.num_[i] += b.num_[i];
  } else {
    for (std::size_t i = 0; i < e.num_.size(); ++i) e.num_[i] = a.num_[i] * b.den_ + b.num_[i] * a.den_;
    e.den_ = a.den_ * b.den_;
  }
  e.normalize();
  return e;
}

CycElt operator-(const CycElt& a, const CycElt& b) { return a + (-b); }

CycElt operator*(const CycElt& a, const Int& c) {
  CycElt e = a;
  for (auto& x : e.num_) x *= c;
  e.normalize();
  return e;
}

CycElt operator*(const CycElt& a, const CycElt& b) {
  check_same(a, b);
  const CycField& f = a.field();
  const std::size_t phi = f.phi;
  std::vector<Int> prod(2 * phi - 1, 0);
  for (std::size_t i = 0; i < phi; ++i) {
    if (a.num_[i] == 0) continue;
    for (std::size_t j = 0; j < phi; ++j)
      if (b.num_[j] != 0) mpz_addmul(prod[i + j].get_mpz_t(), a.num_[i].get_mpz_t(), b.num_[j].get_mpz_t());
  }
  for (std::size_t i = prod.size(); i-- > phi;) {
    if (prod[i] == 0) continue;
    const Int t = prod[i];
    for (std::size_t j = 0; j < phi; ++j) {
      const long c = f.cyclotomic[j];
      if (c > 0) {
        mpz_submul_ui(prod[i - phi + j].get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(c));
      } else if (c < 0) {
        mpz_addmul_ui(prod[i - phi + j].get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(-c));
      }
    }
    prod[i] = 0;
  }
  prod.resize(phi);
  CycElt e;
  e.n_ = a.n_;
  e.num_ = std::move(prod);
  e.den_ = a.den_ * b.den_;
  e.normalize();
  return e;
}

CycElt CycElt::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  CycElt result = one(n_), base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

CycElt CycElt::galois(long a) const {
  const CycField& f = field();
  const long n = f.n;
  if (std::gcd(((a % n) + n) % n, n) != 1 && n > 1)
    fail(ErrorKind::NotCoprime, "galois exponent " + std::to_string(a) + " not coprime to " + std::to_string(n));
  CycElt e = zero(n);
  for (std::size_t j = 0; j < num_.size(); ++j) {
    if (num_[j] == 0) continue;
    const long k = ((a % n) * static_cast<long>(j) % n + n) % n;
    add_scaled(e.num_, f.zeta_pow[static_cast<std::size_t>(k)], num_[j]);
  }
  e.den_ = den_;
  e.normalize();
  return e;
}

namespace {

using RatPoly = std::vector<Rat>;

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// a -= c * x^shift * b
void sub_scaled(RatPoly& a, const RatPoly& b, const Rat& c, std::size_t shift) {
  if (a.size() < b.size() + shift) a.resize(b.size() + shift, 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
}

}  // namespace

CycElt CycElt::inverse() const {
  if (is_zero()) fail(ErrorKind::NotAUnit, "zero is not invertible");
  const CycField& f = field();
  RatPoly r0, r1, s0, s1{Rat(1)};
  for (long c : f.cyclotomic) r0.emplace_back(c);
  for (const auto& c : num_) r1.emplace_back(c);
  trim(r1);
  while (r1.size() > 1) {
    // One division step r0 = q r1 + r, with s updated alongside.
    RatPoly q;
    RatPoly r = r0;
    trim(r);
    while (r.size() >= r1.size()) {
      const std::size_t shift = r.size() - r1.size();
      Rat c = r.back() / r1.back();
      if (q.size() < shift + 1) q.resize(shift + 1, 0);
      q[shift] = c;
      sub_scaled(r, r1, c, shift);
      r.pop_back();
      trim(r);
    }
    RatPoly s = s0;
    for (std::size_t i = 0; i < q.size(); ++i)
      if (q[i] != 0) sub_scaled(s, s1, q[i], i);
    trim(s);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r1.empty()) fail(ErrorKind::Internal, "cyclotomic polynomial has a nontrivial factor");
  // r1 = c constant, s1 * this = c mod Phi
  std::vector<Rat> coeffs(f.phi, 0);
  for (std::size_t i = 0; i < s1.size() && i < f.phi; ++i) coeffs[i] = s1[i] / r1[0];
  CycElt inv = from_coeffs(n_, coeffs);
  // The inverse is taken with respect to the numerator; fold the denominator back in.
  return inv * den_;
}

Rat CycElt::norm() const {
  const long n = n_;
  CycElt p = *this;
  for (long a = 2; a < n; ++a)
    if (std::gcd(a, n) == 1) p = p * galois(a);
  return p.coeff(0);
}

std::size_t CycElt::bit_size() const {
  std::size_t b = 0;
  for (const auto& c : num_) b = std::max(b, mpz_sizeinbase(c.get_mpz_t(), 2));
  return b + mpz_sizeinbase(den_.get_mpz_t(), 2) - 1;
}

std::string CycElt::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < num_.size(); ++i) {
    if (i) s += ',';
    s += coeff(i).get_str();
  }
  return s + "]@" + std::to_string(n_);
}

CycElt CycElt::parse(std::string_view text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  auto bad = [&]() { fail(ErrorKind::ParseError, "cannot parse cyclotomic element '" + std::string(text) + "'"); };
  const auto close = t.find(']');
  if (t.empty() || t[0] != '[' || close == std::string::npos || close + 1 >= t.size() || t[close + 1] != '@') bad();
  long n = 0;
  try {
    std::size_t used = 0;
    n = std::stol(t.substr(close + 2), &used);
    if (used != t.size() - close - 2 || n < 1) bad();
  } catch (const std::logic_error&) {
    bad();
  }
  std::vector<Rat> coeffs;
  const std::string body = t.substr(1, close - 1);
  std::size_t start = 0;
  while (start <= body.size() && !body.empty()) {
    std::size_t comma = body.find(',', start);
    std::string tok = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    Rat q;
    if (tok.empty() || q.set_str(tok, 10) != 0) bad();
    if (q.get_den() == 0) bad();
    q.canonicalize();
    coeffs.push_back(q);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  Int den = 1;
  for (const auto& q : coeffs) den = lcm(den, Int(q.get_den()));
  std::vector<Int> num;
  for (const auto& q : coeffs) num.push_back(Int(q.get_num()) * (den / Int(q.get_den())));
  return from_power_sum(n, num, den);
}

CycElt unit_inverse(const CycElt& u) {
  if (!u.is_integral()) fail(ErrorKind::NotAUnit, "element is not integral");
  CycElt v = u.inverse();
  if (!v.is_integral()) fail(ErrorKind::NotAUnit, "element is not a unit of Z[zeta_" + std::to_string(u.conductor()) + "]");
  return v;
}

CycElt torsion_generator(long n) {
  n = normalize_conductor(n);
  if (n == 1) return CycElt::from_int(1, -1);
  return n % 2 ? -CycElt::zeta(n) : CycElt::zeta(n);
}

long torsion_order(long n) {
  n = normalize_conductor(n);
  if (n == 1) return 2;
  return n % 2 ? 2 * n : n;
}

std::optional<long> torsion_log(const CycElt& u) {
  if (!u.is_integral()) return std::nullopt;
  const CycField& f = u.field();
  const long n = f.n;
  const auto& c = u.numerators();
  // Roots of unity have few small coefficients; quick rejection first.
  for (const auto& x : c)
    if (abs(x) > 1) return std::nullopt;
  std::vector<Int> neg(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) neg[i] = -c[i];
  for (long k = 0; k < n; ++k) {
    const auto& z = f.zeta_pow[static_cast<std::size_t>(k)];
    int sign = 0;
    if (z == c) sign = 1;
    else if (z == neg) sign = -1;
    if (!sign) continue;
    if (n == 1) return sign == 1 ? 0 : 1;
    if (n % 2 == 0) return sign == 1 ? k : (k + n / 2) % n;
    // (-zeta)^t = (-1)^t zeta^t, t mod 2n
    const bool even = (sign == 1);
    return (k % 2 == 0) == even ? k : k + n;
  }
  return std::nullopt;
}

RootOfUnityTest is_root_of_unity(const CycElt& u) {
  auto t = torsion_log(u);
  if (!t) return {};
  const long m = torsion_order(u.conductor());
  return {true, m / std::gcd(m, *t)};
}

CycElt zeta_half_power(long n, long twice_k) {
  if (twice_k % 2 == 0) return CycElt::zeta(n, twice_k / 2);
  if (n % 2 == 0)
    fail(ErrorKind::HalfPowerUndefined, "half-integral power of zeta_" + std::to_string(n) + " is undefined");
  const long h = (n + 1) / 2;
  return CycElt::zeta(n, static_cast<long>((static_cast<__int128>(twice_k % n + n) * h) % n));
}

std::vector<Complex> embeddings(const CycElt& u, unsigned precision) {
  if (u.is_zero()) fail(ErrorKind::BadParameters, "embedding of zero requested");
  const CycField& f = u.field();
  const long n = f.n;
  const auto& c = u.numerators();
  unsigned digits = precision + 20 + static_cast<unsigned>(mpz_sizeinbase(u.denominator().get_mpz_t(), 10));
  for (int attempt = 0; attempt < 8; ++attempt, digits *= 2) {
    PrecisionScope scope(digits);
    const Real two_pi = 2 * acos(Real(-1));
    std::vector<Real> cs(static_cast<std::size_t>(n)), sn(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) {
      Real ang = Real(two_pi) * k / n;
      cs[static_cast<std::size_t>(k)] = cos(ang);
      sn[static_cast<std::size_t>(k)] = sin(ang);
    }
    Real total = 0;
    std::vector<Real> cr(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
      cr[j] = Real(c[j].get_mpz_t());
      total += abs(cr[j]);
    }
    const Real unit_err = pow(Real(10), -static_cast<long>(digits) + 2) * (f.phi + 4);
    const Real err = total * unit_err;
    const Real target = pow(Real(10), -static_cast<long>(precision));
    const Real den(u.denominator().get_mpz_t());
    std::vector<Complex> out;
    bool ok = true;
    for (long a : f.embedding_reps) {
      Real re = 0, im = 0;
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0) continue;
        const auto k = static_cast<std::size_t>((a * static_cast<long>(j)) % n);
        re += cr[j] * cs[k];
        im += cr[j] * sn[k];
      }
      Real mod = sqrt(re * re + im * im);
      if (err >= mod * target) {
        ok = false;
        break;
      }
      out.push_back({re / den, im / den});
    }
    if (ok) return out;
  }
  fail(ErrorKind::PrecisionUnachievable, "cannot certify embeddings at " + std::to_string(precision) + " digits");
}

LogVector log_embedding(const CycElt& u, unsigned precision) {
  auto emb = embeddings(u, precision);
  LogVector lv;
  lv.precision = precision;
  PrecisionScope scope(precision + 20);
  for (const auto& z : emb) lv.entries.push_back(log(z.re * z.re + z.im * z.im) / 2);
  return lv;
}

}  // namespace zgunits
