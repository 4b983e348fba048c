#pragma once

// Exact arithmetic in Q(zeta_n) on the power basis modulo the cyclotomic
// polynomial, together with complex embeddings at adjustable precision.
//
// Conductors n = 2 (mod 4) are rewritten to n/2 on construction through
// zeta_n = -zeta_{n/2}^((n/2 + 1)/2).

#include <boost/multiprecision/mpfr.hpp>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zgunits/lattice.hpp"

namespace zgunits {

using Real = boost::multiprecision::mpfr_float;

// Sets the default MPFR precision (in decimal digits) for the current scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

struct Complex {
  Real re;
  Real im;
};

long normalize_conductor(long n);

// Static data of Q(zeta_n) for a normalized conductor.
struct CycField {
  long n = 1;
  std::size_t phi = 1;
  std::vector<long> cyclotomic;            // monic, degree phi, low degree first
  std::vector<std::vector<Int>> zeta_pow;  // zeta^k reduced, k = 0..n-1
  std::vector<long> embedding_reps;        // a <= n/2 coprime to n, one per conjugate pair
};

// Cached and thread-safe.
const CycField& cyc_field(long n);

class CycElt {
 public:
  CycElt() : num_(1) {}

  static CycElt zero(long n);
  static CycElt one(long n);
  static CycElt from_int(long n, const Int& c);
  static CycElt zeta(long n, long k = 1);
  static CycElt from_coeffs(long n, const std::vector<Rat>& coeffs);
  static CycElt from_int_coeffs(long n, std::vector<Int> coeffs, Int den = 1);
  // sum_k c_k zeta_n^k for any conductor and any number of terms.
  static CycElt from_power_sum(long n, const std::vector<Int>& c, const Int& den = 1);
  // "[c0,c1,...]@n" with integer or a/b coefficients, read as a power sum.
  static CycElt parse(std::string_view text);

  long conductor() const { return n_; }
  std::size_t degree() const { return num_.size(); }
  const CycField& field() const { return cyc_field(n_); }
  const std::vector<Int>& numerators() const { return num_; }
  const Int& denominator() const { return den_; }
  Rat coeff(std::size_t i) const;
  std::vector<Rat> coeffs() const;

  bool is_integral() const { return den_ == 1; }
  bool is_zero() const;
  bool is_one() const;

  CycElt operator-() const;
  friend CycElt operator+(const CycElt& a, const CycElt& b);
  friend CycElt operator-(const CycElt& a, const CycElt& b);
  friend CycElt operator*(const CycElt& a, const CycElt& b);
  friend CycElt operator*(const CycElt& a, const Int& c);
  CycElt& operator*=(const CycElt& b) { return *this = *this * b; }
  friend bool operator==(const CycElt& a, const CycElt& b) {
    return a.n_ == b.n_ && a.den_ == b.den_ && a.num_ == b.num_;
  }

  // Negative exponents require an invertible element.
  CycElt pow(long e) const;
  CycElt galois(long a) const;
  CycElt inverse() const;
  Rat norm() const;
  // Largest absolute numerator, a size measure.
  std::size_t bit_size() const;

  std::string to_string() const;

 private:
  void normalize();

  long n_ = 1;
  std::vector<Int> num_;
  Int den_ = 1;
};

// Inverse of a unit of Z[zeta_n]; NotAUnit when u is not invertible in Z[zeta_n].
CycElt unit_inverse(const CycElt& u);

// The generator of the roots of unity in Q(zeta_n): -zeta for odd n, zeta for
// even n (and -1 for n = 1).
CycElt torsion_generator(long n);
long torsion_order(long n);
// t with u = torsion_generator^t, 0 <= t < torsion_order, if u is a root of unity.
std::optional<long> torsion_log(const CycElt& u);

struct RootOfUnityTest {
  bool is_root = false;
  long order = 0;
};
RootOfUnityTest is_root_of_unity(const CycElt& u);

// zeta_n^(twice_k / 2); half-integral exponents need odd n.
CycElt zeta_half_power(long n, long twice_k);

struct LogVector {
  unsigned precision = 0;
  std::vector<Real> entries;
};

// Values sigma_a(u) for a in embedding_reps, with relative error below
// 10^-precision; the binary precision is raised until that is certified.
std::vector<Complex> embeddings(const CycElt& u, unsigned precision);
// log|sigma_a(u)| for each a in embedding_reps.
LogVector log_embedding(const CycElt& u, unsigned precision);

inline constexpr unsigned kDefaultPrecision = 128;

}  // namespace zgunits
