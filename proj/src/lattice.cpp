#include "zgunits/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "zgunits/error.hpp"

namespace zgunits {

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Int>>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) fail(ErrorKind::BadParameters, "ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Int>>& rows) {
  return from_rows(rows, rows.empty() ? 0 : rows.front().size());
}

IntMatrix IntMatrix::diagonal(const std::vector<Int>& diag) {
  IntMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

std::vector<Int> IntMatrix::row_vector(std::size_t i) const {
  auto r = row(i);
  return {r.begin(), r.end()};
}

void IntMatrix::append_row(std::span<const Int> r) {
  if (rows_ == 0 && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_) fail(ErrorKind::BadParameters, "row length mismatch");
  data_.insert(data_.end(), r.begin(), r.end());
  ++rows_;
}

void IntMatrix::append_rows(const IntMatrix& other) {
  for (std::size_t i = 0; i < other.rows(); ++i) append_row(other.row(i));
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < cols_; ++c) swap((*this)(i, c), (*this)(j, c));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < rows_; ++r) swap((*this)(r, i), (*this)(r, j));
}

void IntMatrix::add_row_multiple(std::size_t i, std::size_t j, const Int& c) {
  if (c == 0) return;
  for (std::size_t k = 0; k < cols_; ++k) {
    if ((*this)(j, k) != 0) (*this)(i, k) += c * (*this)(j, k);
  }
}

void IntMatrix::add_col_multiple(std::size_t i, std::size_t j, const Int& c) {
  if (c == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) {
    if ((*this)(r, j) != 0) (*this)(r, i) += c * (*this)(r, j);
  }
}

void IntMatrix::negate_row(std::size_t i) {
  for (auto& x : row(i)) x = -x;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::rows_range(std::size_t begin, std::size_t end) const {
  IntMatrix m(end - begin, cols_);
  for (std::size_t i = begin; i < end; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i - begin, j) = (*this)(i, j);
  return m;
}

IntMatrix IntMatrix::cols_range(std::size_t begin, std::size_t end) const {
  IntMatrix m(rows_, end - begin);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = begin; j < end; ++j) m(i, j - begin) = (*this)(i, j);
  return m;
}

IntMatrix IntMatrix::hconcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) fail(ErrorKind::BadParameters, "hconcat row mismatch");
  IntMatrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

bool IntMatrix::is_zero_row(std::size_t i) const { return is_zero(row(i)); }

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorKind::BadParameters, "matrix product shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Int& x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += x * b(k, j);
    }
  return c;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ',';
    os << '[';
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ',';
      os << (*this)(i, j);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

std::vector<Int> row_times(std::span<const Int> v, const IntMatrix& m) {
  if (v.size() != m.rows()) fail(ErrorKind::BadParameters, "vector-matrix shape mismatch");
  std::vector<Int> out(m.cols());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

bool is_zero(std::span<const Int> v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

// ---------------------------------------------------------------------------
// Hermite normal form

HnfResult hnf_with_transform(const IntMatrix& m) {
  HnfResult res{m, IntMatrix::identity(m.rows()), 0};
  IntMatrix& h = res.hnf;
  IntMatrix& u = res.transform;
  const std::size_t rows = h.rows();
  std::size_t r = 0;
  Int q;
  for (std::size_t col = 0; col < h.cols() && r < rows; ++col) {
    while (true) {
      std::size_t best = rows;
      for (std::size_t i = r; i < rows; ++i) {
        if (h(i, col) == 0) continue;
        if (best == rows || abs(h(i, col)) < abs(h(best, col))) best = i;
      }
      if (best == rows) break;
      h.swap_rows(r, best);
      u.swap_rows(r, best);
      bool clean = true;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (h(i, col) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), h(i, col).get_mpz_t(), h(r, col).get_mpz_t());
        h.add_row_multiple(i, r, -q);
        u.add_row_multiple(i, r, -q);
        if (h(i, col) != 0) clean = false;
      }
      if (clean) break;
    }
    if (h(r, col) == 0) continue;
    if (h(r, col) < 0) {
      h.negate_row(r);
      u.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      mpz_fdiv_q(q.get_mpz_t(), h(i, col).get_mpz_t(), h(r, col).get_mpz_t());
      h.add_row_multiple(i, r, -q);
      u.add_row_multiple(i, r, -q);
    }
    ++r;
  }
  res.rank = r;
  return res;
}

IntMatrix hnf(const IntMatrix& m) { return hnf_with_transform(m).hnf; }

// ---------------------------------------------------------------------------
// Smith normal form

std::vector<Int> SnfResult::diagonal() const {
  std::vector<Int> out;
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d(i, i));
  return out;
}

SnfResult snf(const IntMatrix& m) {
  SnfResult s{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.cols())};
  IntMatrix& d = s.d;
  const std::size_t rows = d.rows(), cols = d.cols();
  Int q;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    bool found_any = false;
    while (true) {
      // Pivot: minimal absolute value, ties broken by lower row then column.
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          if (d(i, j) == 0) continue;
          if (pr == rows || abs(d(i, j)) < abs(d(pr, pc))) {
            pr = i;
            pc = j;
          }
        }
      if (pr == rows) break;
      found_any = true;
      d.swap_rows(t, pr);
      s.u.swap_rows(t, pr);
      d.swap_cols(t, pc);
      s.v.swap_cols(t, pc);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d(i, t) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
        d.add_row_multiple(i, t, -q);
        s.u.add_row_multiple(i, t, -q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d(t, j) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
        d.add_col_multiple(j, t, -q);
        s.v.add_col_multiple(j, t, -q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      bool divisible = true;
      for (std::size_t i = t + 1; i < rows && divisible; ++i)
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t()) == 0) {
            d.add_row_multiple(t, i, 1);
            s.u.add_row_multiple(t, i, 1);
            divisible = false;
            break;
          }
        }
      if (divisible) break;
    }
    if (!found_any) break;
    if (d(t, t) < 0) {
      d.negate_row(t);
      s.u.negate_row(t);
    }
  }
  return s;
}

Int determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::BadParameters, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j));
        mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

IntMatrix unimodular_inverse(const IntMatrix& m) {
  auto res = hnf_with_transform(m);
  if (m.rows() != m.cols() || !(res.hnf == IntMatrix::identity(m.rows())))
    fail(ErrorKind::BadParameters, "matrix is not unimodular");
  return res.transform;
}

// ---------------------------------------------------------------------------
// Lattice

Lattice Lattice::from_generators(const IntMatrix& gens) {
  Lattice l(gens.cols());
  auto res = hnf_with_transform(gens);
  l.basis_ = res.hnf.rows_range(0, res.rank);
  for (std::size_t i = 0; i < res.rank; ++i) {
    std::size_t c = 0;
    while (l.basis_(i, c) == 0) ++c;
    l.pivots_.push_back(c);
  }
  return l;
}

Lattice Lattice::full(std::size_t m) { return from_generators(IntMatrix::identity(m)); }

std::optional<std::vector<Int>> Lattice::coordinates(std::span<const Int> v) const {
  if (v.size() != ambient_) fail(ErrorKind::BadParameters, "vector length differs from ambient rank");
  std::vector<Int> w(v.begin(), v.end());
  std::vector<Int> coords(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    const std::size_t c = pivots_[i];
    // Entries left of the pivot must already be cleared.
    for (std::size_t j = (i == 0 ? 0 : pivots_[i - 1] + 1); j < c; ++j)
      if (w[j] != 0) return std::nullopt;
    if (w[c] == 0) continue;
    if (mpz_divisible_p(w[c].get_mpz_t(), basis_(i, c).get_mpz_t()) == 0) return std::nullopt;
    Int q = w[c] / basis_(i, c);
    coords[i] = q;
    for (std::size_t j = c; j < ambient_; ++j)
      if (basis_(i, j) != 0) w[j] -= q * basis_(i, j);
  }
  if (!zgunits::is_zero(w)) return std::nullopt;
  return coords;
}

bool Lattice::contains(const Lattice& other) const {
  if (other.ambient_ != ambient_) return false;
  for (std::size_t i = 0; i < other.rank(); ++i)
    if (!contains(other.basis_.row(i))) return false;
  return true;
}

std::vector<Int> Lattice::reduce(std::span<const Int> v) const {
  std::vector<Int> w(v.begin(), v.end());
  Int q;
  for (std::size_t i = 0; i < rank(); ++i) {
    const std::size_t c = pivots_[i];
    mpz_fdiv_q(q.get_mpz_t(), w[c].get_mpz_t(), basis_(i, c).get_mpz_t());
    if (q == 0) continue;
    for (std::size_t j = c; j < ambient_; ++j)
      if (basis_(i, j) != 0) w[j] -= q * basis_(i, j);
  }
  return w;
}

Lattice integer_kernel(const IntMatrix& m) {
  auto res = hnf_with_transform(m);
  IntMatrix k(0, m.rows());
  for (std::size_t i = res.rank; i < m.rows(); ++i) k.append_row(res.transform.row(i));
  return Lattice::from_generators(k);
}

Lattice pure_closure(const Lattice& l) {
  if (l.is_zero()) return l;
  // Z^m / L has torsion preimage spanned by the first r rows of V^{-1}.
  auto s = snf(l.basis());
  IntMatrix vinv = unimodular_inverse(s.v);
  return Lattice::from_generators(vinv.rows_range(0, l.rank()));
}

Lattice intersect(const Lattice& a, const Lattice& b) {
  if (a.ambient_rank() != b.ambient_rank()) fail(ErrorKind::BadParameters, "ambient rank mismatch");
  if (a.is_zero() || b.is_zero()) return Lattice(a.ambient_rank());
  IntMatrix stacked = a.basis();
  stacked.append_rows(b.basis());
  Lattice k = integer_kernel(stacked);
  IntMatrix gens(0, a.ambient_rank());
  for (std::size_t i = 0; i < k.rank(); ++i) {
    auto x = k.basis().row(i).subspan(0, a.rank());
    gens.append_row(row_times(x, a.basis()));
  }
  return Lattice::from_generators(gens);
}

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
  if (a.ambient_rank() != b.ambient_rank()) fail(ErrorKind::BadParameters, "ambient rank mismatch");
  IntMatrix gens = a.basis();
  gens.append_rows(b.basis());
  return Lattice::from_generators(gens);
}

std::optional<Int> sublattice_index(const Lattice& sub, const Lattice& l) {
  if (!l.contains(sub)) fail(ErrorKind::NotASublattice, "lattice is not contained in the other");
  if (sub.rank() != l.rank()) return std::nullopt;
  IntMatrix coords(0, l.rank());
  for (std::size_t i = 0; i < sub.rank(); ++i) coords.append_row(*l.coordinates(sub.basis().row(i)));
  return Int(abs(determinant(coords)));
}

// ---------------------------------------------------------------------------
// Integral LLL (all-integer variant with Gram determinants d_i and
// scaled Gram-Schmidt coefficients lambda_ij).

IntMatrix lll_reduce(const IntMatrix& basis, long delta_num, long delta_den, IntMatrix* transform) {
  const std::size_t n = basis.rows();
  IntMatrix b = basis;
  IntMatrix h = IntMatrix::identity(n);
  if (n <= 1) {
    if (transform) *transform = h;
    return b;
  }
  auto dot = [&](std::size_t i, std::size_t j) {
    Int s = 0;
    for (std::size_t c = 0; c < b.cols(); ++c) s += b(i, c) * b(j, c);
    return s;
  };
  // 1-based indices for d and lambda; b and h rows are 0-based (index-1).
  std::vector<Int> d(n + 1);
  std::vector<std::vector<Int>> lam(n + 1, std::vector<Int>(n + 1));
  d[0] = 1;
  d[1] = dot(0, 0);
  if (d[1] == 0) fail(ErrorKind::BadParameters, "LLL input rows are dependent");
  std::size_t k = 2, kmax = 1;
  Int q, t;

  auto red = [&](std::size_t kk, std::size_t l) {
    Int twice = 2 * lam[kk][l];
    if (abs(twice) <= d[l]) return;
    // nearest integer to lam/d
    Int num = 2 * lam[kk][l] + d[l];
    Int den = 2 * d[l];
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    b.add_row_multiple(kk - 1, l - 1, -q);
    h.add_row_multiple(kk - 1, l - 1, -q);
    lam[kk][l] -= q * d[l];
    for (std::size_t i = 1; i < l; ++i) lam[kk][i] -= q * lam[l][i];
  };

  auto swap_k = [&](std::size_t kk) {
    b.swap_rows(kk - 1, kk - 2);
    h.swap_rows(kk - 1, kk - 2);
    for (std::size_t j = 1; j + 2 <= kk; ++j) swap(lam[kk][j], lam[kk - 1][j]);
    Int l = lam[kk][kk - 1];
    Int bb = (d[kk - 2] * d[kk] + l * l) / d[kk - 1];
    for (std::size_t i = kk + 1; i <= kmax; ++i) {
      t = lam[i][kk];
      lam[i][kk] = (d[kk] * lam[i][kk - 1] - l * t) / d[kk - 1];
      lam[i][kk - 1] = (bb * t + l * lam[i][kk]) / d[kk];
    }
    d[kk - 1] = bb;
  };

  while (k <= n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 1; j <= k; ++j) {
        Int u = dot(k - 1, j - 1);
        for (std::size_t i = 1; i < j; ++i) u = (d[i] * u - lam[k][i] * lam[j][i]) / d[i - 1];
        if (j < k) {
          lam[k][j] = u;
        } else {
          d[k] = u;
          if (u == 0) fail(ErrorKind::BadParameters, "LLL input rows are dependent");
        }
      }
    }
    red(k, k - 1);
    Int lhs = delta_den * d[k] * d[k - 2];
    Int rhs = delta_num * d[k - 1] * d[k - 1] - delta_den * lam[k][k - 1] * lam[k][k - 1];
    if (lhs < rhs) {
      swap_k(k);
      k = std::max<std::size_t>(2, k - 1);
    } else {
      for (std::size_t l = k - 2; l >= 1; --l) red(k, l);
      ++k;
    }
  }
  if (transform) *transform = h;
  return b;
}

// ---------------------------------------------------------------------------

RatMatrix rat_inverse(const RatMatrix& m) {
  const std::size_t n = m.size();
  RatMatrix a = m;
  RatMatrix inv(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) fail(ErrorKind::BadParameters, "singular rational matrix");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Rat piv = a[c][c];
    for (auto& x : a[c]) x /= piv;
    for (auto& x : inv[c]) x /= piv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rat f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        if (a[c][j] != 0) a[r][j] -= f * a[c][j];
        if (inv[c][j] != 0) inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

}  // namespace zgunits
