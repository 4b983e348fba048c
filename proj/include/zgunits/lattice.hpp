#pragma once

// Exact integer matrices and lattices in Z^m.
//
// All matrices act on row vectors: a lattice is the row span of its basis,
// and kernels are left kernels {v : v*M = 0}.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace zgunits {

using Int = mpz_class;
using Rat = mpq_class;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows, std::size_t cols);
  static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows);
  static IntMatrix diagonal(const std::vector<Int>& diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Int> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Int> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<Int> row_vector(std::size_t i) const;

  void append_row(std::span<const Int> r);
  void append_rows(const IntMatrix& other);
  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);
  // row_i += c * row_j
  void add_row_multiple(std::size_t i, std::size_t j, const Int& c);
  void add_col_multiple(std::size_t i, std::size_t j, const Int& c);
  void negate_row(std::size_t i);

  IntMatrix transpose() const;
  IntMatrix rows_range(std::size_t begin, std::size_t end) const;
  IntMatrix cols_range(std::size_t begin, std::size_t end) const;
  // horizontal concatenation [A | B]
  static IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b);

  bool is_zero_row(std::size_t i) const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

// v * M
std::vector<Int> row_times(std::span<const Int> v, const IntMatrix& m);
bool is_zero(std::span<const Int> v);

struct HnfResult {
  IntMatrix hnf;        // same shape as the input, zero rows last
  IntMatrix transform;  // unimodular, transform * input == hnf
  std::size_t rank = 0;
};

// Canonical row Hermite normal form: upper echelon, positive pivots, entries
// above each pivot reduced into [0, pivot).
HnfResult hnf_with_transform(const IntMatrix& m);
IntMatrix hnf(const IntMatrix& m);

struct SnfResult {
  IntMatrix d;  // diagonal, d1 | d2 | ... , nonnegative
  IntMatrix u;  // rows x rows, unimodular
  IntMatrix v;  // cols x cols, unimodular
  std::vector<Int> diagonal() const;
};

// d == u * m * v
SnfResult snf(const IntMatrix& m);

Int determinant(const IntMatrix& m);
// Inverse of a unimodular matrix.
IntMatrix unimodular_inverse(const IntMatrix& m);

class Lattice {
 public:
  explicit Lattice(std::size_t ambient_rank = 0) : ambient_(ambient_rank), basis_(0, ambient_rank) {}

  static Lattice from_generators(const IntMatrix& gens);
  static Lattice full(std::size_t m);

  std::size_t ambient_rank() const { return ambient_; }
  std::size_t rank() const { return basis_.rows(); }
  const IntMatrix& basis() const { return basis_; }
  bool is_zero() const { return basis_.rows() == 0; }

  // Integer coordinates of v with respect to basis(), if v lies in the lattice.
  std::optional<std::vector<Int>> coordinates(std::span<const Int> v) const;
  bool contains(std::span<const Int> v) const { return coordinates(v).has_value(); }
  bool contains(const Lattice& other) const;
  // Representative of v modulo the lattice, reduced against the echelon basis.
  std::vector<Int> reduce(std::span<const Int> v) const;

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t ambient_;
  IntMatrix basis_;
  std::vector<std::size_t> pivots_;
};

// Left integer kernel {v in Z^rows : v*M = 0}.
Lattice integer_kernel(const IntMatrix& m);
Lattice pure_closure(const Lattice& l);
Lattice intersect(const Lattice& a, const Lattice& b);
Lattice lattice_sum(const Lattice& a, const Lattice& b);
// [l : sub], or nullopt when the ranks differ (infinite index).
// Throws NotASublattice unless sub is contained in l.
std::optional<Int> sublattice_index(const Lattice& sub, const Lattice& l);

// Integral LLL (delta = delta_num / delta_den) on linearly independent rows.
// If transform is given it receives the unimodular matrix T with T*basis = result.
IntMatrix lll_reduce(const IntMatrix& basis, long delta_num = 99, long delta_den = 100,
                     IntMatrix* transform = nullptr);

// Rational helpers.
using RatMatrix = std::vector<std::vector<Rat>>;
// Inverse of a square rational matrix; throws BadParameters when singular.
RatMatrix rat_inverse(const RatMatrix& m);

}  // namespace zgunits
