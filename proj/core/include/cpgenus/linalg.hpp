#pragma once

// Exact integer / rational linear algebra: Hermite and Smith normal forms,
// saturated kernels, lattice quotients, integral LLL and short-vector
// enumeration. Everything is arbitrary precision (GMP); nothing here touches
// floating point except the enumeration tree, whose output is re-checked
// exactly.

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace cpgenus::linalg {

using Int = mpz_class;
using Rat = mpq_class;

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<T> row_vector(std::size_t i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }

  void swap_rows(std::size_t a, std::size_t b);
  void append_row(std::span<const T> r);
  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  bool is_zero() const;
  bool is_square() const { return rows_ == cols_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
std::vector<Int> operator*(std::span<const Int> v, const IntMatrix& m);  // row vector times matrix
std::vector<Int> operator*(const IntMatrix& m, std::span<const Int> v);  // matrix times column vector

IntMatrix power(const IntMatrix& m, unsigned long e);
RatMatrix power(const RatMatrix& m, unsigned long e);
RatMatrix to_rational(const IntMatrix& m);
// Throws DomainError if some entry is not integral.
IntMatrix to_integer(const RatMatrix& m);
IntMatrix block_diagonal(std::span<const IntMatrix> blocks);
// Product of `steps` elementary factors I + s E_ij (i != j, 1 <= |s| <= bound)
// and sign flips, each factor having entries bounded by `bound`.
IntMatrix random_unimodular(std::size_t n, std::mt19937_64& rng, long bound, std::size_t steps);

// Fraction-free (Bareiss) determinant.
Int determinant(const IntMatrix& m);
Rat determinant(const RatMatrix& m);
std::size_t rank(const IntMatrix& m);
// Solves x * m = rhs (row convention) over Q; nullopt if inconsistent.
std::optional<std::vector<Rat>> solve_left(const RatMatrix& m, std::span<const Rat> rhs);
std::optional<RatMatrix> inverse(const RatMatrix& m);
// Sylvester criterion on leading principal minors.
bool is_positive_definite(const RatMatrix& gram);

struct HnfResult {
  IntMatrix h;  // row-style Hermite normal form, zero rows at the bottom
  IntMatrix u;  // unimodular, u * m == h
};

// Row-style HNF: pivots positive and moving strictly right, entries above a
// pivot reduced into [0, pivot), zero rows last.
HnfResult hnf(const IntMatrix& m);
// Same H, without tracking the transform; zero rows dropped.
IntMatrix hnf_rows(const IntMatrix& m);
// HNF of the lattice spanned by `gens` when that lattice is known to contain
// modulus * Z^n. Returns the square (n x n) HNF basis.
IntMatrix hnf_modular(const IntMatrix& gens, const Int& modulus);

struct SnfResult {
  IntMatrix d;  // diagonal, d11 | d22 | ... >= 0
  IntMatrix u;  // unimodular
  IntMatrix v;  // unimodular, u * m * v == d
  std::vector<Int> diagonal() const;
};

SnfResult snf(const IntMatrix& m);
// Diagonal of the SNF only.
std::vector<Int> elementary_divisors(const IntMatrix& m);

// A sublattice of Z^n given by an HNF basis with no zero rows. Two lattices are
// equal iff their bases are entry-wise equal.
class LatticeBasis {
 public:
  LatticeBasis() = default;
  explicit LatticeBasis(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}
  static LatticeBasis from_generators(const IntMatrix& gens);
  static LatticeBasis full(std::size_t n);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t rank() const { return basis_.rows(); }
  const IntMatrix& basis() const { return basis_; }

  // Integer coordinates c with c * basis == v, if v lies in the lattice.
  std::optional<std::vector<Int>> coordinates(std::span<const Int> v) const;
  bool contains(std::span<const Int> v) const { return coordinates(v).has_value(); }
  bool contains(const LatticeBasis& other) const;
  // |det| of the Gram matrix of the basis (squared covolume).
  Int gram_determinant() const;

  friend bool operator==(const LatticeBasis& a, const LatticeBasis& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t ambient_ = 0;
  IntMatrix basis_;
};

// {v in Z^rows : v * m == 0}, which is automatically saturated.
LatticeBasis saturated_kernel(const IntMatrix& m);
// Nontrivial SNF divisors of sup/sub (entries equal to 1 dropped).
std::vector<Int> lattice_index_group(const LatticeBasis& sub, const LatticeBasis& sup);

struct LllResult {
  IntMatrix basis;      // reduced rows
  IntMatrix transform;  // unimodular, transform * input == basis
  // Exact Gram-Schmidt data: mu(i, j) = lambda(i, j) / d[j + 1],
  // |b*_i|^2 = d[i + 1] / d[i], relative to the integer-scaled form.
  std::vector<Int> d;
  IntMatrix lambda;
  Int form_scale;  // the input Gram was multiplied by this to make it integral
};

// Integral LLL on the rows of `basis` for the quadratic form
// x -> x * gram * x^T. Throws DomainError on dependent rows.
LllResult lll(const IntMatrix& basis, const RatMatrix& gram, const Rat& delta = Rat(3, 4));
IntMatrix lll_reduce(const IntMatrix& basis, const RatMatrix& gram, const Rat& delta = Rat(3, 4));
// True iff `basis` satisfies size reduction and the Lovasz condition.
bool is_lll_reduced(const IntMatrix& basis, const RatMatrix& gram, const Rat& delta = Rat(3, 4));

Rat quadratic_form(std::span<const Int> v, const RatMatrix& gram);

struct ShortVector {
  std::vector<Int> coords;  // w.r.t. the input basis
  std::vector<Int> vector;  // ambient coordinates, first nonzero entry positive
  Rat norm;                 // exact form value
};

// All nonzero lattice vectors (one of each +/- pair) with form value <= bound,
// sorted by (norm, vector).
std::vector<ShortVector> enumerate_short_vectors(const IntMatrix& basis, const RatMatrix& gram,
                                                 const Rat& bound);

// Low-level enumeration over an already LLL-reduced basis. `visit` receives
// coefficients w.r.t. the reduced basis for every candidate whose
// floating-point form value is within `bound` (with a small relative slack),
// one of each +/- pair. Returning false stops the search.
void visit_short_vectors(const LllResult& reduced, double bound,
                         const std::function<bool(std::span<const long>)>& visit);

// Matrix text format: "rows cols" then row-major entries. Rational entries
// may be written as "num/den".
IntMatrix read_int_matrix(std::istream& in);
RatMatrix read_rat_matrix(std::istream& in);
void write_matrix(std::ostream& out, const IntMatrix& m);
void write_matrix(std::ostream& out, const RatMatrix& m);
std::string to_string(const IntMatrix& m);

}  // namespace cpgenus::linalg
