#include "cpgenus/linalg.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

#include "cpgenus/errors.hpp"

namespace cpgenus::linalg {

/*{{{ Matrix<T> */
template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> init) {
  rows_ = init.size();
  cols_ = rows_ ? init.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : init) {
    if (r.size() != cols_) throw DomainError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

template <class T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

template <class T>
void Matrix<T>::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

template <class T>
void Matrix<T>::append_row(std::span<const T> r) {
  if (rows_ == 0 && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_) throw DomainError("append_row: width mismatch");
  data_.insert(data_.end(), r.begin(), r.end());
  ++rows_;
}

template <class T>
Matrix<T> Matrix<T>::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

template <class T>
Matrix<T> Matrix<T>::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  Matrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

template <class T>
bool Matrix<T>::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
}

template class Matrix<Int>;
template class Matrix<Rat>;
/*}}}*/

/*{{{ arithmetic */
namespace {

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw DomainError("matrix product: shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  T tmp;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        tmp = aik * b(k, j);
        c(i, j) += tmp;
      }
    }
  return c;
}

template <class T>
Matrix<T> matrix_power(const Matrix<T>& m, unsigned long e) {
  if (!m.is_square()) throw DomainError("power of non-square matrix");
  Matrix<T> result = Matrix<T>::identity(m.rows());
  Matrix<T> base = m;
  while (e) {
    if (e & 1) result = multiply(result, base);
    e >>= 1;
    if (e) base = multiply(base, base);
  }
  return result;
}

}  // namespace

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) { return multiply(a, b); }
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) { return multiply(a, b); }

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("matrix sum: shape mismatch");
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("matrix difference: shape mismatch");
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

std::vector<Int> operator*(std::span<const Int> v, const IntMatrix& m) {
  if (v.size() != m.rows()) throw DomainError("vector-matrix product: shape mismatch");
  std::vector<Int> out(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

std::vector<Int> operator*(const IntMatrix& m, std::span<const Int> v) {
  if (v.size() != m.cols()) throw DomainError("matrix-vector product: shape mismatch");
  std::vector<Int> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

IntMatrix power(const IntMatrix& m, unsigned long e) { return matrix_power(m, e); }

IntMatrix random_unimodular(std::size_t n, std::mt19937_64& rng, long bound, std::size_t steps) {
  if (bound < 1) throw DomainError("random_unimodular: bound must be positive");
  IntMatrix u = IntMatrix::identity(n);
  if (n == 0) return u;
  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t i = rng() % n;
    if (n == 1 || rng() % 4 == 0) {
      for (std::size_t c = 0; c < n; ++c) u(i, c) = -u(i, c);
      continue;
    }
    std::size_t j = rng() % (n - 1);
    if (j >= i) ++j;
    long k = static_cast<long>(rng() % static_cast<std::uint64_t>(bound)) + 1;
    if (rng() % 2) k = -k;
    // row i += k * row j
    for (std::size_t c = 0; c < n; ++c) u(i, c) += k * u(j, c);
  }
  return u;
}
RatMatrix power(const RatMatrix& m, unsigned long e) { return matrix_power(m, e); }

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

IntMatrix to_integer(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1) throw DomainError("matrix entry is not integral");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

IntMatrix block_diagonal(std::span<const IntMatrix> blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) {
    if (!b.is_square()) throw DomainError("block_diagonal: non-square block");
    n += b.rows();
  }
  IntMatrix m(n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) m(off + i, off + j) = b(i, j);
    off += b.rows();
  }
  return m;
}
/*}}}*/

/*{{{ determinants, solving */
Int determinant(const IntMatrix& m) {
  if (!m.is_square()) throw DomainError("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t i = k + 1;
      while (i < n && a(i, k) == 0) ++i;
      if (i == n) return 0;
      a.swap_rows(i, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

Rat determinant(const RatMatrix& m) {
  if (!m.is_square()) throw DomainError("determinant of non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix a = m;
  Rat det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a(piv, k) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      a.swap_rows(piv, k);
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rat f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

std::size_t rank(const IntMatrix& m) { return hnf_rows(m).rows(); }

namespace {

// Gauss-Jordan on [a | b]; returns the pivot columns, or nullopt-like empty
// flag through `consistent`.
std::vector<std::size_t> gauss_jordan(RatMatrix& a, std::size_t ncols_left) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols_left && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    a.swap_rows(piv, r);
    Rat inv = 1 / a(r, c);
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      Rat f = a(i, c);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::optional<std::vector<Rat>> solve_left(const RatMatrix& m, std::span<const Rat> rhs) {
  // x * m = rhs  <=>  m^T x^T = rhs^T
  if (rhs.size() != m.cols()) throw DomainError("solve_left: shape mismatch");
  RatMatrix aug(m.cols(), m.rows() + 1);
  for (std::size_t i = 0; i < m.cols(); ++i) {
    for (std::size_t j = 0; j < m.rows(); ++j) aug(i, j) = m(j, i);
    aug(i, m.rows()) = rhs[i];
  }
  auto pivots = gauss_jordan(aug, m.rows());
  for (std::size_t i = pivots.size(); i < aug.rows(); ++i)
    if (aug(i, m.rows()) != 0) return std::nullopt;
  std::vector<Rat> x(m.rows());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, m.rows());
  return x;
}

std::optional<RatMatrix> inverse(const RatMatrix& m) {
  if (!m.is_square()) throw DomainError("inverse of non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  if (gauss_jordan(aug, n).size() != n) return std::nullopt;
  return aug.block(0, n, n, n);
}

bool is_positive_definite(const RatMatrix& gram) {
  if (!gram.is_square()) return false;
  for (std::size_t i = 0; i < gram.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (gram(i, j) != gram(j, i)) return false;
  RatMatrix a = gram;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rat f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return true;
}
/*}}}*/

/*{{{ Hermite normal form */
namespace {

// rows (r, i) <- [[s, t], [-b, a]] * rows (r, i); determinant s*a + t*b = 1.
void mix_rows(IntMatrix& m, std::size_t r, std::size_t i, const Int& s, const Int& t,
              const Int& a, const Int& b) {
  Int x, y;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    x = m(r, c);
    y = m(i, c);
    m(r, c) = s * x + t * y;
    m(i, c) = a * y - b * x;
  }
}

void sub_row_multiple(IntMatrix& m, std::size_t dst, std::size_t src, const Int& q, std::size_t from = 0) {
  if (q == 0) return;
  for (std::size_t c = from; c < m.cols(); ++c) m(dst, c) -= q * m(src, c);
}

void negate_row(IntMatrix& m, std::size_t r) {
  for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = -m(r, c);
}

std::size_t leading_column(const IntMatrix& m, std::size_t r) {
  std::size_t c = 0;
  while (c < m.cols() && m(r, c) == 0) ++c;
  return c;
}

// Rows are inserted one at a time into a fully reduced echelon prefix, which
// keeps intermediate entries bounded.
void hnf_in_place(IntMatrix& h, IntMatrix* u) {
  const std::size_t rows = h.rows(), cols = h.cols();
  auto swap = [&](std::size_t x, std::size_t y) {
    h.swap_rows(x, y);
    if (u) u->swap_rows(x, y);
  };
  std::vector<std::size_t> pivots;
  Int g, s, t, a, b, q;
  std::size_t r = 0;
  for (std::size_t k = 0; k < rows; ++k) {
    swap(r, k);
    std::size_t idx = 0;
    std::size_t c = leading_column(h, r);
    while (c < cols) {
      while (idx < pivots.size() && pivots[idx] < c) ++idx;
      if (idx == pivots.size() || pivots[idx] != c) break;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h(idx, c).get_mpz_t(), h(r, c).get_mpz_t());
      mpz_divexact(a.get_mpz_t(), h(idx, c).get_mpz_t(), g.get_mpz_t());
      mpz_divexact(b.get_mpz_t(), h(r, c).get_mpz_t(), g.get_mpz_t());
      mix_rows(h, idx, r, s, t, a, b);
      if (u) mix_rows(*u, idx, r, s, t, a, b);
      c = leading_column(h, r);
    }
    if (c < cols) {
      for (std::size_t i = r; i > idx; --i) swap(i, i - 1);
      pivots.insert(pivots.begin() + static_cast<std::ptrdiff_t>(idx), c);
      ++r;
    }
    for (std::size_t i = 0; i < r; ++i) {
      const std::size_t j = pivots[i];
      if (h(i, j) < 0) {
        negate_row(h, i);
        if (u) negate_row(*u, i);
      }
      for (std::size_t k2 = 0; k2 < i; ++k2) {
        mpz_fdiv_q(q.get_mpz_t(), h(k2, j).get_mpz_t(), h(i, j).get_mpz_t());
        if (q == 0) continue;
        sub_row_multiple(h, k2, i, q, j);
        if (u) sub_row_multiple(*u, k2, i, q);
      }
    }
  }
}

}  // namespace

HnfResult hnf(const IntMatrix& m) {
  HnfResult res{m, IntMatrix::identity(m.rows())};
  hnf_in_place(res.h, &res.u);
  return res;
}

IntMatrix hnf_rows(const IntMatrix& m) {
  IntMatrix h = m;
  hnf_in_place(h, nullptr);
  std::size_t r = 0;
  while (r < h.rows() && !std::all_of(h.row(r).begin(), h.row(r).end(), [](const Int& x) { return x == 0; })) ++r;
  return h.block(0, 0, r, h.cols());
}

IntMatrix hnf_modular(const IntMatrix& gens, const Int& modulus) {
  if (modulus <= 0) throw DomainError("hnf_modular: modulus must be positive");
  const std::size_t n = gens.cols();
  IntMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) h(i, i) = modulus;
  std::vector<Int> r(n);
  Int g, s, t, a, b, x, y;
  for (std::size_t gi = 0; gi < gens.rows(); ++gi) {
    for (std::size_t c = 0; c < n; ++c) mpz_fdiv_r(r[c].get_mpz_t(), gens(gi, c).get_mpz_t(), modulus.get_mpz_t());
    for (std::size_t j = 0; j < n; ++j) {
      if (r[j] == 0) continue;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h(j, j).get_mpz_t(), r[j].get_mpz_t());
      mpz_divexact(a.get_mpz_t(), h(j, j).get_mpz_t(), g.get_mpz_t());
      mpz_divexact(b.get_mpz_t(), r[j].get_mpz_t(), g.get_mpz_t());
      for (std::size_t c = j; c < n; ++c) {
        x = h(j, c);
        y = r[c];
        h(j, c) = s * x + t * y;
        r[c] = a * y - b * x;
        if (c > j) {
          mpz_fdiv_r(h(j, c).get_mpz_t(), h(j, c).get_mpz_t(), modulus.get_mpz_t());
          mpz_fdiv_r(r[c].get_mpz_t(), r[c].get_mpz_t(), modulus.get_mpz_t());
        }
      }
    }
  }
  Int q;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t k = 0; k < j; ++k) {
      mpz_fdiv_q(q.get_mpz_t(), h(k, j).get_mpz_t(), h(j, j).get_mpz_t());
      sub_row_multiple(h, k, j, q, j);
    }
  return h;
}
/*}}}*/

/*{{{ Smith normal form */
namespace {

void sub_col_multiple(IntMatrix& m, std::size_t dst, std::size_t src, const Int& q) {
  if (q == 0) return;
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, dst) -= q * m(r, src);
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, a), m(r, b));
}

void snf_in_place(IntMatrix& d, IntMatrix* u, IntMatrix* v) {
  const std::size_t rows = d.rows(), cols = d.cols();
  Int q, rem;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          if (d(i, j) == 0) continue;
          if (pi == rows || abs(d(i, j)) < abs(d(pi, pj))) {
            pi = i;
            pj = j;
          }
        }
      if (pi == rows) return;
      d.swap_rows(t, pi);
      if (u) u->swap_rows(t, pi);
      swap_cols(d, t, pj);
      if (v) swap_cols(*v, t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d(i, t) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
        sub_row_multiple(d, i, t, q);
        if (u) sub_row_multiple(*u, i, t, q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d(t, j) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
        sub_col_multiple(d, j, t, q);
        if (v) sub_col_multiple(*v, j, t, q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j) {
          mpz_tdiv_r(rem.get_mpz_t(), d(i, j).get_mpz_t(), d(t, t).get_mpz_t());
          if (rem != 0) {
            bad = i;
            break;
          }
        }
      if (bad == rows) break;
      // row t += row bad: brings a non-multiple into the pivot row
      sub_row_multiple(d, t, bad, Int(-1));
      if (u) sub_row_multiple(*u, t, bad, Int(-1));
    }
    if (d(t, t) < 0) {
      negate_row(d, t);
      if (u) negate_row(*u, t);
    }
  }
}

}  // namespace

std::vector<Int> SnfResult::diagonal() const {
  std::vector<Int> out;
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d(i, i));
  return out;
}

SnfResult snf(const IntMatrix& m) {
  SnfResult res{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.cols())};
  snf_in_place(res.d, &res.u, &res.v);
  return res;
}

std::vector<Int> elementary_divisors(const IntMatrix& m) {
  IntMatrix d = m;
  snf_in_place(d, nullptr, nullptr);
  std::vector<Int> out;
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d(i, i));
  return out;
}
/*}}}*/

/*{{{ LatticeBasis, kernels, quotients */
LatticeBasis LatticeBasis::from_generators(const IntMatrix& gens) {
  LatticeBasis l(gens.cols());
  l.basis_ = hnf_rows(gens);
  return l;
}

LatticeBasis LatticeBasis::full(std::size_t n) {
  LatticeBasis l(n);
  l.basis_ = IntMatrix::identity(n);
  return l;
}

std::optional<std::vector<Int>> LatticeBasis::coordinates(std::span<const Int> v) const {
  if (v.size() != ambient_) throw DomainError("lattice membership: dimension mismatch");
  std::vector<Int> res(v.begin(), v.end());
  std::vector<Int> coords(rank());
  Int rem;
  std::size_t col = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    while (basis_(i, col) == 0) {
      if (res[col] != 0) return std::nullopt;
      ++col;
    }
    mpz_tdiv_qr(coords[i].get_mpz_t(), rem.get_mpz_t(), res[col].get_mpz_t(), basis_(i, col).get_mpz_t());
    if (rem != 0) return std::nullopt;
    if (coords[i] != 0)
      for (std::size_t c = col; c < ambient_; ++c) res[c] -= coords[i] * basis_(i, c);
    ++col;
  }
  for (const auto& x : res)
    if (x != 0) return std::nullopt;
  return coords;
}

bool LatticeBasis::contains(const LatticeBasis& other) const {
  if (other.ambient_ != ambient_) return false;
  for (std::size_t i = 0; i < other.rank(); ++i)
    if (!contains(other.basis_.row(i))) return false;
  return true;
}

Int LatticeBasis::gram_determinant() const { return determinant(basis_ * basis_.transpose()); }

LatticeBasis saturated_kernel(const IntMatrix& m) {
  auto [h, u] = hnf(m);
  std::size_t r = 0;
  while (r < h.rows() && !std::all_of(h.row(r).begin(), h.row(r).end(), [](const Int& x) { return x == 0; })) ++r;
  return LatticeBasis::from_generators(u.block(r, 0, u.rows() - r, u.cols()));
}

std::vector<Int> lattice_index_group(const LatticeBasis& sub, const LatticeBasis& sup) {
  if (sub.ambient_dim() != sup.ambient_dim()) throw DomainError("lattice_index_group: ambient dimensions differ");
  if (sub.rank() != sup.rank()) throw DomainError("lattice_index_group: ranks differ");
  IntMatrix x(sub.rank(), sup.rank());
  for (std::size_t i = 0; i < sub.rank(); ++i) {
    auto c = sup.coordinates(sub.basis().row(i));
    if (!c) throw DomainError("lattice_index_group: sublattice is not contained in superlattice");
    for (std::size_t j = 0; j < c->size(); ++j) x(i, j) = (*c)[j];
  }
  std::vector<Int> out;
  for (auto& d : elementary_divisors(x))
    if (d != 1) out.push_back(d);
  return out;
}
/*}}}*/

/*{{{ text format */
namespace {

template <class T>
Matrix<T> read_matrix_impl(std::istream& in) {
  long rows = -1, cols = -1;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) throw DomainError("matrix text: expected \"rows cols\" header");
  Matrix<T> m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  std::string tok;
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) {
      if (!(in >> tok)) throw DomainError("matrix text: too few entries");
      try {
        T v(tok);
        if constexpr (std::is_same_v<T, Rat>) {
          if (v.get_den() == 0) throw DomainError("matrix text: zero denominator");
          v.canonicalize();
        }
        m(i, j) = v;
      } catch (const std::invalid_argument&) {
        throw DomainError("matrix text: bad entry '" + tok + "'");
      }
    }
  return m;
}

template <class T>
void write_matrix_impl(std::ostream& out, const Matrix<T>& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j).get_str();
    out << '\n';
  }
}

}  // namespace

IntMatrix read_int_matrix(std::istream& in) { return read_matrix_impl<Int>(in); }
RatMatrix read_rat_matrix(std::istream& in) { return read_matrix_impl<Rat>(in); }
void write_matrix(std::ostream& out, const IntMatrix& m) { write_matrix_impl(out, m); }
void write_matrix(std::ostream& out, const RatMatrix& m) { write_matrix_impl(out, m); }

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  write_matrix(os, m);
  return os.str();
}
/*}}}*/

}  // namespace cpgenus::linalg
