// Integral LLL driven by the Gram matrix of the basis (Cohen, GTM 138,
// algorithm 2.6.7), plus Fincke-Pohst enumeration on top of it.

#include <algorithm>
#include <cmath>
#include <vector>

#include "cpgenus/errors.hpp"
#include "cpgenus/linalg.hpp"

namespace cpgenus::linalg {

namespace {

Int common_denominator(const RatMatrix& m) {
  Int l = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
  return l;
}

Int round_div(const Int& num, const Int& den) {
  // nearest integer to num/den, den > 0, ties rounded up
  Int q = 2 * num + den;
  Int r;
  Int den2 = 2 * den;
  mpz_fdiv_q(r.get_mpz_t(), q.get_mpz_t(), den2.get_mpz_t());
  return r;
}

class IntegralLll {
 public:
  IntegralLll(IntMatrix gram_of_basis, const Rat& delta)
      : a_(std::move(gram_of_basis)),
        n_(a_.rows()),
        h_(IntMatrix::identity(n_)),
        lambda_(n_, n_),
        d_(n_ + 1),
        delta_num_(delta.get_num()),
        delta_den_(delta.get_den()) {}

  void run() {
    if (n_ == 0) return;
    d_[0] = 1;
    d_[1] = a_(0, 0);
    if (d_[1] <= 0) throw DomainError("lll: basis vectors are linearly dependent");
    std::size_t k = 1, kmax = 0;
    while (k < n_) {
      if (k > kmax) {
        kmax = k;
        incremental_gram_schmidt(k);
      }
      for (;;) {
        reduce(k, k - 1);
        const Int& lam = lambda_(k, k - 1);
        Int lhs = delta_den_ * (d_[k + 1] * d_[k - 1] + lam * lam);
        Int rhs = delta_num_ * d_[k] * d_[k];
        if (lhs < rhs) {
          swap(k, kmax);
          if (k > 1) --k;
          continue;
        }
        for (std::size_t l = k - 1; l-- > 0;) reduce(k, l);
        ++k;
        break;
      }
    }
  }

  const IntMatrix& transform() const { return h_; }
  const IntMatrix& lambda() const { return lambda_; }
  const std::vector<Int>& d() const { return d_; }

 private:
  void incremental_gram_schmidt(std::size_t k) {
    for (std::size_t j = 0; j <= k; ++j) {
      Int u = a_(k, j);
      for (std::size_t i = 0; i < j; ++i) {
        u = d_[i + 1] * u - lambda_(k, i) * lambda_(j, i);
        mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), d_[i].get_mpz_t());
      }
      if (j < k) {
        lambda_(k, j) = u;
      } else {
        if (u <= 0) throw DomainError("lll: basis vectors are linearly dependent");
        d_[k + 1] = u;
      }
    }
  }

  void reduce(std::size_t k, std::size_t l) {
    if (2 * abs(lambda_(k, l)) <= d_[l + 1]) return;
    Int q = round_div(lambda_(k, l), d_[l + 1]);
    for (std::size_t c = 0; c < n_; ++c) h_(k, c) -= q * h_(l, c);
    // Gram update for b_k <- b_k - q b_l
    for (std::size_t c = 0; c < n_; ++c) a_(k, c) -= q * a_(l, c);
    for (std::size_t r = 0; r < n_; ++r) {
      if (r == k) continue;
      a_(r, k) = a_(k, r);
    }
    a_(k, k) -= q * a_(k, l);
    lambda_(k, l) -= q * d_[l + 1];
    for (std::size_t i = 0; i < l; ++i) lambda_(k, i) -= q * lambda_(l, i);
  }

  void swap(std::size_t k, std::size_t kmax) {
    h_.swap_rows(k, k - 1);
    a_.swap_rows(k, k - 1);
    for (std::size_t r = 0; r < n_; ++r) std::swap(a_(r, k), a_(r, k - 1));
    for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lambda_(k, j), lambda_(k - 1, j));
    Int lam = lambda_(k, k - 1);
    Int b = d_[k - 1] * d_[k + 1] + lam * lam;
    mpz_divexact(b.get_mpz_t(), b.get_mpz_t(), d_[k].get_mpz_t());
    Int t;
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      t = lambda_(i, k);
      lambda_(i, k) = d_[k + 1] * lambda_(i, k - 1) - lam * t;
      mpz_divexact(lambda_(i, k).get_mpz_t(), lambda_(i, k).get_mpz_t(), d_[k].get_mpz_t());
      lambda_(i, k - 1) = b * t + lam * lambda_(i, k);
      mpz_divexact(lambda_(i, k - 1).get_mpz_t(), lambda_(i, k - 1).get_mpz_t(), d_[k + 1].get_mpz_t());
    }
    d_[k] = b;
  }

  IntMatrix a_;
  std::size_t n_;
  IntMatrix h_;
  IntMatrix lambda_;
  std::vector<Int> d_;
  Int delta_num_, delta_den_;
};

IntMatrix scaled_gram(const IntMatrix& basis, const RatMatrix& gram, Int& scale) {
  if (!gram.is_square() || gram.rows() != basis.cols()) throw DomainError("lll: Gram matrix does not match basis width");
  scale = common_denominator(gram);
  IntMatrix g(gram.rows(), gram.cols());
  for (std::size_t i = 0; i < gram.rows(); ++i)
    for (std::size_t j = 0; j < gram.cols(); ++j) {
      Rat x = gram(i, j) * scale;
      g(i, j) = x.get_num();
    }
  return basis * g * basis.transpose();
}

}  // namespace

Rat quadratic_form(std::span<const Int> v, const RatMatrix& gram) {
  if (v.size() != gram.rows()) throw DomainError("quadratic_form: dimension mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    Rat row = 0;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (v[j] != 0) row += gram(i, j) * v[j];
    s += row * v[i];
  }
  return s;
}

LllResult lll(const IntMatrix& basis, const RatMatrix& gram, const Rat& delta) {
  if (delta <= Rat(1, 4) || delta >= 1) throw DomainError("lll: delta must lie in (1/4, 1)");
  LllResult res;
  IntMatrix a = scaled_gram(basis, gram, res.form_scale);
  IntegralLll algo(std::move(a), delta);
  algo.run();
  res.transform = algo.transform();
  res.basis = res.transform * basis;
  res.lambda = algo.lambda();
  res.d = algo.d();
  return res;
}

IntMatrix lll_reduce(const IntMatrix& basis, const RatMatrix& gram, const Rat& delta) {
  return lll(basis, gram, delta).basis;
}

bool is_lll_reduced(const IntMatrix& basis, const RatMatrix& gram, const Rat& delta) {
  const std::size_t n = basis.rows();
  RatMatrix g = to_rational(basis) * gram * to_rational(basis.transpose());
  RatMatrix mu(n, n);
  std::vector<Rat> bstar(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Rat s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= mu(j, k) * mu(i, k) * bstar[k];
      mu(i, j) = s / bstar[j];
    }
    Rat s = g(i, i);
    for (std::size_t k = 0; k < i; ++k) s -= mu(i, k) * mu(i, k) * bstar[k];
    if (s <= 0) return false;
    bstar[i] = s;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (abs(mu(i, j)) > Rat(1, 2)) return false;
  for (std::size_t k = 1; k < n; ++k)
    if (bstar[k] < (delta - mu(k, k - 1) * mu(k, k - 1)) * bstar[k - 1]) return false;
  return true;
}

void visit_short_vectors(const LllResult& reduced, double bound,
                         const std::function<bool(std::span<const long>)>& visit) {
  const std::size_t n = reduced.basis.rows();
  if (n == 0) return;
  std::vector<long double> bstar(n);
  std::vector<std::vector<long double>> mu(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) {
    Rat b(reduced.d[i + 1], reduced.d[i]);
    bstar[i] = static_cast<long double>(b.get_d());
    for (std::size_t j = 0; j < i; ++j) {
      Rat m(reduced.lambda(i, j), reduced.d[j + 1]);
      mu[i][j] = static_cast<long double>(m.get_d());
    }
  }
  const long double scale = static_cast<long double>(reduced.form_scale.get_d());
  const long double radius = static_cast<long double>(bound) * scale * (1.0L + 1e-9L) + 1e-9L;

  std::vector<long> x(n, 0);
  bool stop = false;
  // depth-first over levels n-1 .. 0; `upper_zero` is true while every
  // coefficient above the current level is zero (sign canonicalization)
  std::function<void(std::size_t, long double, bool)> descend = [&](std::size_t i, long double partial,
                                                                   bool upper_zero) {
    long double center = 0.0L;
    for (std::size_t j = i + 1; j < n; ++j) center -= x[j] * mu[j][i];
    long double rem = radius - partial;
    if (rem < 0) return;
    long double rad = std::sqrt(rem / bstar[i]);
    long lo = static_cast<long>(std::ceil(center - rad));
    long hi = static_cast<long>(std::floor(center + rad));
    if (upper_zero) lo = std::max(lo, 0L);
    for (long xi = lo; xi <= hi && !stop; ++xi) {
      long double y = xi - center;
      long double np = partial + y * y * bstar[i];
      if (np > radius) continue;
      x[i] = xi;
      if (i == 0) {
        if (upper_zero && xi == 0) continue;
        if (!visit(x)) stop = true;
      } else {
        descend(i - 1, np, upper_zero && xi == 0);
      }
    }
    x[i] = 0;
  };
  descend(n - 1, 0.0L, true);
}

std::vector<ShortVector> enumerate_short_vectors(const IntMatrix& basis, const RatMatrix& gram, const Rat& bound) {
  if (bound < 0) throw DomainError("enumerate_short_vectors: bound must be nonnegative");
  if (!is_positive_definite(gram)) throw DomainError("enumerate_short_vectors: form is not positive definite");
  std::vector<ShortVector> out;
  if (basis.rows() == 0) return out;
  LllResult red = lll(basis, gram);
  const std::size_t k = basis.rows();
  visit_short_vectors(red, bound.get_d(), [&](std::span<const long> c) {
    std::vector<Int> coeff(k);
    for (std::size_t i = 0; i < k; ++i) coeff[i] = c[i];
    ShortVector sv;
    sv.vector = std::span<const Int>(coeff) * red.basis;
    sv.norm = quadratic_form(sv.vector, gram);
    if (sv.norm > bound) return true;
    sv.coords = std::span<const Int>(coeff) * red.transform;
    auto first = std::find_if(sv.vector.begin(), sv.vector.end(), [](const Int& v) { return v != 0; });
    if (first != sv.vector.end() && *first < 0) {
      for (auto& v : sv.vector) v = -v;
      for (auto& v : sv.coords) v = -v;
    }
    out.push_back(std::move(sv));
    return true;
  });
  std::sort(out.begin(), out.end(), [](const ShortVector& a, const ShortVector& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    return a.vector < b.vector;
  });
  return out;
}

}  // namespace cpgenus::linalg
