#include "cpgenus/cyclotomic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "cpgenus/arith.hpp"
#include "cpgenus/errors.hpp"

namespace cpgenus::cyclo {

namespace {

void check_p(std::uint64_t p) {
  if (!arith::is_prime(p)) throw DomainError("p = " + std::to_string(p) + " is not prime");
}

void check_same_p(std::uint64_t a, std::uint64_t b) {
  if (a != b) throw DomainError("mismatched primes " + std::to_string(a) + " and " + std::to_string(b));
}

// Reduce a length-p vector in Z[x]/(x^p - 1) to the power basis of Z[zeta]:
// x^(p-1) = -(1 + x + ... + x^(p-2)).
std::vector<Int> reduce_cyclic(std::vector<Int> v) {
  const std::size_t p = v.size();
  const Int top = v[p - 1];
  v.pop_back();
  if (top != 0)
    for (auto& c : v) c -= top;
  return v;
}

}  // namespace

/*{{{ CycloElem */
CycloElem::CycloElem(std::uint64_t p, std::vector<Int> coeffs) : p_(p), coeffs_(std::move(coeffs)) {
  check_p(p);
  if (coeffs_.size() != p - 1)
    throw DomainError("CycloElem: expected " + std::to_string(p - 1) + " coefficients, got " +
                      std::to_string(coeffs_.size()));
}

CycloElem CycloElem::zero(std::uint64_t p) { return {p, std::vector<Int>(p - 1)}; }

CycloElem CycloElem::integer(std::uint64_t p, const Int& n) {
  CycloElem x = zero(p);
  x.coeffs_[0] = n;
  return x;
}

CycloElem CycloElem::zeta_power(std::uint64_t p, std::int64_t k) {
  check_p(p);
  std::vector<Int> v(p);
  std::int64_t r = k % static_cast<std::int64_t>(p);
  if (r < 0) r += static_cast<std::int64_t>(p);
  v[static_cast<std::size_t>(r)] = 1;
  return {p, reduce_cyclic(std::move(v))};
}

bool CycloElem::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Int& c) { return c == 0; });
}

CycloElem operator+(const CycloElem& a, const CycloElem& b) {
  check_same_p(a.p_, b.p_);
  CycloElem r = a;
  for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
  return r;
}

CycloElem operator-(const CycloElem& a, const CycloElem& b) {
  check_same_p(a.p_, b.p_);
  CycloElem r = a;
  for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] -= b.coeffs_[i];
  return r;
}

CycloElem operator*(const CycloElem& a, const CycloElem& b) {
  check_same_p(a.p_, b.p_);
  const std::size_t p = a.p_;
  std::vector<Int> v(p);
  for (std::size_t i = 0; i + 1 < p; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j + 1 < p; ++j) {
      if (b.coeffs_[j] == 0) continue;
      v[(i + j) % p] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return {a.p_, reduce_cyclic(std::move(v))};
}

CycloElem operator*(const Int& s, const CycloElem& a) {
  CycloElem r = a;
  for (auto& c : r.coeffs_) c *= s;
  return r;
}

CycloElem CycloElem::galois(std::uint64_t k) const {
  if (k % p_ == 0) throw DomainError("galois: exponent divisible by p");
  std::vector<Int> v(p_);
  for (std::size_t i = 0; i + 1 < p_; ++i) v[(i * k) % p_] += coeffs_[i];
  return {p_, reduce_cyclic(std::move(v))};
}

IntMatrix CycloElem::multiplication_matrix() const {
  const std::size_t n = p_ - 1;
  IntMatrix m(n, n);
  CycloElem cur = *this;
  const CycloElem z = zeta(p_);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) m(j, i) = cur.coeffs_[i];
    cur = cur * z;
  }
  return m;
}

Int CycloElem::trace() const {
  Int t = coeffs_[0] * static_cast<unsigned long>(p_ - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) t -= coeffs_[i];
  return t;
}

std::string CycloElem::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Int& c = coeffs_[i];
    if (c == 0) continue;
    Int a = abs(c);
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    if (i == 0 || a != 1) os << a.get_str();
    if (i == 0) {
    } else {
      if (a != 1) os << "*";
      os << "z";
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  return first ? "0" : os.str();
}

CycloElem elem_mul(const CycloElem& x, const CycloElem& y) { return x * y; }

Int elem_norm(const CycloElem& x) { return linalg::determinant(x.multiplication_matrix()); }

std::optional<CycloElem> exact_divide(const CycloElem& x, const CycloElem& y) {
  check_same_p(x.p(), y.p());
  if (y.is_zero()) throw DomainError("exact_divide: division by zero");
  std::vector<Rat> rhs(x.coeffs().begin(), x.coeffs().end());
  auto q = linalg::solve_left(linalg::to_rational(y.multiplication_matrix()), rhs);
  if (!q) return std::nullopt;
  std::vector<Int> c;
  for (const auto& v : *q) {
    if (v.get_den() != 1) return std::nullopt;
    c.push_back(v.get_num());
  }
  return CycloElem(x.p(), std::move(c));
}
/*}}}*/

/*{{{ GaloisElement */
GaloisElement::GaloisElement(std::uint64_t p, std::int64_t k) : p_(p) {
  check_p(p);
  std::int64_t r = k % static_cast<std::int64_t>(p);
  if (r < 0) r += static_cast<std::int64_t>(p);
  if (r == 0) throw DomainError("GaloisElement: k must be prime to p");
  k_ = static_cast<std::uint64_t>(r);
}

GaloisElement GaloisElement::compose(const GaloisElement& other) const {
  check_same_p(p_, other.p_);
  return GaloisElement(p_, static_cast<std::int64_t>((k_ * other.k_) % p_));
}
/*}}}*/

/*{{{ ideals */
CycloIdeal ideal_from_rows(std::uint64_t p, const IntMatrix& rows, const Int& modulus) {
  IntMatrix h = linalg::hnf_modular(rows, modulus);
  LatticeBasis l = LatticeBasis::from_generators(h);
  CPGENUS_CHECK(l.rank() == p - 1, "ideal lattice is not of full rank");
  return CycloIdeal(p, std::move(l));
}

CycloIdeal CycloIdeal::from_hnf(std::uint64_t p, const IntMatrix& hnf) {
  check_p(p);
  const std::size_t n = p - 1;
  if (hnf.rows() != n || hnf.cols() != n) throw DomainError("ideal basis must be " + std::to_string(n) + "x" + std::to_string(n));
  LatticeBasis l = LatticeBasis::from_generators(hnf);
  if (l.rank() != n) throw DomainError("ideal basis is not of full rank");
  if (!(l.basis() == hnf)) throw DomainError("ideal basis is not in Hermite normal form");
  CycloIdeal a(p, std::move(l));
  const CycloElem z = CycloElem::zeta(p);
  for (const auto& b : a.basis_elements())
    if (!a.contains(z * b)) throw DomainError("lattice is not closed under multiplication by zeta");
  return a;
}

CycloIdeal CycloIdeal::unit(std::uint64_t p) {
  check_p(p);
  return CycloIdeal(p, LatticeBasis::full(p - 1));
}

Int CycloIdeal::norm() const {
  Int n = 1;
  for (std::size_t i = 0; i < p_ - 1; ++i) n *= hnf()(i, i);
  return n;
}

bool CycloIdeal::contains(const CycloElem& x) const {
  check_same_p(p_, x.p());
  return lattice_.contains(x.coeffs());
}

bool CycloIdeal::is_unit() const { return norm() == 1; }

std::vector<CycloElem> CycloIdeal::basis_elements() const {
  std::vector<CycloElem> out;
  for (std::size_t i = 0; i < hnf().rows(); ++i) out.emplace_back(p_, hnf().row_vector(i));
  return out;
}

IntMatrix CycloIdeal::zeta_action() const {
  const std::size_t n = p_ - 1;
  IntMatrix t(n, n);
  const CycloElem z = CycloElem::zeta(p_);
  auto basis = basis_elements();
  for (std::size_t j = 0; j < n; ++j) {
    auto c = lattice_.coordinates((z * basis[j]).coeffs());
    CPGENUS_CHECK(c.has_value(), "ideal not closed under zeta");
    for (std::size_t i = 0; i < n; ++i) t(i, j) = (*c)[i];
  }
  return t;
}

CycloIdeal ideal_from_generators(std::span<const CycloElem> gens) {
  if (gens.empty()) throw DomainError("ideal_from_generators: no generators");
  const std::uint64_t p = gens.front().p();
  Int modulus = 0;
  IntMatrix rows(0, p - 1);
  const CycloElem z = CycloElem::zeta(p);
  for (const auto& g : gens) {
    check_same_p(p, g.p());
    if (g.is_zero()) continue;
    Int n = abs(elem_norm(g));
    mpz_gcd(modulus.get_mpz_t(), modulus.get_mpz_t(), n.get_mpz_t());
    CycloElem cur = g;
    for (std::size_t j = 0; j + 1 < p; ++j) {
      rows.append_row(cur.coeffs());
      cur = cur * z;
    }
  }
  if (modulus == 0) throw DomainError("ideal_from_generators: all generators are zero");
  return ideal_from_rows(p, rows, modulus);
}

CycloIdeal ideal_mul(const CycloIdeal& a, const CycloIdeal& b) {
  check_same_p(a.p(), b.p());
  auto ea = a.basis_elements();
  auto eb = b.basis_elements();
  IntMatrix rows(0, a.p() - 1);
  for (const auto& x : ea)
    for (const auto& y : eb) rows.append_row((x * y).coeffs());
  return ideal_from_rows(a.p(), rows, a.norm() * b.norm());
}

CycloIdeal ideal_power(const CycloIdeal& a, unsigned long e) {
  CycloIdeal r = CycloIdeal::unit(a.p());
  CycloIdeal base = a;
  while (e) {
    if (e & 1) r = ideal_mul(r, base);
    e >>= 1;
    if (e) base = ideal_mul(base, base);
  }
  return r;
}

Int ideal_norm(const CycloIdeal& a) { return a.norm(); }

std::vector<CycloElem> ideal_generators(const CycloIdeal& a) {
  const std::uint64_t p = a.p();
  IntMatrix red = linalg::lll_reduce(a.hnf(), linalg::to_rational(trace_form(p)));
  std::vector<CycloElem> gens;
  for (std::size_t r = 0; r < red.rows(); ++r) {
    gens.emplace_back(p, red.row_vector(r));
    if (ideal_from_generators(gens) == a) return gens;
  }
  throw InvariantError("ideal basis does not generate the ideal");
}

CycloIdeal principal_colon(const CycloElem& alpha, std::span<const CycloElem> gens) {
  const std::uint64_t p = alpha.p();
  const std::size_t n = p - 1;
  const std::size_t k = gens.size();
  if (alpha.is_zero()) throw DomainError("principal_colon: alpha must be nonzero");
  if (k == 0) throw DomainError("principal_colon: no generators");
  // x g in (alpha)  <=>  x g (N / alpha) = 0 mod N, with N = N(alpha)
  const Int norm = elem_norm(alpha);
  const Int modulus = abs(norm);
  auto cofactor = exact_divide(CycloElem::integer(p, norm), alpha);
  CPGENUS_CHECK(cofactor.has_value(), "alpha does not divide its norm");
  IntMatrix rows(n + k * n, k * n + n);
  for (std::size_t i = 0; i < k; ++i) {
    check_same_p(p, gens[i].p());
    IntMatrix m = (gens[i] * *cofactor).multiplication_matrix();
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) mpz_fdiv_r(rows(r, i * n + c).get_mpz_t(), m(r, c).get_mpz_t(), modulus.get_mpz_t());
  }
  for (std::size_t r = 0; r < n; ++r) rows(r, k * n + r) = 1;
  for (std::size_t j = 0; j < k * n; ++j) rows(n + j, j) = modulus;
  // the lattice contains modulus * Z^(kn+n); its HNF rows vanishing on the
  // first k*n columns span the colon ideal
  IntMatrix h = linalg::hnf_modular(rows, modulus);
  IntMatrix out(0, n);
  for (std::size_t r = 0; r < h.rows(); ++r) {
    auto row = h.row(r);
    if (std::any_of(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k * n), [](const Int& x) { return x != 0; }))
      continue;
    out.append_row(row.subspan(k * n));
  }
  return ideal_from_rows(p, out, modulus);
}

ReducedIdeal reduce_ideal_class(const CycloIdeal& a) {
  const std::uint64_t p = a.p();
  const RatMatrix form = linalg::to_rational(trace_form(p));
  ReducedIdeal cur{a, false};
  for (int iter = 0; iter < 16 && !cur.ideal.is_unit(); ++iter) {
    IntMatrix red = linalg::lll_reduce(cur.ideal.hnf(), form);
    std::optional<CycloElem> alpha;
    Int best;
    for (std::size_t r = 0; r < red.rows(); ++r) {
      CycloElem x(p, red.row_vector(r));
      Int nx = abs(elem_norm(x));
      if (!alpha || nx < best) {
        alpha = x;
        best = nx;
      }
    }
    const Int cur_norm = cur.ideal.norm();
    CPGENUS_CHECK(best % cur_norm == 0, "element norm not divisible by the ideal norm");
    const Int next_norm = best / cur_norm;
    if (next_norm >= cur_norm) break;
    CycloIdeal next = principal_colon(*alpha, ideal_generators(cur.ideal));
    CPGENUS_CHECK(next.norm() == next_norm, "reduced ideal has unexpected norm");
    cur = {std::move(next), !cur.inverted};
  }
  return cur;
}

CycloElem galois_apply(const GaloisElement& s, const CycloElem& x) {
  check_same_p(s.p(), x.p());
  return x.galois(s.k());
}

CycloIdeal galois_apply(const GaloisElement& s, const CycloIdeal& a) {
  check_same_p(s.p(), a.p());
  IntMatrix rows(0, a.p() - 1);
  for (const auto& b : a.basis_elements()) rows.append_row(b.galois(s.k()).coeffs());
  return ideal_from_rows(a.p(), rows, a.norm());
}

std::uint64_t split_prime_root(std::uint64_t p, std::uint64_t q) {
  check_p(p);
  if (!arith::is_prime(q)) throw DomainError("q = " + std::to_string(q) + " is not prime");
  if (q % p != 1) throw DomainError("q = " + std::to_string(q) + " is not 1 mod " + std::to_string(p));
  for (std::uint64_t r = 2; r < q; ++r)
    if (arith::powmod(r, p, q) == 1) return r;
  throw InvariantError("no element of order p modulo q");
}

CycloIdeal split_prime_ideal(std::uint64_t p, std::uint64_t q) {
  const std::uint64_t r = split_prime_root(p, q);
  const std::vector<CycloElem> gens{CycloElem::integer(p, Int(static_cast<unsigned long>(q))),
                                    CycloElem::zeta(p) - CycloElem::integer(p, Int(static_cast<unsigned long>(r)))};
  IntMatrix rows(0, p - 1);
  const CycloElem z = CycloElem::zeta(p);
  for (const auto& g : gens) {
    CycloElem cur = g;
    for (std::size_t j = 0; j + 1 < p; ++j) {
      rows.append_row(cur.coeffs());
      cur = cur * z;
    }
  }
  CycloIdeal a = ideal_from_rows(p, rows, Int(static_cast<unsigned long>(q)));
  CPGENUS_CHECK(a.norm() == static_cast<unsigned long>(q), "split prime ideal has wrong norm");
  return a;
}
/*}}}*/

/*{{{ trace form, principality */
IntMatrix trace_form(std::uint64_t p) {
  check_p(p);
  const std::size_t n = p - 1;
  IntMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = (i == j) ? static_cast<long>(p) - 1 : -1;
  return g;
}

RatMatrix minkowski_gram(const CycloIdeal& a, unsigned precision_bits) {
  if (precision_bits == 0) throw DomainError("minkowski_gram: precision too low to certify positive definiteness");
  const IntMatrix& b = a.hnf();
  RatMatrix g = linalg::to_rational(b * trace_form(a.p()) * b.transpose());
  CPGENUS_CHECK(linalg::is_positive_definite(g), "trace form is not positive definite");
  return g;
}

PrincipalityVerdict is_principal(const CycloIdeal& a, const Rat& radius_multiplier) {
  if (radius_multiplier <= 0) throw DomainError("is_principal: radius multiplier must be positive");
  const std::uint64_t p = a.p();
  const std::size_t n = p - 1;
  const Int norm = a.norm();

  // bound = m * (p-1) * N^(2/(p-1)), via log N to survive huge norms
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, norm.get_mpz_t());
  const double log_n = std::log(mant) + static_cast<double>(exp2) * std::numbers::ln2;
  const double bound = radius_multiplier.get_d() * static_cast<double>(n) * std::exp(2.0 * log_n / static_cast<double>(n));

  const RatMatrix form = linalg::to_rational(trace_form(p));
  linalg::LllResult red = linalg::lll(a.hnf(), form);

  // complex embeddings of the reduced basis: zeta -> exp(2 pi i k / p)
  using cplx = std::complex<long double>;
  std::vector<std::vector<cplx>> emb(n, std::vector<cplx>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 1; k <= n; ++k) {
      cplx s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        long double ang = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>((i * k) % p) /
                          static_cast<long double>(p);
        s += static_cast<long double>(red.basis(j, i).get_d()) * cplx(std::cos(ang), std::sin(ang));
      }
      emb[j][k - 1] = s;
    }

  PrincipalityVerdict verdict{PrincipalityVerdict::Kind::not_found_within_bound, std::nullopt, bound, 0};
  std::optional<CycloElem> best;
  Int best_t2;
  std::vector<cplx> e(n);
  linalg::visit_short_vectors(red, bound, [&](std::span<const long> c) {
    ++verdict.vectors_examined;
    std::fill(e.begin(), e.end(), cplx(0));
    for (std::size_t j = 0; j < n; ++j) {
      if (c[j] == 0) continue;
      const long double cj = static_cast<long double>(c[j]);
      for (std::size_t k = 0; k < n; ++k) e[k] += cj * emb[j][k];
    }
    long double lg = 0;
    for (const auto& v : e) lg += std::log(std::abs(v));
    if (std::fabs(static_cast<double>(lg) - log_n) > 1e-6 * std::max(1.0, log_n)) return true;
    std::vector<Int> coeff(n);
    for (std::size_t j = 0; j < n; ++j) coeff[j] = c[j];
    CycloElem g(p, std::span<const Int>(coeff) * red.basis);
    if (abs(elem_norm(g)) != norm) return true;
    auto first = std::find_if(g.coeffs().begin(), g.coeffs().end(), [](const Int& x) { return x != 0; });
    if (*first < 0) g = Int(-1) * g;
    Int t2 = (g * g.conjugate()).trace();
    if (!best || t2 < best_t2 || (t2 == best_t2 && g.coeffs() < best->coeffs())) {
      best = g;
      best_t2 = t2;
    }
    return true;
  });
  if (best) {
    CPGENUS_CHECK(a.contains(*best) && abs(elem_norm(*best)) == norm, "principal generator failed verification");
    verdict.kind = PrincipalityVerdict::Kind::principal;
    verdict.generator = best;
  }
  return verdict;
}
/*}}}*/

}  // namespace cpgenus::cyclo
