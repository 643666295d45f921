#pragma once

// Arithmetic in Z[zeta_p] in the power basis 1, zeta, ..., zeta^(p-2), and in
// its nonzero integral ideals, which are stored as full-rank sublattices of
// Z^(p-1) in Hermite normal form.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpgenus/linalg.hpp"

namespace cpgenus::cyclo {

using linalg::Int;
using linalg::IntMatrix;
using linalg::LatticeBasis;
using linalg::Rat;
using linalg::RatMatrix;

// An element of Z[zeta_p]. For p = 2 the ring is Z and zeta = -1.
class CycloElem {
 public:
  CycloElem(std::uint64_t p, std::vector<Int> coeffs);

  static CycloElem zero(std::uint64_t p);
  static CycloElem integer(std::uint64_t p, const Int& n);
  static CycloElem one(std::uint64_t p) { return integer(p, 1); }
  static CycloElem zeta_power(std::uint64_t p, std::int64_t k);
  static CycloElem zeta(std::uint64_t p) { return zeta_power(p, 1); }

  std::uint64_t p() const { return p_; }
  std::size_t degree() const { return coeffs_.size(); }
  const std::vector<Int>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  // zeta -> zeta^k
  CycloElem galois(std::uint64_t k) const;
  CycloElem conjugate() const { return galois(p_ - 1); }
  // Rows are the coordinates of x * zeta^j, j = 0 .. p-2.
  IntMatrix multiplication_matrix() const;
  // Trace of x to Q.
  Int trace() const;

  std::string to_string() const;

  friend bool operator==(const CycloElem&, const CycloElem&) = default;
  friend CycloElem operator+(const CycloElem& a, const CycloElem& b);
  friend CycloElem operator-(const CycloElem& a, const CycloElem& b);
  friend CycloElem operator*(const CycloElem& a, const CycloElem& b);
  friend CycloElem operator*(const Int& s, const CycloElem& a);

 private:
  std::uint64_t p_;
  std::vector<Int> coeffs_;
};

CycloElem elem_mul(const CycloElem& x, const CycloElem& y);
Int elem_norm(const CycloElem& x);
// x / y when the quotient lies in Z[zeta]; nullopt otherwise.
std::optional<CycloElem> exact_divide(const CycloElem& x, const CycloElem& y);

// sigma_k : zeta -> zeta^k.
class GaloisElement {
 public:
  GaloisElement(std::uint64_t p, std::int64_t k);
  std::uint64_t p() const { return p_; }
  std::uint64_t k() const { return k_; }
  GaloisElement compose(const GaloisElement& other) const;  // (this o other)
  friend bool operator==(const GaloisElement&, const GaloisElement&) = default;

 private:
  std::uint64_t p_;
  std::uint64_t k_;
};

class CycloIdeal {
 public:
  // Validates full rank, canonical HNF, and closure under multiplication by zeta.
  static CycloIdeal from_hnf(std::uint64_t p, const IntMatrix& hnf);
  static CycloIdeal unit(std::uint64_t p);

  std::uint64_t p() const { return p_; }
  const IntMatrix& hnf() const { return lattice_.basis(); }
  const LatticeBasis& lattice() const { return lattice_; }
  Int norm() const;
  bool contains(const CycloElem& x) const;
  bool contains(const CycloIdeal& other) const { return lattice_.contains(other.lattice_); }
  bool is_unit() const;
  std::vector<CycloElem> basis_elements() const;
  // Matrix of multiplication by zeta on the HNF basis, column convention:
  // column j holds the coordinates of zeta * b_j.
  IntMatrix zeta_action() const;

  friend bool operator==(const CycloIdeal&, const CycloIdeal&) = default;

 private:
  CycloIdeal(std::uint64_t p, LatticeBasis lattice) : p_(p), lattice_(std::move(lattice)) {}
  friend CycloIdeal ideal_from_rows(std::uint64_t p, const IntMatrix& rows, const Int& modulus);

  std::uint64_t p_ = 2;
  LatticeBasis lattice_;
};

// `modulus` must be a positive integer contained in the ideal being built.
CycloIdeal ideal_from_rows(std::uint64_t p, const IntMatrix& rows, const Int& modulus);
CycloIdeal ideal_from_generators(std::span<const CycloElem> gens);
CycloIdeal ideal_mul(const CycloIdeal& a, const CycloIdeal& b);
CycloIdeal ideal_power(const CycloIdeal& a, unsigned long e);
Int ideal_norm(const CycloIdeal& a);
// A few short elements generating `a` as an ideal.
std::vector<CycloElem> ideal_generators(const CycloIdeal& a);
// (alpha) : b = {x in Z[zeta] : x * g in (alpha) for every g in gens}, where
// gens generate b.
CycloIdeal principal_colon(const CycloElem& alpha, std::span<const CycloElem> gens);

// An ideal of small norm in the class of `a` (inverted == false) or of its
// inverse (inverted == true), found by repeatedly replacing b with
// (alpha) : b for a short alpha in b.
struct ReducedIdeal {
  CycloIdeal ideal;
  bool inverted;
};
ReducedIdeal reduce_ideal_class(const CycloIdeal& a);

CycloElem galois_apply(const GaloisElement& s, const CycloElem& x);
CycloIdeal galois_apply(const GaloisElement& s, const CycloIdeal& a);

// Smallest r >= 2 with r^p = 1 mod q; requires q prime, q = 1 mod p.
std::uint64_t split_prime_root(std::uint64_t p, std::uint64_t q);
// The degree-one prime (q, zeta - r) above a completely split prime q.
CycloIdeal split_prime_ideal(std::uint64_t p, std::uint64_t q);

// T2(x) = Tr(x * conj(x)) in power-basis coordinates: p*I - J.
IntMatrix trace_form(std::uint64_t p);
// Gram matrix of the trace form on the HNF basis of `a`. The form is integral
// on Z[zeta], so the result is exact; precision_bits only has to be positive.
RatMatrix minkowski_gram(const CycloIdeal& a, unsigned precision_bits = 128);

inline const Rat kDefaultRadiusMultiplier{4};

struct PrincipalityVerdict {
  enum class Kind { principal, not_found_within_bound };
  Kind kind;
  std::optional<CycloElem> generator;  // set iff principal
  double bound;                        // T2 search radius actually used
  std::size_t vectors_examined = 0;

  bool principal() const { return kind == Kind::principal; }
};

// Searches all x in `a` with T2(x) <= multiplier * (p-1) * N(a)^(2/(p-1))
// for one with |N(x)| = N(a). A principal verdict is certified exactly; a
// negative verdict only says the bounded search found nothing.
PrincipalityVerdict is_principal(const CycloIdeal& a, const Rat& radius_multiplier = kDefaultRadiusMultiplier);

}  // namespace cpgenus::cyclo
