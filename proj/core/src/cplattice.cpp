#include "cpgenus/cplattice.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "cpgenus/arith.hpp"
#include "cpgenus/errors.hpp"

namespace cpgenus::lattice {

using cyclo::CycloElem;
using cyclo::CycloIdeal;
using linalg::RatMatrix;

std::string Triple::to_string() const {
  return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

Validation validate(const LatticeAction& m) {
  if (!arith::is_prime(m.p)) throw DomainError("lattice action: p must be prime");
  if (!m.t.is_square() || m.t.rows() == 0) throw DomainError("lattice action: T must be a nonempty square matrix");
  const IntMatrix id = IntMatrix::identity(m.t.rows());
  if (linalg::power(m.t, m.p) != id) throw DomainError("lattice action: T^p is not the identity");
  bool trivial = m.t == id;
  return {trivial ? 1u : m.p, !trivial};
}

LatticeBasis fixed_lattice(const LatticeAction& m) {
  IntMatrix d = m.t - IntMatrix::identity(m.t.rows());
  return linalg::saturated_kernel(d.transpose());
}

IntMatrix norm_operator(const LatticeAction& m) {
  const std::size_t n = m.t.rows();
  IntMatrix sum(n, n), pw = IntMatrix::identity(n);
  for (std::uint64_t i = 0; i < m.p; ++i) {
    sum = sum + pw;
    pw = pw * m.t;
  }
  return sum;
}

LatticeBasis norm_image(const LatticeAction& m) { return LatticeBasis::from_generators(norm_operator(m).transpose()); }

std::vector<Int> tate_h0(const LatticeAction& m) {
  validate(m);
  LatticeBasis f = fixed_lattice(m);
  LatticeBasis nm = norm_image(m);
  CPGENUS_CHECK(f.rank() == nm.rank(), "norm image and fixed lattice have different rank");
  auto d = linalg::lattice_index_group(nm, f);
  for (const auto& x : d) CPGENUS_CHECK(x == static_cast<unsigned long>(m.p), "M^G / N(M) is not elementary abelian of exponent p");
  return d;
}

Triple invariants(const LatticeAction& m) {
  validate(m);
  const auto n = static_cast<std::int64_t>(m.t.rows());
  const auto p = static_cast<std::int64_t>(m.p);
  const auto f = static_cast<std::int64_t>(fixed_lattice(m).rank());
  Triple t;
  t.a = static_cast<std::int64_t>(tate_h0(m).size());
  t.c = f - t.a;
  CPGENUS_CHECK(t.c >= 0, "negative extension count");
  CPGENUS_CHECK((n - f) % (p - 1) == 0, "rank of M / M^G not divisible by p-1");
  t.b = (n - f) / (p - 1) - t.c;
  CPGENUS_CHECK(t.b >= 0, "negative ideal count");
  CPGENUS_CHECK(t.dimension(m.p) == n, "rank accounting failed");
  return t;
}

/*{{{ determinant ideal */
namespace {

std::vector<Int> act(const IntMatrix& t, std::span<const Int> v) { return t * v; }

Int lcm_denominators(std::span<const Rat> v) {
  Int l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

// Fraction-free elimination over Z[zeta].
CycloElem bareiss_determinant(std::vector<std::vector<CycloElem>> a, std::uint64_t p) {
  const std::size_t m = a.size();
  if (m == 0) return CycloElem::one(p);
  bool negate = false;
  CycloElem prev = CycloElem::one(p);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (a[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < m && a[r][k].is_zero()) ++r;
      if (r == m) return CycloElem::zero(p);
      std::swap(a[k], a[r]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < m; ++i) {
      for (std::size_t j = k + 1; j < m; ++j) {
        CycloElem num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        auto q = cyclo::exact_divide(num, prev);
        CPGENUS_CHECK(q.has_value(), "Bareiss step not exact over Z[zeta]");
        a[i][j] = std::move(*q);
      }
    }
    prev = a[k][k];
  }
  CycloElem d = a[m - 1][m - 1];
  return negate ? Int(-1) * d : d;
}

Int content(const CycloElem& x) {
  Int g = 0;
  for (const auto& c : x.coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

}  // namespace

std::optional<DeterminantIdeal> determinant_ideal(const LatticeAction& m) {
  Triple tr = invariants(m);
  const std::size_t rank_m = static_cast<std::size_t>(tr.b + tr.c);
  if (rank_m == 0) return std::nullopt;
  const std::size_t n = m.t.rows();
  const std::size_t d = m.p - 1;
  const IntMatrix& t = m.t;

  // Q = M / M^G is isomorphic to the image of (T - I), with x acting as T
  LatticeBasis image = LatticeBasis::from_generators((t - IntMatrix::identity(n)).transpose());
  CPGENUS_CHECK(image.rank() == rank_m * d, "image of T - I has unexpected rank");

  auto orbit_rows = [&](std::span<const Int> v, IntMatrix& rows) {
    std::vector<Int> w(v.begin(), v.end());
    for (std::size_t j = 0; j < d; ++j) {
      rows.append_row(w);
      w = act(t, w);
    }
  };

  // greedy Z[zeta]-generating set of the image
  std::vector<std::vector<Int>> gens;
  IntMatrix span_rows(0, n);
  LatticeBasis span(n);
  for (std::size_t r = 0; r < image.rank() && !(span == image); ++r) {
    auto v = image.basis().row(r);
    if (span.contains(v)) continue;
    gens.emplace_back(v.begin(), v.end());
    orbit_rows(v, span_rows);
    span = LatticeBasis::from_generators(span_rows);
  }
  CPGENUS_CHECK(span == image, "zeta-orbits of the image basis do not generate the image");

  // K-basis q_1..q_m taken from the generators; w holds T^j q_i
  IntMatrix w(0, n);
  for (const auto& g : gens) {
    if (w.rows() == rank_m * d) break;
    IntMatrix trial = w;
    orbit_rows(g, trial);
    if (linalg::rank(trial) > linalg::rank(w)) w = std::move(trial);
  }
  CPGENUS_CHECK(w.rows() == rank_m * d && linalg::rank(w) == rank_m * d, "no zeta-independent generators found");
  const RatMatrix wq = linalg::to_rational(w);

  auto coordinates = [&](std::span<const Int> v) {
    std::vector<Rat> rhs(v.begin(), v.end());
    auto x = linalg::solve_left(wq, rhs);
    CPGENUS_CHECK(x.has_value(), "generator outside the rational span of the chosen basis");
    return *x;
  };

  // index of the image in the standard Z[zeta]^m, for the exact stop test
  RatMatrix basis_coords(rank_m * d, rank_m * d);
  for (std::size_t r = 0; r < image.rank(); ++r) {
    auto x = coordinates(image.basis().row(r));
    for (std::size_t j = 0; j < x.size(); ++j) basis_coords(r, j) = x[j];
  }
  const Rat index = abs(linalg::determinant(basis_coords));

  std::vector<std::vector<Rat>> gen_coords;
  Int den = 1;
  for (const auto& g : gens) {
    gen_coords.push_back(coordinates(g));
    Int l = lcm_denominators(gen_coords.back());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), l.get_mpz_t());
  }
  // entries of the scaled coordinate vectors, as elements of Z[zeta]
  std::vector<std::vector<CycloElem>> elems;
  for (const auto& x : gen_coords) {
    std::vector<CycloElem> row;
    for (std::size_t i = 0; i < rank_m; ++i) {
      std::vector<Int> c(d);
      for (std::size_t j = 0; j < d; ++j) {
        Rat v = x[i * d + j] * den;
        CPGENUS_CHECK(v.get_den() == 1, "denominator clearing failed");
        c[j] = v.get_num();
      }
      row.emplace_back(m.p, std::move(c));
    }
    elems.push_back(std::move(row));
  }

  Int target_int;
  {
    Int den_pow;
    mpz_pow_ui(den_pow.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(rank_m * d));
    Rat target = index * den_pow;
    CPGENUS_CHECK(target.get_den() == 1, "scaled index is not integral");
    target_int = target.get_num();
  }

  // m x m minors over subsets of the generators, stopping once the ideal
  // they generate has the expected norm
  std::vector<CycloElem> minors;
  std::vector<std::size_t> pick(rank_m);
  for (std::size_t i = 0; i < rank_m; ++i) pick[i] = i;
  const std::size_t s = elems.size();
  std::optional<CycloIdeal> ideal;
  for (;;) {
    std::vector<std::vector<CycloElem>> sub;
    for (auto idx : pick) sub.push_back(elems[idx]);
    CycloElem det = bareiss_determinant(std::move(sub), m.p);
    if (!det.is_zero()) {
      minors.push_back(det);
      CycloIdeal cand = cyclo::ideal_from_generators(minors);
      CPGENUS_CHECK(cand.norm() >= target_int && cand.norm() % target_int == 0,
                    "minor ideal norm incompatible with the lattice index");
      ideal = cand;
      if (cand.norm() == target_int) break;
    }
    // next subset in lexicographic order
    std::size_t i = rank_m;
    while (i > 0 && pick[i - 1] == s - rank_m + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < rank_m; ++j) pick[j] = pick[j - 1] + 1;
  }
  CPGENUS_CHECK(ideal.has_value() && ideal->norm() == target_int, "determinant ideal norm does not match the index");

  Int g = 0;
  for (const auto& x : minors) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), content(x).get_mpz_t());
  if (g > 1) {
    std::vector<CycloElem> reduced;
    for (const auto& x : minors) {
      std::vector<Int> c = x.coeffs();
      for (auto& v : c) v /= g;
      reduced.emplace_back(m.p, std::move(c));
    }
    ideal = cyclo::ideal_from_generators(reduced);
  }
  return DeterminantIdeal{*ideal, rank_m};
}
/*}}}*/

SteinitzClass steinitz_class(const LatticeAction& m, const ClassGroupData& h, const ClassReferences& refs,
                             const Rat& radius_multiplier) {
  if (m.p != h.p) throw DomainError("steinitz: lattice and class data have different p");
  auto det = determinant_ideal(m);
  SteinitzClass out;
  if (!det) return out;
  auto cls = classdata::ideal_class(det->ideal, h, refs, radius_multiplier);
  if (!cls) {
    out.status = SteinitzClass::Status::indeterminate;
    return out;
  }
  out.status = SteinitzClass::Status::resolved;
  out.exponents = classdata::reduce(h, *cls);
  return out;
}

DecompInvariants decompose(const LatticeAction& m, const ClassGroupData& h, const ClassReferences& refs,
                           const Rat& radius_multiplier) {
  DecompInvariants d;
  d.triple = invariants(m);
  d.steinitz = steinitz_class(m, h, refs, radius_multiplier);
  return d;
}

/*{{{ construction */
std::size_t extension_element_index(const CycloIdeal& a) {
  const std::uint64_t p = a.p();
  const CycloElem gens[] = {CycloElem::zeta(p) - CycloElem::one(p)};
  CycloIdeal za = cyclo::ideal_mul(a, cyclo::ideal_from_generators(gens));
  for (std::size_t j = 0; j < a.hnf().rows(); ++j)
    if (!za.lattice().contains(a.hnf().row(j))) return j;
  throw InvariantError("ideal equals (zeta - 1) times itself; no extension element");
}

LatticeAction construct(std::uint64_t p, const Triple& t, std::span<const CycloIdeal> ideals) {
  if (!arith::is_prime(p)) throw DomainError("construct: p must be prime");
  if (t.a < 0 || t.b < 0 || t.c < 0) throw DomainError("construct: a, b, c must be nonnegative");
  if (t.dimension(p) < 1) throw DomainError("construct: dimension must be positive");
  if (ideals.size() != static_cast<std::size_t>(t.b + t.c))
    throw DomainError("construct: expected " + std::to_string(t.b + t.c) + " ideals, got " +
                      std::to_string(ideals.size()));
  for (const auto& a : ideals)
    if (a.p() != p) throw DomainError("construct: ideal for a different prime");
  std::vector<IntMatrix> blocks;
  for (std::int64_t i = 0; i < t.a; ++i) blocks.push_back(IntMatrix::identity(1));
  for (std::size_t i = 0; i < ideals.size(); ++i) {
    IntMatrix z = ideals[i].zeta_action();
    if (static_cast<std::int64_t>(i) >= t.c) {
      blocks.push_back(std::move(z));
      continue;
    }
    IntMatrix blk(p, p);
    for (std::size_t r = 0; r + 1 < p; ++r)
      for (std::size_t c = 0; c + 1 < p; ++c) blk(r, c) = z(r, c);
    blk(extension_element_index(ideals[i]), p - 1) = 1;
    blk(p - 1, p - 1) = 1;
    blocks.push_back(std::move(blk));
  }
  LatticeAction out{p, linalg::block_diagonal(blocks)};
  CPGENUS_CHECK(linalg::power(out.t, p) == IntMatrix::identity(out.t.rows()), "constructed T^p != I");
  return out;
}

LatticeAction construct(std::uint64_t p, const Triple& t) {
  if (t.b < 0 || t.c < 0) throw DomainError("construct: a, b, c must be nonnegative");
  std::vector<CycloIdeal> ideals(static_cast<std::size_t>(t.b + t.c), CycloIdeal::unit(p));
  return construct(p, t, ideals);
}

LatticeAction conjugate(const LatticeAction& m, const IntMatrix& u) {
  if (!u.is_square() || u.rows() != m.t.rows()) throw DomainError("conjugate: size mismatch");
  Int det = linalg::determinant(u);
  if (det != 1 && det != -1) throw DomainError("conjugate: matrix is not unimodular");
  auto inv = linalg::inverse(linalg::to_rational(u));
  CPGENUS_CHECK(inv.has_value(), "unimodular matrix not invertible");
  return {m.p, u * m.t * linalg::to_integer(*inv)};
}

LatticeAction twist(const LatticeAction& m, std::uint64_t k) {
  if (k == 0 || k % m.p == 0) throw DomainError("twist: exponent must be prime to p");
  return {m.p, linalg::power(m.t, k % m.p)};
}
/*}}}*/

bool genus_equivalent(const LatticeAction& m1, const LatticeAction& m2) {
  if (m1.p != m2.p) throw DomainError("genus_equivalent: lattices for different primes");
  if (m1.t.rows() != m2.t.rows()) throw DomainError("genus_equivalent: lattices of different rank");
  return invariants(m1) == invariants(m2);
}

LocalTypes local_types(const LatticeAction& m) {
  Triple t = invariants(m);
  return {t.a, t.b, t.c};
}

namespace {

struct PairData {
  SteinitzClass s1, s2;
};

std::optional<PairData> compare_pair(const LatticeAction& m1, const LatticeAction& m2, const ClassGroupData& h,
                                     const ClassReferences& refs, const Rat& mult) {
  if (m1.p != m2.p) throw DomainError("lattices for different primes");
  if (m1.t.rows() != m2.t.rows()) return std::nullopt;
  if (invariants(m1) != invariants(m2)) return std::nullopt;
  return PairData{steinitz_class(m1, h, refs, mult), steinitz_class(m2, h, refs, mult)};
}

}  // namespace

Decision is_isomorphic(const LatticeAction& m1, const LatticeAction& m2, const ClassGroupData& h,
                       const ClassReferences& refs, const Rat& radius_multiplier) {
  auto d = compare_pair(m1, m2, h, refs, radius_multiplier);
  if (!d) return Decision::no;
  using S = SteinitzClass::Status;
  if (d->s1.status == S::absent) return Decision::yes;
  if (d->s1.status == S::indeterminate || d->s2.status == S::indeterminate) return Decision::indeterminate;
  return d->s1.exponents == d->s2.exponents ? Decision::yes : Decision::no;
}

Decision is_semilinear_isomorphic(const LatticeAction& m1, const LatticeAction& m2, const ClassGroupData& h,
                                  const ClassReferences& refs, const Rat& radius_multiplier) {
  auto d = compare_pair(m1, m2, h, refs, radius_multiplier);
  if (!d) return Decision::no;
  using S = SteinitzClass::Status;
  if (d->s1.status == S::absent) return Decision::yes;
  if (d->s1.status == S::indeterminate || d->s2.status == S::indeterminate) return Decision::indeterminate;
  auto orbit = classdata::orbit_of(h, classdata::SubgroupSpec::full_galois, d->s1.exponents);
  return std::binary_search(orbit.begin(), orbit.end(), d->s2.exponents) ? Decision::yes : Decision::no;
}

/*{{{ I/O */
LatticeAction read_lattice_action(std::istream& in) {
  std::string tag;
  long long p = 0;
  if (!(in >> tag) || tag != "p" || !(in >> p) || p < 2)
    throw DomainError("lattice action: expected header line 'p <prime>'");
  LatticeAction m{static_cast<std::uint64_t>(p), linalg::read_int_matrix(in)};
  validate(m);
  return m;
}

LatticeAction parse_lattice_action(const std::string& text) {
  std::istringstream in(text);
  return read_lattice_action(in);
}

void write_lattice_action(std::ostream& out, const LatticeAction& m) {
  out << "p " << m.p << "\n";
  linalg::write_matrix(out, m.t);
}

std::string to_string(const LatticeAction& m) {
  std::ostringstream out;
  write_lattice_action(out, m);
  return out.str();
}

nlohmann::ordered_json to_json(const SteinitzClass& s) {
  switch (s.status) {
    case SteinitzClass::Status::absent: return nullptr;
    case SteinitzClass::Status::indeterminate: return "indeterminate";
    case SteinitzClass::Status::resolved: return s.exponents;
  }
  return nullptr;
}

nlohmann::ordered_json to_json(const DecompInvariants& d) {
  nlohmann::ordered_json j;
  j["a"] = d.triple.a;
  j["b"] = d.triple.b;
  j["c"] = d.triple.c;
  j["steinitz"] = to_json(d.steinitz);
  return j;
}
/*}}}*/

}  // namespace cpgenus::lattice
