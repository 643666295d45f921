#pragma once

// Z C_p-lattices given by an integer matrix T with T^p = I (x acts as T on
// column vectors). Diederichsen-Reiner invariants (a, b, c), the Steinitz
// class, construction from invariants, and the isomorphism tests built on
// them.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpgenus/classdata.hpp"
#include "cpgenus/cyclotomic.hpp"
#include "cpgenus/linalg.hpp"

namespace cpgenus::lattice {

using classdata::ClassGroupData;
using classdata::ClassReferences;
using classdata::ClassSymbol;
using classdata::Decision;
using linalg::Int;
using linalg::IntMatrix;
using linalg::LatticeBasis;
using linalg::Rat;

struct LatticeAction {
  std::uint64_t p = 2;
  IntMatrix t;

  std::size_t rank() const { return t.rows(); }
};

struct Validation {
  std::uint64_t order;  // 1 or p
  bool faithful;        // order == p
};

// Throws DomainError unless T is square with T^p = I and p prime.
Validation validate(const LatticeAction& m);

// Numbers of trivial, ideal and extension summands.
struct Triple {
  std::int64_t a = 0, b = 0, c = 0;
  std::int64_t dimension(std::uint64_t p) const {
    return a + b * static_cast<std::int64_t>(p - 1) + c * static_cast<std::int64_t>(p);
  }
  std::string to_string() const;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct SteinitzClass {
  enum class Status { absent, resolved, indeterminate };
  Status status = Status::absent;
  ClassSymbol exponents;  // set iff resolved

  friend bool operator==(const SteinitzClass&, const SteinitzClass&) = default;
};

struct DecompInvariants {
  Triple triple;
  SteinitzClass steinitz;
};

// x acting on Z^n as T: fixed lattice ker(T - I), and N(M) with N = sum T^i.
LatticeBasis fixed_lattice(const LatticeAction& m);
IntMatrix norm_operator(const LatticeAction& m);
LatticeBasis norm_image(const LatticeAction& m);
// SNF divisors of M^G / N(M); all equal to p.
std::vector<Int> tate_h0(const LatticeAction& m);

Triple invariants(const LatticeAction& m);

// Integral ideal in the class of the determinant ideal of M / M^G, generated
// by the m x m coordinate minors with their common integer content removed.
// nullopt when b + c = 0.
struct DeterminantIdeal {
  cyclo::CycloIdeal ideal;
  std::size_t module_rank;  // m = b + c
};
std::optional<DeterminantIdeal> determinant_ideal(const LatticeAction& m);

SteinitzClass steinitz_class(const LatticeAction& m, const ClassGroupData& h, const ClassReferences& refs,
                             const Rat& radius_multiplier = cyclo::kDefaultRadiusMultiplier);
DecompInvariants decompose(const LatticeAction& m, const ClassGroupData& h, const ClassReferences& refs,
                           const Rat& radius_multiplier = cyclo::kDefaultRadiusMultiplier);

// Block-diagonal model: a trivial 1x1 blocks, then (A, a_0) extension blocks
// for the first c ideals, then zeta-multiplication on the remaining b ideals.
LatticeAction construct(std::uint64_t p, const Triple& t, std::span<const cyclo::CycloIdeal> ideals);
LatticeAction construct(std::uint64_t p, const Triple& t);
// Index within an extension block of the basis vector used as a_0.
std::size_t extension_element_index(const cyclo::CycloIdeal& a);

LatticeAction conjugate(const LatticeAction& m, const IntMatrix& u);
// M with x acting as T^k (the twist by x -> x^k), 1 <= k < p.
LatticeAction twist(const LatticeAction& m, std::uint64_t k);

bool genus_equivalent(const LatticeAction& m1, const LatticeAction& m2);

struct LocalTypes {
  std::int64_t trivial = 0;  // Z_p
  std::int64_t cyclo = 0;    // Z_p[zeta]
  std::int64_t regular = 0;  // Z_p G
  friend bool operator==(const LocalTypes&, const LocalTypes&) = default;
};
LocalTypes local_types(const LatticeAction& m);

Decision is_isomorphic(const LatticeAction& m1, const LatticeAction& m2, const ClassGroupData& h,
                       const ClassReferences& refs, const Rat& radius_multiplier = cyclo::kDefaultRadiusMultiplier);
Decision is_semilinear_isomorphic(const LatticeAction& m1, const LatticeAction& m2, const ClassGroupData& h,
                                  const ClassReferences& refs,
                                  const Rat& radius_multiplier = cyclo::kDefaultRadiusMultiplier);

// Text format: "p <prime>" line followed by the matrix text format.
LatticeAction read_lattice_action(std::istream& in);
LatticeAction parse_lattice_action(const std::string& text);
void write_lattice_action(std::ostream& out, const LatticeAction& m);
std::string to_string(const LatticeAction& m);

nlohmann::ordered_json to_json(const DecompInvariants& d);
nlohmann::ordered_json to_json(const SteinitzClass& s);

}  // namespace cpgenus::lattice
