#pragma once

// Bieberbach groups with holonomy C_p: classification tuples (p, a, b, c; theta),
// explicit affine models, torsion-freeness, isomorphism and
// profinite-isomorphism decisions, genus sizes, and enumeration by dimension.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpgenus/classdata.hpp"
#include "cpgenus/cplattice.hpp"
#include "cpgenus/linalg.hpp"

namespace cpgenus::bieberbach {

using classdata::ClassGroupData;
using classdata::ClassReferences;
using classdata::ClassSymbol;
using classdata::SubgroupSpec;
using lattice::Triple;
using linalg::Int;
using linalg::IntMatrix;
using linalg::Rat;
using linalg::RatMatrix;

struct BieberbachClass {
  std::uint64_t p = 2;
  Triple triple;
  ClassSymbol theta;  // canonical orbit representative
  bool exceptional = false;

  std::int64_t dimension() const { return triple.dimension(p); }
  friend bool operator==(const BieberbachClass&, const BieberbachClass&) = default;
};

// One trivial summand, every other summand an ideal.
bool is_exceptional(const Triple& t);
// Subgroup of the Galois group that theta is taken modulo.
SubgroupSpec orbit_subgroup(const Triple& t);

// Constraint violations by name; empty when (a, b, c) is admissible.
std::vector<std::string> constraint_violations(const Triple& t);
// An empty theta_raw stands for the trivial class.
BieberbachClass make_class(std::uint64_t p, const Triple& t, const ClassSymbol& theta_raw, const ClassGroupData& h);

// n = a + b(p-1) + cp; checks n >= p-1.
std::int64_t dimension(const BieberbachClass& b);

// Gamma = [[T, v], [0, 1]] acting on Q^n, with translations Z^n.
struct AffinePresentation {
  std::uint64_t p = 2;
  IntMatrix t;
  std::vector<Rat> v;
  bool bieberbach = true;  // false for the v = 0 semidirect variant

  std::size_t dimension() const { return t.rows(); }
  RatMatrix gamma() const;
  // gamma^p is the translation by this vector, N_T v.
  std::vector<Int> translation_of_power() const;
};

AffinePresentation build_affine(const BieberbachClass& b, const ClassGroupData& h, const ClassReferences& refs);
// Z^n semidirect C_p with v = 0; a may be 0.
AffinePresentation build_semidirect(std::uint64_t p, const Triple& t, const ClassSymbol& theta,
                                    const ClassGroupData& h, const ClassReferences& refs);
// gamma^p equals the translation by e = N_T v, computed in exact arithmetic.
bool gamma_power_is_translation(const AffinePresentation& a);
// For k = 1..p-1, k e not in N_T(Z^n).
bool torsion_free_check(const AffinePresentation& a);

bool group_iso(const BieberbachClass& b1, const BieberbachClass& b2, const ClassGroupData& h);
bool profinite_iso(const BieberbachClass& b1, const BieberbachClass& b2);

std::size_t genus_size(const BieberbachClass& b, const ClassGroupData& h);
std::vector<BieberbachClass> genus_members(const BieberbachClass& b, const ClassGroupData& h);
// Same orbit formula applied to the semidirect products.
std::size_t semidirect_genus_size(std::uint64_t p, const Triple& t, const ClassGroupData& h);

struct Enumeration {
  std::vector<BieberbachClass> iso_classes;
  std::vector<Triple> profinite_classes;
};
// Admissible triples with a + b(p-1) + cp = n, sorted.
std::vector<Triple> admissible_triples(std::int64_t n, std::uint64_t p);
Enumeration enumerate(std::int64_t n, std::uint64_t p, const ClassGroupData& h);

struct Congruence {
  Int modulus;
  std::vector<Int> t_minus_i;  // SNF of T - I over Z/m
  std::vector<Int> norm;       // SNF of N_T over Z/m
  friend bool operator==(const Congruence&, const Congruence&) = default;
};

struct Fingerprint {
  std::vector<Int> abelianization;  // invariant factors > 1, then 0 for each free summand
  std::vector<Congruence> congruence;
  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

IntMatrix abelianization_relations(const AffinePresentation& a);
Fingerprint fingerprint(const AffinePresentation& a, std::span<const Int> moduli);

nlohmann::ordered_json to_json(const BieberbachClass& b);
BieberbachClass class_from_json(const nlohmann::json& j, const ClassGroupData& h);
nlohmann::ordered_json to_json(const Fingerprint& f);

// Header "p n", then gamma in the matrix text format.
void write_affine(std::ostream& out, const AffinePresentation& a);
std::string to_string(const AffinePresentation& a);
AffinePresentation read_affine(std::istream& in);

}  // namespace cpgenus::bieberbach
