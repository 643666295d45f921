#pragma once

// Class-group data for Q(zeta_p): relative class numbers from the Maillet
// determinant, the finite abelian group H with the action of a generator of
// Gal(Q(zeta_p)/Q), orbit counting, and resolution of ideal classes against
// reference ideals.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpgenus/cyclotomic.hpp"
#include "cpgenus/linalg.hpp"

namespace cpgenus::classdata {

using linalg::Int;
using linalg::IntMatrix;
using linalg::Rat;

// Exponent tuple w.r.t. the generators of H, entries reduced into [0, d_i).
using ClassSymbol = std::vector<std::int64_t>;

// Three-valued answer for decisions that depend on bounded principality
// searches.
enum class Decision { no, yes, indeterminate };
std::string to_string(Decision d);

enum class Provenance { builtin, user_file, computed };
std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

enum class SubgroupSpec { full_galois, c2 };
std::string to_string(SubgroupSpec s);

struct ClassGroupData {
  std::uint64_t p = 2;
  Int h_minus = 1;
  std::vector<std::int64_t> factors;                // d_1 | d_2 | ... | d_k, each >= 2
  std::uint64_t galois_generator = 1;               // primitive root g mod p
  std::vector<std::vector<std::int64_t>> action;    // column j = sigma_g(generator j)
  Provenance provenance = Provenance::builtin;

  std::size_t rank() const { return factors.size(); }
  std::int64_t order() const;
  bool trivial() const { return factors.empty(); }

  friend bool operator==(const ClassGroupData&, const ClassGroupData&) = default;
};

// Largest p with built-in class-group data.
inline constexpr std::uint64_t kBuiltinMaxP = 23;
// Orbit enumeration refuses groups larger than this.
inline constexpr std::int64_t kMaxEnumeratedOrder = 1'000'000;

IntMatrix maillet_matrix(std::uint64_t p);
// |det M| / p^((p-3)/2) for the Maillet matrix M; p an odd prime.
Int maillet_h_minus(std::uint64_t p);

// Built-in table, p <= 23. Assumes h_p = h_p^- (h^+ = 1 in this range).
ClassGroupData builtin_class_group(std::uint64_t p);

// Every invariant violation, one message each; empty when valid.
std::vector<std::string> validation_errors(const ClassGroupData& h);
// Throws DomainError listing all violations.
void validate(const ClassGroupData& h);

nlohmann::ordered_json to_json(const ClassGroupData& h);
ClassGroupData class_group_from_json(const nlohmann::json& j);
std::string serialize(const ClassGroupData& h);
ClassGroupData parse_class_group(const std::string& text);
ClassGroupData load_class_group_file(const std::string& path);

/*{{{ group arithmetic on exponent tuples */
ClassSymbol identity(const ClassGroupData& h);
ClassSymbol reduce(const ClassGroupData& h, ClassSymbol x);
ClassSymbol add(const ClassGroupData& h, const ClassSymbol& x, const ClassSymbol& y);
ClassSymbol negate(const ClassGroupData& h, const ClassSymbol& x);
// sigma_g^e applied to x
ClassSymbol apply_galois_power(const ClassGroupData& h, const ClassSymbol& x, std::uint64_t e);
// All elements in lexicographic order; throws if |H| > kMaxEnumeratedOrder.
std::vector<ClassSymbol> elements(const ClassGroupData& h);
/*}}}*/

// Exponent of sigma_g generating the chosen subgroup, and its order.
struct SubgroupGenerator {
  std::uint64_t galois_exponent;
  std::uint64_t order;
};
SubgroupGenerator subgroup_generator(const ClassGroupData& h, SubgroupSpec s);

// Lexicographically minimal element of each orbit, sorted.
std::vector<ClassSymbol> orbits(const ClassGroupData& h, SubgroupSpec s);
// Direct enumeration count, cross-checked against Burnside's lemma.
std::size_t orbit_count(const ClassGroupData& h, SubgroupSpec s);
std::size_t burnside_count(const ClassGroupData& h, SubgroupSpec s);
ClassSymbol canonical_representative(const ClassGroupData& h, SubgroupSpec s, const ClassSymbol& x);
std::vector<ClassSymbol> orbit_of(const ClassGroupData& h, SubgroupSpec s, const ClassSymbol& x);

// Ideals whose classes are the generators of H, in the same order.
struct ClassReferences {
  std::uint64_t p = 2;
  std::vector<std::uint64_t> split_primes;  // generator i is the (q, zeta - r) prime for split_primes[i]
  std::vector<cyclo::CycloIdeal> generators;
};

ClassReferences make_references(std::uint64_t p, std::span<const std::uint64_t> split_primes);
// Built-in references for p <= 23 (p = 23: the prime above 47).
ClassReferences builtin_references(std::uint64_t p);
// nullopt when h is nontrivial and no references are known for it.
std::optional<ClassReferences> references_for(const ClassGroupData& h);

cyclo::CycloIdeal representative_ideal(const ClassGroupData& h, const ClassReferences& refs, const ClassSymbol& x);

// Class of `a` as an exponent tuple, found by testing a * R^e for
// principality over all e in H. nullopt when no test succeeds within the
// search bound.
std::optional<ClassSymbol> ideal_class(const cyclo::CycloIdeal& a, const ClassGroupData& h,
                                       const ClassReferences& refs,
                                       const Rat& radius_multiplier = cyclo::kDefaultRadiusMultiplier);

// Action of sigma_g on H recomputed from the reference ideals.
std::optional<std::vector<std::vector<std::int64_t>>> derive_galois_action(
    const ClassGroupData& h, const ClassReferences& refs,
    const Rat& radius_multiplier = cyclo::kDefaultRadiusMultiplier);

// Class group recomputed from scratch for p <= 23: h^- from the Maillet
// determinant; for prime h^- the group is cyclic, generated by the first
// split prime not found principal, with the Galois action derived from it.
struct ComputedClassGroup {
  ClassGroupData data;
  ClassReferences references;
};
ComputedClassGroup computed_class_group(std::uint64_t p,
                                        const Rat& radius_multiplier = cyclo::kDefaultRadiusMultiplier);

}  // namespace cpgenus::classdata
