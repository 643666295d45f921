#include "cpgenus/classdata.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "cpgenus/arith.hpp"
#include "cpgenus/errors.hpp"
#include "cpgenus/io.hpp"

namespace cpgenus::classdata {

using cyclo::CycloIdeal;
using cyclo::GaloisElement;

std::string to_string(Decision d) {
  switch (d) {
    case Decision::no: return "false";
    case Decision::yes: return "true";
    case Decision::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::builtin: return "builtin";
    case Provenance::user_file: return "user-file";
    case Provenance::computed: return "computed";
  }
  return "builtin";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "builtin") return Provenance::builtin;
  if (s == "user-file") return Provenance::user_file;
  if (s == "computed") return Provenance::computed;
  throw DomainError("unknown provenance '" + s + "' (expected builtin, user-file or computed)");
}

std::string to_string(SubgroupSpec s) { return s == SubgroupSpec::full_galois ? "full" : "c2"; }

std::int64_t ClassGroupData::order() const {
  std::int64_t n = 1;
  for (auto d : factors) {
    if (d <= 0 || n > std::numeric_limits<std::int64_t>::max() / d) throw DomainError("class group order out of range");
    n *= d;
  }
  return n;
}

/*{{{ Maillet determinant */
IntMatrix maillet_matrix(std::uint64_t p) {
  if (p == 2) throw DomainError("maillet: p = 2 has no Maillet matrix (h = 1 by convention)");
  if (!arith::is_prime(p)) throw DomainError("maillet: p must be an odd prime");
  const std::uint64_t m = (p - 1) / 2;
  IntMatrix out(m, m);
  for (std::uint64_t a = 1; a <= m; ++a)
    for (std::uint64_t b = 1; b <= m; ++b) {
      std::uint64_t binv = arith::inverse_mod(b, p);
      out(a - 1, b - 1) = static_cast<unsigned long>((a * binv) % p);
    }
  return out;
}

Int maillet_h_minus(std::uint64_t p) {
  IntMatrix m = maillet_matrix(p);
  Int det = abs(linalg::determinant(m));
  Int pp;
  mpz_ui_pow_ui(pp.get_mpz_t(), p, (p - 3) / 2);
  CPGENUS_CHECK(det % pp == 0, "Maillet determinant not divisible by p^((p-3)/2)");
  return det / pp;
}
/*}}}*/

ClassGroupData builtin_class_group(std::uint64_t p) {
  if (!arith::is_prime(p)) throw DomainError("class_group: p must be prime");
  if (p > kBuiltinMaxP) throw DomainError("class_group: no built-in data for p > 23; supply a class-data file");
  ClassGroupData h;
  h.p = p;
  h.galois_generator = arith::primitive_root(p);
  h.provenance = Provenance::builtin;
  if (p == 23) {
    h.h_minus = 3;
    h.factors = {3};
    // sigma_5 maps [P_47] to [P_47]^2 = [P_47]^-1
    h.action = {{2}};
  }
  return h;
}

/*{{{ validation */
namespace {

std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// action applied to a tuple without reducing to canonical form first
ClassSymbol apply_matrix(const ClassGroupData& h, const ClassSymbol& x) {
  const std::size_t k = h.rank();
  ClassSymbol y(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    Int s = 0;
    for (std::size_t j = 0; j < k; ++j) s += Int(static_cast<long>(h.action[i][j])) * Int(static_cast<long>(x[j]));
    Int d = static_cast<long>(h.factors[i]);
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), s.get_mpz_t(), d.get_mpz_t());
    y[i] = r.get_si();
  }
  return y;
}

}  // namespace

std::vector<std::string> validation_errors(const ClassGroupData& h) {
  std::vector<std::string> errs;
  if (!arith::is_prime(h.p)) errs.push_back("p is not prime");
  if (h.h_minus <= 0) errs.push_back("h_minus must be positive");
  bool factors_ok = true;
  for (std::size_t i = 0; i < h.factors.size(); ++i) {
    if (h.factors[i] < 2) {
      errs.push_back("factor " + std::to_string(i) + " must be at least 2");
      factors_ok = false;
    } else if (i > 0 && h.factors[i - 1] >= 2 && h.factors[i] % h.factors[i - 1] != 0) {
      errs.push_back("factor " + std::to_string(i - 1) + " does not divide factor " + std::to_string(i));
    }
  }
  if (factors_ok) {
    Int prod = 1;
    for (auto d : h.factors) prod *= static_cast<long>(d);
    if (prod != h.h_minus) errs.push_back("product of factors differs from h_minus");
  }
  if (arith::is_prime(h.p)) {
    if (h.galois_generator == 0 || h.galois_generator >= std::max<std::uint64_t>(h.p, 2) ||
        (h.p > 2 && arith::multiplicative_order(h.galois_generator, h.p) != h.p - 1) ||
        (h.p == 2 && h.galois_generator != 1))
      errs.push_back("galois_generator is not a primitive root mod p");
  }
  const std::size_t k = h.factors.size();
  bool shape_ok = h.action.size() == k;
  for (const auto& row : h.action) shape_ok = shape_ok && row.size() == k;
  if (!shape_ok) {
    errs.push_back("action must be a " + std::to_string(k) + "x" + std::to_string(k) + " matrix");
    return errs;
  }
  if (!factors_ok) return errs;
  // sigma_g must send generator j to an element of order dividing d_j
  bool well_defined = true;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      Int v = Int(static_cast<long>(h.action[i][j])) * Int(static_cast<long>(h.factors[j]));
      if (v % static_cast<long>(h.factors[i]) != 0) well_defined = false;
    }
  if (!well_defined) {
    errs.push_back("action is not a well-defined endomorphism of the group");
    return errs;
  }
  if (arith::is_prime(h.p) && k > 0) {
    // action^(p-1) = identity on every generator; this also makes it invertible
    bool order_ok = true;
    for (std::size_t j = 0; j < k && order_ok; ++j) {
      ClassSymbol x(k, 0);
      x[j] = 1;
      for (std::uint64_t e = 0; e + 1 < h.p; ++e) x = apply_matrix(h, x);
      ClassSymbol id(k, 0);
      id[j] = 1 % h.factors[j];
      if (x != id) order_ok = false;
    }
    if (!order_ok) errs.push_back("action order does not divide p-1");
  }
  return errs;
}

void validate(const ClassGroupData& h) {
  auto errs = validation_errors(h);
  if (errs.empty()) return;
  std::string msg = "invalid class-group data:";
  for (const auto& e : errs) msg += "\n  - " + e;
  throw DomainError(msg);
}
/*}}}*/

/*{{{ JSON */
namespace {

const nlohmann::json& require(const nlohmann::json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw DomainError(std::string("missing field '") + field + "'");
  return *it;
}

std::int64_t small_int(const nlohmann::json& j, const char* field) {
  if (!j.is_number_integer()) throw DomainError(std::string("field '") + field + "' must contain integers");
  return j.get<std::int64_t>();
}

}  // namespace

nlohmann::ordered_json to_json(const ClassGroupData& h) {
  nlohmann::ordered_json j;
  j["p"] = h.p;
  j["h_minus"] = io::json_int(h.h_minus);
  j["factors"] = h.factors;
  j["galois_generator"] = h.galois_generator;
  j["action"] = nlohmann::ordered_json::array();
  for (const auto& row : h.action) j["action"].push_back(row);
  j["provenance"] = to_string(h.provenance);
  return j;
}

ClassGroupData class_group_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("class-group data must be a JSON object");
  ClassGroupData h;
  std::int64_t p = small_int(require(j, "p"), "p");
  if (p < 2) throw DomainError("field 'p' must be a prime");
  h.p = static_cast<std::uint64_t>(p);
  h.h_minus = io::int_from_json(require(j, "h_minus"));
  const auto& f = require(j, "factors");
  if (!f.is_array()) throw DomainError("field 'factors' must be an array");
  for (const auto& d : f) h.factors.push_back(small_int(d, "factors"));
  std::int64_t g = small_int(require(j, "galois_generator"), "galois_generator");
  if (g < 0) throw DomainError("field 'galois_generator' must be positive");
  h.galois_generator = static_cast<std::uint64_t>(g);
  const auto& a = require(j, "action");
  if (!a.is_array()) throw DomainError("field 'action' must be an array of rows");
  for (const auto& row : a) {
    if (!row.is_array()) throw DomainError("field 'action' must be an array of rows");
    std::vector<std::int64_t> r;
    for (const auto& v : row) r.push_back(small_int(v, "action"));
    h.action.push_back(std::move(r));
  }
  const auto& prov = require(j, "provenance");
  if (!prov.is_string()) throw DomainError("field 'provenance' must be a string");
  h.provenance = provenance_from_string(prov.get<std::string>());
  return h;
}

std::string serialize(const ClassGroupData& h) { return to_json(h).dump(2) + "\n"; }

ClassGroupData parse_class_group(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("class-group data is not valid JSON: ") + e.what());
  }
  ClassGroupData h = class_group_from_json(j);
  validate(h);
  return h;
}

ClassGroupData load_class_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open class-group file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_class_group(ss.str());
}
/*}}}*/

/*{{{ group arithmetic */
ClassSymbol identity(const ClassGroupData& h) { return ClassSymbol(h.rank(), 0); }

ClassSymbol reduce(const ClassGroupData& h, ClassSymbol x) {
  if (x.size() != h.rank())
    throw DomainError("class symbol has " + std::to_string(x.size()) + " entries, group rank is " +
                      std::to_string(h.rank()));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod_pos(x[i], h.factors[i]);
  return x;
}

ClassSymbol add(const ClassGroupData& h, const ClassSymbol& x, const ClassSymbol& y) {
  ClassSymbol a = reduce(h, x), b = reduce(h, y);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] + b[i]) % h.factors[i];
  return a;
}

ClassSymbol negate(const ClassGroupData& h, const ClassSymbol& x) {
  ClassSymbol a = reduce(h, x);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = mod_pos(-a[i], h.factors[i]);
  return a;
}

ClassSymbol apply_galois_power(const ClassGroupData& h, const ClassSymbol& x, std::uint64_t e) {
  ClassSymbol y = reduce(h, x);
  const std::uint64_t period = h.p > 2 ? h.p - 1 : 1;
  for (std::uint64_t i = 0; i < e % period; ++i) y = apply_matrix(h, y);
  return y;
}

namespace {

std::size_t index_of(const ClassGroupData& h, const ClassSymbol& x) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) idx = idx * static_cast<std::size_t>(h.factors[i]) + x[i];
  return idx;
}

ClassSymbol symbol_at(const ClassGroupData& h, std::size_t idx) {
  ClassSymbol x(h.rank());
  for (std::size_t i = h.rank(); i-- > 0;) {
    x[i] = static_cast<std::int64_t>(idx % static_cast<std::size_t>(h.factors[i]));
    idx /= static_cast<std::size_t>(h.factors[i]);
  }
  return x;
}

std::size_t checked_order(const ClassGroupData& h) {
  Int prod = 1;
  for (auto d : h.factors) prod *= static_cast<long>(d);
  if (prod > kMaxEnumeratedOrder)
    throw DomainError("group too large for enumeration (|H| = " + prod.get_str() + " > 10^6)");
  return static_cast<std::size_t>(prod.get_ui());
}

}  // namespace

std::vector<ClassSymbol> elements(const ClassGroupData& h) {
  const std::size_t n = checked_order(h);
  std::vector<ClassSymbol> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(symbol_at(h, i));
  return out;
}
/*}}}*/

/*{{{ orbits */
SubgroupGenerator subgroup_generator(const ClassGroupData& h, SubgroupSpec s) {
  if (h.p == 2) return {0, 1};
  if (s == SubgroupSpec::full_galois) return {1, h.p - 1};
  return {(h.p - 1) / 2, 2};
}

std::vector<ClassSymbol> orbit_of(const ClassGroupData& h, SubgroupSpec s, const ClassSymbol& x) {
  auto gen = subgroup_generator(h, s);
  std::vector<ClassSymbol> orbit{reduce(h, x)};
  for (;;) {
    ClassSymbol y = apply_galois_power(h, orbit.back(), gen.galois_exponent);
    if (y == orbit.front()) break;
    CPGENUS_CHECK(orbit.size() <= gen.order, "orbit longer than the subgroup order");
    orbit.push_back(std::move(y));
  }
  std::sort(orbit.begin(), orbit.end());
  return orbit;
}

ClassSymbol canonical_representative(const ClassGroupData& h, SubgroupSpec s, const ClassSymbol& x) {
  return orbit_of(h, s, x).front();
}

std::vector<ClassSymbol> orbits(const ClassGroupData& h, SubgroupSpec s) {
  validate(h);
  const std::size_t n = checked_order(h);
  std::vector<bool> seen(n, false);
  std::vector<ClassSymbol> reps;
  // scanning in lexicographic order makes the first unseen element of each
  // orbit its minimum
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    ClassSymbol x = symbol_at(h, i);
    reps.push_back(x);
    for (const auto& y : orbit_of(h, s, x)) seen[index_of(h, y)] = true;
  }
  return reps;
}

std::size_t burnside_count(const ClassGroupData& h, SubgroupSpec s) {
  validate(h);
  const std::size_t n = checked_order(h);
  auto gen = subgroup_generator(h, s);
  std::size_t fixed_total = 0;
  for (std::uint64_t j = 0; j < gen.order; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      ClassSymbol x = symbol_at(h, i);
      if (apply_galois_power(h, x, j * gen.galois_exponent) == x) ++fixed_total;
    }
  }
  CPGENUS_CHECK(fixed_total % gen.order == 0, "Burnside sum not divisible by the group order");
  return fixed_total / gen.order;
}

std::size_t orbit_count(const ClassGroupData& h, SubgroupSpec s) {
  std::size_t direct = orbits(h, s).size();
  std::size_t burnside = burnside_count(h, s);
  CPGENUS_CHECK(direct == burnside, "orbit enumeration disagrees with Burnside count");
  return direct;
}
/*}}}*/

/*{{{ reference ideals and class resolution */
ClassReferences make_references(std::uint64_t p, std::span<const std::uint64_t> split_primes) {
  ClassReferences refs;
  refs.p = p;
  for (auto q : split_primes) {
    refs.split_primes.push_back(q);
    refs.generators.push_back(cyclo::split_prime_ideal(p, q));
  }
  return refs;
}

ClassReferences builtin_references(std::uint64_t p) {
  if (!arith::is_prime(p)) throw DomainError("references: p must be prime");
  if (p > kBuiltinMaxP) throw DomainError("references: no built-in reference ideals for p > 23");
  if (p == 23) {
    const std::uint64_t q[] = {47};
    return make_references(p, q);
  }
  return make_references(p, {});
}

std::optional<ClassReferences> references_for(const ClassGroupData& h) {
  if (h.trivial()) return make_references(h.p, {});
  if (h.p <= kBuiltinMaxP) {
    // data equal to the builtin group up to provenance matches its references
    ClassGroupData b = builtin_class_group(h.p);
    b.provenance = h.provenance;
    if (b == h) return builtin_references(h.p);
  }
  return std::nullopt;
}

CycloIdeal representative_ideal(const ClassGroupData& h, const ClassReferences& refs, const ClassSymbol& x) {
  ClassSymbol e = reduce(h, x);
  if (refs.generators.size() != h.rank()) throw DomainError("reference ideals do not match the class group rank");
  CycloIdeal out = CycloIdeal::unit(h.p);
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] != 0) out = cyclo::ideal_mul(out, cyclo::ideal_power(refs.generators[i], static_cast<unsigned long>(e[i])));
  return out;
}

std::optional<ClassSymbol> ideal_class(const CycloIdeal& a, const ClassGroupData& h, const ClassReferences& refs,
                                       const Rat& radius_multiplier) {
  if (a.p() != h.p) throw DomainError("ideal_class: ideal and class data have different p");
  if (h.trivial()) return identity(h);
  if (refs.generators.size() != h.rank()) throw DomainError("reference ideals do not match the class group rank");
  cyclo::ReducedIdeal r = cyclo::reduce_ideal_class(a);
  std::vector<ClassSymbol> hits;
  for (const auto& e : elements(h)) {
    CycloIdeal j = cyclo::ideal_mul(r.ideal, representative_ideal(h, refs, e));
    if (cyclo::is_principal(j, radius_multiplier).principal()) hits.push_back(negate(h, e));
  }
  CPGENUS_CHECK(hits.size() <= 1, "ideal is equivalent to two distinct classes; class data is inconsistent");
  if (hits.empty()) return std::nullopt;
  return r.inverted ? negate(h, hits.front()) : hits.front();
}

std::optional<std::vector<std::vector<std::int64_t>>> derive_galois_action(const ClassGroupData& h,
                                                                           const ClassReferences& refs,
                                                                           const Rat& radius_multiplier) {
  const std::size_t k = h.rank();
  std::vector<std::vector<std::int64_t>> action(k, std::vector<std::int64_t>(k, 0));
  GaloisElement g(h.p, static_cast<std::int64_t>(h.galois_generator));
  for (std::size_t j = 0; j < k; ++j) {
    auto cls = ideal_class(cyclo::galois_apply(g, refs.generators[j]), h, refs, radius_multiplier);
    if (!cls) return std::nullopt;
    for (std::size_t i = 0; i < k; ++i) action[i][j] = (*cls)[i];
  }
  return action;
}

ComputedClassGroup computed_class_group(std::uint64_t p, const Rat& radius_multiplier) {
  if (!arith::is_prime(p)) throw DomainError("computed class group: p must be prime");
  if (p > kBuiltinMaxP) throw DomainError("computed class group: only p <= 23 is supported");
  ComputedClassGroup out;
  out.data.p = p;
  out.data.galois_generator = arith::primitive_root(p);
  out.data.provenance = Provenance::computed;
  out.data.h_minus = p == 2 ? Int(1) : maillet_h_minus(p);
  out.references = make_references(p, {});
  if (out.data.h_minus == 1) return out;
  if (!arith::is_prime(out.data.h_minus))
    throw DomainError("computed class group: only prime h^- is supported without a data file");
  const std::int64_t h = out.data.h_minus.get_si();
  for (std::uint64_t q = 2 * p + 1; q < 100000; q += 2 * p) {
    if (!arith::is_prime(q)) continue;
    CycloIdeal pq = cyclo::split_prime_ideal(p, q);
    if (cyclo::is_principal(pq, radius_multiplier).principal()) continue;
    // a non-principal prime generates a group of prime order h
    CPGENUS_CHECK(cyclo::is_principal(cyclo::ideal_power(pq, static_cast<unsigned long>(h)), radius_multiplier).principal(),
                  "h-th power of a class-group generator not found principal");
    const std::uint64_t qs[] = {q};
    out.references = make_references(p, qs);
    out.data.factors = {h};
    out.data.action = {{0}};
    auto action = derive_galois_action(out.data, out.references, radius_multiplier);
    if (!action) throw DomainError("computed class group: Galois action not resolvable within the search bound");
    out.data.action = *action;
    validate(out.data);
    return out;
  }
  throw DomainError("computed class group: no non-principal split prime found");
}
/*}}}*/

}  // namespace cpgenus::classdata
