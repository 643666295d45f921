#include "cpgenus/bieberbach.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "cpgenus/arith.hpp"
#include "cpgenus/errors.hpp"
#include "cpgenus/io.hpp"

namespace cpgenus::bieberbach {

using linalg::LatticeBasis;

bool is_exceptional(const Triple& t) { return t.a == 1 && t.c == 0; }

SubgroupSpec orbit_subgroup(const Triple& t) {
  return is_exceptional(t) ? SubgroupSpec::c2 : SubgroupSpec::full_galois;
}

std::vector<std::string> constraint_violations(const Triple& t) {
  std::vector<std::string> errs;
  if (t.a < 0 || t.b < 0 || t.c < 0) errs.push_back("a, b, c must be nonnegative");
  if (t.a == 0) errs.push_back("a=0");
  if (t.b == 0 && t.c == 0) errs.push_back("(b,c)=(0,0)");
  // (a,c) = (1,0) is exactly the exceptional case, so the non-exceptional
  // form of that constraint can never fail here
  if (!is_exceptional(t) && t.a == 1 && t.c == 0) errs.push_back("non-exceptional with (a,c)=(1,0)");
  return errs;
}

BieberbachClass make_class(std::uint64_t p, const Triple& t, const ClassSymbol& theta_raw, const ClassGroupData& h) {
  if (!arith::is_prime(p)) throw DomainError("make_class: p must be prime");
  if (h.p != p) throw DomainError("make_class: class data is for p = " + std::to_string(h.p));
  auto errs = constraint_violations(t);
  if (!errs.empty()) {
    std::string msg = "invalid classification tuple " + t.to_string() + ":";
    for (const auto& e : errs) msg += " " + e + ";";
    msg.pop_back();
    throw DomainError(msg);
  }
  BieberbachClass b;
  b.p = p;
  b.triple = t;
  b.exceptional = is_exceptional(t);
  ClassSymbol raw = theta_raw.empty() ? classdata::identity(h) : theta_raw;
  b.theta = classdata::canonical_representative(h, orbit_subgroup(t), raw);
  return b;
}

std::int64_t dimension(const BieberbachClass& b) {
  std::int64_t n = b.dimension();
  CPGENUS_CHECK(n >= static_cast<std::int64_t>(b.p) - 1, "Bieberbach dimension below p-1");
  return n;
}

/*{{{ affine models */
RatMatrix AffinePresentation::gamma() const {
  const std::size_t n = t.rows();
  RatMatrix g(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) g(i, j) = t(i, j);
    g(i, n) = v[i];
  }
  g(n, n) = 1;
  return g;
}

std::vector<Int> AffinePresentation::translation_of_power() const {
  lattice::LatticeAction m{p, t};
  IntMatrix nt = lattice::norm_operator(m);
  std::vector<Int> e(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    Rat s = 0;
    for (std::size_t j = 0; j < t.rows(); ++j) s += nt(i, j) * v[j];
    if (s.get_den() != 1) throw DomainError("affine model: N_T v is not integral");
    e[i] = s.get_num();
  }
  return e;
}

namespace {

std::vector<cyclo::CycloIdeal> model_ideals(std::uint64_t p, const Triple& t, const ClassSymbol& theta,
                                            const ClassGroupData& h, const ClassReferences& refs) {
  std::vector<cyclo::CycloIdeal> ideals(static_cast<std::size_t>(t.b + t.c), cyclo::CycloIdeal::unit(p));
  ClassSymbol th = theta.empty() ? classdata::identity(h) : classdata::reduce(h, theta);
  if (th != classdata::identity(h)) {
    if (ideals.empty()) throw DomainError("a nontrivial class needs at least one ideal summand");
    ideals.front() = classdata::representative_ideal(h, refs, th);
  }
  return ideals;
}

}  // namespace

AffinePresentation build_affine(const BieberbachClass& b, const ClassGroupData& h, const ClassReferences& refs) {
  if (b.triple.a < 1) throw DomainError("build_affine: a Bieberbach model needs a trivial summand");
  auto ideals = model_ideals(b.p, b.triple, b.theta, h, refs);
  AffinePresentation out;
  out.p = b.p;
  out.t = lattice::construct(b.p, b.triple, ideals).t;
  // the extension is carried by the first basis vector of the first trivial block
  out.v.assign(out.t.rows(), Rat(0));
  out.v[0] = Rat(1, static_cast<unsigned long>(b.p));
  out.bieberbach = true;
  CPGENUS_CHECK(gamma_power_is_translation(out), "gamma^p is not the translation by e");
  std::vector<Int> e(out.t.rows());
  e[0] = 1;
  CPGENUS_CHECK(out.translation_of_power() == e, "gamma^p translates by a vector other than e");
  return out;
}

AffinePresentation build_semidirect(std::uint64_t p, const Triple& t, const ClassSymbol& theta,
                                    const ClassGroupData& h, const ClassReferences& refs) {
  if (t.a < 0 || t.b < 0 || t.c < 0) throw DomainError("build_semidirect: a, b, c must be nonnegative");
  if (h.p != p) throw DomainError("build_semidirect: class data is for p = " + std::to_string(h.p));
  auto ideals = model_ideals(p, t, theta, h, refs);
  AffinePresentation out;
  out.p = p;
  out.t = lattice::construct(p, t, ideals).t;
  out.v.assign(out.t.rows(), Rat(0));
  out.bieberbach = false;
  return out;
}

bool gamma_power_is_translation(const AffinePresentation& a) {
  const std::size_t n = a.t.rows();
  RatMatrix g = linalg::power(a.gamma(), a.p);
  std::vector<Int> e = a.translation_of_power();
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= n; ++j) {
      Rat want = (i == j) ? Rat(1) : Rat(0);
      if (j == n && i < n) want = e[i];
      if (g(i, j) != want) return false;
    }
  return true;
}

bool torsion_free_check(const AffinePresentation& a) {
  lattice::LatticeAction m{a.p, a.t};
  lattice::validate(m);
  LatticeBasis image = lattice::norm_image(m);
  std::vector<Int> e = a.translation_of_power();
  for (std::uint64_t k = 1; k < a.p; ++k) {
    std::vector<Int> ke(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) ke[i] = e[i] * static_cast<unsigned long>(k);
    if (image.contains(ke)) return false;
  }
  return true;
}
/*}}}*/

/*{{{ isomorphism and genus */
bool group_iso(const BieberbachClass& b1, const BieberbachClass& b2, const ClassGroupData& h) {
  if (b1.p != b2.p) throw DomainError("group_iso: classes for different primes");
  if (b1.triple != b2.triple) return false;
  SubgroupSpec s = orbit_subgroup(b1.triple);
  return classdata::canonical_representative(h, s, b1.theta) == classdata::canonical_representative(h, s, b2.theta);
}

bool profinite_iso(const BieberbachClass& b1, const BieberbachClass& b2) {
  if (b1.p != b2.p) throw DomainError("profinite_iso: classes for different primes");
  if (b1.dimension() != b2.dimension()) throw DomainError("profinite_iso: classes of different dimension");
  return b1.triple == b2.triple;
}

std::size_t genus_size(const BieberbachClass& b, const ClassGroupData& h) {
  if (h.p != b.p) throw DomainError("genus_size: class data is for p = " + std::to_string(h.p));
  return classdata::orbit_count(h, orbit_subgroup(b.triple));
}

std::vector<BieberbachClass> genus_members(const BieberbachClass& b, const ClassGroupData& h) {
  if (h.p != b.p) throw DomainError("genus_members: class data is for p = " + std::to_string(h.p));
  std::vector<BieberbachClass> out;
  for (const auto& theta : classdata::orbits(h, orbit_subgroup(b.triple)))
    out.push_back(make_class(b.p, b.triple, theta, h));
  BieberbachClass canon = make_class(b.p, b.triple, b.theta, h);
  CPGENUS_CHECK(std::find(out.begin(), out.end(), canon) != out.end(), "class missing from its own genus");
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      CPGENUS_CHECK(!group_iso(out[i], out[j], h), "two genus members are isomorphic");
      CPGENUS_CHECK(profinite_iso(out[i], out[j]), "two genus members are not profinitely isomorphic");
    }
  return out;
}

std::size_t semidirect_genus_size(std::uint64_t p, const Triple& t, const ClassGroupData& h) {
  if (h.p != p) throw DomainError("semidirect_genus_size: class data is for p = " + std::to_string(h.p));
  return classdata::orbit_count(h, orbit_subgroup(t));
}

std::vector<Triple> admissible_triples(std::int64_t n, std::uint64_t p) {
  if (!arith::is_prime(p)) throw DomainError("enumerate: p must be prime");
  if (n < 1) throw DomainError("enumerate: n must be positive");
  const auto pp = static_cast<std::int64_t>(p);
  std::vector<Triple> out;
  for (std::int64_t c = 0; c * pp <= n; ++c)
    for (std::int64_t b = 0; c * pp + b * (pp - 1) <= n; ++b) {
      Triple t{n - c * pp - b * (pp - 1), b, c};
      if (constraint_violations(t).empty()) out.push_back(t);
    }
  std::sort(out.begin(), out.end());
  return out;
}

Enumeration enumerate(std::int64_t n, std::uint64_t p, const ClassGroupData& h) {
  if (h.p != p) throw DomainError("enumerate: class data is for p = " + std::to_string(h.p));
  Enumeration out;
  out.profinite_classes = admissible_triples(n, p);
  for (const auto& t : out.profinite_classes)
    for (const auto& theta : classdata::orbits(h, orbit_subgroup(t))) out.iso_classes.push_back(make_class(p, t, theta, h));
  return out;
}
/*}}}*/

/*{{{ fingerprint */
IntMatrix abelianization_relations(const AffinePresentation& a) {
  const std::size_t n = a.t.rows();
  IntMatrix rel(n + 1, n + 1);
  // gamma t_j gamma^-1 = t_{T e_j} abelianizes to (T - I) e_j = 0
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) rel(j, i) = a.t(i, j) - (i == j ? 1 : 0);
  // gamma^p = t_e
  std::vector<Int> e = a.translation_of_power();
  for (std::size_t i = 0; i < n; ++i) rel(n, i) = -e[i];
  rel(n, n) = static_cast<unsigned long>(a.p);
  return rel;
}

namespace {

std::vector<Int> reduce_divisors(const std::vector<Int>& d, const Int& m) {
  std::vector<Int> out;
  for (const auto& x : d) {
    Int g;
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    out.push_back(g);
  }
  return out;
}

}  // namespace

Fingerprint fingerprint(const AffinePresentation& a, std::span<const Int> moduli) {
  Fingerprint f;
  for (const auto& d : linalg::elementary_divisors(abelianization_relations(a)))
    if (d != 1) f.abelianization.push_back(d);
  // SNF lists nonzero divisors first; keep torsion before free summands
  std::stable_partition(f.abelianization.begin(), f.abelianization.end(), [](const Int& x) { return x != 0; });
  lattice::LatticeAction m{a.p, a.t};
  auto dt = linalg::elementary_divisors(a.t - IntMatrix::identity(a.t.rows()));
  auto dn = linalg::elementary_divisors(lattice::norm_operator(m));
  for (const auto& mod : moduli) {
    if (mod < 1) throw DomainError("fingerprint: moduli must be positive");
    f.congruence.push_back({mod, reduce_divisors(dt, mod), reduce_divisors(dn, mod)});
  }
  return f;
}
/*}}}*/

/*{{{ I/O */
nlohmann::ordered_json to_json(const BieberbachClass& b) {
  nlohmann::ordered_json j;
  j["p"] = b.p;
  j["a"] = b.triple.a;
  j["b"] = b.triple.b;
  j["c"] = b.triple.c;
  j["theta"] = b.theta;
  j["exceptional"] = b.exceptional;
  j["dimension"] = b.dimension();
  return j;
}

BieberbachClass class_from_json(const nlohmann::json& j, const ClassGroupData& h) {
  try {
    Triple t{j.at("a").get<std::int64_t>(), j.at("b").get<std::int64_t>(), j.at("c").get<std::int64_t>()};
    auto p = j.at("p").get<std::uint64_t>();
    ClassSymbol theta = j.contains("theta") ? j.at("theta").get<ClassSymbol>() : ClassSymbol{};
    BieberbachClass b = make_class(p, t, theta, h);
    if (j.contains("exceptional") && j.at("exceptional").get<bool>() != b.exceptional)
      throw DomainError("field 'exceptional' contradicts (a, b, c)");
    if (j.contains("dimension") && j.at("dimension").get<std::int64_t>() != b.dimension())
      throw DomainError("field 'dimension' contradicts (a, b, c)");
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed Bieberbach class JSON: ") + e.what());
  }
}

nlohmann::ordered_json to_json(const Fingerprint& f) {
  nlohmann::ordered_json j;
  j["abelianization"] = io::json_ints(f.abelianization);
  j["congruence"] = nlohmann::ordered_json::array();
  for (const auto& c : f.congruence) {
    nlohmann::ordered_json e;
    e["m"] = io::json_int(c.modulus);
    e["t_minus_i"] = io::json_ints(c.t_minus_i);
    e["norm"] = io::json_ints(c.norm);
    j["congruence"].push_back(std::move(e));
  }
  return j;
}

void write_affine(std::ostream& out, const AffinePresentation& a) {
  out << a.p << " " << a.dimension() << "\n";
  linalg::write_matrix(out, a.gamma());
}

std::string to_string(const AffinePresentation& a) {
  std::ostringstream out;
  write_affine(out, a);
  return out.str();
}

AffinePresentation read_affine(std::istream& in) {
  long long p = 0, n = 0;
  if (!(in >> p >> n) || p < 2 || n < 1) throw DomainError("affine presentation: expected header 'p n'");
  RatMatrix g = linalg::read_rat_matrix(in);
  const auto sz = static_cast<std::size_t>(n);
  if (g.rows() != sz + 1 || g.cols() != sz + 1) throw DomainError("affine presentation: gamma must be (n+1)-square");
  for (std::size_t j = 0; j < sz; ++j)
    if (g(sz, j) != 0) throw DomainError("affine presentation: last row must be (0, ..., 0, 1)");
  if (g(sz, sz) != 1) throw DomainError("affine presentation: last row must be (0, ..., 0, 1)");
  AffinePresentation a;
  a.p = static_cast<std::uint64_t>(p);
  a.t = linalg::to_integer(g.block(0, 0, sz, sz));
  for (std::size_t i = 0; i < sz; ++i) a.v.push_back(g(i, sz));
  a.bieberbach = std::any_of(a.v.begin(), a.v.end(), [](const Rat& x) { return x != 0; });
  lattice::validate({a.p, a.t});
  return a;
}
/*}}}*/

}  // namespace cpgenus::bieberbach
