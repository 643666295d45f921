#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpgenus/arith.hpp"
#include "cpgenus/bieberbach.hpp"
#include "cpgenus/classdata.hpp"
#include "cpgenus/cplattice.hpp"
#include "cpgenus/cyclotomic.hpp"
#include "cpgenus/errors.hpp"
#include "cpgenus/io.hpp"
#include "cpgenus/linalg.hpp"

namespace cpgenus::cli {
namespace {

using nlohmann::ordered_json;
using linalg::Int;
using linalg::IntMatrix;
using linalg::Rat;
namespace cd = classdata;
namespace bb = bieberbach;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads a file that does not exist or cannot be parsed.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string format = "json";
  std::string radius = "4";
  unsigned precision = 128;
  std::string class_data;
  bool allow_override = false;
  std::string reference_primes;

  Rat radius_multiplier;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

std::int64_t parse_int64(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw UsageError(what + ": expected an integer, got '" + s + "'");
  }
  if (used != s.size()) throw UsageError(what + ": expected an integer, got '" + s + "'");
  return v;
}

std::vector<std::int64_t> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<std::int64_t> out;
  if (s.empty()) return out;
  for (const auto& part : split(s, ',')) out.push_back(parse_int64(part, what));
  return out;
}

lattice::Triple parse_triple(const std::string& s) {
  auto v = parse_int_list(s, "--tuple");
  if (v.size() != 3) throw UsageError("--tuple: expected a,b,c");
  return {v[0], v[1], v[2]};
}

Rat parse_radius(const std::string& s) {
  Rat r;
  if (s.empty() || r.set_str(s, 10) != 0) throw UsageError("--radius: expected a rational number, got '" + s + "'");
  r.canonicalize();
  if (r <= 0) throw UsageError("--radius must be positive");
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void require_prime(std::uint64_t p) {
  if (!arith::is_prime(p)) throw DomainError("p = " + std::to_string(p) + " is not prime");
}

class Session {
 public:
  Session(RunConfig cfg, std::ostream& out) : cfg_(std::move(cfg)), out_(out) {}

  const RunConfig& config() const { return cfg_; }

  void require_format(std::initializer_list<const char*> allowed) const {
    for (const char* f : allowed)
      if (cfg_.format == f) return;
    throw UsageError("--format " + cfg_.format + " is not supported by this command");
  }

  void emit(const ordered_json& j) { out_ << j.dump() << '\n'; }
  std::ostream& out() { return out_; }

  struct ClassContext {
    cd::ClassGroupData data;
    std::optional<cd::ClassReferences> refs;
  };

  ClassContext class_context(std::uint64_t p) const {
    require_prime(p);
    ClassContext ctx;
    if (!cfg_.class_data.empty()) {
      if (p <= cd::kBuiltinMaxP && !cfg_.allow_override)
        throw UsageError("--class-data would override built-in data for p = " + std::to_string(p) +
                         "; pass --allow-override to use it");
      ctx.data = load_class_data(cfg_.class_data);
      if (ctx.data.p != p)
        throw DomainError("class-data file is for p = " + std::to_string(ctx.data.p) + ", not " + std::to_string(p));
      if (p > 2 && cd::maillet_h_minus(p) != ctx.data.h_minus)
        throw DomainError("class-data h_minus " + ctx.data.h_minus.get_str() +
                          " disagrees with the Maillet determinant value " + cd::maillet_h_minus(p).get_str());
    } else {
      if (p > cd::kBuiltinMaxP)
        throw DomainError("no built-in class-group data for p = " + std::to_string(p) + "; supply --class-data");
      ctx.data = cd::builtin_class_group(p);
    }
    if (!cfg_.reference_primes.empty()) {
      std::vector<std::uint64_t> primes;
      for (auto q : parse_int_list(cfg_.reference_primes, "--reference-primes")) {
        if (q < 2) throw UsageError("--reference-primes: entries must be primes");
        primes.push_back(static_cast<std::uint64_t>(q));
      }
      if (primes.size() != ctx.data.rank())
        throw DomainError("--reference-primes: need one prime per class-group generator (" +
                          std::to_string(ctx.data.rank()) + ")");
      ctx.refs = cd::make_references(p, primes);
    } else {
      ctx.refs = cd::references_for(ctx.data);
    }
    return ctx;
  }

  static const cd::ClassReferences& require_refs(const ClassContext& ctx) {
    if (!ctx.refs)
      throw DomainError("no reference ideals known for this class group; supply --reference-primes");
    return *ctx.refs;
  }

  static cd::ClassGroupData load_class_data(const std::string& path) {
    std::string text = read_file(path);
    try {
      return cd::parse_class_group(text);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path + ": " + e.what());
    }
  }

 private:
  RunConfig cfg_;
  std::ostream& out_;
};

/*{{{ ideals */
cyclo::CycloIdeal parse_ideal_factor(std::uint64_t p, const std::string& f) {
  if (f.rfind("file:", 0) == 0) {
    std::string path = f.substr(5);
    cyclo::CycloIdeal a = [&] {
      try {
        return io::ideal_from_json(nlohmann::json::parse(read_file(path)));
      } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": " + e.what());
      }
    }();
    if (a.p() != p) throw DomainError(path + ": ideal is for p = " + std::to_string(a.p()));
    return a;
  }
  auto pe = split(f, '^');
  if (pe.size() > 2) throw UsageError("ideal factor '" + f + "': expected q or q^e");
  std::int64_t q = parse_int64(pe[0], "ideal factor");
  std::int64_t e = pe.size() == 2 ? parse_int64(pe[1], "ideal exponent") : 1;
  if (e < 0) throw UsageError("ideal exponent must be nonnegative");
  if (q == 1) return cyclo::CycloIdeal::unit(p);
  if (q < 2) throw UsageError("ideal factor '" + f + "': expected a prime q = 1 mod p");
  return cyclo::ideal_power(cyclo::split_prime_ideal(p, static_cast<std::uint64_t>(q)), static_cast<unsigned long>(e));
}

// "1", "q", "q^e", "file:path", or a '*'-separated product of these.
cyclo::CycloIdeal parse_ideal(std::uint64_t p, const std::string& spec) {
  if (spec.empty()) throw UsageError("empty ideal specification");
  cyclo::CycloIdeal out = cyclo::CycloIdeal::unit(p);
  for (const auto& f : split(spec, '*')) out = cyclo::ideal_mul(out, parse_ideal_factor(p, f));
  return out;
}
/*}}}*/

lattice::LatticeAction read_action(const std::string& path, std::optional<std::uint64_t> p) {
  std::string text = read_file(path);
  std::istringstream probe(text);
  std::string first;
  probe >> first;
  lattice::LatticeAction m;
  if (first == "p") {
    m = lattice::parse_lattice_action(text);
    if (p && *p != m.p)
      throw DomainError(path + ": action is for p = " + std::to_string(m.p) + ", not " + std::to_string(*p));
  } else {
    if (!p) throw UsageError(path + " has no 'p' header; pass -p");
    std::istringstream in(text);
    m.p = *p;
    m.t = linalg::read_int_matrix(in);
  }
  require_prime(m.p);
  lattice::validate(m);
  return m;
}

ordered_json symbols_json(const std::vector<cd::ClassSymbol>& v) {
  ordered_json j = ordered_json::array();
  for (const auto& s : v) j.push_back(s);
  return j;
}

std::string theta_csv(const cd::ClassSymbol& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ";" : "") + std::to_string(t[i]);
  return s;
}

// Random tuples with ideals from split primes, conjugated by unimodular
// matrices; checks the invariants come back unchanged.
ordered_json selfcheck(const Session& s, std::uint64_t seed, std::size_t count, const std::vector<std::int64_t>& primes,
                       std::int64_t max_n, std::int64_t max_q) {
  std::mt19937_64 rng(seed);
  ordered_json failures = ordered_json::array();
  for (std::size_t i = 0; i < count; ++i) {
    auto p = static_cast<std::uint64_t>(primes[rng() % primes.size()]);
    auto pi = static_cast<std::int64_t>(p);
    lattice::Triple t;
    do {
      t.a = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_n + 1));
      t.b = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_n / (pi - 1) + 1));
      t.c = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_n / pi + 1));
    } while (t.dimension(p) == 0 || t.dimension(p) > max_n);
    std::vector<std::uint64_t> split_primes;
    for (auto q : arith::primes_up_to(static_cast<std::uint64_t>(max_q)))
      if (q % p == 1) split_primes.push_back(q);
    std::vector<cyclo::CycloIdeal> ideals;
    std::string ideal_desc;
    for (std::int64_t k = 0; k < t.b + t.c; ++k) {
      std::size_t pick = rng() % (split_primes.size() + 1);
      std::uint64_t q = pick == split_primes.size() ? 1 : split_primes[pick];
      ideals.push_back(q == 1 ? cyclo::CycloIdeal::unit(p) : cyclo::split_prime_ideal(p, q));
      ideal_desc += (k ? "," : "") + std::to_string(q);
    }
    auto m = lattice::construct(p, t, ideals);
    auto n = m.rank();
    auto u = linalg::random_unimodular(n, rng, 3, 2 * n);
    auto mc = lattice::conjugate(m, u);
    std::vector<std::string> errs;
    if (lattice::invariants(mc) != t) errs.push_back("invariants");
    if (static_cast<std::int64_t>(lattice::tate_h0(mc).size()) != t.a) errs.push_back("tate_h0");
    if (lattice::local_types(mc) != lattice::LocalTypes{t.a, t.b, t.c}) errs.push_back("local_types");
    if (!lattice::genus_equivalent(m, mc)) errs.push_back("genus_equivalent");
    if (p <= cd::kBuiltinMaxP) {
      auto ctx = s.class_context(p);
      const auto& refs = Session::require_refs(ctx);
      auto got = lattice::steinitz_class(mc, ctx.data, refs, s.config().radius_multiplier);
      auto want = cd::identity(ctx.data);
      bool known = true;
      for (const auto& a : ideals) {
        auto c = cd::ideal_class(a, ctx.data, refs, s.config().radius_multiplier);
        if (!c) {
          known = false;
          break;
        }
        want = cd::add(ctx.data, want, *c);
      }
      bool absent = t.b + t.c == 0;
      if (absent && got.status != lattice::SteinitzClass::Status::absent) errs.push_back("steinitz");
      if (!absent && known && got.status == lattice::SteinitzClass::Status::resolved && got.exponents != want)
        errs.push_back("steinitz");
    }
    if (!errs.empty()) {
      ordered_json f;
      f["instance"] = i;
      f["p"] = p;
      f["tuple"] = t.to_string();
      f["ideals"] = ideal_desc;
      f["failed"] = errs;
      failures.push_back(std::move(f));
    }
  }
  ordered_json j;
  j["seed"] = seed;
  j["instances"] = count;
  j["failures"] = std::move(failures);
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Lattices over cyclic groups of prime order, cyclotomic class groups and Bieberbach groups",
               "cpgenus"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  app.add_option("--radius", cfg.radius, "Principality search radius multiplier (rational)")->capture_default_str();
  app.add_option("--precision", cfg.precision, "Bits of precision for Gram matrices")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--class-data", cfg.class_data, "Class-group data file (JSON)");
  app.add_flag("--allow-override", cfg.allow_override, "Let --class-data replace built-in data");
  app.add_option("--reference-primes", cfg.reference_primes,
                 "Split primes whose ideals generate the class group, comma-separated");

  std::function<void(Session&)> action;
  auto on = [&](CLI::App* sub, std::function<void(Session&)> f) {
    sub->callback([&action, f = std::move(f)] { action = f; });
  };

  std::uint64_t p = 0;
  std::int64_t n = 0;
  std::string file, subgroup = "full", matrix, tuple, theta, tuple2, theta2, ideals, moduli = "2,3,4,5,8,9";
  std::vector<std::string> ideal_specs;
  std::uint64_t q = 0, k = 1, seed = 1;
  std::size_t count = 20;
  std::string primes = "2,3,5,7";
  std::int64_t max_n = 20, max_q = 100;
  bool members = false, semidirect = false;
  std::optional<std::uint64_t> p_opt;

  auto add_p = [&](CLI::App* sub) { return sub->add_option("-p", p, "Prime order of the cyclic group")->required(); };

  auto* classnumber = app.add_subcommand("classnumber", "Relative class number from the Maillet determinant");
  add_p(classnumber);
  on(classnumber, [&](Session& s) {
    s.require_format({"json"});
    require_prime(p);
    Int h = p == 2 ? Int(1) : cd::maillet_h_minus(p);
    ordered_json j;
    j["p"] = p;
    j["h_minus"] = io::json_int(h);
    s.emit(j);
  });

  auto* classgroup = app.add_subcommand("classgroup", "Class-group data");
  classgroup->require_subcommand(1);
  auto* cg_show = classgroup->add_subcommand("show", "Print validated class-group data");
  add_p(cg_show);
  cg_show->add_option("--file", file, "Class-group data file to validate and print");
  on(cg_show, [&](Session& s) {
    s.require_format({"json"});
    require_prime(p);
    cd::ClassGroupData h;
    if (!file.empty()) {
      h = Session::load_class_data(file);
      if (h.p != p) throw DomainError(file + ": data is for p = " + std::to_string(h.p));
    } else {
      h = s.class_context(p).data;
    }
    s.out() << cd::serialize(h);
  });
  auto* cg_compute = classgroup->add_subcommand("compute", "Recompute class-group data from scratch (p <= 23)");
  add_p(cg_compute);
  on(cg_compute, [&](Session& s) {
    s.require_format({"json"});
    require_prime(p);
    auto c = cd::computed_class_group(p, s.config().radius_multiplier);
    ordered_json j;
    j["class_group"] = cd::to_json(c.data);
    j["reference_primes"] = c.references.split_primes;
    s.emit(j);
  });

  auto* orbits = app.add_subcommand("orbits", "Orbits of a Galois subgroup on the class group");
  add_p(orbits);
  orbits->add_option("--subgroup", subgroup, "full or c2")->check(CLI::IsMember({"full", "c2"}))->capture_default_str();
  on(orbits, [&](Session& s) {
    s.require_format({"json"});
    auto ctx = s.class_context(p);
    auto spec = subgroup == "full" ? cd::SubgroupSpec::full_galois : cd::SubgroupSpec::c2;
    ordered_json j;
    j["p"] = p;
    j["subgroup"] = cd::to_string(spec);
    j["count"] = cd::orbit_count(ctx.data, spec);
    j["burnside"] = cd::burnside_count(ctx.data, spec);
    j["representatives"] = symbols_json(cd::orbits(ctx.data, spec));
    s.emit(j);
  });

  auto* ideal = app.add_subcommand("ideal", "Ideal arithmetic in Z[zeta_p]");
  ideal->require_subcommand(1);
  auto add_ideal_opt = [&](CLI::App* sub, bool many) {
    auto* o = sub->add_option("--ideal", ideal_specs, "1, q, q^e, file:PATH, or a '*'-product of these")->required();
    if (many) o->expected(2);
    else o->expected(1);
  };
  auto* id_split = ideal->add_subcommand("split", "Degree-one prime above a split prime q");
  add_p(id_split);
  id_split->add_option("-q", q, "Prime q = 1 mod p")->required();
  on(id_split, [&](Session& s) {
    s.require_format({"json"});
    require_prime(p);
    ordered_json j;
    j["p"] = p;
    j["q"] = q;
    j["root"] = cyclo::split_prime_root(p, q);
    j["ideal"] = io::to_json(cyclo::split_prime_ideal(p, q));
    s.emit(j);
  });
  auto* id_norm = ideal->add_subcommand("norm", "Absolute norm");
  add_p(id_norm);
  add_ideal_opt(id_norm, false);
  on(id_norm, [&](Session& s) {
    s.require_format({"json"});
    require_prime(p);
    ordered_json j;
    j["p"] = p;
    j["norm"] = io::json_int(cyclo::ideal_norm(parse_ideal(p, ideal_specs.at(0))));
    s.emit(j);
  });
  auto* id_mul = ideal->add_subcommand("mul", "Product of two ideals");
  add_p(id_mul);
  add_ideal_opt(id_mul, true);
  on(id_mul, [&](Session& s) {
    s.require_format({"json"});
    require_prime(p);
    s.emit(io::to_json(cyclo::ideal_mul(parse_ideal(p, ideal_specs.at(0)), parse_ideal(p, ideal_specs.at(1)))));
  });
  auto* id_galois = ideal->add_subcommand("galois", "Image under zeta -> zeta^k");
  add_p(id_galois);
  add_ideal_opt(id_galois, false);
  id_galois->add_option("-k", k, "Exponent k, prime to p")->required();
  on(id_galois, [&](Session& s) {
    s.require_format({"json"});
    require_prime(p);
    cyclo::GaloisElement g(p, static_cast<std::int64_t>(k));
    s.emit(io::to_json(cyclo::galois_apply(g, parse_ideal(p, ideal_specs.at(0)))));
  });
  auto* id_principal = ideal->add_subcommand("principal", "Bounded search for a generator");
  add_p(id_principal);
  add_ideal_opt(id_principal, false);
  on(id_principal, [&](Session& s) {
    s.require_format({"json"});
    require_prime(p);
    auto a = parse_ideal(p, ideal_specs.at(0));
    auto v = cyclo::is_principal(a, s.config().radius_multiplier);
    ordered_json j;
    j["p"] = p;
    j["norm"] = io::json_int(a.norm());
    j["radius_multiplier"] = io::json_rat(s.config().radius_multiplier);
    if (v.principal()) {
      j["status"] = "principal";
      j["generator"] = io::to_json(*v.generator);
      j["generator_norm"] = io::json_int(cyclo::elem_norm(*v.generator));
    } else {
      j["status"] = "indeterminate";
      j["verdict"] = "not_found_within_bound";
    }
    j["vectors_examined"] = v.vectors_examined;
    s.emit(j);
  });
  auto* id_class = ideal->add_subcommand("class", "Ideal class as exponents of the class-group generators");
  add_p(id_class);
  add_ideal_opt(id_class, false);
  on(id_class, [&](Session& s) {
    s.require_format({"json"});
    auto ctx = s.class_context(p);
    auto a = parse_ideal(p, ideal_specs.at(0));
    auto c = cd::ideal_class(a, ctx.data, Session::require_refs(ctx), s.config().radius_multiplier);
    ordered_json j;
    j["p"] = p;
    j["class"] = c ? ordered_json(*c) : ordered_json("indeterminate");
    s.emit(j);
  });
  auto* id_gram = ideal->add_subcommand("gram", "Trace-form Gram matrix of the HNF basis");
  add_p(id_gram);
  add_ideal_opt(id_gram, false);
  on(id_gram, [&](Session& s) {
    s.require_format({"json"});
    require_prime(p);
    auto a = parse_ideal(p, ideal_specs.at(0));
    ordered_json j;
    j["p"] = p;
    j["gram"] = io::json_matrix(cyclo::minkowski_gram(a, s.config().precision));
    s.emit(j);
  });

  auto* decompose = app.add_subcommand("decompose", "Invariants (a,b,c) and Steinitz class of a lattice");
  decompose->add_option("--matrix", matrix, "Lattice action file")->required();
  decompose->add_option("-p", p_opt, "Prime order, required when the file has no 'p' header");
  on(decompose, [&](Session& s) {
    s.require_format({"json"});
    auto m = read_action(matrix, p_opt);
    auto ctx = s.class_context(m.p);
    lattice::DecompInvariants d;
    if (ctx.refs) {
      d = lattice::decompose(m, ctx.data, *ctx.refs, s.config().radius_multiplier);
    } else {
      d.triple = lattice::invariants(m);
      if (d.triple.b + d.triple.c > 0) d.steinitz.status = lattice::SteinitzClass::Status::indeterminate;
    }
    s.emit(lattice::to_json(d));
  });

  auto* steinitz = app.add_subcommand("steinitz", "Steinitz class of a lattice");
  steinitz->add_option("--matrix", matrix, "Lattice action file")->required();
  steinitz->add_option("-p", p_opt, "Prime order, required when the file has no 'p' header");
  on(steinitz, [&](Session& s) {
    s.require_format({"json"});
    auto m = read_action(matrix, p_opt);
    auto ctx = s.class_context(m.p);
    auto st = lattice::steinitz_class(m, ctx.data, Session::require_refs(ctx), s.config().radius_multiplier);
    ordered_json j;
    j["p"] = m.p;
    j["steinitz"] = lattice::to_json(st);
    s.emit(j);
  });

  auto* construct = app.add_subcommand("construct", "Block model of a lattice with given invariants");
  add_p(construct);
  construct->add_option("--tuple", tuple, "a,b,c")->required();
  construct->add_option("--ideals", ideals, "b + c comma-separated ideal specifications (default: all 1)");
  on(construct, [&](Session& s) {
    s.require_format({"json", "text"});
    require_prime(p);
    auto t = parse_triple(tuple);
    std::vector<cyclo::CycloIdeal> list;
    if (!ideals.empty())
      for (const auto& spec : split(ideals, ',')) list.push_back(parse_ideal(p, spec));
    auto m = ideals.empty() ? lattice::construct(p, t) : lattice::construct(p, t, list);
    if (s.config().format == "text") {
      lattice::write_lattice_action(s.out(), m);
      return;
    }
    ordered_json j;
    j["p"] = p;
    j["n"] = m.rank();
    j["matrix"] = io::json_matrix(m.t);
    s.emit(j);
  });

  auto* bieb = app.add_subcommand("bieberbach", "Bieberbach groups with cyclic holonomy of prime order");
  bieb->require_subcommand(1);
  auto add_class_opts = [&](CLI::App* sub) {
    add_p(sub);
    sub->add_option("--tuple", tuple, "a,b,c")->required();
    sub->add_option("--theta", theta, "Class exponents, comma-separated (default: trivial class)");
  };
  auto make = [&](const Session::ClassContext& ctx, const std::string& tup, const std::string& th) {
    return bb::make_class(p, parse_triple(tup), parse_int_list(th, "--theta"), ctx.data);
  };

  auto* b_validate = bieb->add_subcommand("validate", "Check a classification tuple");
  add_class_opts(b_validate);
  on(b_validate, [&](Session& s) {
    s.require_format({"json"});
    auto ctx = s.class_context(p);
    auto t = parse_triple(tuple);
    auto errs = bb::constraint_violations(t);
    ordered_json j;
    j["valid"] = errs.empty();
    j["violations"] = errs;
    if (errs.empty()) j["class"] = bb::to_json(make(ctx, tuple, theta));
    s.emit(j);
  });

  auto* b_build = bieb->add_subcommand("build", "Affine model Gamma = <Z^n, (T, v)>");
  add_class_opts(b_build);
  b_build->add_flag("--semidirect", semidirect, "Use v = 0 (Z^n semidirect C_p)");
  on(b_build, [&](Session& s) {
    s.require_format({"json", "text"});
    auto ctx = s.class_context(p);
    const auto& refs = Session::require_refs(ctx);
    bb::AffinePresentation a;
    ordered_json j;
    if (semidirect) {
      auto t = parse_triple(tuple);
      a = bb::build_semidirect(p, t, parse_int_list(theta, "--theta"), ctx.data, refs);
      j["p"] = p;
      j["a"] = t.a;
      j["b"] = t.b;
      j["c"] = t.c;
    } else {
      auto c = make(ctx, tuple, theta);
      a = bb::build_affine(c, ctx.data, refs);
      j["class"] = bb::to_json(c);
    }
    if (s.config().format == "text") {
      bb::write_affine(s.out(), a);
      return;
    }
    j["semidirect"] = !a.bieberbach;
    j["gamma"] = io::json_matrix(a.gamma());
    j["translation"] = io::json_ints(a.translation_of_power());
    j["gamma_power_is_translation"] = bb::gamma_power_is_translation(a);
    j["torsion_free"] = bb::torsion_free_check(a);
    s.emit(j);
  });

  auto add_pair_opts = [&](CLI::App* sub) {
    add_class_opts(sub);
    sub->add_option("--tuple2", tuple2, "a,b,c of the second class")->required();
    sub->add_option("--theta2", theta2, "Class exponents of the second class");
  };
  auto* b_iso = bieb->add_subcommand("iso", "Isomorphism of two Bieberbach groups");
  add_pair_opts(b_iso);
  on(b_iso, [&](Session& s) {
    s.require_format({"json"});
    auto ctx = s.class_context(p);
    ordered_json j;
    j["isomorphic"] = bb::group_iso(make(ctx, tuple, theta), make(ctx, tuple2, theta2), ctx.data);
    s.emit(j);
  });
  auto* b_piso = bieb->add_subcommand("profinite-iso", "Isomorphism of profinite completions");
  add_pair_opts(b_piso);
  on(b_piso, [&](Session& s) {
    s.require_format({"json"});
    auto ctx = s.class_context(p);
    ordered_json j;
    j["profinite_isomorphic"] = bb::profinite_iso(make(ctx, tuple, theta), make(ctx, tuple2, theta2));
    s.emit(j);
  });

  auto* b_genus = bieb->add_subcommand("genus", "Size of the profinite genus");
  add_class_opts(b_genus);
  b_genus->add_flag("--members", members, "List the classes in the genus");
  on(b_genus, [&](Session& s) {
    s.require_format({"json"});
    auto ctx = s.class_context(p);
    auto c = make(ctx, tuple, theta);
    ordered_json j;
    j["genus_size"] = bb::genus_size(c, ctx.data);
    if (members) {
      j["members"] = ordered_json::array();
      for (const auto& m : bb::genus_members(c, ctx.data)) j["members"].push_back(bb::to_json(m));
    }
    s.emit(j);
  });

  auto* b_enum = bieb->add_subcommand("enumerate", "All classes of a given dimension");
  add_p(b_enum);
  b_enum->add_option("-n", n, "Dimension")->required();
  on(b_enum, [&](Session& s) {
    s.require_format({"json", "csv"});
    auto ctx = s.class_context(p);
    auto e = bb::enumerate(n, p, ctx.data);
    if (s.config().format == "csv") {
      s.out() << "n,p,a,b,c,theta,exceptional,genus_size\n";
      for (const auto& c : e.iso_classes)
        s.out() << n << ',' << p << ',' << c.triple.a << ',' << c.triple.b << ',' << c.triple.c << ','
                << theta_csv(c.theta) << ',' << (c.exceptional ? "true" : "false") << ','
                << bb::genus_size(c, ctx.data) << '\n';
      return;
    }
    ordered_json j;
    j["n"] = n;
    j["p"] = p;
    j["iso_classes"] = e.iso_classes.size();
    j["profinite_classes"] = e.profinite_classes.size();
    j["classes"] = ordered_json::array();
    for (const auto& c : e.iso_classes) j["classes"].push_back(bb::to_json(c));
    j["triples"] = ordered_json::array();
    for (const auto& t : e.profinite_classes) j["triples"].push_back({t.a, t.b, t.c});
    s.emit(j);
  });

  auto* b_fp = bieb->add_subcommand("fingerprint", "Abelianization and congruence data of the affine model");
  add_class_opts(b_fp);
  b_fp->add_option("--moduli", moduli, "Moduli m, comma-separated")->capture_default_str();
  on(b_fp, [&](Session& s) {
    s.require_format({"json"});
    auto ctx = s.class_context(p);
    std::vector<Int> ms;
    for (auto m : parse_int_list(moduli, "--moduli")) {
      if (m < 2) throw UsageError("--moduli: entries must be at least 2");
      ms.emplace_back(static_cast<long>(m));
    }
    auto a = bb::build_affine(make(ctx, tuple, theta), ctx.data, Session::require_refs(ctx));
    s.emit(bb::to_json(bb::fingerprint(a, ms)));
  });

  auto* check = app.add_subcommand("selfcheck", "Randomized decomposition round trips");
  check->add_option("--seed", seed, "Random seed")->capture_default_str();
  check->add_option("--count", count, "Number of instances")->check(CLI::PositiveNumber)->capture_default_str();
  check->add_option("--primes", primes, "Primes to sample, comma-separated")->capture_default_str();
  check->add_option("--max-n", max_n, "Largest rank")->check(CLI::PositiveNumber)->capture_default_str();
  check->add_option("--max-q", max_q, "Largest split prime")->check(CLI::Range(2, 100000))->capture_default_str();
  bool check_failed = false;
  on(check, [&](Session& s) {
    s.require_format({"json"});
    auto ps = parse_int_list(primes, "--primes");
    if (ps.empty()) throw UsageError("--primes: need at least one prime");
    for (auto x : ps) {
      if (x < 2) throw UsageError("--primes: entries must be primes");
      require_prime(static_cast<std::uint64_t>(x));
    }
    if (max_n < ps.front()) throw UsageError("--max-n is too small for the requested primes");
    auto j = selfcheck(s, seed, count, ps, max_n, max_q);
    check_failed = !j["failures"].empty();
    s.emit(j);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << "Run with --help for usage.\n";
    return 2;
  }

  auto fail = [&](const char* kind, const std::string& msg) {
    ordered_json j;
    j["error"] = kind;
    j["message"] = msg;
    out << j.dump() << '\n';
    return 1;
  };
  try {
    cfg.radius_multiplier = parse_radius(cfg.radius);
    Session session(cfg, out);
    if (!action) throw UsageError("no command given");
    action(session);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    return fail("domain", e.what());
  } catch (const InvariantError& e) {
    return fail("invariant", e.what());
  } catch (const InputError& e) {
    return fail("input", e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail("input", e.what());
  }
  return check_failed ? 1 : 0;
}

}  // namespace cpgenus::cli
