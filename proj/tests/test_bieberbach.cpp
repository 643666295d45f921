#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "cpgenus/arith.hpp"
#include "cpgenus/bieberbach.hpp"
#include "cpgenus/errors.hpp"
#include "oracles.hpp"

using namespace cpgenus;
using namespace cpgenus::bieberbach;
using linalg::Rat;

namespace {

struct Ctx {
  ClassGroupData h;
  ClassReferences refs;
  explicit Ctx(std::uint64_t p) : h(classdata::builtin_class_group(p)), refs(classdata::builtin_references(p)) {}
};

// gamma^p computed by repeated rational matrix multiplication.
RatMatrix gamma_power(const AffinePresentation& a) {
  RatMatrix g = a.gamma(), acc = g;
  for (std::uint64_t i = 1; i < a.p; ++i) acc = acc * g;
  return acc;
}

RatMatrix translation(const std::vector<Int>& e) {
  const std::size_t n = e.size();
  RatMatrix m = linalg::to_rational(IntMatrix::identity(n + 1));
  for (std::size_t i = 0; i < n; ++i) m(i, n) = e[i];
  return m;
}

// Torsion divisors > 1 followed by one zero per free summand, from invariant factors.
std::vector<Int> abelian_invariants(const oracle::Mat& relations, std::size_t generators) {
  auto f = oracle::invariant_factors(relations);
  std::vector<Int> out;
  std::size_t r = 0;
  for (const auto& d : f) {
    if (d != 0) ++r;
    if (d > 1) out.push_back(d);
  }
  for (std::size_t i = r; i < generators; ++i) out.push_back(0);
  return out;
}

}  // namespace

TEST_SUITE("classes") {
  TEST_CASE("Klein bottle") {
    Ctx c(2);
    auto b = make_class(2, {1, 1, 0}, {}, c.h);
    CHECK(b.exceptional);
    CHECK(dimension(b) == 2);
    CHECK(b.theta.empty());
  }

  TEST_CASE("constraint names") {
    CHECK(constraint_violations({1, 0, 0}) == std::vector<std::string>{"(b,c)=(0,0)"});
    CHECK(constraint_violations({0, 1, 0}) == std::vector<std::string>{"a=0"});
    CHECK(constraint_violations({0, 0, 0}) == std::vector<std::string>{"a=0", "(b,c)=(0,0)"});
    CHECK(constraint_violations({2, 0, 1}).empty());
    Ctx c(23);
    CHECK_THROWS_WITH_AS(make_class(23, {1, 0, 0}, {}, c.h), doctest::Contains("(b,c)=(0,0)"), DomainError);
  }

  TEST_CASE("theta is canonicalized by the right subgroup") {
    Ctx c(23);
    auto b1 = make_class(23, {2, 1, 0}, {1}, c.h);
    auto b2 = make_class(23, {2, 1, 0}, {2}, c.h);
    CHECK_FALSE(b1.exceptional);
    CHECK(b1.theta == classdata::ClassSymbol{1});
    CHECK(b2.theta == classdata::ClassSymbol{1});
    CHECK(orbit_subgroup({2, 1, 0}) == SubgroupSpec::full_galois);
    CHECK(orbit_subgroup({1, 3, 0}) == SubgroupSpec::c2);
    CHECK(make_class(23, {1, 1, 0}, {2}, c.h).theta == classdata::ClassSymbol{1});
    CHECK(make_class(23, {1, 1, 0}, {}, c.h).theta == classdata::ClassSymbol{0});
    CHECK(make_class(23, {1, 1, 0}, {5}, c.h).theta == classdata::ClassSymbol{1});
    CHECK_THROWS_AS(make_class(23, {1, 1, 0}, {1, 1}, c.h), DomainError);
  }

  TEST_CASE("dimensions") {
    CHECK(make_class(3, {1, 1, 0}, {}, Ctx(3).h).dimension() == 3);
    CHECK(make_class(23, {1, 0, 1}, {}, Ctx(23).h).dimension() == 24);
  }
}

TEST_SUITE("affine models") {
  TEST_CASE("Klein bottle") {
    Ctx c(2);
    auto a = build_affine(make_class(2, {1, 1, 0}, {}, c.h), c.h, c.refs);
    RatMatrix want{{Rat(1), Rat(0), Rat(1, 2)}, {Rat(0), Rat(-1), Rat(0)}, {Rat(0), Rat(0), Rat(1)}};
    CHECK(a.gamma() == want);
    CHECK(gamma_power(a) == translation({1, 0}));
    CHECK(gamma_power_is_translation(a));
    CHECK(torsion_free_check(a));
  }

  TEST_CASE("tricosm") {
    Ctx c(3);
    auto a = build_affine(make_class(3, {1, 1, 0}, {}, c.h), c.h, c.refs);
    CHECK(a.dimension() == 3);
    CHECK(gamma_power(a) == translation({1, 0, 0}));
    CHECK(torsion_free_check(a));
  }

  TEST_CASE("every enumerated model is torsion free; semidirect variants are not") {
    for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
      Ctx c(p);
      for (std::int64_t n = 1; n <= 12; ++n)
        for (const auto& b : enumerate(n, p, c.h).iso_classes) {
          auto a = build_affine(b, c.h, c.refs);
          CHECK(gamma_power(a) == translation(a.translation_of_power()));
          CHECK(torsion_free_check(a));
          auto s = build_semidirect(p, b.triple, b.theta, c.h, c.refs);
          CHECK_FALSE(s.bieberbach);
          CHECK_FALSE(torsion_free_check(s));
          CHECK(gamma_power(s) == translation(std::vector<Int>(s.dimension(), 0)));
        }
    }
    Ctx c(5);
    CHECK_FALSE(torsion_free_check(build_semidirect(5, {0, 1, 1}, {}, c.h, c.refs)));
  }

  TEST_CASE("text format") {
    Ctx c(3);
    auto a = build_affine(make_class(3, {2, 0, 1}, {}, c.h), c.h, c.refs);
    auto text = to_string(a);
    CHECK(text.rfind("3 5\n", 0) == 0);
    std::istringstream in(text);
    auto back = read_affine(in);
    CHECK(back.p == 3);
    CHECK(back.t == a.t);
    CHECK(back.v == a.v);
  }
}

TEST_SUITE("isomorphism and genus") {
  TEST_CASE("p = 23 pairs") {
    Ctx c(23);
    auto b0 = make_class(23, {1, 1, 0}, {0}, c.h);
    auto b1 = make_class(23, {1, 1, 0}, {1}, c.h);
    auto b2 = make_class(23, {1, 1, 0}, {2}, c.h);
    CHECK(group_iso(b1, b1, c.h));
    CHECK(group_iso(b1, b2, c.h));
    CHECK_FALSE(group_iso(b1, b0, c.h));
    CHECK(profinite_iso(b0, b1));
    CHECK_FALSE(profinite_iso(make_class(23, {2, 1, 0}, {}, c.h), make_class(23, {1, 0, 1}, {}, c.h)));
    CHECK_THROWS_AS(profinite_iso(b0, make_class(23, {1, 0, 1}, {}, c.h)), DomainError);
  }

  TEST_CASE("genus sizes") {
    for (std::uint64_t p : arith::primes_up_to(19)) {
      Ctx c(p);
      CHECK(genus_size(make_class(p, {1, 1, 0}, {}, c.h), c.h) == 1);
      CHECK(genus_size(make_class(p, {2, 0, 1}, {}, c.h), c.h) == 1);
    }
    Ctx c(23);
    CHECK(genus_size(make_class(23, {1, 1, 0}, {}, c.h), c.h) == 2);
    CHECK(genus_size(make_class(23, {1, 0, 1}, {}, c.h), c.h) == 2);
    CHECK(semidirect_genus_size(23, {0, 1, 0}, c.h) ==
          classdata::orbit_count(c.h, SubgroupSpec::full_galois));
  }

  TEST_CASE("genus members partition the classes of a triple") {
    Ctx c(23);
    for (Triple t : {Triple{1, 1, 0}, Triple{1, 0, 1}, Triple{2, 1, 0}}) {
      auto b = make_class(23, t, {1}, c.h);
      auto members = genus_members(b, c.h);
      CHECK(members.size() == genus_size(b, c.h));
      CHECK(std::find(members.begin(), members.end(), b) != members.end());
      for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = 0; j < members.size(); ++j) {
          CHECK(profinite_iso(members[i], members[j]));
          CHECK(group_iso(members[i], members[j], c.h) == (i == j));
        }
      auto e = enumerate(t.dimension(23), 23, c.h);
      std::size_t same = std::count_if(e.iso_classes.begin(), e.iso_classes.end(),
                                       [&](const BieberbachClass& x) { return x.triple == t; });
      CHECK(same == members.size());
    }
  }
}

TEST_SUITE("enumeration") {
  TEST_CASE("golden counts") {
    auto count = [](std::int64_t n, std::uint64_t p) {
      auto e = enumerate(n, p, classdata::builtin_class_group(p));
      return std::pair{e.iso_classes.size(), e.profinite_classes.size()};
    };
    CHECK(count(2, 2) == std::pair<std::size_t, std::size_t>{1, 1});
    CHECK(count(3, 3) == std::pair<std::size_t, std::size_t>{1, 1});
    CHECK(count(22, 23) == std::pair<std::size_t, std::size_t>{0, 0});
    CHECK(count(23, 23) == std::pair<std::size_t, std::size_t>{2, 1});
    CHECK(count(24, 23) == std::pair<std::size_t, std::size_t>{4, 2});
    CHECK(enumerate(2, 2, classdata::builtin_class_group(2)).iso_classes.front().triple == Triple{1, 1, 0});
  }

  TEST_CASE("small dimensions") {
    for (std::uint64_t p : arith::primes_up_to(19)) {
      Ctx c(p);
      for (std::int64_t n = 1; n < static_cast<std::int64_t>(p) - 1; ++n) CHECK(enumerate(n, p, c.h).iso_classes.empty());
      for (std::int64_t n = 1; n <= 21; ++n) {
        auto e = enumerate(n, p, c.h);
        CHECK(e.iso_classes.size() == e.profinite_classes.size());
        for (const auto& b : e.iso_classes) {
          CHECK(b.dimension() == n);
          CHECK(genus_size(b, c.h) == 1);
        }
      }
    }
  }

  TEST_CASE("admissible triples are sorted and complete") {
    auto ts = admissible_triples(10, 3);
    CHECK(std::is_sorted(ts.begin(), ts.end()));
    std::size_t brute = 0;
    for (std::int64_t a = 0; a <= 10; ++a)
      for (std::int64_t b = 0; b <= 5; ++b)
        for (std::int64_t c = 0; c <= 3; ++c)
          if (a + 2 * b + 3 * c == 10 && constraint_violations({a, b, c}).empty()) ++brute;
    CHECK(ts.size() == brute);
  }
}

TEST_SUITE("fingerprints") {
  TEST_CASE("Klein bottle abelianization against a hand presentation") {
    Ctx c(2);
    auto a = build_affine(make_class(2, {1, 1, 0}, {}, c.h), c.h, c.refs);
    // generators t1, t2, g: g t2 g^-1 = t2^-1 and g^2 = t1
    oracle::Mat rel{{0, 2, 0}, {-1, 0, 2}};
    auto want = abelian_invariants(rel, 3);
    CHECK(want == std::vector<Int>{2, 0});
    linalg::Int mods[] = {2, 3, 4};
    auto f = fingerprint(a, mods);
    CHECK(f.abelianization == want);
    CHECK(f.congruence.size() == 3);
  }

  TEST_CASE("tricosm abelianization against a hand presentation") {
    Ctx c(3);
    auto a = build_affine(make_class(3, {1, 1, 0}, {}, c.h), c.h, c.refs);
    // generators t1, t2, t3, g with g t g^-1 = T t and g^3 = t1
    oracle::Mat rel{{0, -1, 1, 0}, {0, -1, -2, 0}, {-1, 0, 0, 3}};
    auto want = abelian_invariants(rel, 4);
    CHECK(want == std::vector<Int>{3, 0});
    CHECK(fingerprint(a, {}).abelianization == want);
  }

  TEST_CASE("relation matrices agree with determinantal divisors") {
    for (std::uint64_t p : {2u, 3u, 5u}) {
      Ctx c(p);
      for (std::int64_t n = 1; n <= 6; ++n)
        for (const auto& b : enumerate(n, p, c.h).iso_classes) {
          auto a = build_affine(b, c.h, c.refs);
          auto r = abelianization_relations(a);
          oracle::Mat m(r.rows(), std::vector<Int>(r.cols()));
          for (std::size_t i = 0; i < r.rows(); ++i)
            for (std::size_t j = 0; j < r.cols(); ++j) m[i][j] = r(i, j);
          CHECK(fingerprint(a, {}).abelianization == abelian_invariants(m, r.cols()));
        }
    }
  }

  TEST_CASE("genus members share fingerprints") {
    Ctx c(23);
    linalg::Int mods[] = {2, 3, 4, 5, 8, 9};
    auto f0 = fingerprint(build_affine(make_class(23, {1, 1, 0}, {0}, c.h), c.h, c.refs), mods);
    auto f1 = fingerprint(build_affine(make_class(23, {1, 1, 0}, {1}, c.h), c.h, c.refs), mods);
    CHECK(f0 == f1);
    CHECK(f0.abelianization == std::vector<Int>{23, 0});
  }
}

TEST_SUITE("json") {
  TEST_CASE("class round trip") {
    Ctx c(23);
    auto b = make_class(23, {2, 1, 0}, {2}, c.h);
    auto j = to_json(b);
    CHECK(j.dump() == R"({"p":23,"a":2,"b":1,"c":0,"theta":[1],"exceptional":false,"dimension":24})");
    CHECK(class_from_json(nlohmann::json::parse(j.dump()), c.h) == b);
  }
}
