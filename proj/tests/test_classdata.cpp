#include <doctest.h>

#include <random>
#include <set>

#include "cpgenus/arith.hpp"
#include "cpgenus/classdata.hpp"
#include "cpgenus/errors.hpp"
#include "oracles.hpp"

using namespace cpgenus;
using namespace cpgenus::classdata;

namespace {

ClassGroupData synthetic(std::uint64_t p, std::vector<std::int64_t> factors,
                         std::vector<std::vector<std::int64_t>> action) {
  ClassGroupData h;
  h.p = p;
  h.factors = std::move(factors);
  h.h_minus = 1;
  for (auto d : h.factors) h.h_minus *= static_cast<long>(d);
  h.galois_generator = arith::primitive_root(p);
  h.action = std::move(action);
  h.provenance = Provenance::user_file;
  return h;
}

// u * (cyclic shift of the k coordinates), an automorphism of (Z/d)^k.
ClassGroupData scaled_shift(std::uint64_t p, std::int64_t d, std::size_t k, std::int64_t u, std::size_t shift) {
  std::vector<std::vector<std::int64_t>> a(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t j = 0; j < k; ++j) a[(j + shift) % k][j] = u;
  return synthetic(p, std::vector<std::int64_t>(k, d), a);
}

std::size_t brute_orbit_count(const ClassGroupData& h, SubgroupSpec s) {
  auto gen = subgroup_generator(h, s);
  std::set<ClassSymbol> seen;
  std::size_t orbits = 0;
  for (const auto& x : elements(h)) {
    if (seen.count(x)) continue;
    ++orbits;
    ClassSymbol y = x;
    for (std::uint64_t i = 0; i < gen.order; ++i) {
      seen.insert(y);
      y = apply_galois_power(h, y, gen.galois_exponent);
    }
  }
  return orbits;
}

}  // namespace

TEST_SUITE("maillet") {
  TEST_CASE("matrices for p = 5 and 7") {
    CHECK(maillet_matrix(5) == linalg::IntMatrix{{1, 3}, {2, 1}});
    CHECK(maillet_matrix(7) == linalg::IntMatrix{{1, 4, 5}, {2, 1, 3}, {3, 5, 1}});
    CHECK(maillet_h_minus(5) == 1);
    CHECK(maillet_h_minus(7) == 1);
  }

  TEST_CASE("relative class numbers") {
    for (std::uint64_t p : arith::primes_up_to(19))
      if (p > 2) CHECK(maillet_h_minus(p) == 1);
    CHECK(maillet_h_minus(23) == 3);
    CHECK(maillet_h_minus(29) == 8);
    CHECK(maillet_h_minus(31) == 9);
  }

  TEST_CASE("agrees with rational Gaussian elimination") {
    for (std::uint64_t p : arith::primes_up_to(41))
      if (p > 2) CHECK(maillet_h_minus(p) == oracle::maillet_h_minus(p));
  }

  TEST_CASE("domain") {
    CHECK_THROWS_AS(maillet_h_minus(2), DomainError);
    CHECK_THROWS_AS(maillet_h_minus(9), DomainError);
  }
}

TEST_SUITE("builtin data") {
  TEST_CASE("trivial groups up to 19") {
    for (std::uint64_t p : arith::primes_up_to(19)) {
      auto h = builtin_class_group(p);
      CHECK(h.trivial());
      CHECK(h.h_minus == 1);
      CHECK(validation_errors(h).empty());
      CHECK(orbit_count(h, SubgroupSpec::full_galois) == 1);
      CHECK(orbit_count(h, SubgroupSpec::c2) == 1);
    }
    CHECK(builtin_class_group(13).provenance == Provenance::builtin);
  }

  TEST_CASE("p = 23: Z/3 with the generator acting by inversion") {
    auto h = builtin_class_group(23);
    CHECK(h.factors == std::vector<std::int64_t>{3});
    CHECK(h.h_minus == maillet_h_minus(23));
    CHECK(arith::multiplicative_order(h.galois_generator, 23) == 22);
    for (const auto& x : elements(h)) {
      CHECK(apply_galois_power(h, x, 1) == negate(h, x));
      // sigma_{-1} = sigma_g^11 also inverts
      CHECK(apply_galois_power(h, x, 11) == negate(h, x));
    }
  }

  TEST_CASE("p = 23 action agrees with the reference ideal") {
    auto h = builtin_class_group(23);
    auto refs = builtin_references(23);
    CHECK(refs.split_primes == std::vector<std::uint64_t>{47});
    auto derived = derive_galois_action(h, refs);
    REQUIRE(derived);
    CHECK(*derived == h.action);
  }

  TEST_CASE("unsupported p") {
    CHECK_THROWS_AS(builtin_class_group(29), DomainError);
    CHECK_THROWS_AS(builtin_class_group(15), DomainError);
  }
}

TEST_SUITE("validation") {
  TEST_CASE("action of the wrong order is rejected") {
    // multiplication by 2 on Z/7 has order 3, which does not divide 22
    auto h = synthetic(23, {7}, {{2}});
    auto errs = validation_errors(h);
    CHECK_FALSE(errs.empty());
    CHECK_THROWS_AS(validate(h), DomainError);
  }

  TEST_CASE("each violation is reported") {
    ClassGroupData h = synthetic(29, {4, 2}, {{1, 0}, {0, 1}});
    h.h_minus = 9;                 // product mismatch
    h.galois_generator = 4;        // not a primitive root
    auto errs = validation_errors(h);
    CHECK(errs.size() >= 3);       // order of factors, product, generator
  }

  TEST_CASE("well-defined action") {
    // (1) in Z/2 x Z/4 cannot map to an element of order 4
    auto bad = synthetic(29, {2, 4}, {{1, 0}, {1, 1}});
    CHECK_FALSE(validation_errors(bad).empty());
    auto good = synthetic(29, {2, 4}, {{1, 0}, {2, 1}});
    CHECK(validation_errors(good).empty());
  }

  TEST_CASE("synthetic user data is accepted") {
    // swapping two Z/3 factors has order 2, which divides 30
    auto h = scaled_shift(31, 3, 2, 1, 1);
    CHECK(validation_errors(h).empty());
    CHECK(h.h_minus == maillet_h_minus(31));
    // a 3-cycle has order 3, which does not divide 28
    CHECK_FALSE(validation_errors(scaled_shift(29, 2, 3, 1, 1)).empty());
  }
}

TEST_SUITE("json") {
  TEST_CASE("round trip is bit exact") {
    for (std::uint64_t p : {2u, 13u, 23u}) {
      auto text = serialize(builtin_class_group(p));
      auto back = parse_class_group(text);
      CHECK(back == builtin_class_group(p));
      CHECK(serialize(back) == text);
    }
    auto h = scaled_shift(31, 3, 2, 2, 1);
    h.h_minus = 9;
    auto text = serialize(h);
    CHECK(serialize(parse_class_group(text)) == text);
    CHECK(text.find("\"user-file\"") != std::string::npos);
  }

  TEST_CASE("large class numbers survive as strings") {
    ClassGroupData h = synthetic(101, {}, {});
    h.h_minus = Int("3452000000000000000000001");
    auto j = to_json(h);
    CHECK(j["h_minus"].is_string());
  }

  TEST_CASE("malformed input") {
    CHECK_THROWS(parse_class_group("{\"p\": 23}"));
    CHECK_THROWS(parse_class_group(R"({"p":23,"h_minus":3,"factors":[3],"galois_generator":5,"action":[[2]],"provenance":"oracle"})"));
    CHECK_THROWS_AS(parse_class_group(R"({"p":23,"h_minus":3,"factors":[3],"galois_generator":5,"action":[[0]],"provenance":"user-file"})"),
                    DomainError);
  }
}

TEST_SUITE("orbits") {
  TEST_CASE("trivial group") {
    auto h = builtin_class_group(7);
    CHECK(orbits(h, SubgroupSpec::full_galois) == std::vector<ClassSymbol>{ClassSymbol{}});
  }

  TEST_CASE("inversion on Z/3") {
    auto h = builtin_class_group(23);
    CHECK(orbits(h, SubgroupSpec::c2) == std::vector<ClassSymbol>{{0}, {1}});
    CHECK(orbit_of(h, SubgroupSpec::c2, {1}) == std::vector<ClassSymbol>{{1}, {2}});
    CHECK(canonical_representative(h, SubgroupSpec::c2, {2}) == ClassSymbol{1});
    CHECK(orbit_count(h, SubgroupSpec::full_galois) == 2);
    CHECK(orbit_count(h, SubgroupSpec::c2) == 2);
  }

  TEST_CASE("synthetic actions: Burnside, enumeration and monotonicity") {
    std::mt19937_64 rng(21);
    int tested = 0;
    for (std::uint64_t p : {7u, 11u, 13u, 29u, 31u, 37u, 41u}) {
      for (std::int64_t d : {2, 3, 4, 5, 7, 9}) {
        for (std::size_t k = 1; k <= 3; ++k) {
          std::int64_t u = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(d - 1));
          std::size_t shift = rng() % k;
          auto h = scaled_shift(p, d, k, u, shift);
          if (!validation_errors(h).empty()) continue;
          ++tested;
          auto full = orbit_count(h, SubgroupSpec::full_galois);
          auto c2 = orbit_count(h, SubgroupSpec::c2);
          CHECK(full == burnside_count(h, SubgroupSpec::full_galois));
          CHECK(c2 == burnside_count(h, SubgroupSpec::c2));
          CHECK(full == brute_orbit_count(h, SubgroupSpec::full_galois));
          CHECK(c2 == brute_orbit_count(h, SubgroupSpec::c2));
          CHECK(full <= c2);
          CHECK(static_cast<std::int64_t>(c2) <= h.order());
          auto reps = orbits(h, SubgroupSpec::full_galois);
          CHECK(reps.size() == full);
          for (const auto& r : reps) CHECK(canonical_representative(h, SubgroupSpec::full_galois, r) == r);
        }
      }
    }
    CHECK(tested > 20);
  }

  TEST_CASE("subgroup generators") {
    auto h = builtin_class_group(23);
    CHECK(subgroup_generator(h, SubgroupSpec::full_galois).order == 22);
    CHECK(subgroup_generator(h, SubgroupSpec::c2).galois_exponent == 11);
    CHECK(subgroup_generator(builtin_class_group(2), SubgroupSpec::c2).order == 1);
  }

  TEST_CASE("enumeration guard") {
    auto h = synthetic(101, {1009, 1009 * 1009}, {{1, 0}, {0, 1}});
    CHECK_THROWS_AS(elements(h), DomainError);
  }
}

TEST_SUITE("ideal classes") {
  TEST_CASE("classes of powers and conjugates of the reference prime") {
    auto h = builtin_class_group(23);
    auto refs = builtin_references(23);
    auto p47 = refs.generators.at(0);
    CHECK(ideal_class(p47, h, refs) == ClassSymbol{1});
    CHECK(ideal_class(cyclo::ideal_power(p47, 2), h, refs) == ClassSymbol{2});
    CHECK(ideal_class(cyclo::ideal_power(p47, 3), h, refs) == ClassSymbol{0});
    CHECK(ideal_class(cyclo::galois_apply(cyclo::GaloisElement(23, 5), p47), h, refs) == ClassSymbol{2});
    CHECK(representative_ideal(h, refs, {2}) == cyclo::ideal_power(p47, 2));
  }

  TEST_CASE("trivial class group") {
    auto h = builtin_class_group(5);
    auto refs = builtin_references(5);
    CHECK(ideal_class(cyclo::split_prime_ideal(5, 11), h, refs) == ClassSymbol{});
  }

  TEST_CASE("recomputed data matches the table") {
    for (std::uint64_t p : {2u, 3u, 11u, 23u}) {
      auto c = computed_class_group(p);
      auto b = builtin_class_group(p);
      CHECK(c.data.provenance == Provenance::computed);
      c.data.provenance = Provenance::builtin;
      CHECK(c.data.factors == b.factors);
      CHECK(c.data.h_minus == b.h_minus);
      CHECK(c.data.action == b.action);
    }
  }

  TEST_CASE("references for user data") {
    auto h = builtin_class_group(23);
    h.provenance = Provenance::user_file;
    CHECK(references_for(h).has_value());
    auto other = scaled_shift(29, 2, 3, 1, 0);
    CHECK_FALSE(references_for(other).has_value());
  }
}
