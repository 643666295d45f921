#include <doctest.h>

#include "cpgenus/cyclotomic.hpp"
#include "cpgenus/errors.hpp"
#include "cpgenus/io.hpp"

using namespace cpgenus;
using nlohmann::json;

TEST_CASE("integers beyond 64 bits become strings") {
  CHECK(io::json_int(linalg::Int(42)).dump() == "42");
  CHECK(io::json_int(linalg::Int(-7)).dump() == "-7");
  linalg::Int big("123456789012345678901234567890");
  CHECK(io::json_int(big).dump() == "\"123456789012345678901234567890\"");
  CHECK(io::int_from_json(io::json_int(big)) == big);
  CHECK(io::int_from_json(json(-3)) == -3);
  CHECK_THROWS(io::int_from_json(json("12x")));
}

TEST_CASE("rationals") {
  CHECK(io::json_rat(linalg::Rat(3, 6)).dump() == "\"1/2\"");
  CHECK(io::json_rat(linalg::Rat(4)).dump() == "4");
}

TEST_CASE("ideal round trip") {
  auto a = cyclo::ideal_mul(cyclo::split_prime_ideal(7, 29), cyclo::split_prime_ideal(7, 43));
  auto j = io::to_json(a);
  CHECK(j["p"] == 7);
  CHECK(j["hnf"].size() == 6);
  CHECK(io::ideal_from_json(json::parse(j.dump())) == a);
}

TEST_CASE("malformed ideals are rejected") {
  CHECK_THROWS_AS(io::ideal_from_json(json::parse(R"({"p":3,"hnf":[[2,0],[0,1]]})")), DomainError);
  CHECK_THROWS(io::ideal_from_json(json::parse(R"({"p":3})")));
}

TEST_CASE("matrices") {
  linalg::IntMatrix m{{1, 2}, {3, 4}};
  CHECK(io::json_matrix(m).dump() == "[[1,2],[3,4]]");
  CHECK(io::int_matrix_from_json(json::parse("[[1,2],[3,4]]")) == m);
  CHECK_THROWS(io::int_matrix_from_json(json::parse("[[1,2],[3]]")));
}
