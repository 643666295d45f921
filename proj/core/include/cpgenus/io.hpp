#pragma once

// JSON helpers shared by the serializers: integers that do not fit in 64
// bits are written as decimal strings, rationals as "num/den" strings.

#include <nlohmann/json.hpp>

#include "cpgenus/cyclotomic.hpp"
#include "cpgenus/linalg.hpp"

namespace cpgenus::io {

using linalg::Int;
using linalg::IntMatrix;
using linalg::Rat;
using linalg::RatMatrix;

nlohmann::ordered_json json_int(const Int& v);
nlohmann::ordered_json json_rat(const Rat& v);
nlohmann::ordered_json json_ints(std::span<const Int> v);
nlohmann::ordered_json json_matrix(const IntMatrix& m);
nlohmann::ordered_json json_matrix(const RatMatrix& m);

// Accepts a JSON integer or a decimal string.
Int int_from_json(const nlohmann::json& j);
IntMatrix int_matrix_from_json(const nlohmann::json& j);

// Ideal serialization: {"p": int, "hnf": [[...], ...]}.
nlohmann::ordered_json to_json(const cyclo::CycloIdeal& a);
cyclo::CycloIdeal ideal_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const cyclo::CycloElem& x);

}  // namespace cpgenus::io
