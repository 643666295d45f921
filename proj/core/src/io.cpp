#include "cpgenus/io.hpp"

#include "cpgenus/errors.hpp"

namespace cpgenus::io {

nlohmann::ordered_json json_int(const Int& v) {
  if (v.fits_slong_p()) return static_cast<std::int64_t>(v.get_si());
  return v.get_str();
}

nlohmann::ordered_json json_rat(const Rat& value) {
  Rat v = value;
  v.canonicalize();
  if (v.get_den() == 1) return json_int(v.get_num());
  return v.get_str();
}

nlohmann::ordered_json json_ints(std::span<const Int> v) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& x : v) arr.push_back(json_int(x));
  return arr;
}

nlohmann::ordered_json json_matrix(const IntMatrix& m) {
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) arr.push_back(json_ints(m.row(i)));
  return arr;
}

nlohmann::ordered_json json_matrix(const RatMatrix& m) {
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(json_rat(m(i, j)));
    arr.push_back(std::move(row));
  }
  return arr;
}

Int int_from_json(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return Int(std::to_string(j.get<std::uint64_t>()));
  if (j.is_number_integer()) return Int(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) {
    Int v;
    if (v.set_str(j.get<std::string>(), 10) == 0) return v;
  }
  throw DomainError("expected an integer, got " + j.dump());
}

IntMatrix int_matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw DomainError("matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw DomainError("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = int_from_json(j[i][c]);
  }
  return m;
}

nlohmann::ordered_json to_json(const cyclo::CycloIdeal& a) {
  nlohmann::ordered_json j;
  j["p"] = a.p();
  j["hnf"] = json_matrix(a.hnf());
  return j;
}

cyclo::CycloIdeal ideal_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("hnf")) throw DomainError("ideal JSON must have fields p and hnf");
  if (!j["p"].is_number_unsigned()) throw DomainError("ideal JSON: p must be a positive integer");
  return cyclo::CycloIdeal::from_hnf(j["p"].get<std::uint64_t>(), int_matrix_from_json(j["hnf"]));
}

nlohmann::ordered_json to_json(const cyclo::CycloElem& x) { return json_ints(x.coeffs()); }

}  // namespace cpgenus::io
