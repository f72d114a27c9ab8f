#pragma once

#include <fstream>
#include <istream>
#include <limits>
#include <string>

#include <json.hpp>

#include "effinv/target.hpp"

namespace effinv {

class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads a target spec from its JSON document.  Schema:
///   {"ambient": {"kind": "projective_product", "dims": [4]},
///    "bundle": {"degrees": [[5]]}, "spin": [0], "r": 1, "d": 1, "ell": 1}
/// or an abstract ambient:
///   {"ambient": {"kind": "abstract", "name": "...", "dim": 10,
///                "curve_rank": 1, "canonical": [-7], "h1_vanishes": true},
///    ...}
inline TargetSpec parse_target(const nlohmann::json& j) {
  auto fail = [](const std::string& field, const std::string& what) {
    throw ParseError("target spec field '" + field + "': " + what);
  };
  TargetSpec out;
  if (!j.contains("ambient")) fail("ambient", "missing");
  const auto& amb = j.at("ambient");
  std::string kind = amb.value("kind", "projective_product");
  if (kind == "projective_product") {
    if (!amb.contains("dims")) fail("ambient.dims", "missing");
    out.ambient = AmbientSpace::projective_product(
        amb.at("dims").get<std::vector<int>>(), amb.value("name", ""));
  } else if (kind == "abstract") {
    for (const char* field : {"dim", "curve_rank", "canonical"})
      if (!amb.contains(field))
        fail(std::string("ambient.") + field, "missing");
    out.ambient = AmbientSpace::abstract_space(
        amb.value("name", "abstract"), amb.at("dim").get<int>(),
        amb.at("curve_rank").get<int>(),
        amb.at("canonical").get<std::vector<long>>(),
        amb.value("h1_vanishes", true));
  } else {
    fail("ambient.kind", "unknown kind '" + kind + "'");
  }
  if (!j.contains("bundle") || !j.at("bundle").contains("degrees"))
    fail("bundle.degrees", "missing");
  out.bundle.summand_degrees =
      j.at("bundle").at("degrees").get<std::vector<std::vector<long>>>();
  if (j.contains("spin"))
    out.spin_degree = j.at("spin").get<std::vector<long>>();
  out.r = j.value("r", 1L);
  out.d = j.value("d", 1L);
  out.ell = j.value("ell", 1L);
  try {
    out.validate();
  } catch (const InvalidDataError& e) {
    throw ParseError(std::string("invalid target spec: ") + e.what());
  }
  return out;
}

inline TargetSpec load_target(std::istream& in, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return parse_target(j);
}

inline TargetSpec load_target_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open target spec: " + path);
  return load_target(in, path);
}

inline nlohmann::json integer_json(const Integer& x) {
  static const Integer lo = Integer(std::numeric_limits<long long>::min());
  static const Integer hi = Integer(std::numeric_limits<long long>::max());
  if (x >= lo && x <= hi)
    return nlohmann::json(static_cast<long long>(x));
  return nlohmann::json(x.str());  // beyond 64 bits: decimal string
}

inline nlohmann::json rational_json(const Rational& x) {
  nlohmann::json out;
  out["num"] = integer_json(numerator(x));
  out["den"] = integer_json(denominator(x));
  return out;
}

}  // namespace effinv
