#include "toricq/polytope_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "toricq/errors.hpp"

namespace toricq {

namespace {

using nlohmann::json;

Rational offset_from_json(const json& j, const std::string& field) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const InputError& e) {
      throw InputError(e.what(), field);
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, j.get<double>());
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
  }
  throw InputError("offset must be a string or number", field);
}

}  // namespace

DelzantPolytope parse_polytope_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what(), "<document>");
  }
  if (!doc.is_object()) throw InputError("polytope JSON must be an object", "<document>");
  if (!doc.contains("dim")) throw InputError("missing required key 'dim'", "dim");
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() <= 0)
    throw InputError("'dim' must be a positive integer", "dim");
  if (!doc.contains("facets")) throw InputError("missing required key 'facets'", "facets");
  if (!doc["facets"].is_array()) throw InputError("'facets' must be an array", "facets");

  const auto dim = static_cast<std::size_t>(doc["dim"].get<long long>());
  std::vector<Facet> facets;
  const auto& arr = doc["facets"];
  for (std::size_t r = 0; r < arr.size(); ++r) {
    const std::string base = "facets[" + std::to_string(r) + "]";
    const auto& f = arr[r];
    if (!f.is_object()) throw InputError("facet must be an object", base);
    if (!f.contains("normal") || !f["normal"].is_array())
      throw InputError("facet needs an integer array 'normal'", base + ".normal");
    if (!f.contains("offset")) throw InputError("facet needs an 'offset'", base + ".offset");
    IntVector normal;
    for (const auto& v : f["normal"]) {
      if (!v.is_number_integer()) throw InputError("normal entries must be integers", base + ".normal");
      normal.push_back(v.get<std::int64_t>());
    }
    facets.push_back({std::move(normal), offset_from_json(f["offset"], base + ".offset")});
  }
  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw InputError("'name' must be a string", "name");
    name = doc["name"].get<std::string>();
  }
  return DelzantPolytope(dim, std::move(facets), std::move(name));
}

DelzantPolytope load_polytope(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open polytope file '" + path.string() + "'", "input");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_polytope_json(ss.str());
}

std::string polytope_to_json(const DelzantPolytope& poly) {
  json doc;
  doc["dim"] = poly.dim();
  doc["facets"] = json::array();
  for (const auto& f : poly.facets()) doc["facets"].push_back({{"normal", f.normal}, {"offset", to_string(f.offset)}});
  if (!poly.name().empty()) doc["name"] = poly.name();
  return doc.dump();
}

}  // namespace toricq
