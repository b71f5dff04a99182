#pragma once

// Polytope JSON:
//   {"dim": n, "facets": [{"normal": [ints], "offset": "p/q" | number}], "name": optional}
// Offsets given as strings are parsed exactly ("1/2", "0.25"); numeric offsets go
// through their shortest decimal representation, so 0.5 and "1/2" agree.

#include <filesystem>
#include <string>
#include <string_view>

#include "toricq/polytope.hpp"

namespace toricq {

// Throws InputError naming the offending field on malformed input.
DelzantPolytope parse_polytope_json(std::string_view text);
DelzantPolytope load_polytope(const std::filesystem::path& path);
std::string polytope_to_json(const DelzantPolytope& poly);

}  // namespace toricq
