#ifndef ZONOID_BODY_IO_HPP
#define ZONOID_BODY_IO_HPP

#include "zonoid/decide.hpp"

#include <json.hpp>

#include <string>

namespace zonoid {

/// Body file layout:
///   { "dimension": 3, "kind": "polytope", "vertices": [[...], ...] }
///   { "dimension": 4, "kind": "zonotope", "generators": [[...], ...] }
///   { "dimension": 3, "kind": "ball", "radius": 1.0 }
///   { "dimension": 3, "kind": "revolution_profile", "axis": [...], "profile_cheb": [...] }
BodySpec body_from_json(const nlohmann::json& j);
nlohmann::json body_to_json(const BodySpec& body);
BodySpec load_body_file(const std::string& path);

/// Report serialization, schema "zonoid-report/1".
nlohmann::ordered_json verdict_to_json(const ZonoidVerdict& verdict, const BodySpec& body);

/// Per-direction diagnostics: density samples and the atom table.
std::string diagnostics_csv(const ZonalProfile& profile, const IntervalDistribution& dist,
                            int samples = 257);

} // namespace zonoid

#endif
