#pragma once

// Serialization: JSON for expansions and reports, CSV ("x,y,z" per line) for
// point sets, and the two domain notations (inline "height@x,y,z" tokens and a
// JSON array of {"apex": [x,y,z], "height": h}).

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphsieve/concentration.hpp"
#include "sphsieve/recovery.hpp"
#include "sphsieve/sieve.hpp"
#include "sphsieve/sphharm.hpp"

namespace sphsieve {

using Json = nlohmann::ordered_json;

/// {"L": int, "coeffs": [[re, im], ...]} in flat-index order.
Json to_json(const HarmonicExpansion& e);
HarmonicExpansion expansion_from_json(const Json& j);

Json to_json(const SphericalCap& cap);
Json to_json(const CapUnionDomain& domain);
Json to_json(const DensityResult& density);
Json to_json(const ConcentrationReport& report);
Json to_json(const SieveReport& report);
Json to_json(const RecoveryRun& run);

/// Caps separated by ';' or whitespace, each "height@x,y,z"; the apex is
/// normalized. "" and "none" give the empty domain.
CapUnionDomain parse_domain_inline(const std::string& spec);
CapUnionDomain domain_from_json(const Json& j);
/// A readable file path is parsed as JSON, anything else as inline tokens.
CapUnionDomain load_domain(const std::string& spec);

std::vector<UnitVector> read_points_csv(std::istream& in);
void write_points_csv(std::ostream& out, const std::vector<UnitVector>& points);

}  // namespace sphsieve
