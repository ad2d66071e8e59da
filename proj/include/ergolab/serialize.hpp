#pragma once

#include "ergolab/convexity.hpp"
#include "ergolab/dynamics.hpp"
#include "ergolab/fluctuation.hpp"
#include "ergolab/folner.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace ergolab {

using Json = nlohmann::ordered_json;

// Element tuples are written for every term of at most `element_limit`
// elements; larger box terms carry only their radius.
Json family_to_json(const FolnerFamily& family, std::int64_t element_limit = 100'000);
FolnerFamily family_from_json(const Json& j);

Json modulus_table_to_json(const ModulusTable& table, const std::string& family_label);
ModulusTable modulus_table_from_json(const Json& j);

Json report_to_json(const FluctuationReport& report);

// {"points": M, "weights": ["a/b", ...], "generators": {"e1": [...]}}
FiniteMeasureSystem system_from_json(const Group& group, const Json& j);
Json system_to_json(const FiniteMeasureSystem& system);

// {"type": "hanner", "p": 2} | {"type": "p-uniform", "K": ..., "p": ...} |
// {"type": "small-p", "p": ...}
ConvexityModulus convexity_from_json(const Json& j);

// Shortest round-trip text, independent of the C locale.
std::string format_double(double x);

}  // namespace ergolab
