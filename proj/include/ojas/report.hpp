#pragma once

// Deterministic text output: JSON with every float printed as %.17g, and
// the matching CSV cell formatter.

#include <json.hpp>

#include <string>

namespace ojas {

using Json = nlohmann::ordered_json;

/// %.17g; NaN and infinities become "nan", "inf", "-inf".
std::string format_real(double x);

/// Serializes `j` with `indent` spaces per level (compact when negative).
/// Non-finite floats are written as null.
std::string dump_json(const Json& j, int indent = 2);

}  // namespace ojas
