#pragma once

#include <string>

#include "json.hpp"

namespace elvar {

/// Serializes a JSON tree with every floating-point number printed as %.17g,
/// which re-parses to the identical double. Key order is preserved
/// (nlohmann::ordered_json), so emission is byte-deterministic.
std::string dump_json_17(const nlohmann::ordered_json& value, int indent = 2);

/// %.17g rendering of one double (non-finite values are not representable in
/// JSON and raise InvalidArgument).
std::string format_double_17(double value);

}  // namespace elvar
