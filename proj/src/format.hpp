#pragma once

#include <string>

#include <json.hpp>

namespace pauli2d::detail {

// Shortest-safe round-trip text for a double (17 significant digits).
std::string fmt_double(double v);

// JSON text with every floating point number written at 17 digits.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

}  // namespace pauli2d::detail
