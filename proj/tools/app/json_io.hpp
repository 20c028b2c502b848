#pragma once

#include <string>

#include "json.hpp"

namespace csvortex::app {

/// Serializes with two-space indentation, keys in insertion order and every floating-point
/// value printed as %.17g, so identical inputs give byte-identical files.
std::string dump_json(const nlohmann::ordered_json& j);

}  // namespace csvortex::app
