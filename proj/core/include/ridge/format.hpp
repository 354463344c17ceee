#pragma once

#include <string>

namespace ridge {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

double parse_double(const std::string& text);

}  // namespace ridge
