#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace instance_forge::csv {

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);
/// Strict parse of a whole field; throws ParseError naming `context`.
double parse_double(std::string_view field, std::string_view context);

/// Splits a comma-separated line; fields are never quoted in our files.
std::vector<std::string> split(std::string_view line);
std::string join(const std::vector<std::string>& fields);

}  // namespace instance_forge::csv
