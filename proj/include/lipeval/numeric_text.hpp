#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lipeval {

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

/// Whole-string parse; throws Error(MalformedFloat) naming `what`.
double parse_double(std::string_view s, std::string_view what);
long long parse_integer(std::string_view s, std::string_view what);

std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace lipeval
