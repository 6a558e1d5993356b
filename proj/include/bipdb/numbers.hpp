#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace bipdb {

// Shortest decimal form that parses back to exactly `v` ("0.5", "1e-12").
// Used wherever a parameter value becomes part of a name or report.
std::string format_double_shortest(double v);

// Fixed 17-significant-digit form; also round-trip exact, but stable in
// width. Used for score columns.
std::string format_double_17(double v);

// Whole-string parses; nullopt on any trailing garbage or empty input.
std::optional<double> parse_double(std::string_view text);
std::optional<int64_t> parse_int(std::string_view text);

} // namespace bipdb
