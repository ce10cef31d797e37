#pragma once
// Locale-independent number formatting and parsing shared by the text formats.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fovr::text {

/// Fixed-point with exactly `digits` fractional digits; "-0.000" becomes "0.000".
std::string fixed(double v, int digits);

std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);

/// Splits on a single separator character; empty fields are kept.
std::vector<std::string_view> split(std::string_view s, char sep);

std::string_view trim(std::string_view s);

}  // namespace fovr::text
