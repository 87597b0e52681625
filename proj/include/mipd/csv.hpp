#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mipd {

/// Shortest-roundtrip-safe text for a binary64 value: 17 significant digits
/// (%.17g); "inf", "-inf" and "nan" for non-finite values.
std::string format_real(double x);

/// Inverse of format_real. Throws UsageError on malformed text.
double parse_real(std::string_view text);

std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace mipd
