#pragma once

#include <iosfwd>
#include <string_view>

#include "mipd/protocol.hpp"
#include "mipd/topology.hpp"

namespace mipd::cli {

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitIo = 3;

/// Accepts plain radians ("2.356") or multiples of π ("0.75pi", "pi", "-pi").
double parse_angle(std::string_view text);

/// "start:end:count".
AxisSpec parse_axis(std::string_view text);

/// "+1", "1" or "-1".
Direction parse_direction(std::string_view text);

/// Entry point shared by the executable and the tests.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace mipd::cli
