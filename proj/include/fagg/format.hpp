#pragma once

#include <string>

namespace fagg::fmt {

/// Shortest decimal text that parses back to exactly `value`.
std::string shortest(double value);

/// Rounds half away from zero to `digits` decimals.
double round_half_away(double value, int digits);

/// Fixed-point text with `digits` decimals after half-away-from-zero rounding.
/// Never prints "-0.000".
std::string fixed(double value, int digits);

}  // namespace fagg::fmt
