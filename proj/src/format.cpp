#include "fagg/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace fagg::fmt {

std::string shortest(double value) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return {buf.data(), res.ptr};
}

double round_half_away(double value, int digits) {
    const double scale = std::pow(10.0, digits);
    const double scaled = value * scale;
    // Beyond 2^52 every double is already an integer at this scale.
    if (!std::isfinite(scaled) || std::abs(scaled) >= 0x1p52) return value;
    return std::round(scaled) / scale;
}

std::string fixed(double value, int digits) {
    double rounded = round_half_away(value, digits);
    if (rounded == 0.0) rounded = 0.0;  // drop the sign of -0
    const int n = std::snprintf(nullptr, 0, "%.*f", digits, rounded);
    std::string out(static_cast<std::size_t>(n) + 1, '\0');
    std::snprintf(out.data(), out.size(), "%.*f", digits, rounded);
    out.pop_back();
    return out;
}

}  // namespace fagg::fmt
