#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace testsupport {

// Monotone mapping of doubles onto unsigned integers, so differences count
// representable values between two doubles.
inline std::uint64_t ulp_map(double x) {
    const std::uint64_t u = std::bit_cast<std::uint64_t>(x);
    return (u >> 63) ? (0ULL - u) : (u + 0x8000000000000000ULL);
}

inline std::uint64_t ulp_distance(double a, double b) {
    const std::uint64_t ma = ulp_map(a);
    const std::uint64_t mb = ulp_map(b);
    return ma > mb ? ma - mb : mb - ma;
}

// Spacing of representable doubles at magnitude |x|.
inline double ulp_of(double x) {
    x = std::fabs(x);
    return std::nextafter(x, std::numeric_limits<double>::infinity()) - x;
}

}  // namespace testsupport
