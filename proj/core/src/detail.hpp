#pragma once

#include <complex>
#include <numbers>

namespace ddkp::detail {

inline constexpr double kPi = std::numbers::pi;
inline constexpr std::complex<double> kI{0.0, 1.0};

// C(r, j) for r <= 3.
inline constexpr double kBinom[4][4] = {
    {1, 0, 0, 0},
    {1, 1, 0, 0},
    {1, 2, 1, 0},
    {1, 3, 3, 1},
};

} // namespace ddkp::detail
