#pragma once

#include <complex>
#include <numbers>

#include "ddkp/checks.hpp"
#include "ddkp/theta.hpp"

namespace ddkp::test {

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Independent oracle: direct summation of the defining series over a fixed
// symmetric 64-term window, no pairing, no argument reduction.
inline cplx brute_theta(int a, cplx u, cplx tau, int window = 64) {
    cplx s = 0.0;
    for (int k = -window; k <= window; ++k) {
        switch (a) {
            case 1:
                s -= std::exp(kI * kPi * tau * (k + 0.5) * (k + 0.5) +
                              2.0 * kPi * kI * (u + 0.5) * (k + 0.5));
                break;
            case 2:
                s += std::exp(kI * kPi * tau * (k + 0.5) * (k + 0.5) +
                              2.0 * kPi * kI * u * (k + 0.5));
                break;
            case 3:
                s += std::exp(kI * kPi * tau * double(k) * double(k) +
                              2.0 * kPi * kI * u * double(k));
                break;
            default:
                s += std::exp(kI * kPi * tau * double(k) * double(k) +
                              2.0 * kPi * kI * (u + 0.5) * double(k));
                break;
        }
    }
    return s;
}

inline double rel_err(cplx got, cplx want) {
    return std::abs(got - want) / (1.0 + std::abs(want));
}

} // namespace ddkp::test
