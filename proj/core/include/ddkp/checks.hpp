#pragma once

#include <cstdint>
#include <random>

#include "ddkp/report.hpp"
#include "ddkp/theta.hpp"

namespace ddkp {

// Deterministic sampler; the uniform deviate is built from raw mt19937_64
// output so that identical seeds give identical samples on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 eng_;
};

struct SuiteConfig {
    std::uint64_t seed = 42;
    int samples = 100;
    double im_tau_lo = 0.6;
    double im_tau_hi = 2.0;
    double re_tau_lo = -0.4;
    double re_tau_hi = 0.4;
    double fd_step = 1e-4;   // tau step of the finite-difference laws
    double tol_scale = 1.0;  // multiplies every tolerance

    void validate() const;
};

ModularParam random_tau(Rng& rng, const SuiteConfig& cfg);
// Generic point of the fundamental cell, at distance >= margin from every
// half-period lattice.
cplx random_cell_point(Rng& rng, const ModularParam& m, double margin = 0.06);

// Exact identity suite over seeded random samples.
std::vector<CheckResult> run_identity_checks(const SuiteConfig& cfg);
// Finite-difference laws (heat equation, tau-flows) plus their second-order
// step-ratio confirmations.
std::vector<CheckResult> run_fd_checks(const SuiteConfig& cfg);

} // namespace ddkp
