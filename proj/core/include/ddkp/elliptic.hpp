#pragma once

#include <span>
#include <vector>

#include "ddkp/theta.hpp"

namespace ddkp {

struct EllipticOpts {
    double pole_guard = 1e-8;  // NearPole radius around theta zeros
    TruncationPolicy trunc{};
    bool cross_check = true;   // verify factorized forms against definitions
};

// E^(a)(u) = theta_a'(u) / theta_a(u).
cplx eisenstein(ThetaIndex a, cplx u, const ModularParam& m, const EllipticOpts& opts = {});

// order-th u-derivative of E^(a), order in {1,2}, from theta derivative ratios.
cplx eisenstein_du(ThetaIndex a, cplx u, const ModularParam& m, int order,
                   const EllipticOpts& opts = {});

// Value of S(u) = log(theta_1(u)/theta_4(u)) on the branch continued from the
// base point 1/2, where S(1/2) = log(theta_2(0)/theta_3(0)) (principal).
struct BranchedLogValue {
    cplx value;
    cplx base_point;
    std::vector<cplx> path; // polyline actually walked, base point first
};

// Continuation along straight segments base -> waypoints... -> u. Throws
// BranchCrossing if the path passes within the pole guard of a zero of
// theta_1 or theta_4.
BranchedLogValue S(cplx u, const ModularParam& m, const EllipticOpts& opts = {},
                   std::span<const cplx> waypoints = {});

// S'(u) = pi theta_4^2(0) theta_2(u) theta_3(u) / (theta_1(u) theta_4(u)),
// cross-checked against E^(1)(u) - E^(4)(u).
cplx S_prime(cplx u, const ModularParam& m, const EllipticOpts& opts = {});

// d/dtau S(u|tau) from 2 pi i dS/dtau = S'(u) E^(2)(u) + pi^2/2 theta_4^4(0).
cplx S_tau(cplx u, const ModularParam& m, const EllipticOpts& opts = {});

// phi(x1,x2) = -E1(x1) - E4(x1) + E1(x2) + E4(x2) + 2 E2(x1-x2),
// cross-checked against its factorized theta representation.
cplx phi_pair(cplx x1, cplx x2, const ModularParam& m, const EllipticOpts& opts = {});

// Normalized residual of S'(x1-x2) phi(x1,x2) + pi^2 theta_4^4(0) = S'(x1) S'(x2).
double key_identity_residual(cplx x1, cplx x2, const ModularParam& m,
                             const EllipticOpts& opts = {});

// Weierstrass wp'(u) = -d^2/du^2 E^(1)(u) on the lattice Z + Z tau.
cplx wp_prime(cplx u, const ModularParam& m, const EllipticOpts& opts = {});

// E^(1)(u|tau) + E^(4)(u|tau) - E^(1)(u|tau/2); identically zero.
cplx half_tau_collapse(cplx u, const ModularParam& m, const EllipticOpts& opts = {});

} // namespace ddkp
