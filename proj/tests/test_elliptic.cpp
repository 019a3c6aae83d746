#include "doctest.h"

#include <cmath>

#include "ddkp/elliptic.hpp"
#include "test_util.hpp"

using namespace ddkp;
using test::kI;
using test::kPi;
using test::rel_err;

namespace {
const cplx kTau(0.2, 1.1);
const EllipticOpts kOpts;
} // namespace

TEST_CASE("eisenstein special values and shifts") {
    const ModularParam m(kTau);
    CHECK(std::abs(eisenstein(2, 0.0, m)) < 1e-13);
    CHECK(std::abs(eisenstein(2, half_period(3, m), m) + kPi * kI) < 1e-12);
    const cplx u(0.31, 0.22);
    CHECK(std::abs(eisenstein(1, u + kTau, m) - eisenstein(1, u, m) + 2.0 * kPi * kI) < 1e-11);
    CHECK(std::abs(eisenstein(1, u + half_period(3, m), m) -
                   (eisenstein(4, u, m) - kPi * kI)) < 1e-11);
}

TEST_CASE("eisenstein pole guard and residue") {
    const ModularParam m(kTau);
    CHECK_THROWS_AS(eisenstein(1, cplx(1e-9, 0.0), m), NearPole);
    CHECK_THROWS_AS(eisenstein(4, half_period(3, m) + cplx(1e-10, 0.0), m), NearPole);
    // E^(1) has a residue-1 simple pole: u^2 (-E^(1)'(u)) -> 1
    const cplx u(1e-3, 0.0);
    CHECK(std::abs(u * u * (-eisenstein_du(1, u, m, 1)) - 1.0) < 1e-5);
}

TEST_CASE("eisenstein derivatives") {
    const ModularParam m(kTau);
    const cplx u(0.27, 0.18);
    SUBCASE("against finite differences") {
        const double h = 1e-4;
        const cplx fd1 = (eisenstein(1, u + h, m) - eisenstein(1, u - h, m)) / (2.0 * h);
        CHECK(rel_err(eisenstein_du(1, u, m, 1), fd1) < 1e-6);
        const cplx fd2 = (eisenstein(1, u + h, m) - 2.0 * eisenstein(1, u, m) +
                          eisenstein(1, u - h, m)) /
                         (h * h);
        CHECK(rel_err(eisenstein_du(1, u, m, 2), fd2) < 1e-6);
    }
    SUBCASE("half-period shift kills the additive constant under one derivative") {
        CHECK(std::abs(eisenstein_du(4, u + half_period(3, m), m, 1) -
                       eisenstein_du(1, u, m, 1)) < 1e-10);
    }
    SUBCASE("order validation") {
        CHECK_THROWS_AS(eisenstein_du(1, u, m, 3), InvalidArgument);
    }
}

TEST_CASE("branched S") {
    const ModularParam m(cplx(0.0, 1.3));
    SUBCASE("anchored base value") {
        // log(theta_2(0)/theta_3(0)) at tau = 1.3i
        const BranchedLogValue v = S(0.5, m);
        CHECK(std::abs(v.value - cplx(-0.36070998163363831217, 0.0)) < 1e-14);
        CHECK(v.base_point == cplx(0.5, 0.0));
        CHECK(v.path.size() == 2);
    }
    SUBCASE("quasi-periodicity on the anchored branch") {
        Rng rng(3);
        for (int i = 0; i < 10; ++i) {
            // region where the straight-path continuation realizes +i pi:
            // below the real axis for the unit shift
            const cplx u_minus =
                cplx(rng.uniform(0.05, 0.45), 0.0) - rng.uniform(0.05, 0.45) * m.tau();
            const cplx d1 = S(u_minus + 1.0, m).value - S(u_minus, m).value;
            CHECK(std::abs(d1 - kPi * kI) < 1e-11);
            // tau-shift: plain periodicity in the standard cell region
            const cplx u_plus =
                cplx(rng.uniform(0.05, 0.45), 0.0) + rng.uniform(0.05, 0.45) * m.tau();
            const cplx dt = S(u_plus + m.tau(), m).value - S(u_plus, m).value;
            CHECK(std::abs(dt) < 1e-11);
        }
    }
    SUBCASE("unit shift is i pi modulo 2 pi i everywhere") {
        Rng rng(4);
        for (int i = 0; i < 10; ++i) {
            const cplx u =
                cplx(rng.uniform(0.05, 0.45), 0.0) + rng.uniform(0.05, 0.45) * m.tau();
            const cplx d = S(u + 1.0, m).value - S(u, m).value - kPi * kI;
            const double k = std::round(d.imag() / (2.0 * kPi));
            CHECK(std::abs(d - 2.0 * kPi * kI * k) < 1e-11);
        }
    }
    SUBCASE("branch crossing is an error") {
        CHECK_THROWS_AS(S(0.0, m), BranchCrossing); // endpoint on a zero of theta_1
        // straight path from 1/2 to -1/2 + eps*i passes through the zero at 0
        CHECK_THROWS_AS(S(cplx(-0.5, 1e-12), m), BranchCrossing);
    }
    SUBCASE("explicit waypoints route around zeros") {
        const cplx target(-0.5, 0.3);
        const cplx waypoint(0.3, 0.4);
        const BranchedLogValue v = S(target, m, kOpts, std::span<const cplx>(&waypoint, 1));
        CHECK(v.path.size() == 3);
        const cplx direct = std::log(theta(1, target, m) / theta(4, target, m));
        const double k = std::round(((v.value - direct) / (2.0 * kPi * kI)).real());
        CHECK(std::abs(v.value - direct - 2.0 * kPi * kI * k) < 1e-12);
    }
}

TEST_CASE("S_prime") {
    const ModularParam m(kTau);
    const cplx u(0.31, 0.22);
    SUBCASE("factorized form equals E1 - E4 (cross-check active)") {
        const cplx sp = S_prime(u, m); // throws CrossCheckFailure on disagreement
        CHECK(rel_err(sp, eisenstein(1, u, m) - eisenstein(4, u, m)) < 1e-12);
    }
    SUBCASE("frozen spot value") {
        // S'(0.3 + 0.1i | 0.2 + 1.1i)
        const cplx want(1.5555982687357350631, -1.5609032512759115434);
        CHECK(std::abs(S_prime(cplx(0.3, 0.1), m) - want) < 1e-13);
    }
    SUBCASE("unit residue at the origin") {
        const cplx x(1e-4, 0.0);
        CHECK(std::abs(x * S_prime(x, m) - 1.0) < 1e-6);
    }
    SUBCASE("vanishes at the (1+tau)/2 half period") {
        CHECK(std::abs(S_prime(half_period(2, m), m)) < 1e-11);
    }
    SUBCASE("pole guard") {
        CHECK_THROWS_AS(S_prime(cplx(1e-10, 0.0), m), NearPole);
    }
}

TEST_CASE("S_tau closed form") {
    const ModularParam m(kTau);
    const cplx u(0.31, 0.22);
    SUBCASE("matches the tau finite difference of the continued S") {
        const double h = 1e-4;
        const cplx fd =
            (S(u, ModularParam(kTau + h)).value - S(u, ModularParam(kTau - h)).value) /
            (2.0 * h);
        CHECK(rel_err(S_tau(u, m), fd) < 1e-5);
    }
    SUBCASE("lattice shift picks up -S'") {
        const cplx lhs = S_tau(u + kTau, m) - S_tau(u, m);
        CHECK(std::abs(lhs + S_prime(u, m)) < 1e-10);
    }
    SUBCASE("heat-equation form vanishes identically") {
        Rng rng(9);
        for (int i = 0; i < 50; ++i) {
            const ModularParam mm(cplx(rng.uniform(-0.4, 0.4), rng.uniform(0.6, 2.0)));
            const cplx x = random_cell_point(rng, mm);
            const cplx t40 = theta_const(4, mm);
            const cplx g = theta_du(1, x, mm, 2) / theta(1, x, mm) -
                           theta_du(4, x, mm, 2) / theta(4, x, mm) -
                           2.0 * S_prime(x, mm) * eisenstein(2, x, mm) -
                           kPi * kPi * (t40 * t40) * (t40 * t40);
            CHECK(std::abs(g) < 1e-10 * (1.0 + std::abs(S_prime(x, mm))));
        }
    }
}

TEST_CASE("pair function and the key identity") {
    const ModularParam m(kTau);
    SUBCASE("definition agrees with the factorization at random pairs") {
        Rng rng(21);
        for (int i = 0; i < 50; ++i) {
            const ModularParam mm(cplx(rng.uniform(-0.3, 0.3), rng.uniform(0.6, 2.0)));
            const cplx x1 = random_cell_point(rng, mm);
            cplx x2 = random_cell_point(rng, mm);
            while (theta_zero_distance(2, x1 - x2, mm) < 0.06 ||
                   theta_zero_distance(1, x1 - x2, mm) < 0.06 ||
                   theta_zero_distance(4, x1 - x2, mm) < 0.06)
                x2 = random_cell_point(rng, mm);
            CHECK_NOTHROW(phi_pair(x1, x2, mm)); // cross-check runs internally
            CHECK(key_identity_residual(x1, x2, mm) < 1e-10);
        }
    }
    SUBCASE("coincident arguments are rejected") {
        const cplx x(0.31, 0.22);
        CHECK_THROWS_AS(key_identity_residual(x, x + cplx(1e-10, 0.0), m), NearPole);
    }
    SUBCASE("residual symmetric under joint negation") {
        const cplx x1(0.31, 0.22), x2(-0.17, 0.41);
        const double a = key_identity_residual(x1, x2, m);
        const double b = key_identity_residual(-x1, -x2, m);
        CHECK(std::abs(a - b) < 1e-11);
    }
}

TEST_CASE("wp_prime") {
    const ModularParam m(kTau);
    const cplx u(0.29, 0.33);
    CHECK(std::abs(wp_prime(-u, m) + wp_prime(u, m)) < 1e-10); // odd
    CHECK(std::abs(wp_prime(half_period(1, m), m)) < 1e-10);   // zero at half period
    const cplx x(1e-2, 0.0);
    CHECK(std::abs(x * x * x * wp_prime(x, m) + 2.0) < 1e-3);  // -2/u^3 pole
    CHECK_THROWS_AS(wp_prime(cplx(0.0, 0.0), m), NearPole);
}

TEST_CASE("half-tau collapse identity") {
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        const ModularParam mm(cplx(rng.uniform(-0.3, 0.3), rng.uniform(0.6, 2.0)));
        const cplx u = random_cell_point(rng, mm);
        CHECK(std::abs(half_tau_collapse(u, mm)) <
              1e-11 * (1.0 + std::abs(eisenstein(1, u, mm.half()))));
    }
    const ModularParam m(kTau);
    // finite and equal at the 1/2 half period
    CHECK(std::abs(half_tau_collapse(half_period(1, m), m)) < 1e-11);
    // shared simple pole cancels near the origin
    CHECK(std::abs(half_tau_collapse(cplx(1e-3, 0.0), m)) < 1e-9);
}
