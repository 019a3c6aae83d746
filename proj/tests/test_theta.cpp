#include "doctest.h"

#include <cmath>

#include "ddkp/theta.hpp"
#include "test_util.hpp"

using namespace ddkp;
using test::brute_theta;
using test::kI;
using test::kPi;
using test::rel_err;

TEST_CASE("modular parameter guards") {
    CHECK_THROWS_AS(ModularParam(cplx(0.3, 0.0)), OutOfRange);
    CHECK_THROWS_AS(ModularParam(cplx(0.3, -1.0)), OutOfRange);
    CHECK_THROWS_AS(ModularParam(cplx(0.0, 0.01)), OutOfRange); // |q| = 0.969
    const ModularParam m(cplx(0.0, 0.02));                      // |q| = 0.939
    CHECK(std::abs(m.nome()) < 0.95);
    CHECK(ModularParam(cplx(0.2, 1.1)).half().tau() == cplx(0.1, 0.55));
    CHECK(ModularParam(cplx(0.0, 1.0)).on_imaginary_axis());
    CHECK_FALSE(ModularParam(cplx(0.2, 1.1)).on_imaginary_axis());
}

TEST_CASE("theta index is cyclic mod 4") {
    CHECK(ThetaIndex(1).value() == 1);
    CHECK(ThetaIndex(5).value() == 1);
    CHECK(ThetaIndex(0).value() == 4);
    CHECK(ThetaIndex(-1).value() == 3);
    CHECK(ThetaIndex(8).value() == 4);
}

TEST_CASE("series against the fixed-window direct summation") {
    const cplx tau(0.2, 1.1);
    const ModularParam m(tau);
    SUBCASE("spot value frozen from an independent evaluation") {
        // theta_2(0.3 + 0.1i | 0.2 + 1.1i)
        const cplx want(0.54791702750288198319, -0.13495678881387731608);
        CHECK(std::abs(theta(2, cplx(0.3, 0.1), m) - want) < 1e-14);
    }
    SUBCASE("all four functions at random-ish points") {
        Rng rng(11);
        for (int i = 0; i < 25; ++i) {
            const cplx u(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            for (int a = 1; a <= 4; ++a) {
                const cplx want = brute_theta(a, u, tau);
                CHECK(std::abs(theta(a, u, m) - want) <= 1e-12 * (1.0 + std::abs(want)));
            }
        }
    }
    SUBCASE("argument reduction path (large shifts)") {
        const cplx u(0.31, 0.17);
        for (int a = 1; a <= 4; ++a) {
            const cplx want = brute_theta(a, u + 3.0 * tau - 6.0, tau, 80);
            const cplx got = theta(a, u + 3.0 * tau - 6.0, m);
            CHECK(std::abs(got - want) <= 1e-11 * (1.0 + std::abs(want)));
        }
    }
}

TEST_CASE("special values") {
    const ModularParam m(cplx(0.0, 1.0));
    CHECK(std::abs(theta(1, 0.0, m)) == 0.0); // theta_1 odd
    const ModularParam far(cplx(0.0, 40.0));
    CHECK(std::abs(theta(3, 0.0, far) - 1.0) < 1e-15);
    // leading term of the theta_2 constant: 2 q^{1/4} = 2 exp(-10 pi)
    const double lead = 2.0 * std::exp(-10.0 * kPi);
    CHECK(std::abs(theta_const(2, far) - lead) < 1e-15 * lead);
}

TEST_CASE("theta derivatives") {
    const cplx tau(0.2, 1.1);
    const ModularParam m(tau);
    SUBCASE("theta_1'(0) = pi theta_2 theta_3 theta_4 (0)") {
        const cplx want = kPi * theta_const(2, m) * theta_const(3, m) * theta_const(4, m);
        CHECK(rel_err(theta_du(1, 0.0, m, 1), want) < 1e-13);
        CHECK(std::abs(theta_du(2, 0.0, m, 1)) < 1e-13);
        CHECK(std::abs(theta_du(3, 0.0, m, 1)) < 1e-13);
    }
    SUBCASE("spot third derivative") {
        // theta_3'''(0.3 + 0.1i | 0.2 + 1.1i)
        const cplx want(16.419167065381769271, 7.9157941952760453083);
        CHECK(std::abs(theta_du(3, cplx(0.3, 0.1), m, 3) - want) < 1e-12 * std::abs(want));
    }
    SUBCASE("second derivative against central differences") {
        const cplx u(0.23, 0.14);
        const double h = 1e-4;
        for (int a = 1; a <= 4; ++a) {
            const cplx fd =
                (theta(a, u + h, m) - 2.0 * theta(a, u, m) + theta(a, u - h, m)) / (h * h);
            CHECK(rel_err(theta_du(a, u, m, 2), fd) < 1e-6);
        }
    }
    SUBCASE("derivatives respect the reduction prefactor") {
        const cplx u(0.31, 0.17);
        const cplx v = u + 2.0 * tau;
        const double h = 1e-4;
        const cplx fd = (theta(1, v + h, m) - theta(1, v - h, m)) / (2.0 * h);
        CHECK(rel_err(theta_du(1, v, m, 1), fd) < 1e-6);
    }
    SUBCASE("order validation") {
        CHECK_THROWS_AS(theta_du(1, 0.1, m, 0), InvalidArgument);
        CHECK_THROWS_AS(theta_du(1, 0.1, m, 4), InvalidArgument);
    }
}

TEST_CASE("truncation policy") {
    const ModularParam m(cplx(0.0, 1.0));
    TruncationPolicy tight;
    tight.max_terms = 1;
    CHECK_THROWS_AS(theta(3, cplx(0.3, 0.4), ModularParam(cplx(0.0, 0.12)), tight),
                    TruncationExceeded);
    TruncationPolicy bad;
    bad.eps = -1.0;
    CHECK_THROWS_AS(theta(3, 0.0, m, bad), InvalidArgument);
}

TEST_CASE("infinite product form of theta_1") {
    const cplx tau(0.2, 1.1);
    const ModularParam m(tau);
    SUBCASE("agrees with the series at random points") {
        Rng rng(5);
        for (int i = 0; i < 100; ++i) {
            const ModularParam mm(cplx(rng.uniform(-0.4, 0.4), rng.uniform(0.6, 2.0)));
            const cplx u(rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8));
            const cplx a = theta(1, u, mm);
            const cplx b = theta1_product(u, mm);
            CHECK(std::abs(a - b) <= 1e-12 * (std::abs(a) + std::abs(b) + 1e-3));
        }
    }
    SUBCASE("vanishes on the lattice") {
        CHECK(std::abs(theta1_product(0.0, m)) < 1e-12);
        CHECK(std::abs(theta1_product(1.0, m)) < 1e-12);
        CHECK(std::abs(theta1_product(cplx(1.0, 0.0) + tau, m)) < 1e-11);
    }
}

TEST_CASE("half periods and zero lattice distances") {
    const cplx tau(0.2, 1.1);
    const ModularParam m(tau);
    CHECK(half_period(0, m) == cplx(0.0, 0.0));
    CHECK(half_period(1, m) == cplx(0.5, 0.0));
    CHECK(half_period(2, m) == 0.5 * (1.0 + tau));
    CHECK(half_period(3, m) == 0.5 * tau);
    CHECK(half_period(4, m) == half_period(0, m)); // cyclic
    for (int a = 1; a <= 4; ++a) {
        const cplx w = half_period(a - 1, m);
        CHECK(std::abs(theta(a, w, m)) < 1e-12);     // simple zero there
        CHECK(theta_zero_distance(a, w, m) < 1e-14); // distance sees it
        CHECK(theta_zero_distance(a, w + 3.0 - 2.0 * tau, m) < 1e-12); // lattice-periodic
    }
    CHECK(lattice_distance(cplx(0.5, 0.2), m) > 0.2);
    CHECK(lattice_distance(cplx(1.0, 0.0) + 5.0 * tau, m) < 1e-12);
}
