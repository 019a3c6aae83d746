#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "ddkp/loewner.hpp"
#include "test_util.hpp"

using namespace ddkp;
using test::kI;
using test::kPi;

namespace {

double vec_max(const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end());
}

Trajectory demo_run(cplx xi, int steps, cplx tau_end = cplx(0.0, 1.5),
                    std::optional<TruncatedSeries> series = std::nullopt) {
    const TauPath path(cplx(0.0, 1.0), tau_end, steps);
    const std::vector<cplx> tracers = {cplx(0.0, 0.0), cplx(0.0, 0.2), cplx(0.1, 0.15)};
    return evolve(path, DrivingFunction::constant(xi), tracers, series, {});
}

} // namespace

TEST_CASE("loewner rhs") {
    const ModularParam m(cplx(0.0, 1.2));
    SUBCASE("u = 0 is an exact fixed point") {
        CHECK(loewner_rhs(0.0, cplx(0.5, 0.0), m) == cplx(0.0, 0.0));
        CHECK(loewner_rhs(0.0, cplx(0.31, 0.12), m) == cplx(0.0, 0.0));
    }
    SUBCASE("four-term and half-tau forms agree") {
        Rng rng(3);
        EvolveOptions opts;
        opts.cross_check_rhs = false;
        for (int i = 0; i < 50; ++i) {
            const ModularParam mm(cplx(0.0, rng.uniform(0.8, 2.0)));
            const cplx u = random_cell_point(rng, mm);
            cplx xi = random_cell_point(rng, mm);
            while (theta_zero_distance(1, u + xi, mm) < 0.05 ||
                   theta_zero_distance(4, u + xi, mm) < 0.05)
                xi = random_cell_point(rng, mm);
            const cplx four = loewner_rhs(u, xi, mm, opts);
            EvolveOptions shifted_opts;
            shifted_opts.normalization = Normalization::shifted;
            const cplx half = loewner_rhs(u, xi, mm, shifted_opts) +
                              eisenstein(1, xi, mm.half()) / (4.0 * kPi * kI);
            CHECK(std::abs(four - half) < 1e-11 * (1.0 + std::abs(four)));
        }
    }
    SUBCASE("simple pole with residue -1 as u + xi -> 0") {
        const cplx xi(0.5, 0.0);
        const cplx u = -xi + cplx(1e-3, 0.0);
        const cplx lim = (u + xi) * 4.0 * kPi * kI * loewner_rhs(u, xi, m);
        CHECK(std::abs(lim + 1.0) < 5e-3);
    }
    SUBCASE("guards") {
        CHECK_THROWS_AS(loewner_rhs(cplx(0.2, 0.0), cplx(1e-10, 0.0), m), NearPole);
        CHECK_THROWS_AS(loewner_rhs(-cplx(0.5, 0.0) + cplx(1e-10, 0.0), cplx(0.5, 0.0), m),
                        NearPole);
    }
}

TEST_CASE("tau path and driving validation") {
    CHECK_THROWS_AS(TauPath(cplx(0.0, -1.0), cplx(0.0, 1.0), 10), OutOfRange);
    CHECK_THROWS_AS(TauPath(cplx(0.0, 1.0), cplx(0.0, 1.5), 0), InvalidArgument);
    CHECK_THROWS_AS(DrivingFunction::sampled({0.0, 1.0}, {cplx(0.1, 0.0)}), InvalidArgument);
    CHECK_THROWS_AS(DrivingFunction::sampled({0.2, 1.0}, {cplx(0.1, 0.0), cplx(0.2, 0.0)}),
                    InvalidArgument);
    const DrivingFunction lin = DrivingFunction::sampled(
        {0.0, 0.5, 1.0}, {cplx(0.2, 0.0), cplx(0.3, 0.0), cplx(0.4, 0.0)});
    CHECK(std::abs(lin(0.25, cplx(0.0, 1.0)) - cplx(0.25, 0.0)) < 1e-15);
    CHECK(lin.max_spacing() == 0.5);
}

TEST_CASE("fixed point and drift") {
    const Trajectory traj = demo_run(cplx(0.5, 0.0), 500);
    double drift = 0.0;
    for (int i = 0; i < traj.num_samples(); ++i)
        drift = std::max(drift, std::abs(traj.tracers[i][0]));
    CHECK(drift < 1e-12); // RHS vanishes identically at u = 0
}

TEST_CASE("fourth-order convergence under step halving") {
    const cplx xi(0.5, 0.0);
    // at the production step the endpoint is already converged to roundoff
    CHECK(std::abs(demo_run(xi, 500).tracers.back()[1] -
                   demo_run(xi, 1000).tracers.back()[1]) < 1e-9);
    // the 16x decay is measurable at coarse refinements, above the noise floor
    const cplx u_h = demo_run(xi, 16).tracers.back()[2];
    const cplx u_h2 = demo_run(xi, 32).tracers.back()[2];
    const cplx u_h4 = demo_run(xi, 64).tracers.back()[2];
    const double ratio = std::abs(u_h - u_h2) / std::abs(u_h2 - u_h4);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("log R flow against the quadrature oracle") {
    SUBCASE("nontrivial driving") {
        const TauPath path(cplx(0.0, 1.0), cplx(0.0, 1.5), 500);
        const DrivingFunction drv = DrivingFunction::constant(cplx(0.3, 0.0));
        const Trajectory traj = evolve(path, drv, {}, std::nullopt, {});
        const cplx oracle = log_r_quadrature(path, drv);
        CHECK(std::abs(traj.log_r.back() - oracle) < 1e-8);
        CHECK(traj.log_r.back().real() > 0.0); // increasing from 0 in the real regime
        CHECK(std::abs(traj.log_r.back().imag()) < 1e-12);
    }
    SUBCASE("S'(1/2) = 0 makes the log R flow vanish") {
        const TauPath path(cplx(0.0, 1.0), cplx(0.0, 1.5), 500);
        const DrivingFunction drv = DrivingFunction::constant(cplx(0.5, 0.0));
        const Trajectory traj = evolve(path, drv, {}, std::nullopt, {});
        CHECK(std::abs(traj.log_r.back()) < 1e-12);
        CHECK(std::abs(log_r_quadrature(path, drv)) < 1e-12);
    }
}

TEST_CASE("pole aborts") {
    const TauPath path(cplx(0.0, 1.0), cplx(0.0, 1.5), 10);
    SUBCASE("driving on a zero of theta_1") {
        CHECK_THROWS_AS(
            evolve(path, DrivingFunction::constant(cplx(1e-12, 0.0)), {}, std::nullopt, {}),
            NearPole);
    }
    SUBCASE("tracer starting on a pole of the right-hand side") {
        const std::vector<cplx> tracers = {cplx(-0.5 + 1e-12, 0.0)};
        CHECK_THROWS_AS(
            evolve(path, DrivingFunction::constant(cplx(0.5, 0.0)), tracers, std::nullopt, {}),
            NearPole);
    }
    SUBCASE("stage rejection reports StepTooLarge") {
        // fine at the base point, lands on a zero of theta_1 at the midpoint stage
        const TauPath one(cplx(0.0, 1.0), cplx(0.0, 1.5), 1);
        const DrivingFunction drv = DrivingFunction::sampled(
            {0.0, 0.5, 1.0}, {cplx(0.3, 0.0), cplx(1e-13, 0.0), cplx(0.3, 0.0)});
        CHECK_THROWS_AS(evolve(one, drv, {}, std::nullopt, {}), StepTooLarge);
    }
}

TEST_CASE("total derivative of S along the flow") {
    SUBCASE("general driving") {
        const Trajectory traj = demo_run(cplx(0.3, 0.0), 500);
        CHECK(vec_max(total_derivative_residual(traj, 1)) < 1e-6);
        CHECK(vec_max(total_derivative_residual(traj, 2)) < 1e-6);
    }
    SUBCASE("driving at the half period freezes S(u_j)") {
        const Trajectory traj = demo_run(cplx(0.5, 0.0), 500);
        CHECK(vec_max(total_derivative_residual(traj, 1)) < 1e-6);
        // S'(xi) = 0, so S(u_j(tau)|tau) is a conserved quantity of the flow
        const ModularParam m0(traj.tau.front()), m1(traj.tau.back());
        const cplx s0 = S(traj.tracers.front()[2], m0).value;
        const cplx s1 = S(traj.tracers.back()[2], m1).value;
        CHECK(std::abs(s1 - s0) < 1e-9);
    }
    SUBCASE("zero tracer matches the log R flow") {
        const Trajectory traj = demo_run(cplx(0.3, 0.0), 500);
        // d log R/dtau equals S'(xi)^2/(4 pi i), the u -> 0 limit of the law
        for (int i : {100, 250, 400}) {
            const cplx fd = (traj.log_r[i + 1] - traj.log_r[i - 1]) /
                            (traj.tau[i + 1] - traj.tau[i - 1]);
            const ModularParam m(traj.tau[i]);
            const cplx sp = S_prime(traj.xi[i], m);
            CHECK(std::abs(4.0 * kPi * kI * fd - sp * sp) < 1e-6 * (1.0 + std::abs(sp * sp)));
        }
    }
    SUBCASE("index and normalization validation") {
        const Trajectory traj = demo_run(cplx(0.3, 0.0), 10);
        CHECK_THROWS_AS(total_derivative_residual(traj, 7), InvalidArgument);
    }
}

TEST_CASE("pairwise consistency along the flow") {
    const Trajectory traj = demo_run(cplx(0.5, 0.0), 500);
    CHECK(vec_max(consistency_residual(traj, 1, 2)) < 1e-5);
    CHECK_THROWS_AS(consistency_residual(traj, 1, 1), DegeneratePair);
}

TEST_CASE("substituted identity along the flow is pointwise exact") {
    const Trajectory a = demo_run(cplx(0.3, 0.0), 100);
    CHECK(vec_max(substituted_identity_residual(a, 1, 2)) < 1e-10);
    const Trajectory b = demo_run(cplx(0.5, 0.0), 100);
    CHECK(vec_max(substituted_identity_residual(b, 1, 2)) < 1e-10);
}

TEST_CASE("series co-evolution") {
    const cplx xi(0.3, 0.0);
    const int order = 12;
    TruncatedSeries seed(order);
    seed.set_coeff(1, 1.0 / kPi); // c1 = gamma0/pi with gamma0 = 1
    SUBCASE("series value and tracer agree at a concrete z") {
        const cplx z(10.0, 0.0);
        const TauPath path(cplx(0.0, 1.0), cplx(0.0, 1.5), 500);
        const std::vector<cplx> tracers = {seed.eval(z)};
        const Trajectory traj =
            evolve(path, DrivingFunction::constant(xi), tracers, seed, {});
        const cplx from_series = traj.series.back().eval(z);
        const cplx from_tracer = traj.tracers.back()[0];
        CHECK(std::abs(from_series - from_tracer) < 1e-6);
    }
    SUBCASE("series stays real on the imaginary axis with real driving") {
        const TauPath path(cplx(0.0, 1.0), cplx(0.0, 1.4), 200);
        const Trajectory traj =
            evolve(path, DrivingFunction::constant(xi), {}, seed, {});
        for (int k = 1; k <= order; ++k)
            CHECK(std::abs(traj.series.back().coeff(k).imag()) < 5e-12);
    }
    SUBCASE("standard normalization requires c0 = 0") {
        TruncatedSeries bad(order, cplx(0.1, 0.0), {cplx(1.0, 0.0)});
        const TauPath path(cplx(0.0, 1.0), cplx(0.0, 1.4), 10);
        CHECK_THROWS_AS(evolve(path, DrivingFunction::constant(xi), {}, bad, {}),
                        InvalidArgument);
    }
}

TEST_CASE("shifted normalization bookkeeping") {
    const cplx xi(0.3, 0.0);
    const TauPath path(cplx(0.0, 1.0), cplx(0.0, 1.4), 400);
    const DrivingFunction drv = DrivingFunction::constant(xi);
    const std::vector<cplx> tracers = {cplx(0.0, 0.2)};

    EvolveOptions std_opts;
    const Trajectory std_run = evolve(path, drv, tracers, std::nullopt, std_opts);

    EvolveOptions sh_opts;
    sh_opts.normalization = Normalization::shifted;
    const Trajectory sh_run = evolve(path, drv, tracers, std::nullopt, sh_opts);

    SUBCASE("c0 matches its quadrature") {
        // c0(tau) = -(1/4 pi i) int E^(1)(xi | tau'/2) dtau'
        static const double nodes[4] = {-0.8611363115940526, -0.3399810435848563,
                                        0.3399810435848563, 0.8611363115940526};
        static const double weights[4] = {0.3478548451374538, 0.6521451548625461,
                                          0.6521451548625461, 0.3478548451374538};
        cplx acc = 0.0;
        const int panels = 64;
        for (int p = 0; p < panels; ++p) {
            for (int q = 0; q < 4; ++q) {
                const double s = (p + 0.5 * (1.0 + nodes[q])) / panels;
                const ModularParam mh = ModularParam(path.at(s)).half();
                acc += 0.5 * weights[q] / panels * eisenstein(1, xi, mh);
            }
        }
        const cplx oracle = -acc * path.delta() / (4.0 * kPi * kI);
        CHECK(std::abs(sh_run.c0.back() - oracle) < 1e-8);
        CHECK(std::abs(std_run.c0.back() - oracle) < 1e-8); // co-integrated in both runs
    }
    SUBCASE("tilde u = u + c0 within integrator tolerance") {
        const cplx u_std = std_run.tracers.back()[0];
        const cplx u_sh = sh_run.tracers.back()[0];
        CHECK(std::abs(u_sh - (u_std + sh_run.c0.back())) < 1e-9);
        CHECK(std::abs(sh_run.tracer_std(sh_run.num_samples() - 1, 0) - u_std) < 1e-9);
    }
    SUBCASE("log R identical across normalizations") {
        CHECK(std::abs(std_run.log_r.back() - sh_run.log_r.back()) < 1e-12);
    }
}

TEST_CASE("painleve normalization") {
    const cplx xi(0.5, 0.0);
    EvolveOptions opts;
    opts.normalization = Normalization::painleve;
    const TauPath path(cplx(0.0, 1.0), cplx(0.0, 1.4), 2000); // step 5e-4
    const std::vector<cplx> tracers = {cplx(0.2, 0.3)};
    const DrivingFunction drv = DrivingFunction::constant(xi);
    const Trajectory traj = evolve(path, drv, tracers, std::nullopt, opts);

    SUBCASE("second tau-derivative reproduces the wp' law") {
        CHECK(vec_max(painleve_residual(traj, 0)) < 1e-4);
        // the O(h^2) decay is measured above the differencing noise floor
        const TauPath coarse(cplx(0.0, 1.0), cplx(0.0, 1.4), 500);
        const TauPath fine(cplx(0.0, 1.0), cplx(0.0, 1.4), 1000);
        const double r_h =
            vec_max(painleve_residual(evolve(coarse, drv, tracers, std::nullopt, opts), 0));
        const double r_h2 =
            vec_max(painleve_residual(evolve(fine, drv, tracers, std::nullopt, opts), 0));
        CHECK(r_h / r_h2 > 3.0);
        CHECK(r_h / r_h2 < 5.0);
    }
    SUBCASE("heat law along the trajectory") {
        CHECK(vec_max(heat_residual(traj, 0)) < 1e-5);
    }
    SUBCASE("wrong normalization is rejected") {
        const Trajectory std_run = demo_run(cplx(0.5, 0.0), 10);
        CHECK_THROWS_AS(painleve_residual(std_run, 1), InvalidArgument);
        CHECK_THROWS_AS(heat_residual(std_run, 1), InvalidArgument);
        CHECK_THROWS_AS(total_derivative_residual(traj, 0), InvalidArgument);
    }
    SUBCASE("closed-form tau-flow of E^(1) at trajectory points") {
        for (int i : {500, 1000, 1500}) {
            const ModularParam m(traj.tau[i]);
            const cplx x = traj.tracers[i][0] + xi;
            const double h = 1e-4;
            const cplx fd = (eisenstein(1, x, ModularParam(traj.tau[i] + h)) -
                             eisenstein(1, x, ModularParam(traj.tau[i] - h))) /
                            (2.0 * h);
            const cplx rhs = 2.0 * eisenstein(1, x, m) * eisenstein_du(1, x, m, 1) +
                             eisenstein_du(1, x, m, 2);
            CHECK(std::abs(4.0 * kPi * kI * fd - rhs) < 1e-5 * (1.0 + std::abs(rhs)));
        }
    }
}
