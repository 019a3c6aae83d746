#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "ddkp/checks.hpp"
#include "ddkp/curve.hpp"
#include "ddkp/hodograph.hpp"
#include "ddkp/loewner.hpp"

namespace ddkp::cli {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

cplx parse_cplx(const json& j, const char* what) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    throw InvalidArgument(std::string("config: ") + what + " must be a number or [re, im]");
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

DrivingFunction parse_driving(const json& j) {
    if (j.is_number() || j.is_array())
        return DrivingFunction::constant(parse_cplx(j, "xi"));
    if (!j.is_object()) throw InvalidArgument("config: xi must be a value or an object");
    const std::string kind = j.value("kind", "constant");
    if (kind == "constant")
        return DrivingFunction::constant(parse_cplx(j.at("value"), "xi.value"));
    if (kind == "linear_im") {
        const double a = j.value("a", 0.0);
        const double b = j.value("b", 0.0);
        return DrivingFunction::closed_form(
            [a, b](cplx tau) { return cplx(a + b * tau.imag(), 0.0); });
    }
    if (kind == "sampled") {
        std::vector<double> s = j.at("s").get<std::vector<double>>();
        std::vector<cplx> xi;
        for (const auto& v : j.at("xi")) xi.push_back(parse_cplx(v, "xi.xi[]"));
        return DrivingFunction::sampled(std::move(s), std::move(xi));
    }
    throw InvalidArgument("config: unknown driving kind '" + kind + "'");
}

Normalization parse_normalization(const std::string& s) {
    if (s == "standard") return Normalization::standard;
    if (s == "shifted") return Normalization::shifted;
    if (s == "painleve") return Normalization::painleve;
    throw InvalidArgument("config: unknown normalization '" + s + "'");
}

std::string out_path(const std::string& out_dir, const std::string& name) {
    return (std::filesystem::path(out_dir) / name).string();
}

double vec_max(const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

SuiteConfig suite_from_json(const json& c) {
    SuiteConfig cfg;
    cfg.seed = c.value("seed", std::uint64_t{42});
    cfg.samples = c.value("samples", 100);
    if (c.contains("im_tau")) {
        cfg.im_tau_lo = c.at("im_tau").at(0).get<double>();
        cfg.im_tau_hi = c.at("im_tau").at(1).get<double>();
    }
    if (c.contains("re_tau")) {
        cfg.re_tau_lo = c.at("re_tau").at(0).get<double>();
        cfg.re_tau_hi = c.at("re_tau").at(1).get<double>();
    }
    cfg.fd_step = c.value("fd_step", 1e-4);
    cfg.tol_scale = c.value("tol_scale", 1.0);
    return cfg;
}

Report cmd_identities(const json& c) {
    const SuiteConfig cfg = suite_from_json(c);
    cfg.validate();
    Report rep;
    rep.command = "identities";
    for (CheckResult& r : run_identity_checks(cfg)) rep.checks.push_back(std::move(r));
    for (CheckResult& r : run_fd_checks(cfg)) rep.checks.push_back(std::move(r));
    return rep;
}

Report cmd_curve(const json& c, const std::string& out_dir) {
    const int samples = c.value("samples", 200);
    if (samples < 1) throw InvalidArgument("config: curve needs samples >= 1");
    const double im_tau = c.value("im_tau", 1.2);
    const cplx gamma = parse_cplx(c.value("gamma", json(1.0)), "gamma");
    const double tol_scale = c.value("tol_scale", 1.0);
    const std::uint64_t seed = c.value("seed", std::uint64_t{42});
    const ModularParam m{cplx(0.0, im_tau)};
    const CurveParams cp(gamma, m);
    const EllipticOpts eopts;

    Report rep;
    rep.command = "curve";
    Rng rng(seed);

    double worst_curve = 0.0, worst_ratio = 0.0, worst_round = 0.0, worst_shift = 0.0;
    double worst_pair = 0.0;
    std::ostringstream csv;
    csv << "re_u,im_u,re_w,im_w,re_p,im_p,curve_residual\n";
    for (int i = 0; i < samples; ++i) {
        const cplx u = random_cell_point(rng, m);
        const cplx w = w_of_u(u, cp, eopts);
        const cplx p = p_of_u(u, cp, eopts);
        const double res = curve_residual(u, cp, eopts);
        worst_curve = std::max(worst_curve, res);
        csv << csv_number(u.real()) << ',' << csv_number(u.imag()) << ','
            << csv_number(w.real()) << ',' << csv_number(w.imag()) << ','
            << csv_number(p.real()) << ',' << csv_number(p.imag()) << ','
            << csv_number(res) << '\n';

        cplx u2 = random_cell_point(rng, m);
        while (theta_zero_distance(1, u - u2, m) < 0.05 ||
               theta_zero_distance(4, u - u2, m) < 0.05 ||
               theta_zero_distance(1, u + u2, m) < 0.05)
            u2 = random_cell_point(rng, m);
        worst_ratio = std::max(worst_ratio, ratio_identity_residual(u, u2, cp, eopts));

        const cplx guess = u + cplx(rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02));
        worst_round = std::max(worst_round, std::abs(u_from_w(w, m, guess, eopts) - u));
        worst_shift = std::max(worst_shift,
                               std::abs(curve_residual(u + 1.0, cp, eopts) - res));
        const auto g = [&](cplx x) {
            const cplx wx = w_of_u(x, cp, eopts);
            const cplx px = p_of_u(x, cp, eopts);
            return px * px - cp.big_r() * cp.big_r() * (wx + 1.0 / wx);
        };
        worst_pair = std::max(worst_pair, std::abs(g(u) - g(u2)) /
                                              (1.0 + std::abs(cp.big_v())));
    }

    double worst_tau_round = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double y = Rng(seed + 1000 + i).uniform(0.7, 1.9);
        const ModularParam mm{cplx(0.0, y)};
        const cplx t2 = theta_const(2, mm), t3 = theta_const(3, mm);
        const double ratio = ((t2 * t2) / (t3 * t3) + (t3 * t3) / (t2 * t2)).real();
        worst_tau_round =
            std::max(worst_tau_round, std::abs(tau_from_modulus(ratio).tau().imag() - y));
    }

    const cplx t2 = theta_const(2, m), t3 = theta_const(3, m);
    const double e7 = std::abs(-cp.big_v() / (cp.big_r() * cp.big_r()) -
                               ((t2 * t2) / (t3 * t3) + (t3 * t3) / (t2 * t2)));
    const double e8 = std::abs(cp.big_r() - kPi * cp.c1() * t2 * t3);

    rep.checks.push_back(make_check("curve.on_curve", "spectral_curve",
                                    "p^2 = R^2 (w + 1/w) + V on random samples", samples,
                                    worst_curve, 1e-10 * tol_scale));
    rep.checks.push_back(make_check("curve.ratio_identity", "pair_ratio_identity",
                                    "(w1-w2)/(p1+p2) equals its theta factorization",
                                    samples, worst_ratio, 1e-10 * tol_scale));
    rep.checks.push_back(make_check("curve.u_from_w_roundtrip", "uniformization_inverse",
                                    "u -> w -> u round trip", samples, worst_round,
                                    1e-10 * tol_scale));
    rep.checks.push_back(make_check("curve.tau_from_modulus_roundtrip", "modulus_inverse",
                                    "y -> modulus ratio -> y round trip", 10,
                                    worst_tau_round, 1e-10 * tol_scale));
    rep.checks.push_back(make_check("curve.scale_offset_construction", "curve_constants",
                                    "-V/R^2 and R = pi c1 theta_2 theta_3 by construction",
                                    1, std::max(e7, e8), 1e-12 * tol_scale));
    rep.checks.push_back(make_check("curve.pair_constant", "z_independence",
                                    "p^2 - R^2(w + 1/w) takes the same value V everywhere",
                                    samples, worst_pair, 1e-10 * tol_scale));
    rep.checks.push_back(make_check("curve.lattice_shift", "lattice_invariance",
                                    "curve residual invariant under u -> u + 1", samples,
                                    worst_shift, 1e-10 * tol_scale));

    const std::string csv_name = c.value("csv", std::string("curve_samples.csv"));
    write_text_file(out_path(out_dir, csv_name), csv.str());
    rep.artifacts.emplace_back("samples_csv", csv_name);
    return rep;
}

struct EvolveSetup {
    TauPath path;
    DrivingFunction drv;
    std::vector<cplx> tracers;
    std::optional<TruncatedSeries> series;
    EvolveOptions opts;
};

EvolveSetup parse_evolve(const json& c, int default_steps) {
    const json jpath = c.value("path", json::object());
    const cplx start = parse_cplx(jpath.value("start", json::array({0.0, 1.0})), "path.start");
    const cplx end = parse_cplx(jpath.value("end", json::array({0.0, 1.5})), "path.end");
    const int steps = c.value("steps", default_steps);
    EvolveSetup setup{TauPath(start, end, steps),
                      parse_driving(c.value("xi", json(0.5))),
                      {},
                      std::nullopt,
                      {}};
    for (const auto& t : c.value("tracers", json::array()))
        setup.tracers.push_back(parse_cplx(t, "tracers[]"));
    setup.opts.normalization =
        parse_normalization(c.value("normalization", std::string("standard")));
    if (c.contains("series")) {
        const json& js = c.at("series");
        const int order = js.value("order", 12);
        TruncatedSeries s(order);
        s.set_coeff(1, js.value("gamma0", 1.0) / kPi);
        setup.series = std::move(s);
    }
    return setup;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ostringstream csv;
    csv << "s,re_tau,im_tau";
    for (int j = 0; j < traj.num_tracers(); ++j)
        csv << ",re_u" << j << ",im_u" << j;
    csv << ",re_log_r,im_log_r";
    if (traj.normalization == Normalization::shifted) csv << ",re_c0,im_c0";
    csv << '\n';
    for (int i = 0; i < traj.num_samples(); ++i) {
        csv << csv_number(traj.s[i]) << ',' << csv_number(traj.tau[i].real()) << ','
            << csv_number(traj.tau[i].imag());
        for (int j = 0; j < traj.num_tracers(); ++j)
            csv << ',' << csv_number(traj.tracers[i][j].real()) << ','
                << csv_number(traj.tracers[i][j].imag());
        csv << ',' << csv_number(traj.log_r[i].real()) << ','
            << csv_number(traj.log_r[i].imag());
        if (traj.normalization == Normalization::shifted)
            csv << ',' << csv_number(traj.c0[i].real()) << ','
                << csv_number(traj.c0[i].imag());
        csv << '\n';
    }
    write_text_file(path, csv.str());
}

json trajectory_json(const Trajectory& traj) {
    json out;
    switch (traj.normalization) {
        case Normalization::standard: out["normalization"] = "standard"; break;
        case Normalization::shifted: out["normalization"] = "shifted"; break;
        case Normalization::painleve: out["normalization"] = "painleve"; break;
    }
    json samples = json::array();
    for (int i = 0; i < traj.num_samples(); ++i) {
        json row;
        row["s"] = traj.s[i];
        row["tau"] = cplx_json(traj.tau[i]);
        row["xi"] = cplx_json(traj.xi[i]);
        json us = json::array();
        for (int j = 0; j < traj.num_tracers(); ++j) us.push_back(cplx_json(traj.tracers[i][j]));
        row["u"] = std::move(us);
        row["log_r"] = cplx_json(traj.log_r[i]);
        row["c0"] = cplx_json(traj.c0[i]);
        if (!traj.series.empty()) {
            json cs = json::array();
            for (int k = 0; k <= traj.series[i].order(); ++k)
                cs.push_back(cplx_json(traj.series[i].coeff(k)));
            row["series"] = std::move(cs);
        }
        samples.push_back(std::move(row));
    }
    out["samples"] = std::move(samples);
    return out;
}

Report cmd_evolve(const json& c, const std::string& out_dir) {
    const EvolveSetup setup = parse_evolve(c, 500);
    const double tol_scale = c.value("tol_scale", 1.0);
    Report rep;
    rep.command = "evolve";

    Trajectory traj;
    try {
        traj = evolve(setup.path, setup.drv, setup.tracers, setup.series, setup.opts);
    } catch (const NearPole& e) {
        rep.checks.push_back(make_check("evolve.abort", "pole_guard",
                                        std::string("NearPole: ") + e.what(), 0, 1.0, 0.5));
        return rep;
    } catch (const StepTooLarge& e) {
        rep.checks.push_back(make_check("evolve.abort", "pole_guard",
                                        std::string("StepTooLarge: ") + e.what(), 0, 1.0,
                                        0.5));
        return rep;
    }

    const int n = traj.num_samples();
    std::vector<int> zero_tracers, live_tracers;
    for (std::size_t j = 0; j < setup.tracers.size(); ++j)
        (setup.tracers[j] == cplx(0.0, 0.0) ? zero_tracers : live_tracers)
            .push_back(static_cast<int>(j));

    if (!zero_tracers.empty()) {
        double drift = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j : zero_tracers) drift = std::max(drift, std::abs(traj.tracers[i][j]));
        rep.checks.push_back(make_check("evolve.u0_fixed_point", "infinity_fixed_point",
                                        "the z = infinity tracer stays at u = 0", n, drift,
                                        1e-12 * tol_scale));
    }

    if (setup.opts.normalization != Normalization::painleve) {
        double worst_td = 0.0;
        for (int j : live_tracers)
            worst_td = std::max(worst_td, vec_max(total_derivative_residual(traj, j)));
        if (!live_tracers.empty())
            rep.checks.push_back(make_check(
                "evolve.total_derivative", "s_total_derivative",
                "4 pi i dS(u)/dtau = S'(xi) S'(u + xi) along the flow", n, worst_td,
                1e-6 * tol_scale));
        if (live_tracers.size() >= 2) {
            rep.checks.push_back(make_check(
                "evolve.consistency", "reduction_consistency",
                "dS(u1) dS(u2) = dlogR dS(u1 - u2) along the flow", n,
                vec_max(consistency_residual(traj, live_tracers[0], live_tracers[1])),
                1e-5 * tol_scale));
            rep.checks.push_back(make_check(
                "evolve.substituted_identity", "substituted_consistency",
                "the flow-substituted consistency relation holds pointwise", n,
                vec_max(substituted_identity_residual(traj, live_tracers[0], live_tracers[1])),
                1e-10 * tol_scale));
        }
        const cplx quad = log_r_quadrature(setup.path, setup.drv);
        rep.checks.push_back(make_check("evolve.log_r_quadrature", "log_r_flow",
                                        "integrated log R matches Gauss quadrature of S'(xi)^2",
                                        n, std::abs(traj.log_r.back() - quad),
                                        1e-8 * tol_scale));

        if (!live_tracers.empty()) {
            const auto endpoint = [&](int steps) {
                const TauPath p(setup.path.start, setup.path.end, steps);
                return evolve(p, setup.drv, setup.tracers, std::nullopt, setup.opts)
                    .tracers.back()[live_tracers[0]];
            };
            const cplx fine = endpoint(setup.path.steps);
            const cplx finer = endpoint(2 * setup.path.steps);
            rep.checks.push_back(make_check("evolve.step_halving_delta", "rk4_convergence",
                                            "endpoint moves < 1e-9 under step halving", 2,
                                            std::abs(fine - finer), 1e-9 * tol_scale));
            // the 16x decay is measured at coarse refinements, above the
            // roundoff floor of the production step
            const cplx u1 = endpoint(16), u2 = endpoint(32), u3 = endpoint(64);
            rep.checks.push_back(make_range_check(
                "evolve.step_halving_order", "rk4_convergence",
                "coarse-step endpoint ratio is ~16 (fourth order)", 3,
                std::abs(u1 - u2) / std::abs(u2 - u3), 12.0, 20.0));
        }
    }

    if (setup.opts.normalization == Normalization::shifted) {
        const TauPath& p = setup.path;
        cplx acc = 0.0;
        const int panels = 64;
        static const double nodes[4] = {-0.8611363115940526, -0.3399810435848563,
                                        0.3399810435848563, 0.8611363115940526};
        static const double weights[4] = {0.3478548451374538, 0.6521451548625461,
                                          0.6521451548625461, 0.3478548451374538};
        for (int pa = 0; pa < panels; ++pa)
            for (int q = 0; q < 4; ++q) {
                const double s = (pa + 0.5 * (1.0 + nodes[q])) / panels;
                const ModularParam mh = ModularParam(p.at(s)).half();
                acc += 0.5 * weights[q] / panels *
                       eisenstein(1, setup.drv(s, p.at(s)), mh);
            }
        const cplx oracle = -acc * p.delta() / (4.0 * kPi * kI);
        rep.checks.push_back(make_check("evolve.c0_quadrature", "shift_normalization",
                                        "co-evolved c0 matches its quadrature", n,
                                        std::abs(traj.c0.back() - oracle),
                                        1e-8 * tol_scale));
    }

    const std::string csv_name = c.value("csv", std::string("trajectory.csv"));
    write_trajectory_csv(traj, out_path(out_dir, csv_name));
    rep.artifacts.emplace_back("trajectory_csv", csv_name);
    const std::string json_name = c.value("json", std::string("trajectory.json"));
    write_text_file(out_path(out_dir, json_name), trajectory_json(traj).dump(2) + "\n");
    rep.artifacts.emplace_back("trajectory_json", json_name);
    return rep;
}

Report cmd_painleve(const json& c) {
    json cc = c;
    cc["normalization"] = "painleve";
    if (!cc.contains("tracers")) cc["tracers"] = json::array({json::array({0.2, 0.3})});
    if (!cc.contains("path"))
        cc["path"] = {{"start", json::array({0.0, 1.0})}, {"end", json::array({0.0, 1.4})}};
    const EvolveSetup setup = parse_evolve(cc, 2000);
    const double tol_scale = c.value("tol_scale", 1.0);
    if (setup.tracers.empty())
        throw InvalidArgument("config: painleve needs at least one tracer");

    Report rep;
    rep.command = "painleve";
    Trajectory traj;
    try {
        traj = evolve(setup.path, setup.drv, setup.tracers, std::nullopt, setup.opts);
    } catch (const NearPole& e) {
        rep.checks.push_back(make_check("painleve.abort", "pole_guard",
                                        std::string("NearPole: ") + e.what(), 0, 1.0, 0.5));
        return rep;
    }
    const int n = traj.num_samples();

    double worst_p = 0.0, worst_h = 0.0;
    for (std::size_t j = 0; j < setup.tracers.size(); ++j) {
        worst_p = std::max(worst_p, vec_max(painleve_residual(traj, static_cast<int>(j))));
        worst_h = std::max(worst_h, vec_max(heat_residual(traj, static_cast<int>(j))));
    }
    rep.checks.push_back(make_check("painleve.residual", "painleve_vi",
                                    "(2 pi i)^2 u'' = wp'(u + xi)/2 along the flow", n,
                                    worst_p, 1e-4 * tol_scale));
    rep.checks.push_back(make_check("painleve.heat", "heat_law",
                                    "4 pi i d/dtau E1(u + xi) = E1''(u + xi) along the flow",
                                    n, worst_h, 1e-5 * tol_scale));

    // O(h^2) decay, measured above the differencing noise floor
    const auto coarse_residual = [&](int steps) {
        const TauPath p(setup.path.start, setup.path.end, steps);
        const Trajectory t = evolve(p, setup.drv, setup.tracers, std::nullopt, setup.opts);
        return vec_max(painleve_residual(t, 0));
    };
    const double r_h = coarse_residual(setup.path.steps / 4);
    const double r_h2 = coarse_residual(setup.path.steps / 2);
    rep.checks.push_back(make_range_check("painleve.residual_order", "painleve_vi",
                                          "residual decays ~4x under step halving", 2,
                                          r_h / r_h2, 3.0, 5.0));

    // closed-form tau-flow of E^(1) at points along the trajectory
    double worst_flow = 0.0;
    const double hh = 1e-4;
    for (int i = n / 8; i < n; i += n / 8) {
        const ModularParam m(traj.tau[i]);
        const cplx x = traj.tracers[i][0] + traj.xi[i];
        const cplx fd = (eisenstein(1, x, ModularParam(traj.tau[i] + hh)) -
                         eisenstein(1, x, ModularParam(traj.tau[i] - hh))) /
                        (2.0 * hh);
        const cplx rhs = 2.0 * eisenstein(1, x, m) * eisenstein_du(1, x, m, 1) +
                         eisenstein_du(1, x, m, 2);
        worst_flow = std::max(worst_flow,
                              std::abs(4.0 * kPi * kI * fd - rhs) / (1.0 + std::abs(rhs)));
    }
    rep.checks.push_back(make_check("painleve.e1_tau_flow", "e1_tau_flow",
                                    "4 pi i dE1/dtau = 2 E1 E1' + E1'' at trajectory points",
                                    7, worst_flow, 1e-5 * tol_scale));
    return rep;
}

Report cmd_hodograph(const json& c) {
    const double tol_scale = c.value("tol_scale", 1.0);
    HodographProblem prob;
    prob.drv = parse_driving(c.value("xi", json(0.3)));
    prob.K = c.value("K", 2);
    prob.N = c.value("N", 12);
    prob.gamma0 = c.value("gamma0", 1.0);
    prob.prepass_steps = c.value("prepass_steps", 250);
    const json br = c.value("bracket", json::array({1.0, 1.5}));
    const double y_lo = br.at(0).get<double>();
    const double y_hi = br.at(1).get<double>();

    Report rep;
    rep.command = "hodograph";
    const SpeedTable table(prob.drv, y_lo, y_hi, prob.K, prob.N, prob.gamma0,
                           prob.prepass_steps, prob.evolve);

    // homogeneity demo: Phi = 0, paper-literal sum over k >= 1
    {
        const json hc = c.value("homogeneity", json::object());
        HodographProblem hp = prob;
        hp.include_t0 = false;
        hp.Phi = nullptr;
        TimeVector t;
        t.tk = hc.value("t", std::vector<double>{1.0, 0.32});
        if (static_cast<int>(t.tk.size()) != prob.K)
            throw InvalidArgument("config: homogeneity.t must have K entries");
        HodographResult base;
        try {
            base = hodograph_solve(hp, t, y_lo, y_hi, &table);
        } catch (const NoSignChange& e) {
            throw InvalidArgument(std::string("config: degenerate hodograph input (") +
                                  e.what() + ")");
        }
        rep.checks.push_back(make_check("hodograph.root_residual", "hodograph_root",
                                        "objective residual at the root", base.iterations,
                                        base.residual, 1e-10 * tol_scale));
        double worst = 0.0;
        for (double sc : hc.value("scales", std::vector<double>{0.5, 2.0, 5.0})) {
            TimeVector ct = t;
            for (double& v : ct.tk) v *= sc;
            worst = std::max(worst, std::abs(hodograph_solve(hp, ct, y_lo, y_hi, &table).y_root -
                                             base.y_root));
        }
        rep.checks.push_back(make_check("hodograph.homogeneity", "degree_zero_homogeneity",
                                        "the root is invariant under t -> c t", 3, worst,
                                        1e-9 * tol_scale));
    }

    // hydrodynamic laws with the t0-inclusive objective
    {
        const json hc = c.value("hydro", json::object());
        HodographProblem hp = prob;
        hp.include_t0 = true;
        const json phi = hc.value("phi", json{{"kind", "linear"}, {"a", -0.6}, {"b", 0.2}});
        const std::string kind = phi.value("kind", std::string("linear"));
        if (kind == "linear") {
            const double a = phi.value("a", 0.0), b = phi.value("b", 0.0);
            hp.Phi = [a, b](double y) { return a + b * y; };
        } else if (kind == "zero") {
            hp.Phi = nullptr;
        } else if (kind == "sampled") {
            const std::vector<double> ys = phi.at("y").get<std::vector<double>>();
            const std::vector<double> vs = phi.at("v").get<std::vector<double>>();
            if (ys.size() != vs.size() || ys.size() < 2 ||
                !std::is_sorted(ys.begin(), ys.end()))
                throw InvalidArgument("config: sampled phi needs sorted y and matching v");
            hp.Phi = [ys, vs](double y) {
                const auto it = std::upper_bound(ys.begin(), ys.end(), y);
                const std::size_t hi2 = std::min<std::size_t>(
                    std::max<std::ptrdiff_t>(it - ys.begin(), 1), ys.size() - 1);
                const double w = (y - ys[hi2 - 1]) / (ys[hi2] - ys[hi2 - 1]);
                return vs[hi2 - 1] + w * (vs[hi2] - vs[hi2 - 1]);
            };
        } else {
            throw InvalidArgument("config: hydro.phi.kind must be 'linear', 'zero' or 'sampled'");
        }
        TimeVector t;
        t.t0 = hc.value("t0", 1.0);
        t.tk = hc.value("t", std::vector<double>{1.0, 0.2});
        if (static_cast<int>(t.tk.size()) != prob.K)
            throw InvalidArgument("config: hydro.t must have K entries");
        const double h = hc.value("h", 1e-5);
        HodographResult root;
        try {
            root = hodograph_solve(hp, t, y_lo, y_hi, &table);
        } catch (const NoSignChange& e) {
            throw InvalidArgument(std::string("config: degenerate hodograph input (") +
                                  e.what() + ")");
        }
        rep.checks.push_back(make_check("hodograph.hydro_root_residual", "hodograph_root",
                                        "objective residual at the t0-inclusive root",
                                        root.iterations, root.residual, 1e-10 * tol_scale));
        double worst = 0.0;
        for (int k = 1; k <= prob.K; ++k)
            worst = std::max(worst, hydrodynamic_residual(hp, t, k, h, y_lo, y_hi, &table));
        rep.checks.push_back(make_check("hodograph.hydrodynamic", "hydrodynamic_equations",
                                        "dtau/dt_k = phi_k dtau/dt_0 by central differences",
                                        prob.K, worst, 1e-4 * tol_scale));
        rep.checks.push_back(make_check(
            "hodograph.generating_large_z", "generating_relation",
            "the generating relation collapses to the t0 flow at large z", 1,
            generating_residual(hp, t, cplx(50.0, 0.0), h, y_lo, y_hi, &table),
            1e-4 * tol_scale));
    }
    return rep;
}

} // namespace

json default_config(const std::string& command) {
    if (command == "identities")
        return json{{"seed", 42},
                    {"samples", 100},
                    {"im_tau", json::array({0.6, 2.0})},
                    {"re_tau", json::array({-0.4, 0.4})},
                    {"fd_step", 1e-4},
                    {"tol_scale", 1.0}};
    if (command == "curve")
        return json{{"seed", 42},
                    {"samples", 200},
                    {"gamma", 1.0},
                    {"im_tau", 1.2},
                    {"csv", "curve_samples.csv"},
                    {"tol_scale", 1.0}};
    if (command == "evolve")
        return json{{"xi", {{"kind", "constant"}, {"value", 0.5}}},
                    {"path",
                     {{"start", json::array({0.0, 1.0})}, {"end", json::array({0.0, 1.5})}}},
                    {"steps", 500},
                    {"tracers", json::array({json::array({0.0, 0.0}), json::array({0.0, 0.2}),
                                             json::array({0.1, 0.15})})},
                    {"normalization", "standard"},
                    {"series", {{"order", 12}, {"gamma0", 1.0}}},
                    {"csv", "trajectory.csv"},
                    {"json", "trajectory.json"},
                    {"tol_scale", 1.0}};
    if (command == "painleve")
        return json{{"xi", 0.5},
                    {"path",
                     {{"start", json::array({0.0, 1.0})}, {"end", json::array({0.0, 1.4})}}},
                    {"steps", 2000},
                    {"tracers", json::array({json::array({0.2, 0.3})})},
                    {"tol_scale", 1.0}};
    if (command == "hodograph")
        return json{{"xi", 0.3},
                    {"bracket", json::array({1.0, 1.5})},
                    {"K", 2},
                    {"N", 12},
                    {"gamma0", 1.0},
                    {"prepass_steps", 250},
                    {"homogeneity",
                     {{"t", json::array({1.0, 0.32})}, {"scales", json::array({0.5, 2.0, 5.0})}}},
                    {"hydro",
                     {{"t0", 1.0},
                      {"t", json::array({1.0, 0.2})},
                      {"phi", {{"kind", "linear"}, {"a", -0.6}, {"b", 0.2}}},
                      {"h", 1e-5}}},
                    {"tol_scale", 1.0}};
    throw InvalidArgument("unknown command '" + command + "'");
}

Report run_command(const std::string& command, json config, const Overrides& overrides,
                   const std::string& out_dir) {
    if (overrides.seed) config["seed"] = *overrides.seed;
    if (overrides.steps) config["steps"] = *overrides.steps;
    if (overrides.tol_scale) config["tol_scale"] = *overrides.tol_scale;

    std::filesystem::create_directories(out_dir);
    Report rep;
    if (command == "identities")
        rep = cmd_identities(config);
    else if (command == "curve")
        rep = cmd_curve(config, out_dir);
    else if (command == "evolve")
        rep = cmd_evolve(config, out_dir);
    else if (command == "painleve")
        rep = cmd_painleve(config);
    else if (command == "hodograph")
        rep = cmd_hodograph(config);
    else
        throw InvalidArgument("unknown command '" + command + "'");
    rep.config_json = config.dump();
    rep.sort_checks();
    return rep;
}

} // namespace ddkp::cli
