#include "ddkp/checks.hpp"

#include <cmath>
#include <functional>

#include "ddkp/elliptic.hpp"
#include "detail.hpp"

namespace ddkp {

using detail::kI;
using detail::kPi;

void SuiteConfig::validate() const {
    if (samples < 1) throw InvalidArgument("suite config: samples must be >= 1");
    if (!(tol_scale > 0.0)) throw InvalidArgument("suite config: tol_scale must be > 0");
    if (!(fd_step > 0.0)) throw InvalidArgument("suite config: fd_step must be > 0");
    if (!(im_tau_lo > 0.0) || !(im_tau_hi >= im_tau_lo))
        throw InvalidArgument("suite config: need 0 < im_tau_lo <= im_tau_hi");
    // The suite evaluates at tau/2 and promises 1e-10..1e-12 residuals; both
    // degrade near the nome cap, so the whole range must stay comfortably
    // inside it.
    if (im_tau_lo < 0.1)
        throw OutOfRange("suite config: Im tau range must stay >= 0.1 "
                         "(half-tau evaluations approach the |q| guard below that)");
    ModularParam probe(cplx(re_tau_lo, im_tau_lo)); // |q| guard at the worst corner
    (void)probe;
}

ModularParam random_tau(Rng& rng, const SuiteConfig& cfg) {
    return ModularParam(cplx(rng.uniform(cfg.re_tau_lo, cfg.re_tau_hi),
                             rng.uniform(cfg.im_tau_lo, cfg.im_tau_hi)));
}

cplx random_cell_point(Rng& rng, const ModularParam& m, double margin) {
    for (int tries = 0; tries < 1000; ++tries) {
        const cplx u = rng.uniform(0.04, 0.96) + rng.uniform(0.04, 0.96) * m.tau();
        double d = 1e300;
        for (int a = 1; a <= 4; ++a) d = std::min(d, theta_zero_distance(a, u, m));
        if (d >= margin) return u;
    }
    throw Error("random_cell_point: rejection sampling failed");
}

namespace {

double rel(cplx got, cplx want) {
    return std::abs(got - want) / (1.0 + std::abs(got) + std::abs(want));
}

struct Harness {
    const SuiteConfig& cfg;
    std::vector<CheckResult> rows;

    // max residual of fn over `samples` draws of (tau, ...) with a fresh
    // deterministic stream per check (stable under check reordering)
    void add(const char* name, const char* anchor, const char* statement, double tol,
             const std::function<double(Rng&)>& sample_residual) {
        Rng rng(cfg.seed ^ std::hash<std::string>{}(name));
        double worst = 0.0;
        for (int i = 0; i < cfg.samples; ++i)
            worst = std::max(worst, sample_residual(rng));
        rows.push_back(make_check(name, anchor, statement, cfg.samples, worst,
                                  tol * cfg.tol_scale));
    }
};

cplx pow4(cplx z) { return (z * z) * (z * z); }

} // namespace

std::vector<CheckResult> run_identity_checks(const SuiteConfig& cfg) {
    cfg.validate();
    Harness h{cfg, {}};
    const EllipticOpts eopts;

    h.add("theta.parity", "parity", "theta_1 odd, theta_2..4 even", 1e-12, [&](Rng& rng) {
        const ModularParam m = random_tau(rng, cfg);
        const cplx u = random_cell_point(rng, m);
        double worst = rel(theta(1, -u, m), -theta(1, u, m));
        for (int a = 2; a <= 4; ++a)
            worst = std::max(worst, rel(theta(a, -u, m), theta(a, u, m)));
        return worst;
    });

    h.add("theta.shift_one", "quasi_period_one",
          "theta_a(u+1) = -theta_a(u) for a=1,2 and +theta_a(u) for a=3,4", 1e-11,
          [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const cplx u = random_cell_point(rng, m);
              double worst = 0.0;
              for (int a = 1; a <= 4; ++a) {
                  const double sign = (a <= 2) ? -1.0 : 1.0;
                  worst = std::max(worst, rel(theta(a, u + 1.0, m), sign * theta(a, u, m)));
              }
              return worst;
          });

    h.add("theta.shift_tau", "quasi_period_tau",
          "theta_a(u+tau) = -+ exp(-i pi tau - 2 pi i u) theta_a(u)", 1e-11,
          [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const cplx u = random_cell_point(rng, m);
              const cplx f = std::exp(-kI * kPi * m.tau() - 2.0 * kPi * kI * u);
              double worst = 0.0;
              for (int a = 1; a <= 4; ++a) {
                  const double sign = (a == 1 || a == 4) ? -1.0 : 1.0;
                  worst = std::max(worst,
                                   rel(theta(a, u + m.tau(), m), sign * f * theta(a, u, m)));
              }
              return worst;
          });

    h.add("theta.half_period_table", "half_period_shifts",
          "shifts by 1/2, (1+tau)/2, tau/2 permute the four thetas", 1e-11,
          [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const cplx u = random_cell_point(rng, m);
              const cplx w1 = half_period(1, m), w2 = half_period(2, m), w3 = half_period(3, m);
              const cplx f = std::exp(-kI * kPi * m.tau() / 4.0 - kI * kPi * u);
              double worst = rel(theta(1, u + w1, m), theta(2, u, m));
              worst = std::max(worst, rel(theta(3, u + w1, m), theta(4, u, m)));
              worst = std::max(worst, rel(theta(1, u + w2, m), f * theta(3, u, m)));
              worst = std::max(worst, rel(theta(2, u + w2, m), -kI * f * theta(4, u, m)));
              worst = std::max(worst, rel(theta(1, u + w3, m), kI * f * theta(4, u, m)));
              worst = std::max(worst, rel(theta(2, u + w3, m), f * theta(3, u, m)));
              return worst;
          });

    h.add("theta.zeros_at_half_periods", "half_period_zeros",
          "theta_a vanishes at omega_{a-1}", 1e-12, [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              double worst = 0.0;
              for (int a = 1; a <= 4; ++a)
                  worst = std::max(worst, std::abs(theta(a, half_period(a - 1, m), m)));
              return worst;
          });

    h.add("theta.one_prime_zero", "theta1_prime_const",
          "theta_1'(0) = pi theta_2(0) theta_3(0) theta_4(0)", 1e-11, [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const cplx want = kPi * theta_const(2, m) * theta_const(3, m) * theta_const(4, m);
              double worst = rel(theta_du(1, 0.0, m, 1), want);
              worst = std::max(worst, std::abs(theta_du(2, 0.0, m, 1)));
              worst = std::max(worst, std::abs(theta_du(3, 0.0, m, 1)));
              return worst;
          });

    h.add("theta.duplication", "duplication",
          "2 t1(u|tau) t4(u|tau) = t2(0|tau/2) t1(u|tau/2); 2 t2 t3 likewise", 1e-11,
          [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const ModularParam mh = m.half();
              const cplx u = random_cell_point(rng, m);
              const cplx c = theta_const(2, mh);
              double worst = rel(2.0 * theta(1, u, m) * theta(4, u, m), c * theta(1, u, mh));
              worst = std::max(worst,
                               rel(2.0 * theta(2, u, m) * theta(3, u, m), c * theta(2, u, mh)));
              return worst;
          });

    h.add("theta.const_square_half_tau", "theta4_sq_half_tau",
          "theta_4^2(0|tau) = theta_3(0|tau/2) theta_4(0|tau/2)", 1e-11, [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const ModularParam mh = m.half();
              const cplx t4 = theta_const(4, m);
              return rel(t4 * t4, theta_const(3, mh) * theta_const(4, mh));
          });

    h.add("theta.series_vs_product", "theta1_product_oracle",
          "theta_1 series equals the infinite-product form", 1e-12, [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const cplx u = random_cell_point(rng, m);
              const cplx a = theta(1, u, m);
              const cplx b = theta1_product(u, m);
              return std::abs(a - b) / (std::abs(a) + std::abs(b));
          });

    h.add("eisenstein.periods", "e_periods",
          "E^(a)(u+1) = E^(a)(u); E^(a)(u+tau) = E^(a)(u) - 2 pi i", 1e-11,
          [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const cplx u = random_cell_point(rng, m);
              double worst = 0.0;
              for (int a = 1; a <= 4; ++a) {
                  const cplx e = eisenstein(a, u, m, eopts);
                  worst = std::max(worst, rel(eisenstein(a, u + 1.0, m, eopts), e));
                  worst = std::max(worst,
                                   rel(eisenstein(a, u + m.tau(), m, eopts), e - 2.0 * kPi * kI));
              }
              return worst;
          });

    h.add("eisenstein.half_tau_shift", "e_half_tau_shift",
          "E^(1)(u+tau/2) = E^(4)(u) - pi i and E^(4)(u+tau/2) = E^(1)(u) - pi i", 1e-11,
          [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const cplx u = random_cell_point(rng, m);
              const cplx w3 = half_period(3, m);
              double worst = rel(eisenstein(1, u + w3, m, eopts),
                                 eisenstein(4, u, m, eopts) - kPi * kI);
              worst = std::max(worst, rel(eisenstein(4, u + w3, m, eopts),
                                          eisenstein(1, u, m, eopts) - kPi * kI));
              return worst;
          });

    h.add("eisenstein.special_values", "e2_specials",
          "E^(2)(0) = 0 and E^(2)(tau/2) = -pi i", 1e-11, [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              double worst = std::abs(eisenstein(2, 0.0, m, eopts));
              worst = std::max(worst,
                               rel(eisenstein(2, half_period(3, m), m, eopts), -kPi * kI));
              return worst;
          });

    h.add("s.factorized_derivative", "s_prime_factorized",
          "E^(1) - E^(4) = pi theta_4^2(0) theta_2 theta_3 / (theta_1 theta_4)", 1e-11,
          [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const cplx u = random_cell_point(rng, m);
              EllipticOpts o = eopts;
              o.cross_check = false;
              const cplx def = eisenstein(1, u, m, o) - eisenstein(4, u, m, o);
              return rel(S_prime(u, m, o), def);
          });

    h.add("s.theta_const_second_derivs", "s_prime_half_shift_limit",
          "theta_3''(0)/theta_3(0) - theta_2''(0)/theta_2(0) = pi^2 theta_4^4(0)", 1e-11,
          [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const cplx lhs = theta_du(3, 0.0, m, 2) / theta_const(3, m) -
                               theta_du(2, 0.0, m, 2) / theta_const(2, m);
              return rel(lhs, kPi * kPi * pow4(theta_const(4, m)));
          });

    h.add("s.tau_derivative_heat_form", "s_tau_flow",
          "theta_1''/theta_1 - theta_4''/theta_4 - 2 S' E^(2) - pi^2 theta_4^4(0) = 0",
          1e-10, [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const cplx u = random_cell_point(rng, m);
              const cplx heat_form = theta_du(1, u, m, 2) / theta(1, u, m) -
                                     theta_du(4, u, m, 2) / theta(4, u, m);
              const cplx rest = 2.0 * S_prime(u, m, eopts) * eisenstein(2, u, m, eopts) +
                                kPi * kPi * pow4(theta_const(4, m));
              return rel(heat_form, rest);
          });

    h.add("phi.factorized", "phi_factorized",
          "pair function equals its factorized theta representation", 1e-11,
          [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const cplx x1 = random_cell_point(rng, m);
              cplx x2 = random_cell_point(rng, m);
              while (theta_zero_distance(2, x1 - x2, m) < 0.06 ||
                     theta_zero_distance(1, x1 - x2, m) < 0.06 ||
                     theta_zero_distance(4, x1 - x2, m) < 0.06)
                  x2 = random_cell_point(rng, m);
              EllipticOpts o = eopts;
              o.cross_check = false;
              const cplx def = phi_pair(x1, x2, m, o);
              const auto th = [&](int a, cplx x) { return theta(a, x, m); };
              const cplx t40 = theta_const(4, m);
              const cplx fac = kPi * theta_const(2, m) * theta_const(3, m) * t40 * t40 *
                               th(1, x1 - x2) * th(4, x1 - x2) * th(2, x1 + x2) /
                               (th(1, x1) * th(4, x1) * th(1, x2) * th(4, x2) *
                                th(2, x1 - x2));
              return rel(def, fac);
          });

    h.add("phi.key_identity", "key_identity",
          "S'(x1-x2) phi(x1,x2) + pi^2 theta_4^4(0) = S'(x1) S'(x2)", 1e-10,
          [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const cplx x1 = random_cell_point(rng, m);
              cplx x2 = random_cell_point(rng, m);
              while (theta_zero_distance(2, x1 - x2, m) < 0.06 ||
                     theta_zero_distance(1, x1 - x2, m) < 0.06 ||
                     theta_zero_distance(4, x1 - x2, m) < 0.06)
                  x2 = random_cell_point(rng, m);
              return key_identity_residual(x1, x2, m, eopts);
          });

    h.add("eisenstein.half_tau_collapse", "half_tau_collapse",
          "E^(1)(u|tau) + E^(4)(u|tau) = E^(1)(u|tau/2)", 1e-11, [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const cplx u = random_cell_point(rng, m);
              const cplx r = half_tau_collapse(u, m, eopts);
              const cplx lhs = eisenstein(1, u, m.half(), eopts);
              return std::abs(r) / (1.0 + std::abs(lhs));
          });

    h.add("s.half_period_log_derivative", "final_half_period_identity",
          "-d^2 log theta_1(x|tau/2) + const = pi^2 theta_4^4(0|tau) "
          "theta_2^2(x|tau/2)/theta_1^2(x|tau/2)",
          1e-10, [&](Rng& rng) {
              const ModularParam m = random_tau(rng, cfg);
              const ModularParam mh = m.half();
              const cplx x = random_cell_point(rng, mh);
              const cplx lhs = -eisenstein_du(1, x, mh, 1, eopts) +
                               eisenstein_du(1, 0.5, mh, 1, eopts);
              const cplx r = theta(2, x, mh) / theta(1, x, mh);
              const cplx rhs = kPi * kPi * pow4(theta_const(4, m)) * r * r;
              return rel(lhs, rhs);
          });

    std::vector<CheckResult> rows = std::move(h.rows);
    return rows;
}

std::vector<CheckResult> run_fd_checks(const SuiteConfig& cfg) {
    cfg.validate();
    const EllipticOpts eopts;
    std::vector<CheckResult> rows;

    // residuals of a tau-derivative law at step hh, maximized over samples
    const auto max_residual = [&](const char* name, double hh,
                                  const std::function<double(Rng&, double)>& one) {
        Rng rng(cfg.seed ^ std::hash<std::string>{}(name));
        double worst = 0.0;
        for (int i = 0; i < cfg.samples; ++i) worst = std::max(worst, one(rng, hh));
        return worst;
    };

    const auto both = [&](const char* name, const char* anchor, const char* statement,
                          double tol, const std::function<double(Rng&, double)>& one) {
        const double r1 = max_residual(name, cfg.fd_step, one);
        const double r2 = max_residual(name, 0.5 * cfg.fd_step, one);
        rows.push_back(
            make_check(name, anchor, statement, cfg.samples, r1, tol * cfg.tol_scale));
        rows.push_back(make_range_check(std::string(name) + ".order", anchor,
                                        "residual ratio under step halving is ~4 (O(h^2))",
                                        cfg.samples, r1 / r2, 3.5, 4.5));
    };

    both("fd.theta_heat", "heat_equation",
         "4 pi i d theta_a/d tau = theta_a''", 1e-5, [&](Rng& rng, double hh) {
             const ModularParam m = random_tau(rng, cfg);
             const cplx u = random_cell_point(rng, m);
             double worst = 0.0;
             for (int a = 1; a <= 4; ++a) {
                 const ModularParam mp(m.tau() + hh), mm(m.tau() - hh);
                 const cplx fd = (theta(a, u, mp) - theta(a, u, mm)) / (2.0 * hh);
                 const cplx rhs = theta_du(a, u, m, 2);
                 worst = std::max(worst, rel(4.0 * kPi * kI * fd, rhs));
             }
             return worst;
         });

    both("fd.eisenstein_tau_flow", "e1_tau_flow",
         "4 pi i d E^(1)/d tau = 2 E^(1) E^(1)' + E^(1)''", 1e-5,
         [&](Rng& rng, double hh) {
             const ModularParam m = random_tau(rng, cfg);
             const cplx u = random_cell_point(rng, m);
             const ModularParam mp(m.tau() + hh), mm(m.tau() - hh);
             const cplx fd =
                 (eisenstein(1, u, mp, eopts) - eisenstein(1, u, mm, eopts)) / (2.0 * hh);
             const cplx rhs = 2.0 * eisenstein(1, u, m, eopts) *
                                  eisenstein_du(1, u, m, 1, eopts) +
                              eisenstein_du(1, u, m, 2, eopts);
             return rel(4.0 * kPi * kI * fd, rhs);
         });

    both("fd.s_tau_derivative", "s_tau_closed_form",
         "closed-form dS/dtau matches the finite difference of the continued S", 1e-5,
         [&](Rng& rng, double hh) {
             const ModularParam m = random_tau(rng, cfg);
             const cplx u = random_cell_point(rng, m);
             const ModularParam mp(m.tau() + hh), mm(m.tau() - hh);
             const cplx fd = (S(u, mp, eopts).value - S(u, mm, eopts).value) / (2.0 * hh);
             return rel(fd, S_tau(u, m, eopts));
         });

    return rows;
}

} // namespace ddkp
