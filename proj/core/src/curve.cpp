#include "ddkp/curve.hpp"

#include <cmath>
#include <sstream>

#include "detail.hpp"

namespace ddkp {

using detail::kI;
using detail::kPi;

namespace {

cplx pow4(cplx z) { return (z * z) * (z * z); }

double modulus_ratio(double y, const TruncationPolicy& tp) {
    const ModularParam m(cplx(0.0, y));
    const cplx r = theta_const(2, m, tp) / theta_const(3, m, tp);
    const cplx r2 = r * r;
    return (r2 + 1.0 / r2).real();
}

// d/dy of modulus_ratio at tau = i y, via the heat equation
// 4 pi i d theta/d tau = theta''.
double modulus_ratio_dy(double y, const TruncationPolicy& tp) {
    const ModularParam m(cplx(0.0, y));
    const cplx t2 = theta_const(2, m, tp);
    const cplx t3 = theta_const(3, m, tp);
    const cplx d2 = theta_du(2, 0.0, m, 2, tp) / (4.0 * kPi * kI); // d theta_2(0)/d tau
    const cplx d3 = theta_du(3, 0.0, m, 2, tp) / (4.0 * kPi * kI);
    const cplx r2 = (t2 * t2) / (t3 * t3);
    const cplx dr2_dtau = 2.0 * r2 * (d2 / t2 - d3 / t3);
    return ((1.0 - 1.0 / (r2 * r2)) * dr2_dtau * kI).real();
}

} // namespace

CurveParams::CurveParams(cplx gamma, ModularParam m, const TruncationPolicy& tp)
    : gamma_(gamma), m_(m) {
    const cplx t2 = theta_const(2, m_, tp);
    const cplx t3 = theta_const(3, m_, tp);
    r_ = gamma_ * t2 * t3;
    v_ = -gamma_ * gamma_ * (pow4(t2) + pow4(t3));
    real_regime_ = m_.on_imaginary_axis() && std::abs(gamma_.imag()) <= 1e-12 &&
                   gamma_.real() > 0.0;
}

cplx CurveParams::c1() const noexcept { return gamma_ / kPi; }

cplx w_of_u(cplx u, const CurveParams& cp, const EllipticOpts& opts) {
    const ModularParam& m = cp.modular();
    if (theta_zero_distance(1, u, m) < opts.pole_guard)
        throw NearPole("w_of_u: u within guard radius of a theta_1 zero");
    const cplx t1 = theta(1, u, m, opts.trunc);
    const cplx t4 = theta(4, u, m, opts.trunc);
    return (t4 * t4) / (t1 * t1);
}

cplx p_of_u(cplx u, const CurveParams& cp, const EllipticOpts& opts) {
    const ModularParam& m = cp.modular();
    if (theta_zero_distance(1, u, m) < opts.pole_guard ||
        theta_zero_distance(4, u, m) < opts.pole_guard)
        throw NearPole("p_of_u: u within guard radius of a theta_1/theta_4 zero");
    const cplx t40 = theta_const(4, m, opts.trunc);
    const cplx num = cp.gamma() * t40 * t40 * theta(2, u, m, opts.trunc) *
                     theta(3, u, m, opts.trunc);
    return num / (theta(1, u, m, opts.trunc) * theta(4, u, m, opts.trunc));
}

double curve_residual(cplx u, const CurveParams& cp, const EllipticOpts& opts) {
    const cplx w = w_of_u(u, cp, opts);
    const cplx p = p_of_u(u, cp, opts);
    const cplx r2 = cp.big_r() * cp.big_r();
    const cplx lhs = p * p - r2 * (w + 1.0 / w) - cp.big_v();
    return std::abs(lhs) / (std::abs(p * p) + std::abs(cp.big_v()) + 1.0);
}

double ratio_identity_residual(cplx u1, cplx u2, const CurveParams& cp,
                               const EllipticOpts& opts) {
    const ModularParam& m = cp.modular();
    if (theta_zero_distance(4, u1 - u2, m) < opts.pole_guard)
        throw NearPole("ratio_identity_residual: u1-u2 near a theta_4 zero");
    const cplx w1 = w_of_u(u1, cp, opts);
    const cplx w2 = w_of_u(u2, cp, opts);
    const cplx p1 = p_of_u(u1, cp, opts);
    const cplx p2 = p_of_u(u2, cp, opts);
    if (std::abs(p1 + p2) < opts.pole_guard * (1.0 + std::abs(p1) + std::abs(p2)))
        throw DegeneratePair("ratio_identity_residual: p(u1) + p(u2) vanishes");
    const cplx lhs = (w1 - w2) / (p1 + p2);
    const auto th = [&](int a, cplx x) { return theta(a, x, m, opts.trunc); };
    const cplx rhs = -th(4, u1) * th(4, u2) * th(1, u1 - u2) /
                     (cp.gamma() * theta_const(2, m, opts.trunc) *
                      theta_const(3, m, opts.trunc) * th(1, u1) * th(1, u2) *
                      th(4, u1 - u2));
    return std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
}

cplx u_from_w(cplx w_target, const ModularParam& m, cplx u_guess,
              const EllipticOpts& opts, const NewtonOpts& nopts) {
    if (w_target == cplx(0.0, 0.0))
        throw InvalidArgument("u_from_w: w_target must be nonzero");
    if (theta_zero_distance(1, u_guess, m) < opts.pole_guard ||
        theta_zero_distance(4, u_guess, m) < opts.pole_guard)
        throw NearPole("u_from_w: u_guess within guard radius of a pole of S");

    // S(u) = -log(w)/2 holds modulo i pi (branch and parity of the preimage);
    // snap the target to the sheet of the guess.
    cplx target = -0.5 * std::log(w_target);
    const cplx s_guess = S(u_guess, m, opts).value;
    const double k = std::round(((s_guess - target) / (kPi * kI)).real());
    target += kPi * kI * k;

    cplx u = u_guess;
    for (int it = 0; it < nopts.max_iter; ++it) {
        const cplx f = S(u, m, opts).value - target;
        if (std::abs(f) < nopts.tol * (1.0 + std::abs(target))) return u;
        const cplx step = f / S_prime(u, m, opts);
        cplx u_next = u - step;
        // keep iterates clear of the poles of S'
        for (int halve = 0; halve < 8; ++halve) {
            if (theta_zero_distance(1, u_next, m) >= opts.pole_guard &&
                theta_zero_distance(4, u_next, m) >= opts.pole_guard)
                break;
            u_next = 0.5 * (u + u_next);
        }
        u = u_next;
    }
    const cplx f = S(u, m, opts).value - target;
    if (std::abs(f) < 1e-12 * (1.0 + std::abs(target))) return u;
    std::ostringstream os;
    os << "u_from_w: Newton did not converge within " << nopts.max_iter
       << " iterations (|residual| = " << std::abs(f) << ")";
    throw NoConvergence(os.str());
}

ModularParam tau_from_modulus(double ratio, const ModulusBracket& br,
                              const TruncationPolicy& tp) {
    constexpr double kRangeGuard = 1e-6;
    if (!(ratio > 2.0 + kRangeGuard))
        throw OutOfRange("tau_from_modulus: ratio must exceed 2 (imaginary-axis range)");
    if (!(br.y_lo > 0.0) || !(br.y_hi > br.y_lo))
        throw InvalidArgument("tau_from_modulus: invalid bracket");

    double lo = br.y_lo, hi = br.y_hi;
    double f_lo = modulus_ratio(lo, tp) - ratio;
    double f_hi = modulus_ratio(hi, tp) - ratio;
    if (f_lo > 0.0 || f_hi < 0.0)
        throw OutOfRange("tau_from_modulus: ratio not attained on the bracket");

    // the objective must be (weakly) monotone across the bracket
    double prev = f_lo;
    for (int i = 1; i <= 16; ++i) {
        const double y = lo + (hi - lo) * i / 16.0;
        const double f = modulus_ratio(y, tp) - ratio;
        if (f < prev - 1e-12 * (1.0 + std::abs(prev)))
            throw Error("tau_from_modulus: objective not monotone on the bracket");
        prev = f;
    }

    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (modulus_ratio(mid, tp) - ratio <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double y = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
        const double f = modulus_ratio(y, tp) - ratio;
        const double df = modulus_ratio_dy(y, tp);
        if (!(std::abs(df) > 0.0)) break;
        const double y_next = y - f / df;
        if (!(y_next > br.y_lo) || !(y_next < br.y_hi)) break;
        y = y_next;
        if (std::abs(f) < 1e-14 * ratio) break;
    }
    if (std::abs(modulus_ratio(y, tp) - ratio) > 1e-12 * (1.0 + ratio))
        throw NoConvergence("tau_from_modulus: residual above 1e-12 after polish");
    return ModularParam(cplx(0.0, y));
}

} // namespace ddkp
