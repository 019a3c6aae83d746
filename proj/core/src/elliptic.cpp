#include "ddkp/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail.hpp"

namespace ddkp {

using detail::kI;
using detail::kPi;

namespace {

void guard_zero(ThetaIndex a, cplx u, const ModularParam& m, const EllipticOpts& opts,
                const char* who) {
    const double d = theta_zero_distance(a, u, m);
    if (d < opts.pole_guard) {
        std::ostringstream os;
        os << who << ": argument (" << u.real() << "," << u.imag()
           << ") within guard radius " << opts.pole_guard << " of a theta_"
           << a.value() << " zero (distance " << d << ")";
        throw NearPole(os.str());
    }
}

// |a - b| <= tol * (1 + |a| + |b| + amp); the quadratic term accounts for the
// 1/dist^2 error growth of theta-ratio differences near zeros.
void cross_check(cplx got, cplx want, double scale_sq, const char* who) {
    const double tol = 1e-11 * (1.0 + std::abs(got) + std::abs(want) + scale_sq);
    if (std::abs(got - want) > tol) {
        std::ostringstream os;
        os << who << ": closed-form cross-check failed, |delta| = " << std::abs(got - want)
           << " exceeds " << tol;
        throw CrossCheckFailure(os.str());
    }
}

cplx ratio14(cplx u, const ModularParam& m, const TruncationPolicy& tp) {
    return theta(1, u, m, tp) / theta(4, u, m, tp);
}

} // namespace

cplx eisenstein(ThetaIndex a, cplx u, const ModularParam& m, const EllipticOpts& opts) {
    guard_zero(a, u, m, opts, "eisenstein");
    cplx d[2];
    theta_derivs(a, u, m, 1, std::span<cplx>(d, 2), opts.trunc);
    return d[1] / d[0];
}

cplx eisenstein_du(ThetaIndex a, cplx u, const ModularParam& m, int order,
                   const EllipticOpts& opts) {
    if (order < 1 || order > 2)
        throw InvalidArgument("eisenstein_du order must be 1 or 2");
    guard_zero(a, u, m, opts, "eisenstein_du");
    cplx d[4];
    theta_derivs(a, u, m, order + 1, std::span<cplx>(d, 4), opts.trunc);
    const cplx r1 = d[1] / d[0];
    const cplx r2 = d[2] / d[0];
    if (order == 1) return r2 - r1 * r1;
    const cplx r3 = d[3] / d[0];
    return r3 - 3.0 * r2 * r1 + 2.0 * r1 * r1 * r1;
}

BranchedLogValue S(cplx u, const ModularParam& m, const EllipticOpts& opts,
                   std::span<const cplx> waypoints) {
    BranchedLogValue result;
    result.base_point = 0.5;
    result.path.push_back(result.base_point);
    for (cplx w : waypoints) result.path.push_back(w);
    result.path.push_back(u);

    // S at the base point, anchored via theta_1(1/2) = theta_2(0),
    // theta_4(1/2) = theta_3(0); principal logarithm.
    cplx acc = std::log(theta_const(2, m, opts.trunc) / theta_const(3, m, opts.trunc));

    for (std::size_t seg = 0; seg + 1 < result.path.size(); ++seg) {
        const cplx a = result.path[seg];
        const cplx b = result.path[seg + 1];
        if (a == b) continue;
        int n = std::max(16, static_cast<int>(std::ceil(std::abs(b - a) * 24.0)));
        bool ok = false;
        cplx seg_acc = 0.0;
        for (int attempt = 0; attempt < 14 && !ok; ++attempt, n *= 2) {
            seg_acc = 0.0;
            ok = true;
            cplx r_prev = ratio14(a, m, opts.trunc);
            for (int i = 1; i <= n; ++i) {
                const cplx v = a + (b - a) * (static_cast<double>(i) / n);
                if (theta_zero_distance(1, v, m) < opts.pole_guard ||
                    theta_zero_distance(4, v, m) < opts.pole_guard) {
                    std::ostringstream os;
                    os << "S: continuation path meets a zero of theta_1/theta_4 near ("
                       << v.real() << "," << v.imag() << ")";
                    throw BranchCrossing(os.str());
                }
                const cplx r = ratio14(v, m, opts.trunc);
                const cplx step = std::log(r / r_prev);
                if (std::abs(step.imag()) > 1.0) { ok = false; break; }
                seg_acc += step;
                r_prev = r;
            }
        }
        if (!ok)
            throw BranchCrossing("S: branch walk did not stabilize under refinement");
        acc += seg_acc;
    }

    // Snap to the exact principal value plus the accumulated winding, removing
    // the rounding error of the incremental walk.
    const cplx principal = std::log(ratio14(u, m, opts.trunc));
    const double k = std::round((acc - principal).imag() / (2.0 * kPi));
    result.value = principal + 2.0 * kPi * kI * k;
    return result;
}

cplx S_prime(cplx u, const ModularParam& m, const EllipticOpts& opts) {
    guard_zero(1, u, m, opts, "S_prime");
    guard_zero(4, u, m, opts, "S_prime");
    const cplx t1 = theta(1, u, m, opts.trunc);
    const cplx t2 = theta(2, u, m, opts.trunc);
    const cplx t3 = theta(3, u, m, opts.trunc);
    const cplx t4 = theta(4, u, m, opts.trunc);
    const cplx t40 = theta_const(4, m, opts.trunc);
    const cplx value = kPi * t40 * t40 * t2 * t3 / (t1 * t4);
    if (opts.cross_check) {
        const cplx diff = eisenstein(1, u, m, opts) - eisenstein(4, u, m, opts);
        cross_check(value, diff, std::norm(value), "S_prime");
    }
    return value;
}

cplx S_tau(cplx u, const ModularParam& m, const EllipticOpts& opts) {
    guard_zero(2, u, m, opts, "S_tau"); // E^(2) pole
    const cplx t40 = theta_const(4, m, opts.trunc);
    const cplx t40_4 = t40 * t40 * t40 * t40;
    const cplx sp = S_prime(u, m, opts);
    const cplx e2 = eisenstein(2, u, m, opts);
    return (sp * e2 + 0.5 * kPi * kPi * t40_4) / (2.0 * kPi * kI);
}

cplx phi_pair(cplx x1, cplx x2, const ModularParam& m, const EllipticOpts& opts) {
    guard_zero(1, x1, m, opts, "phi_pair");
    guard_zero(4, x1, m, opts, "phi_pair");
    guard_zero(1, x2, m, opts, "phi_pair");
    guard_zero(4, x2, m, opts, "phi_pair");
    guard_zero(2, x1 - x2, m, opts, "phi_pair"); // pole of E^(2)(x1-x2)
    const cplx value = -eisenstein(1, x1, m, opts) - eisenstein(4, x1, m, opts) +
                       eisenstein(1, x2, m, opts) + eisenstein(4, x2, m, opts) +
                       2.0 * eisenstein(2, x1 - x2, m, opts);
    if (opts.cross_check) {
        const auto th = [&](int a, cplx x) { return theta(a, x, m, opts.trunc); };
        const cplx t40 = theta_const(4, m, opts.trunc);
        const cplx fac = kPi * theta_const(2, m, opts.trunc) * theta_const(3, m, opts.trunc) *
                         t40 * t40 * th(1, x1 - x2) * th(4, x1 - x2) * th(2, x1 + x2) /
                         (th(1, x1) * th(4, x1) * th(1, x2) * th(4, x2) * th(2, x1 - x2));
        cross_check(value, fac, std::norm(value), "phi_pair");
    }
    return value;
}

double key_identity_residual(cplx x1, cplx x2, const ModularParam& m,
                             const EllipticOpts& opts) {
    guard_zero(1, x1 - x2, m, opts, "key_identity_residual"); // S'(x1-x2) pole
    guard_zero(4, x1 - x2, m, opts, "key_identity_residual");
    const cplx t40 = theta_const(4, m, opts.trunc);
    const cplx t40_4 = t40 * t40 * t40 * t40;
    const cplx lhs = S_prime(x1 - x2, m, opts) * phi_pair(x1, x2, m, opts) +
                     kPi * kPi * t40_4;
    const cplx rhs = S_prime(x1, m, opts) * S_prime(x2, m, opts);
    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs));
}

cplx wp_prime(cplx u, const ModularParam& m, const EllipticOpts& opts) {
    guard_zero(1, u, m, opts, "wp_prime");
    return -eisenstein_du(1, u, m, 2, opts);
}

cplx half_tau_collapse(cplx u, const ModularParam& m, const EllipticOpts& opts) {
    const ModularParam mh = m.half();
    guard_zero(1, u, m, opts, "half_tau_collapse");
    guard_zero(4, u, m, opts, "half_tau_collapse");
    return eisenstein(1, u, m, opts) + eisenstein(4, u, m, opts) -
           eisenstein(1, u, mh, opts);
}

} // namespace ddkp
