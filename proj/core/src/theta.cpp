#include "ddkp/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "detail.hpp"

namespace ddkp {

using detail::kI;
using detail::kPi;

namespace {

constexpr double kNomeCap = 0.95;

// (Bp1a) shift factors: theta_a(u+1) = eps1(a) theta_a(u) and
// theta_a(u+tau) = epstau(a) exp(-i pi tau - 2 pi i u) theta_a(u).
constexpr double eps_one(int a) { return (a == 1 || a == 2) ? -1.0 : 1.0; }
constexpr double eps_tau(int a) { return (a == 1 || a == 4) ? -1.0 : 1.0; }

struct Reduced {
    cplx v;
    long m = 0; // unit shifts removed
    long n = 0; // tau shifts removed
};

// Splits u = v + m + n*tau with v small enough for safe direct summation.
// The tau-direction reduction triggers at |Im u| > Im tau, the real-direction
// reduction only for |Re| > 4 so that unit-shift identities are still
// exercised by direct summation.
Reduced reduce_argument(cplx u, const ModularParam& mp) {
    Reduced r;
    r.v = u;
    const double im = mp.im_tau();
    if (std::abs(u.imag()) > im) {
        r.n = std::lround(u.imag() / im);
        r.v -= static_cast<double>(r.n) * mp.tau();
    }
    if (std::abs(r.v.real()) > 4.0) {
        r.m = std::lround(r.v.real());
        r.v -= static_cast<double>(r.m);
    }
    return r;
}

cplx shift_prefactor(int a, const Reduced& red, const ModularParam& mp) {
    double sign = 1.0;
    if (red.m & 1) sign *= eps_one(a);
    if (red.n & 1) sign *= eps_tau(a);
    const double n = static_cast<double>(red.n);
    return sign * std::exp(-kI * kPi * mp.tau() * (n * n) - 2.0 * kPi * kI * n * red.v);
}

// Sums theta_a and its u-derivatives up to `order` at the reduced argument v.
void sum_series(int a, cplx v, const ModularParam& mp, int order,
                const TruncationPolicy& tp, cplx* out) {
    const cplx tau = mp.tau();
    const double log_q = std::log(std::abs(mp.nome()));
    const double im_v = std::abs(v.imag());

    for (int r = 0; r <= order; ++r) out[r] = 0.0;

    const bool half_family = (a == 1 || a == 2);
    const int k0 = half_family ? 0 : 1;
    if (!half_family) out[0] = 1.0; // k = 0 term of theta_3 / theta_4

    for (int k = k0;; ++k) {
        const double expo = half_family ? (k + 0.5) * (k + 0.5) : double(k) * k;
        const double freq = (half_family ? (2 * k + 1) : 2 * k) * kPi;
        // true bound on this term: 2 |q|^expo e^{freq |Im v|} freq^r
        const double base_bound = 2.0 * std::exp(expo * log_q + freq * im_v);
        bool converged = true;
        double w = 1.0;
        for (int r = 0; r <= order; ++r, w *= freq) {
            if (base_bound * w > tp.eps * (1.0 + std::abs(out[r]))) {
                converged = false;
                break;
            }
        }
        if (converged) break;
        if (k - k0 >= tp.max_terms)
            throw TruncationExceeded("theta series needs more than " +
                                     std::to_string(tp.max_terms) + " terms");

        const cplx amp = 2.0 * std::exp(kI * kPi * tau * expo);
        const cplx arg = freq * v;
        const cplx s = std::sin(arg);
        const cplx c = std::cos(arg);
        double f = 1.0;
        if (a == 1) {
            const double sign = (k & 1) ? -1.0 : 1.0;
            const cplx cyc[4] = {s, c, -s, -c};
            for (int r = 0; r <= order; ++r, f *= freq) out[r] += sign * amp * cyc[r] * f;
        } else { // a in {2,3,4}: cosine family
            const double sign = (a == 4 && (k & 1)) ? -1.0 : 1.0;
            const cplx cyc[4] = {c, -s, -c, s};
            for (int r = 0; r <= order; ++r, f *= freq) out[r] += sign * amp * cyc[r] * f;
        }
    }
}

} // namespace

void TruncationPolicy::validate() const {
    if (!(eps > 0.0) || max_terms < 1)
        throw InvalidArgument("truncation policy requires eps > 0 and max_terms >= 1");
}

ModularParam::ModularParam(cplx tau) : tau_(tau) {
    if (!(tau.imag() > 0.0))
        throw OutOfRange("modular parameter requires Im tau > 0");
    q_ = std::exp(kI * kPi * tau);
    if (std::abs(q_) > kNomeCap)
        throw OutOfRange("nome too close to the unit circle (|q| > 0.95)");
}

cplx half_period(int label, const ModularParam& m) noexcept {
    switch (((label % 4) + 4) % 4) {
        case 0: return 0.0;
        case 1: return 0.5;
        case 2: return 0.5 * (1.0 + m.tau());
        default: return 0.5 * m.tau();
    }
}

double lattice_distance(cplx u, const ModularParam& m) noexcept {
    const cplx tau = m.tau();
    const double n0 = std::round(u.imag() / tau.imag());
    double best = std::numeric_limits<double>::infinity();
    for (int dn = -1; dn <= 1; ++dn) {
        const cplx w = u - (n0 + dn) * tau;
        const double m0 = std::round(w.real());
        for (int dm = -1; dm <= 1; ++dm)
            best = std::min(best, std::abs(w - cplx(m0 + dm, 0.0)));
    }
    return best;
}

double theta_zero_distance(ThetaIndex a, cplx u, const ModularParam& m) noexcept {
    return lattice_distance(u - half_period(a.value() - 1, m), m);
}

void theta_derivs(ThetaIndex a, cplx u, const ModularParam& m, int order,
                  std::span<cplx> out, const TruncationPolicy& tp) {
    tp.validate();
    if (order < 0 || order > 3)
        throw InvalidArgument("theta derivatives supported up to order 3");
    if (std::ssize(out) < order + 1)
        throw InvalidArgument("output span too small for requested order");

    const Reduced red = reduce_argument(u, m);
    cplx base[4];
    sum_series(a.value(), red.v, m, order, tp, base);

    if (red.m == 0 && red.n == 0) {
        for (int r = 0; r <= order; ++r) out[r] = base[r];
        return;
    }
    const cplx pref = shift_prefactor(a.value(), red, m);
    const cplx dfac = -2.0 * kPi * kI * static_cast<double>(red.n);
    for (int r = order; r >= 0; --r) {
        cplx acc = 0.0;
        cplx p = 1.0;
        for (int j = r; j >= 0; --j) { // p = dfac^{r-j}
            acc += detail::kBinom[r][j] * p * base[j];
            p *= dfac;
        }
        out[r] = pref * acc;
    }
}

cplx theta(ThetaIndex a, cplx u, const ModularParam& m, const TruncationPolicy& tp) {
    cplx out[1];
    theta_derivs(a, u, m, 0, std::span<cplx>(out, 1), tp);
    return out[0];
}

cplx theta_du(ThetaIndex a, cplx u, const ModularParam& m, int order,
              const TruncationPolicy& tp) {
    if (order < 1 || order > 3)
        throw InvalidArgument("theta_du order must be in {1,2,3}");
    cplx out[4];
    theta_derivs(a, u, m, order, std::span<cplx>(out, 4), tp);
    return out[order];
}

cplx theta1_product(cplx u, const ModularParam& m, const TruncationPolicy& tp) {
    tp.validate();
    const Reduced red = reduce_argument(u, m);
    const cplx tau = m.tau();
    const cplx q2 = std::exp(2.0 * kPi * kI * tau);
    const cplx ep = std::exp(2.0 * kPi * kI * red.v);
    const double aq2 = std::abs(q2);
    const double aep = std::abs(ep);

    cplx prod = kI * std::exp(kI * kPi * tau * 0.25 - kI * kPi * red.v);
    cplx qf = 1.0;   // q^{2(k-1)}
    double aqf = 1.0;
    for (int k = 1;; ++k) {
        // largest deviation of the three factors from 1
        const double dev = std::max({aqf * aq2, aqf * aep, aqf * aq2 / aep});
        if (dev < tp.eps) break;
        if (k > tp.max_terms)
            throw TruncationExceeded("theta_1 product needs more than " +
                                     std::to_string(tp.max_terms) + " factors");
        prod *= (1.0 - qf * q2) * (1.0 - qf * ep) * (1.0 - qf * q2 / ep);
        qf *= q2;
        aqf *= aq2;
    }

    if (red.m != 0 || red.n != 0) prod *= shift_prefactor(1, red, m);
    return prod;
}

cplx theta_const(ThetaIndex a, const ModularParam& m, const TruncationPolicy& tp) {
    return theta(a, cplx(0.0, 0.0), m, tp);
}

} // namespace ddkp
