#include "ddkp/series.hpp"

#include <cmath>

#include "detail.hpp"

namespace ddkp {

using detail::kI;
using detail::kPi;

TruncatedSeries::TruncatedSeries(int order) {
    if (order < 1) throw InvalidArgument("series order must be >= 1");
    c_.assign(order + 1, cplx(0.0, 0.0));
}

TruncatedSeries::TruncatedSeries(int order, cplx c0, std::vector<cplx> tail)
    : TruncatedSeries(order) {
    c_[0] = c0;
    for (int k = 1; k <= order && k <= static_cast<int>(tail.size()); ++k)
        c_[k] = tail[k - 1];
}

cplx TruncatedSeries::coeff(int k) const {
    if (k < 0 || k > order()) throw OutOfRange("series coefficient index out of range");
    return c_[k];
}

void TruncatedSeries::set_coeff(int k, cplx value) {
    if (k < 0 || k > order()) throw OutOfRange("series coefficient index out of range");
    c_[k] = value;
}

cplx TruncatedSeries::eval(cplx z) const {
    // Horner in 1/z
    const cplx zi = 1.0 / z;
    cplx acc = c_.back();
    for (int k = order() - 1; k >= 0; --k) acc = acc * zi + c_[k];
    return acc;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
    if (o.order() != order()) throw OrderMismatch("series orders differ in +");
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
    if (o.order() != order()) throw OrderMismatch("series orders differ in -");
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(cplx s) {
    for (auto& c : c_) c *= s;
    return *this;
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.order() != b.order()) throw OrderMismatch("series orders differ in series_mul");
    const int n = a.order();
    TruncatedSeries out(n);
    for (int k = 0; k <= n; ++k) {
        // symmetric pairing keeps the product bitwise commutative
        cplx acc = 0.0;
        for (int j = 0; 2 * j < k; ++j)
            acc += a.coeff(j) * b.coeff(k - j) + a.coeff(k - j) * b.coeff(j);
        if (k % 2 == 0) acc += a.coeff(k / 2) * b.coeff(k / 2);
        out.set_coeff(k, acc);
    }
    return out;
}

TruncatedSeries compose_analytic(std::span<const cplx> f_taylor, const TruncatedSeries& s) {
    if (f_taylor.empty()) throw InvalidArgument("compose_analytic: empty Taylor data");
    if (s.c0() != cplx(0.0, 0.0))
        throw InvalidArgument("compose_analytic: series must have vanishing constant term");
    const int n = s.order();
    // Horner: f(s) = a_0 + s (a_1 + s (a_2 + ...))
    TruncatedSeries acc(n);
    acc.set_coeff(0, f_taylor.back());
    for (int j = static_cast<int>(f_taylor.size()) - 2; j >= 0; --j) {
        acc = series_mul(acc, s);
        acc.set_coeff(0, acc.coeff(0) + f_taylor[j]);
    }
    return acc;
}

std::vector<cplx> taylor_from_circle(const std::function<cplx(cplx)>& f, cplx center,
                                     double radius, int samples, int deg) {
    if (samples < 2 * (deg + 1))
        throw InvalidArgument("taylor_from_circle: too few samples for requested degree");
    std::vector<cplx> vals(samples);
    for (int j = 0; j < samples; ++j) {
        const double t = 2.0 * kPi * j / samples;
        vals[j] = f(center + radius * std::exp(kI * t));
    }
    std::vector<cplx> out(deg + 1);
    for (int k = 0; k <= deg; ++k) {
        cplx acc = 0.0;
        for (int j = 0; j < samples; ++j) {
            const double t = 2.0 * kPi * j / samples;
            acc += vals[j] * std::exp(-kI * (static_cast<double>(k) * t));
        }
        out[k] = acc / (static_cast<double>(samples) * std::pow(radius, k));
    }
    return out;
}

std::vector<cplx> s_prime_taylor(cplx u0, const ModularParam& m, int deg,
                                 const EllipticOpts& opts) {
    if (deg < 0) throw InvalidArgument("s_prime_taylor: negative degree");
    constexpr double kRadius = 0.05;
    constexpr int kSamples = 64;
    const double clearance = std::min(theta_zero_distance(1, u0, m),
                                      theta_zero_distance(4, u0, m));
    if (clearance < (deg > 2 ? kRadius * 1.2 : opts.pole_guard))
        throw NearPole("s_prime_taylor: expansion point too close to a pole of S'");

    std::vector<cplx> out;
    if (deg > 2) {
        EllipticOpts quiet = opts;
        quiet.cross_check = false; // contour samples are plain evaluations
        out = taylor_from_circle(
            [&](cplx u) { return S_prime(u, m, quiet); }, u0, kRadius, kSamples, deg);
    } else {
        out.assign(deg + 1, cplx(0.0, 0.0));
    }
    // low orders in closed form: S', S'', S'''/2
    out[0] = S_prime(u0, m, opts);
    if (deg >= 1)
        out[1] = eisenstein_du(1, u0, m, 1, opts) - eisenstein_du(4, u0, m, 1, opts);
    if (deg >= 2)
        out[2] = 0.5 * (eisenstein_du(1, u0, m, 2, opts) - eisenstein_du(4, u0, m, 2, opts));
    return out;
}

std::vector<cplx> b_prime_coeffs(cplx u0, const TruncatedSeries& s, const ModularParam& m,
                                 int K, const EllipticOpts& opts) {
    if (K < 1 || K > s.order())
        throw OrderMismatch("b_prime_coeffs: need 1 <= K <= series order");
    if (s.c0() != cplx(0.0, 0.0))
        throw InvalidArgument("b_prime_coeffs: series must have vanishing constant term");
    const std::vector<cplx> taylor = s_prime_taylor(u0, m, K, opts);
    const TruncatedSeries composed = compose_analytic(taylor, s);
    std::vector<cplx> out(K);
    for (int k = 1; k <= K; ++k) out[k - 1] = static_cast<double>(k) * composed.coeff(k);
    return out;
}

std::vector<cplx> phi_k(cplx u0, const TruncatedSeries& s, const ModularParam& m,
                        int K, const EllipticOpts& opts) {
    const cplx sp = S_prime(u0, m, opts);
    if (std::abs(sp) < opts.pole_guard)
        throw ZeroDenominator("phi_k: S'(u0) vanishes (u0 at a half-period zero of S')");
    std::vector<cplx> out = b_prime_coeffs(u0, s, m, K, opts);
    for (auto& b : out) b /= sp;
    return out;
}

} // namespace ddkp
