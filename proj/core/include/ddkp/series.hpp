#pragma once

#include <functional>
#include <vector>

#include "ddkp/elliptic.hpp"

namespace ddkp {

// Truncated expansion c0 + c1/z + ... + cN/z^N. Arithmetic is exact on the
// retained orders: multiplying then truncating agrees with truncating first.
class TruncatedSeries {
public:
    explicit TruncatedSeries(int order);
    TruncatedSeries(int order, cplx c0, std::vector<cplx> tail); // tail = c1.., padded/truncated

    int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
    cplx coeff(int k) const;
    void set_coeff(int k, cplx value);
    cplx c0() const { return c_[0]; }
    cplx eval(cplx z) const;

    TruncatedSeries& operator+=(const TruncatedSeries& o);
    TruncatedSeries& operator-=(const TruncatedSeries& o);
    TruncatedSeries& operator*=(cplx s);
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(TruncatedSeries a, cplx s) { return a *= s; }
    friend TruncatedSeries operator*(cplx s, TruncatedSeries a) { return a *= s; }

private:
    std::vector<cplx> c_; // c_[k] multiplies z^{-k}
};

// Cauchy product truncated at the common order; OrderMismatch if orders differ.
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);

// f(u0 + s(z)) for f given by its Taylor coefficients around u0
// (f_taylor[j] multiplies (u - u0)^j); s must have c0 = 0.
TruncatedSeries compose_analytic(std::span<const cplx> f_taylor, const TruncatedSeries& s);

// Taylor coefficients of f around center, degrees 0..deg, by the trapezoid
// rule on a circle of the given radius; spectrally accurate for analytic f.
std::vector<cplx> taylor_from_circle(const std::function<cplx(cplx)>& f, cplx center,
                                     double radius, int samples, int deg);

// Taylor coefficients of S' around u0, degrees 0..deg: 0..2 from the
// term-wise differentiated theta series, the rest by contour differentiation
// (radius 0.05, 64 samples).
std::vector<cplx> s_prime_taylor(cplx u0, const ModularParam& m, int deg,
                                 const EllipticOpts& opts = {});

// B'_k(u0), k = 1..K, from S'(s(z) + u0) = S'(u0) + sum_k z^{-k} B'_k(u0) / k.
std::vector<cplx> b_prime_coeffs(cplx u0, const TruncatedSeries& s, const ModularParam& m,
                                 int K, const EllipticOpts& opts = {});

// Hydrodynamic speeds phi_k = B'_k(u0) / S'(u0), k = 1..K.
std::vector<cplx> phi_k(cplx u0, const TruncatedSeries& s, const ModularParam& m,
                        int K, const EllipticOpts& opts = {});

} // namespace ddkp
