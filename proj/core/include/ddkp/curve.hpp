#pragma once

#include "ddkp/elliptic.hpp"

namespace ddkp {

// Curve data (gamma, tau) with the derived scale R = gamma theta_2(0) theta_3(0)
// and offset V = -gamma^2 (theta_2^4(0) + theta_3^4(0)) of the spectral curve
// p^2 = R^2 (w + 1/w) + V. The real-reduction regime (purely imaginary tau,
// real positive gamma) keeps R and the curve real; other parameters are
// accepted but flagged.
class CurveParams {
public:
    CurveParams(cplx gamma, ModularParam m, const TruncationPolicy& tp = {});

    cplx gamma() const noexcept { return gamma_; }
    const ModularParam& modular() const noexcept { return m_; }
    cplx big_r() const noexcept { return r_; }
    cplx big_v() const noexcept { return v_; }
    cplx c1() const noexcept;               // gamma / pi
    bool real_regime() const noexcept { return real_regime_; }

private:
    cplx gamma_;
    ModularParam m_;
    cplx r_;
    cplx v_;
    bool real_regime_;
};

// w(u) = theta_4^2(u) / theta_1^2(u).
cplx w_of_u(cplx u, const CurveParams& cp, const EllipticOpts& opts = {});

// p(u) = gamma theta_4^2(0) theta_2(u) theta_3(u) / (theta_1(u) theta_4(u)).
cplx p_of_u(cplx u, const CurveParams& cp, const EllipticOpts& opts = {});

// |p^2 - R^2(w + 1/w) - V| / (|p^2| + |V| + 1).
double curve_residual(cplx u, const CurveParams& cp, const EllipticOpts& opts = {});

// Normalized residual of
// (w(u1)-w(u2))/(p(u1)+p(u2)) =
//   -theta_4(u1) theta_4(u2) theta_1(u1-u2) /
//    (gamma theta_2(0) theta_3(0) theta_1(u1) theta_1(u2) theta_4(u1-u2)).
double ratio_identity_residual(cplx u1, cplx u2, const CurveParams& cp,
                               const EllipticOpts& opts = {});

struct NewtonOpts {
    int max_iter = 50;
    double tol = 1e-13;
};

// Inverts w(u) = w_target by Newton iteration on S(u) + log(w_target)/2 = 0,
// with the target branch snapped to the sheet of u_guess.
cplx u_from_w(cplx w_target, const ModularParam& m, cplx u_guess,
              const EllipticOpts& opts = {}, const NewtonOpts& nopts = {});

struct ModulusBracket {
    double y_lo = 0.05;
    double y_hi = 8.0;
};

// Solves theta_2^2/theta_3^2 + theta_3^2/theta_2^2 = ratio for tau = i y on the
// imaginary axis (the map's range there is (2, inf)); bisection after a
// monotonicity sweep, then a Newton polish with the exact tau-derivative.
ModularParam tau_from_modulus(double ratio, const ModulusBracket& br = {},
                              const TruncationPolicy& tp = {});

} // namespace ddkp
