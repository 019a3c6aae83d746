#pragma once

#include <complex>
#include <span>

#include "ddkp/errors.hpp"

namespace ddkp {

using cplx = std::complex<double>;

// Truncation control for theta series and products. Summation stops once the
// magnitude bound on the next term falls below eps * (1 + |partial sum|);
// needing more than max_terms terms throws TruncationExceeded.
struct TruncationPolicy {
    double eps = 1e-16;
    int max_terms = 64;

    void validate() const;
};

// Modular parameter tau, Im tau > 0, with the cached nome q = exp(i pi tau).
// Construction rejects |q| > 0.95 (series too slow / ill-conditioned there).
class ModularParam {
public:
    explicit ModularParam(cplx tau);

    cplx tau() const noexcept { return tau_; }
    cplx nome() const noexcept { return q_; }
    double im_tau() const noexcept { return tau_.imag(); }
    ModularParam half() const { return ModularParam(0.5 * tau_); }
    bool on_imaginary_axis(double tol = 1e-12) const noexcept { return std::abs(tau_.real()) <= tol; }

private:
    cplx tau_;
    cplx q_;
};

// Theta index, cyclic modulo 4 (theta_a == theta_{a+4}); stored in 1..4.
class ThetaIndex {
public:
    ThetaIndex(int a) noexcept : a_(((a - 1) % 4 + 4) % 4 + 1) {}
    int value() const noexcept { return a_; }

private:
    int a_;
};

// Half-periods omega_0..omega_3 = 0, 1/2, (1+tau)/2, tau/2; label taken mod 4.
// theta_a has simple zeros exactly on omega_{a-1} + Z + Z tau.
cplx half_period(int label, const ModularParam& m) noexcept;

// Distance from u to the lattice Z + Z tau.
double lattice_distance(cplx u, const ModularParam& m) noexcept;
// Distance from u to the zero set of theta_a.
double theta_zero_distance(ThetaIndex a, cplx u, const ModularParam& m) noexcept;

// theta_a(u | tau) by the defining q-series.
cplx theta(ThetaIndex a, cplx u, const ModularParam& m, const TruncationPolicy& tp = {});

// d^r/du^r theta_a(u | tau) for r = 0..order (order <= 3), written to out,
// by term-wise differentiation of the series.
void theta_derivs(ThetaIndex a, cplx u, const ModularParam& m, int order,
                  std::span<cplx> out, const TruncationPolicy& tp = {});

// order-th u-derivative of theta_a, order in {1,2,3}.
cplx theta_du(ThetaIndex a, cplx u, const ModularParam& m, int order,
              const TruncationPolicy& tp = {});

// theta_1(u | tau) by the infinite product; an oracle independent of the
// series summation path.
cplx theta1_product(cplx u, const ModularParam& m, const TruncationPolicy& tp = {});

// Theta constant theta_a(0 | tau).
cplx theta_const(ThetaIndex a, const ModularParam& m, const TruncationPolicy& tp = {});

} // namespace ddkp
