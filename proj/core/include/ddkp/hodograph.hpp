#pragma once

#include "ddkp/loewner.hpp"

namespace ddkp {

// Times t0, t1..tK of the reduced hierarchy.
struct TimeVector {
    double t0 = 0.0;
    std::vector<double> tk; // tk[i] = t_{i+1}
};

// Speeds phi_k(xi(tau)|tau) evaluated from a co-evolved coefficient series:
// a Loewner pre-pass integrates the series over a bracket on the imaginary
// axis, then states at arbitrary interior points come from one partial RK4
// step off the stored grid. Driving must be constant or closed-form.
class SpeedTable {
public:
    SpeedTable(const DrivingFunction& drv, double y_lo, double y_hi, int K, int N,
               double gamma0, int prepass_steps, const EvolveOptions& opts = {});

    double y_lo() const noexcept { return y_lo_; }
    double y_hi() const noexcept { return y_hi_; }
    int speeds() const noexcept { return K_; }

    TruncatedSeries series_at(double y) const;
    std::vector<cplx> phi(double y) const;
    cplx xi_at(double y) const;

private:
    DrivingFunction drv_;
    double y_lo_, y_hi_;
    int K_;
    EvolveOptions opts_;
    Trajectory prepass_;
};

// Hodograph problem: sum_k t_k phi_k(xi(tau)|tau) [+ t0 when include_t0] = Phi(tau),
// solved for tau = i y on the imaginary axis. Phi is a function of y (empty
// means identically zero). The speeds come from the pre-pass series seeded
// with c1 = gamma0/pi, higher coefficients zero.
struct HodographProblem {
    DrivingFunction drv = DrivingFunction::constant(0.3);
    std::function<double(double)> Phi; // of y = Im tau; empty = 0
    bool include_t0 = true;
    int K = 2;
    int N = 12;
    double gamma0 = 1.0;
    int prepass_steps = 400;
    EvolveOptions evolve{};
};

struct HodographResult {
    double y_root = 0.0;
    cplx tau_root{};
    double residual = 0.0;
    int iterations = 0;
    std::vector<double> phi_at_root;
};

// Bisection on a sign-changing bracket followed by a Newton polish; the root
// residual |objective| is below 1e-10 on success. Pass a prebuilt SpeedTable
// to share the pre-pass between repeated solves.
HodographResult hodograph_solve(const HodographProblem& prob, const TimeVector& t,
                                double y_lo, double y_hi,
                                const SpeedTable* table = nullptr);

// |dtau/dt_k - phi_k dtau/dt_0| / (|dtau/dt_k| + guard) by central differences
// of the hodograph root (step h in t_k and t_0); requires include_t0 = true.
double hydrodynamic_residual(const HodographProblem& prob, const TimeVector& t, int k,
                             double h, double y_lo, double y_hi,
                             const SpeedTable* table = nullptr);

// Residual of the generating relation: with grad(z) = d/dt0 + sum_{k<=K} z^{-k} d/dt_k / k,
// |grad(z) tau - [S'(u(z)+xi)/S'(xi)] dtau/dt0| / (|grad(z) tau| + guard).
double generating_residual(const HodographProblem& prob, const TimeVector& t, cplx z,
                           double h, double y_lo, double y_hi,
                           const SpeedTable* table = nullptr);

} // namespace ddkp
