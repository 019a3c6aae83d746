#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ddkp/series.hpp"

namespace ddkp {

// Right-hand-side normalization of the evolution:
//   standard: 4 pi i du = -E1(u+xi|tau) - E4(u+xi|tau) + E1(xi|tau) + E4(xi|tau),
//             the form whose u = 0 point (z = infinity) is a fixed point;
//   shifted:  4 pi i du = -E1(u+xi_shifted | tau/2), with the additive
//             normalization constant absorbed into the co-evolved c0;
//   painleve: 2 pi i du = -E1(u+xi|tau), the half-tau rescaled form whose
//             second tau-derivative is the elliptic Painleve VI equation.
enum class Normalization { standard, shifted, painleve };

// Driving xi along the path: constant, closed form in tau, or a sampled table
// keyed by the path parameter s (linear interpolation).
class DrivingFunction {
public:
    enum class Kind { constant, closed_form, sampled };

    static DrivingFunction constant(cplx xi);
    static DrivingFunction closed_form(std::function<cplx(cplx tau)> f);
    static DrivingFunction sampled(std::vector<double> s, std::vector<cplx> xi);

    Kind kind() const noexcept { return kind_; }
    bool is_constant() const noexcept { return kind_ == Kind::constant; }
    cplx operator()(double s, cplx tau) const;
    double max_spacing() const; // largest sample gap (sampled kind only)

private:
    DrivingFunction() = default;
    Kind kind_ = Kind::constant;
    cplx value_{};
    std::function<cplx(cplx)> fn_;
    std::vector<double> s_;
    std::vector<cplx> xi_;
};

// Straight tau segment tau(s) = start + s (end - start), s in [0,1], traversed
// in `steps` fixed RK4 steps. The whole segment must satisfy Im tau > 0 and
// the nome guard (checked at the endpoints; Im tau is linear along it).
struct TauPath {
    TauPath(cplx start, cplx end, int steps);

    cplx start;
    cplx end;
    int steps;

    cplx at(double s) const noexcept { return start + s * (end - start); }
    cplx delta() const noexcept { return end - start; }
};

struct EvolveOptions {
    Normalization normalization = Normalization::standard;
    double pole_guard = 1e-8;
    TruncationPolicy trunc{};
    bool cross_check_rhs = true;  // verify the half-tau form of the RHS
    int taylor_samples = 64;      // contour samples for the series RHS
    double taylor_radius = 0.2;   // contour radius (shrunk near poles)
    bool runtime_assertions = true; // log R reality/monotonicity in the real regime
};

// Time-stamped evolution state along the path.
struct Trajectory {
    Normalization normalization = Normalization::standard;
    DrivingFunction driving = DrivingFunction::constant(0.0);
    std::vector<double> s;
    std::vector<cplx> tau;
    std::vector<cplx> xi;
    std::vector<std::vector<cplx>> tracers; // tracers[i][j], sample i, tracer j
    std::vector<cplx> log_r;
    std::vector<cplx> c0;
    std::vector<TruncatedSeries> series;    // empty when no series evolved

    int num_samples() const noexcept { return static_cast<int>(s.size()); }
    int num_tracers() const noexcept {
        return tracers.empty() ? 0 : static_cast<int>(tracers.front().size());
    }
    // Tracer value in the standard normalization (shifted runs subtract c0).
    cplx tracer_std(int sample, int j) const;
};

// du/dtau at a point, in the given normalization (xi-dependent terms included).
cplx loewner_rhs(cplx u, cplx xi, const ModularParam& m, const EvolveOptions& opts = {});

// Integrates tracers, log R, c0 and (optionally) the coefficient series along
// the path with fixed-step RK4. Throws NearPole (trajectory hit a pole; the
// s-location is reported) or StepTooLarge (an RK4 stage was rejected).
Trajectory evolve(const TauPath& path, const DrivingFunction& drv,
                  std::span<const cplx> tracers0,
                  const std::optional<TruncatedSeries>& series0 = std::nullopt,
                  const EvolveOptions& opts = {});

// |4 pi i dS(u_j)/dtau - S'(xi) S'(u_j + xi)| per interior sample, normalized;
// the total derivative is a central difference along the trajectory.
std::vector<double> total_derivative_residual(const Trajectory& traj, int j,
                                              const EllipticOpts& opts = {});

// Normalized residual of dS(u_1) dS(u_2) = dlogR dS(u_1 - u_2) (all total
// tau-derivatives by central differences) per interior sample.
std::vector<double> consistency_residual(const Trajectory& traj, int j1, int j2,
                                         const EllipticOpts& opts = {});

// Pointwise algebraic residual of the substituted consistency relation
// [S'(u1) phi(u1+xi, xi) + pi^2 t4^4] [S'(u2) phi(u2+xi, xi) + pi^2 t4^4]
//   = S'(xi)^2 [S'(u1-u2) phi(u1+xi, u2+xi) + pi^2 t4^4]
// per sample; no finite differences involved.
std::vector<double> substituted_identity_residual(const Trajectory& traj, int j1, int j2,
                                                  const EllipticOpts& opts = {});

// |(2 pi i)^2 d^2u/dtau^2 - wp'(u + xi)/2| per interior sample (second central
// differences); requires a painleve-normalized constant-driving trajectory.
std::vector<double> painleve_residual(const Trajectory& traj, int j,
                                      const EllipticOpts& opts = {});

// |4 pi i d/dtau E1(u_j + xi | tau) - E1''(u_j + xi | tau)| per interior
// sample; same preconditions as painleve_residual.
std::vector<double> heat_residual(const Trajectory& traj, int j,
                                  const EllipticOpts& opts = {});

// (1/4 pi i) int (S'(xi(tau)|tau))^2 dtau along the path by composite
// Gauss-Legendre quadrature; an oracle for the integrated log R.
cplx log_r_quadrature(const TauPath& path, const DrivingFunction& drv, int panels = 64,
                      const EllipticOpts& opts = {});

} // namespace ddkp
