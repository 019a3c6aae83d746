#include "ddkp/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail.hpp"

namespace ddkp {

using detail::kI;
using detail::kPi;

namespace {

const cplx kQuarter = 1.0 / (4.0 * kPi * kI); // 1/(4 pi i)
const cplx kHalfFac = 1.0 / (2.0 * kPi * kI); // 1/(2 pi i)

double pole_clearance(cplx x, const ModularParam& m, Normalization norm) {
    // poles of the RHS: zeros of theta_1 and theta_4 at tau (equivalently the
    // zeros of theta_1 at tau/2); painleve uses theta_1 at tau only
    if (norm == Normalization::painleve) return theta_zero_distance(1, x, m);
    return std::min(theta_zero_distance(1, x, m), theta_zero_distance(4, x, m));
}

[[noreturn]] void throw_guard(double s, cplx x, bool base_point, const char* what) {
    std::ostringstream os;
    os << what << " at s = " << s << ", argument (" << x.real() << "," << x.imag() << ")";
    if (base_point) throw NearPole(os.str());
    throw StepTooLarge(os.str());
}

struct Derivs {
    std::vector<cplx> tracer;
    cplx log_r{};
    cplx c0{};
    std::vector<cplx> tail; // dc_k, k = 1..N
};

struct State {
    std::vector<cplx> tracer;
    cplx log_r{};
    cplx c0{};
    std::vector<cplx> tail;

    State& axpy(double a, const Derivs& d) {
        for (std::size_t j = 0; j < tracer.size(); ++j) tracer[j] += a * d.tracer[j];
        log_r += a * d.log_r;
        c0 += a * d.c0;
        for (std::size_t k = 0; k < tail.size(); ++k) tail[k] += a * d.tail[k];
        return *this;
    }
};

class Flow {
public:
    Flow(const TauPath& path, const DrivingFunction& drv, const EvolveOptions& opts,
         int series_order)
        : path_(path), drv_(drv), opts_(opts), series_order_(series_order) {}

    Derivs operator()(double s, const State& y, bool base_point) const {
        const cplx tau = path_.at(s);
        const ModularParam m(tau);
        const cplx xi = drv_(s, tau);
        const cplx dtau = path_.delta();
        const Normalization norm = opts_.normalization;

        EllipticOpts eopts;
        eopts.pole_guard = opts_.pole_guard;
        eopts.trunc = opts_.trunc;
        eopts.cross_check = false;

        if (pole_clearance(xi, m, Normalization::standard) < opts_.pole_guard)
            throw_guard(s, xi, base_point, "driving function hit a pole guard");

        Derivs d;
        d.tracer.resize(y.tracer.size());

        const ModularParam mh = m.half();
        const cplx xi_eff = (norm == Normalization::shifted) ? xi - y.c0 : xi;

        // shared xi-terms
        cplx const1 = 0.0, const4 = 0.0;
        if (norm == Normalization::standard) {
            const1 = eisenstein(1, xi, m, eopts);
            const4 = eisenstein(4, xi, m, eopts);
        }

        for (std::size_t j = 0; j < y.tracer.size(); ++j) {
            const cplx x = y.tracer[j] + xi_eff;
            if (pole_clearance(x, m, norm) < opts_.pole_guard)
                throw_guard(s, x, base_point, "tracer hit a pole guard");
            cplx du;
            switch (norm) {
                case Normalization::standard:
                    // pairwise grouping cancels exactly at u = 0
                    du = kQuarter * ((const1 - eisenstein(1, x, m, eopts)) +
                                     (const4 - eisenstein(4, x, m, eopts)));
                    if (opts_.cross_check_rhs) {
                        const cplx alt = kQuarter * (-eisenstein(1, x, mh, eopts) +
                                                     eisenstein(1, xi, mh, eopts));
                        if (std::abs(du - alt) >
                            1e-11 * (1.0 + std::norm(du * (4.0 * kPi))))
                            throw CrossCheckFailure("loewner_rhs: half-tau form disagrees");
                    }
                    break;
                case Normalization::shifted:
                    du = -kQuarter * eisenstein(1, x, mh, eopts);
                    break;
                case Normalization::painleve:
                    du = -kHalfFac * eisenstein(1, x, m, eopts);
                    break;
            }
            d.tracer[j] = du * dtau;
        }

        if (norm == Normalization::painleve) {
            d.log_r = 0.0;
            d.c0 = -kHalfFac * eisenstein(1, xi, m, eopts) * dtau;
        } else {
            const cplx sp = S_prime(xi, m, eopts);
            d.log_r = kQuarter * sp * sp * dtau;
            d.c0 = -kQuarter * eisenstein(1, xi, mh, eopts) * dtau;
        }

        if (series_order_ > 0) {
            const ModularParam& mt = (norm == Normalization::painleve) ? m : mh;
            const cplx scale = (norm == Normalization::painleve) ? -kHalfFac : -kQuarter;
            const double clear = theta_zero_distance(1, xi, mt);
            const double radius = std::min(opts_.taylor_radius, 0.5 * clear);
            if (!(radius > 0.0))
                throw_guard(s, xi, base_point, "series expansion point hit a pole guard");
            std::vector<cplx> g = taylor_from_circle(
                [&](cplx x) { return eisenstein(1, x, mt, eopts); }, xi, radius,
                opts_.taylor_samples, series_order_);
            // closed forms for the low orders
            g[0] = eisenstein(1, xi, mt, eopts);
            if (series_order_ >= 1) g[1] = eisenstein_du(1, xi, mt, 1, eopts);
            if (series_order_ >= 2) g[2] = 0.5 * eisenstein_du(1, xi, mt, 2, eopts);
            for (auto& c : g) c *= scale;

            TruncatedSeries tail(series_order_, 0.0,
                                 std::vector<cplx>(y.tail.begin(), y.tail.end()));
            const TruncatedSeries composed = compose_analytic(g, tail);
            d.tail.resize(series_order_);
            for (int k = 1; k <= series_order_; ++k)
                d.tail[k - 1] = composed.coeff(k) * dtau;
        }
        return d;
    }

private:
    const TauPath& path_;
    const DrivingFunction& drv_;
    const EvolveOptions& opts_;
    int series_order_;
};

bool real_regime_run(const TauPath& path, const DrivingFunction& drv,
                     const EvolveOptions& opts) {
    if (opts.normalization == Normalization::painleve) return false;
    if (std::abs(path.start.real()) > 1e-14 || std::abs(path.end.real()) > 1e-14)
        return false;
    if (path.end.imag() <= path.start.imag()) return false;
    if (!drv.is_constant()) return false;
    return std::abs(drv(0.0, path.start).imag()) <= 1e-14;
}

} // namespace

DrivingFunction DrivingFunction::constant(cplx xi) {
    DrivingFunction d;
    d.kind_ = Kind::constant;
    d.value_ = xi;
    return d;
}

DrivingFunction DrivingFunction::closed_form(std::function<cplx(cplx)> f) {
    if (!f) throw InvalidArgument("driving function callback is empty");
    DrivingFunction d;
    d.kind_ = Kind::closed_form;
    d.fn_ = std::move(f);
    return d;
}

DrivingFunction DrivingFunction::sampled(std::vector<double> s, std::vector<cplx> xi) {
    if (s.size() != xi.size() || s.size() < 2)
        throw InvalidArgument("sampled driving needs >= 2 samples of equal length");
    if (!std::is_sorted(s.begin(), s.end()))
        throw InvalidArgument("sampled driving requires increasing sample parameters");
    if (s.front() > 0.0 || s.back() < 1.0)
        throw InvalidArgument("sampled driving must cover s in [0,1]");
    DrivingFunction d;
    d.kind_ = Kind::sampled;
    d.s_ = std::move(s);
    d.xi_ = std::move(xi);
    return d;
}

cplx DrivingFunction::operator()(double s, cplx tau) const {
    switch (kind_) {
        case Kind::constant: return value_;
        case Kind::closed_form: return fn_(tau);
        case Kind::sampled: {
            const auto it = std::upper_bound(s_.begin(), s_.end(), s);
            const std::size_t hi = std::min<std::size_t>(
                std::max<std::ptrdiff_t>(it - s_.begin(), 1), s_.size() - 1);
            const std::size_t lo = hi - 1;
            const double w = (s - s_[lo]) / (s_[hi] - s_[lo]);
            return xi_[lo] + w * (xi_[hi] - xi_[lo]);
        }
    }
    throw Error("unreachable driving kind");
}

double DrivingFunction::max_spacing() const {
    if (kind_ != Kind::sampled) return 0.0;
    double gap = 0.0;
    for (std::size_t i = 1; i < s_.size(); ++i) gap = std::max(gap, s_[i] - s_[i - 1]);
    return gap;
}

TauPath::TauPath(cplx start_, cplx end_, int steps_)
    : start(start_), end(end_), steps(steps_) {
    if (steps < 1) throw InvalidArgument("tau path needs at least one step");
    ModularParam a(start); // endpoint guards: Im tau is linear along the segment
    ModularParam b(end);
    (void)a;
    (void)b;
}

cplx Trajectory::tracer_std(int sample, int j) const {
    const cplx u = tracers[sample][j];
    return (normalization == Normalization::shifted) ? u - c0[sample] : u;
}

cplx loewner_rhs(cplx u, cplx xi, const ModularParam& m, const EvolveOptions& opts) {
    EllipticOpts eopts;
    eopts.pole_guard = opts.pole_guard;
    eopts.trunc = opts.trunc;
    eopts.cross_check = false;
    const cplx x = u + xi;
    if (pole_clearance(x, m, opts.normalization) < opts.pole_guard)
        throw NearPole("loewner_rhs: u + xi within the pole guard");
    if (pole_clearance(xi, m, Normalization::standard) < opts.pole_guard)
        throw NearPole("loewner_rhs: xi within the pole guard");
    switch (opts.normalization) {
        case Normalization::shifted:
            return -kQuarter * eisenstein(1, x, m.half(), eopts);
        case Normalization::painleve:
            return -kHalfFac * eisenstein(1, x, m, eopts);
        case Normalization::standard:
        default: {
            // pairwise grouping makes the four terms cancel exactly at u = 0
            const cplx rhs =
                kQuarter * ((eisenstein(1, xi, m, eopts) - eisenstein(1, x, m, eopts)) +
                            (eisenstein(4, xi, m, eopts) - eisenstein(4, x, m, eopts)));
            if (opts.cross_check_rhs) {
                const ModularParam mh = m.half();
                const cplx alt = kQuarter * (eisenstein(1, xi, mh, eopts) -
                                             eisenstein(1, x, mh, eopts));
                if (std::abs(rhs - alt) > 1e-11 * (1.0 + std::norm(rhs * (4.0 * kPi))))
                    throw CrossCheckFailure("loewner_rhs: half-tau form disagrees");
            }
            return rhs;
        }
    }
}

Trajectory evolve(const TauPath& path, const DrivingFunction& drv,
                  std::span<const cplx> tracers0,
                  const std::optional<TruncatedSeries>& series0,
                  const EvolveOptions& opts) {
    const double h = 1.0 / path.steps;
    if (drv.kind() == DrivingFunction::Kind::sampled && drv.max_spacing() > 2.0 * h)
        throw InvalidArgument(
            "sampled driving table too coarse for the integrator step (need spacing <= 2h)");

    const int series_order = series0 ? series0->order() : 0;
    if (series0 && opts.normalization == Normalization::standard &&
        series0->c0() != cplx(0.0, 0.0))
        throw InvalidArgument("standard normalization requires a series with c0 = 0");

    State y;
    y.tracer.assign(tracers0.begin(), tracers0.end());
    y.log_r = 0.0;
    y.c0 = series0 ? series0->c0() : cplx(0.0, 0.0);
    if (series0)
        for (int k = 1; k <= series_order; ++k) y.tail.push_back(series0->coeff(k));

    const bool check_real = opts.runtime_assertions && real_regime_run(path, drv, opts);
    const Flow flow(path, drv, opts, series_order);

    Trajectory traj;
    traj.normalization = opts.normalization;
    traj.driving = drv;
    const auto record = [&](double s, const State& st) {
        const cplx tau = path.at(s);
        traj.s.push_back(s);
        traj.tau.push_back(tau);
        traj.xi.push_back(drv(s, tau));
        traj.tracers.push_back(st.tracer);
        traj.log_r.push_back(st.log_r);
        traj.c0.push_back(st.c0);
        if (series_order > 0) {
            // the series constant belongs to the state only away from the
            // standard normalization (there u(infinity) = 0 identically; the
            // integrated c0 is conversion bookkeeping, not a coefficient)
            const cplx c0s =
                (opts.normalization == Normalization::standard) ? cplx(0.0, 0.0) : st.c0;
            traj.series.emplace_back(series_order, c0s,
                                     std::vector<cplx>(st.tail.begin(), st.tail.end()));
        }
    };
    record(0.0, y);

    for (int i = 0; i < path.steps; ++i) {
        const double s = i * h;
        const Derivs k1 = flow(s, y, true);
        State y2 = y;
        const Derivs k2 = flow(s + 0.5 * h, y2.axpy(0.5 * h, k1), false);
        State y3 = y;
        const Derivs k3 = flow(s + 0.5 * h, y3.axpy(0.5 * h, k2), false);
        State y4 = y;
        const Derivs k4 = flow(s + h, y4.axpy(h, k3), false);

        const double prev_logr = y.log_r.real();
        y.axpy(h / 6.0, k1).axpy(h / 3.0, k2).axpy(h / 3.0, k3).axpy(h / 6.0, k4);

        if (check_real) {
            if (std::abs(y.log_r.imag()) > 1e-9 * (1.0 + std::abs(y.log_r)))
                throw Error("evolve: log R acquired an imaginary part in the real regime");
            if (y.log_r.real() < prev_logr - 1e-12)
                throw Error("evolve: log R decreased along an upward imaginary path");
        }
        record((i + 1) * h, y);
    }
    return traj;
}

namespace {

std::vector<cplx> s_values_along(const Trajectory& traj, int j, const EllipticOpts& opts) {
    std::vector<cplx> out(traj.num_samples());
    for (int i = 0; i < traj.num_samples(); ++i)
        out[i] = S(traj.tracer_std(i, j), ModularParam(traj.tau[i]), opts).value;
    return out;
}

void require_tracer(const Trajectory& traj, int j, const char* who) {
    if (j < 0 || j >= traj.num_tracers())
        throw InvalidArgument(std::string(who) + ": tracer index out of range");
    if (traj.num_samples() < 3)
        throw InvalidArgument(std::string(who) + ": trajectory too short for differences");
}

} // namespace

std::vector<double> total_derivative_residual(const Trajectory& traj, int j,
                                              const EllipticOpts& opts) {
    require_tracer(traj, j, "total_derivative_residual");
    if (traj.normalization == Normalization::painleve)
        throw InvalidArgument("total_derivative_residual needs a standard/shifted run");
    const std::vector<cplx> sv = s_values_along(traj, j, opts);
    std::vector<double> out;
    out.reserve(traj.num_samples() - 2);
    for (int i = 1; i + 1 < traj.num_samples(); ++i) {
        const ModularParam m(traj.tau[i]);
        const cplx fd = (sv[i + 1] - sv[i - 1]) / (traj.tau[i + 1] - traj.tau[i - 1]);
        const cplx rhs = S_prime(traj.xi[i], m, opts) *
                         S_prime(traj.tracer_std(i, j) + traj.xi[i], m, opts);
        out.push_back(std::abs(4.0 * kPi * kI * fd - rhs) / (1.0 + std::abs(rhs)));
    }
    return out;
}

std::vector<double> consistency_residual(const Trajectory& traj, int j1, int j2,
                                         const EllipticOpts& opts) {
    require_tracer(traj, j1, "consistency_residual");
    require_tracer(traj, j2, "consistency_residual");
    if (j1 == j2) throw DegeneratePair("consistency_residual: identical tracers");
    if (traj.normalization == Normalization::painleve)
        throw InvalidArgument("consistency_residual needs a standard/shifted run");

    const int n = traj.num_samples();
    const std::vector<cplx> s1 = s_values_along(traj, j1, opts);
    const std::vector<cplx> s2 = s_values_along(traj, j2, opts);
    std::vector<cplx> s12(n);
    for (int i = 0; i < n; ++i) {
        const ModularParam m(traj.tau[i]);
        const cplx du = traj.tracer_std(i, j1) - traj.tracer_std(i, j2);
        if (std::min(theta_zero_distance(1, du, m), theta_zero_distance(4, du, m)) <
            opts.pole_guard)
            throw DegeneratePair("consistency_residual: u1 - u2 hit a pole of S");
        s12[i] = S(du, m, opts).value;
    }
    std::vector<double> out;
    out.reserve(n - 2);
    for (int i = 1; i + 1 < n; ++i) {
        const cplx dtau = traj.tau[i + 1] - traj.tau[i - 1];
        const cplx d1 = (s1[i + 1] - s1[i - 1]) / dtau;
        const cplx d2 = (s2[i + 1] - s2[i - 1]) / dtau;
        const cplx dr = (traj.log_r[i + 1] - traj.log_r[i - 1]) / dtau;
        const cplx d12 = (s12[i + 1] - s12[i - 1]) / dtau;
        const cplx lhs = d1 * d2;
        const cplx rhs = dr * d12;
        out.push_back(std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs)));
    }
    return out;
}

std::vector<double> substituted_identity_residual(const Trajectory& traj, int j1, int j2,
                                                  const EllipticOpts& opts) {
    require_tracer(traj, j1, "substituted_identity_residual");
    require_tracer(traj, j2, "substituted_identity_residual");
    if (j1 == j2) throw DegeneratePair("substituted_identity_residual: identical tracers");
    std::vector<double> out;
    out.reserve(traj.num_samples());
    for (int i = 0; i < traj.num_samples(); ++i) {
        const ModularParam m(traj.tau[i]);
        const cplx xi = traj.xi[i];
        const cplx u1 = traj.tracer_std(i, j1);
        const cplx u2 = traj.tracer_std(i, j2);
        const cplx t40 = theta_const(4, m, opts.trunc);
        const cplx c = kPi * kPi * (t40 * t40) * (t40 * t40);
        const cplx lhs = (S_prime(u1, m, opts) * phi_pair(u1 + xi, xi, m, opts) + c) *
                         (S_prime(u2, m, opts) * phi_pair(u2 + xi, xi, m, opts) + c);
        const cplx spxi = S_prime(xi, m, opts);
        const cplx rhs = spxi * spxi *
                         (S_prime(u1 - u2, m, opts) * phi_pair(u1 + xi, u2 + xi, m, opts) + c);
        out.push_back(std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs)));
    }
    return out;
}

namespace {

void require_painleve(const Trajectory& traj, int j, const char* who) {
    require_tracer(traj, j, who);
    if (traj.normalization != Normalization::painleve)
        throw InvalidArgument(std::string(who) + ": needs the painleve normalization");
    if (!traj.driving.is_constant())
        throw InvalidArgument(std::string(who) + ": needs constant driving");
}

} // namespace

std::vector<double> painleve_residual(const Trajectory& traj, int j,
                                      const EllipticOpts& opts) {
    require_painleve(traj, j, "painleve_residual");
    std::vector<double> out;
    out.reserve(traj.num_samples() - 2);
    for (int i = 1; i + 1 < traj.num_samples(); ++i) {
        const ModularParam m(traj.tau[i]);
        const cplx h = traj.tau[i + 1] - traj.tau[i];
        const cplx dd =
            (traj.tracers[i + 1][j] - 2.0 * traj.tracers[i][j] + traj.tracers[i - 1][j]) /
            (h * h);
        const cplx lhs = (2.0 * kPi * kI) * (2.0 * kPi * kI) * dd;
        const cplx rhs = 0.5 * wp_prime(traj.tracers[i][j] + traj.xi[i], m, opts);
        out.push_back(std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
    }
    return out;
}

std::vector<double> heat_residual(const Trajectory& traj, int j, const EllipticOpts& opts) {
    require_painleve(traj, j, "heat_residual");
    const int n = traj.num_samples();
    std::vector<cplx> f(n);
    for (int i = 0; i < n; ++i)
        f[i] = eisenstein(1, traj.tracers[i][j] + traj.xi[i], ModularParam(traj.tau[i]), opts);
    std::vector<double> out;
    out.reserve(n - 2);
    for (int i = 1; i + 1 < n; ++i) {
        const ModularParam m(traj.tau[i]);
        const cplx fd = (f[i + 1] - f[i - 1]) / (traj.tau[i + 1] - traj.tau[i - 1]);
        const cplx rhs = eisenstein_du(1, traj.tracers[i][j] + traj.xi[i], m, 2, opts);
        out.push_back(std::abs(4.0 * kPi * kI * fd - rhs) / (1.0 + std::abs(rhs)));
    }
    return out;
}

cplx log_r_quadrature(const TauPath& path, const DrivingFunction& drv, int panels,
                      const EllipticOpts& opts) {
    // 8-point Gauss-Legendre nodes/weights on [-1, 1]
    static const double kNodes[8] = {-0.9602898564975363, -0.7966664774136267,
                                     -0.5255324099163290, -0.1834346424956498,
                                     0.1834346424956498,  0.5255324099163290,
                                     0.7966664774136267,  0.9602898564975363};
    static const double kWeights[8] = {0.1012285362903763, 0.2223810344533745,
                                       0.3137066458778873, 0.3626837833783620,
                                       0.3626837833783620, 0.3137066458778873,
                                       0.2223810344533745, 0.1012285362903763};
    if (panels < 1) throw InvalidArgument("log_r_quadrature: panels must be >= 1");
    cplx acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = static_cast<double>(p) / panels;
        const double half = 0.5 / panels;
        for (int q = 0; q < 8; ++q) {
            const double s = a + half * (1.0 + kNodes[q]);
            const ModularParam m(path.at(s));
            const cplx sp = S_prime(drv(s, path.at(s)), m, opts);
            acc += kWeights[q] * half * sp * sp;
        }
    }
    return acc * path.delta() / (4.0 * kPi * kI);
}

} // namespace ddkp
