#include "ddkp/hodograph.hpp"

#include <cmath>
#include <sstream>

#include "detail.hpp"

namespace ddkp {

using detail::kI;
using detail::kPi;

namespace {

constexpr double kRootTol = 1e-12;   // polish target for the objective
constexpr double kRootContract = 1e-10; // guaranteed residual on success

TruncatedSeries seed_series(int N, double gamma0) {
    TruncatedSeries s(N);
    s.set_coeff(1, gamma0 / kPi);
    return s;
}

} // namespace

SpeedTable::SpeedTable(const DrivingFunction& drv, double y_lo, double y_hi, int K, int N,
                       double gamma0, int prepass_steps, const EvolveOptions& opts)
    : drv_(drv), y_lo_(y_lo), y_hi_(y_hi), K_(K), opts_(opts) {
    if (drv.kind() == DrivingFunction::Kind::sampled)
        throw InvalidArgument("SpeedTable: sampled driving is tied to a single path; "
                              "use constant or closed-form driving");
    if (!(y_hi > y_lo) || !(y_lo > 0.0))
        throw InvalidArgument("SpeedTable: need 0 < y_lo < y_hi");
    if (K < 1 || K > N - 2)
        throw InvalidArgument("SpeedTable: need 1 <= K <= N - 2");
    opts_.normalization = Normalization::standard;
    const TauPath path(cplx(0.0, y_lo), cplx(0.0, y_hi), prepass_steps);
    prepass_ = evolve(path, drv_, {}, seed_series(N, gamma0), opts_);
}

TruncatedSeries SpeedTable::series_at(double y) const {
    if (y < y_lo_ - 1e-12 || y > y_hi_ + 1e-12)
        throw OutOfRange("SpeedTable: query outside the pre-pass bracket");
    const double s = std::clamp((y - y_lo_) / (y_hi_ - y_lo_), 0.0, 1.0);
    const int steps = prepass_.num_samples() - 1;
    const int idx = std::min(static_cast<int>(s * steps), steps);
    const double s_idx = static_cast<double>(idx) / steps;
    const TruncatedSeries& base = prepass_.series[idx];
    if (std::abs(s - s_idx) < 1e-15) return base;
    // partial RK4 step from the stored grid state to the query point
    const int from = std::min(idx, steps - 1);
    const TruncatedSeries& state = prepass_.series[from];
    const TauPath part(prepass_.tau[from], cplx(0.0, y), 1);
    const Trajectory t = evolve(part, drv_, {}, state, opts_);
    return t.series.back();
}

cplx SpeedTable::xi_at(double y) const {
    const double s = std::clamp((y - y_lo_) / (y_hi_ - y_lo_), 0.0, 1.0);
    return drv_(s, cplx(0.0, y));
}

std::vector<cplx> SpeedTable::phi(double y) const {
    const TruncatedSeries s = series_at(y);
    const ModularParam m{cplx(0.0, y)};
    EllipticOpts eopts;
    eopts.pole_guard = opts_.pole_guard;
    eopts.trunc = opts_.trunc;
    return phi_k(xi_at(y), s, m, K_, eopts);
}

namespace {

double objective(const HodographProblem& prob, const TimeVector& t, const SpeedTable& table,
                 double y) {
    if (static_cast<int>(t.tk.size()) < table.speeds())
        throw InvalidArgument("hodograph objective: time vector shorter than K");
    const std::vector<cplx> phi = table.phi(y);
    double acc = prob.include_t0 ? t.t0 : 0.0;
    for (int k = 0; k < table.speeds(); ++k) {
        if (std::abs(phi[k].imag()) > 1e-8 * (1.0 + std::abs(phi[k])))
            throw Error("hodograph objective: speeds not real on the imaginary axis");
        acc += t.tk[k] * phi[k].real();
    }
    if (prob.Phi) acc -= prob.Phi(y);
    return acc;
}

} // namespace

HodographResult hodograph_solve(const HodographProblem& prob, const TimeVector& t,
                                double y_lo, double y_hi, const SpeedTable* table) {
    std::optional<SpeedTable> own;
    if (!table) {
        own.emplace(prob.drv, y_lo, y_hi, prob.K, prob.N, prob.gamma0, prob.prepass_steps,
                    prob.evolve);
        table = &*own;
    }
    if (y_lo < table->y_lo() - 1e-12 || y_hi > table->y_hi() + 1e-12)
        throw OutOfRange("hodograph_solve: bracket outside the speed table");

    double lo = y_lo, hi = y_hi;
    double g_lo = objective(prob, t, *table, lo);
    double g_hi = objective(prob, t, *table, hi);
    double scale = 1.0 + std::abs(t.t0);
    for (double v : t.tk) scale += std::abs(v);

    if (std::abs(g_lo) < 1e-13 * scale && std::abs(g_hi) < 1e-13 * scale)
        throw NoSignChange("hodograph_solve: objective degenerate on the bracket "
                           "(every tau solves; the input is degenerate)");
    if (g_lo == 0.0) { lo = std::nexttoward(lo, hi); g_lo = objective(prob, t, *table, lo); }
    if (g_lo * g_hi > 0.0)
        throw NoSignChange("hodograph_solve: objective does not change sign on the bracket");

    int iters = 0;
    for (int it = 0; it < 80 && (hi - lo) > 1e-13 * (1.0 + std::abs(hi)); ++it, ++iters) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = objective(prob, t, *table, mid);
        if ((g_mid <= 0.0) == (g_lo <= 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    double y = 0.5 * (lo + hi);
    double g = objective(prob, t, *table, y);
    const double dy_fd = 1e-6 * (1.0 + std::abs(y));
    for (int it = 0; it < 12 && std::abs(g) > kRootTol * scale; ++it, ++iters) {
        const double gp = objective(prob, t, *table, std::min(y + dy_fd, table->y_hi()));
        const double gm = objective(prob, t, *table, std::max(y - dy_fd, table->y_lo()));
        const double dg = (gp - gm) / (std::min(y + dy_fd, table->y_hi()) -
                                       std::max(y - dy_fd, table->y_lo()));
        if (!(std::abs(dg) > 0.0)) break;
        double y_next = y - g / dg;
        y_next = std::clamp(y_next, table->y_lo(), table->y_hi());
        y = y_next;
        g = objective(prob, t, *table, y);
    }
    if (std::abs(g) > kRootContract * scale) {
        std::ostringstream os;
        os << "hodograph_solve: residual " << std::abs(g) << " above contract "
           << kRootContract * scale;
        throw NoConvergence(os.str());
    }

    HodographResult res;
    res.y_root = y;
    res.tau_root = cplx(0.0, y);
    res.residual = std::abs(g);
    res.iterations = iters;
    for (const cplx& p : table->phi(y)) res.phi_at_root.push_back(p.real());
    return res;
}

double hydrodynamic_residual(const HodographProblem& prob, const TimeVector& t, int k,
                             double h, double y_lo, double y_hi, const SpeedTable* table) {
    if (k < 1 || k > prob.K)
        throw InvalidArgument("hydrodynamic_residual: k out of range");
    if (!prob.include_t0)
        throw InvalidArgument("hydrodynamic_residual: needs the t0-inclusive form "
                              "(dtau/dt0 vanishes otherwise)");
    std::optional<SpeedTable> own;
    if (!table) {
        own.emplace(prob.drv, y_lo, y_hi, prob.K, prob.N, prob.gamma0, prob.prepass_steps,
                    prob.evolve);
        table = &*own;
    }
    const HodographResult center = hodograph_solve(prob, t, y_lo, y_hi, table);

    const auto root_at = [&](double dt0, int kk, double dtk) {
        TimeVector tp = t;
        tp.t0 += dt0;
        if (kk >= 1) tp.tk[kk - 1] += dtk;
        return hodograph_solve(prob, tp, y_lo, y_hi, table).y_root;
    };
    const double dy_k = (root_at(0.0, k, h) - root_at(0.0, k, -h)) / (2.0 * h);
    const double dy_0 = (root_at(h, 0, 0.0) - root_at(-h, 0, 0.0)) / (2.0 * h);
    const double phi_k_root = center.phi_at_root[k - 1];
    return std::abs(dy_k - phi_k_root * dy_0) / (std::abs(dy_k) + 1e-12);
}

double generating_residual(const HodographProblem& prob, const TimeVector& t, cplx z,
                           double h, double y_lo, double y_hi, const SpeedTable* table) {
    if (!prob.include_t0)
        throw InvalidArgument("generating_residual: needs the t0-inclusive form");
    std::optional<SpeedTable> own;
    if (!table) {
        own.emplace(prob.drv, y_lo, y_hi, prob.K, prob.N, prob.gamma0, prob.prepass_steps,
                    prob.evolve);
        table = &*own;
    }
    const HodographResult center = hodograph_solve(prob, t, y_lo, y_hi, table);
    const double y0 = center.y_root;

    const auto root_at = [&](double dt0, int kk, double dtk) {
        TimeVector tp = t;
        tp.t0 += dt0;
        if (kk >= 1) tp.tk[kk - 1] += dtk;
        return hodograph_solve(prob, tp, y_lo, y_hi, table).y_root;
    };
    const cplx dtau_0 = kI * (root_at(h, 0, 0.0) - root_at(-h, 0, 0.0)) / (2.0 * h);
    cplx grad = dtau_0;
    for (int k = 1; k <= prob.K; ++k) {
        const cplx dtau_k = kI * (root_at(0.0, k, h) - root_at(0.0, k, -h)) / (2.0 * h);
        grad += std::pow(z, -k) * dtau_k / static_cast<double>(k);
    }

    const TruncatedSeries series = table->series_at(y0);
    const ModularParam m{cplx(0.0, y0)};
    EllipticOpts eopts;
    const cplx xi = table->xi_at(y0);
    const cplx u_z = series.eval(z);
    const cplx ratio = S_prime(u_z + xi, m, eopts) / S_prime(xi, m, eopts);
    return std::abs(grad - ratio * dtau_0) / (std::abs(grad) + 1e-12);
}

} // namespace ddkp
