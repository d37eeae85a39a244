#include "epenc/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace epenc {

namespace {

constexpr cplx kI{0.0, 1.0};

std::vector<double> sample_grid(double span, int n)
{
    std::vector<double> xs(std::max(n, 2));
    const int m = int(xs.size()) - 1;
    for (int i = 0; i <= m; ++i) xs[i] = -span + 2.0 * span * double(i) / m;
    return xs;
}

void copy_stats(const OdeStats& s, PropagationStats& out)
{
    out.steps = s.steps;
    out.rejected = s.rejected;
    out.evaluations = s.evaluations;
    out.max_local_error = s.max_local_error;
    out.error_estimate = s.error_estimate;
}

}  // namespace

PropagationResult propagate_diabatic(const SystemParams& sys, const PulseParams& p, const PropagationOptions& opts)
{
    sys.validate();
    p.validate();
    const double X = p.t_span;
    const double tau = p.tau;
    const cplx omega0 = sys.mu * p.eps0_max;
    const double chirp = 0.5 * p.alpha * p.eps0_max * sys.mu.real();
    const double half_gamma = 0.5 * sys.gamma;

    // d c / dx = i tau H(x) c
    auto rhs = [&](double x, const CState<2>& c) {
        const cplx half_omega = 0.5 * omega0 * std::exp(-0.5 * x * x);
        const cplx delta(chirp * x, half_gamma);
        return CState<2>{kI * tau * (half_omega * c[1]), kI * tau * (half_omega * c[0] + delta * c[1])};
    };

    PropagationResult res;
    std::vector<double> out;
    if (opts.record_trajectory) {
        out = sample_grid(X, opts.trajectory_samples);
        res.trajectory.resize(out.size());
    } else {
        out = {X};
    }

    cplx w_prev{0.0, 0.0};
    bool have_prev = false;
    auto observe = [&](std::size_t i, double x, const CState<2>& c) {
        if (!opts.record_trajectory) return;
        const cplx delta(chirp * x, half_gamma);
        const cplx omega = omega0 * std::exp(-0.5 * x * x);
        const cplx f = (delta + kI * omega) * (delta - kI * omega);
        const cplx w = have_prev ? continue_sqrt(f, w_prev) : continue_sqrt(f, delta);
        w_prev = w;
        have_prev = true;
        res.trajectory[i] = {x, c[0], c[1], -w};
    };

    OdeStats st;
    const CState<2> c = integrate_dop853<2>(rhs, -X, CState<2>{cplx(1.0, 0.0), cplx(0.0, 0.0)},
                                            std::span<const double>(out), observe, opts.ode, &st);
    copy_stats(st, res.stats);
    res.final_state = {c[0], c[1], X * tau};
    res.p_bound = std::norm(c[0]);
    return res;
}

std::pair<AdiabaticAmplitudes, PropagationResult>
propagate_adiabatic(const SystemParams& sys, const PulseParams& p, const PropagationOptions& opts)
{
    sys.validate();
    p.validate();
    if (p.eps0_max == 0.0) {
        PropagationResult r = propagate_diabatic(sys, p, opts);
        AdiabaticAmplitudes a;
        a.phase_integral = cplx(0.0, 0.5 * sys.gamma) * (-2.0 * p.t_span * p.tau);
        return {a, r};
    }
    const ContourShape sh = ContourShape::from(sys, p);
    const double kappa = p.tau * p.eps0_max * std::abs(sys.mu.real());
    const double X = p.t_span;
    const double rabi_max = std::abs(sh.dipole_ratio);
    double min_w = std::numeric_limits<double>::infinity();

    // y = (b_minus, b_plus, theta, Q_minus, Q_plus); b = a exp(i Q), Q = int eps dt.
    auto rhs = [&](double x, const CState<5>& y) {
        const cplx d = sh.delta(x);
        const cplx o = sh.rabi(x);
        const cplx th2 = 2.0 * y[2];
        const cplx w = d * std::cos(th2) + o * std::sin(th2);
        min_w = std::min(min_w, std::abs(w) / rabi_max);
        const cplx em = 0.5 * (d - w), ep = 0.5 * (d + w);
        const cplx n = sh.coupling(x);
        return CState<5>{kI * kappa * em * y[0] + n * y[1], kI * kappa * ep * y[1] - n * y[0], -n, kappa * em,
                         kappa * ep};
    };

    const cplx theta0 = 0.5 * std::atan(sh.rabi(-X) / sh.delta(-X));
    PropagationResult res;
    std::vector<double> out;
    if (opts.record_trajectory) {
        out = sample_grid(X, opts.trajectory_samples);
        res.trajectory.resize(out.size());
    } else {
        out = {X};
    }
    const double split_scale = p.eps0_max * std::abs(sys.mu.real());
    auto observe = [&](std::size_t i, double x, const CState<5>& y) {
        if (!opts.record_trajectory) return;
        const cplx ct = std::cos(y[2]), st = std::sin(y[2]);
        const cplx th2 = 2.0 * y[2];
        const cplx w = sh.delta(x) * std::cos(th2) + sh.rabi(x) * std::sin(th2);
        res.trajectory[i] = {x, y[0] * ct + y[1] * st, -y[0] * st + y[1] * ct, -w * split_scale};
    };

    OdeStats ost;
    // Exact projection of c = (1, 0) onto the initial adiabatic basis.
    CState<5> y{std::cos(theta0), std::sin(theta0), theta0, cplx(0.0, 0.0), cplx(0.0, 0.0)};
    y = integrate_dop853<5>(rhs, -X, y, std::span<const double>(out), observe, opts.ode, &ost);
    copy_stats(ost, res.stats);
    res.stats.min_split = min_w;
    if (min_w < opts.tol_branch)
        throw NumericalError("adiabatic branch tracking is ambiguous: min |split|/|Omega_max| = " +
                             std::to_string(min_w) + " below tol_branch; use diabatic propagation");

    const cplx ct = std::cos(y[2]), st = std::sin(y[2]);
    const cplx cb = y[0] * ct + y[1] * st;
    const cplx cr = -y[0] * st + y[1] * ct;
    res.final_state = {cb, cr, X * p.tau};
    res.p_bound = std::norm(cb);

    AdiabaticAmplitudes a;
    a.a_minus = y[0] * std::exp(-kI * y[3]);
    a.a_plus = y[1] * std::exp(-kI * y[4]);
    a.phase_integral = y[3] - y[4];
    a.mixing_angle = y[2];
    return {a, res};
}

double survival_probability(const SystemParams& sys, const PulseParams& p, const PropagationOptions& opts)
{
    PropagationOptions o = opts;
    o.record_trajectory = false;
    return propagate_diabatic(sys, p, o).p_bound;
}

}  // namespace epenc
