#include "epenc/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace epenc {

namespace {

constexpr cplx kI{0.0, 1.0};

}  // namespace

cplx nonadiabatic_coupling(const SystemParams& sys, const PulseParams& p, cplx t, double tol_ep)
{
    if (p.eps0_max == 0.0) return {0.0, 0.0};
    const auto fp = pulse_at(sys, p, t);
    const double scale = p.eps0_max * std::abs(sys.mu.real());
    const cplx f = (fp.delta + kI * fp.omega_rabi) * (fp.delta - kI * fp.omega_rabi);
    if (std::abs(f) < tol_ep * scale * scale)
        throw NumericalError("dynamical EP pole: |Delta^2 + Omega^2| below tol_ep at t/tau = " +
                             std::to_string(t.real() / p.tau) + (t.imag() < 0 ? "" : "+") +
                             std::to_string(t.imag() / p.tau) + "i");
    if (fp.delta == cplx(0.0, 0.0)) throw NumericalError("coupling undefined where Delta = 0");
    const cplx d_omega = -(t / (p.tau * p.tau)) * fp.omega_rabi;
    const double d_delta = 0.5 * p.alpha * p.eps0_max * sys.mu.real() / p.tau;
    const cplx u = fp.omega_rabi / fp.delta;
    const cplx du = (d_omega * fp.delta - fp.omega_rabi * d_delta) / (fp.delta * fp.delta);
    return du / (4.0 * kI) * (1.0 / (kI + u) + 1.0 / (kI - u));
}

double min_real_axis_discriminant(const ContourShape& sh, double x_span)
{
    constexpr int n = 4001;
    auto mag = [&](double x) { return std::abs(sh.discriminant(x)); };
    std::vector<double> v(n);
    const double h = 2.0 * x_span / (n - 1);
    for (int i = 0; i < n; ++i) v[i] = mag(-x_span + h * i);
    double best = std::min(v.front(), v.back());
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int i = 1; i + 1 < n; ++i) {
        if (!(v[i] <= v[i - 1] && v[i] <= v[i + 1])) continue;
        double a = -x_span + h * (i - 1), b = -x_span + h * (i + 1);
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = mag(c), fd = mag(d);
        for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = mag(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = mag(d);
            }
        }
        best = std::min({best, v[i], fc, fd});
    }
    return best;
}

FirstOrderResult a_plus_first_order(const ContourShape& sh, double kappa, double X, const PerturbationOptions& opts)
{
    if (!(X > 0.0) || !(kappa >= 0.0)) throw InputError("a_plus_first_order needs x_span > 0 and kappa >= 0");
    const double fmin = min_real_axis_discriminant(sh, X);
    if (fmin < opts.tol_ep) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3g", fmin);
        throw NumericalError(std::string("contour pinches a dynamical EP; perturbative integral singular (min |f| = ") +
                             buf + " on the real axis)");
    }

    auto disc = [&](cplx z) { return sh.discriminant(z); };
    const cplx w_start = continue_sqrt(sh.discriminant(-X), sh.delta(-X));
    const quad::Path path = quad::polyline({cplx(-X, 0.0), cplx(X, 0.0)});

    FirstOrderResult res;
    // Pass one: full phase, fixes the normalization of the exponent.
    quad::QuadOptions qo = opts.quad;
    const auto full = quad::integrate_tracked(disc, [](cplx, cplx w, cplx) { return w; }, path, w_start, qo);
    const cplx w_tot = full.value;
    const cplx q_plus_tot = kI * sh.gamma_ratio * X + 0.5 * w_tot;
    const cplx q_minus_tot = kI * sh.gamma_ratio * X - 0.5 * w_tot;

    auto integrand = [&](cplx z, cplx, cplx W) {
        return -sh.coupling(z) * std::exp(kI * kappa * (q_plus_tot - W));
    };
    const auto amp = quad::integrate_tracked(disc, integrand, path, w_start, qo, true);

    res.a_plus = amp.value;
    res.p_bound_pert = std::norm(res.a_plus);
    res.adiabatic_survival = std::exp(-2.0 * kappa * q_minus_tot.imag());
    res.exchange = std::abs(amp.w_end + sh.delta(X)) < std::abs(amp.w_end - sh.delta(X));
    res.phase_total = -kappa * w_tot;
    res.error_estimate = amp.error + kappa * amp.primitive_error * std::abs(res.a_plus) +
                         kappa * full.error * std::abs(res.a_plus);
    res.evaluations = full.evaluations + amp.evaluations;

    if (opts.phase_samples > 0) {
        const int n = std::max(opts.phase_samples, 2);
        res.phase_samples.reserve(n);
        res.phase_samples.push_back({-X, cplx(0.0, 0.0)});
        cplx w = w_start, acc{0.0, 0.0};
        for (int i = 1; i < n; ++i) {
            const double a = -X + 2.0 * X * (i - 1) / (n - 1);
            const double b = -X + 2.0 * X * i / (n - 1);
            quad::QuadOptions so = qo;
            so.initial_panels = 1;
            const auto piece = quad::integrate_tracked(disc, [](cplx, cplx ww, cplx) { return ww; },
                                                       quad::polyline({cplx(a, 0.0), cplx(b, 0.0)}), w, so);
            acc += piece.value;
            w = piece.w_end;
            res.phase_samples.push_back({b, -kappa * acc});
        }
    }
    return res;
}

FirstOrderResult a_plus_first_order(const SystemParams& sys, const PulseParams& p, const PerturbationOptions& opts)
{
    sys.validate();
    p.validate();
    if (p.eps0_max == 0.0) {
        FirstOrderResult r;
        r.adiabatic_survival = 1.0;
        if (opts.phase_samples > 0) {
            const int n = std::max(opts.phase_samples, 2);
            for (int i = 0; i < n; ++i) {
                const double x = -p.t_span + 2.0 * p.t_span * i / (n - 1);
                r.phase_samples.push_back({x, -kI * 0.5 * sys.gamma * p.tau * (x + p.t_span)});
            }
        }
        r.phase_total = -kI * sys.gamma * p.tau * p.t_span;
        return r;
    }
    const ContourShape sh = ContourShape::from(sys, p);
    const double kappa = p.tau * p.eps0_max * std::abs(sys.mu.real());
    FirstOrderResult r = a_plus_first_order(sh, kappa, p.t_span, opts);
    return r;
}

}  // namespace epenc
