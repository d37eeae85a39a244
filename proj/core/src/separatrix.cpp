#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "epenc/complextime.hpp"

namespace epenc {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::optional<cplx> newton(const ContourShape& sh, cplx x, std::optional<cplx> deflate = std::nullopt)
{
    for (int it = 0; it < 200; ++it) {
        cplx f = sh.discriminant(x);
        cplx fp = sh.discriminant_prime(x);
        if (deflate) {
            const cplx d = x - *deflate;
            fp = (fp * d - f) / (d * d);
            f = f / d;
        }
        if (fp == cplx(0.0, 0.0)) return std::nullopt;
        const cplx dx = f / fp;
        x -= dx;
        if (!finite(x) || std::abs(x) > 50.0) return std::nullopt;
        if (std::abs(dx) <= 1e-15 * (1.0 + std::abs(x))) break;
    }
    if (!(std::abs(sh.discriminant(x)) < 1e-11)) return std::nullopt;
    return x;
}

std::optional<std::pair<cplx, cplx>> track(const ContourShape& sh, cplx a_pred, cplx b_pred, double sep_prev)
{
    auto a = newton(sh, a_pred);
    auto b = newton(sh, b_pred);
    if (!a || !b) return std::nullopt;
    const double limit = std::max(0.25 * sep_prev, 1e-6);
    if (std::abs(*a - a_pred) > limit || std::abs(*b - b_pred) > limit) return std::nullopt;
    if (std::abs(*a - *b) < 1e-9) return std::nullopt;
    return std::pair{*a, *b};
}

SeparatrixPoint solve_one(const SystemParams& sys, double alpha, double phi, const SeparatrixOptions& o)
{
    SeparatrixPoint pt;
    pt.alpha = alpha;
    pt.phi = phi;
    pt.method = "pair-tracking+bisection";

    auto shape = [&](double r) { return ContourShape::from_ratio(sys, r, alpha); };

    // Initial pair: the two roots nearest to the origin at the lowest ratio.
    SearchRegion reg = o.region;
    reg.adaptive = false;
    const auto rep = find_dynamical_eps(shape(o.ratio_min), reg);
    if (rep.roots.size() < 2) throw NumericalError("fewer than two dynamical EPs at the lowest ratio");
    std::vector<cplx> rs;
    for (const auto& r : rep.roots) rs.push_back(r.t_k);
    std::sort(rs.begin(), rs.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    cplx a = rs[0], b = rs[1];
    cplx a_prev = a, b_prev = b;
    double r_prev = o.ratio_min;
    double g_prev = coalescence_indicator({a, b, 0.5 * (a + b)});
    if (g_prev >= 0.0)
        throw NumericalError("no coalescence in range: pair already split at eps ratio " + std::to_string(o.ratio_min));

    const double growth = std::pow(o.ratio_max / o.ratio_min, 1.0 / std::max(o.scan_points - 1, 1));
    double step = growth;
    double r = r_prev;
    bool bracketed = false;
    double r_lo = 0.0, r_hi = 0.0;
    cplx lo_a{}, lo_b{};
    double g_lo = 0.0, g_hi = 0.0;
    int guard = 0;
    while (r < o.ratio_max && ++guard < 100000) {
        const double r_new = std::min(r * step, o.ratio_max);
        const ContourShape sh = shape(r_new);
        const double t = (r_new - r) / std::max(r - r_prev, 1e-300);
        const cplx a_pred = r == r_prev ? a : a + (a - a_prev) * t;
        const cplx b_pred = r == r_prev ? b : b + (b - b_prev) * t;
        const double sep = std::abs(a - b);
        std::optional<std::pair<cplx, cplx>> next = track(sh, a_pred, b_pred, sep);
        if (!next && sep < 0.3) {
            const RootPair pp = coalescing_pair(sh, 0.5 * (a + b));
            if (std::abs(pp.a - pp.b) < 4.0 * sep + 1e-6 && std::abs(0.5 * (pp.a + pp.b) - 0.5 * (a + b)) < 0.3)
                next = std::pair{pp.a, pp.b};
        }
        if (!next) {
            step = std::sqrt(step);
            if (step - 1.0 < 1e-12)
                throw NumericalError("lost track of the coalescing pair at alpha = " + std::to_string(alpha));
            continue;
        }
        const double g = coalescence_indicator({next->first, next->second, 0.5 * (next->first + next->second)});
        if (g >= 0.0) {
            bracketed = true;
            r_lo = r;
            r_hi = r_new;
            lo_a = a;
            lo_b = b;
            g_lo = coalescence_indicator({a, b, 0.5 * (a + b)});
            g_hi = g;
            break;
        }
        a_prev = a;
        b_prev = b;
        r_prev = r;
        a = next->first;
        b = next->second;
        r = r_new;
        step = std::min(growth, step * step);
    }
    if (!bracketed)
        throw NumericalError("no coalescence in range [" + std::to_string(o.ratio_min) + ", " +
                             std::to_string(o.ratio_max) + "] at alpha = " + std::to_string(alpha));

    cplx centre = 0.5 * (lo_a + lo_b);
    int it = 0;
    while (r_hi - r_lo > o.ratio_tol * r_hi && it < 200) {
        ++it;
        const double rm = 0.5 * (r_lo + r_hi);
        const RootPair pp = coalescing_pair(shape(rm), centre);
        const double g = coalescence_indicator(pp);
        centre = pp.critical_point;
        if (g < 0.0) {
            r_lo = rm;
            g_lo = g;
        } else {
            r_hi = rm;
            g_hi = g;
        }
    }
    pt.eps0_crit_ratio = 0.5 * (r_lo + r_hi);
    const RootPair fin = coalescing_pair(shape(pt.eps0_crit_ratio), centre);
    pt.t_a = fin.a;
    pt.t_b = fin.b;
    pt.s_star = 0.5 * (fin.a + fin.b).imag();
    pt.iterations = it;
    pt.indicator_below = g_lo;
    pt.indicator_above = g_hi;
    return pt;
}

}  // namespace

RootPair coalescing_pair(const ContourShape& sh, cplx seed)
{
    cplx xc = seed;
    for (int it = 0; it < 100; ++it) {
        const cplx fpp = sh.discriminant_second(xc);
        if (fpp == cplx(0.0, 0.0)) break;
        const cplx dx = sh.discriminant_prime(xc) / fpp;
        xc -= dx;
        if (!finite(xc)) throw NumericalError("critical-point iteration diverged");
        if (std::abs(dx) <= 1e-16 * (1.0 + std::abs(xc))) break;
    }
    const cplx fc = sh.discriminant(xc);
    const cplx fpp = sh.discriminant_second(xc);
    const cplx d = std::sqrt(-2.0 * fc / fpp);
    RootPair p{xc + d, xc - d, xc};
    if (std::abs(d) < 1e-7) return p;  // quadratic model is exact to rounding here
    auto a = newton(sh, xc + d);
    if (!a) return p;
    auto b = newton(sh, xc - d, *a);
    if (!b) return p;
    p.a = *a;
    p.b = *b;
    return p;
}

double coalescence_indicator(const RootPair& p)
{
    const cplx d = p.a - p.b;
    return (d * d).real();
}

std::vector<SeparatrixPoint> find_separatrix(const SystemParams& sys, const std::vector<double>& alphas, double phi,
                                             const SeparatrixOptions& opts)
{
    sys.validate();
    if (!(opts.ratio_min > 0.0) || !(opts.ratio_max > opts.ratio_min))
        throw InputError("separatrix bracket must satisfy 0 < ratio_min < ratio_max");
    std::vector<SeparatrixPoint> out(alphas.size());
    std::vector<std::exception_ptr> errors(alphas.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < alphas.size(); i = next++) {
            try {
                out[i] = solve_one(sys, alphas[i], phi, opts);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int nt = std::max(1, std::min<int>(opts.threads, int(alphas.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

OnAxisCoalescence on_axis_coalescence(double alpha, double chirp_sign)
{
    // On x = i s with real unit dipole: F(s) = exp(s^2) - (g + c s)^2, c = chirp_sign * alpha / 2.
    // F = F' = 0 gives g + c s = exp(s^2 / 2) and c = s exp(s^2 / 2).
    const double c = chirp_sign * alpha / 2.0;
    double s = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double e = std::exp(0.5 * s * s);
        const double h = s * e - c;
        const double hp = e * (1.0 + s * s);
        const double ds = h / hp;
        s -= ds;
        if (std::abs(ds) < 1e-16) break;
    }
    const double g = std::exp(0.5 * s * s) - c * s;
    return {1.0 / g, s};
}

}  // namespace epenc
