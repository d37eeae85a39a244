#include <algorithm>
#include <cmath>
#include <cstdio>

#include "epenc/complextime.hpp"

namespace epenc {

namespace {

constexpr cplx kI{0.0, 1.0};

std::string fmt_root(cplx z)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
    return buf;
}

// Real-axis leg from -X to xe, stepping around roots that lie within rho of
// the axis on the side away from them (homotopic to the axis itself).
void real_leg(std::vector<cplx>& v, double x0, double xe, const std::vector<cplx>& others, double rho)
{
    std::vector<cplx> near;
    for (const cplx& r : others)
        if (std::abs(r.imag()) < rho && r.real() > x0 + rho && r.real() < xe - rho) near.push_back(r);
    std::sort(near.begin(), near.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    v.emplace_back(x0, 0.0);
    for (const cplx& r : near) {
        const double side = r.imag() > 0.0 ? -1.0 : (r.imag() < 0.0 ? 1.0 : -1.0);
        const double off = side * (rho + std::abs(r.imag()));
        v.emplace_back(r.real() - rho, 0.0);
        v.emplace_back(r.real() - rho, off);
        v.emplace_back(r.real() + rho, off);
        v.emplace_back(r.real() + rho, 0.0);
    }
    v.emplace_back(xe, 0.0);
}

cplx tracked_integral(const ContourShape& sh, const quad::Path& path, cplx w_start, const quad::QuadOptions& qo,
                      cplx* w_end = nullptr)
{
    auto disc = [&](cplx z) { return sh.discriminant(z); };
    const auto r = quad::integrate_tracked(disc, [](cplx, cplx w, cplx) { return w; }, path, w_start, qo);
    if (w_end) *w_end = r.w_end;
    return r.value;
}

bool in_triangle(cplx p, cplx a, cplx b, cplx c)
{
    auto cross = [](cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
    const double d1 = cross(b - a, p - a), d2 = cross(c - b, p - b), d3 = cross(a - c, p - c);
    const bool neg = d1 < 0 || d2 < 0 || d3 < 0, pos = d1 > 0 || d2 > 0 || d3 > 0;
    return !(neg && pos);
}

}  // namespace

cplx sigma_k(const ContourShape& sh, cplx t_k, const std::vector<cplx>& other_roots, const SigmaOptions& opts)
{
    const double X = opts.x_span;
    const double rho = opts.detour_radius;
    std::vector<cplx> others;
    for (const cplx& r : other_roots) {
        const double d = std::abs(r - t_k);
        if (d < 1e-12) continue;
        if (d < 1e-7)
            throw NumericalError("roots " + fmt_root(t_k) + " and " + fmt_root(r) +
                                 " nearly coincide; the sigma path cannot avoid their branch cut");
        others.push_back(r);
    }
    if (std::abs(t_k.real()) >= X) throw InputError("root lies outside the integration window");

    const cplx w_start = continue_sqrt(sh.discriminant(-X), sh.delta(-X));

    // Full real-axis phase, the reference for the final-state normalization.
    std::vector<cplx> full;
    real_leg(full, -X, X, others, rho);
    if (std::abs(t_k.imag()) < rho) {
        // the target itself sits on or next to the axis: step around it too
        std::vector<cplx> with_target = others;
        with_target.push_back(t_k);
        full.clear();
        real_leg(full, -X, X, with_target, rho);
    }
    const cplx w_tot = tracked_integral(sh, quad::polyline(full), w_start, opts.quad);

    std::vector<cplx> v;
    if (opts.path == SigmaPath::Straight) {
        for (const cplx& r : others)
            if (in_triangle(r, cplx(-X, 0.0), cplx(t_k.real(), 0.0), t_k))
                throw InputError("straight sigma path is not homotopic: root " + fmt_root(r) +
                                 " lies between the paths");
        v = {cplx(-X, 0.0), t_k};
    } else {
        real_leg(v, -X, t_k.real(), others, rho);
        const double dir = t_k.imag() >= 0.0 ? 1.0 : -1.0;
        std::vector<cplx> blocking;
        for (const cplx& r : others) {
            const double along = (r.imag() - 0.0) * dir;
            if (std::abs(r.real() - t_k.real()) < rho && along > 0.0 && along < std::abs(t_k.imag()))
                blocking.push_back(r);
        }
        std::sort(blocking.begin(), blocking.end(),
                  [dir](cplx a, cplx b) { return a.imag() * dir < b.imag() * dir; });
        for (const cplx& r : blocking) {
            const double rj = std::min(rho, 0.4 * std::abs(r - t_k));
            if (rj < 1e-7)
                throw NumericalError("roots " + fmt_root(t_k) + " and " + fmt_root(r) +
                                     " nearly coincide; the sigma path cannot avoid their branch cut");
            const double xd = std::max(t_k.real(), r.real()) + rj;
            v.emplace_back(t_k.real(), r.imag() - dir * rj);
            v.emplace_back(xd, r.imag() - dir * rj);
            v.emplace_back(xd, r.imag() + dir * rj);
            v.emplace_back(t_k.real(), r.imag() + dir * rj);
        }
        v.push_back(t_k);
    }
    const cplx w_k = tracked_integral(sh, quad::polyline(v, true), w_start, opts.quad);
    return sh.gamma_ratio * X - 0.5 * kI * w_tot + kI * w_k;
}

cplx sigma_k(const SystemParams& sys, const PulseParams& p, const DynamicalEP& ep,
             const std::vector<cplx>& other_roots, const SigmaOptions& opts)
{
    SigmaOptions o = opts;
    o.x_span = p.t_span;
    return sigma_k(ContourShape::from(sys, p), ep.t_k, other_roots, o);
}

void attach_sigmas(const ContourShape& sh, RootSearchReport& rep, const SigmaOptions& opts)
{
    std::vector<cplx> all;
    for (const auto& r : rep.roots) all.push_back(r.t_k);
    for (auto& r : rep.roots) {
        if (std::abs(r.t_k.real()) >= opts.x_span) continue;
        try {
            r.sigma_k = sigma_k(sh, r.t_k, all, opts);
        } catch (const NumericalError& e) {
            rep.warnings.emplace_back(std::string("sigma not computed: ") + e.what());
        }
    }
}

std::vector<int> leading_roots(const RootSearchReport& rep, int k)
{
    std::vector<int> idx;
    for (int i = 0; i < int(rep.roots.size()); ++i)
        if (rep.roots[i].sigma_k && rep.roots[i].sigma_k->real() > 0.0) idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return rep.roots[a].sigma_k->real() < rep.roots[b].sigma_k->real();
    });
    if (int(idx.size()) > k) idx.resize(k);
    return idx;
}

}  // namespace epenc
