#include <algorithm>
#include <cmath>
#include <cstdio>

#include "epenc/complextime.hpp"

namespace epenc {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool inside(const SearchRegion& r, cplx z, double margin = 1e-9)
{
    return z.real() >= r.re_min - margin && z.real() <= r.re_max + margin && z.imag() >= r.im_min - margin &&
           z.imag() <= r.im_max + margin;
}

std::optional<cplx> newton(const ContourShape& sh, cplx x, int max_iter = 200)
{
    for (int it = 0; it < max_iter; ++it) {
        const cplx fp = sh.discriminant_prime(x);
        if (fp == cplx(0.0, 0.0)) break;
        const cplx dx = sh.discriminant(x) / fp;
        x -= dx;
        if (!finite(x) || std::abs(x) > 50.0) return std::nullopt;
        if (std::abs(dx) <= 1e-15 * (1.0 + std::abs(x))) break;
    }
    return x;
}

cplx critical_point(const ContourShape& sh, cplx x)
{
    for (int it = 0; it < 100; ++it) {
        const cplx fpp = sh.discriminant_second(x);
        if (fpp == cplx(0.0, 0.0)) break;
        const cplx dx = sh.discriminant_prime(x) / fpp;
        x -= dx;
        if (!finite(x)) break;
        if (std::abs(dx) <= 1e-16 * (1.0 + std::abs(x))) break;
    }
    return x;
}

std::vector<DynamicalEP> multistart(const ContourShape& sh, const SearchRegion& reg, int nx, int ny)
{
    std::vector<DynamicalEP> found;
    for (int i = 0; i < nx; ++i) {
        const double xr = nx == 1 ? 0.5 * (reg.re_min + reg.re_max) : reg.re_min + (reg.re_max - reg.re_min) * i / (nx - 1);
        for (int j = 0; j < ny; ++j) {
            const double xi =
                ny == 1 ? 0.5 * (reg.im_min + reg.im_max) : reg.im_min + (reg.im_max - reg.im_min) * j / (ny - 1);
            auto r = refine_root(sh, cplx(xr, xi), reg.residual_tol);
            if (!r || !inside(reg, r->t_k)) continue;
            bool dup = false;
            for (auto& e : found) {
                if (std::abs(e.t_k - r->t_k) < reg.dedupe_tol) {
                    dup = true;
                    if (r->multiplicity > e.multiplicity) e = *r;
                    break;
                }
            }
            if (!dup) found.push_back(*r);
        }
    }
    return found;
}

void merge_into(std::vector<DynamicalEP>& acc, const std::vector<DynamicalEP>& more, double tol)
{
    for (const auto& r : more) {
        const bool dup = std::any_of(acc.begin(), acc.end(), [&](const DynamicalEP& e) {
            return std::abs(e.t_k - r.t_k) < tol;
        });
        if (!dup) acc.push_back(r);
    }
}

double arg_step(const ContourShape& sh, cplx a, cplx b, cplx fa, cplx fb, int depth)
{
    const double d = std::arg(fb / fa);
    if (std::abs(d) < 0.5 || depth > 40) return d;
    const cplx m = 0.5 * (a + b);
    const cplx fm = sh.discriminant(m);
    return arg_step(sh, a, m, fa, fm, depth + 1) + arg_step(sh, m, b, fm, fb, depth + 1);
}

}  // namespace

std::optional<DynamicalEP> refine_root(const ContourShape& sh, cplx seed, double residual_tol)
{
    auto xo = newton(sh, seed);
    if (!xo) return std::nullopt;
    cplx x = *xo;
    DynamicalEP ep;
    const cplx fpp = sh.discriminant_second(x);
    cplx fp = sh.discriminant_prime(x);
    if (std::abs(fp) < 1e-6 * std::max(1.0, std::abs(fpp))) {
        // Near a double root plain Newton converges only linearly; locate the
        // critical point of f and decide between one double or two simple roots.
        const cplx xc = critical_point(sh, x);
        const cplx fc = sh.discriminant(xc);
        if (finite(xc) && std::abs(fc) < residual_tol && std::abs(xc - x) < 1e-3) {
            ep.t_k = xc;
            ep.multiplicity = 2;
        } else if (finite(xc)) {
            const cplx d = std::sqrt(-2.0 * fc / sh.discriminant_second(xc));
            const cplx s1 = xc + d, s2 = xc - d;
            const cplx seed2 = std::abs(s1 - x) <= std::abs(s2 - x) ? s1 : s2;
            if (auto r = newton(sh, seed2)) x = *r;
            ep.t_k = x;
        } else {
            ep.t_k = x;
        }
    } else {
        ep.t_k = x;
    }
    ep.residual = std::abs(sh.discriminant(ep.t_k));
    ep.fprime_abs = std::abs(sh.discriminant_prime(ep.t_k));
    if (!(ep.residual < residual_tol)) return std::nullopt;
    return ep;
}

int count_zeros(const ContourShape& sh, const SearchRegion& reg)
{
    const std::vector<cplx> corners{{reg.re_min, reg.im_min}, {reg.re_max, reg.im_min}, {reg.re_max, reg.im_max},
                                    {reg.re_min, reg.im_max}, {reg.re_min, reg.im_min}};
    double total = 0.0;
    constexpr int n = 400;
    for (int s = 0; s < 4; ++s) {
        cplx a = corners[s];
        cplx fa = sh.discriminant(a);
        for (int i = 1; i <= n; ++i) {
            const cplx b = corners[s] + (corners[s + 1] - corners[s]) * (double(i) / n);
            const cplx fb = sh.discriminant(b);
            total += arg_step(sh, a, b, fa, fb, 0);
            a = b;
            fa = fb;
        }
    }
    return int(std::lround(total / (2.0 * kPi)));
}

RootSearchReport find_dynamical_eps(const ContourShape& sh, const SearchRegion& reg)
{
    if (reg.nx < 2 || reg.ny < 2) throw InputError("seed grid must be at least 2x2");
    if (!(reg.re_max > reg.re_min) || !(reg.im_max > reg.im_min)) throw InputError("empty search region");
    RootSearchReport rep;
    int nx = reg.nx, ny = reg.ny;
    std::vector<DynamicalEP> acc = multistart(sh, reg, nx, ny);
    std::size_t prev = acc.size();
    if (reg.adaptive) {
        for (int lvl = 0; lvl < reg.max_doublings; ++lvl) {
            nx *= 2;
            ny *= 2;
            auto more = multistart(sh, reg, nx, ny);
            const std::size_t count = more.size();
            merge_into(acc, more, reg.dedupe_tol);
            if (count == prev && acc.size() == prev) break;
            prev = acc.size();
        }
    }
    rep.nx_used = nx;
    rep.ny_used = ny;

    std::sort(acc.begin(), acc.end(), [](const DynamicalEP& a, const DynamicalEP& b) {
        const double ia = std::abs(a.t_k.imag()), ib = std::abs(b.t_k.imag());
        if (ia != ib) return ia < ib;
        return a.t_k.real() < b.t_k.real();
    });
    for (std::size_t i = 0; i < acc.size(); ++i) {
        double best = reg.pair_tol;
        int id = -1;
        for (std::size_t j = 0; j < acc.size(); ++j) {
            const double d = std::abs(acc[j].t_k + std::conj(acc[i].t_k));
            if (d < best) {
                best = d;
                id = int(j);
            }
        }
        acc[i].pair_id = id;
    }
    rep.roots = std::move(acc);

    rep.winding_number = count_zeros(sh, reg);
    int counted = 0;
    for (const auto& r : rep.roots)
        if (inside(reg, r.t_k, -1e-9)) counted += r.multiplicity;
    if (counted != rep.winding_number) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "argument principle counts %d zeros in [%g,%g]x[%g,%g] but Newton found %d; "
                      "refine the seed grid",
                      rep.winding_number, reg.re_min, reg.re_max, reg.im_min, reg.im_max, counted);
        rep.warnings.emplace_back(buf);
    }
    return rep;
}

RootSearchReport find_dynamical_eps(const SystemParams& sys, const PulseParams& p, const SearchRegion& region)
{
    sys.validate();
    p.validate();
    return find_dynamical_eps(ContourShape::from(sys, p), region);
}

}  // namespace epenc
