#include "epenc/quadrature.hpp"

#include <map>
#include <mutex>

namespace epenc::quad {

namespace {

Rule compute_gauss_legendre(int n)
{
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.x[n - 1 - i] = x;
        r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace

const Rule& gauss_legendre(int n)
{
    if (n < 1) throw InputError("Gauss-Legendre order must be >= 1");
    static std::mutex m;
    static std::map<int, Rule> cache;
    std::lock_guard lock(m);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

const Kronrod15& kronrod15()
{
    static const Kronrod15 k = [] {
        const double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                              0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                              0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                              0.207784955007898467600689403773245, 0.0};
        const double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                              0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                              0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                              0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
        const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                              0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
        Kronrod15 r{};
        for (int i = 0; i < 8; ++i) {
            r.x[i] = -xk[i];
            r.x[14 - i] = xk[i];
            r.wk[i] = r.wk[14 - i] = wk[i];
            r.wg[i] = r.wg[14 - i] = (i % 2 == 1) ? wg[i / 2] : 0.0;
        }
        return r;
    }();
    return k;
}

Path polyline(const std::vector<cplx>& vertices, bool smooth_last)
{
    if (vertices.size() < 2) throw InputError("a path needs at least two vertices");
    Path p;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        if (vertices[i] == vertices[i + 1]) continue;
        p.push_back({vertices[i], vertices[i + 1], false});
    }
    if (smooth_last && !p.empty()) p.back().smooth_end = true;
    return p;
}

}  // namespace epenc::quad
