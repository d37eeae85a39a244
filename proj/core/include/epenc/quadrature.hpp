#pragma once

// Adaptive Gauss-Kronrod quadrature along piecewise-linear paths in the
// complex plane, with the square root of a discriminant continued along the
// path. Panels are processed strictly left to right so that the branch of
// w = sqrt(disc(z)) is carried from one panel to the next.

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "epenc/model.hpp"

namespace epenc::quad {

struct Rule {
    std::vector<double> x;  // nodes on [-1, 1], ascending
    std::vector<double> w;
};

/// n-point Gauss-Legendre rule, computed once per n and cached.
[[nodiscard]] const Rule& gauss_legendre(int n);

/// 15-point Kronrod nodes and weights on [-1, 1] in ascending order, plus the
/// embedded 7-point Gauss weights (zero at non-Gauss nodes).
struct Kronrod15 {
    std::array<double, 15> x;
    std::array<double, 15> wk;
    std::array<double, 15> wg;
};
[[nodiscard]] const Kronrod15& kronrod15();

struct Segment {
    cplx a;
    cplx b;
    bool smooth_end = false;  // z = a + (b - a)(1 - (1 - v)^2), removes sqrt endpoint singularities
};

using Path = std::vector<Segment>;

[[nodiscard]] Path polyline(const std::vector<cplx>& vertices, bool smooth_last = false);

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int initial_panels = 8;  // per segment
    int max_depth = 30;
    long max_panels = 2'000'000;
    int primitive_order = 12;  // Gauss-Legendre points for the running primitive
};

struct TrackedResult {
    cplx value{0.0, 0.0};      // integral of g(z, w, W) dz
    cplx primitive{0.0, 0.0};  // integral of w dz
    cplx w_end{0.0, 0.0};
    double error = 0.0;
    double primitive_error = 0.0;
    long panels = 0;
    long evaluations = 0;
};

namespace detail {

struct PanelPoint {
    cplx z;
    cplx dz;  // dz/dv
};

inline PanelPoint map_point(const Segment& s, double v)
{
    const cplx d = s.b - s.a;
    if (!s.smooth_end) return {s.a + d * v, d};
    const double u = 1.0 - v;
    return {s.a + d * (1.0 - u * u), d * (2.0 * u)};
}

/// Picks the sign of sqrt(f) closest to a prediction; reports ambiguity when
/// both candidates are similarly far from it.
inline cplx choose_branch(cplx f, cplx prediction, bool& ambiguous)
{
    const cplx r = std::sqrt(f);
    const double dp = std::abs(r - prediction);
    const double dm = std::abs(r + prediction);
    const double lo = std::min(dp, dm), hi = std::max(dp, dm);
    if (hi > 0.0 && lo > 0.5 * hi && std::abs(r) > 1e-12 * (1.0 + std::abs(prediction))) ambiguous = true;
    return dp <= dm ? r : -r;
}

struct Chain {
    double v1 = 0.0, v0 = 0.0;
    cplx w1{0.0, 0.0}, w0{0.0, 0.0};
    bool has_prev = false;

    [[nodiscard]] cplx predict(double v) const
    {
        if (!has_prev || v1 == v0) return w1;
        return w1 + (w1 - w0) * ((v - v1) / (v1 - v0));
    }
    void push(double v, cplx w)
    {
        v0 = v1;
        w0 = w1;
        v1 = v;
        w1 = w;
        has_prev = true;
    }
};

}  // namespace detail

/// Integrates g(z, w, W) dz along path, where w is sqrt(disc(z)) continued
/// from w_start at the path start and W is the running integral of w dz
/// (only computed when with_primitive is true; otherwise W = 0 is passed).
/// Throws NumericalError when a panel cannot be resolved or the branch cannot
/// be continued unambiguously.
template <class Disc, class G>
TrackedResult integrate_tracked(const Disc& disc, const G& g, const Path& path, cplx w_start,
                                const QuadOptions& opt, bool with_primitive = false)
{
    const Kronrod15& kr = kronrod15();
    const Rule& gl = gauss_legendre(opt.primitive_order);
    TrackedResult res;
    cplx w_anchor = w_start;
    cplx W_anchor{0.0, 0.0};

    struct Pending {
        double lo, hi;
        int depth;
    };

    for (const Segment& seg : path) {
        std::vector<Pending> stack;
        const int n0 = std::max(1, opt.initial_panels);
        for (int i = n0 - 1; i >= 0; --i)
            stack.push_back({double(i) / n0, double(i + 1) / n0, 0});
        detail::Chain carry;
        carry.v1 = 0.0;
        carry.w1 = w_anchor;

        while (!stack.empty()) {
            const Pending pan = stack.back();
            stack.pop_back();
            if (++res.panels > opt.max_panels) throw NumericalError("quadrature panel budget exhausted");
            const double half = 0.5 * (pan.hi - pan.lo);
            const double mid = 0.5 * (pan.hi + pan.lo);

            bool ambiguous = false;
            detail::Chain chain = carry;
            std::array<cplx, 15> z, dz, w, gv;
            for (int j = 0; j < 15; ++j) {
                const double v = mid + half * kr.x[j];
                const auto pp = detail::map_point(seg, v);
                z[j] = pp.z;
                dz[j] = pp.dz;
                w[j] = detail::choose_branch(disc(pp.z), chain.predict(v), ambiguous);
                chain.push(v, w[j]);
            }
            // A smoothed end is a zero of disc by construction.
            const bool at_zero = seg.smooth_end && pan.hi == 1.0;
            const auto pe = detail::map_point(seg, pan.hi);
            const cplx w_hi =
                at_zero ? cplx(0.0, 0.0) : detail::choose_branch(disc(pe.z), chain.predict(pan.hi), ambiguous);
            res.evaluations += 16;

            cplx dW_k{0.0, 0.0}, dW_g{0.0, 0.0};
            double w_l1 = 0.0;
            for (int j = 0; j < 15; ++j) {
                const cplx term = w[j] * dz[j] * half;
                dW_k += kr.wk[j] * term;
                dW_g += kr.wg[j] * term;
                w_l1 += kr.wk[j] * std::abs(term);
            }

            for (int j = 0; j < 15; ++j) {
                cplx Wj{0.0, 0.0};
                if (with_primitive) {
                    const double vj = mid + half * kr.x[j];
                    const double ih = 0.5 * (vj - pan.lo), im = 0.5 * (vj + pan.lo);
                    detail::Chain inner = carry;
                    cplx acc{0.0, 0.0};
                    for (std::size_t q = 0; q < gl.x.size(); ++q) {
                        const double v = im + ih * gl.x[q];
                        const auto pp = detail::map_point(seg, v);
                        const cplx wq = detail::choose_branch(disc(pp.z), inner.predict(v), ambiguous);
                        inner.push(v, wq);
                        acc += gl.w[q] * wq * pp.dz;
                    }
                    res.evaluations += long(gl.x.size());
                    Wj = W_anchor + acc * ih;
                }
                gv[j] = g(z[j], w[j], Wj) * dz[j] * half;
            }
            cplx val_k{0.0, 0.0}, val_g{0.0, 0.0};
            double g_l1 = 0.0;
            for (int j = 0; j < 15; ++j) {
                val_k += kr.wk[j] * gv[j];
                val_g += kr.wg[j] * gv[j];
                g_l1 += kr.wk[j] * std::abs(gv[j]);
            }
            const double err_g = std::abs(val_k - val_g);
            const double err_w = std::abs(dW_k - dW_g);
            const double frac = pan.hi - pan.lo;
            const bool ok_g = err_g <= std::max(opt.abs_tol * frac, opt.rel_tol * g_l1);
            const bool ok_w = !with_primitive || err_w <= std::max(opt.abs_tol * frac, opt.rel_tol * w_l1);
            if (!std::isfinite(err_g) || !std::isfinite(err_w))
                throw NumericalError("non-finite integrand on quadrature path");

            if ((ok_g && ok_w && !ambiguous) || pan.depth >= opt.max_depth) {
                if (pan.depth >= opt.max_depth && ambiguous)
                    throw NumericalError("square-root branch cannot be continued along the path near z = " +
                                         std::to_string(z[7].real()) + (z[7].imag() < 0 ? "" : "+") +
                                         std::to_string(z[7].imag()) + "i");
                res.value += val_k;
                res.primitive += dW_k;
                res.error += err_g;
                res.primitive_error += err_w;
                W_anchor += dW_k;
                carry.v0 = mid + half * kr.x[14];
                carry.w0 = w[14];
                carry.v1 = pan.hi;
                carry.w1 = w_hi;
                carry.has_prev = true;
                w_anchor = w_hi;
            } else {
                stack.push_back({mid, pan.hi, pan.depth + 1});
                stack.push_back({pan.lo, mid, pan.depth + 1});
            }
        }
    }
    res.w_end = w_anchor;
    return res;
}

/// Plain adaptive Gauss-Kronrod integral of a complex function of a real
/// variable on [a, b].
template <class F>
cplx integrate_real(const F& f, double a, double b, const QuadOptions& opt, double* error = nullptr)
{
    const Kronrod15& kr = kronrod15();
    struct Pending {
        double lo, hi;
        int depth;
    };
    std::vector<Pending> stack;
    const int n0 = std::max(1, opt.initial_panels);
    for (int i = n0 - 1; i >= 0; --i)
        stack.push_back({a + (b - a) * i / n0, a + (b - a) * (i + 1) / n0, 0});
    cplx total{0.0, 0.0};
    double err_total = 0.0;
    long panels = 0;
    while (!stack.empty()) {
        const Pending pan = stack.back();
        stack.pop_back();
        if (++panels > opt.max_panels) throw NumericalError("quadrature panel budget exhausted");
        const double half = 0.5 * (pan.hi - pan.lo), mid = 0.5 * (pan.hi + pan.lo);
        cplx vk{0.0, 0.0}, vg{0.0, 0.0};
        double l1 = 0.0;
        for (int j = 0; j < 15; ++j) {
            const cplx fv = f(mid + half * kr.x[j]) * half;
            vk += kr.wk[j] * fv;
            vg += kr.wg[j] * fv;
            l1 += kr.wk[j] * std::abs(fv);
        }
        const double err = std::abs(vk - vg);
        if (!std::isfinite(err)) throw NumericalError("non-finite integrand");
        const double frac = (pan.hi - pan.lo) / (b - a);
        if (err <= std::max(opt.abs_tol * frac, opt.rel_tol * l1) || pan.depth >= opt.max_depth) {
            total += vk;
            err_total += err;
        } else {
            stack.push_back({mid, pan.hi, pan.depth + 1});
            stack.push_back({pan.lo, mid, pan.depth + 1});
        }
    }
    if (error) *error = err_total;
    return total;
}

}  // namespace epenc::quad
