#pragma once

// Dormand-Prince 8(5,3) explicit Runge-Kutta integrator for small complex
// systems, with PI step-size control and output at prescribed times.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>

#include "epenc/model.hpp"

namespace epenc {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-13;
    double h_initial = 0.0;     // 0 selects an automatic first step
    double h_max = 0.0;         // 0 means unlimited
    double beta = 0.04;         // PI controller memory exponent
    long max_steps = 50'000'000;
};

struct OdeStats {
    long steps = 0;
    long rejected = 0;
    long evaluations = 0;
    double max_local_error = 0.0;  // largest accepted scaled error (<= 1)
    double error_estimate = 0.0;   // sum of accepted absolute local errors
};

template <std::size_t N>
using CState = std::array<cplx, N>;

namespace detail {

struct Dop853 {
    static constexpr double c2 = 0.05260015195876773187856, c3 = 0.07890022793815159781784,
        c4 = 0.11835034190722739672676, c5 = 0.28164965809277260327324, c6 = 0.33333333333333333333333,
        c7 = 0.25, c8 = 0.30769230769230769230769, c9 = 0.65128205128205128205128, c10 = 0.6,
        c11 = 0.85714285714285714285714;

    static constexpr double a21 = 0.05260015195876773187856, a31 = 0.01972505698453789945446,
        a32 = 0.05917517095361369836338, a41 = 0.02958758547680684918169, a43 = 0.08876275643042054754507,
        a51 = 0.24136513415926668550237, a53 = -0.88454947932828608534486, a54 = 0.92483400326179200311574,
        a61 = 0.03703703703703703703704, a64 = 0.17082860872947387127960, a65 = 0.12546768756682242501669,
        a71 = 0.037109375, a74 = 0.17025221101954403931498, a75 = 0.06021653898045596068502,
        a76 = -0.017578125, a81 = 0.03709200011850479271088, a84 = 0.17038392571223999381021,
        a85 = 0.10726203044637328465181, a86 = -0.01531943774862440175279, a87 = 0.00827378916381402288758,
        a91 = 0.62411095871607571711443, a94 = -3.36089262944694129406857, a95 = -0.86821934684172600681819,
        a96 = 27.5920996994467083049416, a97 = 20.1540675504778934086187, a98 = -43.4898841810699588477366,
        a101 = 0.47766253643826436589043, a104 = -2.48811461997166764192642,
        a105 = -0.59029082683684299637145, a106 = 21.2300514481811942347289,
        a107 = 15.2792336328824235832597, a108 = -33.2882109689848629194453,
        a109 = -0.02033120170850862613582, a111 = -0.93714243008598732571704,
        a114 = 5.18637242884406370830024, a115 = 1.09143734899672957818500,
        a116 = -8.14978701074692612513997, a117 = -18.5200656599969598641566,
        a118 = 22.7394870993505042818970, a119 = 2.49360555267965238987089,
        a1110 = -3.04676447189821950038237, a121 = 2.27331014751653820792360,
        a124 = -10.5344954667372501984067, a125 = -2.00087205822486249909676,
        a126 = -17.9589318631187989172766, a127 = 27.9488845294199600508500,
        a128 = -2.85899827713502369474066, a129 = -8.87285693353062954433549,
        a1210 = 12.3605671757943030647266, a1211 = 0.64339274601576353035597;

    static constexpr double b1 = 0.05429373411656876223805, b6 = 4.45031289275240888144114,
        b7 = 1.89151789931450038304282, b8 = -5.80120396001058478146721, b9 = 0.31116436695781989440892,
        b10 = -0.15216094966251607855618, b11 = 0.20136540080403034837478, b12 = 0.04471061572777259051769;

    static constexpr double bhh1 = 0.24409448818897637795276, bhh2 = 0.73384668828161185734136,
        bhh3 = 0.02205882352941176470588;

    static constexpr double er1 = 0.01312004499419488073250, er6 = -1.22515644637620444072057,
        er7 = -0.49575894965725019152141, er8 = 1.66437718245498653696153, er9 = -0.35032884874997368168865,
        er10 = 0.33417911871301747902973, er11 = 0.08192320648511571246571,
        er12 = -0.02235530786388629525884;
};

template <std::size_t N>
CState<N> axpy(const CState<N>& y, double h, std::initializer_list<std::pair<double, const CState<N>*>> terms)
{
    CState<N> out = y;
    for (std::size_t i = 0; i < N; ++i) {
        cplx acc{0.0, 0.0};
        for (const auto& [c, k] : terms) acc += c * (*k)[i];
        out[i] += h * acc;
    }
    return out;
}

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 through every time in t_out (ascending,
/// all > t0 or equal to it). After reaching each output time, observe(index,
/// t, y) is called. Steps are shortened to land exactly on output times.
/// Throws NumericalError on step-size underflow or non-finite state.
template <std::size_t N, class Rhs, class Observer>
CState<N> integrate_dop853(Rhs&& rhs, double t0, CState<N> y, std::span<const double> t_out,
                           Observer&& observe, const OdeOptions& opt, OdeStats* stats_out = nullptr)
{
    using C = detail::Dop853;
    OdeStats st;
    double t = t0;
    CState<N> k1 = rhs(t, y);
    st.evaluations = 1;

    auto scaled_norm = [&](const CState<N>& v) {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = opt.atol + opt.rtol * std::abs(y[i]);
            s += std::norm(v[i]) / (sk * sk);
        }
        return std::sqrt(s / N);
    };

    const double t_final = t_out.empty() ? t0 : t_out.back();
    double h = opt.h_initial;
    if (h <= 0.0) {
        // Hairer-Wanner starting step heuristic.
        const double d0 = scaled_norm(y);
        const double d1 = scaled_norm(k1);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, std::abs(t_final - t0));
        CState<N> y1 = y;
        for (std::size_t i = 0; i < N; ++i) y1[i] += h0 * k1[i];
        const CState<N> f1 = rhs(t + h0, y1);
        ++st.evaluations;
        CState<N> df;
        for (std::size_t i = 0; i < N; ++i) df[i] = (f1[i] - k1[i]) / h0;
        const double d2 = scaled_norm(df);
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 8.0);
        h = std::min(100.0 * h0, h1);
    }
    if (opt.h_max > 0.0) h = std::min(h, opt.h_max);

    double err_old = 1e-4;
    constexpr double safe = 0.9, fac_min = 0.333, fac_max = 6.0;
    const double expo = 1.0 / 8.0 - opt.beta * 0.2;

    std::size_t next_out = 0;
    while (next_out < t_out.size() && t_out[next_out] <= t) {
        observe(next_out, t, y);
        ++next_out;
    }

    bool last_rejected = false;
    while (next_out < t_out.size()) {
        if (st.steps + st.rejected >= opt.max_steps)
            throw NumericalError("integrator exceeded the maximum number of steps at t = " + std::to_string(t));
        const double target = t_out[next_out];
        const bool clipped = t + h >= target;
        const double hs = clipped ? target - t : h;
        const double spacing = std::abs(t) * std::numeric_limits<double>::epsilon() * 16.0;
        if (!(hs > spacing) && !clipped)
            throw NumericalError("step-size underflow at t = " + std::to_string(t) +
                                 " (stiffness/convergence failure), h = " + std::to_string(hs));

        const CState<N> k2 = rhs(t + C::c2 * hs, detail::axpy<N>(y, hs, {{C::a21, &k1}}));
        const CState<N> k3 = rhs(t + C::c3 * hs, detail::axpy<N>(y, hs, {{C::a31, &k1}, {C::a32, &k2}}));
        const CState<N> k4 = rhs(t + C::c4 * hs, detail::axpy<N>(y, hs, {{C::a41, &k1}, {C::a43, &k3}}));
        const CState<N> k5 =
            rhs(t + C::c5 * hs, detail::axpy<N>(y, hs, {{C::a51, &k1}, {C::a53, &k3}, {C::a54, &k4}}));
        const CState<N> k6 =
            rhs(t + C::c6 * hs, detail::axpy<N>(y, hs, {{C::a61, &k1}, {C::a64, &k4}, {C::a65, &k5}}));
        const CState<N> k7 = rhs(t + C::c7 * hs, detail::axpy<N>(y, hs, {{C::a71, &k1}, {C::a74, &k4},
                                                                         {C::a75, &k5}, {C::a76, &k6}}));
        const CState<N> k8 = rhs(t + C::c8 * hs, detail::axpy<N>(y, hs, {{C::a81, &k1}, {C::a84, &k4},
                                                                         {C::a85, &k5}, {C::a86, &k6},
                                                                         {C::a87, &k7}}));
        const CState<N> k9 = rhs(t + C::c9 * hs, detail::axpy<N>(y, hs, {{C::a91, &k1}, {C::a94, &k4},
                                                                         {C::a95, &k5}, {C::a96, &k6},
                                                                         {C::a97, &k7}, {C::a98, &k8}}));
        const CState<N> k10 = rhs(t + C::c10 * hs, detail::axpy<N>(y, hs, {{C::a101, &k1}, {C::a104, &k4},
                                                                           {C::a105, &k5}, {C::a106, &k6},
                                                                           {C::a107, &k7}, {C::a108, &k8},
                                                                           {C::a109, &k9}}));
        const CState<N> k11 = rhs(t + C::c11 * hs, detail::axpy<N>(y, hs, {{C::a111, &k1}, {C::a114, &k4},
                                                                           {C::a115, &k5}, {C::a116, &k6},
                                                                           {C::a117, &k7}, {C::a118, &k8},
                                                                           {C::a119, &k9}, {C::a1110, &k10}}));
        const double t_new = clipped ? target : t + hs;
        const CState<N> k12 = rhs(t_new, detail::axpy<N>(y, hs, {{C::a121, &k1}, {C::a124, &k4},
                                                                 {C::a125, &k5}, {C::a126, &k6},
                                                                 {C::a127, &k7}, {C::a128, &k8},
                                                                 {C::a129, &k9}, {C::a1210, &k10},
                                                                 {C::a1211, &k11}}));
        st.evaluations += 11;

        CState<N> y_new;
        double err5 = 0.0, err3 = 0.0, y_scale = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const cplx incr = C::b1 * k1[i] + C::b6 * k6[i] + C::b7 * k7[i] + C::b8 * k8[i] + C::b9 * k9[i] +
                              C::b10 * k10[i] + C::b11 * k11[i] + C::b12 * k12[i];
            y_new[i] = y[i] + hs * incr;
            const double sk = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            const cplx e3 = incr - C::bhh1 * k1[i] - C::bhh2 * k9[i] - C::bhh3 * k12[i];
            const cplx e5 = C::er1 * k1[i] + C::er6 * k6[i] + C::er7 * k7[i] + C::er8 * k8[i] +
                            C::er9 * k9[i] + C::er10 * k10[i] + C::er11 * k11[i] + C::er12 * k12[i];
            err3 += std::norm(e3) / (sk * sk);
            err5 += std::norm(e5) / (sk * sk);
            y_scale = std::max(y_scale, sk);
        }
        double den = err5 + 0.01 * err3;
        den = den <= 0.0 ? 1.0 : std::sqrt(N * den);
        const double err = std::abs(hs) * err5 / den;
        if (!std::isfinite(err))
            throw NumericalError("non-finite error estimate at t = " + std::to_string(t));

        const double fac11 = std::pow(std::max(err, 1e-300), expo);
        if (err <= 1.0) {
            double fac = fac11 / std::pow(err_old, opt.beta);
            fac = std::clamp(fac / safe, 1.0 / fac_max, 1.0 / fac_min);
            double h_next = hs / fac;
            if (last_rejected) h_next = std::min(h_next, hs);
            if (clipped) h_next = std::max(h_next, h);
            if (opt.h_max > 0.0) h_next = std::min(h_next, opt.h_max);
            err_old = std::max(err, 1e-4);
            st.max_local_error = std::max(st.max_local_error, err);
            st.error_estimate += err * y_scale;
            ++st.steps;
            t = t_new;
            y = y_new;
            k1 = rhs(t, y);
            ++st.evaluations;
            for (const auto& v : y)
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw NumericalError("state became non-finite at t = " + std::to_string(t));
            h = h_next;
            last_rejected = false;
            while (next_out < t_out.size() && t_out[next_out] <= t) {
                observe(next_out, t, y);
                ++next_out;
            }
        } else {
            h = hs / std::min(1.0 / fac_min, fac11 / safe);
            ++st.rejected;
            last_rejected = true;
        }
    }
    if (stats_out) *stats_out = st;
    return y;
}

/// Convenience overload without intermediate outputs.
template <std::size_t N, class Rhs>
CState<N> integrate_dop853(Rhs&& rhs, double t0, CState<N> y, double t1, const OdeOptions& opt,
                           OdeStats* stats = nullptr)
{
    const std::array<double, 1> out{t1};
    return integrate_dop853<N>(std::forward<Rhs>(rhs), t0, y, std::span<const double>(out),
                               [](std::size_t, double, const CState<N>&) {}, opt, stats);
}

}  // namespace epenc
