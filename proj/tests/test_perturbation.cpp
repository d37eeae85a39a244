#include <doctest.h>

#include <cmath>

#include "epenc/perturbation.hpp"
#include "epenc/propagator.hpp"

using namespace epenc;

TEST_CASE("zero field gives a vanishing amplitude")
{
    const auto sys = helium_preset();
    PulseParams p;
    p.eps0_max = 0.0;
    p.tau = 100.0;
    const auto r = a_plus_first_order(sys, p);
    CHECK(r.a_plus == cplx(0.0, 0.0));
    CHECK(r.p_bound_pert == 0.0);
}

TEST_CASE("coupling equals minus the rate of the mixing angle")
{
    // Oracle: theta = atan(Omega / Delta) / 2, differentiated by central differences.
    const auto sys = helium_preset();
    const auto p = PulseParams::with_area(sys, 3.0 * cw_exceptional_point(sys).eps0_ep, 1.4, 10.0);
    auto theta = [&](cplx t) {
        const auto fp = pulse_at(sys, p, t);
        return 0.5 * std::atan(fp.omega_rabi / fp.delta);
    };
    const auto shape = ContourShape::from(sys, p);
    for (cplx t : {cplx(-2.0 * p.tau, 0.0), cplx(0.1 * p.tau, 0.0), cplx(0.8 * p.tau, -0.3 * p.tau)}) {
        const double h = 1e-4 * p.tau;
        const cplx dtheta = (theta(t + h) - theta(t - h)) / (2.0 * h);
        const cplx n = nonadiabatic_coupling(sys, p, t);
        CHECK(std::abs(n + dtheta) < 1e-7 * std::abs(dtheta) + 1e-16);
        CHECK(std::abs(shape.coupling(t / p.tau) - n * p.tau) < 1e-10 * std::abs(n * p.tau));
    }
}

TEST_CASE("coupling throws at a dynamical EP")
{
    const auto sys = with_real_dipole(helium_preset());
    const auto p = PulseParams::with_area(sys, std::sqrt(std::exp(1.0)) * cw_exceptional_point(sys).eps0_ep, 0.0, 9.0);
    CHECK_THROWS_AS((void)nonadiabatic_coupling(sys, p, p.tau), NumericalError);
    CHECK_THROWS_WITH_AS((void)a_plus_first_order(sys, p),
                         doctest::Contains("perturbative integral singular"), NumericalError);
    CHECK(min_real_axis_discriminant(ContourShape::from(sys, p), 6.0) < 1e-12);
}

TEST_CASE("first order tracks the exact propagator in the adiabatic regime")
{
    const auto sys = helium_preset();
    const double eep = cw_exceptional_point(sys).eps0_ep;
    for (auto [r, a, phi] : {std::tuple{10.0, 1.0, 10.0 * kPi}, {8.0, 1.0, 18.85}, {12.0, 1.6, 10.0 * kPi}}) {
        const auto p = PulseParams::with_area(sys, r * eep, a, phi);
        const double pe = survival_probability(sys, p);
        const auto fo = a_plus_first_order(sys, p);
        CHECK(fo.p_bound_pert < 0.1);
        CHECK(std::abs(pe - fo.p_bound_pert) <= 0.25 * fo.p_bound_pert);
        CHECK(fo.exchange);
    }
}

TEST_CASE("quadrature converges and does not depend on the window")
{
    const auto sys = helium_preset();
    const auto shape = ContourShape::from_ratio(sys, 3.0, 2.0);
    const double kappa = 9.42 / kSqrt2Pi;
    PerturbationOptions loose, tight;
    tight.quad.rel_tol = 1e-12;
    const auto a = a_plus_first_order(shape, kappa, 6.0, loose);
    const auto b = a_plus_first_order(shape, kappa, 6.0, tight);
    const auto c = a_plus_first_order(shape, kappa, 8.0, tight);
    CHECK(std::abs(a.a_plus - b.a_plus) < 1e-7 * std::abs(b.a_plus));
    CHECK(std::abs(c.a_plus - b.a_plus) < 1e-6 * std::abs(b.a_plus));
    CHECK(a.error_estimate < 1e-6 * std::abs(a.a_plus));
}

TEST_CASE("far from the EP the loss is resonance decay, not transfer")
{
    // At eps ratio 0.5 the bound state stays adiabatic: |a_plus|^2 is negligible and
    // p_bound approaches the zeroth-order decay of the adiabatic state as 1 / phi.
    const auto sys = helium_preset();
    const double eep = cw_exceptional_point(sys).eps0_ep;
    double prev = 0.0;
    for (double phi : {kPi, 2.0 * kPi, 4.0 * kPi}) {
        const auto p = PulseParams::with_area(sys, 0.5 * eep, 0.01, phi);
        const auto fo = a_plus_first_order(sys, p);
        const double pe = survival_probability(sys, p);
        CHECK(fo.p_bound_pert < 1e-9);
        CHECK_FALSE(fo.exchange);
        const double rel = std::abs(fo.adiabatic_survival - pe) / pe;
        CHECK(rel < 0.05);
        if (prev > 0.0) CHECK(rel / prev == doctest::Approx(0.5).epsilon(0.2));
        prev = rel;

        // The exact adiabatic-frame amplitude carries the whole correction.
        const auto [am, ad] = propagate_adiabatic(sys, p);
        CHECK(fo.adiabatic_survival * std::norm(am.a_minus) == doctest::Approx(pe).epsilon(1e-6));
    }
}

TEST_CASE("phase samples end at the total phase")
{
    const auto sys = helium_preset();
    const auto p = PulseParams::with_area(sys, 4.0 * cw_exceptional_point(sys).eps0_ep, 1.0, 12.0);
    PerturbationOptions o;
    o.phase_samples = 129;
    const auto r = a_plus_first_order(sys, p, o);
    REQUIRE(r.phase_samples.size() == 129);
    CHECK(r.phase_samples.front().t_over_tau == -6.0);
    CHECK(r.phase_samples.front().phase == cplx(0.0, 0.0));
    CHECK(std::abs(r.phase_samples.back().phase - r.phase_total) < 1e-9 * std::abs(r.phase_total));
}
