#include <doctest.h>

#include <cmath>

#include "epenc/propagator.hpp"

using namespace epenc;

namespace {

SystemParams lossless()
{
    SystemParams s = with_real_dipole(helium_preset());
    s.gamma = 0.0;
    return s;
}

}  // namespace

TEST_CASE("zero field leaves the bound state untouched")
{
    const auto sys = helium_preset();
    PulseParams p;
    p.eps0_max = 0.0;
    p.tau = 1000.0;
    CHECK(survival_probability(sys, p) == doctest::Approx(1.0).epsilon(1e-14));
    const auto [am, r] = propagate_adiabatic(sys, p);
    CHECK(am.a_plus == cplx(0.0, 0.0));
    CHECK(std::abs(am.a_minus) == doctest::Approx(1.0));
}

TEST_CASE("pulse-area theorem on resonance")
{
    const auto sys = lossless();
    for (double phi : {0.5 * kPi, kPi, 2.0 * kPi, 3.0 * kPi, 4.5}) {
        const auto p = PulseParams::with_area(sys, 2e-3, 0.0, phi);
        CHECK(std::abs(survival_probability(sys, p) - std::pow(std::cos(0.5 * phi), 2)) < 1e-8);
    }
}

TEST_CASE("reference survival values")
{
    // Independent run with a tighter tolerance as the oracle.
    const auto sys = helium_preset();
    const double eep = cw_exceptional_point(sys).eps0_ep;
    PropagationOptions tight;
    tight.ode.rtol = 1e-13;
    tight.ode.atol = 1e-16;
    for (auto [r, a, phi] : {std::tuple{0.5, 0.01, kPi}, {3.0, 2.0, 9.42}, {8.0, 1.0, 18.85}}) {
        const auto p = PulseParams::with_area(sys, r * eep, a, phi);
        const double pb = survival_probability(sys, p);
        const double ref = survival_probability(sys, p, tight);
        CHECK(std::abs(pb - ref) <= 1e-8 * std::max(ref, 1e-3));
        CHECK(pb > 0.0);
        CHECK(pb <= 1.0);
    }
}

TEST_CASE("halving the tolerance moves p_bound by less than the error estimate")
{
    const auto sys = helium_preset();
    const auto p = PulseParams::with_area(sys, 4.0 * cw_exceptional_point(sys).eps0_ep, 0.5, 15.0);
    PropagationOptions a, b;
    b.ode.rtol = 0.5 * a.ode.rtol;
    b.ode.atol = 0.5 * a.ode.atol;
    const auto ra = propagate_diabatic(sys, p, a);
    const auto rb = propagate_diabatic(sys, p, b);
    CHECK(std::abs(ra.p_bound - rb.p_bound) < std::max(ra.stats.error_estimate, 1e-13));
}

TEST_CASE("norm never grows for real dipole and gamma >= 0")
{
    const auto sys = with_real_dipole(helium_preset());
    const auto p = PulseParams::with_area(sys, 3.0 * cw_exceptional_point(sys).eps0_ep, 1.0, 12.0);
    PropagationOptions o;
    o.record_trajectory = true;
    const auto r = propagate_diabatic(sys, p, o);
    REQUIRE(r.trajectory.size() == 2048);
    double worst = -1.0;
    for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
        const auto& a = r.trajectory[i - 1];
        const auto& b = r.trajectory[i];
        const double na = std::norm(a.c_bound) + std::norm(a.c_res);
        const double nb = std::norm(b.c_bound) + std::norm(b.c_res);
        worst = std::max(worst, nb - na);
    }
    CHECK(worst <= 1e-9);
    CHECK(r.trajectory.front().t_over_tau == -6.0);
    CHECK(r.trajectory.back().t_over_tau == 6.0);
}

TEST_CASE("trajectory split is the continued eigenvalue difference")
{
    const auto sys = helium_preset();
    const auto p = PulseParams::with_area(sys, 5.0 * cw_exceptional_point(sys).eps0_ep, 1.0, 10.0);
    PropagationOptions o;
    o.record_trajectory = true;
    o.trajectory_samples = 301;
    const auto r = propagate_diabatic(sys, p, o);
    REQUIRE(r.trajectory.size() == 301);
    for (std::size_t i = 0; i < r.trajectory.size(); i += 50) {
        const auto& s = r.trajectory[i];
        const auto as = adiabatic_split(sys, p, s.t_over_tau * p.tau);
        CHECK(std::abs(std::abs(s.split) - std::abs(as.split)) < 1e-15);
    }
    for (std::size_t i = 1; i < r.trajectory.size(); ++i)
        CHECK(std::abs(r.trajectory[i].split - r.trajectory[i - 1].split) <
              std::abs(r.trajectory[i].split + r.trajectory[i - 1].split));
}

TEST_CASE("window t_span 6 vs 8")
{
    const auto sys = helium_preset();
    const double eep = cw_exceptional_point(sys).eps0_ep;
    for (auto [r, a] : {std::pair{2.0, 0.5}, {10.0, 1.8}}) {
        auto p6 = PulseParams::with_area(sys, r * eep, a, 12.0, 6.0);
        auto p8 = PulseParams::with_area(sys, r * eep, a, 12.0, 8.0);
        CHECK(std::abs(survival_probability(sys, p6) - survival_probability(sys, p8)) < 1e-6);
    }
}

TEST_CASE("adiabatic and diabatic frames agree")
{
    const auto sys = helium_preset();
    const double eep = cw_exceptional_point(sys).eps0_ep;
    for (auto [r, a, phi] : {std::tuple{0.5, 0.01, kPi}, {1.0, 0.01, kPi}, {3.0, 2.0, 9.42}, {12.0, 1.3, 25.0}}) {
        const auto p = PulseParams::with_area(sys, r * eep, a, phi);
        const auto d = propagate_diabatic(sys, p);
        const auto [am, ad] = propagate_adiabatic(sys, p);
        CHECK(std::abs(ad.p_bound - d.p_bound) < 1e-6 * std::max(d.p_bound, 1e-3));
        CHECK(std::abs(ad.final_state.c_bound - d.final_state.c_bound) < 1e-6 * std::abs(d.final_state.c_bound) + 1e-12);
        CHECK(std::abs(ad.final_state.c_res - d.final_state.c_res) < 1e-6 * std::abs(d.final_state.c_bound) + 1e-12);
    }
}

TEST_CASE("adiabatic frame refuses contours through a dynamical EP")
{
    const auto sys = with_real_dipole(helium_preset());
    // alpha = 0 and eps0 = sqrt(e) eps0_EP put an EP on the real axis at t = +-tau.
    const auto p = PulseParams::with_area(sys, std::sqrt(std::exp(1.0)) * cw_exceptional_point(sys).eps0_ep, 0.0, 9.0);
    CHECK_THROWS_AS((void)propagate_adiabatic(sys, p), NumericalError);
    CHECK_NOTHROW((void)propagate_diabatic(sys, p));
}

TEST_CASE("chirp sign symmetry of p_bound (empirical)")
{
    const auto sys = helium_preset();
    const double eep = cw_exceptional_point(sys).eps0_ep;
    double worst = 0.0;
    for (auto [r, a] : {std::pair{2.0, 0.5}, {6.0, 1.5}, {12.0, 2.0}}) {
        const double pp = survival_probability(sys, PulseParams::with_area(sys, r * eep, a, 12.0));
        const double pm = survival_probability(sys, PulseParams::with_area(sys, r * eep, -a, 12.0));
        worst = std::max(worst, std::abs(pp - pm) / pp);
    }
    MESSAGE("max relative asymmetry p(alpha) vs p(-alpha): " << worst);
    CHECK(std::isfinite(worst));
}
