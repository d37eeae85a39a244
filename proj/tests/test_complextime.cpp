#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "epenc/complextime.hpp"

using namespace epenc;

namespace {

SystemParams real_helium() { return with_real_dipole(helium_preset()); }

std::vector<cplx> roots_of(const RootSearchReport& r)
{
    std::vector<cplx> v;
    for (const auto& e : r.roots) v.push_back(e.t_k);
    return v;
}

}  // namespace

TEST_CASE("transform-limited roots have a closed form")
{
    // alpha = 0, real dipole: exp(-x^2) = (gamma ratio)^2, so x^2 = 2 ln r - 2 pi i k.
    const double r = 3.0;
    const auto shape = ContourShape::from_ratio(real_helium(), r, 0.0);
    SearchRegion reg;
    const auto rep = find_dynamical_eps(shape, reg);
    REQUIRE(!rep.roots.empty());
    int inside = 0;
    for (int k = -20; k <= 20; ++k)
        for (double s : {1.0, -1.0}) {
            const cplx x = s * std::sqrt(cplx(2.0 * std::log(r), -2.0 * kPi * k));
            if (x.real() > reg.re_min && x.real() < reg.re_max && x.imag() > reg.im_min && x.imag() < reg.im_max)
                ++inside;
        }
    CHECK(int(rep.roots.size()) == inside);
    CHECK(rep.winding_number == inside);
    for (const auto& e : rep.roots) {
        double best = 1e300;
        for (int k = -20; k <= 20; ++k)
            for (double s : {1.0, -1.0})
                best = std::min(best, std::abs(e.t_k - s * std::sqrt(cplx(2.0 * std::log(r), -2.0 * kPi * k))));
        CHECK(best < 1e-12);
        CHECK(e.residual < 1e-12);
    }
}

TEST_CASE("roots pair up under t -> -conj(t) for a real dipole")
{
    const auto shape = ContourShape::from_ratio(real_helium(), 8.0, 2.0);
    const auto rep = find_dynamical_eps(shape);
    REQUIRE(rep.roots.size() >= 2);
    for (const auto& e : rep.roots) {
        CHECK(std::abs(shape.discriminant(e.t_k)) < 1e-12);
        REQUIRE(e.pair_id >= 0);
        CHECK(std::abs(rep.roots[e.pair_id].t_k + std::conj(e.t_k)) < 1e-10);
    }
}

TEST_CASE("argument principle count")
{
    const auto shape = ContourShape::from_ratio(helium_preset(), 5.0, 1.2);
    SearchRegion reg;
    const auto rep = find_dynamical_eps(shape, reg);
    CHECK(count_zeros(shape, reg) == int(rep.roots.size()));
    CHECK(rep.warnings.empty());
    for (const auto& e : rep.roots) {
        CHECK(std::abs(shape.discriminant(e.t_k)) < 1e-12);
        if (e.multiplicity == 1) CHECK(std::abs(shape.discriminant_prime(e.t_k)) > 1e-6);
    }

    const auto one = refine_root(shape, rep.roots.front().t_k + cplx(1e-3, -1e-3));
    REQUIRE(one.has_value());
    CHECK(std::abs(one->t_k - rep.roots.front().t_k) < 1e-10);
}

TEST_CASE("sigma does not depend on the integration path")
{
    const auto shape = ContourShape::from_ratio(helium_preset(), 8.0, 2.0);
    auto rep = find_dynamical_eps(shape);
    attach_sigmas(shape, rep);
    const auto all = roots_of(rep);
    const auto lead = leading_roots(rep, 2);
    REQUIRE(lead.size() == 2);
    int compared = 0;
    for (int i : lead) {
        std::vector<cplx> others;
        for (std::size_t j = 0; j < all.size(); ++j)
            if (int(j) != i) others.push_back(all[j]);
        SigmaOptions a, b;
        b.path = SigmaPath::Straight;
        const cplx sa = sigma_k(shape, all[i], others, a);
        CHECK(sa == *rep.roots[i].sigma_k);
        cplx sb;
        try {
            sb = sigma_k(shape, all[i], others, b);
        } catch (const InputError&) {
            continue;  // straight segment not homotopic for this root
        }
        CHECK(std::abs(sa - sb) < 1e-8);
        ++compared;
    }
    CHECK(compared >= 1);
}

TEST_CASE("sigma of mirrored roots are complex conjugates for a real dipole")
{
    const auto shape = ContourShape::from_ratio(real_helium(), 6.0, 1.5);
    auto rep = find_dynamical_eps(shape);
    attach_sigmas(shape, rep);
    int checked = 0;
    for (const auto& e : rep.roots) {
        if (!e.sigma_k || e.pair_id < 0) continue;
        const auto& partner = rep.roots[e.pair_id];
        if (!partner.sigma_k) continue;
        CHECK(std::abs(*partner.sigma_k - std::conj(*e.sigma_k)) < 1e-8 * std::abs(*e.sigma_k));
        ++checked;
    }
    CHECK(checked >= 2);
}

TEST_CASE("leading exponents grow as the field weakens")
{
    auto lead_re = [](double r) {
        const auto shape = ContourShape::from_ratio(helium_preset(), r, 1.0);
        auto rep = find_dynamical_eps(shape);
        attach_sigmas(shape, rep);
        const auto lead = leading_roots(rep, 1);
        REQUIRE(lead.size() == 1);
        return rep.roots[lead[0]].sigma_k->real();
    };
    const double s2 = lead_re(2.0), s4 = lead_re(4.0), s8 = lead_re(8.0);
    CHECK(s8 > 0.0);
    CHECK(s4 > s8);
    CHECK(s2 > s4);
}

TEST_CASE("residue model predicts first order on the monotonic side")
{
    const auto shape = ContourShape::from_ratio(helium_preset(), 1.3, 2.0);
    auto rep = find_dynamical_eps(shape);
    attach_sigmas(shape, rep);
    const auto lead = leading_roots(rep, 2);
    std::vector<cplx> sig;
    for (int i : lead) sig.push_back(*rep.roots[i].sigma_k);

    for (double phi0 : {6.0, 10.0}) {
        // Fit on [phi0, 2 phi0], predict |a_plus| at 3 phi0.
        std::vector<double> phi;
        for (int i = 0; i < 12; ++i) phi.push_back(phi0 * (1.0 + i / 11.0));
        const auto fit = residue_model_fit(shape, sig, phi);
        CHECK(fit.r_squared > 0.999);
        CHECK(fit.log_slope == doctest::Approx(-sig[0].real() / kSqrt2Pi));

        const double far = 3.0 * phi0;
        const double direct = std::abs(a_plus_first_order(shape, far / kSqrt2Pi, 6.0).a_plus);
        const double model = std::abs(residue_model(fit.sigma, fit.a, far));
        CHECK(std::abs(model - direct) < 0.1 * direct);
    }
}

TEST_CASE("degenerate exponents are reported")
{
    const std::vector<cplx> sig{{0.4, 0.1}, {0.4, 0.1}};
    std::vector<double> phi;
    std::vector<cplx> amp;
    for (int i = 0; i < 8; ++i) {
        phi.push_back(5.0 + i);
        amp.push_back(std::exp(-sig[0] * phi.back() / kSqrt2Pi));
    }
    CHECK_THROWS_WITH_AS((void)residue_model_fit_samples(sig, phi, amp), doctest::Contains("degenerate"),
                         NumericalError);
    CHECK_THROWS_AS((void)residue_model_fit_samples(sig, std::vector<double>(phi.begin(), phi.begin() + 4),
                                                    std::vector<cplx>(amp.begin(), amp.begin() + 4)),
                    InputError);
}

TEST_CASE("separatrix of the transform-limited real-dipole pulse")
{
    // alpha = 0: the k = 0 pair sits at x = +-sqrt(2 ln r) and meets at the origin for r = 1.
    const auto pts = find_separatrix(real_helium(), {0.0}, 3.0 * kPi);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].eps0_crit_ratio == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(pts[0].s_star) < 1e-6);
    CHECK(pts[0].indicator_below < 0.0);
    CHECK(pts[0].indicator_above > 0.0);
}

TEST_CASE("chirped real-dipole separatrix matches the on-axis solution")
{
    const auto sys = real_helium();
    const double chirp = sys.mu.real() > 0.0 ? 1.0 : -1.0;
    const auto pts = find_separatrix(sys, {0.5, 1.0, 2.0}, 3.0 * kPi);
    for (const auto& pt : pts) {
        const auto ref = on_axis_coalescence(pt.alpha, chirp);
        CHECK(pt.eps0_crit_ratio == doctest::Approx(ref.eps0_crit_ratio).epsilon(1e-6));
        CHECK(pt.s_star == doctest::Approx(ref.s_star).epsilon(1e-5));
        CHECK(pt.eps0_crit_ratio > 1.0);
    }
}

TEST_CASE("separatrix outside the bracket is an error")
{
    SeparatrixOptions o;
    o.ratio_min = 2.0;
    o.ratio_max = 4.0;
    CHECK_THROWS_WITH_AS((void)find_separatrix(real_helium(), {0.0}, 3.0 * kPi, o),
                         doctest::Contains("no coalescence in range"), NumericalError);
    o.ratio_min = 5.0;
    CHECK_THROWS_AS((void)find_separatrix(real_helium(), {0.0}, 3.0 * kPi, o), InputError);
}

TEST_CASE("leading pair is mirrored for a real dipole")
{
    const auto shape = ContourShape::from_ratio(real_helium(), 3.0, 2.0);
    auto rep = find_dynamical_eps(shape);
    attach_sigmas(shape, rep);
    const auto lead = leading_roots(rep, 2);
    REQUIRE(lead.size() == 2);
    const cplx s1 = *rep.roots[lead[0]].sigma_k;
    const cplx s2 = *rep.roots[lead[1]].sigma_k;
    CHECK(s1.real() == doctest::Approx(s2.real()).epsilon(1e-8));
    CHECK(s1.imag() == doctest::Approx(-s2.imag()).epsilon(1e-8));
}

TEST_CASE("leading exponent is real below the separatrix and complex above")
{
    const auto sys = real_helium();
    const double alpha = 2.0;
    const double crit = find_separatrix(sys, {alpha}, 3.0 * kPi).front().eps0_crit_ratio;
    auto leading = [&](double r) {
        const auto shape = ContourShape::from_ratio(sys, r, alpha);
        auto rep = find_dynamical_eps(shape);
        attach_sigmas(shape, rep);
        const auto lead = leading_roots(rep, 1);
        REQUIRE(lead.size() == 1);
        return std::pair{rep.roots[lead[0]].t_k, *rep.roots[lead[0]].sigma_k};
    };
    const auto [t_below, s_below] = leading(0.99 * crit);
    CHECK(std::abs(t_below.real()) < 1e-10);
    CHECK(std::abs(s_below.imag()) < 1e-4);
    const auto [t_above, s_above] = leading(1.01 * crit);
    CHECK(std::abs(t_above.real()) > 1e-4);
    CHECK(std::abs(s_above.imag()) > 1e-4);
}
