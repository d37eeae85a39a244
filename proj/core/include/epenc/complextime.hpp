#pragma once

// Dynamical exceptional points: zeros of f(x) = delta(x)^2 + rabi(x)^2 in the
// complex plane of x = t / tau, their phase exponents sigma_k, the residue-sum
// model for the first-order amplitude and the coalescence (separatrix) finder.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epenc/model.hpp"
#include "epenc/perturbation.hpp"
#include "epenc/quadrature.hpp"

namespace epenc {

struct SearchRegion {
    double re_min = -4.0;
    double re_max = 4.0;
    double im_min = -3.0;
    double im_max = 3.0;
    int nx = 80;
    int ny = 60;
    int max_doublings = 3;  // adaptive seed-grid refinement levels
    bool adaptive = true;
    double dedupe_tol = 1e-8;
    double residual_tol = 1e-12;
    double pair_tol = 5e-2;  // match radius for the partner under x -> -conj(x)
};

struct DynamicalEP {
    cplx t_k{0.0, 0.0};  // units of tau
    double residual = 0.0;
    double fprime_abs = 0.0;
    int multiplicity = 1;  // 2 marks a coalescence (double root)
    std::optional<cplx> sigma_k;
    std::optional<cplx> a_k;
    int pair_id = -1;  // index of the partner under t -> -conj(t), -1 if none
};

struct RootSearchReport {
    std::vector<DynamicalEP> roots;
    std::vector<std::string> warnings;
    int nx_used = 0;
    int ny_used = 0;
    int winding_number = 0;  // argument-principle zero count inside the region
};

/// Multi-start Newton search seeded on a uniform grid over the region, with
/// the grid doubled until the root count is stable. Roots are sorted by
/// |Im t| and then Re t.
[[nodiscard]] RootSearchReport find_dynamical_eps(const ContourShape& shape, const SearchRegion& region = {});
[[nodiscard]] RootSearchReport find_dynamical_eps(const SystemParams& sys, const PulseParams& p,
                                                  const SearchRegion& region = {});

/// Newton refinement of a single root from a seed; handles double roots.
/// Returns std::nullopt when no root within residual_tol is reached.
[[nodiscard]] std::optional<DynamicalEP> refine_root(const ContourShape& shape, cplx seed,
                                                     double residual_tol = 1e-12);

/// Number of zeros of f inside the rectangle, by the argument principle.
[[nodiscard]] int count_zeros(const ContourShape& shape, const SearchRegion& region);

enum class SigmaPath { RealThenVertical, Straight };

struct SigmaOptions {
    quad::QuadOptions quad{1e-12, 1e-15, 8, 40, 2'000'000, 12};
    double detour_radius = 1e-2;
    SigmaPath path = SigmaPath::RealThenVertical;
    double x_span = 6.0;
};

/// Phase exponent of a dynamical EP, normalized so that the amplitude
/// contribution of the root is proportional to exp(-kappa * sigma) with
/// kappa = phi / sqrt(2 pi). It equals i times the integral of the continued
/// split sqrt(f) from the start of the pulse to t_k, referenced to the
/// adiabatic phase of the final state; it does not depend on tau or phi.
/// other_roots are avoided by small detours. Throws NumericalError when
/// another root is too close to t_k for a detour.
[[nodiscard]] cplx sigma_k(const ContourShape& shape, cplx t_k, const std::vector<cplx>& other_roots,
                           const SigmaOptions& opts = {});
[[nodiscard]] cplx sigma_k(const SystemParams& sys, const PulseParams& p, const DynamicalEP& ep,
                           const std::vector<cplx>& other_roots, const SigmaOptions& opts = {});

/// Fills sigma_k for every root of the report.
void attach_sigmas(const ContourShape& shape, RootSearchReport& report, const SigmaOptions& opts = {});

/// Indices of the k roots with the smallest positive Re(sigma), i.e. the
/// dominant contributions at large pulse area.
[[nodiscard]] std::vector<int> leading_roots(const RootSearchReport& report, int k);

struct ResidueFitOptions {
    int K = 2;
    double condition_limit = 1e10;
    PerturbationOptions pert;
    double x_span = 6.0;
};

struct ResidueFitReport {
    std::vector<cplx> sigma;
    std::vector<cplx> a;
    std::vector<double> phi;
    std::vector<cplx> a_plus;  // first-order samples used in the fit
    double residual_norm = 0.0;  // relative, row-weighted
    double r_squared = 0.0;      // uncentred, on the weighted rows
    double condition = 0.0;
    double amplitude_period = 0.0;  // 2 pi sqrt(2 pi) / |Im sigma_1|; inf on-axis
    double node_spacing = 0.0;      // 2 pi sqrt(2 pi) / |Im(sigma_1 - sigma_2)|; inf if K < 2
    double log_slope = 0.0;         // -Re sigma_1 / sqrt(2 pi)
};

/// Model amplitude -sum_k a_k exp(-phi sigma_k / sqrt(2 pi)).
[[nodiscard]] cplx residue_model(std::span<const cplx> sigma, std::span<const cplx> a, double phi);

/// Least-squares fit of the complex weights a_k given sigma_k and samples of
/// the first-order amplitude at the listed pulse areas. Rows are weighted by
/// 1/|a_plus| so that all samples count in relative terms.
[[nodiscard]] ResidueFitReport residue_model_fit(const ContourShape& shape, std::span<const cplx> sigma,
                                                 std::span<const double> phi_samples,
                                                 const ResidueFitOptions& opts = {});

/// Same, with a_plus samples supplied by the caller.
[[nodiscard]] ResidueFitReport residue_model_fit_samples(std::span<const cplx> sigma,
                                                         std::span<const double> phi_samples,
                                                         std::span<const cplx> a_plus_samples,
                                                         double condition_limit = 1e10);

struct SeparatrixOptions {
    double ratio_min = 0.5;
    double ratio_max = 16.0;
    int scan_points = 64;  // geometric scan before bisection
    double ratio_tol = 1e-10;
    SearchRegion region;
    int threads = 1;
};

struct SeparatrixPoint {
    double alpha = 0.0;
    double eps0_crit_ratio = 0.0;
    double s_star = 0.0;  // Im of the coalescing pair's midpoint, units of tau
    double phi = 0.0;
    int iterations = 0;
    cplx t_a{0.0, 0.0};
    cplx t_b{0.0, 0.0};
    double indicator_below = 0.0;
    double indicator_above = 0.0;
    std::string method;
};

/// Coalescing pair near the origin at one contour shape, located from the
/// critical point of f nearest to the seed.
struct RootPair {
    cplx a;
    cplx b;
    cplx critical_point;
};
[[nodiscard]] RootPair coalescing_pair(const ContourShape& shape, cplx critical_seed);

/// Indicator Re[(t_a - t_b)^2]: negative while the pair is separated along
/// the imaginary direction, positive once it has split sideways.
[[nodiscard]] double coalescence_indicator(const RootPair& pair);

/// For each alpha, the strength ratio eps0_max / eps0_EP at which the two
/// dynamical EPs nearest to the real axis coalesce. Shapes do not depend on
/// phi, which is only recorded.
[[nodiscard]] std::vector<SeparatrixPoint> find_separatrix(const SystemParams& sys,
                                                           const std::vector<double>& alpha_list, double phi,
                                                           const SeparatrixOptions& opts = {});

/// Cross-check for Im(mu) = 0: solves f(is) = f'(is) = 0 on the imaginary
/// axis for (s, eps ratio).
struct OnAxisCoalescence {
    double eps0_crit_ratio;
    double s_star;
};
[[nodiscard]] OnAxisCoalescence on_axis_coalescence(double alpha, double chirp_sign);

}  // namespace epenc
