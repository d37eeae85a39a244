#pragma once

#include <vector>

#include "epenc/model.hpp"
#include "epenc/quadrature.hpp"

namespace epenc {

struct PerturbationOptions {
    quad::QuadOptions quad{1e-9, 1e-15, 16, 30, 2'000'000, 12};
    double tol_ep = kDefaultTolEp;
    int phase_samples = 0;  // > 0 records the running phase integral at uniform times
};

struct PhaseSample {
    double t_over_tau;
    cplx phase;  // int_{t_start}^{t} (eps_minus - eps_plus) dt'
};

/// First-order amplitude of the initially unpopulated adiabatic state at the
/// end of the pulse. The phase reference is chosen so that |a_plus|^2 is a
/// final population: a_plus = -int N exp(i [Q_plus(T) - int^t (eps_plus - eps_minus)]) dt
/// with Q_plus(T) the full accumulated eps_plus phase.
struct FirstOrderResult {
    cplx a_plus{0.0, 0.0};
    double p_bound_pert = 0.0;       // |a_plus|^2
    double adiabatic_survival = 1.0; // |exp(i Q_minus(T))|^2, zeroth order
    bool exchange = false;           // the continued branch ends with Phi_plus on the bound state
    cplx phase_total{0.0, 0.0};      // int (eps_minus - eps_plus) dt over the window
    std::vector<PhaseSample> phase_samples;
    double error_estimate = 0.0;
    long evaluations = 0;
};

/// N = <Phi_plus | d Phi_minus / dt> in a.u. of inverse time; closed form in
/// Omega, Delta and their analytic time derivatives. Throws NumericalError
/// within tol_ep of a dynamical EP.
[[nodiscard]] cplx nonadiabatic_coupling(const SystemParams& sys, const PulseParams& p, cplx t,
                                         double tol_ep = kDefaultTolEp);

[[nodiscard]] FirstOrderResult a_plus_first_order(const SystemParams& sys, const PulseParams& p,
                                                  const PerturbationOptions& opts = {});

/// Nondimensional core: kappa = tau * eps0_max * |Re mu| = phi / sqrt(2 pi),
/// integration window x in [-x_span, x_span].
[[nodiscard]] FirstOrderResult a_plus_first_order(const ContourShape& shape, double kappa, double x_span,
                                                  const PerturbationOptions& opts = {});

/// Smallest |Delta^2 + Omega^2| (nondimensional) on the real segment
/// [-x_span, x_span], located by sampling and golden-section refinement.
[[nodiscard]] double min_real_axis_discriminant(const ContourShape& shape, double x_span);

}  // namespace epenc
