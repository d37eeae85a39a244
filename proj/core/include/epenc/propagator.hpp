#pragma once

#include <utility>
#include <vector>

#include "epenc/model.hpp"
#include "epenc/ode.hpp"

namespace epenc {

struct PropagationOptions {
    OdeOptions ode;
    bool record_trajectory = false;
    int trajectory_samples = 2048;
    /// Adiabatic frame only: minimum allowed |eps_minus - eps_plus| on the real
    /// axis, relative to |Omega_max|.
    double tol_branch = 1e-3;
};

struct TrajectorySample {
    double t_over_tau;
    cplx c_bound;
    cplx c_res;
    cplx split;  // eps_minus - eps_plus, continued along the real axis (a.u.)
};

struct PropagationStats {
    long steps = 0;
    long rejected = 0;
    long evaluations = 0;
    double max_local_error = 0.0;
    double error_estimate = 0.0;
    double min_split = 0.0;  // min |split| / |Omega_max| over evaluated times
};

struct PropagationResult {
    double p_bound = 1.0;
    StateVector final_state;
    std::vector<TrajectorySample> trajectory;
    PropagationStats stats;
};

/// Adiabatic-frame amplitudes at the end of the pulse, in the convention where
/// psi = sum a_k exp(i int eps_k dt) Phi_k.
struct AdiabaticAmplitudes {
    cplx a_minus{1.0, 0.0};
    cplx a_plus{0.0, 0.0};
    cplx phase_integral{0.0, 0.0};  // int (eps_minus - eps_plus) dt
    cplx mixing_angle{0.0, 0.0};    // theta with tan(2 theta) = Omega / Delta
};

/// Integrates the diabatic amplitudes from -t_span*tau to +t_span*tau with the
/// bound state initially populated. The resonance decays for gamma > 0.
[[nodiscard]] PropagationResult propagate_diabatic(const SystemParams& sys, const PulseParams& p,
                                                   const PropagationOptions& opts = {});

/// Same evolution expressed in the instantaneous adiabatic basis, with the
/// mixing angle integrated alongside so that the labels follow continuity.
/// Throws NumericalError when the split comes closer to zero than tol_branch.
[[nodiscard]] std::pair<AdiabaticAmplitudes, PropagationResult>
propagate_adiabatic(const SystemParams& sys, const PulseParams& p, const PropagationOptions& opts = {});

[[nodiscard]] double survival_probability(const SystemParams& sys, const PulseParams& p,
                                          const PropagationOptions& opts = {});

}  // namespace epenc
