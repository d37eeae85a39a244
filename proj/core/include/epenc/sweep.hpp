#pragma once

#include <string>
#include <vector>

#include "epenc/model.hpp"
#include "epenc/perturbation.hpp"
#include "epenc/propagator.hpp"

namespace epenc {

/// Inclusive uniform range with n >= 2 points, written "min:max:n".
struct AxisRange {
    double min = 0.0;
    double max = 1.0;
    int n = 2;

    [[nodiscard]] std::vector<double> values() const;
    static AxisRange parse(const std::string& text);
};

enum class SweepMode { Exact, Perturbative, Both };

[[nodiscard]] SweepMode parse_sweep_mode(const std::string& s);
[[nodiscard]] std::string to_string(SweepMode m);

struct SweepSpec {
    AxisRange eps_ratio{0.0, 16.0, 50};
    AxisRange alpha{0.0, 2.0, 50};
    double phi = 3.0 * kPi;
    SweepMode mode = SweepMode::Exact;
    SystemParams system = helium_preset();
    double t_span = 6.0;
    PropagationOptions propagation;
    PerturbationOptions perturbation;
    int threads = 1;

    void validate() const;
};

enum class PointStatus { Ok, SolverFailed, PertSingular };

[[nodiscard]] std::string to_string(PointStatus s);

struct SweepRecord {
    double eps_ratio = 0.0;
    double alpha = 0.0;
    double tau = 0.0;
    double p_bound_exact = 0.0;  // NaN when not computed or failed
    double p_bound_pert = 0.0;   // NaN when not computed or failed
    PointStatus status = PointStatus::Ok;
    std::string message;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRecord> records;  // row-major: eps_ratio outer, alpha inner
    double wall_seconds = 0.0;
};

/// Evaluates one grid point at fixed pulse area; failures are recorded in
/// the status, never thrown.
[[nodiscard]] SweepRecord evaluate_point(const SweepSpec& spec, double eps_ratio, double alpha);

/// Evaluates every grid point with a pool of spec.threads workers. The output
/// order does not depend on scheduling.
[[nodiscard]] SweepResult run_sweep(const SweepSpec& spec);

/// Record at (eps index i, alpha index j).
[[nodiscard]] const SweepRecord& at(const SweepResult& r, int i, int j);

struct ContourSample {
    double t_over_tau;
    double omega;  // instantaneous laser frequency (a.u.)
    double eps0;   // field envelope (a.u.)
};

struct ContourTable {
    std::vector<ContourSample> samples;
    double omega_ep = 0.0;
    double eps0_ep = 0.0;
};

/// Samples the pulse contour [omega(t), eps0(t)] uniformly over the window.
[[nodiscard]] ContourTable emit_contour(const SystemParams& sys, const PulseParams& p, int n_samples);

/// Interior local minima of a sampled curve whose depth below the lower of
/// the two flanking maxima exceeds min_relative_depth of that maximum.
[[nodiscard]] std::vector<int> find_nodes(const std::vector<double>& values, double min_relative_depth = 1e-3);

/// Local-minimum refinement of a scalar function by golden-section search.
template <class F>
double golden_minimum(const F& f, double a, double b, double tol = 1e-8, int max_iter = 200)
{
    const double g = 0.61803398874989484820;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace epenc
