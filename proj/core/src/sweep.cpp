#include "epenc/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace epenc {

std::vector<double> AxisRange::values() const
{
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = i == n - 1 ? max : min + (max - min) * double(i) / (n - 1);
    return v;
}

AxisRange AxisRange::parse(const std::string& text)
{
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) || c.find(':') != std::string::npos)
        throw InputError("range must be written min:max:n, got '" + text + "'");
    AxisRange r;
    try {
        std::size_t ua = 0, ub = 0, uc = 0;
        r.min = std::stod(a, &ua);
        r.max = std::stod(b, &ub);
        r.n = std::stoi(c, &uc);
        if (ua != a.size() || ub != b.size() || uc != c.size()) throw InputError("");
    } catch (const std::exception&) {
        throw InputError("range must be written min:max:n, got '" + text + "'");
    }
    if (r.n < 2) throw InputError("range needs n >= 2: '" + text + "'");
    if (!(r.max >= r.min)) throw InputError("range needs max >= min: '" + text + "'");
    return r;
}

SweepMode parse_sweep_mode(const std::string& s)
{
    if (s == "exact") return SweepMode::Exact;
    if (s == "perturbative") return SweepMode::Perturbative;
    if (s == "both") return SweepMode::Both;
    throw InputError("mode must be exact, perturbative or both, got '" + s + "'");
}

std::string to_string(SweepMode m)
{
    switch (m) {
    case SweepMode::Exact: return "exact";
    case SweepMode::Perturbative: return "perturbative";
    case SweepMode::Both: return "both";
    }
    return "exact";
}

std::string to_string(PointStatus s)
{
    switch (s) {
    case PointStatus::Ok: return "ok";
    case PointStatus::SolverFailed: return "solver-failed";
    case PointStatus::PertSingular: return "pert-singular";
    }
    return "ok";
}

void SweepSpec::validate() const
{
    system.validate();
    if (eps_ratio.n < 2 || alpha.n < 2) throw InputError("sweep axes need n >= 2");
    if (!(phi > 0.0)) throw InputError("sweep needs phi > 0");
    if (!(eps_ratio.min >= 0.0)) throw InputError("eps ratio must be >= 0");
    if (!(system.gamma > 0.0)) throw InputError("eps ratio axis needs gamma > 0 (eps0_EP = 0 otherwise)");
    if (!(t_span >= 4.0)) throw InputError("t_span must be >= 4");
    if (threads < 1) throw InputError("threads must be >= 1");
}

SweepRecord evaluate_point(const SweepSpec& spec, double eps_ratio, double alpha)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    SweepRecord rec;
    rec.eps_ratio = eps_ratio;
    rec.alpha = alpha;
    rec.p_bound_exact = nan;
    rec.p_bound_pert = nan;
    const bool want_exact = spec.mode != SweepMode::Perturbative;
    const bool want_pert = spec.mode != SweepMode::Exact;

    if (eps_ratio == 0.0) {
        rec.tau = std::numeric_limits<double>::infinity();
        if (want_exact) rec.p_bound_exact = 1.0;
        if (want_pert) rec.p_bound_pert = 0.0;
        return rec;
    }
    const double eps0 = eps_ratio * cw_exceptional_point(spec.system).eps0_ep;
    PulseParams p;
    try {
        p = PulseParams::with_area(spec.system, eps0, alpha, spec.phi, spec.t_span);
        p.validate();
    } catch (const InputError& e) {
        rec.status = PointStatus::SolverFailed;
        rec.message = e.what();
        return rec;
    }
    rec.tau = p.tau;
    if (want_exact) {
        try {
            rec.p_bound_exact = survival_probability(spec.system, p, spec.propagation);
        } catch (const std::exception& e) {
            rec.status = PointStatus::SolverFailed;
            rec.message = e.what();
        }
    }
    if (want_pert) {
        try {
            rec.p_bound_pert = a_plus_first_order(spec.system, p, spec.perturbation).p_bound_pert;
        } catch (const std::exception& e) {
            if (rec.status == PointStatus::Ok) {
                rec.status = PointStatus::PertSingular;
                rec.message = e.what();
            }
        }
    }
    return rec;
}

SweepResult run_sweep(const SweepSpec& spec)
{
    spec.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> eps = spec.eps_ratio.values();
    const std::vector<double> alp = spec.alpha.values();
    SweepResult res;
    res.spec = spec;
    res.records.resize(eps.size() * alp.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < res.records.size(); k = next++)
            res.records[k] = evaluate_point(spec, eps[k / alp.size()], alp[k % alp.size()]);
    };
    const int nt = std::min<int>(spec.threads, int(res.records.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

const SweepRecord& at(const SweepResult& r, int i, int j)
{
    return r.records.at(std::size_t(i) * r.spec.alpha.n + j);
}

ContourTable emit_contour(const SystemParams& sys, const PulseParams& p, int n_samples)
{
    sys.validate();
    p.validate();
    if (n_samples < 2) throw InputError("contour needs at least 2 samples");
    ContourTable t;
    const auto ep = cw_exceptional_point(sys);
    t.omega_ep = ep.omega_ep;
    t.eps0_ep = ep.eps0_ep;
    t.samples.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double x = -p.t_span + 2.0 * p.t_span * double(i) / (n_samples - 1);
        const double tt = x * p.tau;
        t.samples.push_back({x, instantaneous_frequency(sys, p, tt), field_envelope(p, tt)});
    }
    return t;
}

std::vector<int> find_nodes(const std::vector<double>& v, double min_depth)
{
    std::vector<int> minima;
    const int n = int(v.size());
    for (int i = 1; i + 1 < n; ++i)
        if (std::isfinite(v[i]) && v[i] < v[i - 1] && v[i] <= v[i + 1]) minima.push_back(i);
    std::vector<int> nodes;
    for (std::size_t m = 0; m < minima.size(); ++m) {
        const int i = minima[m];
        const int lo = m == 0 ? 0 : minima[m - 1];
        const int hi = m + 1 == minima.size() ? n - 1 : minima[m + 1];
        double left = v[i], right = v[i];
        for (int k = lo; k < i; ++k)
            if (std::isfinite(v[k])) left = std::max(left, v[k]);
        for (int k = i + 1; k <= hi; ++k)
            if (std::isfinite(v[k])) right = std::max(right, v[k]);
        const double ref = std::min(left, right);
        if (ref - v[i] > min_depth * ref) nodes.push_back(i);
    }
    return nodes;
}

}  // namespace epenc
