#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "epenc/complextime.hpp"
#include "epenc/config.hpp"
#include "epenc/io.hpp"
#include "epenc/perturbation.hpp"
#include "epenc/propagator.hpp"
#include "epenc/sweep.hpp"

namespace epenc::cli {

namespace {

using nlohmann::json;

struct Common {
    std::string config;
    std::string out;
    std::string format = "csv";
    int threads = 0;
    std::string seed_grid;
    double tol = 0.0;
    bool real_dipole = false;
};

struct PointArgs {
    std::optional<double> eps0;
    std::optional<double> eps_ratio;
    std::optional<double> alpha;
    std::optional<double> phi;
    std::optional<double> tau;
    std::optional<double> t_span;
};

void add_point_options(CLI::App* sub, PointArgs& pa)
{
    sub->add_option("--eps0", pa.eps0, "peak field strength (a.u.)");
    sub->add_option("--eps-ratio", pa.eps_ratio, "peak field strength in units of eps0_EP");
    sub->add_option("--alpha", pa.alpha, "chirp parameter");
    sub->add_option("--phi", pa.phi, "temporal pulse area (fixes tau)");
    sub->add_option("--tau", pa.tau, "pulse duration (a.u.)");
    sub->add_option("--t-span", pa.t_span, "half width of the time window in units of tau");
}

ParameterSet base_parameters(const Common& c)
{
    ParameterSet ps = c.config.empty() ? ParameterSet{} : load_config(c.config);
    if (c.real_dipole) ps.system = with_real_dipole(ps.system);
    ps.system.validate();
    return ps;
}

PulseParams resolve_pulse(const Common& c, const PointArgs& pa)
{
    ParameterSet ps = base_parameters(c);
    if (pa.eps0 && pa.eps_ratio) throw InputError("give either --eps0 or --eps-ratio, not both");
    if (pa.eps0) ps.eps0_max = *pa.eps0;
    if (pa.eps_ratio) ps.eps0_max = *pa.eps_ratio * cw_exceptional_point(ps.system).eps0_ep;
    if (pa.alpha) ps.alpha = *pa.alpha;
    if (pa.t_span) ps.t_span = *pa.t_span;
    if (pa.phi || pa.tau) {
        ps.phi = pa.phi;
        ps.tau = pa.tau;
    }
    if (!ps.eps0_max) throw InputError("peak field missing: give --eps0, --eps-ratio or eps0_max in the config");
    if (!ps.phi && !ps.tau) throw InputError("pulse duration missing: give --phi or --tau");
    return ps.pulse();
}

std::pair<int, int> parse_grid(const std::string& s)
{
    const auto x = s.find_first_of("xX");
    if (x == std::string::npos) throw InputError("grid must be written NxM, got '" + s + "'");
    try {
        std::size_t u1 = 0, u2 = 0;
        const int n = std::stoi(s.substr(0, x), &u1);
        const int m = std::stoi(s.substr(x + 1), &u2);
        if (u1 != x || u2 != s.size() - x - 1 || n < 2 || m < 2) throw InputError("");
        return {n, m};
    } catch (const std::exception&) {
        throw InputError("grid must be written NxM with N, M >= 2, got '" + s + "'");
    }
}

std::pair<double, double> parse_interval(const std::string& s)
{
    const auto c = s.find(':');
    try {
        if (c == std::string::npos) throw InputError("");
        std::size_t u1 = 0, u2 = 0;
        const double a = std::stod(s.substr(0, c), &u1);
        const double b = std::stod(s.substr(c + 1), &u2);
        if (u1 != c || u2 != s.size() - c - 1 || !(b > a)) throw InputError("");
        return {a, b};
    } catch (const std::exception&) {
        throw InputError("interval must be written a:b with a < b, got '" + s + "'");
    }
}

int resolve_threads(const Common& c)
{
    if (c.threads > 0) return c.threads;
    if (c.threads < 0) throw InputError("--threads must be >= 1");
    if (const char* env = std::getenv("EP_ENCIRCLE_THREADS"); env && *env) {
        try {
            std::size_t used = 0;
            const int n = std::stoi(env, &used);
            if (used == std::string(env).size() && n >= 1) return n;
        } catch (const std::exception&) {
        }
        throw InputError(std::string("EP_ENCIRCLE_THREADS must be a positive integer, got '") + env + "'");
    }
    return int(std::max(1u, std::thread::hardware_concurrency()));
}

json pulse_json(const SystemParams& sys, const PulseParams& p)
{
    const double eep = cw_exceptional_point(sys).eps0_ep;
    return {{"eps0_max", p.eps0_max}, {"eps_ratio", eep > 0.0 ? p.eps0_max / eep : 0.0}, {"tau", p.tau},
            {"alpha", p.alpha},       {"t_span", p.t_span},  {"phi", p.area(sys)}};
}

json base_meta(const std::string& kind, const SystemParams& sys)
{
    const auto ep = cw_exceptional_point(sys);
    return {{"kind", kind},
            {"code_version", EPENC_VERSION_STRING},
            {"system", io::system_json(sys)},
            {"omega_ep", ep.omega_ep},
            {"eps0_ep", ep.eps0_ep}};
}

void emit(const Common& c, std::ostream& out, const io::Table& t, const json& meta)
{
    const io::Format f = io::parse_format(c.format);
    if (!c.out.empty()) {
        io::write_table(c.out, t, meta, f);
        return;
    }
    out << (f == io::Format::Json ? io::to_json_document(t, meta) : io::to_csv(t));
}

SearchRegion region_from(const Common& c, const std::string& re_range, const std::string& im_range)
{
    SearchRegion reg;
    if (!c.seed_grid.empty()) std::tie(reg.nx, reg.ny) = parse_grid(c.seed_grid);
    if (!re_range.empty()) std::tie(reg.re_min, reg.re_max) = parse_interval(re_range);
    if (!im_range.empty()) std::tie(reg.im_min, reg.im_max) = parse_interval(im_range);
    if (c.tol > 0.0) reg.residual_tol = c.tol;
    return reg;
}

std::vector<cplx> leading_sigmas(const RootSearchReport& rep, int K)
{
    const auto lead = leading_roots(rep, K);
    if (int(lead.size()) < K)
        throw NumericalError("only " + std::to_string(lead.size()) + " roots with Re sigma > 0 found; need " +
                             std::to_string(K));
    std::vector<cplx> s;
    for (int k : lead) s.push_back(*rep.roots[k].sigma_k);
    return s;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Encircling exceptional points with chirped laser pulses: propagation, perturbation theory, "
                 "complex-time analysis and phase-diagram sweeps.",
                 "ep_encircle"};
    app.require_subcommand(1);
    app.fallthrough();
    Common c;
    app.add_option("--config", c.config, "key=value parameter file")->check(CLI::ExistingFile);
    app.add_option("--out", c.out, "output file (default: standard output)");
    app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", c.threads, "worker threads (fallback: EP_ENCIRCLE_THREADS)");
    app.add_option("--seed-grid", c.seed_grid, "root-search seed grid NxM");
    app.add_option("--tol", c.tol, "primary tolerance of the subcommand");
    app.add_flag("--real-dipole", c.real_dipole, "set Im(mu) = 0 (time-symmetric variant)");

    auto* ep = app.add_subcommand("ep", "print the cw exceptional point (omega_EP, eps0_EP)");

    PointArgs prop_pa;
    std::string frame = "diabatic";
    std::string traj_out;
    auto* propagate = app.add_subcommand("propagate", "integrate the two-state dynamics for one pulse");
    add_point_options(propagate, prop_pa);
    propagate->add_option("--frame", frame, "diabatic or adiabatic")->check(CLI::IsMember({"diabatic", "adiabatic"}));
    propagate->add_option("--trajectory", traj_out, "also write the sampled trajectory CSV here");

    PointArgs pert_pa;
    int phase_samples = 0;
    std::string phase_out;
    auto* perturb = app.add_subcommand("perturb", "first-order non-adiabatic amplitude a_plus");
    add_point_options(perturb, pert_pa);
    perturb->add_option("--phase-samples", phase_samples, "record the running phase integral at N times");
    perturb->add_option("--phase-out", phase_out, "CSV file for the phase samples");

    PointArgs dyn_pa;
    std::string dyn_re, dyn_im, field_out, field_grid = "161x121", dyn_fit_phi;
    bool no_sigma = false;
    int dyn_k = 2;
    auto* dyn = app.add_subcommand("dyn-eps", "locate dynamical EPs in complex time");
    add_point_options(dyn, dyn_pa);
    dyn->add_option("--re-range", dyn_re, "search interval of Re t/tau, a:b");
    dyn->add_option("--im-range", dyn_im, "search interval of Im t/tau, a:b");
    dyn->add_flag("--no-sigma", no_sigma, "skip the phase exponents");
    dyn->add_option("--fit-phi", dyn_fit_phi, "fit a_k for the K leading roots over pulse areas min:max:n");
    dyn->add_option("--K", dyn_k, "number of leading roots for --fit-phi");
    dyn->add_option("--field-out", field_out, "also write |split| on a grid to this CSV");
    dyn->add_option("--field-grid", field_grid, "grid for --field-out, NxM");

    PointArgs sig_pa;
    std::optional<int> sig_index;
    std::string sig_root, sig_path = "real-vertical";
    auto* sig = app.add_subcommand("sigma", "phase exponent sigma_k of one dynamical EP");
    add_point_options(sig, sig_pa);
    sig->add_option("--index", sig_index, "root index in the sorted dyn-eps list");
    sig->add_option("--root", sig_root, "seed for the root, re,im in units of tau");
    sig->add_option("--path", sig_path, "quadrature path")->check(CLI::IsMember({"real-vertical", "straight"}));

    PointArgs fit_pa;
    std::string fit_phi = "6:50:16";
    int fit_k = 2;
    auto* fit = app.add_subcommand("fit", "fit the residue-sum model for a_plus(phi)");
    add_point_options(fit, fit_pa);
    fit->add_option("--phi-range", fit_phi, "pulse areas min:max:n");
    fit->add_option("--K", fit_k, "number of retained roots");

    std::string sep_alpha = "0:2:21";
    double sep_phi = 3.0 * kPi;
    double sep_lo = 0.5, sep_hi = 16.0;
    auto* sep = app.add_subcommand("separatrix", "critical strength vs chirp from root coalescence");
    sep->add_option("--alpha", sep_alpha, "chirp values min:max:n");
    sep->add_option("--phi", sep_phi, "pulse area recorded with the curve");
    sep->add_option("--ratio-min", sep_lo, "lower end of the eps ratio bracket");
    sep->add_option("--ratio-max", sep_hi, "upper end of the eps ratio bracket");

    std::string sw_eps = "0:16:50", sw_alpha = "0:2:50", sw_mode = "exact";
    double sw_phi = 3.0 * kPi;
    double sw_tspan = 6.0;
    auto* sweep = app.add_subcommand("sweep", "fixed-area grid over (eps ratio, alpha)");
    sweep->add_option("--eps", sw_eps, "eps ratio range min:max:n");
    sweep->add_option("--alpha", sw_alpha, "chirp range min:max:n");
    sweep->add_option("--phi", sw_phi, "fixed temporal pulse area");
    sweep->add_option("--mode", sw_mode, "exact, perturbative or both")
        ->check(CLI::IsMember({"exact", "perturbative", "both"}));
    sweep->add_option("--t-span", sw_tspan, "half width of the time window in units of tau");

    PointArgs con_pa;
    int con_samples = 2048;
    auto* contour = app.add_subcommand("contour", "pulse contour in the (omega, eps0) plane");
    add_point_options(contour, con_pa);
    contour->add_option("--samples", con_samples, "number of samples");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitInput;
    }

    try {
        (void)io::parse_format(c.format);
        if (ep->parsed()) {
            const ParameterSet ps = base_parameters(c);
            const auto e = cw_exceptional_point(ps.system);
            io::Table t;
            t.columns = {"omega_ep", "eps0_ep"};
            t.add_row({e.omega_ep, e.eps0_ep});
            emit(c, out, t, base_meta("ep", ps.system));
        } else if (propagate->parsed()) {
            const ParameterSet ps = base_parameters(c);
            const PulseParams p = resolve_pulse(c, prop_pa);
            PropagationOptions po;
            if (c.tol > 0.0) po.ode.rtol = c.tol;
            po.record_trajectory = !traj_out.empty();
            PropagationResult r;
            std::optional<AdiabaticAmplitudes> am;
            if (frame == "adiabatic") {
                auto pr = propagate_adiabatic(ps.system, p, po);
                am = pr.first;
                r = std::move(pr.second);
            } else {
                r = propagate_diabatic(ps.system, p, po);
            }
            io::Table t;
            t.columns = {"p_bound", "re_cb", "im_cb", "re_cr", "im_cr", "norm", "steps", "error_estimate"};
            const auto& s = r.final_state;
            t.add_row({r.p_bound, s.c_bound.real(), s.c_bound.imag(), s.c_res.real(), s.c_res.imag(), s.norm(),
                       std::int64_t(r.stats.steps), r.stats.error_estimate});
            json meta = base_meta("propagate", ps.system);
            meta["pulse"] = pulse_json(ps.system, p);
            meta["frame"] = frame;
            meta["ode"] = io::ode_json(po.ode);
            meta["min_split"] = r.stats.min_split;
            if (am) {
                meta["re_a_minus"] = am->a_minus.real();
                meta["im_a_minus"] = am->a_minus.imag();
                meta["re_a_plus"] = am->a_plus.real();
                meta["im_a_plus"] = am->a_plus.imag();
            }
            if (!traj_out.empty()) {
                json tm = meta;
                tm["kind"] = "trajectory";
                io::write_table(traj_out, io::trajectory_table(r.trajectory), tm, io::Format::Csv);
            }
            emit(c, out, t, meta);
        } else if (perturb->parsed()) {
            const ParameterSet ps = base_parameters(c);
            const PulseParams p = resolve_pulse(c, pert_pa);
            PerturbationOptions po;
            if (c.tol > 0.0) po.quad.rel_tol = c.tol;
            if (phase_samples < 0) throw InputError("--phase-samples must be >= 0");
            po.phase_samples = phase_samples > 0 ? phase_samples : (phase_out.empty() ? 0 : 2048);
            const FirstOrderResult r = a_plus_first_order(ps.system, p, po);
            io::Table t;
            t.columns = {"re_a_plus", "im_a_plus", "p_bound_pert", "adiabatic_survival", "exchange",
                         "error_estimate"};
            t.add_row({r.a_plus.real(), r.a_plus.imag(), r.p_bound_pert, r.adiabatic_survival,
                       std::int64_t(r.exchange ? 1 : 0), r.error_estimate});
            json meta = base_meta("perturb", ps.system);
            meta["pulse"] = pulse_json(ps.system, p);
            meta["re_phase_total"] = r.phase_total.real();
            meta["im_phase_total"] = r.phase_total.imag();
            meta["quad_rel_tol"] = po.quad.rel_tol;
            if (!phase_out.empty()) {
                io::Table pt;
                pt.columns = {"t_over_tau", "re_phase", "im_phase"};
                for (const auto& s : r.phase_samples) pt.add_row({s.t_over_tau, s.phase.real(), s.phase.imag()});
                json pm = meta;
                pm["kind"] = "phase";
                io::write_table(phase_out, pt, pm, io::Format::Csv);
            }
            emit(c, out, t, meta);
        } else if (dyn->parsed()) {
            const ParameterSet ps = base_parameters(c);
            const PulseParams p = resolve_pulse(c, dyn_pa);
            const SearchRegion reg = region_from(c, dyn_re, dyn_im);
            const ContourShape shape = ContourShape::from(ps.system, p);
            RootSearchReport rep = find_dynamical_eps(shape, reg);
            for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
            if (!no_sigma) attach_sigmas(shape, rep);
            json meta = base_meta("dyn-eps", ps.system);
            meta["pulse"] = pulse_json(ps.system, p);
            meta["region"] = {{"re_min", reg.re_min}, {"re_max", reg.re_max}, {"im_min", reg.im_min},
                              {"im_max", reg.im_max}, {"nx", rep.nx_used},    {"ny", rep.ny_used}};
            meta["winding_number"] = rep.winding_number;
            meta["warnings"] = rep.warnings;
            if (!dyn_fit_phi.empty()) {
                if (no_sigma) throw InputError("--fit-phi needs the phase exponents; drop --no-sigma");
                const AxisRange phr = AxisRange::parse(dyn_fit_phi);
                ResidueFitOptions fo;
                fo.K = dyn_k;
                fo.x_span = p.t_span;
                const auto lead = leading_roots(rep, dyn_k);
                const auto sg = leading_sigmas(rep, dyn_k);
                const auto phis = phr.values();
                const auto fr = residue_model_fit(shape, sg, phis, fo);
                for (std::size_t k = 0; k < lead.size(); ++k) rep.roots[lead[k]].a_k = fr.a[k];
                meta["fit"] = {{"r_squared", fr.r_squared}, {"condition", fr.condition},
                               {"phi", {phr.min, phr.max, phr.n}}};
            }
            if (!field_out.empty()) {
                const auto [nx, ny] = parse_grid(field_grid);
                json fm = meta;
                fm["kind"] = "split-field";
                fm["units"] = "abs_split in units of eps0_max |Re mu|";
                io::write_table(field_out, io::split_field_table(shape, reg, nx, ny), fm, io::Format::Csv);
            }
            emit(c, out, io::dyn_eps_table(rep.roots), meta);
        } else if (sig->parsed()) {
            const ParameterSet ps = base_parameters(c);
            const PulseParams p = resolve_pulse(c, sig_pa);
            const ContourShape shape = ContourShape::from(ps.system, p);
            const RootSearchReport rep = find_dynamical_eps(shape, region_from(c, "", ""));
            if (sig_index.has_value() == !sig_root.empty()) throw InputError("give exactly one of --index, --root");
            std::size_t idx = 0;
            if (sig_index) {
                if (*sig_index < 0 || std::size_t(*sig_index) >= rep.roots.size())
                    throw InputError("--index out of range: " + std::to_string(rep.roots.size()) + " roots found");
                idx = std::size_t(*sig_index);
            } else {
                const auto comma = sig_root.find(',');
                if (comma == std::string::npos) throw InputError("--root must be written re,im");
                cplx seed;
                try {
                    seed = {std::stod(sig_root.substr(0, comma)), std::stod(sig_root.substr(comma + 1))};
                } catch (const std::exception&) {
                    throw InputError("--root must be written re,im");
                }
                if (rep.roots.empty()) throw NumericalError("no dynamical EPs in the search region");
                idx = std::size_t(std::min_element(rep.roots.begin(), rep.roots.end(),
                                                   [&](const auto& a, const auto& b) {
                                                       return std::abs(a.t_k - seed) < std::abs(b.t_k - seed);
                                                   }) -
                                  rep.roots.begin());
            }
            std::vector<cplx> others;
            for (std::size_t k = 0; k < rep.roots.size(); ++k)
                if (k != idx) others.push_back(rep.roots[k].t_k);
            SigmaOptions so;
            so.x_span = p.t_span;
            so.path = sig_path == "straight" ? SigmaPath::Straight : SigmaPath::RealThenVertical;
            if (c.tol > 0.0) so.quad.rel_tol = c.tol;
            const cplx s = sigma_k(shape, rep.roots[idx].t_k, others, so);
            io::Table t;
            t.columns = {"index", "re_t_over_tau", "im_t_over_tau", "re_sigma", "im_sigma"};
            t.add_row({std::int64_t(idx), rep.roots[idx].t_k.real(), rep.roots[idx].t_k.imag(), s.real(), s.imag()});
            json meta = base_meta("sigma", ps.system);
            meta["pulse"] = pulse_json(ps.system, p);
            meta["path"] = sig_path;
            emit(c, out, t, meta);
        } else if (fit->parsed()) {
            const ParameterSet ps = base_parameters(c);
            PointArgs pa = fit_pa;
            if (!pa.phi && !pa.tau) pa.phi = 1.0;  // only the shape matters here
            const PulseParams p = resolve_pulse(c, pa);
            const ContourShape shape = ContourShape::from(ps.system, p);
            RootSearchReport rep = find_dynamical_eps(shape, region_from(c, "", ""));
            attach_sigmas(shape, rep);
            const auto sg = leading_sigmas(rep, fit_k);
            const auto lead = leading_roots(rep, fit_k);
            const AxisRange phr = AxisRange::parse(fit_phi);
            ResidueFitOptions fo;
            fo.K = fit_k;
            fo.x_span = p.t_span;
            if (c.tol > 0.0) fo.pert.quad.rel_tol = c.tol;
            const auto phis = phr.values();
            const ResidueFitReport fr = residue_model_fit(shape, sg, phis, fo);
            io::Table t;
            t.columns = {"k", "re_t_over_tau", "im_t_over_tau", "re_sigma", "im_sigma", "re_a", "im_a"};
            for (int k = 0; k < fit_k; ++k) {
                const cplx tk = rep.roots[lead[k]].t_k;
                t.add_row({std::int64_t(k + 1), tk.real(), tk.imag(), fr.sigma[k].real(), fr.sigma[k].imag(),
                           fr.a[k].real(), fr.a[k].imag()});
            }
            json meta = base_meta("fit", ps.system);
            json pj = pulse_json(ps.system, p);
            pj.erase("phi");
            pj.erase("tau");
            meta["shape"] = pj;
            meta["phi"] = {phr.min, phr.max, phr.n};
            meta["r_squared"] = fr.r_squared;
            meta["residual_norm"] = fr.residual_norm;
            meta["condition"] = fr.condition;
            auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
            meta["amplitude_period"] = finite_or_null(fr.amplitude_period);
            meta["node_spacing"] = finite_or_null(fr.node_spacing);
            meta["log_slope"] = fr.log_slope;
            json samples = json::array();
            for (std::size_t i = 0; i < fr.phi.size(); ++i)
                samples.push_back({{"phi", fr.phi[i]},
                                   {"re_a_plus", fr.a_plus[i].real()},
                                   {"im_a_plus", fr.a_plus[i].imag()}});
            meta["samples"] = samples;
            emit(c, out, t, meta);
        } else if (sep->parsed()) {
            const ParameterSet ps = base_parameters(c);
            const AxisRange ar = AxisRange::parse(sep_alpha);
            SeparatrixOptions so;
            so.ratio_min = sep_lo;
            so.ratio_max = sep_hi;
            so.threads = resolve_threads(c);
            if (!c.seed_grid.empty()) std::tie(so.region.nx, so.region.ny) = parse_grid(c.seed_grid);
            if (c.tol > 0.0) so.ratio_tol = c.tol;
            const auto pts = find_separatrix(ps.system, ar.values(), sep_phi, so);
            json meta = base_meta("separatrix", ps.system);
            meta["phi"] = sep_phi;
            meta["alpha"] = {ar.min, ar.max, ar.n};
            meta["ratio_bracket"] = {so.ratio_min, so.ratio_max};
            meta["ratio_tol"] = so.ratio_tol;
            meta["method"] = pts.empty() ? "" : pts.front().method;
            emit(c, out, io::separatrix_table(pts), meta);
        } else if (sweep->parsed()) {
            const ParameterSet ps = base_parameters(c);
            SweepSpec spec;
            spec.system = ps.system;
            spec.eps_ratio = AxisRange::parse(sw_eps);
            spec.alpha = AxisRange::parse(sw_alpha);
            spec.phi = sw_phi;
            spec.mode = parse_sweep_mode(sw_mode);
            spec.t_span = sw_tspan;
            spec.threads = resolve_threads(c);
            if (c.tol > 0.0) spec.propagation.ode.rtol = c.tol;
            const SweepResult r = run_sweep(spec);
            int failed = 0;
            for (const auto& rec : r.records) failed += rec.status != PointStatus::Ok;
            if (failed) err << "warning: " << failed << " grid points did not complete; see status column\n";
            emit(c, out, io::sweep_table(r), io::sweep_metadata(r));
        } else if (contour->parsed()) {
            const ParameterSet ps = base_parameters(c);
            const PulseParams p = resolve_pulse(c, con_pa);
            const ContourTable ct = emit_contour(ps.system, p, con_samples);
            json meta = base_meta("contour", ps.system);
            meta["pulse"] = pulse_json(ps.system, p);
            emit(c, out, io::contour_table(ct), meta);
        }
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cli_main(int argc, char** argv)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_main(args, std::cout, std::cerr);
}

}  // namespace epenc::cli
