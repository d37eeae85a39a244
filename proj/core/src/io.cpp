#include "epenc/io.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace epenc::io {

using nlohmann::json;

void Table::add_row(std::vector<Cell> row)
{
    if (row.size() != columns.size()) throw std::logic_error("table row width differs from header");
    rows.push_back(std::move(row));
}

std::string format_real(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string cell_text(const Cell& c)
{
    if (const double* d = std::get_if<double>(&c)) return format_real(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

json cell_json(const Cell& c)
{
    if (const double* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return json(*i);
    return json(std::get<std::string>(c));
}

double finite_or_nan(std::optional<cplx> z, bool imag)
{
    if (!z) return std::nan("");
    return imag ? z->imag() : z->real();
}

}  // namespace

std::string to_csv(const Table& t)
{
    std::string out;
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        if (j) out += ',';
        out += t.columns[j];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            out += cell_text(row[j]);
        }
        out += '\n';
    }
    return out;
}

json to_json_records(const Table& t)
{
    json arr = json::array();
    for (const auto& row : t.rows) {
        json obj = json::object();
        for (std::size_t j = 0; j < row.size(); ++j) obj[t.columns[j]] = cell_json(row[j]);
        arr.push_back(std::move(obj));
    }
    return arr;
}

std::string to_json_document(const Table& t, const json& metadata)
{
    json doc;
    doc["metadata"] = metadata;
    doc["columns"] = t.columns;
    doc["records"] = to_json_records(t);
    return doc.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    static std::atomic<unsigned> counter{0};
    const std::filesystem::path dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    if (!std::filesystem::is_directory(dir)) throw InputError("output directory does not exist: " + dir.string());
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open for writing: " + tmp.string());
        f.write(content.data(), std::streamsize(content.size()));
        f.flush();
        if (!f) {
            f.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

Format parse_format(const std::string& s)
{
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw InputError("format must be csv or json, got '" + s + "'");
}

void write_table(const std::filesystem::path& path, const Table& t, const json& metadata, Format f)
{
    if (f == Format::Json) {
        write_atomic(path, to_json_document(t, metadata));
        return;
    }
    write_atomic(path, to_csv(t));
    std::filesystem::path side = path;
    side += ".meta.json";
    write_atomic(side, metadata.dump(2) + "\n");
}

json system_json(const SystemParams& sys)
{
    return {{"omega_r", sys.omega_r}, {"gamma", sys.gamma}, {"mu_re", sys.mu.real()}, {"mu_im", sys.mu.imag()}};
}

json ode_json(const OdeOptions& o)
{
    return {{"rtol", o.rtol}, {"atol", o.atol}, {"method", "dop853"}};
}

Table sweep_table(const SweepResult& r)
{
    Table t;
    t.columns = {"eps_ratio", "alpha", "tau", "p_bound_exact", "p_bound_pert", "status"};
    t.rows.reserve(r.records.size());
    for (const auto& rec : r.records)
        t.add_row({rec.eps_ratio, rec.alpha, rec.tau, rec.p_bound_exact, rec.p_bound_pert, to_string(rec.status)});
    return t;
}

json sweep_metadata(const SweepResult& r)
{
    const auto& s = r.spec;
    const auto ep = cw_exceptional_point(s.system);
    json failures = json::array();
    for (std::size_t k = 0; k < r.records.size(); ++k)
        if (r.records[k].status != PointStatus::Ok)
            failures.push_back({{"row", k},
                                {"eps_ratio", r.records[k].eps_ratio},
                                {"alpha", r.records[k].alpha},
                                {"status", to_string(r.records[k].status)},
                                {"message", r.records[k].message}});
    return {{"kind", "sweep"},
            {"code_version", EPENC_VERSION_STRING},
            {"spec",
             {{"eps_ratio", {s.eps_ratio.min, s.eps_ratio.max, s.eps_ratio.n}},
              {"alpha", {s.alpha.min, s.alpha.max, s.alpha.n}},
              {"phi", s.phi},
              {"mode", to_string(s.mode)},
              {"t_span", s.t_span},
              {"system", system_json(s.system)}}},
            {"omega_ep", ep.omega_ep},
            {"eps0_ep", ep.eps0_ep},
            {"tolerances",
             {{"ode", ode_json(s.propagation.ode)},
              {"quad_rel", s.perturbation.quad.rel_tol},
              {"quad_abs", s.perturbation.quad.abs_tol}}},
            {"threads", s.threads},
            {"wall_seconds", r.wall_seconds},
            {"order", "row-major: eps_ratio outer, alpha inner"},
            {"failures", failures}};
}

Table trajectory_table(const std::vector<TrajectorySample>& traj)
{
    Table t;
    t.columns = {"t_over_tau", "re_cb", "im_cb", "re_cr", "im_cr", "re_split", "im_split"};
    for (const auto& s : traj)
        t.add_row({s.t_over_tau, s.c_bound.real(), s.c_bound.imag(), s.c_res.real(), s.c_res.imag(), s.split.real(),
                   s.split.imag()});
    return t;
}

Table dyn_eps_table(const std::vector<DynamicalEP>& eps)
{
    Table t;
    t.columns = {"re_t_over_tau", "im_t_over_tau", "residual", "re_sigma", "im_sigma",
                 "re_a", "im_a", "pair_id", "multiplicity"};
    for (const auto& e : eps)
        t.add_row({e.t_k.real(), e.t_k.imag(), e.residual, finite_or_nan(e.sigma_k, false),
                   finite_or_nan(e.sigma_k, true), finite_or_nan(e.a_k, false), finite_or_nan(e.a_k, true),
                   std::int64_t(e.pair_id), std::int64_t(e.multiplicity)});
    return t;
}

Table separatrix_table(const std::vector<SeparatrixPoint>& pts)
{
    Table t;
    t.columns = {"alpha", "eps0_crit_ratio", "s_star", "phi", "re_t_a", "im_t_a", "re_t_b", "im_t_b", "iterations"};
    for (const auto& p : pts)
        t.add_row({p.alpha, p.eps0_crit_ratio, p.s_star, p.phi, p.t_a.real(), p.t_a.imag(), p.t_b.real(),
                   p.t_b.imag(), std::int64_t(p.iterations)});
    return t;
}

Table contour_table(const ContourTable& c)
{
    Table t;
    t.columns = {"t_over_tau", "omega", "eps0"};
    for (const auto& s : c.samples) t.add_row({s.t_over_tau, s.omega, s.eps0});
    return t;
}

Table split_field_table(const ContourShape& shape, const SearchRegion& region, int nx, int ny)
{
    if (nx < 2 || ny < 2) throw InputError("field grid needs at least 2 x 2 points");
    Table t;
    t.columns = {"re_t_over_tau", "im_t_over_tau", "abs_split"};
    t.rows.reserve(std::size_t(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        const double y = region.im_min + (region.im_max - region.im_min) * j / (ny - 1);
        for (int i = 0; i < nx; ++i) {
            const double x = region.re_min + (region.re_max - region.re_min) * i / (nx - 1);
            t.add_row({x, y, std::sqrt(std::abs(shape.discriminant({x, y})))});
        }
    }
    return t;
}

int CsvData::column(const std::string& name) const
{
    for (std::size_t j = 0; j < columns.size(); ++j)
        if (columns[j] == name) return int(j);
    throw InputError("CSV has no column '" + name + "'");
}

CsvData parse_csv(const std::string& text)
{
    CsvData d;
    std::istringstream in(text);
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> f;
        std::string cur;
        std::istringstream ls(s);
        while (std::getline(ls, cur, ',')) f.push_back(cur);
        if (!s.empty() && s.back() == ',') f.emplace_back();
        return f;
    };
    if (!std::getline(in, line)) throw InputError("empty CSV");
    d.columns = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split(line);
        if (f.size() != d.columns.size()) throw InputError("CSV row width differs from header");
        d.rows.push_back(std::move(f));
    }
    return d;
}

}  // namespace epenc::io
