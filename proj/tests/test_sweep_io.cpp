#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "epenc/io.hpp"
#include "epenc/sweep.hpp"

using namespace epenc;
namespace fs = std::filesystem;

namespace {

SweepSpec small_spec()
{
    SweepSpec s;
    s.eps_ratio = {0.0, 4.0, 3};
    s.alpha = {0.5, 1.5, 2};
    s.phi = 9.42;
    s.mode = SweepMode::Both;
    return s;
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("epenc_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("axis ranges")
{
    const auto r = AxisRange::parse("0:16:5");
    CHECK(r.values() == std::vector<double>{0.0, 4.0, 8.0, 12.0, 16.0});
    const auto v = AxisRange::parse("0.1:0.3:3").values();
    CHECK(v.back() == 0.3);
    CHECK_THROWS_AS((void)AxisRange::parse("0:1"), InputError);
    CHECK_THROWS_AS((void)AxisRange::parse("0:1:1"), InputError);
    CHECK_THROWS_AS((void)AxisRange::parse("1:0:4"), InputError);
    CHECK_THROWS_AS((void)AxisRange::parse("a:1:4"), InputError);
    CHECK(parse_sweep_mode("both") == SweepMode::Both);
    CHECK_THROWS_AS((void)parse_sweep_mode("fast"), InputError);
}

TEST_CASE("grid layout and fixed-area bookkeeping")
{
    const auto spec = small_spec();
    const auto r = run_sweep(spec);
    REQUIRE(r.records.size() == 6);
    const double eep = cw_exceptional_point(spec.system).eps0_ep;
    for (int j = 0; j < 2; ++j) {
        const auto& z = at(r, 0, j);
        CHECK(z.eps_ratio == 0.0);
        CHECK(z.p_bound_exact == 1.0);
        CHECK(z.p_bound_pert == 0.0);
        CHECK(std::isinf(z.tau));
    }
    for (int i = 1; i < 3; ++i)
        for (int j = 0; j < 2; ++j) {
            const auto& rec = at(r, i, j);
            CHECK(rec.eps_ratio == spec.eps_ratio.values()[i]);
            CHECK(rec.alpha == spec.alpha.values()[j]);
            CHECK(rec.status == PointStatus::Ok);
            PulseParams p;
            p.eps0_max = rec.eps_ratio * eep;
            p.tau = rec.tau;
            p.alpha = rec.alpha;
            CHECK(std::abs(p.area(spec.system) - spec.phi) <= 1e-12 * spec.phi);
            CHECK(rec.p_bound_exact > 0.0);
            CHECK(rec.p_bound_exact <= 1.0);
            CHECK(std::isfinite(rec.p_bound_pert));
        }
}

TEST_CASE("sweep output does not depend on the thread count")
{
    auto spec = small_spec();
    spec.eps_ratio = {1.0, 10.0, 4};
    spec.alpha = {0.0, 2.0, 4};
    spec.threads = 1;
    const std::string one = io::to_csv(io::sweep_table(run_sweep(spec)));
    spec.threads = 3;
    const std::string three = io::to_csv(io::sweep_table(run_sweep(spec)));
    CHECK(one == three);
}

TEST_CASE("failed points are isolated")
{
    SweepSpec spec;
    spec.system = with_real_dipole(helium_preset());
    // Real dipole, alpha = 0 and ratio 2: dynamical EPs on the real axis at x = +-sqrt(2 ln 2).
    spec.eps_ratio = {0.5, 2.0, 2};
    spec.alpha = {0.0, 1.0, 2};
    spec.mode = SweepMode::Both;
    spec.threads = 2;
    const auto r = run_sweep(spec);
    int singular = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const auto& rec = at(r, i, j);
            if (rec.status == PointStatus::PertSingular) {
                ++singular;
                CHECK(rec.alpha == 0.0);
                CHECK(rec.eps_ratio == 2.0);
                CHECK(std::isfinite(rec.p_bound_exact));
                CHECK(std::isnan(rec.p_bound_pert));
                CHECK(rec.message.find("singular") != std::string::npos);
                continue;
            }
            const auto ref = evaluate_point(spec, rec.eps_ratio, rec.alpha);
            CHECK(rec.p_bound_exact == ref.p_bound_exact);
            CHECK(rec.p_bound_pert == ref.p_bound_pert);
        }
    CHECK(singular == 1);
    CHECK(to_string(PointStatus::PertSingular) == "pert-singular");
}

TEST_CASE("node finder")
{
    std::vector<double> v;
    for (int i = 0; i <= 400; ++i) {
        const double x = i * 0.05;
        v.push_back(std::exp(-0.1 * x) * (1.0 + std::cos(x)) + 1e-6);
    }
    const auto nodes = find_nodes(v);
    // Minima of 1 + cos(x) on [0, 20] at pi, 3 pi, 5 pi.
    REQUIRE(nodes.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(nodes[k] * 0.05 - (2 * k + 1) * kPi) < 0.05);
    CHECK(find_nodes({1.0, 2.0, 3.0}).empty());
    CHECK(find_nodes({1.0, 0.99999, 1.0}).empty());

    const double xm = golden_minimum([](double x) { return (x - 0.3) * (x - 0.3); }, 0.0, 1.0);
    CHECK(xm == doctest::Approx(0.3).epsilon(1e-7));
}

TEST_CASE("contour passes through the cw EP frequency at peak field")
{
    const auto sys = helium_preset();
    const auto ep = cw_exceptional_point(sys);
    const auto p = PulseParams::with_area(sys, 2.0 * ep.eps0_ep, 0.8, 12.0);
    const auto c = emit_contour(sys, p, 401);
    REQUIRE(c.samples.size() == 401);
    const auto& mid = c.samples[200];
    CHECK(mid.t_over_tau == 0.0);
    CHECK(mid.eps0 == p.eps0_max);
    CHECK(mid.omega == sys.omega_r);
    for (const auto& s : c.samples) CHECK(s.eps0 <= p.eps0_max);
    CHECK(c.omega_ep == ep.omega_ep);
    CHECK(c.eps0_ep == ep.eps0_ep);
    CHECK(c.samples.front().t_over_tau == -p.t_span);
}

TEST_CASE("csv keeps full precision and json maps non-finite to null")
{
    io::Table t;
    t.columns = {"x", "n", "s"};
    t.add_row({0.1 + 0.2, std::int64_t(7), std::string("ok")});
    t.add_row({std::nan(""), std::int64_t(-1), std::string("pert-singular")});
    t.add_row({1.0 / 3.0, std::int64_t(0), std::string("ok")});

    const auto csv = io::parse_csv(io::to_csv(t));
    CHECK(csv.columns == t.columns);
    REQUIRE(csv.rows.size() == 3);
    CHECK(std::stod(csv.rows[0][csv.column("x")]) == 0.1 + 0.2);
    CHECK(std::stod(csv.rows[2][0]) == 1.0 / 3.0);
    CHECK(csv.rows[1][0] == "nan");
    CHECK(csv.rows[1][2] == "pert-singular");
    CHECK_THROWS_AS((void)csv.column("missing"), InputError);

    const auto recs = io::to_json_records(t);
    CHECK(recs[1]["x"].is_null());
    CHECK(recs[0]["n"] == 7);
    const auto doc = nlohmann::json::parse(io::to_json_document(t, {{"kind", "test"}}));
    CHECK(doc["metadata"]["kind"] == "test");
    CHECK(doc["columns"].size() == 3);
    CHECK(doc["records"].size() == 3);

    CHECK_THROWS_AS(t.add_row({1.0}), std::logic_error);
}

TEST_CASE("atomic writes and sidecar metadata")
{
    const auto dir = scratch_dir("io");
    io::Table t;
    t.columns = {"a"};
    t.add_row({1.5});
    io::write_table(dir / "out.csv", t, {{"kind", "test"}}, io::Format::Csv);
    io::write_table(dir / "out.json", t, {{"kind", "test"}}, io::Format::Json);
    CHECK(slurp(dir / "out.csv") == "a\n1.5\n");
    CHECK(nlohmann::json::parse(slurp(dir / "out.csv.meta.json"))["kind"] == "test");
    CHECK(nlohmann::json::parse(slurp(dir / "out.json"))["records"][0]["a"] == 1.5);

    int files = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        ++files;
        CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
    }
    CHECK(files == 3);
    CHECK_THROWS_AS(io::write_atomic(dir / "missing" / "x.csv", "x"), InputError);
    fs::remove_all(dir);
}

TEST_CASE("sweep table schema")
{
    const auto r = run_sweep(small_spec());
    const auto t = io::sweep_table(r);
    CHECK(t.columns ==
          std::vector<std::string>{"eps_ratio", "alpha", "tau", "p_bound_exact", "p_bound_pert", "status"});
    CHECK(t.rows.size() == 6);
    const auto meta = io::sweep_metadata(r);
    CHECK(meta["kind"] == "sweep");
    CHECK(meta.contains("omega_ep"));
    CHECK(meta.contains("eps0_ep"));
    CHECK(meta["failures"].empty());
}
