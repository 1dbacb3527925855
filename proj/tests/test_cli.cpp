#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "jcdeco/analytics.hpp"
#include "run_config.hpp"

using namespace jcdeco;
using namespace jcdeco::cli;
using doctest::Approx;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "jcdeco");
    std::ostringstream out, err;
    const int code = main_entry(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "jcdeco_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::filesystem::path write_file(const std::string& name, const std::string& text) {
    const auto p = scratch(name);
    std::ofstream(p) << text;
    return p;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> data_rows(const std::string& csv) {
    std::vector<std::string> rows;
    for (auto& l : lines_of(csv)) {
        if (!l.empty() && l[0] != '#') rows.push_back(l);
    }
    return rows;  // header first
}

std::vector<double> cells(const std::string& row) {
    std::vector<double> v;
    std::istringstream in(row);
    for (std::string c; std::getline(in, c, ',');) v.push_back(std::stod(c));
    return v;
}

std::string meta_value(const std::string& csv, const std::string& key) {
    for (const auto& l : lines_of(csv)) {
        if (l.rfind("# " + key + "=", 0) == 0) return l.substr(key.size() + 3);
    }
    return {};
}

RunConfig parsed(std::vector<std::string> args) {
    args.insert(args.begin(), "jcdeco");
    return parse_command_line(args).config;
}

}  // namespace

TEST_CASE("config file values apply unless the flag is on the command line") {
    const auto cfg_path = write_file("fig4.cfg", "# phase states\nr-values = 10,100\ntau-max=50\n\nseed=3\n");
    const auto cfg = parsed({"fig4", "--config", cfg_path.string(), "--tau-max", "20"});
    CHECK(cfg.command == Command::fig4);
    CHECK(cfg.r_values == std::vector<long>{10, 100});
    CHECK(cfg.tau_max == 20.0);
    CHECK(cfg.seed == 3u);

    const auto flag_path = write_file("angular.cfg", "angular-frequency=true\ntemps-kelvin=1\n");
    const auto ang = parsed({"fig1", "--config", flag_path.string(), "--frequency-ghz", "2"});
    CHECK(ang.angular_frequency);
    CHECK(ang.physical().omega == Approx(2e9));
    CHECK(parsed({"fig1", "--temps-kelvin", "1", "--frequency-ghz", "2"}).physical().omega ==
          Approx(4e9 * constants::pi));
}

TEST_CASE("configuration errors exit with 2") {
    CHECK(run({"fig1"}).code == kConfigError);
    CHECK(run({"fig4", "--r-values", "0"}).code == kConfigError);
    CHECK(run({"fig1", "--temps-kelvin", "1", "--eps-tail", "0.1"}).code == kConfigError);
    CHECK(run({"fig2", "--alphas", "1", "--bogus"}).code == kConfigError);
    CHECK(run({}).code == kConfigError);

    const auto unknown = write_file("unknown.cfg", "temps-kelvin=1\nmc-samples=5000\n");
    const auto r = run({"fig1", "--config", unknown.string()});
    CHECK(r.code == kConfigError);
    CHECK(r.err.find("mc-samples") != std::string::npos);

    const auto dup = write_file("dup.cfg", "alphas=1\nalphas=2\n");
    CHECK(run({"fig2", "--config", dup.string()}).code == kConfigError);
    const auto junk = write_file("junk.cfg", "alphas 1\n");
    CHECK(run({"fig2", "--config", junk.string()}).code == kConfigError);
}

TEST_CASE("I/O errors exit with 4") {
    CHECK(run({"fig2", "--config", scratch("missing.cfg").string()}).code == kIoError);
    const auto bad_out = (scratch("no_such_dir") / "x.csv").string();
    CHECK(run({"fig4", "--r-values", "3", "--points", "11", "--out", bad_out}).code == kIoError);
}

TEST_CASE("physics failures exit with 3") {
    // rho_ee = cos^2(gt) has no crossing in [999.9, 1000.1].
    const auto r = run({"fig3", "--alphas", "0", "--t-ref-gt", "1000", "--late-half-width-gt", "0.1"});
    CHECK(r.code == kPhysicsError);
    CHECK(r.err.find("no crossing") != std::string::npos);
}

TEST_CASE("help and version") {
    const auto h = run({"--help"});
    CHECK(h.code == kOk);
    CHECK(h.out.find("fig1") != std::string::npos);
    const auto v = run({"--version"});
    CHECK(v.code == kOk);
    CHECK(v.out.find(kVersion) != std::string::npos);
}

TEST_CASE("CSV preamble and file output") {
    const auto out = scratch("fig4.csv");
    std::filesystem::remove(out);
    const auto r = run({"fig4", "--r-values", "10", "--points", "11", "--seed", "77", "--out", out.string()});
    REQUIRE(r.code == kOk);
    CHECK(r.out.find("wrote") != std::string::npos);
    std::ifstream in(out);
    const std::string csv((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(csv.rfind("# tool=jcdeco\n", 0) == 0);
    CHECK(meta_value(csv, "version") == kVersion);
    CHECK(meta_value(csv, "command") == "fig4");
    CHECK(meta_value(csv, "seed") == "77");
    CHECK(meta_value(csv, "r-values") == "10");
    CHECK(data_rows(csv).size() == 12);
}

TEST_CASE("stats output is byte-identical across runs") {
    const std::vector<std::string> args{"stats", "--r-values", "3,8", "--mc-samples", "5000", "--ta-samples", "2000"};
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == kOk);
    CHECK(a.out == b.out);
    CHECK(a.err.find("r") != std::string::npos);
    auto other = args;
    other.insert(other.end(), {"--seed", "5"});
    CHECK(run(other).out != a.out);
}

TEST_CASE("numeric output does not depend on g") {
    auto strip_g = [](const std::string& csv) {
        std::string kept;
        for (const auto& l : lines_of(csv)) {
            if (l.rfind("# g-rad-s=", 0) != 0 && l.rfind("# tau_d_seconds=", 0) != 0) kept += l + '\n';
        }
        return kept;
    };
    for (const std::vector<std::string>& base :
         {std::vector<std::string>{"fig1", "--temps-kelvin", "0.8,3", "--gt-max", "60", "--points", "301"},
          std::vector<std::string>{"fig2", "--alphas", "1,2", "--gt-max", "60", "--points", "301"},
          std::vector<std::string>{"fig3", "--alphas", "1", "--gt-max", "10", "--points", "101", "--t-ref-gt", "40"},
          std::vector<std::string>{"fig4", "--r-values", "5", "--points", "101"}}) {
        auto slow = base, fast = base;
        slow.insert(slow.end(), {"--g-rad-s", "1000"});
        fast.insert(fast.end(), {"--g-rad-s", "3.3e6"});
        const auto a = run(slow), b = run(fast);
        REQUIRE(a.code == kOk);
        REQUIRE(b.code == kOk);
        CHECK(strip_g(a.out) == strip_g(b.out));
    }
}

TEST_CASE("fig3 starts from the excited atom") {
    const auto r = run({"fig3", "--alphas", "0,2", "--gt-max", "5", "--points", "51"});
    REQUIRE(r.code == kOk);
    const auto rows = data_rows(r.out);
    CHECK(rows[0] == "gt,abs_rho_ge_alpha0,rho_ee_alpha0,abs_rho_ge_alpha2,rho_ee_alpha2");
    const auto first = cells(rows[1]);
    CHECK(first[0] == 0.0);
    CHECK(first[1] == 0.0);
    CHECK(first[2] == 1.0);
    CHECK(first[4] == Approx(1.0).epsilon(1e-12));
    CHECK(!meta_value(r.out, "first_crossing.contrast").empty());
}

TEST_CASE("fig4 starts at one quarter and reports consistent tau_d") {
    RunConfig cfg;
    cfg.command = Command::fig4;
    cfg.r_values = {10, 100};
    cfg.points = 2001;
    const auto res = run_fig4(cfg);
    REQUIRE(res.series.size() == 2);
    for (const auto& s : res.series) {
        CHECK(s.abs_sq.front() == Approx(0.25).epsilon(1e-15));
        CHECK(s.tau_d_seconds * cfg.g_rad_s == Approx(decoherence_time(s.r, 1.0)).epsilon(1e-12));
        CHECK(s.tau_d_gt == Approx(decoherence_time(s.r, 1.0)).epsilon(1e-15));
        CHECK(s.band_fraction > 0.0);
        CHECK(s.band_fraction < 1.0);
        CHECK(s.stats.mean_abs_sq == longtime_stats(s.r, 1.0).mean_abs_sq);
    }
    CHECK(res.t_over_tau.back() == cfg.tau_max);
}

TEST_CASE("fig1 long-window averages fall with temperature") {
    RunConfig cfg;
    cfg.command = Command::fig1;
    cfg.temps_kelvin = {10.0, 0.8, 3.0};
    cfg.gt_max = 4000.0;
    cfg.points = 40001;
    const auto res = run_fig1(cfg);
    auto series = res.series;
    std::sort(series.begin(), series.end(), [](const auto& a, const auto& b) { return a.temperature < b.temperature; });
    CHECK(series[0].temperature == 0.8);
    for (std::size_t i = 1; i < series.size(); ++i) CHECK(series[i].long_window_mean < series[i - 1].long_window_mean);
    CHECK(series[0].recurrence_max >= 0.2);
    CHECK(res.spot_check_max_dev < 1e-10);
    CHECK(res.gt.front() == 0.0);
    CHECK(res.gt.back() == 4000.0);
}

TEST_CASE("fig2 default grid and alpha ordering") {
    RunConfig cfg;
    cfg.command = Command::fig2;
    cfg.alphas = {1.0, 2.0, 3.0};
    cfg.points = 100001;
    CHECK(cfg.effective_gt_max() == 4.08e4);
    const auto res = run_fig2(cfg);
    CHECK(res.gt.back() == 4.08e4);
    for (std::size_t i = 1; i < res.series.size(); ++i) {
        CHECK(res.series[i].first_below > res.series[i - 1].first_below);
        CHECK(res.series[i].late_band < res.series[i - 1].late_band);
    }
}
