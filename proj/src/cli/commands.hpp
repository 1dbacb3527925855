// commands.hpp: figure and statistics runs behind the jcdeco subcommands
//
// Every run works in units of 1/g (see RunConfig::dimensionless), so its numeric output does
// not depend on the value of g.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "jcdeco/analytics.hpp"
#include "run_config.hpp"

namespace jcdeco::cli {

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

struct Fig1Series {
    double temperature;
    std::size_t n_max;
    double weight_deficit;
    double mean_photons;
    std::vector<double> abs_sq;
    double recurrence_max;     // max over gt in [2, 50]
    double long_window_mean;   // mean over gt in [1e3, gt_max] (last half if gt_max <= 1e3)
};

struct Fig1Result {
    std::vector<double> gt;
    std::vector<Fig1Series> series;
    double spot_check_max_dev = 0.0;  // closed-form series vs ensemble propagation
};

struct Fig2Series {
    double alpha;
    std::size_t n_max;
    double tail;
    std::vector<double> abs_sq;
    double first_below;  // first gt with |rho_eg|^2 < 0.05, -1 if never
    double late_band;    // max - min over gt in [gt_max/10, gt_max]
};

struct Fig2Result {
    std::vector<double> gt;
    std::vector<Fig2Series> series;
};

struct CrossingSummary {
    double alpha;
    double t_alpha_gt;
    double contrast;
    double rho_ee;
};

struct Fig3Series {
    double alpha;
    std::size_t n_max;
    std::vector<double> abs_rho_ge;
    std::vector<double> rho_ee;
};

struct Fig3Result {
    std::vector<double> gt;
    std::vector<Fig3Series> series;
    std::vector<CrossingSummary> first;
    std::vector<CrossingSummary> late;
};

struct Fig4Series {
    long r;
    double tau_d_seconds;  // decoherence_time(r, g)
    double tau_d_gt;       // g tau_d
    LongTimeStats stats;
    std::vector<double> abs_sq;
    double band_fraction;  // share of samples with t/tau_d in [2, 100] inside [M - sigma, M + sigma]
};

struct Fig4Result {
    std::vector<double> t_over_tau;
    std::vector<Fig4Series> series;
};

struct StatsRow {
    long r;
    LongTimeStats closed_form;
    double tau_d_gt;
    SampleStats mc;
    SampleStats time_average;

    double mc_mean_z() const;       // (mc mean - M) / standard error
    double mc_std_rel() const;      // mc std / sigma - 1
    double ta_mean_rel() const;     // time-average mean / M - 1
    double ta_std_rel() const;      // time-average std / sigma - 1
};

struct StatsResult {
    std::vector<StatsRow> rows;
};

Fig1Result run_fig1(const RunConfig& cfg);
Fig2Result run_fig2(const RunConfig& cfg);
Fig3Result run_fig3(const RunConfig& cfg);
Fig4Result run_fig4(const RunConfig& cfg);
StatsResult run_stats(const RunConfig& cfg);

void write_fig1(const Fig1Result& res, const RunConfig& cfg, std::ostream& os);
void write_fig2(const Fig2Result& res, const RunConfig& cfg, std::ostream& os);
void write_fig3(const Fig3Result& res, const RunConfig& cfg, std::ostream& os);
void write_fig4(const Fig4Result& res, const RunConfig& cfg, std::ostream& os);
void write_stats(const StatsResult& res, const RunConfig& cfg, std::ostream& os);
void print_stats_summary(const StatsResult& res, std::ostream& os);

// Runs the configured command, writing the CSV to cfg.out (or `stdout_stream` for "-") and
// human-readable notes to `log`. Returns an ExitCode; library errors are mapped, not thrown.
int run_command(const RunConfig& cfg, std::ostream& stdout_stream, std::ostream& log);

// Full CLI entry: parse, run, map errors to exit codes.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jcdeco::cli
