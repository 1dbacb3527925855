#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "csv.hpp"
#include "jcdeco/errors.hpp"
#include "jcdeco/initial_states.hpp"
#include "jcdeco/parallel.hpp"
#include "jcdeco/propagation.hpp"
#include "jcdeco/ramsey.hpp"

namespace jcdeco::cli {

namespace {

constexpr double kSpotTolerance = 1e-10;
constexpr double kFig2Threshold = 0.05;
constexpr std::size_t kLatePoints = 4001;

void write_preamble(CsvWriter& csv, const RunConfig& cfg) {
    csv.meta("tool", "jcdeco");
    csv.meta("version", kVersion);
    for (const auto& [k, v] : cfg.echo()) csv.meta(k, v);
}

template <class Series, class Fn>
std::string column(const std::vector<Series>& s, Fn&& fn) {
    std::vector<std::string> cells;
    cells.reserve(s.size());
    for (const auto& x : s) cells.push_back(fn(x));
    return join(cells, [](const std::string& c) { return c; });
}

}  // namespace

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
    if (points < 2) throw InputError("uniform_grid: need at least two points");
    std::vector<double> g(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) g[k] = lo + step * static_cast<double>(k);
    g.back() = hi;
    return g;
}

Fig1Result run_fig1(const RunConfig& cfg) {
    const ModelParams params = cfg.dimensionless();
    Fig1Result res;
    res.gt = uniform_grid(0.0, cfg.effective_gt_max(), cfg.effective_points());
    const double gt_max = res.gt.back();
    const double long_lo = gt_max > 1e3 ? 1e3 : 0.5 * gt_max;

    for (double temp : cfg.temps_kelvin) {
        const ThermalSpec spec{temp, AtomState::balanced(), cfg.eps_tail};
        const Truncation trunc = thermal_truncation(temp, params, cfg.eps_tail);
        const double q = thermal_ratio(temp, params);

        Fig1Series s{temp, trunc.n_max, trunc.tail, q / (1.0 - q), {}, 0.0, 0.0};
        s.abs_sq.resize(res.gt.size());
        parallel_for(res.gt.size(), [&](std::size_t k) {
            s.abs_sq[k] = std::norm(thermal_coherence_series(spec, params, res.gt[k]));
        });

        double long_sum = 0.0;
        std::size_t long_count = 0;
        for (std::size_t k = 0; k < res.gt.size(); ++k) {
            if (res.gt[k] >= 2.0 && res.gt[k] <= 50.0) s.recurrence_max = std::max(s.recurrence_max, s.abs_sq[k]);
            if (res.gt[k] >= long_lo) {
                long_sum += s.abs_sq[k];
                ++long_count;
            }
        }
        s.long_window_mean = long_count ? long_sum / static_cast<double>(long_count) : 0.0;

        // Spot validation of the closed form against the propagated ensemble.
        const WeightedEnsemble ensemble = build_thermal(spec, params);
        const std::size_t n = res.gt.size();
        const std::vector<std::size_t> picks{0, n / 4, n / 2, (3 * n) / 4, n - 1};
        std::vector<double> spot_t;
        for (auto k : picks) spot_t.push_back(res.gt[k]);
        const auto spot = coherence_trace(ensemble, params, spot_t);
        for (std::size_t i = 0; i < picks.size(); ++i) {
            const cplx series = thermal_coherence_series(spec, params, spot_t[i]);
            res.spot_check_max_dev = std::max(res.spot_check_max_dev, std::abs(series - spot[i].rho_eg));
        }
        res.series.push_back(std::move(s));
    }
    if (!(res.spot_check_max_dev <= kSpotTolerance)) {
        throw PhysicsError("fig1: thermal series disagrees with ensemble propagation by " +
                           format_double(res.spot_check_max_dev));
    }
    return res;
}

void write_fig1(const Fig1Result& res, const RunConfig& cfg, std::ostream& os) {
    CsvWriter csv(os);
    write_preamble(csv, cfg);
    csv.meta("n_max", column(res.series, [](const auto& s) { return format_int(s.n_max); }));
    csv.meta("weight_deficit", column(res.series, [](const auto& s) { return format_double(s.weight_deficit); }));
    csv.meta("mean_photons", column(res.series, [](const auto& s) { return format_double(s.mean_photons); }));
    csv.meta("recurrence_max_gt_2_50", column(res.series, [](const auto& s) { return format_double(s.recurrence_max); }));
    csv.meta("long_window_mean", column(res.series, [](const auto& s) { return format_double(s.long_window_mean); }));
    csv.meta("spot_check_max_dev", res.spot_check_max_dev);

    std::vector<std::string> header{"gt"};
    for (const auto& s : res.series) header.push_back("abs_rho_eg_sq_T" + format_double(s.temperature));
    csv.header(header);
    std::vector<double> row(res.series.size() + 1);
    for (std::size_t k = 0; k < res.gt.size(); ++k) {
        row[0] = res.gt[k];
        for (std::size_t j = 0; j < res.series.size(); ++j) row[j + 1] = res.series[j].abs_sq[k];
        csv.row(row);
    }
}

Fig2Result run_fig2(const RunConfig& cfg) {
    const ModelParams params = cfg.dimensionless();
    Fig2Result res;
    res.gt = uniform_grid(0.0, cfg.effective_gt_max(), cfg.effective_points());
    const double late_lo = res.gt.back() / 10.0;

    for (double alpha : cfg.alphas) {
        const Truncation trunc = coherent_truncation(alpha, cfg.eps_tail);
        const JointPureState initial = build_coherent({alpha, AtomState::balanced(), cfg.eps_tail});
        const auto trace = coherence_trace(initial, params, res.gt);

        Fig2Series s{alpha, trunc.n_max, trunc.tail, {}, -1.0, 0.0};
        s.abs_sq.reserve(trace.size());
        double lo = 1.0, hi = 0.0;
        for (std::size_t k = 0; k < trace.size(); ++k) {
            const double v = std::norm(trace[k].rho_eg);
            s.abs_sq.push_back(v);
            if (s.first_below < 0.0 && v < kFig2Threshold) s.first_below = res.gt[k];
            if (res.gt[k] >= late_lo) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        s.late_band = hi - lo;
        res.series.push_back(std::move(s));
    }
    return res;
}

void write_fig2(const Fig2Result& res, const RunConfig& cfg, std::ostream& os) {
    CsvWriter csv(os);
    write_preamble(csv, cfg);
    csv.meta("n_max", column(res.series, [](const auto& s) { return format_int(s.n_max); }));
    csv.meta("truncation_tail", column(res.series, [](const auto& s) { return format_double(s.tail); }));
    csv.meta("first_gt_below_0.05", column(res.series, [](const auto& s) { return format_double(s.first_below); }));
    csv.meta("late_band", column(res.series, [](const auto& s) { return format_double(s.late_band); }));

    std::vector<std::string> header{"gt"};
    for (const auto& s : res.series) header.push_back("abs_rho_eg_sq_alpha" + format_double(s.alpha));
    csv.header(header);
    std::vector<double> row(res.series.size() + 1);
    for (std::size_t k = 0; k < res.gt.size(); ++k) {
        row[0] = res.gt[k];
        for (std::size_t j = 0; j < res.series.size(); ++j) row[j + 1] = res.series[j].abs_sq[k];
        csv.row(row);
    }
}

Fig3Result run_fig3(const RunConfig& cfg) {
    const ModelParams params = cfg.dimensionless();
    Fig3Result res;
    res.gt = uniform_grid(0.0, cfg.effective_gt_max(), cfg.effective_points());

    for (double alpha : cfg.alphas) {
        const JointPureState initial = build_coherent({alpha, AtomState::excited(), cfg.eps_tail});
        const auto trace = coherence_trace(initial, params, res.gt);
        Fig3Series s{alpha, initial.n_max(), {}, {}};
        for (const auto& rho : trace) {
            s.abs_rho_ge.push_back(std::abs(rho.rho_ge()));
            s.rho_ee.push_back(rho.rho_ee);
        }
        res.series.push_back(std::move(s));
    }

    CrossingQuery first;
    first.which = CrossingPolicy::first;
    first.t_lo = res.gt.front();
    first.t_hi = res.gt.back();
    first.n_points = res.gt.size();

    CrossingQuery late;
    late.which = CrossingPolicy::nearest_to;
    late.t_ref = cfg.t_ref_gt;
    late.t_lo = cfg.t_ref_gt - cfg.late_half_width_gt;
    late.t_hi = cfg.t_ref_gt + cfg.late_half_width_gt;
    late.n_points = kLatePoints;

    auto summarize = [&](const CrossingQuery& q) {
        std::vector<CrossingSummary> out;
        for (const auto& p : contrast_vs_alpha(cfg.alphas, params, q, cfg.eps_tail)) {
            out.push_back({p.alpha, p.t_alpha, p.contrast, p.rho_ee});
        }
        return out;
    };
    res.first = summarize(first);
    res.late = summarize(late);
    return res;
}

void write_fig3(const Fig3Result& res, const RunConfig& cfg, std::ostream& os) {
    CsvWriter csv(os);
    write_preamble(csv, cfg);
    csv.meta("n_max", column(res.series, [](const auto& s) { return format_int(s.n_max); }));
    for (const auto& [name, rows] : {std::pair{"first_crossing", &res.first}, std::pair{"late_crossing", &res.late}}) {
        const std::string prefix = name;
        csv.meta(prefix + ".alpha", column(*rows, [](const auto& c) { return format_double(c.alpha); }));
        csv.meta(prefix + ".t_alpha_gt", column(*rows, [](const auto& c) { return format_double(c.t_alpha_gt); }));
        csv.meta(prefix + ".contrast", column(*rows, [](const auto& c) { return format_double(c.contrast); }));
        csv.meta(prefix + ".rho_ee", column(*rows, [](const auto& c) { return format_double(c.rho_ee); }));
    }

    std::vector<std::string> header{"gt"};
    for (const auto& s : res.series) {
        header.push_back("abs_rho_ge_alpha" + format_double(s.alpha));
        header.push_back("rho_ee_alpha" + format_double(s.alpha));
    }
    csv.header(header);
    std::vector<double> row(2 * res.series.size() + 1);
    for (std::size_t k = 0; k < res.gt.size(); ++k) {
        row[0] = res.gt[k];
        for (std::size_t j = 0; j < res.series.size(); ++j) {
            row[2 * j + 1] = res.series[j].abs_rho_ge[k];
            row[2 * j + 2] = res.series[j].rho_ee[k];
        }
        csv.row(row);
    }
}

Fig4Result run_fig4(const RunConfig& cfg) {
    Fig4Result res;
    res.t_over_tau = uniform_grid(0.0, cfg.tau_max, cfg.effective_points());

    for (long r : cfg.r_values) {
        Fig4Series s{r, decoherence_time(r, cfg.g_rad_s), decoherence_time(r, 1.0), longtime_stats(r, 1.0), {}, 0.0};
        s.abs_sq.resize(res.t_over_tau.size());
        parallel_for(res.t_over_tau.size(), [&](std::size_t k) {
            s.abs_sq[k] = std::norm(phase_state_coherence(r, 1.0, res.t_over_tau[k] * s.tau_d_gt));
        });
        const double lo = s.stats.mean_abs_sq - s.stats.std_abs_sq;
        const double hi = s.stats.mean_abs_sq + s.stats.std_abs_sq;
        std::size_t inside = 0, total = 0;
        for (std::size_t k = 0; k < s.abs_sq.size(); ++k) {
            if (res.t_over_tau[k] < 2.0 || res.t_over_tau[k] > 100.0) continue;
            ++total;
            if (s.abs_sq[k] >= lo && s.abs_sq[k] <= hi) ++inside;
        }
        s.band_fraction = total ? static_cast<double>(inside) / static_cast<double>(total) : 0.0;
        res.series.push_back(std::move(s));
    }
    return res;
}

void write_fig4(const Fig4Result& res, const RunConfig& cfg, std::ostream& os) {
    CsvWriter csv(os);
    write_preamble(csv, cfg);
    csv.meta("tau_d_seconds", column(res.series, [](const auto& s) { return format_double(s.tau_d_seconds); }));
    csv.meta("tau_d_gt", column(res.series, [](const auto& s) { return format_double(s.tau_d_gt); }));
    csv.meta("band_fraction_2_100", column(res.series, [](const auto& s) { return format_double(s.band_fraction); }));

    std::vector<std::string> header{"t_over_tau_d"};
    for (const auto& s : res.series) {
        const std::string r = format_int(s.r);
        header.insert(header.end(), {"abs_rho_eg_sq_r" + r, "M_r" + r, "M_minus_sigma_r" + r, "M_plus_sigma_r" + r});
    }
    csv.header(header);
    std::vector<double> row(4 * res.series.size() + 1);
    for (std::size_t k = 0; k < res.t_over_tau.size(); ++k) {
        row[0] = res.t_over_tau[k];
        for (std::size_t j = 0; j < res.series.size(); ++j) {
            const auto& s = res.series[j];
            row[4 * j + 1] = s.abs_sq[k];
            row[4 * j + 2] = s.stats.mean_abs_sq;
            row[4 * j + 3] = s.stats.mean_abs_sq - s.stats.std_abs_sq;
            row[4 * j + 4] = s.stats.mean_abs_sq + s.stats.std_abs_sq;
        }
        csv.row(row);
    }
}

double StatsRow::mc_mean_z() const { return (mc.mean - closed_form.mean_abs_sq) / mc.std_error; }
double StatsRow::mc_std_rel() const { return mc.stddev / closed_form.std_abs_sq - 1.0; }
double StatsRow::ta_mean_rel() const { return time_average.mean / closed_form.mean_abs_sq - 1.0; }
double StatsRow::ta_std_rel() const { return time_average.stddev / closed_form.std_abs_sq - 1.0; }

StatsResult run_stats(const RunConfig& cfg) {
    const ModelParams params = cfg.dimensionless();
    StatsResult res;
    for (long r : cfg.r_values) {
        StatsRow row;
        row.r = r;
        row.closed_form = longtime_stats(r, cfg.g_rad_s);
        row.tau_d_gt = decoherence_time(r, 1.0);
        row.mc = random_phase_mc(r, cfg.mc_samples, cfg.seed);
        const JointPureState initial = build_phase_state({r, AtomState::balanced()});
        row.time_average = time_average_stats(initial, params, longtime_window(r, 1.0), cfg.ta_samples, cfg.seed);
        res.rows.push_back(row);
    }
    return res;
}

void write_stats(const StatsResult& res, const RunConfig& cfg, std::ostream& os) {
    CsvWriter csv(os);
    write_preamble(csv, cfg);
    csv.meta("time_average_window", "10 tau_d to 1000 tau_d");
    csv.header({"r", "M", "sigma", "tau_d_seconds", "tau_d_gt", "mc_mean", "mc_std", "mc_stderr",
                "ta_mean", "ta_std", "ta_stderr", "mc_mean_z", "mc_std_rel", "ta_mean_rel", "ta_std_rel"});
    for (const auto& r : res.rows) {
        csv.row({static_cast<double>(r.r), r.closed_form.mean_abs_sq, r.closed_form.std_abs_sq, r.closed_form.tau_d,
                 r.tau_d_gt, r.mc.mean, r.mc.stddev, r.mc.std_error, r.time_average.mean, r.time_average.stddev,
                 r.time_average.std_error, r.mc_mean_z(), r.mc_std_rel(), r.ta_mean_rel(), r.ta_std_rel()});
    }
}

void print_stats_summary(const StatsResult& res, std::ostream& os) {
    os << "  r          M      sigma    tau_d[s]   MC mean z   MC std rel   TA mean rel   TA std rel\n";
    for (const auto& r : res.rows) {
        std::ostringstream line;
        line << std::setw(3) << r.r << std::scientific << std::setprecision(3) << ' ' << std::setw(10)
             << r.closed_form.mean_abs_sq << ' ' << std::setw(10) << r.closed_form.std_abs_sq << ' '
             << std::setw(10) << r.closed_form.tau_d << std::fixed << std::setprecision(3) << ' '
             << std::setw(11) << r.mc_mean_z() << ' ' << std::setw(12) << r.mc_std_rel() << ' '
             << std::setw(13) << r.ta_mean_rel() << ' ' << std::setw(12) << r.ta_std_rel();
        os << line.str() << '\n';
    }
}

int run_command(const RunConfig& cfg, std::ostream& stdout_stream, std::ostream& log) {
    std::ostringstream buffer;
    switch (cfg.command) {
        case Command::fig1: write_fig1(run_fig1(cfg), cfg, buffer); break;
        case Command::fig2: write_fig2(run_fig2(cfg), cfg, buffer); break;
        case Command::fig3: write_fig3(run_fig3(cfg), cfg, buffer); break;
        case Command::fig4: write_fig4(run_fig4(cfg), cfg, buffer); break;
        case Command::stats: {
            const StatsResult res = run_stats(cfg);
            write_stats(res, cfg, buffer);
            print_stats_summary(res, log);
            break;
        }
    }

    if (cfg.out == "-") {
        stdout_stream << buffer.str();
        stdout_stream.flush();
        if (!stdout_stream) throw IoError("failed writing to stdout");
        return kOk;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw IoError("cannot open output file '" + cfg.out + "'");
    file << buffer.str();
    file.close();
    if (!file) throw IoError("failed writing output file '" + cfg.out + "'");
    log << "wrote " << cfg.out << '\n';
    return kOk;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const ParseOutcome parsed = parse_command_line(args);
        if (parsed.exit_early) {
            out << parsed.message;
            return parsed.exit_code;
        }
        std::ostream& log = parsed.config.out == "-" ? err : out;
        return run_command(parsed.config, out, log);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const InputError& e) {
        err << "precondition error: " << e.what() << '\n';
        return kPhysicsError;
    } catch (const PhysicsError& e) {
        err << "physics error: " << e.what() << '\n';
        return kPhysicsError;
    } catch (const ToleranceError& e) {
        err << "tolerance error: " << e.what() << '\n';
        return kPhysicsError;
    }
}

}  // namespace jcdeco::cli
