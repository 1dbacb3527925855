#include "run_config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "csv.hpp"

namespace jcdeco::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
    std::string lower = v;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "true" || lower == "1" || lower == "yes" || lower == "on") return true;
    if (lower == "false" || lower == "0" || lower == "no" || lower == "off") return false;
    throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

void add_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--g-rad-s", cfg.g_rad_s, "Vacuum coupling g in rad/s")->capture_default_str();
    sub->add_option("--frequency-ghz", cfg.frequency_ghz, "Mode frequency in GHz")->capture_default_str();
    sub->add_flag("--angular-frequency", cfg.angular_frequency,
                  "Read --frequency-ghz as an angular frequency (Grad/s) instead of nu");
    sub->add_option("--temps-kelvin", cfg.temps_kelvin, "Comma-separated temperatures")->delimiter(',');
    sub->add_option("--alphas", cfg.alphas, "Comma-separated coherent amplitudes")->delimiter(',');
    sub->add_option("--r-values", cfg.r_values, "Comma-separated phase-state levels")->delimiter(',');
    sub->add_option("--gt-max", cfg.gt_max, "End of the gt grid");
    sub->add_option("--points", cfg.points, "Number of grid points");
    sub->add_option("--eps-tail", cfg.eps_tail, "Fock truncation tail tolerance")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--out", cfg.out, "Output CSV path ('-' for stdout)")->capture_default_str();
    sub->add_option("--config", "key=value configuration file");
}

}  // namespace

const char* command_name(Command c) {
    switch (c) {
        case Command::fig1: return "fig1";
        case Command::fig2: return "fig2";
        case Command::fig3: return "fig3";
        case Command::fig4: return "fig4";
        case Command::stats: return "stats";
    }
    return "?";
}

ModelParams RunConfig::physical() const {
    const double scale = angular_frequency ? 1e9 : 2.0 * constants::pi * 1e9;
    return ModelParams{scale * frequency_ghz, g_rad_s};
}

ModelParams RunConfig::dimensionless() const {
    ModelParams p = physical();
    p.g = 1.0;
    return p;
}

double RunConfig::effective_gt_max() const {
    if (gt_max > 0.0) return gt_max;
    switch (command) {
        case Command::fig1:
        case Command::fig2: return 4.08e4;
        case Command::fig3: return 50.0;
        default: return 0.0;
    }
}

std::size_t RunConfig::effective_points() const {
    if (points > 0) return points;
    switch (command) {
        case Command::fig1:
        case Command::fig2: return 400001;
        case Command::fig3: return 5001;
        case Command::fig4: return 10001;
        default: return 0;
    }
}

void RunConfig::validate() const {
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(g_rad_s)) throw ConfigError("g-rad-s must be > 0");
    if (!positive(frequency_ghz)) throw ConfigError("frequency-ghz must be > 0");
    if (!(eps_tail > 0.0 && eps_tail <= 1e-3)) throw ConfigError("eps-tail must lie in (0, 1e-3]");
    if (gt_max < 0.0 || gt_max > 1e7 || !std::isfinite(gt_max)) {
        throw ConfigError("gt-max must lie in (0, 1e7]");
    }
    if (points == 1) throw ConfigError("points must be >= 2");

    switch (command) {
        case Command::fig1:
            if (temps_kelvin.empty()) throw ConfigError("fig1 requires --temps-kelvin");
            for (double t : temps_kelvin) {
                if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("temperatures must be >= 0");
            }
            break;
        case Command::fig2:
        case Command::fig3:
            if (alphas.empty()) throw ConfigError(std::string(command_name(command)) + " requires --alphas");
            for (double a : alphas) {
                if (!std::isfinite(a)) throw ConfigError("alphas must be finite");
            }
            if (command == Command::fig3 && !(t_ref_gt > late_half_width_gt && late_half_width_gt > 0.0)) {
                throw ConfigError("t-ref-gt must exceed late-half-width-gt > 0");
            }
            break;
        case Command::fig4:
        case Command::stats:
            if (r_values.empty()) throw ConfigError(std::string(command_name(command)) + " requires --r-values");
            for (long r : r_values) {
                if (r < 1) throw ConfigError("r-values must be >= 1");
            }
            if (command == Command::fig4 && !positive(tau_max)) throw ConfigError("tau-max must be > 0");
            if (command == Command::stats && (mc_samples < 1000 || ta_samples < 1000)) {
                throw ConfigError("mc-samples and ta-samples must be >= 1000");
            }
            break;
    }
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> kv{
        {"command", command_name(command)},
        {"g-rad-s", format_double(g_rad_s)},
        {"frequency-ghz", format_double(frequency_ghz)},
        {"angular-frequency", angular_frequency ? "true" : "false"},
        {"omega-rad-s", format_double(physical().omega)},
        {"eps-tail", format_double(eps_tail)},
        {"seed", format_int(seed)},
    };
    switch (command) {
        case Command::fig1:
            kv.emplace_back("temps-kelvin", join(temps_kelvin, format_double));
            break;
        case Command::fig2:
            kv.emplace_back("alphas", join(alphas, format_double));
            break;
        case Command::fig3:
            kv.emplace_back("alphas", join(alphas, format_double));
            kv.emplace_back("t-ref-gt", format_double(t_ref_gt));
            kv.emplace_back("late-half-width-gt", format_double(late_half_width_gt));
            break;
        case Command::fig4:
            kv.emplace_back("r-values", join(r_values, format_int<long>));
            kv.emplace_back("tau-max", format_double(tau_max));
            break;
        case Command::stats:
            kv.emplace_back("r-values", join(r_values, format_int<long>));
            kv.emplace_back("mc-samples", format_int(mc_samples));
            kv.emplace_back("ta-samples", format_int(ta_samples));
            break;
    }
    if (command != Command::stats) {
        if (command != Command::fig4) kv.emplace_back("gt-max", format_double(effective_gt_max()));
        kv.emplace_back("points", format_int(effective_points()));
    }
    return kv;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        if (!kv.emplace(key, value).second) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

ParseOutcome parse_command_line(const std::vector<std::string>& args) {
    ParseOutcome outcome;
    RunConfig& cfg = outcome.config;

    CLI::App app{"Decoherence of a two-level atom coupled to one resonant cavity mode", "jcdeco"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    const std::pair<Command, const char*> commands[] = {
        {Command::fig1, "|rho_eg|^2 for a thermal field (one column per temperature)"},
        {Command::fig2, "|rho_eg|^2 for a coherent field (one column per alpha)"},
        {Command::fig3, "|rho_ge| and rho_ee for |e> x |alpha>, with Ramsey contrast summaries"},
        {Command::fig4, "|rho_eg|^2 for the truncated phase state against t/tau_d, with M +- sigma"},
        {Command::stats, "Long-time statistics: closed form, Monte-Carlo and time averages"},
    };
    std::map<CLI::App*, Command> by_sub;
    for (const auto& [cmd, help] : commands) {
        CLI::App* sub = app.add_subcommand(command_name(cmd), help);
        add_options(sub, cfg);
        switch (cmd) {
            case Command::fig3:
                sub->add_option("--t-ref-gt", cfg.t_ref_gt, "Late crossing reference time (gt)")
                    ->capture_default_str();
                sub->add_option("--late-half-width-gt", cfg.late_half_width_gt,
                                "Half width of the late crossing search window (gt)")
                    ->capture_default_str();
                break;
            case Command::fig4:
                sub->add_option("--tau-max", cfg.tau_max, "Extent of the t/tau_d axis")->capture_default_str();
                break;
            case Command::stats:
                sub->add_option("--mc-samples", cfg.mc_samples, "Random-phase Monte-Carlo samples")
                    ->capture_default_str();
                sub->add_option("--ta-samples", cfg.ta_samples, "Time-average samples")->capture_default_str();
                break;
            default: break;
        }
        by_sub[sub] = cmd;
    }

    // Merge config-file entries for flags absent from the command line.
    std::vector<std::string> tokens(args.begin() + (args.empty() ? 0 : 1), args.end());
    CLI::App* sub = nullptr;
    for (const auto& t : tokens) {
        if (!t.empty() && t[0] != '-') {
            sub = app.get_subcommand_no_throw(t);
            break;
        }
    }
    std::string config_path;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] == "--config" && i + 1 < tokens.size()) config_path = tokens[i + 1];
        if (tokens[i].rfind("--config=", 0) == 0) config_path = tokens[i].substr(9);
    }
    if (!config_path.empty() && sub != nullptr) {
        auto on_command_line = [&](const std::string& flag) {
            return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) {
                return t == flag || t.rfind(flag + "=", 0) == 0;
            });
        };
        for (const auto& [key, value] : read_config_file(config_path)) {
            const std::string flag = "--" + key;
            if (key == "config" || sub->get_option_no_throw(flag) == nullptr) {
                throw ConfigError("unknown config key '" + key + "' for " + sub->get_name());
            }
            if (on_command_line(flag)) continue;
            if (key == "angular-frequency") {
                if (parse_bool(key, value)) tokens.push_back(flag);
            } else {
                tokens.push_back(flag);
                tokens.push_back(value);
            }
        }
    }

    std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            std::ostringstream out, err;
            app.exit(e, out, err);
            outcome.exit_early = true;
            outcome.message = out.str() + err.str();
            return outcome;
        }
        throw ConfigError(e.what());
    }

    for (const auto& [s, cmd] : by_sub) {
        if (s->parsed()) cfg.command = cmd;
    }
    cfg.validate();
    return outcome;
}

}  // namespace jcdeco::cli
