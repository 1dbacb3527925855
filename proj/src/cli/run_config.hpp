// run_config.hpp: command-line and key=value configuration for the figure runner

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "jcdeco/fock_core.hpp"

namespace jcdeco::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kConfigError = 2, kPhysicsError = 3, kIoError = 4 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { fig1, fig2, fig3, fig4, stats };

const char* command_name(Command c);

struct RunConfig {
    Command command = Command::fig1;

    double g_rad_s = 2.0 * constants::pi * 50e3;
    double frequency_ghz = 51.099;
    bool angular_frequency = false;  // read frequency_ghz as omega in Grad/s instead of nu

    std::vector<double> temps_kelvin;
    std::vector<double> alphas;
    std::vector<long> r_values;

    double gt_max = 0.0;        // 0 selects the per-command default
    std::size_t points = 0;     // 0 selects the per-command default
    double eps_tail = 1e-12;
    std::uint64_t seed = 20090101;
    std::string out = "-";      // "-" writes the CSV to stdout

    double t_ref_gt = 1000.0;   // fig3 late crossing reference
    double late_half_width_gt = 20.0;
    double tau_max = 100.0;     // fig4 x-axis extent in units of tau_d
    std::int64_t mc_samples = 1000000;
    std::int64_t ta_samples = 10000;

    // Physical parameters. omega follows the frequency interpretation flag.
    ModelParams physical() const;

    // Dynamics in units of 1/g: g = 1 and every time argument is gt. omega stays physical
    // so thermal weights are unchanged.
    ModelParams dimensionless() const;

    double effective_gt_max() const;
    std::size_t effective_points() const;

    // Throws ConfigError for values outside their domains or missing required lists.
    void validate() const;

    // Ordered key=value echo for CSV metadata.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

// Flat key=value text: '#' starts a comment, blank lines ignored, duplicate keys rejected.
std::map<std::string, std::string> read_config_file(const std::string& path);

struct ParseOutcome {
    RunConfig config;
    bool exit_early = false;  // help or version printed
    int exit_code = kOk;
    std::string message;
};

// Parses argv (args[0] is the program name). Config-file keys apply only where the same flag
// is absent from the command line; unknown keys are errors. Throws ConfigError. Help and
// version requests come back with exit_early set and the text in `message`.
ParseOutcome parse_command_line(const std::vector<std::string>& args);

}  // namespace jcdeco::cli
