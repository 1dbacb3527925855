#include "jcdeco/initial_states.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "jcdeco/errors.hpp"

namespace jcdeco {

namespace {

void check_eps_tail(double eps, const char* where) {
    if (!(eps > 0.0 && eps <= 1e-3)) {
        throw InputError(std::string(where) + ": eps_tail must lie in (0, 1e-3]");
    }
}

// ln |<n|alpha>|^2 = -|alpha|^2 + 2 n ln|alpha| - ln n!
double log_poisson(double mean, std::size_t n) {
    if (n == 0) return -mean;
    return -mean + static_cast<double>(n) * std::log(mean) - std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace

void ThermalSpec::validate() const {
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw InputError("ThermalSpec: temperature must be >= 0");
    }
    atom.validate();
    check_eps_tail(eps_tail, "ThermalSpec");
}

void CoherentSpec::validate() const {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw InputError("CoherentSpec: alpha must be finite");
    }
    atom.validate();
    check_eps_tail(eps_tail, "CoherentSpec");
}

void PhaseStateSpec::validate() const {
    if (r < 0) throw InputError("PhaseStateSpec: r must be >= 0");
    atom.validate();
}

double thermal_ratio(double temperature, const ModelParams& params) {
    params.validate();
    if (temperature == 0.0) return 0.0;
    return std::exp(-params.hbar * params.omega / (params.k_boltzmann * temperature));
}

Truncation thermal_truncation(double temperature, const ModelParams& params, double eps_tail) {
    check_eps_tail(eps_tail, "thermal_truncation");
    const double q = thermal_ratio(temperature, params);
    std::size_t n = 0;
    double tail = q;  // q^(n+1)
    while (!(tail < eps_tail)) {
        ++n;
        tail *= q;
    }
    return {n, tail};
}

Truncation coherent_truncation(cplx alpha, double eps_tail) {
    check_eps_tail(eps_tail, "coherent_truncation");
    const double mean = std::norm(alpha);
    if (mean == 0.0) return {0, 0.0};

    // Weights past the mode and below 1e-300 contribute nothing to any tail we can resolve.
    std::vector<double> p;
    for (std::size_t n = 0;; ++n) {
        const double lp = log_poisson(mean, n);
        p.push_back(std::exp(lp));
        if (static_cast<double>(n) > mean && lp < -690.0) break;
    }
    std::vector<double> suffix(p.size() + 1, 0.0);
    for (std::size_t n = p.size(); n-- > 0;) suffix[n] = suffix[n + 1] + p[n];

    for (std::size_t n = 0; n < p.size(); ++n) {
        if (suffix[n + 1] < eps_tail) return {n, suffix[n + 1]};
    }
    return {p.size() - 1, 0.0};
}

WeightedEnsemble build_thermal(const ThermalSpec& spec, const ModelParams& params) {
    spec.validate();
    const Truncation trunc = thermal_truncation(spec.temperature, params, spec.eps_tail);
    const double q = thermal_ratio(spec.temperature, params);
    const std::size_t n_max = trunc.n_max;

    std::vector<EnsembleMember> members;
    members.reserve(n_max + 1);
    double qn = 1.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        std::vector<cplx> field(n_max + 1);
        field[n] = 1.0;
        members.push_back({(1.0 - q) * qn, JointPureState::product(spec.atom, field)});
        qn *= q;
    }
    return WeightedEnsemble(std::move(members), spec.eps_tail);
}

JointPureState build_coherent(const CoherentSpec& spec) {
    spec.validate();
    const Truncation trunc = coherent_truncation(spec.alpha, spec.eps_tail);
    const double mean = std::norm(spec.alpha);
    const double phase = std::arg(spec.alpha);

    std::vector<cplx> field(trunc.n_max + 1);
    double kept = 0.0;
    for (std::size_t n = 0; n <= trunc.n_max; ++n) {
        const double mag = mean == 0.0 ? (n == 0 ? 1.0 : 0.0) : std::exp(0.5 * log_poisson(mean, n));
        field[n] = std::polar(mag, static_cast<double>(n) * phase);
        kept += mag * mag;
    }
    const double scale = 1.0 / std::sqrt(kept);
    for (auto& c : field) c *= scale;
    return JointPureState::product(spec.atom, field);
}

JointPureState build_phase_state(const PhaseStateSpec& spec) {
    spec.validate();
    const auto levels = static_cast<std::size_t>(spec.r) + 1;
    const std::vector<cplx> field(levels, cplx{1.0 / std::sqrt(static_cast<double>(levels)), 0.0});
    return JointPureState::product(spec.atom, field);
}

}  // namespace jcdeco
