#include "jcdeco/propagation.hpp"

#include <cmath>
#include <string>

#include "jcdeco/errors.hpp"
#include "jcdeco/parallel.hpp"

namespace jcdeco {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_time(double t, const char* where) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw InputError(std::string(where) + ": t must be finite and >= 0 (use Direction::backward "
                                              "for reverse evolution)");
    }
}

// Free evolution exp(-i omega t (a†a + sigma_z/2)); sign = -1 for forward evolution.
// The phase is reduced mod 2 pi first, and |e,n>, |g,n> share the factor exp(i sign phi n)
// so their relative phase is exactly exp(i sign phi).
void apply_free_phases(std::vector<cplx>& e, std::vector<cplx>& g, double omega_t, double sign) {
    const double phi = std::fmod(omega_t, 2.0 * constants::pi);
    const cplx half = std::polar(1.0, sign * 0.5 * phi);
    for (std::size_t n = 0; n < g.size(); ++n) {
        const cplx w = std::polar(1.0, sign * phi * static_cast<double>(n));
        if (n < e.size()) e[n] *= w * half;
        g[n] *= w * std::conj(half);
    }
}

}  // namespace

JointPureState evolve_exact(const JointPureState& state, const ModelParams& params, double t,
                            Frame frame, Direction direction) {
    params.validate();
    check_time(t, "evolve_exact");
    state.require_normalized("evolve_exact");

    const auto src_e = state.amps_e();
    const auto src_g = state.amps_g();
    std::vector<cplx> e(src_e.begin(), src_e.end());
    std::vector<cplx> g(src_g.begin(), src_g.end());

    const double sign = direction == Direction::forward ? 1.0 : -1.0;
    for (std::size_t n = 0; n < e.size(); ++n) {
        const cplx a = e[n];
        const cplx b = g[n + 1];
        if (a == cplx{} && b == cplx{}) continue;
        const double theta = sign * params.g * std::sqrt(static_cast<double>(n + 1)) * t;
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        e[n] = c * a - kI * s * b;
        g[n + 1] = -kI * s * a + c * b;
    }

    if (frame == Frame::schroedinger) apply_free_phases(e, g, params.omega * t, -sign);
    return {std::move(e), std::move(g)};
}

std::vector<AtomDensityMatrix> coherence_trace(const InitialCondition& initial,
                                               const ModelParams& params,
                                               std::span<const double> t_grid) {
    params.validate();
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        check_time(t_grid[k], "coherence_trace");
        if (k > 0 && t_grid[k] < t_grid[k - 1]) {
            throw InputError("coherence_trace: t_grid must be nondecreasing");
        }
    }

    std::vector<AtomDensityMatrix> out(t_grid.size());
    if (const auto* pure = std::get_if<JointPureState>(&initial)) {
        pure->require_normalized("coherence_trace");
        parallel_for(t_grid.size(), [&](std::size_t k) {
            out[k] = reduce_atom(evolve_exact(*pure, params, t_grid[k]));
        });
        return out;
    }

    const auto& ensemble = std::get<WeightedEnsemble>(initial);
    parallel_for(t_grid.size(), [&](std::size_t k) {
        AtomDensityMatrix acc;
        for (const auto& m : ensemble.members()) {
            const AtomDensityMatrix r = reduce_atom(evolve_exact(m.state, params, t_grid[k]));
            acc.rho_ee += m.weight * r.rho_ee;
            acc.rho_gg += m.weight * r.rho_gg;
            acc.rho_eg += m.weight * r.rho_eg;
        }
        const double w = ensemble.weight_sum();
        acc.rho_ee /= w;
        acc.rho_gg /= w;
        acc.rho_eg /= w;
        out[k] = acc;
    });
    return out;
}

}  // namespace jcdeco
