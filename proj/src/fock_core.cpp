#include "jcdeco/fock_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jcdeco/errors.hpp"

namespace jcdeco {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void ModelParams::validate() const {
    if (!positive_finite(omega)) throw InputError("ModelParams: omega must be > 0");
    if (!positive_finite(g)) throw InputError("ModelParams: g must be > 0");
    if (!positive_finite(hbar) || !positive_finite(k_boltzmann)) {
        throw InputError("ModelParams: physical constants must be > 0");
    }
}

ModelParams ModelParams::cavity_defaults() {
    return ModelParams{2.0 * constants::pi * 51.099e9, 2.0 * constants::pi * 50e3};
}

void AtomState::validate() const {
    const double n = std::norm(c_e) + std::norm(c_g);
    if (!(std::abs(n - 1.0) <= 1e-12)) {
        throw InputError("AtomState: |c_e|^2 + |c_g|^2 must equal 1, got " + std::to_string(n));
    }
}

AtomState AtomState::balanced() {
    const double s = 1.0 / std::sqrt(2.0);
    return {s, s};
}

JointPureState::JointPureState(std::size_t n_max) : amps_e_(n_max + 1), amps_g_(n_max + 2) {}

JointPureState::JointPureState(std::vector<cplx> amps_e, std::vector<cplx> amps_g)
    : amps_e_(std::move(amps_e)), amps_g_(std::move(amps_g)) {
    if (amps_e_.empty()) throw InputError("JointPureState: amps_e must be nonempty");
    if (amps_g_.size() != amps_e_.size() + 1) {
        throw InputError("JointPureState: amps_g must have exactly one more entry than amps_e");
    }
}

JointPureState JointPureState::product(const AtomState& atom, std::span<const cplx> field) {
    if (field.empty()) throw InputError("JointPureState::product: empty field");
    const std::size_t n_max = field.size() - 1;
    std::vector<cplx> e(n_max + 1);
    std::vector<cplx> g(n_max + 2);
    for (std::size_t n = 0; n <= n_max; ++n) {
        e[n] = atom.c_e * field[n];
        g[n] = atom.c_g * field[n];
    }
    return {std::move(e), std::move(g)};
}

double JointPureState::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amps_e_) s += std::norm(a);
    for (const auto& a : amps_g_) s += std::norm(a);
    return s;
}

bool JointPureState::is_normalized(double tol) const noexcept {
    return std::abs(norm_squared() - 1.0) <= tol;
}

double JointPureState::max_abs_diff(const JointPureState& other) const noexcept {
    auto diff = [](std::span<const cplx> a, std::span<const cplx> b) {
        double m = 0.0;
        const std::size_t len = std::max(a.size(), b.size());
        for (std::size_t i = 0; i < len; ++i) {
            const cplx x = i < a.size() ? a[i] : cplx{};
            const cplx y = i < b.size() ? b[i] : cplx{};
            m = std::max(m, std::abs(x - y));
        }
        return m;
    };
    return std::max(diff(amps_e_, other.amps_e_), diff(amps_g_, other.amps_g_));
}

void JointPureState::require_normalized(const char* where) const {
    const double n = norm_squared();
    if (!(std::abs(n - 1.0) <= kInputNormTol)) {
        throw InputError(std::string(where) + ": state is not normalized (norm^2 = " +
                         std::to_string(n) + ")");
    }
}

WeightedEnsemble::WeightedEnsemble(std::vector<EnsembleMember> members, double tail_tolerance)
    : members_(std::move(members)), tail_tolerance_(tail_tolerance) {
    if (members_.empty()) throw InputError("WeightedEnsemble: empty ensemble");
    if (!(tail_tolerance_ >= 0.0 && tail_tolerance_ < 1.0)) {
        throw InputError("WeightedEnsemble: tail tolerance must lie in [0, 1)");
    }
    for (const auto& m : members_) {
        if (!(m.weight > 0.0)) throw InputError("WeightedEnsemble: weights must be > 0");
        weight_sum_ += m.weight;
    }
    // Rounding of a sum of many weights may exceed 1 by a few ulps.
    if (weight_sum_ > 1.0 + 1e-12 || weight_sum_ < 1.0 - tail_tolerance_ - 1e-12) {
        throw InputError("WeightedEnsemble: weight sum " + std::to_string(weight_sum_) +
                         " outside [1 - tail_tolerance, 1]");
    }
}

double WeightedEnsemble::weight_deficit() const noexcept { return std::max(0.0, 1.0 - weight_sum_); }

AtomDensityMatrix reduce_atom(const JointPureState& state) {
    state.require_normalized("reduce_atom");
    const auto e = state.amps_e();
    const auto g = state.amps_g();

    AtomDensityMatrix rho;
    for (const auto& a : e) rho.rho_ee += std::norm(a);
    for (const auto& a : g) rho.rho_gg += std::norm(a);
    for (std::size_t n = 0; n < e.size(); ++n) rho.rho_eg += e[n] * std::conj(g[n]);

    // Exact trace 1 for the reduced matrix of a unit vector.
    const double tr = rho.rho_ee + rho.rho_gg;
    rho.rho_ee /= tr;
    rho.rho_gg /= tr;
    rho.rho_eg /= tr;
    return rho;
}

EnsembleReduction reduce_atom_ensemble(const WeightedEnsemble& ensemble) {
    EnsembleReduction out;
    for (const auto& m : ensemble.members()) {
        const AtomDensityMatrix r = reduce_atom(m.state);
        out.rho.rho_ee += m.weight * r.rho_ee;
        out.rho.rho_gg += m.weight * r.rho_gg;
        out.rho.rho_eg += m.weight * r.rho_eg;
    }
    const double w = ensemble.weight_sum();
    out.rho.rho_ee /= w;
    out.rho.rho_gg /= w;
    out.rho.rho_eg /= w;
    out.weight_deficit = ensemble.weight_deficit();
    return out;
}

std::size_t support_dimension(const JointPureState& state, double tol) {
    auto count = [tol](std::span<const cplx> v) {
        return static_cast<std::size_t>(
            std::count_if(v.begin(), v.end(), [tol](const cplx& a) { return std::abs(a) > tol; }));
    };
    return count(state.amps_e()) + count(state.amps_g());
}

double excitation_number(const JointPureState& state) {
    double s = 0.0;
    const auto e = state.amps_e();
    const auto g = state.amps_g();
    for (std::size_t n = 0; n < e.size(); ++n) s += static_cast<double>(n + 1) * std::norm(e[n]);
    for (std::size_t n = 0; n < g.size(); ++n) s += static_cast<double>(n) * std::norm(g[n]);
    return s;
}

}  // namespace jcdeco
