// fock_core.hpp: atom ⊗ truncated-Fock states and reduction to the atomic density matrix
//
// The joint basis is {|e,n>, |g,n>}. A JointPureState with truncation level n_max stores
// e-amplitudes for n = 0..n_max and g-amplitudes for n = 0..n_max+1, so every doublet
// {|e,n>, |g,n+1>} with n <= n_max is closed on the stored space.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace jcdeco {

using cplx = std::complex<double>;

// Tolerances on the norm: builders guarantee kStateNormTol, operations reject inputs
// outside kInputNormTol.
inline constexpr double kStateNormTol = 1e-10;
inline constexpr double kInputNormTol = 1e-6;

namespace constants {
inline constexpr double hbar = 1.054571817e-34;      // J·s
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

struct ModelParams {
    double omega;  // mode/atom angular frequency, rad/s
    double g;      // vacuum coupling, rad/s
    double hbar = constants::hbar;
    double k_boltzmann = constants::k_boltzmann;

    // Throws InputError unless every field is strictly positive and finite.
    void validate() const;

    // Cavity of the microwave experiment: nu = 51.099 GHz (omega = 2 pi nu), g = 2 pi x 50 kHz.
    static ModelParams cavity_defaults();
};

struct AtomState {
    cplx c_e;
    cplx c_g;

    void validate() const;

    static AtomState excited() { return {1.0, 0.0}; }
    static AtomState ground() { return {0.0, 1.0}; }
    static AtomState balanced();  // (|e> + |g>)/sqrt(2)
};

class JointPureState {
public:
    // Zero state with truncation level n_max.
    explicit JointPureState(std::size_t n_max);

    // Requires amps_g.size() == amps_e.size() + 1 and amps_e nonempty.
    JointPureState(std::vector<cplx> amps_e, std::vector<cplx> amps_g);

    // atom ⊗ field, with field amplitudes over n = 0..field.size()-1.
    static JointPureState product(const AtomState& atom, std::span<const cplx> field);

    std::size_t n_max() const noexcept { return amps_e_.size() - 1; }
    std::span<const cplx> amps_e() const noexcept { return amps_e_; }
    std::span<const cplx> amps_g() const noexcept { return amps_g_; }

    cplx e(std::size_t n) const { return amps_e_.at(n); }
    cplx g(std::size_t n) const { return amps_g_.at(n); }

    double norm_squared() const noexcept;
    bool is_normalized(double tol = kStateNormTol) const noexcept;

    // Largest absolute amplitude difference; states of different n_max compare over
    // the union with missing entries treated as zero.
    double max_abs_diff(const JointPureState& other) const noexcept;

    // Throws InputError if |norm^2 - 1| > kInputNormTol.
    void require_normalized(const char* where) const;

private:
    std::vector<cplx> amps_e_;
    std::vector<cplx> amps_g_;
};

struct EnsembleMember {
    double weight;
    JointPureState state;
};

class WeightedEnsemble {
public:
    // Weights must be > 0 and sum to at most 1 (up to rounding). tail_tolerance is
    // the builder's declared bound on the missing weight 1 - sum.
    WeightedEnsemble(std::vector<EnsembleMember> members, double tail_tolerance);

    std::span<const EnsembleMember> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    double weight_sum() const noexcept { return weight_sum_; }
    double weight_deficit() const noexcept;
    double tail_tolerance() const noexcept { return tail_tolerance_; }

private:
    std::vector<EnsembleMember> members_;
    double weight_sum_ = 0.0;
    double tail_tolerance_ = 0.0;
};

struct AtomDensityMatrix {
    double rho_ee = 0.0;
    double rho_gg = 0.0;
    cplx rho_eg{};

    cplx rho_ge() const { return std::conj(rho_eg); }
    double trace() const { return rho_ee + rho_gg; }
    double purity() const { return rho_ee * rho_ee + rho_gg * rho_gg + 2.0 * std::norm(rho_eg); }
    // |rho_eg|^2 <= rho_ee rho_gg + tol
    bool is_positive(double tol = 1e-12) const { return std::norm(rho_eg) <= rho_ee * rho_gg + tol; }
};

struct EnsembleReduction {
    AtomDensityMatrix rho;
    double weight_deficit = 0.0;  // 1 - sum of weights; rho is renormalized by the sum
};

AtomDensityMatrix reduce_atom(const JointPureState& state);

EnsembleReduction reduce_atom_ensemble(const WeightedEnsemble& ensemble);

// Number of stored amplitudes with modulus > tol.
std::size_t support_dimension(const JointPureState& state, double tol);

// Jaynes–Cummings excitation number sum_n (n |g_n|^2 + (n+1) |e_n|^2).
double excitation_number(const JointPureState& state);

}  // namespace jcdeco
