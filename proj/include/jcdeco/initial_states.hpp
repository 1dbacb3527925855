// initial_states.hpp: thermal, coherent and truncated phase-state initial conditions

#pragma once

#include <cstddef>

#include "jcdeco/fock_core.hpp"

namespace jcdeco {

struct ThermalSpec {
    double temperature;  // kelvin; 0 selects the exact vacuum limit
    AtomState atom;
    double eps_tail = 1e-12;

    void validate() const;
};

struct CoherentSpec {
    cplx alpha;
    AtomState atom;
    double eps_tail = 1e-12;

    void validate() const;
};

struct PhaseStateSpec {
    long r;  // top Fock level
    AtomState atom;

    void validate() const;
};

// Boltzmann factor q = exp(-hbar omega / (k_B T)); 0 at T = 0.
double thermal_ratio(double temperature, const ModelParams& params);

struct Truncation {
    std::size_t n_max;
    double tail;  // probability dropped beyond n_max before renormalization
};

// Smallest N with q^(N+1) < eps_tail.
Truncation thermal_truncation(double temperature, const ModelParams& params, double eps_tail);

// Smallest N with sum_{n>N} |<n|alpha>|^2 < eps_tail, from suffix sums of the Poisson weights.
Truncation coherent_truncation(cplx alpha, double eps_tail);

// One member (p_n, atom ⊗ |n>) per kept Fock level, p_n = (1 - q) q^n, each with n_max = N.
WeightedEnsemble build_thermal(const ThermalSpec& spec, const ModelParams& params);

// atom ⊗ |alpha>, truncated per coherent_truncation and renormalized.
JointPureState build_coherent(const CoherentSpec& spec);

// atom ⊗ (r+1)^(-1/2) sum_{n=0}^{r} |n>.
JointPureState build_phase_state(const PhaseStateSpec& spec);

}  // namespace jcdeco
