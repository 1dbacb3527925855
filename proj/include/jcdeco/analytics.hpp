// analytics.hpp: closed-form coherence results and their statistical checks
//
// For the field starting in the truncated phase state (r+1)^(-1/2) sum_{n<=r} |n> and the
// atom in (|e> + |g>)/sqrt(2), the atomic coherence is a sum of r+1 phasors of weight
// 1/(2(r+1)): r of them rotate at g(sqrt(n+1) - sqrt(n)) and the top one is modulated by
// cos(g sqrt(r+1) t). Once the phasors dephase, |rho_eg|^2 behaves like the squared modulus
// of a random walk with mean M and standard deviation sigma.

#pragma once

#include <cstdint>
#include <utility>

#include "jcdeco/fock_core.hpp"
#include "jcdeco/initial_states.hpp"

namespace jcdeco {

struct LongTimeStats {
    double mean_abs_sq;  // M
    double std_abs_sq;   // sigma
    double tau_d;        // seconds
};

struct SampleStats {
    double mean;
    double stddev;     // sample standard deviation
    double std_error;  // stddev / sqrt(n)
};

// rho_eg(t) for the phase-state initial condition (interaction frame).
cplx phase_state_coherence(long r, double g, double t);

// Period of the slowest phasor: 2 pi / (g (sqrt(r) - sqrt(r-1))), r >= 1.
double decoherence_time(long r, double g);

// Large-r form 4 pi sqrt(r) / g.
double decoherence_time_approx(long r, double g);

// M = (r + 1/2) / (2(r+1))^2, sigma = sqrt(r^2 + 1/8) / (2(r+1))^2, tau_d as above.
LongTimeStats longtime_stats(long r, double g);

// Monte-Carlo over independent uniform phases of every phasor and an independent uniform
// cosine argument. n_samples >= 1000; deterministic for a given seed.
SampleStats random_phase_mc(long r, std::int64_t n_samples, std::uint64_t seed);

// c_e conj(c_g) sum_n p_n cos(g sqrt(n+1) t) cos(g sqrt(n) t) over the kept thermal weights.
cplx thermal_coherence_series(const ThermalSpec& spec, const ModelParams& params, double t);

struct TimeWindow {
    double t_lo;  // seconds
    double t_hi;
};

// [lo_factor tau_d, hi_factor tau_d] for the phase state of level r.
TimeWindow longtime_window(long r, double g, double lo_factor = 10.0, double hi_factor = 1000.0);

// Samples t uniformly in the window and averages |rho_eg(t)|^2 from the exact propagator.
SampleStats time_average_stats(const JointPureState& initial, const ModelParams& params,
                               TimeWindow window, std::int64_t n_samples, std::uint64_t seed);

}  // namespace jcdeco
