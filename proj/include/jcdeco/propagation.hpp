// propagation.hpp: time evolution under the resonant Jaynes–Cummings Hamiltonian
//
//   H = (1/2) hbar omega sigma_z + hbar omega a†a + hbar g (sigma_+ a + sigma_- a†)
//
// On resonance the free part commutes with the coupling, and the coupling acts on each
// doublet {|e,n>, |g,n+1>} as a rotation by theta_n = g sqrt(n+1) t. evolve_exact applies
// those rotations in closed form; evolve_oracle integrates the full truncated matrix with
// classical RK4 and exists only to check evolve_exact.

#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "jcdeco/fock_core.hpp"

namespace jcdeco {

enum class Frame { interaction, schroedinger };

enum class Direction { forward, backward };

// t >= 0 in seconds. Direction::backward applies exp(+iHt/hbar).
JointPureState evolve_exact(const JointPureState& state, const ModelParams& params, double t,
                            Frame frame = Frame::interaction,
                            Direction direction = Direction::forward);

// Fixed-step classical RK4 on the truncated Hamiltonian matrix over `steps` uniform substeps.
JointPureState evolve_oracle(const JointPureState& state, const ModelParams& params, double t,
                             Frame frame, std::size_t steps);

struct OracleRun {
    JointPureState state;
    double residual;  // max amplitude difference between the `steps` and `2 steps` runs
};

// Runs the integrator with `steps` and `2*steps` substeps and returns the finer result.
// Throws ToleranceError carrying the achieved residual when it exceeds `tolerance`.
OracleRun evolve_oracle_checked(const JointPureState& state, const ModelParams& params, double t,
                                Frame frame, std::size_t steps, double tolerance);

using InitialCondition = std::variant<JointPureState, WeightedEnsemble>;

// Element k is the reduced atomic state at t_grid[k] (interaction frame). Work is split over
// time points; ensemble members are summed in their stored order.
std::vector<AtomDensityMatrix> coherence_trace(const InitialCondition& initial,
                                               const ModelParams& params,
                                               std::span<const double> t_grid);

}  // namespace jcdeco
