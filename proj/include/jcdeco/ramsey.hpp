// ramsey.hpp: crossing times, Ramsey fringes and fringe contrast after the atom-field interaction
//
// The atom interacts with the field until rho_ee(t_alpha) reaches a target (1/2 for a
// balanced splitting). A phase shift phi and a classical pi/2 pulse then give
//   P_g(phi) = (1/2) (1 + Re(2 rho_ge(t_alpha) e^{i phi})),
// so the fringe contrast is 2 |rho_ge(t_alpha)|.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jcdeco/fock_core.hpp"

namespace jcdeco {

enum class CrossingPolicy { first, nearest_to };

struct CrossingQuery {
    double target = 0.5;
    CrossingPolicy which = CrossingPolicy::first;
    double t_ref = 0.0;  // seconds, used by nearest_to
    double t_lo = 0.0;   // grid, seconds
    double t_hi = 0.0;
    std::size_t n_points = 0;

    // target in (0, 1), t_lo < t_hi, n_points >= 10, t_ref inside the grid for nearest_to.
    void validate() const;
};

// Grid sign change of rho_ee - target refined by bisection (at most 40 halvings).
// Throws PhysicsError when no bracket exists or the refined root misses 1e-10.
double find_crossing(const JointPureState& initial, const ModelParams& params,
                     const CrossingQuery& query);

// P_g on each phase; rejects |rho_ge| > 1/2.
std::vector<double> ramsey_fringe(cplx rho_ge, std::span<const double> phi_grid);

struct RamseyScan {
    double t_alpha;
    cplx rho_ge;
    std::vector<double> phi_grid;
    std::vector<double> p_g;

    double contrast() const;  // max - min of p_g
};

RamseyScan ramsey_scan(const JointPureState& initial, const ModelParams& params,
                       const CrossingQuery& query, std::span<const double> phi_grid);

struct ContrastPoint {
    double alpha;
    double t_alpha;  // seconds
    double contrast;  // 2 |rho_ge(t_alpha)|
    double rho_ee;    // at t_alpha
};

// Atom in |e>, field in |alpha>, one crossing per alpha.
std::vector<ContrastPoint> contrast_vs_alpha(std::span<const double> alphas,
                                             const ModelParams& params, const CrossingQuery& query,
                                             double eps_tail = 1e-12);

}  // namespace jcdeco
