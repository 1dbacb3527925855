#include "jcdeco/ramsey.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "jcdeco/errors.hpp"
#include "jcdeco/initial_states.hpp"
#include "jcdeco/parallel.hpp"
#include "jcdeco/propagation.hpp"

namespace jcdeco {

namespace {

constexpr int kMaxBisections = 40;
constexpr double kCrossingTol = 1e-10;

double population_excess(const JointPureState& initial, const ModelParams& params, double t,
                         double target) {
    return reduce_atom(evolve_exact(initial, params, t)).rho_ee - target;
}

}  // namespace

void CrossingQuery::validate() const {
    if (!(target > 0.0 && target < 1.0)) throw InputError("CrossingQuery: target must lie in (0, 1)");
    if (!(t_lo >= 0.0 && t_lo < t_hi)) throw InputError("CrossingQuery: need 0 <= t_lo < t_hi");
    if (n_points < 10) throw InputError("CrossingQuery: n_points must be >= 10");
    if (which == CrossingPolicy::nearest_to && !(t_ref >= t_lo && t_ref <= t_hi)) {
        throw InputError("CrossingQuery: t_ref lies outside the grid");
    }
}

double find_crossing(const JointPureState& initial, const ModelParams& params,
                     const CrossingQuery& query) {
    query.validate();
    const std::size_t n = query.n_points;
    const double step = (query.t_hi - query.t_lo) / static_cast<double>(n - 1);
    std::vector<double> grid(n);
    for (std::size_t k = 0; k < n; ++k) grid[k] = query.t_lo + step * static_cast<double>(k);
    grid.back() = query.t_hi;

    const auto trace = coherence_trace(initial, params, grid);
    std::vector<double> f(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = trace[k].rho_ee - query.target;

    std::size_t chosen = n;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const bool bracket = (f[k] <= 0.0 && f[k + 1] >= 0.0) || (f[k] >= 0.0 && f[k + 1] <= 0.0);
        if (!bracket) continue;
        if (query.which == CrossingPolicy::first) {
            chosen = k;
            break;
        }
        const double distance = std::abs(0.5 * (grid[k] + grid[k + 1]) - query.t_ref);
        if (distance < best_distance) {
            best_distance = distance;
            chosen = k;
        }
    }
    if (chosen == n) {
        const auto [lo, hi] = std::minmax_element(trace.begin(), trace.end(),
                                                  [](const auto& a, const auto& b) {
                                                      return a.rho_ee < b.rho_ee;
                                                  });
        std::ostringstream msg;
        msg << "no crossing found: rho_ee on the grid spans [" << lo->rho_ee << ", " << hi->rho_ee
            << "], target " << query.target;
        throw PhysicsError(msg.str());
    }

    double a = grid[chosen], b = grid[chosen + 1];
    double fa = f[chosen], fb = f[chosen + 1];
    for (int it = 0; it < kMaxBisections && fa != 0.0 && fb != 0.0; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = population_excess(initial, params, mid, query.target);
        if ((fa < 0.0) == (fm < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    const double root = std::abs(fa) <= std::abs(fb) ? a : b;
    const double residual = std::min(std::abs(fa), std::abs(fb));
    if (!(residual < kCrossingTol)) {
        std::ostringstream msg;
        msg << "crossing refinement stalled at |rho_ee - target| = " << residual;
        throw PhysicsError(msg.str());
    }
    return root;
}

std::vector<double> ramsey_fringe(cplx rho_ge, std::span<const double> phi_grid) {
    // A few ulps of slack for coherences computed from unit vectors.
    if (!(std::abs(rho_ge) <= 0.5 + 1e-14)) {
        throw InputError("ramsey_fringe: |rho_ge| > 1/2 is unphysical");
    }
    std::vector<double> p(phi_grid.size());
    for (std::size_t k = 0; k < phi_grid.size(); ++k) {
        const double v = 0.5 * (1.0 + std::real(2.0 * rho_ge * std::polar(1.0, phi_grid[k])));
        p[k] = std::clamp(v, 0.0, 1.0);
    }
    return p;
}

double RamseyScan::contrast() const {
    if (p_g.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(p_g.begin(), p_g.end());
    return *hi - *lo;
}

RamseyScan ramsey_scan(const JointPureState& initial, const ModelParams& params,
                       const CrossingQuery& query, std::span<const double> phi_grid) {
    RamseyScan scan;
    scan.t_alpha = find_crossing(initial, params, query);
    scan.rho_ge = reduce_atom(evolve_exact(initial, params, scan.t_alpha)).rho_ge();
    scan.phi_grid.assign(phi_grid.begin(), phi_grid.end());
    scan.p_g = ramsey_fringe(scan.rho_ge, phi_grid);
    return scan;
}

std::vector<ContrastPoint> contrast_vs_alpha(std::span<const double> alphas,
                                             const ModelParams& params, const CrossingQuery& query,
                                             double eps_tail) {
    query.validate();
    std::vector<ContrastPoint> out(alphas.size());
    parallel_for(alphas.size(), [&](std::size_t i) {
        const JointPureState initial =
            build_coherent(CoherentSpec{alphas[i], AtomState::excited(), eps_tail});
        const double t_alpha = find_crossing(initial, params, query);
        const AtomDensityMatrix rho = reduce_atom(evolve_exact(initial, params, t_alpha));
        out[i] = {alphas[i], t_alpha, 2.0 * std::abs(rho.rho_ge()), rho.rho_ee};
    });
    return out;
}

}  // namespace jcdeco
