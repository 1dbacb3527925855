// support.hpp: generators and reference computations shared by the test binaries

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "jcdeco/fock_core.hpp"

namespace jcdeco::testing {

// Random unit vector with Gaussian components over a given truncation level.
inline JointPureState random_state(std::mt19937_64& rng, std::size_t n_max) {
    std::normal_distribution<double> gauss;
    std::vector<cplx> e(n_max + 1), g(n_max + 2);
    double norm = 0.0;
    for (auto& a : e) {
        a = {gauss(rng), gauss(rng)};
        norm += std::norm(a);
    }
    for (auto& a : g) {
        a = {gauss(rng), gauss(rng)};
        norm += std::norm(a);
    }
    const double s = 1.0 / std::sqrt(norm);
    for (auto& a : e) a *= s;
    for (auto& a : g) a *= s;
    return {std::move(e), std::move(g)};
}

inline AtomState random_atom(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double theta = 0.5 * constants::pi * u(rng);
    const double phi = 2.0 * constants::pi * u(rng);
    return {std::cos(theta), std::polar(std::sin(theta), phi)};
}

// Interaction-frame parameters with g = 1: times are in units of 1/g.
inline ModelParams unit_coupling() { return ModelParams{1.0, 1.0}; }

}  // namespace jcdeco::testing
