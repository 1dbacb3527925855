#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "jcdeco/errors.hpp"
#include "jcdeco/initial_states.hpp"

using namespace jcdeco;
using doctest::Approx;

namespace {

// Bose–Einstein occupation from the exact SI Planck constant, independent of the
// library's hbar·omega route.
double bose_einstein_occupation(double nu_hz, double temperature) {
    constexpr double h = 6.62607015e-34;
    constexpr double kb = 1.380649e-23;
    return 1.0 / std::expm1(h * nu_hz / (kb * temperature));
}

struct Moments {
    double mean;
    double variance;
};

Moments photon_moments(std::span<const cplx> field) {
    double p = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t n = 0; n < field.size(); ++n) {
        const double w = std::norm(field[n]);
        p += w;
        m1 += w * static_cast<double>(n);
        m2 += w * static_cast<double>(n) * static_cast<double>(n);
    }
    return {m1 / p, m2 / p - (m1 / p) * (m1 / p)};
}

// Moments of the Poisson distribution restricted to n <= n_max and renormalized,
// from long-double factorial recursion.
Moments truncated_poisson_moments(double mean, std::size_t n_max) {
    long double term = std::exp(-static_cast<long double>(mean));
    long double p = 0, m1 = 0, m2 = 0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        if (n > 0) term *= static_cast<long double>(mean) / static_cast<long double>(n);
        p += term;
        m1 += term * n;
        m2 += term * n * n;
    }
    const long double mu = m1 / p;
    return {static_cast<double>(mu), static_cast<double>(m2 / p - mu * mu)};
}

}  // namespace

TEST_CASE("thermal: zero temperature is the vacuum") {
    const auto ens = build_thermal({0.0, AtomState::balanced(), 1e-12}, ModelParams::cavity_defaults());
    REQUIRE(ens.size() == 1);
    CHECK(ens.members()[0].weight == 1.0);
    CHECK(ens.members()[0].state.n_max() == 0);
    CHECK(ens.weight_deficit() == 0.0);
}

TEST_CASE("thermal: 0.8 K cavity field is near the vacuum") {
    const ModelParams cavity = ModelParams::cavity_defaults();
    const auto ens = build_thermal({0.8, AtomState::balanced(), 1e-12}, cavity);
    double mean = 0.0;
    for (std::size_t n = 0; n < ens.size(); ++n) mean += ens.members()[n].weight * static_cast<double>(n);
    mean /= ens.weight_sum();
    const double expected = bose_einstein_occupation(51.099e9, 0.8);
    CHECK(mean == Approx(expected).epsilon(1e-8));
    CHECK(mean == Approx(0.0489135).epsilon(1e-5));
}

TEST_CASE("thermal: geometric tail bound") {
    const ModelParams cavity = ModelParams::cavity_defaults();
    const double q = thermal_ratio(0.8, cavity);
    const auto trunc = thermal_truncation(0.8, cavity, 1e-12);
    CHECK(std::pow(q, trunc.n_max + 1) < 1e-12);
    CHECK(std::pow(q, trunc.n_max) >= 1e-12);
    const auto ens = build_thermal({0.8, AtomState::balanced(), 1e-12}, cavity);
    CHECK(ens.size() == trunc.n_max + 1);
    CHECK(ens.weight_sum() >= 1.0 - 1e-12);
    for (const auto& m : ens.members()) CHECK(m.state.n_max() == trunc.n_max);
}

TEST_CASE("thermal: deficit below eps_tail across temperatures") {
    const ModelParams cavity = ModelParams::cavity_defaults();
    for (double t : {1e-3, 0.1, 0.8, 3.0, 10.0, 33.3, 100.0}) {
        for (double eps : {1e-3, 1e-8, 1e-12}) {
            const auto ens = build_thermal({t, AtomState::balanced(), eps}, cavity);
            CHECK(ens.weight_deficit() < eps);
            for (const auto& m : ens.members()) CHECK(m.state.is_normalized());
        }
    }
}

TEST_CASE("thermal spec validation") {
    const ModelParams cavity = ModelParams::cavity_defaults();
    CHECK_THROWS_AS(build_thermal({-1.0, AtomState::balanced(), 1e-12}, cavity), InputError);
    CHECK_THROWS_AS(build_thermal({1.0, AtomState::balanced(), 0.0}, cavity), InputError);
    CHECK_THROWS_AS(build_thermal({1.0, AtomState::balanced(), 1e-2}, cavity), InputError);
    CHECK_THROWS_AS(build_thermal({1.0, AtomState{1.0, 1.0}, 1e-12}, cavity), InputError);
}

TEST_CASE("coherent: vacuum, Poisson mean and phase convention") {
    const auto vac = build_coherent({0.0, AtomState::excited(), 1e-12});
    CHECK(vac.n_max() == 0);
    CHECK(vac.e(0) == cplx{1.0, 0.0});

    const auto trunc = coherent_truncation(2.0, 1e-12);
    CHECK(trunc.tail < 1e-12);
    CHECK(1.0 - trunc.tail >= 1.0 - 1e-12);
    const auto s = build_coherent({2.0, AtomState::excited(), 1e-12});
    CHECK(s.is_normalized());
    CHECK(photon_moments(s.amps_e()).mean == Approx(4.0).epsilon(1e-9 / 4.0));

    const auto real = build_coherent({3.1, AtomState::excited(), 1e-12});
    for (const auto& a : real.amps_e()) {
        CHECK(a.real() > 0.0);
        CHECK(a.imag() == 0.0);
    }
}

TEST_CASE("coherent: truncation level is the smallest meeting the tail") {
    for (double alpha : {0.5, 1.0, 2.0, 4.5, 6.0, 10.0}) {
        const auto t = coherent_truncation(alpha, 1e-10);
        // One level less must leave at least eps_tail behind.
        long double term = std::exp(-static_cast<long double>(alpha * alpha));
        long double kept = 0;
        for (std::size_t n = 0; n < t.n_max; ++n) {
            if (n > 0) term *= static_cast<long double>(alpha * alpha) / n;
            kept += term;
        }
        CHECK(static_cast<double>(1.0L - kept) >= 1e-10 * (1 - 1e-6));
        CHECK(t.tail < 1e-10);
    }
}

TEST_CASE("coherent: Poissonian photon statistics") {
    for (double eps : {1e-3, 1e-6, 1e-12}) {
        for (double alpha : {0.3, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0}) {
            const auto s = build_coherent({alpha, AtomState::excited(), eps});
            const auto got = photon_moments(s.amps_e());
            const auto exact = truncated_poisson_moments(alpha * alpha, s.n_max());
            CHECK(got.mean == Approx(exact.mean).epsilon(1e-12));
            CHECK(std::abs(got.variance - exact.variance) < 1e-11);
            // Tail moments scale with n_max and n_max^2.
            const double n = static_cast<double>(s.n_max());
            CHECK(std::abs(got.mean - alpha * alpha) <= 10.0 * eps * n);
            CHECK(std::abs(got.variance - alpha * alpha) <= 10.0 * eps * n * n);
        }
    }
}

TEST_CASE("coherent: complex displacement") {
    const cplx alpha = std::polar(1.7, 0.6);
    const auto s = build_coherent({alpha, AtomState::excited(), 1e-12});
    for (std::size_t n = 1; n < s.amps_e().size(); ++n) {
        const cplx ratio = s.e(n) / s.e(n - 1);
        CHECK(std::abs(ratio - alpha / std::sqrt(static_cast<double>(n))) < 1e-12);
    }
}

TEST_CASE("phase state") {
    const auto vac = build_phase_state({0, AtomState::balanced()});
    CHECK(vac.n_max() == 0);
    CHECK(std::abs(vac.e(0) - 1.0 / std::sqrt(2.0)) < 1e-15);

    const auto r3 = build_phase_state({3, AtomState::excited()});
    for (const auto& a : r3.amps_e()) CHECK(a == cplx{0.5, 0.0});

    const auto r10 = build_phase_state({10, AtomState::balanced()});
    CHECK(std::abs(reduce_atom(r10).rho_eg - 0.5) < 1e-15);

    CHECK_THROWS_AS(build_phase_state({-1, AtomState::balanced()}), InputError);
}

TEST_CASE("phase state field marginal is pure") {
    for (long r : {0L, 4L, 40L}) {
        const auto s = build_phase_state({r, AtomState::balanced()});
        // Field marginal rho_F(n, m) = sum_atom a_n conj(a_m); purity Tr rho_F^2.
        const auto e = s.amps_e();
        const auto g = s.amps_g();
        const std::size_t dim = g.size();
        double purity = 0.0;
        for (std::size_t n = 0; n < dim; ++n) {
            for (std::size_t m = 0; m < dim; ++m) {
                const cplx en = n < e.size() ? e[n] : cplx{};
                const cplx em = m < e.size() ? e[m] : cplx{};
                const cplx rho = en * std::conj(em) + g[n] * std::conj(g[m]);
                purity += std::norm(rho);
            }
        }
        CHECK(purity == Approx(1.0).epsilon(1e-12));
    }
}
