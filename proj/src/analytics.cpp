#include "jcdeco/analytics.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "jcdeco/errors.hpp"
#include "jcdeco/parallel.hpp"
#include "jcdeco/propagation.hpp"
#include "jcdeco/random_stream.hpp"

namespace jcdeco {

namespace {

constexpr double kTwoPi = 2.0 * constants::pi;
constexpr std::int64_t kBlock = 4096;
constexpr std::int64_t kMinSamples = 1000;

void require_r(long r, long min, const char* where) {
    if (r < min) {
        throw InputError(std::string(where) + ": r must be >= " + std::to_string(min));
    }
}

void require_samples(std::int64_t n, const char* where) {
    if (n < kMinSamples) throw InputError(std::string(where) + ": n_samples must be >= 1000");
}

// Running mean and sum of squared deviations, merged in block order.
struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        count += 1.0;
        const double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.count == 0.0) return;
        const double total = count + o.count;
        const double d = o.mean - mean;
        mean += d * o.count / total;
        m2 += o.m2 + d * d * count * o.count / total;
        count = total;
    }

    SampleStats finish() const {
        const double var = m2 / (count - 1.0);
        const double sd = std::sqrt(var);
        return {mean, sd, sd / std::sqrt(count)};
    }
};

// Evaluates sample(i) for i in [0, n) in fixed-size blocks and merges them in order.
template <class Sample>
SampleStats blocked_stats(std::int64_t n, Sample&& sample) {
    const auto blocks = static_cast<std::size_t>((n + kBlock - 1) / kBlock);
    std::vector<Moments> partial(blocks);
    parallel_for(blocks, [&](std::size_t b) {
        const std::int64_t lo = static_cast<std::int64_t>(b) * kBlock;
        const std::int64_t hi = std::min(n, lo + kBlock);
        Moments m;
        for (std::int64_t i = lo; i < hi; ++i) m.add(sample(static_cast<std::uint64_t>(i)));
        partial[b] = m;
    });
    Moments total;
    for (const auto& m : partial) total.merge(m);
    return total.finish();
}

}  // namespace

cplx phase_state_coherence(long r, double g, double t) {
    require_r(r, 0, "phase_state_coherence");
    if (!(t >= 0.0)) throw InputError("phase_state_coherence: t must be >= 0");
    const double weight = 1.0 / (2.0 * static_cast<double>(r + 1));
    const double rd = static_cast<double>(r);

    cplx sum = std::cos(g * std::sqrt(rd + 1.0) * t) * std::polar(1.0, g * std::sqrt(rd) * t);
    for (long n = 0; n < r; ++n) {
        const double nd = static_cast<double>(n);
        sum += std::polar(1.0, -g * (std::sqrt(nd + 1.0) - std::sqrt(nd)) * t);
    }
    return weight * sum;
}

double decoherence_time(long r, double g) {
    require_r(r, 1, "decoherence_time");
    if (!(g > 0.0)) throw InputError("decoherence_time: g must be > 0");
    const double rd = static_cast<double>(r);
    // sqrt(r) - sqrt(r-1) = 1 / (sqrt(r) + sqrt(r-1)) without cancellation.
    return kTwoPi * (std::sqrt(rd) + std::sqrt(rd - 1.0)) / g;
}

double decoherence_time_approx(long r, double g) {
    require_r(r, 1, "decoherence_time_approx");
    return 2.0 * kTwoPi * std::sqrt(static_cast<double>(r)) / g;
}

LongTimeStats longtime_stats(long r, double g) {
    const double tau = decoherence_time(r, g);
    const double rd = static_cast<double>(r);
    const double w = 1.0 / (2.0 * (rd + 1.0));
    return {w * w * (rd + 0.5), w * w * std::sqrt(rd * rd + 0.125), tau};
}

SampleStats random_phase_mc(long r, std::int64_t n_samples, std::uint64_t seed) {
    require_r(r, 0, "random_phase_mc");
    require_samples(n_samples, "random_phase_mc");
    const PhiloxStream stream(seed);
    const double weight = 1.0 / (2.0 * static_cast<double>(r + 1));
    const auto terms = static_cast<std::uint64_t>(r);

    return blocked_stats(n_samples, [&](std::uint64_t i) {
        // Slots 0..r-1: phasor phases; r: phase of the top term; r+1: its cosine argument.
        cplx z = std::cos(kTwoPi * stream.uniform(i, terms + 1)) *
                 std::polar(1.0, kTwoPi * stream.uniform(i, terms));
        for (std::uint64_t k = 0; k < terms; ++k) z += std::polar(1.0, kTwoPi * stream.uniform(i, k));
        return std::norm(weight * z);
    });
}

cplx thermal_coherence_series(const ThermalSpec& spec, const ModelParams& params, double t) {
    spec.validate();
    if (!(t >= 0.0)) throw InputError("thermal_coherence_series: t must be >= 0");
    const Truncation trunc = thermal_truncation(spec.temperature, params, spec.eps_tail);
    const double q = thermal_ratio(spec.temperature, params);

    double sum = 0.0;
    double qn = 1.0;
    for (std::size_t n = 0; n <= trunc.n_max; ++n) {
        const double nd = static_cast<double>(n);
        sum += (1.0 - q) * qn * std::cos(params.g * std::sqrt(nd + 1.0) * t) *
               std::cos(params.g * std::sqrt(nd) * t);
        qn *= q;
    }
    return spec.atom.c_e * std::conj(spec.atom.c_g) * sum;
}

TimeWindow longtime_window(long r, double g, double lo_factor, double hi_factor) {
    const double tau = decoherence_time(r, g);
    if (!(lo_factor >= 0.0 && hi_factor > lo_factor)) {
        throw InputError("longtime_window: need 0 <= lo_factor < hi_factor");
    }
    return {lo_factor * tau, hi_factor * tau};
}

SampleStats time_average_stats(const JointPureState& initial, const ModelParams& params,
                               TimeWindow window, std::int64_t n_samples, std::uint64_t seed) {
    params.validate();
    require_samples(n_samples, "time_average_stats");
    if (!(window.t_lo >= 0.0 && window.t_hi > window.t_lo)) {
        throw InputError("time_average_stats: window must satisfy 0 <= t_lo < t_hi");
    }
    initial.require_normalized("time_average_stats");
    const PhiloxStream stream(seed);
    const double span = window.t_hi - window.t_lo;

    return blocked_stats(n_samples, [&](std::uint64_t i) {
        const double t = window.t_lo + span * stream.uniform(i, 0);
        return std::norm(reduce_atom(evolve_exact(initial, params, t)).rho_eg);
    });
}

}  // namespace jcdeco
