#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <thread>
#include <vector>

#include "greenlink/power_energy.hpp"

namespace greenlink {

// ---------------------------------------------------------------------------
// Counter-based random draws. Every variate is a pure function of
// (seed, trial, draw slot), so results are reproducible bit for bit no
// matter how trials are split across threads.
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t trial, std::uint64_t draw) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ trial);
    h = splitmix64(h ^ draw);
    return h;
}

/// Uniform on (0, 1]: 53-bit mantissa, never zero, so log() is always finite.
inline double uniform_open(std::uint64_t seed, std::uint64_t trial, std::uint64_t draw) {
    return static_cast<double>((counter_hash(seed, trial, draw) >> 11) + 1) * 0x1p-53;
}

}  // namespace detail

/// Exponential |h|^2 draw with the given mean, by inverse CDF of one counter draw.
inline double sample_fading(double variance, std::uint64_t seed, std::uint64_t trial,
                            std::uint64_t draw) {
    detail::require_positive(variance, "variance");
    return -variance * std::log(detail::uniform_open(seed, trial, draw));
}

// Draw slots within one trial; fixed so adding schemes never reshuffles streams.
inline constexpr std::uint64_t draw_exchange_12 = 0;
inline constexpr std::uint64_t draw_exchange_21 = 1;
inline constexpr std::uint64_t draw_uplink_1 = 2;
inline constexpr std::uint64_t draw_uplink_2 = 3;

struct SimConfig {
    std::uint64_t seed = 1;
    std::uint64_t trials = 100000;
    unsigned parallelism = 0;  // 0: one chunk per hardware thread

    void validate() const { detail::require(trials > 0, "trials must be positive"); }
};

// ---------------------------------------------------------------------------
// Precomputed per-trial model: channel means, decode thresholds, and the
// uniform-domain cutoffs that let single-link checks skip the log() call.
// An exponential draw -m*ln(u) falls below t exactly when u > exp(-t/m).
// ---------------------------------------------------------------------------

struct TrialModel {
    Scheme scheme = Scheme::no_cooperation;
    bool cooperative = false;
    // Exchange decode-failure cutoffs (cooperative only).
    double survive_12 = 1.0, survive_21 = 1.0;
    // Uplink branch mean SNRs at the allocated powers.
    double mean_1b = 0.0, mean_2b = 0.0;
    // Per-user uplink thresholds and single-branch survival cutoffs.
    double threshold_1 = 0.0, threshold_2 = 0.0;
    double survive_single_1 = 1.0, survive_single_2 = 1.0;
};

inline TrialModel build_trial_model(const Scenario& sc, Scheme scheme,
                                    const PowerAllocation& a) {
    TrialModel m;
    m.scheme = scheme;
    m.cooperative = scheme != Scheme::no_cooperation;
    m.mean_1b = cellular_mean_snr(sc, 1, a.p1_cellular_w);
    m.mean_2b = cellular_mean_snr(sc, 2, a.p2_cellular_w);
    m.threshold_1 = cellular_threshold(sc, scheme, 1).value;
    m.threshold_2 = cellular_threshold(sc, scheme, 2).value;
    m.survive_single_1 = std::exp(-m.threshold_1 / m.mean_1b);
    m.survive_single_2 = std::exp(-m.threshold_2 / m.mean_2b);
    if (m.cooperative) {
        m.survive_12 = std::exp(-exchange_threshold(sc, scheme, 1).value /
                                exchange_mean_snr(sc, scheme, 1, a.p1_exchange_w));
        m.survive_21 = std::exp(-exchange_threshold(sc, scheme, 2).value /
                                exchange_mean_snr(sc, scheme, 2, a.p2_exchange_w));
    }
    return m;
}

namespace detail {

struct Tally {
    std::uint64_t outage_1 = 0;
    std::uint64_t outage_2 = 0;
    std::uint64_t both_decoded = 0;
};

inline Tally run_trials(const TrialModel& m, std::uint64_t seed, std::uint64_t first,
                        std::uint64_t count) {
    Tally t;
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t trial = first + i;
        const double u1 = uniform_open(seed, trial, draw_uplink_1);
        const double u2 = uniform_open(seed, trial, draw_uplink_2);
        bool both = false;
        if (m.cooperative) {
            both = uniform_open(seed, trial, draw_exchange_12) <= m.survive_12 &&
                   uniform_open(seed, trial, draw_exchange_21) <= m.survive_21;
        }
        if (both) {
            ++t.both_decoded;
            // Space-time coded pair: both packets ride the summed branch SNR.
            const double snr_sum = -m.mean_1b * std::log(u1) - m.mean_2b * std::log(u2);
            t.outage_1 += snr_sum < m.threshold_1;
            t.outage_2 += snr_sum < m.threshold_2;
        } else {
            t.outage_1 += u1 > m.survive_single_1;
            t.outage_2 += u2 > m.survive_single_2;
        }
    }
    return t;
}

}  // namespace detail

struct OutageEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;
    std::uint64_t outage_count = 0;
    bool resolution_warning = false;  // fewer than 100 events observed
};

struct SimResult {
    Scheme scheme = Scheme::no_cooperation;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    OutageEstimate user1, user2;
    double both_decoded_frequency = 0.0;
};

namespace detail {

inline OutageEstimate make_estimate(std::uint64_t events, std::uint64_t trials) {
    OutageEstimate e;
    e.outage_count = events;
    const double n = static_cast<double>(trials);
    e.p_hat = static_cast<double>(events) / n;
    e.std_error = std::sqrt(std::max(e.p_hat * (1.0 - e.p_hat), 0.0) / n);
    e.resolution_warning = events < 100;
    return e;
}

}  // namespace detail

/// Runs `cfg.trials` independent packet-pair trials of the scheme at a fixed
/// power allocation. Chunks are summed in index order with integer tallies,
/// so the result is identical for every parallelism setting.
inline SimResult estimate_outage(const Scenario& sc, Scheme scheme, const PowerAllocation& a,
                                 const SimConfig& cfg) {
    cfg.validate();
    const TrialModel model = build_trial_model(sc, scheme, a);

    unsigned workers = cfg.parallelism;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t chunks = std::min<std::uint64_t>(workers, cfg.trials);

    std::vector<std::future<detail::Tally>> pending;
    pending.reserve(static_cast<std::size_t>(chunks));
    const std::uint64_t base = cfg.trials / chunks;
    const std::uint64_t rem = cfg.trials % chunks;
    std::uint64_t first = 0;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        const std::uint64_t count = base + (c < rem ? 1 : 0);
        pending.push_back(std::async(std::launch::async, detail::run_trials, model, cfg.seed,
                                     first, count));
        first += count;
    }

    detail::Tally total;
    for (auto& f : pending) {
        const detail::Tally t = f.get();
        total.outage_1 += t.outage_1;
        total.outage_2 += t.outage_2;
        total.both_decoded += t.both_decoded;
    }

    SimResult r;
    r.scheme = scheme;
    r.trials = cfg.trials;
    r.seed = cfg.seed;
    r.user1 = detail::make_estimate(total.outage_1, cfg.trials);
    r.user2 = detail::make_estimate(total.outage_2, cfg.trials);
    r.both_decoded_frequency = static_cast<double>(total.both_decoded) /
                               static_cast<double>(cfg.trials);
    return r;
}

/// Solve the scheme's minimal powers, then validate them by simulation.
inline SimResult simulate_scheme(const Scenario& sc, Scheme scheme, const SimConfig& cfg) {
    return estimate_outage(sc, scheme, solve_allocation(sc, scheme), cfg);
}

}  // namespace greenlink
