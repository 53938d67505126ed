#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "greenlink/scenario.hpp"

namespace greenlink {

/// Minimum instantaneous SNR that sustains a payload rate over an interface,
/// including the interface's capacity gap: (2^(R / (B * kappa)) - 1) * gap.
struct SnrThreshold {
    double value = 0.0;
};

inline SnrThreshold snr_threshold(double effective_rate_bps, const RadioInterface& iface,
                                  double kappa) {
    const double spectral = phy_rate(effective_rate_bps, kappa) / iface.bandwidth_hz;
    return {std::expm1(spectral * std::numbers::ln2) * iface.capacity_gap};
}

/// Outage of a single Rayleigh link: Pr[SNR < threshold] = 1 - exp(-t/mean).
inline double outage_single_link(double mean_snr_value, SnrThreshold thr) {
    detail::require_nonnegative(thr.value, "threshold");
    if (thr.value == 0.0) return 0.0;
    if (!(mean_snr_value >= 0.0)) throw std::domain_error("mean SNR must be non-negative");
    if (mean_snr_value == 0.0) return 1.0;  // no received power, certain outage
    const double x = thr.value / mean_snr_value;
    if (x > 700.0) return 1.0;  // exp underflow; outage is 1 to machine precision
    return -std::expm1(-x);
}

/// CDF at `thr` of the sum of two independent exponential SNRs (the combined
/// branch seen when both users' packets ride a distributed space-time code).
/// Means within 1e-9 relative share the confluent (equal-mean) form.
inline double outage_sum_two_exponentials(double mean1, double mean2, SnrThreshold thr) {
    detail::require_positive(mean1, "mean1");
    detail::require_positive(mean2, "mean2");
    detail::require_nonnegative(thr.value, "threshold");
    if (thr.value == 0.0) return 0.0;
    if (std::abs(mean1 - mean2) <= 1e-9 * std::max(mean1, mean2)) {
        const double x = thr.value / (0.5 * (mean1 + mean2));
        if (x > 700.0) return 1.0;
        if (x < 1e-4)  // series for 1-(1+x)e^-x, avoids cancellation
            return x * x * (0.5 - x * (1.0 / 3.0 - x * (0.125 - x / 30.0)));
        return -std::expm1(-x) - x * std::exp(-x);
    }
    const double x1 = thr.value / mean1;
    const double x2 = thr.value / mean2;
    const double e1 = x1 > 700.0 ? 0.0 : std::exp(-x1);
    const double e2 = x2 > 700.0 ? 0.0 : std::exp(-x2);
    const double p = 1.0 - (mean1 * e1 - mean2 * e2) / (mean1 - mean2);
    return std::clamp(p, 0.0, 1.0);
}

/// Probabilities of the two decoding states after the exchange phase:
/// both users decoded each other, or at least one direction failed.
struct DecodingProbs {
    double both_decoded = 0.0;
    double fallback = 0.0;
};

inline DecodingProbs decoding_state_probs(double pout_12, double pout_21) {
    detail::require_probability(pout_12, "pout_12");
    detail::require_probability(pout_21, "pout_21");
    const double joint = (1.0 - pout_12) * (1.0 - pout_21);
    return {joint, 1.0 - joint};
}

/// Mixture of the two uplink branches for one user, with the conditional
/// outage of each decoding state broken out.
struct OutageBreakdown {
    double p_both_decoded = 0.0;
    double p_fallback = 0.0;
    double outage_when_both = 0.0;      // combined two-branch uplink
    double outage_when_fallback = 0.0;  // user transmits alone
    double total = 0.0;
};

inline OutageBreakdown cooperative_outage(double own_mean, double partner_mean,
                                          SnrThreshold thr, DecodingProbs dec) {
    OutageBreakdown b;
    b.p_both_decoded = dec.both_decoded;
    b.p_fallback = dec.fallback;
    b.outage_when_both = outage_sum_two_exponentials(own_mean, partner_mean, thr);
    b.outage_when_fallback = outage_single_link(own_mean, thr);
    b.total = b.p_both_decoded * b.outage_when_both + b.p_fallback * b.outage_when_fallback;
    return b;
}

// ---------------------------------------------------------------------------
// High-SNR expansions. z is the mean SNR normalized by user 1's threshold;
// beta is the ratio of user 1's to user 2's threshold.
// ---------------------------------------------------------------------------

struct ApproxOutage {
    double value = 0.0;
    bool in_domain = false;  // whether the expansion's validity bound holds
};

/// Leading-order combined-branch outage: 1/(2 z1 z2) for user 1,
/// 1/(2 beta^2 z1 z2) for user 2. Valid while 1/z1 + 1/z2 is small.
inline ApproxOutage approx_outage_both_decoded(double z1, double z2, double beta, int user,
                                               double delta = 0.005) {
    detail::require_positive(z1, "z1");
    detail::require_positive(z2, "z2");
    detail::require_positive(beta, "beta");
    detail::require_positive(delta, "delta");
    detail::require(user == 1 || user == 2, "user must be 1 or 2");
    const double s = 1.0 / z1 + 1.0 / z2;
    const double bound = std::sqrt(2.0 * delta) * (user == 1 ? 1.0 : beta);
    ApproxOutage a;
    a.in_domain = s > 0.0 && s < bound;
    const double scale = user == 1 ? 1.0 : beta * beta;
    a.value = 1.0 / (2.0 * scale * z1 * z2);
    return a;
}

/// Next-order refinement of the combined branch, kept as a diagnostic.
inline double approx_outage_both_decoded_refined(double z1, double z2) {
    detail::require_positive(z1, "z1");
    detail::require_positive(z2, "z2");
    return (3.0 - 1.0 / z1 - 1.0 / z2) / (6.0 * z1 * z2);
}

/// Leading-order single-link outage 1/z.
inline ApproxOutage approx_outage_fallback(double z, double delta = 0.005) {
    detail::require_positive(z, "z");
    detail::require_positive(delta, "delta");
    ApproxOutage a;
    a.in_domain = 1.0 / z < std::sqrt(2.0 * delta);
    a.value = 1.0 / z;
    return a;
}

// ---------------------------------------------------------------------------
// Scheme-level evaluation at a concrete power allocation.
// ---------------------------------------------------------------------------

/// Cooperation doubles the payload rate when the exchange rides the cellular
/// band: both packets must cross the same spectrum in the same frame budget.
inline double scheme_rate_factor(Scheme s) { return s == Scheme::intra_network ? 2.0 : 1.0; }

inline const RadioInterface& exchange_interface(const Scenario& sc, Scheme s) {
    return s == Scheme::intra_network ? sc.cellular : sc.shortrange;
}

inline double cellular_mean_snr(const Scenario& sc, int user, double power_w) {
    const Topology& t = sc.topology;
    const double d = user == 1 ? t.d_1b_m : t.d_2b_m;
    const double gu = user == 1 ? t.g_u1 : t.g_u2;
    const double s2 = user == 1 ? t.sigma2_1b : t.sigma2_2b;
    return mean_snr(power_w, sc.cellular, d, gu, t.g_bs, s2, sc.noise);
}

/// Mean SNR of the exchange link leaving `origin_user`.
inline double exchange_mean_snr(const Scenario& sc, Scheme scheme, int origin_user,
                                double power_w) {
    const Topology& t = sc.topology;
    const RadioInterface& iface = exchange_interface(sc, scheme);
    const double d = origin_user == 1 ? t.d_12_m : t.d_21_m;
    const double s2 = origin_user == 1 ? t.sigma2_12 : t.sigma2_21;
    return mean_snr(power_w, iface, d, t.g_u1, t.g_u2, s2, sc.noise);
}

inline SnrThreshold cellular_threshold(const Scenario& sc, Scheme scheme, int user) {
    return snr_threshold(sc.qos.rate_bps(user) * scheme_rate_factor(scheme), sc.cellular,
                         sc.kappa_cellular());
}

inline SnrThreshold exchange_threshold(const Scenario& sc, Scheme scheme, int origin_user) {
    const RadioInterface& iface = exchange_interface(sc, scheme);
    return snr_threshold(sc.qos.rate_bps(origin_user) * scheme_rate_factor(scheme), iface,
                         effective_data_ratio(sc.packet, iface));
}

inline double outage_no_cooperation(const Scenario& sc, const PowerAllocation& a, int user) {
    const double p = user == 1 ? a.p1_cellular_w : a.p2_cellular_w;
    return outage_single_link(cellular_mean_snr(sc, user, p),
                              cellular_threshold(sc, Scheme::no_cooperation, user));
}

/// Exchange-phase outages of both directions at the allocated powers.
inline DecodingProbs exchange_decoding_probs(const Scenario& sc, Scheme scheme,
                                             const PowerAllocation& a) {
    const double p12 = outage_single_link(exchange_mean_snr(sc, scheme, 1, a.p1_exchange_w),
                                          exchange_threshold(sc, scheme, 1));
    const double p21 = outage_single_link(exchange_mean_snr(sc, scheme, 2, a.p2_exchange_w),
                                          exchange_threshold(sc, scheme, 2));
    return decoding_state_probs(p12, p21);
}

inline OutageBreakdown outage_cooperative(const Scenario& sc, Scheme scheme,
                                          const PowerAllocation& a, int user) {
    detail::require(scheme != Scheme::no_cooperation, "cooperative scheme required");
    const double own =
        cellular_mean_snr(sc, user, user == 1 ? a.p1_cellular_w : a.p2_cellular_w);
    const double partner =
        cellular_mean_snr(sc, user == 1 ? 2 : 1, user == 1 ? a.p2_cellular_w : a.p1_cellular_w);
    return cooperative_outage(own, partner, cellular_threshold(sc, scheme, user),
                              exchange_decoding_probs(sc, scheme, a));
}

/// One user's end-to-end outage under the given scheme and allocation.
inline double outage_total(const Scenario& sc, Scheme scheme, const PowerAllocation& a,
                           int user) {
    if (scheme == Scheme::no_cooperation) return outage_no_cooperation(sc, a, user);
    return outage_cooperative(sc, scheme, a, user).total;
}

}  // namespace greenlink
