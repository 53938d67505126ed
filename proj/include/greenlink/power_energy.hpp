#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "greenlink/outage.hpp"

namespace greenlink {

// ---------------------------------------------------------------------------
// Lambert W: real solutions of w * e^w = x.
// Branch 0 covers [-1/e, inf); branch -1 covers [-1/e, 0).
// Halley iteration from a branch-appropriate start, bisection as a safety net.
// ---------------------------------------------------------------------------

namespace detail {

inline double lambert_halley(double w, double x) {
    for (int i = 0; i < 80; ++i) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        if (std::abs(f) <= 1e-14 * std::max(std::abs(x), 1e-290)) return w;
        const double wp1 = w + 1.0;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if (denom == 0.0 || !std::isfinite(denom)) break;
        const double step = f / denom;
        if (!std::isfinite(step)) break;
        w -= step;
        if (std::abs(step) <= 1e-16 * std::abs(w)) {
            const double r = w * std::exp(w) - x;
            if (std::abs(r) <= 1e-13 * std::max(std::abs(x), 1e-290)) return w;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// Monotone bisection fallback; f(w) = w e^w - x is increasing on (-1, inf)
// and decreasing on (-inf, -1).
inline double lambert_bisect(int branch, double x) {
    double lo, hi;
    if (branch == 0) {
        lo = -1.0;
        hi = 1.0;
        while (hi * std::exp(hi) < x) hi *= 2.0;
    } else {
        lo = -745.0;  // w e^w underflows below this
        hi = -1.0;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f = mid * std::exp(mid) - x;
        const bool go_right = (branch == 0) ? (f < 0.0) : (f > 0.0);
        (go_right ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

inline double lambert_w(int branch, double x) {
    detail::require(branch == 0 || branch == -1, "lambert_w branch must be 0 or -1");
    const double inv_e = std::exp(-1.0);
    if (branch == 0) {
        if (!(x >= -inv_e)) throw std::domain_error("lambert_w branch 0 requires x >= -1/e");
        if (x == 0.0) return 0.0;
    } else {
        if (!(x >= -inv_e && x < 0.0))
            throw std::domain_error("lambert_w branch -1 requires -1/e <= x < 0");
    }

    const double q = 1.0 + std::numbers::e * x;  // 0 at the branch point
    if (q <= 4.0 * std::numeric_limits<double>::epsilon()) return -1.0;

    double w0;
    if (branch == 0) {
        if (x > 3.0) {
            const double l = std::log(x);
            w0 = l - std::log(l);
        } else if (x >= -0.3) {
            w0 = x / (1.0 + x);  // rough; Halley contracts fast near 0
        } else {
            const double p = std::sqrt(2.0 * q);
            w0 = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
        }
    } else {
        if (x > -0.27) {
            const double l1 = std::log(-x);
            const double l2 = std::log(-l1);
            w0 = l1 - l2 + l2 / l1;
        } else {
            const double p = std::sqrt(2.0 * q);
            w0 = -1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p * p * p;
        }
    }

    double w = detail::lambert_halley(w0, x);
    if (!std::isfinite(w)) w = detail::lambert_halley(detail::lambert_bisect(branch, x), x);
    if (!std::isfinite(w)) w = detail::lambert_bisect(branch, x);
    return w;
}

// ---------------------------------------------------------------------------
// Power inversions: smallest transmit power meeting an outage target.
// ---------------------------------------------------------------------------

/// thr / mean_snr(1 W): multiply by 1/power to get the outage exponent.
inline double cellular_power_coefficient(const Scenario& sc, Scheme scheme, int user) {
    return cellular_threshold(sc, scheme, user).value / cellular_mean_snr(sc, user, 1.0);
}

inline double exchange_power_coefficient(const Scenario& sc, Scheme scheme, int origin_user) {
    return exchange_threshold(sc, scheme, origin_user).value /
           exchange_mean_snr(sc, scheme, origin_user, 1.0);
}

/// Inverts 1 - exp(-coeff/p) = target for a single Rayleigh link.
inline double solve_power_single_link(double target_outage, double threshold_coefficient) {
    detail::require_open_probability(target_outage, "target_outage");
    detail::require_nonnegative(threshold_coefficient, "threshold_coefficient");
    detail::require_finite(threshold_coefficient, "threshold_coefficient");
    if (threshold_coefficient == 0.0) return 0.0;  // zero rate costs nothing
    return -threshold_coefficient / std::log1p(-target_outage);
}

/// Normalized threshold-to-mean ratio T of the combined uplink branch such
/// that the decoding-state mixture hits `target_outage` when both users'
/// branch means equal thr/T. Solved in closed form through the -1 branch of
/// Lambert W; the argument always lies in (-1/e, 0) for targets in (0, 1).
inline double cooperative_threshold_ratio(double target_outage) {
    detail::require_open_probability(target_outage, "target_outage");
    const double s = 1.0 - target_outage;
    const double a = s * s;  // probability both exchange directions decode
    const double arg = -std::exp(-1.0 / a) / s;
    const double w = lambert_w(-1, arg);
    const double t = -1.0 / a - w;
    detail::require(t > 0.0 && std::isfinite(t), "cooperative threshold ratio not positive");
    return t;
}

inline PowerAllocation solve_no_cooperation(const Scenario& sc) {
    PowerAllocation a;
    a.p1_cellular_w = solve_power_single_link(
        sc.qos.target_outage_1, cellular_power_coefficient(sc, Scheme::no_cooperation, 1));
    a.p2_cellular_w = solve_power_single_link(
        sc.qos.target_outage_2, cellular_power_coefficient(sc, Scheme::no_cooperation, 2));
    return a;
}

/// Exchange-phase powers for either cooperative scheme, one per direction.
inline void solve_exchange_powers(const Scenario& sc, Scheme scheme, PowerAllocation& a) {
    a.p1_exchange_w = solve_power_single_link(sc.qos.exchange_outage_12,
                                              exchange_power_coefficient(sc, scheme, 1));
    a.p2_exchange_w = solve_power_single_link(sc.qos.exchange_outage_21,
                                              exchange_power_coefficient(sc, scheme, 2));
}

/// Full allocation for a cooperative scheme under a uniform QoS: exchange
/// links each meet the target alone; the uplink powers are set so the
/// decoding-state mixture meets the same target, which fixes both users'
/// branch means to the same value (their power ratio is then exactly the
/// inverse ratio of their unit-power mean SNRs).
inline PowerAllocation solve_cooperative(const Scenario& sc, Scheme scheme) {
    detail::require(scheme != Scheme::no_cooperation, "cooperative scheme required");
    detail::require(sc.qos.is_uniform(), "uniform QoS required for the cooperative solver");
    PowerAllocation a;
    solve_exchange_powers(sc, scheme, a);
    const double t = cooperative_threshold_ratio(sc.qos.target_outage_1);
    a.p1_cellular_w = cellular_power_coefficient(sc, scheme, 1) / t;
    a.p2_cellular_w = cellular_power_coefficient(sc, scheme, 2) / t;
    return a;
}

inline PowerAllocation solve_allocation(const Scenario& sc, Scheme scheme) {
    return scheme == Scheme::no_cooperation ? solve_no_cooperation(sc)
                                            : solve_cooperative(sc, scheme);
}

// ---------------------------------------------------------------------------
// Scheme energy accounting.
// ---------------------------------------------------------------------------

/// Battery energies of one packet pair under a scheme. The uplink phase runs
/// once when the exchange failed and twice (both users relay) when it
/// succeeded, so its energy carries a multiplier of 1 + Pr[both decoded].
struct EnergyReport {
    Scheme scheme = Scheme::no_cooperation;
    PowerAllocation allocation;
    double e1_exchange_j = 0.0, e2_exchange_j = 0.0;
    double e1_cellular_j = 0.0, e2_cellular_j = 0.0;
    double cellular_multiplier = 1.0;
    double total_j = 0.0;
};

inline EnergyReport scheme_total_energy(Scheme scheme, const PowerAllocation& a,
                                        const BatteryModel& battery, double p_both_decoded) {
    detail::require_probability(p_both_decoded, "p_both_decoded");
    EnergyReport r;
    r.scheme = scheme;
    r.allocation = a;
    if (scheme != Scheme::no_cooperation) {
        r.e1_exchange_j = battery_energy(a.p1_exchange_w, battery);
        r.e2_exchange_j = battery_energy(a.p2_exchange_w, battery);
        r.cellular_multiplier = 1.0 + p_both_decoded;
    }
    r.e1_cellular_j = battery_energy(a.p1_cellular_w, battery);
    r.e2_cellular_j = battery_energy(a.p2_cellular_w, battery);
    r.total_j = r.e1_exchange_j + r.e2_exchange_j +
                r.cellular_multiplier * (r.e1_cellular_j + r.e2_cellular_j);
    return r;
}

/// Solve the scheme's powers and price them: the standard sweep step.
inline EnergyReport evaluate_scheme(const Scenario& sc, Scheme scheme) {
    const PowerAllocation a = solve_allocation(sc, scheme);
    double p_both = 0.0;
    if (scheme != Scheme::no_cooperation)
        p_both = exchange_decoding_probs(sc, scheme, a).both_decoded;
    return scheme_total_energy(scheme, a, sc.battery, p_both);
}

}  // namespace greenlink
