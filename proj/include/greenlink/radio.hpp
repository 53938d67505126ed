#pragma once

#include "greenlink/units.hpp"

namespace greenlink {

/// One physical-layer radio: carrier, bandwidth, gap to Shannon capacity and the
/// protocol overhead its frames attach to every packet.
struct RadioInterface {
    double carrier_frequency_hz = 0.0;
    double bandwidth_hz = 0.0;
    double capacity_gap = 1.0;   // linear SNR penalty vs. ideal capacity, >= 1
    double overhead_bits = 0.0;  // per-packet header/coding overhead

    double wavelength_m() const { return speed_of_light_m_s / carrier_frequency_hz; }

    void validate(const char* label) const {
        const std::string p(label);
        detail::require(carrier_frequency_hz > 0.0, p + "_frequency_hz must be positive");
        detail::require(bandwidth_hz > 0.0, p + "_bandwidth_hz must be positive");
        detail::require(capacity_gap >= 1.0, p + "_capacity_gap must be >= 1 (>= 0 dB)");
        detail::require(overhead_bits >= 0.0, p + "_overhead_bits must be non-negative");
    }
};

/// Payload size carried per packet, excluding any interface overhead.
struct PacketSpec {
    double effective_bits = 0.0;
};

/// Two-user cell geometry: distances to the base station, the inter-user links,
/// Rayleigh mean-square fading per link and antenna gains (all linear).
struct Topology {
    double d_1b_m = 0.0, d_2b_m = 0.0;  // user -> base station
    double d_12_m = 0.0, d_21_m = 0.0;  // user -> user, per direction
    double sigma2_1b = 1.0, sigma2_2b = 1.0;
    double sigma2_12 = 1.0, sigma2_21 = 1.0;
    double g_u1 = 1.0, g_u2 = 1.0, g_bs = 1.0;

    void validate() const {
        detail::require(d_1b_m > 0.0, "d_1b_m must be positive");
        detail::require(d_2b_m > 0.0, "d_2b_m must be positive");
        detail::require(d_12_m > 0.0, "d_12_m must be positive");
        detail::require(d_21_m > 0.0, "d_21_m must be positive");
        detail::require(sigma2_1b > 0.0, "sigma2_1b must be positive");
        detail::require(sigma2_2b > 0.0, "sigma2_2b must be positive");
        detail::require(sigma2_12 > 0.0, "sigma2_12 must be positive");
        detail::require(sigma2_21 > 0.0, "sigma2_21 must be positive");
        detail::require(g_u1 > 0.0, "g_u1 must be positive");
        detail::require(g_u2 > 0.0, "g_u2 must be positive");
        detail::require(g_bs > 0.0, "g_bs must be positive");
    }
};

/// Receiver-side noise floor, flat over bandwidth.
struct NoiseModel {
    double n0_w_per_hz = 0.0;

    void validate() const { detail::require(n0_w_per_hz > 0.0, "n0_w_per_hz must be positive"); }
};

/// Fraction of each transmitted packet that is payload.
inline double effective_data_ratio(const PacketSpec& packet, const RadioInterface& iface) {
    detail::require_positive(packet.effective_bits, "effective_bits");
    detail::require_nonnegative(iface.overhead_bits, "overhead_bits");
    return packet.effective_bits / (packet.effective_bits + iface.overhead_bits);
}

/// Physical-layer rate needed to deliver `effective_rate_bps` of payload after overhead.
inline double phy_rate(double effective_rate_bps, double kappa) {
    detail::require_nonnegative(effective_rate_bps, "effective_rate_bps");
    if (!(kappa > 0.0)) throw std::domain_error("effective data ratio must be positive");
    return effective_rate_bps / kappa;
}

/// Free-space power gain (lambda / 4*pi*d)^2 * g_tx * g_rx.
inline double free_space_gain(const RadioInterface& iface, double distance_m,
                              double g_tx, double g_rx) {
    if (!(distance_m > 0.0)) throw std::domain_error("distance must be positive");
    detail::require_positive(g_tx, "g_tx");
    detail::require_positive(g_rx, "g_rx");
    const double ratio = iface.wavelength_m() / (4.0 * pi * distance_m);
    return ratio * ratio * g_tx * g_rx;
}

/// Average received SNR of a Rayleigh-faded link at the given transmit power.
inline double mean_snr(double power_w, const RadioInterface& iface, double distance_m,
                       double g_tx, double g_rx, double sigma2, const NoiseModel& noise) {
    detail::require_nonnegative(power_w, "power_w");
    detail::require_positive(sigma2, "sigma2");
    return power_w * free_space_gain(iface, distance_m, g_tx, g_rx) * sigma2 /
           (noise.n0_w_per_hz * iface.bandwidth_hz);
}

}  // namespace greenlink
