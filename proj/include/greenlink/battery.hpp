#pragma once

#include <string>

#include "greenlink/units.hpp"

namespace greenlink {

/// Battery drain model for one packet transmission at constant RF power:
/// a quadratic loss from the cell's internal resistance, a linear amplifier
/// term and a constant circuit-power term.
struct BatteryModel {
    double epsilon = 0.0;          // internal loss ratio
    double xi_per_s = 0.0;         // transmit pulse-shape factor
    double omega = 0.0;            // internal-resistance scale
    double voltage_v = 0.0;
    double eta = 1.0;              // power-amplifier efficiency, (0, 1]
    double circuit_power_w = 0.0;
    double pulse_s = 0.0;          // transmit duration per packet

    void validate() const {
        detail::require(epsilon >= 0.0, "battery_epsilon must be non-negative");
        detail::require(xi_per_s >= 0.0, "battery_xi_per_s must be non-negative");
        detail::require(omega >= 0.0, "battery_omega must be non-negative");
        detail::require(voltage_v > 0.0, "battery_voltage_v must be positive");
        detail::require(eta > 0.0 && eta <= 1.0, "battery_eta must lie in (0, 1]");
        detail::require(circuit_power_w >= 0.0, "battery_circuit_power_w must be non-negative");
        detail::require(pulse_s > 0.0, "battery_pulse_s must be positive");
    }
};

/// Energy drained from the battery by one packet sent at `power_w`.
inline double battery_energy(double power_w, const BatteryModel& b) {
    if (!(power_w >= 0.0)) throw std::domain_error("power_w must be non-negative");
    const double charge = power_w * b.pulse_s;
    const double loss = 1.0 + b.epsilon;
    return loss * loss * b.xi_per_s * b.omega / (b.voltage_v * b.eta * b.eta) * charge * charge +
           loss / b.eta * charge +
           b.circuit_power_w * b.pulse_s / b.eta;
}

/// Named battery profiles; "default" uses representative handset constants,
/// "linear" removes the quadratic internal-resistance term.
inline BatteryModel battery_profile(const std::string& name) {
    BatteryModel b;
    b.epsilon = 0.33;
    b.pulse_s = 1e-7;
    b.xi_per_s = 2.0 / (3.0 * b.pulse_s);
    b.omega = 1e-5;
    b.voltage_v = 3.7;
    b.eta = 0.9;
    b.circuit_power_w = 0.1;
    if (name == "default") return b;
    if (name == "linear") {
        b.omega = 0.0;
        return b;
    }
    throw std::invalid_argument("unknown battery profile: " + name);
}

}  // namespace greenlink
