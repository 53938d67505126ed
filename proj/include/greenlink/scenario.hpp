#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "greenlink/battery.hpp"
#include "greenlink/radio.hpp"

namespace greenlink {

enum class Scheme { no_cooperation, inter_network, intra_network };

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::no_cooperation: return "no-cooperation";
        case Scheme::inter_network: return "inter-network";
        case Scheme::intra_network: return "intra-network";
    }
    return "?";
}

inline Scheme scheme_from_name(const std::string& name) {
    if (name == "no-cooperation") return Scheme::no_cooperation;
    if (name == "inter-network") return Scheme::inter_network;
    if (name == "intra-network") return Scheme::intra_network;
    throw std::invalid_argument("unknown scheme: " + name);
}

/// Outage targets and payload rates, per user, plus the targets for the
/// two exchange directions between the users.
struct QosSpec {
    double target_outage_1 = 0.0, target_outage_2 = 0.0;
    double rate_1_bps = 0.0, rate_2_bps = 0.0;
    double exchange_outage_12 = 0.0, exchange_outage_21 = 0.0;

    bool is_uniform() const {
        return target_outage_1 == target_outage_2 && rate_1_bps == rate_2_bps &&
               exchange_outage_12 == target_outage_1 && exchange_outage_21 == target_outage_1;
    }

    static QosSpec uniform(double target_outage, double rate_bps) {
        QosSpec q;
        q.target_outage_1 = q.target_outage_2 = target_outage;
        q.rate_1_bps = q.rate_2_bps = rate_bps;
        q.exchange_outage_12 = q.exchange_outage_21 = target_outage;
        return q;
    }

    double rate_bps(int user) const { return user == 1 ? rate_1_bps : rate_2_bps; }
    double target_outage(int user) const { return user == 1 ? target_outage_1 : target_outage_2; }

    void validate() const {
        detail::require(target_outage_1 > 0.0 && target_outage_1 < 1.0,
                        "target_outage_1 must lie in (0, 1)");
        detail::require(target_outage_2 > 0.0 && target_outage_2 < 1.0,
                        "target_outage_2 must lie in (0, 1)");
        detail::require(rate_1_bps > 0.0, "effective_rate_1_bps must be positive");
        detail::require(rate_2_bps > 0.0, "effective_rate_2_bps must be positive");
        detail::require(exchange_outage_12 > 0.0 && exchange_outage_12 < 1.0,
                        "exchange_outage_12 must lie in (0, 1)");
        detail::require(exchange_outage_21 > 0.0 && exchange_outage_21 < 1.0,
                        "exchange_outage_21 must lie in (0, 1)");
    }
};

/// Transmit powers of one scheme: the exchange phase between the users
/// (idle for no-cooperation) and the uplink phase towards the base station.
struct PowerAllocation {
    double p1_exchange_w = 0.0, p2_exchange_w = 0.0;
    double p1_cellular_w = 0.0, p2_cellular_w = 0.0;
};

/// Everything a run needs: both radios, packet, geometry, noise, QoS and battery.
struct Scenario {
    RadioInterface shortrange;
    RadioInterface cellular;
    PacketSpec packet;
    Topology topology;
    NoiseModel noise;
    QosSpec qos;
    BatteryModel battery;
    std::string battery_profile_label = "default";

    double kappa_shortrange() const { return effective_data_ratio(packet, shortrange); }
    double kappa_cellular() const { return effective_data_ratio(packet, cellular); }

    void validate() const {
        shortrange.validate("shortrange");
        cellular.validate("cellular");
        detail::require(packet.effective_bits > 0.0, "effective_bits must be positive");
        topology.validate();
        noise.validate();
        qos.validate();
        battery.validate();
    }
};

/// Shipped defaults: BLE-like short-range radio next to an LTE-like cellular
/// uplink, thermal noise floor, normalized fading and the default battery.
inline Scenario default_scenario() {
    Scenario sc;
    sc.shortrange.carrier_frequency_hz = 2.4e9;
    sc.shortrange.bandwidth_hz = 2e6;
    sc.shortrange.capacity_gap = db_to_linear(4.0);
    sc.shortrange.overhead_bits = 126.0;
    sc.cellular.carrier_frequency_hz = 2.1e9;
    sc.cellular.bandwidth_hz = 5e6;
    sc.cellular.capacity_gap = db_to_linear(2.0);
    sc.cellular.overhead_bits = 376.0;
    sc.packet.effective_bits = 2000.0;
    sc.topology.d_1b_m = 1000.0;
    sc.topology.d_2b_m = 1000.0;
    sc.topology.d_12_m = 20.0;
    sc.topology.d_21_m = 20.0;
    sc.topology.sigma2_1b = sc.topology.sigma2_2b = 1.0;
    sc.topology.sigma2_12 = sc.topology.sigma2_21 = 1.0;
    sc.topology.g_u1 = sc.topology.g_u2 = 1.0;
    sc.topology.g_bs = db_to_linear(5.0);
    sc.noise.n0_w_per_hz = dbm_to_watt(-174.0);  // thermal floor per Hz
    sc.qos = QosSpec::uniform(1e-4, 1e7);
    sc.battery = battery_profile("default");
    sc.battery_profile_label = "default";
    return sc;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
        if (used != text.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': cannot parse number '" + text + "'");
    }
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace detail

/// Parses the plain-text `key = value` scenario format. Lines starting with `#`
/// (or anything after a `#`) are comments. Keys with a `_db` / `_dbm_per_hz`
/// suffix are converted to linear units. Later keys override earlier ones.
/// `profile_override` (e.g. from GREENLINK_BATTERY_PROFILE) replaces the
/// config's battery_profile selection; explicit battery_* keys still apply.
inline Scenario parse_scenario(std::istream& in,
                               const std::optional<std::string>& profile_override = {}) {
    Scenario sc = default_scenario();

    // battery_* field keys are deferred so they land on top of the chosen profile
    std::vector<std::pair<std::string, double>> battery_overrides;
    std::string profile = sc.battery_profile_label;
    bool profile_fixed = profile_override.has_value();
    if (profile_fixed) profile = *profile_override;

    using Setter = std::function<void(Scenario&, double)>;
    static const std::map<std::string, Setter> setters = {
        {"shortrange_frequency_hz", [](Scenario& s, double v) { s.shortrange.carrier_frequency_hz = v; }},
        {"shortrange_bandwidth_hz", [](Scenario& s, double v) { s.shortrange.bandwidth_hz = v; }},
        {"shortrange_capacity_gap", [](Scenario& s, double v) { s.shortrange.capacity_gap = v; }},
        {"shortrange_capacity_gap_db", [](Scenario& s, double v) { s.shortrange.capacity_gap = db_to_linear(v); }},
        {"shortrange_overhead_bits", [](Scenario& s, double v) { s.shortrange.overhead_bits = v; }},
        {"cellular_frequency_hz", [](Scenario& s, double v) { s.cellular.carrier_frequency_hz = v; }},
        {"cellular_bandwidth_hz", [](Scenario& s, double v) { s.cellular.bandwidth_hz = v; }},
        {"cellular_capacity_gap", [](Scenario& s, double v) { s.cellular.capacity_gap = v; }},
        {"cellular_capacity_gap_db", [](Scenario& s, double v) { s.cellular.capacity_gap = db_to_linear(v); }},
        {"cellular_overhead_bits", [](Scenario& s, double v) { s.cellular.overhead_bits = v; }},
        {"effective_bits", [](Scenario& s, double v) { s.packet.effective_bits = v; }},
        {"d_1b_m", [](Scenario& s, double v) { s.topology.d_1b_m = v; }},
        {"d_2b_m", [](Scenario& s, double v) { s.topology.d_2b_m = v; }},
        {"d_12_m", [](Scenario& s, double v) { s.topology.d_12_m = v; }},
        {"d_21_m", [](Scenario& s, double v) { s.topology.d_21_m = v; }},
        {"sigma2_1b", [](Scenario& s, double v) { s.topology.sigma2_1b = v; }},
        {"sigma2_2b", [](Scenario& s, double v) { s.topology.sigma2_2b = v; }},
        {"sigma2_12", [](Scenario& s, double v) { s.topology.sigma2_12 = v; }},
        {"sigma2_21", [](Scenario& s, double v) { s.topology.sigma2_21 = v; }},
        {"g_u1", [](Scenario& s, double v) { s.topology.g_u1 = v; }},
        {"g_u1_db", [](Scenario& s, double v) { s.topology.g_u1 = db_to_linear(v); }},
        {"g_u2", [](Scenario& s, double v) { s.topology.g_u2 = v; }},
        {"g_u2_db", [](Scenario& s, double v) { s.topology.g_u2 = db_to_linear(v); }},
        {"g_bs", [](Scenario& s, double v) { s.topology.g_bs = v; }},
        {"g_bs_db", [](Scenario& s, double v) { s.topology.g_bs = db_to_linear(v); }},
        {"n0_w_per_hz", [](Scenario& s, double v) { s.noise.n0_w_per_hz = v; }},
        {"n0_dbm_per_hz", [](Scenario& s, double v) { s.noise.n0_w_per_hz = dbm_to_watt(v); }},
        {"target_outage",
         [](Scenario& s, double v) {
             s.qos.target_outage_1 = s.qos.target_outage_2 = v;
             s.qos.exchange_outage_12 = s.qos.exchange_outage_21 = v;
         }},
        {"target_outage_1", [](Scenario& s, double v) { s.qos.target_outage_1 = v; }},
        {"target_outage_2", [](Scenario& s, double v) { s.qos.target_outage_2 = v; }},
        {"effective_rate_bps", [](Scenario& s, double v) { s.qos.rate_1_bps = s.qos.rate_2_bps = v; }},
        {"effective_rate_1_bps", [](Scenario& s, double v) { s.qos.rate_1_bps = v; }},
        {"effective_rate_2_bps", [](Scenario& s, double v) { s.qos.rate_2_bps = v; }},
        {"exchange_outage_12", [](Scenario& s, double v) { s.qos.exchange_outage_12 = v; }},
        {"exchange_outage_21", [](Scenario& s, double v) { s.qos.exchange_outage_21 = v; }},
    };
    static const std::map<std::string, double BatteryModel::*> battery_fields = {
        {"battery_epsilon", &BatteryModel::epsilon},
        {"battery_xi_per_s", &BatteryModel::xi_per_s},
        {"battery_omega", &BatteryModel::omega},
        {"battery_voltage_v", &BatteryModel::voltage_v},
        {"battery_eta", &BatteryModel::eta},
        {"battery_circuit_power_w", &BatteryModel::circuit_power_w},
        {"battery_pulse_s", &BatteryModel::pulse_s},
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));
        if (key == "battery_profile") {
            if (!profile_fixed) profile = value;
            continue;
        }
        if (const auto bf = battery_fields.find(key); bf != battery_fields.end()) {
            battery_overrides.emplace_back(key, detail::parse_double(key, value));
            continue;
        }
        const auto it = setters.find(key);
        if (it == setters.end())
            throw std::invalid_argument("unknown config key '" + key + "' (line " +
                                        std::to_string(lineno) + ")");
        it->second(sc, detail::parse_double(key, value));
    }

    sc.battery = battery_profile(profile);
    sc.battery_profile_label = profile;
    for (const auto& [key, v] : battery_overrides) sc.battery.*battery_fields.at(key) = v;

    sc.validate();
    return sc;
}

inline Scenario parse_scenario_text(const std::string& text,
                                    const std::optional<std::string>& profile_override = {}) {
    std::istringstream in(text);
    return parse_scenario(in, profile_override);
}

/// Canonical serialization: fixed key order, full precision. Feeding it back
/// through parse_scenario reproduces the scenario bit for bit.
inline std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream out;
    auto kv = [&out](const char* key, double v) {
        out << key << " = " << detail::format_double(v) << "\n";
    };
    out << "# two-user uplink scenario\n";
    kv("shortrange_frequency_hz", sc.shortrange.carrier_frequency_hz);
    kv("shortrange_bandwidth_hz", sc.shortrange.bandwidth_hz);
    kv("shortrange_capacity_gap", sc.shortrange.capacity_gap);
    kv("shortrange_overhead_bits", sc.shortrange.overhead_bits);
    kv("cellular_frequency_hz", sc.cellular.carrier_frequency_hz);
    kv("cellular_bandwidth_hz", sc.cellular.bandwidth_hz);
    kv("cellular_capacity_gap", sc.cellular.capacity_gap);
    kv("cellular_overhead_bits", sc.cellular.overhead_bits);
    kv("effective_bits", sc.packet.effective_bits);
    kv("d_1b_m", sc.topology.d_1b_m);
    kv("d_2b_m", sc.topology.d_2b_m);
    kv("d_12_m", sc.topology.d_12_m);
    kv("d_21_m", sc.topology.d_21_m);
    kv("sigma2_1b", sc.topology.sigma2_1b);
    kv("sigma2_2b", sc.topology.sigma2_2b);
    kv("sigma2_12", sc.topology.sigma2_12);
    kv("sigma2_21", sc.topology.sigma2_21);
    kv("g_u1", sc.topology.g_u1);
    kv("g_u2", sc.topology.g_u2);
    kv("g_bs", sc.topology.g_bs);
    kv("n0_w_per_hz", sc.noise.n0_w_per_hz);
    kv("target_outage_1", sc.qos.target_outage_1);
    kv("target_outage_2", sc.qos.target_outage_2);
    kv("effective_rate_1_bps", sc.qos.rate_1_bps);
    kv("effective_rate_2_bps", sc.qos.rate_2_bps);
    kv("exchange_outage_12", sc.qos.exchange_outage_12);
    kv("exchange_outage_21", sc.qos.exchange_outage_21);
    out << "battery_profile = " << sc.battery_profile_label << "\n";
    kv("battery_epsilon", sc.battery.epsilon);
    kv("battery_xi_per_s", sc.battery.xi_per_s);
    kv("battery_omega", sc.battery.omega);
    kv("battery_voltage_v", sc.battery.voltage_v);
    kv("battery_eta", sc.battery.eta);
    kv("battery_circuit_power_w", sc.battery.circuit_power_w);
    kv("battery_pulse_s", sc.battery.pulse_s);
    return out.str();
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Hash of the canonical serialization; stamped into every CSV header.
inline std::string config_hash_hex(const Scenario& sc) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(serialize_scenario(sc))));
    return buf;
}

}  // namespace greenlink
