#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace greenlink {

inline constexpr double speed_of_light_m_s = 2.99792458e8;
inline constexpr double pi = 3.14159265358979323846;

// Power ratios live in linear units inside the library; dB / dBm only at the edges.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// P[dBm] = 10*log10(P[W] * 1000)
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt * 1000.0); }

namespace detail {

inline void require(bool cond, const std::string& message) {
    if (!cond) throw std::invalid_argument(message);
}

inline void require_positive(double value, const char* name) {
    if (!(value > 0.0))
        throw std::invalid_argument(std::string(name) + " must be positive");
}

inline void require_nonnegative(double value, const char* name) {
    if (!(value >= 0.0))
        throw std::invalid_argument(std::string(name) + " must be non-negative");
}

inline void require_finite(double value, const char* name) {
    if (!std::isfinite(value))
        throw std::invalid_argument(std::string(name) + " must be finite");
}

inline void require_probability(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0))
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

// Strictly inside (0, 1): used for outage targets that get inverted.
inline void require_open_probability(double value, const char* name) {
    if (!(value > 0.0 && value < 1.0))
        throw std::domain_error(std::string(name) + " must lie in (0, 1)");
}

}  // namespace detail

}  // namespace greenlink
