// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "mmexp/errors.hpp"

namespace mmexp {

/// Single-element attenuation pattern with a front-to-back cap.
struct ElementPattern {
    double phi_3db = 65.0;   ///< azimuth 3 dB beamwidth, degrees
    double theta_3db = 65.0; ///< elevation 3 dB beamwidth, degrees
    double a_max = 30.0;     ///< maximum attenuation, dB
    double g_max = 5.0;      ///< peak element gain, dBi
};

enum class EirpMode { coherent, total_power_only, calibrated };

inline constexpr std::string_view to_string(EirpMode m)
{
    switch (m) {
    case EirpMode::coherent:
        return "coherent";
    case EirpMode::total_power_only:
        return "total-power-only";
    case EirpMode::calibrated:
        return "calibrated";
    }
    return "?";
}

inline std::optional<EirpMode> parse_eirp_mode(std::string_view s)
{
    if (s == "coherent")
        return EirpMode::coherent;
    if (s == "total-power-only")
        return EirpMode::total_power_only;
    if (s == "calibrated")
        return EirpMode::calibrated;
    return std::nullopt;
}

struct ArrayConfig {
    int n_elements = 64;
    double p_element_dbm = 21.0;
    EirpMode eirp_mode = EirpMode::coherent;
    double calibration_offset_db = 0.0;
};

// 12 (x / x_3db)^2 law shared by both planes.
inline double quadratic_attenuation(double offset_deg, double beamwidth_3db, double a_max)
{
    const double r = offset_deg / beamwidth_3db;
    return std::min(12.0 * r * r, a_max);
}

inline double attenuation_azimuth(double phi, const ElementPattern& p)
{
    return quadratic_attenuation(phi, p.phi_3db, p.a_max);
}

/// `theta` is a zenith angle; 90 degrees is the horizon.
inline double attenuation_elevation(double theta, const ElementPattern& p)
{
    return quadratic_attenuation(theta - 90.0, p.theta_3db, p.a_max);
}

inline double combined_attenuation(double phi, double theta, const ElementPattern& p)
{
    return std::min(attenuation_azimuth(phi, p) + attenuation_elevation(theta, p), p.a_max);
}

inline double element_gain(double phi, double theta, const ElementPattern& p)
{
    return p.g_max - combined_attenuation(phi, theta, p);
}

/// Array EIRP in dBm for a beam whose element gain toward the UE is `element_gain_dbi`.
///
///   coherent          p + 10log10(N) + g + 10log10(N)   (total power plus array gain)
///   total-power-only  p + 10log10(N) + g
///   calibrated        p + g
///
/// `calibration_offset_db` is added in every mode.
inline double eirp_dbm(const ArrayConfig& array, double element_gain_dbi)
{
    if (array.n_elements < 1)
        throw ConfigError("antenna.n_elements must be >= 1, got " + std::to_string(array.n_elements));
    const double array_db = 10.0 * std::log10(static_cast<double>(array.n_elements));
    double eirp = array.p_element_dbm + element_gain_dbi + array.calibration_offset_db;
    switch (array.eirp_mode) {
    case EirpMode::coherent:
        return eirp + 2.0 * array_db;
    case EirpMode::total_power_only:
        return eirp + array_db;
    case EirpMode::calibrated:
        return eirp;
    }
    throw ConfigError("unknown antenna.eirp_mode");
}

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

} // namespace mmexp
