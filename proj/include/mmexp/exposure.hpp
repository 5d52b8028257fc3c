// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "mmexp/errors.hpp"

namespace mmexp {

/// Skin parameters near 28 GHz. The defaults are assumptions, see README.
struct TissueModel {
    double transmission_coeff = 0.5; ///< power transmission coefficient T, in (0, 1]
    double m_factor = 1.0;           ///< dielectric-dependent factor m, constant for normal incidence
    double penetration_depth_m = 0.92e-3;
    double density_kg_m3 = 1100.0;
    double conductivity_s_m = 25.0;
    double wave_impedance_ohm = 377.0;
};

struct ExposureSample {
    double pd_w_m2 = 0.0;
    double efield_v_m = 0.0;
    double sar_w_kg = 0.0;
};

/// Throws ConfigError naming the first offending field.
inline void validate(const TissueModel& t)
{
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(std::string("tissue.") + name + " must be positive, got " + std::to_string(v));
    };
    positive(t.transmission_coeff, "T");
    if (t.transmission_coeff > 1.0)
        throw ConfigError("tissue.T must be <= 1, got " + std::to_string(t.transmission_coeff));
    positive(t.m_factor, "m");
    positive(t.penetration_depth_m, "delta_m");
    positive(t.density_kg_m3, "rho_kg_m3");
    positive(t.conductivity_s_m, "sigma_s_m");
    positive(t.wave_impedance_ohm, "eta_ohm");
}

/// Far-field incident power density EIRP / (4 pi d^2).
inline double incident_pd(double eirp_w, double d3d)
{
    if (!(d3d > 0.0))
        throw GeometryError("incident power density needs a positive distance, got " + std::to_string(d3d));
    return eirp_w / (4.0 * std::numbers::pi * d3d * d3d);
}

inline double pd_to_efield(double pd_w_m2, double eta_ohm) { return std::sqrt(pd_w_m2 * eta_ohm); }

/// sigma |E|^2 / rho
inline double sar_from_efield(double efield_v_m, const TissueModel& t)
{
    return t.conductivity_s_m * efield_v_m * efield_v_m / t.density_kg_m3;
}

/// 2 S T m / (delta rho)
inline double sar_from_pd(double pd_w_m2, const TissueModel& t)
{
    if (!(t.penetration_depth_m > 0.0) || !(t.density_kg_m3 > 0.0))
        throw ConfigError("tissue.delta_m and tissue.rho_kg_m3 must be positive");
    return 2.0 * pd_w_m2 * t.transmission_coeff * t.m_factor / (t.penetration_depth_m * t.density_kg_m3);
}

/// PD, E-field and SAR at the UE. SAR follows the PD route (2 S T m / (delta rho)).
inline ExposureSample evaluate_exposure(double eirp_w, double d3d, const TissueModel& t)
{
    ExposureSample s;
    s.pd_w_m2 = incident_pd(eirp_w, d3d);
    s.efield_v_m = pd_to_efield(s.pd_w_m2, t.wave_impedance_ohm);
    s.sar_w_kg = sar_from_pd(s.pd_w_m2, t);
    return s;
}

} // namespace mmexp
