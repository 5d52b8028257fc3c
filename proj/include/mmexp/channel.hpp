// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "mmexp/errors.hpp"
#include "mmexp/rng.hpp"

namespace mmexp {

inline constexpr double kBoltzmann = 1.380649e-23; // J/K
inline constexpr double kSpeedOfLight = 299792458.0;

enum class Scenario { RMa, UMa, UMi };

inline constexpr std::array<Scenario, 3> kAllScenarios{Scenario::RMa, Scenario::UMa, Scenario::UMi};

inline constexpr std::string_view to_string(Scenario s)
{
    switch (s) {
    case Scenario::RMa:
        return "rma";
    case Scenario::UMa:
        return "uma";
    case Scenario::UMi:
        return "umi";
    }
    return "?";
}

inline std::optional<Scenario> parse_scenario(std::string_view s)
{
    for (Scenario sc : kAllScenarios)
        if (to_string(sc) == s)
            return sc;
    return std::nullopt;
}

/// a + b log10(d3d) + c log10(fc_ghz)
struct LogDistanceLaw {
    double intercept = 0.0;
    double dist_slope = 0.0;
    double freq_slope = 0.0;

    double operator()(double d3d, double fc_ghz) const
    {
        return intercept + dist_slope * std::log10(d3d) + freq_slope * std::log10(fc_ghz);
    }
};

/// Coefficient table for one propagation scenario (3GPP TR 38.901 Table 7.4.1-1 and 7.4.2-1).
///
/// UMi and UMa share the urban form:
///   LoS, d2d <= d'bp : los_near
///   LoS, d2d >  d'bp : los_far + los_bp_coeff * log10(d'bp^2 + (h_ap - h_ue)^2)
///   NLoS             : max(LoS, nlos + nlos_ue_height_coeff * (h_ue - 1.5))
///   d'bp = 4 (h_ap - h_env)(h_ue - h_env) fc / c
///   P(LoS) = 1 for d2d <= plateau, else plateau/d + exp(-d/decay)(1 - plateau/d),
///   times (1 + C'(h_ue) 5/4 (d/100)^3 exp(-d/150)) when los_height_term is set.
///
/// RMa uses its own closed forms, parameterized by building height and street width:
///   P(LoS) = 1 for d2d <= plateau, else exp(-(d - plateau)/decay).
struct ScenarioParams {
    Scenario scenario = Scenario::UMi;

    LogDistanceLaw los_near;
    LogDistanceLaw los_far;
    double los_bp_coeff = 0.0;
    LogDistanceLaw nlos;
    double nlos_ue_height_coeff = 0.0;
    double env_height_m = 1.0;

    double building_height_m = 5.0; // RMa only
    double street_width_m = 20.0;   // RMa only

    double los_plateau_m = 18.0;
    double los_decay_m = 36.0;
    bool los_height_term = false;

    double sf_los_db = 4.0;
    double sf_nlos_db = 7.82;

    double d2d_min_m = 10.0;
    double d2d_max_los_m = 5000.0;
    double d2d_max_nlos_m = 5000.0;
    double fc_min_ghz = 0.5;
    double fc_max_ghz = 100.0;
};

inline ScenarioParams default_scenario_params(Scenario s)
{
    ScenarioParams p;
    p.scenario = s;
    switch (s) {
    case Scenario::UMi:
        p.los_near = {32.4, 21.0, 20.0};
        p.los_far = {32.4, 40.0, 20.0};
        p.los_bp_coeff = -9.5;
        p.nlos = {22.4, 35.3, 21.3};
        p.nlos_ue_height_coeff = -0.3;
        p.los_plateau_m = 18.0;
        p.los_decay_m = 36.0;
        p.sf_los_db = 4.0;
        p.sf_nlos_db = 7.82;
        break;
    case Scenario::UMa:
        p.los_near = {28.0, 22.0, 20.0};
        p.los_far = {28.0, 40.0, 20.0};
        p.los_bp_coeff = -9.0;
        p.nlos = {13.54, 39.08, 20.0};
        p.nlos_ue_height_coeff = -0.6;
        p.los_plateau_m = 18.0;
        p.los_decay_m = 63.0;
        p.los_height_term = true;
        p.sf_los_db = 4.0;
        p.sf_nlos_db = 6.0;
        break;
    case Scenario::RMa:
        p.building_height_m = 5.0;
        p.street_width_m = 20.0;
        p.los_plateau_m = 10.0;
        p.los_decay_m = 1000.0;
        p.sf_los_db = 4.0;
        p.sf_nlos_db = 8.0;
        p.d2d_max_los_m = 10000.0;
        p.fc_max_ghz = 30.0;
        break;
    }
    return p;
}

struct LinkHeights {
    double ap = 10.0;
    double ue = 1.5;
};

inline double los_probability(const ScenarioParams& p, double d2d)
{
    if (d2d <= p.los_plateau_m)
        return 1.0;
    if (p.scenario == Scenario::RMa)
        return std::exp(-(d2d - p.los_plateau_m) / p.los_decay_m);
    const double ratio = p.los_plateau_m / d2d;
    return ratio + std::exp(-d2d / p.los_decay_m) * (1.0 - ratio);
}

/// Urban LoS probability including the UE-height correction (non-zero above 13 m).
inline double los_probability(const ScenarioParams& p, double d2d, double h_ue)
{
    double prob = los_probability(p, d2d);
    if (p.los_height_term && p.scenario != Scenario::RMa && d2d > p.los_plateau_m && h_ue > 13.0) {
        const double c = std::pow((h_ue - 13.0) / 10.0, 1.5);
        prob *= 1.0 + c * 1.25 * std::pow(d2d / 100.0, 3.0) * std::exp(-d2d / 150.0);
    }
    return std::clamp(prob, 0.0, 1.0);
}

inline bool sample_los(double p, Rng& rng) { return rng.bernoulli(p); }

/// 32.4 + 20 log10(d3d) + 20 log10(fc_ghz)
inline double free_space_path_loss_db(double d3d, double fc_ghz)
{
    return 32.4 + 20.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz);
}

namespace detail {

inline double urban_breakpoint_m(const ScenarioParams& p, double fc_ghz, LinkHeights h)
{
    return 4.0 * (h.ap - p.env_height_m) * (h.ue - p.env_height_m) * fc_ghz * 1e9 / kSpeedOfLight;
}

inline double urban_los_db(const ScenarioParams& p, double d2d, double d3d, double fc_ghz, LinkHeights h)
{
    const double bp = urban_breakpoint_m(p, fc_ghz, h);
    if (d2d <= bp)
        return p.los_near(d3d, fc_ghz);
    const double dh = h.ap - h.ue;
    return p.los_far(d3d, fc_ghz) + p.los_bp_coeff * std::log10(bp * bp + dh * dh);
}

inline double rural_breakpoint_m(double fc_ghz, LinkHeights h)
{
    return 2.0 * std::numbers::pi * h.ap * h.ue * fc_ghz * 1e9 / kSpeedOfLight;
}

inline double rural_los_near_db(const ScenarioParams& p, double d3d, double fc_ghz)
{
    const double hb = p.building_height_m;
    const double hp = std::pow(hb, 1.72);
    return 20.0 * std::log10(40.0 * std::numbers::pi * d3d * fc_ghz / 3.0) +
           std::min(0.03 * hp, 10.0) * std::log10(d3d) - std::min(0.044 * hp, 14.77) +
           0.002 * std::log10(hb) * d3d;
}

inline double rural_los_db(const ScenarioParams& p, double d2d, double d3d, double fc_ghz, LinkHeights h)
{
    const double bp = rural_breakpoint_m(fc_ghz, h);
    if (d2d <= bp)
        return rural_los_near_db(p, d3d, fc_ghz);
    return rural_los_near_db(p, bp, fc_ghz) + 40.0 * std::log10(d3d / bp);
}

inline double rural_nlos_db(const ScenarioParams& p, double d3d, double fc_ghz, LinkHeights h)
{
    const double W = p.street_width_m;
    const double hb = p.building_height_m;
    const double hbs = h.ap;
    const double t = std::log10(11.75 * h.ue);
    return 161.04 - 7.1 * std::log10(W) + 7.5 * std::log10(hb) -
           (24.37 - 3.7 * (hb / hbs) * (hb / hbs)) * std::log10(hbs) +
           (43.42 - 3.1 * std::log10(hbs)) * (std::log10(d3d) - 3.0) + 20.0 * std::log10(fc_ghz) -
           (3.2 * t * t - 4.97);
}

} // namespace detail

/// Path loss in dB. Inputs outside the scenario's validity range throw
/// ModelRangeError; they are never clamped.
inline double path_loss_db(const ScenarioParams& p, bool los, double d2d, double d3d, double fc_ghz,
                           LinkHeights h)
{
    const std::string name{to_string(p.scenario)};
    if (!(d3d >= 1.0))
        throw ModelRangeError(name + " path loss: d3d " + std::to_string(d3d) + " m is below 1 m");
    const double d2d_max = los ? p.d2d_max_los_m : p.d2d_max_nlos_m;
    if (d2d < p.d2d_min_m || d2d > d2d_max)
        throw ModelRangeError(name + " path loss: d2d " + std::to_string(d2d) + " m outside [" +
                              std::to_string(p.d2d_min_m) + ", " + std::to_string(d2d_max) + "] m");
    if (fc_ghz < p.fc_min_ghz || fc_ghz > p.fc_max_ghz)
        throw ModelRangeError(name + " path loss: carrier " + std::to_string(fc_ghz) + " GHz outside [" +
                              std::to_string(p.fc_min_ghz) + ", " + std::to_string(p.fc_max_ghz) + "] GHz");

    if (p.scenario == Scenario::RMa) {
        const double pl_los = detail::rural_los_db(p, d2d, d3d, fc_ghz, h);
        return los ? pl_los : std::max(pl_los, detail::rural_nlos_db(p, d3d, fc_ghz, h));
    }
    const double pl_los = detail::urban_los_db(p, d2d, d3d, fc_ghz, h);
    if (los)
        return pl_los;
    const double pl_nlos = p.nlos(d3d, fc_ghz) + p.nlos_ue_height_coeff * (h.ue - 1.5);
    return std::max(pl_los, pl_nlos);
}

inline double shadow_fading_sigma_db(const ScenarioParams& p, bool los) { return los ? p.sf_los_db : p.sf_nlos_db; }

/// Thermal noise kTB in dBm plus the receiver noise figure.
inline double noise_power_dbm(double bandwidth_hz, double noise_figure_db, double temperature_k = 290.0)
{
    if (!(bandwidth_hz > 0.0))
        throw ConfigError("radio.bandwidth_hz must be positive, got " + std::to_string(bandwidth_hz));
    return 10.0 * std::log10(kBoltzmann * temperature_k * bandwidth_hz / 1e-3) + noise_figure_db;
}

inline double snr_db(double eirp_dbm, double path_loss_db, double rx_gain_dbi, double noise_dbm)
{
    return eirp_dbm - path_loss_db + rx_gain_dbi - noise_dbm;
}

/// B log2(1 + snr). An SNR of -inf dB (zero linear) gives zero rate.
inline double shannon_rate_bps(double bandwidth_hz, double snr_db)
{
    if (!(bandwidth_hz > 0.0))
        throw ConfigError("radio.bandwidth_hz must be positive, got " + std::to_string(bandwidth_hz));
    return bandwidth_hz * std::log2(1.0 + std::pow(10.0, snr_db / 10.0));
}

} // namespace mmexp
