// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmexp/antenna.hpp"
#include "mmexp/channel.hpp"
#include "mmexp/errors.hpp"
#include "mmexp/exposure.hpp"
#include "mmexp/protocol.hpp"

namespace mmexp {

/// Syntax error in a config file, with 1-based line and column.
class ConfigParseError : public ConfigError {
public:
    ConfigParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what)
        : ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column)
    {
    }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

struct LayoutConfig {
    double isd_m = 200.0;
    int rings = 2;
    std::size_t sectors_per_site = 3;
    std::size_t ues_per_sector = 10;
    double min_drop_dist_m = 10.0;
    std::optional<double> cell_radius_m; ///< unset means isd / sqrt(3)
    double ue_height_m = 1.5;
    double ap_height_m = 10.0;
    double first_boresight_deg = 30.0;

    double effective_cell_radius() const { return cell_radius_m.value_or(isd_m / std::sqrt(3.0)); }
};

struct RadioConfig {
    double fc_ghz = 28.0;
    double bandwidth_hz = 850e6;
    double noise_figure_db = 7.0;
    double temperature_k = 290.0;
    double rx_gain_dbi = 0.0;
    bool shadow_fading = false;
};

struct AntennaConfig {
    ElementPattern element;
    ArrayConfig array;
};

struct ScenarioConfig {
    Scenario name = Scenario::UMi;
    std::array<ScenarioParams, 3> tables{default_scenario_params(Scenario::RMa),
                                         default_scenario_params(Scenario::UMa),
                                         default_scenario_params(Scenario::UMi)};

    const ScenarioParams& active() const { return tables[static_cast<std::size_t>(name)]; }
    ScenarioParams& table(Scenario s) { return tables[static_cast<std::size_t>(s)]; }
};

struct ProtocolConfig {
    GuidelineConfig guideline;
    std::size_t epochs = 1;
    double measurement_noise_db = 0.0; ///< std-dev of the dB perturbation on PD seen by selection
};

enum class ProtocolSet { typical, proposed, both };

inline constexpr std::string_view to_string(ProtocolSet p)
{
    switch (p) {
    case ProtocolSet::typical:
        return "typical";
    case ProtocolSet::proposed:
        return "proposed";
    case ProtocolSet::both:
        return "both";
    }
    return "?";
}

inline std::optional<ProtocolSet> parse_protocol_set(std::string_view s)
{
    if (s == "typical")
        return ProtocolSet::typical;
    if (s == "proposed")
        return ProtocolSet::proposed;
    if (s == "both")
        return ProtocolSet::both;
    return std::nullopt;
}

struct CampaignConfig {
    std::size_t n_drops = 20;
    std::uint64_t master_seed = 1;
    std::string out_dir = "results";
    ProtocolSet protocols = ProtocolSet::both;
    std::size_t threads = 0; ///< 0 selects hardware concurrency
};

struct SimConfig {
    LayoutConfig layout;
    RadioConfig radio;
    AntennaConfig antenna;
    ScenarioConfig scenario;
    TissueModel tissue;
    ProtocolConfig protocol;
    CampaignConfig campaign;
};

// --------------------------------------------------------------------------
// value conversion

namespace config_detail {

/// Shortest %g form that parses back to the same double.
inline std::string format_double(double v)
{
    char buf[64];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v)
            break;
    }
    return buf;
}

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] inline void bad_value(const std::string& key, std::string_view value, const char* expected)
{
    throw ConfigError(key + ": expected " + expected + ", got '" + std::string(value) + "'");
}

inline double parse_double(const std::string& key, std::string_view v)
{
    std::string s(v);
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(d))
        bad_value(key, v, "a finite number");
    return d;
}

template <typename Int>
Int parse_int(const std::string& key, std::string_view v)
{
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size())
        bad_value(key, v, "an integer");
    return out;
}

inline bool parse_bool(const std::string& key, std::string_view v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    bad_value(key, v, "a boolean (true/false)");
}

struct Field {
    std::string key; ///< "section.name"
    std::function<void(SimConfig&, std::string_view)> set;
    std::function<std::string(const SimConfig&)> get;
};

template <typename Member>
Field real(std::string key, Member member)
{
    return {key,
            [key, member](SimConfig& c, std::string_view v) { std::invoke(member, c) = parse_double(key, v); },
            [member](const SimConfig& c) { return format_double(std::invoke(member, c)); }};
}

template <typename Int, typename Member>
Field integer(std::string key, Member member)
{
    return {key,
            [key, member](SimConfig& c, std::string_view v) { std::invoke(member, c) = parse_int<Int>(key, v); },
            [member](const SimConfig& c) { return std::to_string(std::invoke(member, c)); }};
}

template <typename Member>
Field boolean(std::string key, Member member)
{
    return {key, [key, member](SimConfig& c, std::string_view v) { std::invoke(member, c) = parse_bool(key, v); },
            [member](const SimConfig& c) { return std::string(std::invoke(member, c) ? "true" : "false"); }};
}

inline void add_scenario_fields(std::vector<Field>& f, Scenario s)
{
    const std::string p = "scenario." + std::string(to_string(s)) + ".";
    auto tab = [s](auto proj) {
        return [s, proj](auto& c) -> auto& { return proj(c.scenario.tables[static_cast<std::size_t>(s)]); };
    };
#define MMEXP_SCEN_REAL(name, expr) f.push_back(real(p + name, tab([](auto& t) -> auto& { return expr; })))
    if (s != Scenario::RMa) {
        MMEXP_SCEN_REAL("los_near_intercept", t.los_near.intercept);
        MMEXP_SCEN_REAL("los_near_dist_slope", t.los_near.dist_slope);
        MMEXP_SCEN_REAL("los_near_freq_slope", t.los_near.freq_slope);
        MMEXP_SCEN_REAL("los_far_intercept", t.los_far.intercept);
        MMEXP_SCEN_REAL("los_far_dist_slope", t.los_far.dist_slope);
        MMEXP_SCEN_REAL("los_far_freq_slope", t.los_far.freq_slope);
        MMEXP_SCEN_REAL("los_bp_coeff", t.los_bp_coeff);
        MMEXP_SCEN_REAL("nlos_intercept", t.nlos.intercept);
        MMEXP_SCEN_REAL("nlos_dist_slope", t.nlos.dist_slope);
        MMEXP_SCEN_REAL("nlos_freq_slope", t.nlos.freq_slope);
        MMEXP_SCEN_REAL("nlos_ue_height_coeff", t.nlos_ue_height_coeff);
        MMEXP_SCEN_REAL("env_height_m", t.env_height_m);
    } else {
        MMEXP_SCEN_REAL("building_height_m", t.building_height_m);
        MMEXP_SCEN_REAL("street_width_m", t.street_width_m);
    }
    MMEXP_SCEN_REAL("los_plateau_m", t.los_plateau_m);
    MMEXP_SCEN_REAL("los_decay_m", t.los_decay_m);
    MMEXP_SCEN_REAL("sf_los_db", t.sf_los_db);
    MMEXP_SCEN_REAL("sf_nlos_db", t.sf_nlos_db);
    MMEXP_SCEN_REAL("d2d_min_m", t.d2d_min_m);
    MMEXP_SCEN_REAL("d2d_max_los_m", t.d2d_max_los_m);
    MMEXP_SCEN_REAL("d2d_max_nlos_m", t.d2d_max_nlos_m);
    MMEXP_SCEN_REAL("fc_min_ghz", t.fc_min_ghz);
    MMEXP_SCEN_REAL("fc_max_ghz", t.fc_max_ghz);
#undef MMEXP_SCEN_REAL
    if (s != Scenario::RMa)
        f.push_back(boolean(p + "los_height_term", tab([](auto& t) -> auto& { return t.los_height_term; })));
}

inline const std::vector<Field>& fields()
{
    static const std::vector<Field> registry = [] {
        std::vector<Field> f;
        f.push_back(real("layout.isd_m", [](auto& c) -> auto& { return c.layout.isd_m; }));
        f.push_back(integer<int>("layout.rings", [](auto& c) -> auto& { return c.layout.rings; }));
        f.push_back(integer<std::size_t>("layout.sectors_per_site",
                                         [](auto& c) -> auto& { return c.layout.sectors_per_site; }));
        f.push_back(integer<std::size_t>("layout.ues_per_sector",
                                         [](auto& c) -> auto& { return c.layout.ues_per_sector; }));
        f.push_back(real("layout.min_drop_dist_m", [](auto& c) -> auto& { return c.layout.min_drop_dist_m; }));
        f.push_back({"layout.cell_radius_m",
                     [](SimConfig& c, std::string_view v) {
                         if (v == "auto")
                             c.layout.cell_radius_m.reset();
                         else
                             c.layout.cell_radius_m = parse_double("layout.cell_radius_m", v);
                     },
                     [](const SimConfig& c) {
                         return c.layout.cell_radius_m ? format_double(*c.layout.cell_radius_m) : std::string("auto");
                     }});
        f.push_back(real("layout.ue_height_m", [](auto& c) -> auto& { return c.layout.ue_height_m; }));
        f.push_back(real("layout.ap_height_m", [](auto& c) -> auto& { return c.layout.ap_height_m; }));
        f.push_back(real("layout.first_boresight_deg", [](auto& c) -> auto& { return c.layout.first_boresight_deg; }));

        f.push_back(real("radio.fc_ghz", [](auto& c) -> auto& { return c.radio.fc_ghz; }));
        f.push_back(real("radio.bandwidth_hz", [](auto& c) -> auto& { return c.radio.bandwidth_hz; }));
        f.push_back(real("radio.noise_figure_db", [](auto& c) -> auto& { return c.radio.noise_figure_db; }));
        f.push_back(real("radio.temperature_k", [](auto& c) -> auto& { return c.radio.temperature_k; }));
        f.push_back(real("radio.rx_gain_dbi", [](auto& c) -> auto& { return c.radio.rx_gain_dbi; }));
        f.push_back(boolean("radio.shadow_fading", [](auto& c) -> auto& { return c.radio.shadow_fading; }));

        f.push_back(real("antenna.phi_3db", [](auto& c) -> auto& { return c.antenna.element.phi_3db; }));
        f.push_back(real("antenna.theta_3db", [](auto& c) -> auto& { return c.antenna.element.theta_3db; }));
        f.push_back(real("antenna.a_max_db", [](auto& c) -> auto& { return c.antenna.element.a_max; }));
        f.push_back(real("antenna.g_max_dbi", [](auto& c) -> auto& { return c.antenna.element.g_max; }));
        f.push_back(integer<int>("antenna.n_elements", [](auto& c) -> auto& { return c.antenna.array.n_elements; }));
        f.push_back(real("antenna.p_element_dbm", [](auto& c) -> auto& { return c.antenna.array.p_element_dbm; }));
        f.push_back({"antenna.eirp_mode",
                     [](SimConfig& c, std::string_view v) {
                         const auto m = parse_eirp_mode(v);
                         if (!m)
                             bad_value("antenna.eirp_mode", v, "one of coherent, total-power-only, calibrated");
                         c.antenna.array.eirp_mode = *m;
                     },
                     [](const SimConfig& c) { return std::string(to_string(c.antenna.array.eirp_mode)); }});
        f.push_back(real("antenna.calibration_offset_db",
                         [](auto& c) -> auto& { return c.antenna.array.calibration_offset_db; }));

        f.push_back({"scenario.name",
                     [](SimConfig& c, std::string_view v) {
                         const auto s = parse_scenario(v);
                         if (!s)
                             bad_value("scenario.name", v, "one of rma, uma, umi");
                         c.scenario.name = *s;
                     },
                     [](const SimConfig& c) { return std::string(to_string(c.scenario.name)); }});
        for (Scenario s : kAllScenarios)
            add_scenario_fields(f, s);

        f.push_back(real("tissue.T", [](auto& c) -> auto& { return c.tissue.transmission_coeff; }));
        f.push_back(real("tissue.m", [](auto& c) -> auto& { return c.tissue.m_factor; }));
        f.push_back(real("tissue.delta_m", [](auto& c) -> auto& { return c.tissue.penetration_depth_m; }));
        f.push_back(real("tissue.rho_kg_m3", [](auto& c) -> auto& { return c.tissue.density_kg_m3; }));
        f.push_back(real("tissue.sigma_s_m", [](auto& c) -> auto& { return c.tissue.conductivity_s_m; }));
        f.push_back(real("tissue.eta_ohm", [](auto& c) -> auto& { return c.tissue.wave_impedance_ohm; }));

        f.push_back(real("protocol.pd_limit_w_m2", [](auto& c) -> auto& { return c.protocol.guideline.pd_limit_w_m2; }));
        f.push_back(integer<std::size_t>("protocol.reevaluation_period",
                                         [](auto& c) -> auto& { return c.protocol.guideline.reevaluation_period; }));
        f.push_back(integer<std::size_t>("protocol.epochs", [](auto& c) -> auto& { return c.protocol.epochs; }));
        f.push_back(real("protocol.measurement_noise_db",
                         [](auto& c) -> auto& { return c.protocol.measurement_noise_db; }));

        f.push_back(integer<std::size_t>("campaign.n_drops", [](auto& c) -> auto& { return c.campaign.n_drops; }));
        f.push_back(integer<std::uint64_t>("campaign.master_seed",
                                           [](auto& c) -> auto& { return c.campaign.master_seed; }));
        f.push_back({"campaign.out_dir", [](SimConfig& c, std::string_view v) { c.campaign.out_dir = std::string(v); },
                     [](const SimConfig& c) { return c.campaign.out_dir; }});
        f.push_back({"campaign.protocols",
                     [](SimConfig& c, std::string_view v) {
                         const auto p = parse_protocol_set(v);
                         if (!p)
                             bad_value("campaign.protocols", v, "one of typical, proposed, both");
                         c.campaign.protocols = *p;
                     },
                     [](const SimConfig& c) { return std::string(to_string(c.campaign.protocols)); }});
        f.push_back(integer<std::size_t>("campaign.threads", [](auto& c) -> auto& { return c.campaign.threads; }));
        return f;
    }();
    return registry;
}

inline const Field* find_field(std::string_view key)
{
    for (const auto& f : fields())
        if (f.key == key)
            return &f;
    return nullptr;
}

} // namespace config_detail

/// Sets one dotted key ("section.name"). Unknown keys are rejected.
inline void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value)
{
    const auto* field = config_detail::find_field(key);
    if (!field)
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    field->set(cfg, config_detail::trim(value));
}

inline std::string get_config_value(const SimConfig& cfg, std::string_view key)
{
    const auto* field = config_detail::find_field(key);
    if (!field)
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    return field->get(cfg);
}

/// Checks every field against its module's preconditions. Throws ConfigError
/// naming the field, the bound and the offending value.
inline void validate(const SimConfig& c)
{
    auto fail = [](const char* field, const std::string& bound, double v) {
        throw ConfigError(std::string(field) + " must be " + bound + ", got " + config_detail::format_double(v));
    };
    auto positive = [&](const char* field, double v) {
        if (!(v > 0.0))
            fail(field, "> 0", v);
    };

    positive("layout.isd_m", c.layout.isd_m);
    if (c.layout.rings < 0 || c.layout.rings > 20)
        fail("layout.rings", "in [0, 20]", c.layout.rings);
    if (c.layout.sectors_per_site < 1)
        fail("layout.sectors_per_site", ">= 1", 0);
    if (c.layout.min_drop_dist_m < 0.0)
        fail("layout.min_drop_dist_m", ">= 0", c.layout.min_drop_dist_m);
    if (!(c.layout.min_drop_dist_m < c.layout.effective_cell_radius()))
        fail("layout.min_drop_dist_m", "< layout.cell_radius_m (" +
                                           config_detail::format_double(c.layout.effective_cell_radius()) + ")",
             c.layout.min_drop_dist_m);
    positive("layout.ue_height_m", c.layout.ue_height_m);
    positive("layout.ap_height_m", c.layout.ap_height_m);

    positive("radio.fc_ghz", c.radio.fc_ghz);
    positive("radio.bandwidth_hz", c.radio.bandwidth_hz);
    if (c.radio.noise_figure_db < 0.0)
        fail("radio.noise_figure_db", ">= 0", c.radio.noise_figure_db);
    positive("radio.temperature_k", c.radio.temperature_k);

    positive("antenna.phi_3db", c.antenna.element.phi_3db);
    positive("antenna.theta_3db", c.antenna.element.theta_3db);
    if (c.antenna.element.a_max < 0.0)
        fail("antenna.a_max_db", ">= 0", c.antenna.element.a_max);
    if (c.antenna.array.n_elements < 1)
        fail("antenna.n_elements", ">= 1", c.antenna.array.n_elements);

    for (const auto& t : c.scenario.tables) {
        const std::string p = "scenario." + std::string(to_string(t.scenario)) + ".";
        if (!(t.los_decay_m > 0.0))
            throw ConfigError(p + "los_decay_m must be > 0");
        if (t.los_plateau_m < 0.0)
            throw ConfigError(p + "los_plateau_m must be >= 0");
        if (t.sf_los_db < 0.0 || t.sf_nlos_db < 0.0)
            throw ConfigError(p + "shadow fading sigmas must be >= 0");
        if (!(t.d2d_min_m < t.d2d_max_los_m) || !(t.d2d_min_m < t.d2d_max_nlos_m))
            throw ConfigError(p + "d2d_min_m must be below the d2d maxima");
        if (!(t.fc_min_ghz < t.fc_max_ghz))
            throw ConfigError(p + "fc_min_ghz must be below fc_max_ghz");
        if (t.scenario == Scenario::RMa && (!(t.building_height_m > 0.0) || !(t.street_width_m > 0.0)))
            throw ConfigError(p + "building_height_m and street_width_m must be > 0");
    }

    validate(c.tissue);
    validate(c.protocol.guideline);
    if (c.protocol.epochs < 1)
        fail("protocol.epochs", ">= 1", 0);
    if (c.protocol.measurement_noise_db < 0.0)
        fail("protocol.measurement_noise_db", ">= 0", c.protocol.measurement_noise_db);

    if (c.campaign.n_drops < 1)
        fail("campaign.n_drops", ">= 1", 0);
    if (c.campaign.out_dir.empty())
        throw ConfigError("campaign.out_dir must not be empty");
}

/// Applies "[section]" / "key = value" text on top of `cfg`. '#' and ';' start
/// comments. Keys may also be written fully dotted outside any section.
inline void parse_config_text(SimConfig& cfg, std::string_view text, const std::string& source = "<config>")
{
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        const std::string_view raw = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        std::string_view line = raw;
        if (const auto c = line.find_first_of("#;"); c != std::string_view::npos)
            line = line.substr(0, c);
        const std::string_view body = config_detail::trim(line);
        if (body.empty())
            continue;
        const std::size_t col = static_cast<std::size_t>(body.data() - raw.data()) + 1;

        if (body.front() == '[') {
            if (body.back() != ']')
                throw ConfigParseError(source, line_no, col + body.size(), "expected ']' to close section header");
            section = std::string(config_detail::trim(body.substr(1, body.size() - 2)));
            if (section.empty())
                throw ConfigParseError(source, line_no, col + 1, "empty section name");
            continue;
        }

        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw ConfigParseError(source, line_no, col + body.size(), "expected 'key = value'");
        const std::string_view key = config_detail::trim(body.substr(0, eq));
        const std::string_view value = config_detail::trim(body.substr(eq + 1));
        if (key.empty())
            throw ConfigParseError(source, line_no, col, "missing key before '='");

        const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
        try {
            set_config_value(cfg, full, value);
        } catch (const ConfigError& e) {
            throw ConfigParseError(source, line_no, col, e.what());
        }
    }
}

/// Loads `path` (empty path means defaults only), applies `overrides` in
/// order, then validates.
inline SimConfig load_config(const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides = {},
                             SimConfig base = {})
{
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot read config file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        parse_config_text(base, ss.str(), path);
    }
    for (const auto& [k, v] : overrides)
        set_config_value(base, k, v);
    validate(base);
    return base;
}

/// Full config as re-parsable text, one section per group, every key present.
inline std::string echo_config(const SimConfig& cfg)
{
    std::string out;
    std::string current;
    for (const auto& f : config_detail::fields()) {
        const auto dot = f.key.rfind('.');
        const std::string section = f.key.substr(0, dot);
        if (section != current) {
            if (!current.empty())
                out += '\n';
            out += "[" + section + "]\n";
            current = section;
        }
        out += f.key.substr(dot + 1) + " = " + f.get(cfg) + "\n";
    }
    return out;
}

} // namespace mmexp
