// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mmexp/antenna.hpp"
#include "mmexp/channel.hpp"
#include "mmexp/config.hpp"
#include "mmexp/errors.hpp"
#include "mmexp/exposure.hpp"
#include "mmexp/protocol.hpp"
#include "mmexp/rng.hpp"
#include "mmexp/topology.hpp"

namespace mmexp {

/// Geometry and channel realization of one (UE, sector) link.
struct LinkState {
    std::size_t sector_id = 0;
    LinkGeometry geometry;
    bool los = false;
    double path_loss_db = 0.0;
    double shadowing_db = 0.0;
    double element_gain_dbi = 0.0;
    double eirp_dbm = 0.0;
    double rx_power_dbm = 0.0;
    double snr_db = 0.0;
    double rate_bps = 0.0;
    ExposureSample exposure;
};

/// Metrics of the link a protocol chose.
struct ServingLink {
    std::size_t sector_id = 0;
    double rate_bps = 0.0;
    double pd_w_m2 = 0.0;
    double sar_w_kg = 0.0;
    bool los = false;
    double d3d_m = 0.0;

    friend bool operator==(const ServingLink&, const ServingLink&) = default;
};

struct UeRecord {
    std::size_t ue_id = 0;
    std::size_t home_sector = 0;
    std::size_t candidate_count = 0;
    SelectionOutcome typical_outcome;
    SelectionOutcome proposed_outcome;
    ServingLink typical;
    ServingLink proposed;
    bool fallback = false;

    friend bool operator==(const UeRecord&, const UeRecord&) = default;
};

struct DropResult {
    std::size_t drop_index = 0;
    std::uint64_t seed = 0;
    std::vector<UeRecord> records;

    friend bool operator==(const DropResult&, const DropResult&) = default;
};

struct CdfSeries {
    std::string metric;
    std::vector<double> values;        ///< ascending
    std::vector<double> probabilities; ///< i / n, ending at 1
};

/// Empirical CDF; duplicates are kept as separate steps.
inline CdfSeries cdf(std::vector<double> values, std::string metric = {})
{
    if (values.empty())
        throw AggregationError("cdf of an empty sample" + (metric.empty() ? std::string() : " (" + metric + ")"));
    for (double v : values)
        if (!std::isfinite(v))
            throw AggregationError("cdf input contains a non-finite value" +
                                   (metric.empty() ? std::string() : " (" + metric + ")"));
    std::sort(values.begin(), values.end());
    CdfSeries s;
    s.metric = std::move(metric);
    const auto n = static_cast<double>(values.size());
    s.probabilities.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        s.probabilities.push_back(static_cast<double>(i + 1) / n);
    s.values = std::move(values);
    return s;
}

// --------------------------------------------------------------------------
// drop pipeline

/// Fixed per-campaign quantities shared by all drops.
struct Deployment {
    SitePlan plan;
    std::vector<Sector> sectors;
    double noise_dbm = 0.0;

    explicit Deployment(const SimConfig& cfg)
        : plan(build_hex_layout(cfg.layout.isd_m, cfg.layout.rings, cfg.layout.sectors_per_site)),
          sectors(sectorize(plan, cfg.layout.ap_height_m, cfg.layout.first_boresight_deg)),
          noise_dbm(noise_power_dbm(cfg.radio.bandwidth_hz, cfg.radio.noise_figure_db, cfg.radio.temperature_k))
    {
    }
};

/// Channel state of every candidate link for one UE. Draws one LoS variate
/// per link, plus one shadowing variate per link when shadow fading is on.
inline std::vector<LinkState> observe_links(const SimConfig& cfg, const Deployment& dep, const UserTerminal& ue,
                                            Rng& rng)
{
    const ScenarioParams& scen = cfg.scenario.active();
    std::vector<LinkState> links;
    links.reserve(dep.sectors.size());
    for (const Sector& sec : dep.sectors) {
        LinkState l;
        l.sector_id = sec.id;
        l.geometry = link_geometry(ue, sec);
        l.los = sample_los(los_probability(scen, l.geometry.d2d, ue.height), rng);
        l.path_loss_db = path_loss_db(scen, l.los, l.geometry.d2d, l.geometry.d3d, cfg.radio.fc_ghz,
                                      {sec.height, ue.height});
        if (cfg.radio.shadow_fading)
            l.shadowing_db = rng.normal(0.0, shadow_fading_sigma_db(scen, l.los));
        l.element_gain_dbi = element_gain(l.geometry.azimuth_offset, l.geometry.elevation, cfg.antenna.element);
        l.eirp_dbm = eirp_dbm(cfg.antenna.array, l.element_gain_dbi);
        l.rx_power_dbm = l.eirp_dbm - l.path_loss_db - l.shadowing_db + cfg.radio.rx_gain_dbi;
        l.snr_db = snr_db(l.eirp_dbm, l.path_loss_db + l.shadowing_db, cfg.radio.rx_gain_dbi, dep.noise_dbm);
        l.rate_bps = shannon_rate_bps(cfg.radio.bandwidth_hz, l.snr_db);
        l.exposure = evaluate_exposure(dbm_to_watt(l.eirp_dbm), l.geometry.d3d, cfg.tissue);
        links.push_back(l);
    }
    return links;
}

/// Candidate list as seen by the UE. With measurement noise enabled the PD
/// used for selection is perturbed by a zero-mean normal term in dB.
inline std::vector<CandidateRecord> to_candidates(std::span<const LinkState> links, double noise_db, Rng& rng)
{
    std::vector<CandidateRecord> cands;
    cands.reserve(links.size());
    for (const auto& l : links) {
        CandidateRecord c{l.sector_id, l.rx_power_dbm, l.rate_bps, l.exposure.pd_w_m2, l.exposure.sar_w_kg};
        if (noise_db > 0.0) {
            const double factor = std::pow(10.0, rng.normal(0.0, noise_db) / 10.0);
            c.pd_w_m2 *= factor;
            c.sar_w_kg *= factor;
        }
        cands.push_back(c);
    }
    return cands;
}

inline ServingLink serving_link(const LinkState& l)
{
    return {l.sector_id, l.rate_bps, l.exposure.pd_w_m2, l.exposure.sar_w_kg, l.los, l.geometry.d3d};
}

namespace engine_detail {

template <typename E>
[[noreturn]] void rethrow_with_context(const E& e, std::size_t drop_index)
{
    throw E("drop " + std::to_string(drop_index) + ": " + e.what());
}

} // namespace engine_detail

/// One Monte-Carlo drop with an explicit seed.
///
/// Pipeline: topology, geometry, LoS, path loss, SNR, rate, PD, SAR, then both
/// selections on the same snapshot. With protocol.epochs > 1 the link states
/// are re-drawn (LoS and shadowing; positions are static) at every
/// re-evaluation epoch and the record reports the final epoch.
inline DropResult run_drop(const SimConfig& cfg, const Deployment& dep, std::size_t drop_index, std::uint64_t seed)
{
    try {
        Rng rng(seed);
        std::vector<UserTerminal> ues;
        ues.reserve(dep.sectors.size() * cfg.layout.ues_per_sector);
        const double wedge = 360.0 / static_cast<double>(cfg.layout.sectors_per_site);
        for (const Sector& sec : dep.sectors) {
            auto batch = drop_ues(sec, cfg.layout.ues_per_sector, rng, cfg.layout.min_drop_dist_m,
                                  cfg.layout.effective_cell_radius(), cfg.layout.ue_height_m, wedge, ues.size());
            ues.insert(ues.end(), batch.begin(), batch.end());
        }

        DropResult result;
        result.drop_index = drop_index;
        result.seed = seed;
        result.records.reserve(ues.size());
        const auto& guideline = cfg.protocol.guideline;

        for (const auto& ue : ues) {
            std::vector<LinkState> links;
            std::vector<CandidateRecord> cands;
            auto refresh = [&](std::size_t) {
                links = observe_links(cfg, dep, ue, rng);
                cands = to_candidates(links, cfg.protocol.measurement_noise_db, rng);
                return cands;
            };
            const auto history = run_epochs(cfg.protocol.epochs, guideline, refresh);

            UeRecord rec;
            rec.ue_id = ue.id;
            rec.home_sector = ue.home_sector;
            rec.candidate_count = cands.size();
            rec.typical_outcome = select_typical(cands, guideline.pd_limit_w_m2);
            rec.proposed_outcome = history.back();
            rec.typical = serving_link(links[rec.typical_outcome.serving_index]);
            rec.proposed = serving_link(links[rec.proposed_outcome.serving_index]);
            rec.fallback = rec.proposed_outcome.fallback_used;
            result.records.push_back(std::move(rec));
        }
        return result;
    } catch (const ModelRangeError& e) {
        engine_detail::rethrow_with_context(e, drop_index);
    } catch (const GeometryError& e) {
        engine_detail::rethrow_with_context(e, drop_index);
    } catch (const ConfigError& e) {
        engine_detail::rethrow_with_context(e, drop_index);
    }
}

inline DropResult run_drop(const SimConfig& cfg, std::uint64_t seed)
{
    validate(cfg);
    return run_drop(cfg, Deployment(cfg), 0, seed);
}

// --------------------------------------------------------------------------
// campaign

struct CampaignSummary {
    std::size_t records = 0;
    std::size_t fallback_count = 0;
    std::size_t differing_serving = 0;
    double fallback_fraction = 0.0;
    double above_limit_typical = 0.0;
    double above_limit_proposed = 0.0;
    double above_5gbps_typical = 0.0;
    double above_5gbps_proposed = 0.0;
};

struct CampaignResult {
    std::vector<DropResult> drops;
    std::map<std::string, CdfSeries> cdfs; ///< keyed "<metric>_<protocol>"
    CampaignSummary summary;

    std::size_t record_count() const
    {
        std::size_t n = 0;
        for (const auto& d : drops)
            n += d.records.size();
        return n;
    }
};

inline constexpr std::array<const char*, 3> kMetrics{"rate", "pd", "sar"};

inline double metric_of(const ServingLink& s, std::string_view metric)
{
    if (metric == "rate")
        return s.rate_bps;
    if (metric == "pd")
        return s.pd_w_m2;
    return s.sar_w_kg;
}

/// Runs `n_drops` drops. Drop d uses seed drop_seed(master_seed, d); drops run
/// on up to `campaign.threads` workers and are reduced in drop order.
inline CampaignResult run_campaign(const SimConfig& cfg, std::size_t n_drops)
{
    validate(cfg);
    if (n_drops < 1)
        throw ConfigError("campaign.n_drops must be >= 1");
    const Deployment dep(cfg);

    CampaignResult out;
    out.drops.resize(n_drops);

    std::size_t workers = cfg.campaign.threads ? cfg.campaign.threads : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, n_drops);

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::size_t first_error_drop = n_drops;
    std::mutex err_mu;
    auto work = [&] {
        for (std::size_t d = next++; d < n_drops; d = next++) {
            try {
                out.drops[d] = run_drop(cfg, dep, d, drop_seed(cfg.campaign.master_seed, d));
            } catch (...) {
                std::lock_guard lock(err_mu);
                if (d < first_error_drop) {
                    first_error_drop = d;
                    first_error = std::current_exception();
                }
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < workers; ++i)
            pool.emplace_back(work);
    }
    if (first_error)
        std::rethrow_exception(first_error);

    const double limit = cfg.protocol.guideline.pd_limit_w_m2;
    std::map<std::string, std::vector<double>> pooled;
    CampaignSummary& s = out.summary;
    for (const auto& drop : out.drops) {
        for (const auto& r : drop.records) {
            ++s.records;
            s.fallback_count += r.fallback ? 1 : 0;
            s.differing_serving += r.typical.sector_id != r.proposed.sector_id ? 1 : 0;
            s.above_limit_typical += r.typical.pd_w_m2 > limit ? 1.0 : 0.0;
            s.above_limit_proposed += r.proposed.pd_w_m2 > limit ? 1.0 : 0.0;
            s.above_5gbps_typical += r.typical.rate_bps > 5e9 ? 1.0 : 0.0;
            s.above_5gbps_proposed += r.proposed.rate_bps > 5e9 ? 1.0 : 0.0;
            for (const char* m : kMetrics) {
                pooled[std::string(m) + "_typical"].push_back(metric_of(r.typical, m));
                pooled[std::string(m) + "_proposed"].push_back(metric_of(r.proposed, m));
            }
        }
    }
    if (s.records > 0) {
        const auto n = static_cast<double>(s.records);
        s.fallback_fraction = static_cast<double>(s.fallback_count) / n;
        s.above_limit_typical /= n;
        s.above_limit_proposed /= n;
        s.above_5gbps_typical /= n;
        s.above_5gbps_proposed /= n;
        for (auto& [key, values] : pooled)
            out.cdfs.emplace(key, cdf(std::move(values), key));
    }
    return out;
}

// --------------------------------------------------------------------------
// result files

namespace io_detail {

inline std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& p)
{
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open '" + p.string() + "' for writing");
    return f;
}

inline void close_out(std::ofstream& f, const std::filesystem::path& p)
{
    f.close();
    if (!f)
        throw IoError("write to '" + p.string() + "' failed");
}

} // namespace io_detail

inline constexpr const char* kRecordsHeader =
    "drop,ue_id,sector_typical,sector_proposed,rate_typical_bps,rate_proposed_bps,pd_typical_w_m2,"
    "pd_proposed_w_m2,sar_typical_w_kg,sar_proposed_w_kg,fallback,los_serving,d3d_m";

/// CSV text of all records. `los_serving` and `d3d_m` describe the
/// proposed-protocol serving link.
inline std::string format_records(std::span<const DropResult> drops)
{
    using io_detail::num;
    std::string out = kRecordsHeader;
    out += '\n';
    for (const auto& d : drops) {
        for (const auto& r : d.records) {
            out += std::to_string(d.drop_index) + ',' + std::to_string(r.ue_id) + ',' +
                   std::to_string(r.typical.sector_id) + ',' + std::to_string(r.proposed.sector_id) + ',' +
                   num(r.typical.rate_bps) + ',' + num(r.proposed.rate_bps) + ',' + num(r.typical.pd_w_m2) + ',' +
                   num(r.proposed.pd_w_m2) + ',' + num(r.typical.sar_w_kg) + ',' + num(r.proposed.sar_w_kg) + ',' +
                   (r.fallback ? '1' : '0') + ',' + (r.proposed.los ? '1' : '0') + ',' + num(r.proposed.d3d_m) +
                   '\n';
        }
    }
    return out;
}

inline std::string format_cdf(const CdfSeries& s)
{
    std::string out = "value,probability\n";
    for (std::size_t i = 0; i < s.values.size(); ++i)
        out += io_detail::num(s.values[i]) + ',' + io_detail::num(s.probabilities[i]) + '\n';
    return out;
}

/// Config echo followed by '#'-prefixed statistics, so the whole file parses as a config.
inline std::string format_summary(const CampaignResult& r, const SimConfig& cfg)
{
    using io_detail::num;
    const auto& s = r.summary;
    std::string out = "# mmexp campaign summary\n";
    out += echo_config(cfg);
    out += "\n# records = " + std::to_string(s.records) + "\n";
    out += "# drops = " + std::to_string(r.drops.size()) + "\n";
    out += "# ues_per_drop = " + std::to_string(r.drops.empty() ? 0 : r.drops.front().records.size()) + "\n";
    out += "# fallback_count = " + std::to_string(s.fallback_count) + "\n";
    out += "# fallback_fraction = " + num(s.fallback_fraction) + "\n";
    out += "# differing_serving_count = " + std::to_string(s.differing_serving) + "\n";
    out += "# above_pd_limit_fraction_typical = " + num(s.above_limit_typical) + "\n";
    out += "# above_pd_limit_fraction_proposed = " + num(s.above_limit_proposed) + "\n";
    out += "# above_5gbps_fraction_typical = " + num(s.above_5gbps_typical) + "\n";
    out += "# above_5gbps_fraction_proposed = " + num(s.above_5gbps_proposed) + "\n";
    return out;
}

inline std::vector<std::string> emitted_protocols(ProtocolSet set)
{
    switch (set) {
    case ProtocolSet::typical:
        return {"typical"};
    case ProtocolSet::proposed:
        return {"proposed"};
    case ProtocolSet::both:
        break;
    }
    return {"typical", "proposed"};
}

/// Writes records.csv, cdf_<metric>_<protocol>.csv and summary.txt into
/// `out_dir` (created if missing). Returns the written paths.
inline std::vector<std::filesystem::path> write_results(const CampaignResult& r, const SimConfig& cfg,
                                                        const std::filesystem::path& out_dir)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, const std::string& text) {
        const auto p = out_dir / name;
        auto f = io_detail::open_out(p);
        f << text;
        io_detail::close_out(f, p);
        written.push_back(p);
    };

    emit("records.csv", format_records(r.drops));
    for (const auto& proto : emitted_protocols(cfg.campaign.protocols)) {
        for (const char* m : kMetrics) {
            const std::string key = std::string(m) + "_" + proto;
            if (auto it = r.cdfs.find(key); it != r.cdfs.end())
                emit("cdf_" + key + ".csv", format_cdf(it->second));
        }
    }
    emit("summary.txt", format_summary(r, cfg));
    return written;
}

} // namespace mmexp
