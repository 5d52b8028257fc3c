// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmexp/errors.hpp"

namespace mmexp {

/// What a UE knows about one surrounding sector when it (re)selects.
struct CandidateRecord {
    std::size_t sector_id = 0;
    double rx_power_dbm = 0.0;
    double rate_bps = 0.0;
    double pd_w_m2 = 0.0;
    double sar_w_kg = 0.0;
};

enum class Protocol { typical, proposed };

inline constexpr std::string_view to_string(Protocol p) { return p == Protocol::typical ? "typical" : "proposed"; }

struct SelectionOutcome {
    std::size_t serving_sector = 0;
    std::size_t serving_index = 0; ///< position of the serving sector in the candidate list
    std::vector<std::size_t> compliant_set;
    bool fallback_used = false;
    Protocol protocol = Protocol::typical;

    friend bool operator==(const SelectionOutcome&, const SelectionOutcome&) = default;
};

struct GuidelineConfig {
    double pd_limit_w_m2 = 10.0;
    std::size_t reevaluation_period = 1; ///< epochs between PD re-measurements
};

inline void validate(const GuidelineConfig& g)
{
    if (!(g.pd_limit_w_m2 > 0.0) || !std::isfinite(g.pd_limit_w_m2))
        throw ConfigError("protocol.pd_limit_w_m2 must be positive, got " + std::to_string(g.pd_limit_w_m2));
    if (g.reevaluation_period < 1)
        throw ConfigError("protocol.reevaluation_period must be >= 1");
}

namespace detail {

// Index of the best candidate under `better`, restricted to `eligible`.
// Equal keys resolve to the lowest sector id.
template <typename Key, typename Eligible>
std::optional<std::size_t> best_candidate(std::span<const CandidateRecord> cands, Key key, bool maximize,
                                          Eligible eligible)
{
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (!eligible(cands[i]))
            continue;
        if (!best) {
            best = i;
            continue;
        }
        const double k = key(cands[i]);
        const double kb = key(cands[*best]);
        const bool wins = maximize ? k > kb : k < kb;
        if (wins || (k == kb && cands[i].sector_id < cands[*best].sector_id))
            best = i;
    }
    return best;
}

inline std::vector<std::size_t> compliant_sectors(std::span<const CandidateRecord> cands, double limit)
{
    std::vector<std::size_t> ids;
    for (const auto& c : cands)
        if (c.pd_w_m2 <= limit)
            ids.push_back(c.sector_id);
    return ids;
}

} // namespace detail

/// Strongest received signal; ties go to the lowest sector id.
/// The compliant set is filled against `pd_limit_w_m2` for reporting only.
inline SelectionOutcome select_typical(std::span<const CandidateRecord> cands, double pd_limit_w_m2 = 10.0)
{
    if (cands.empty())
        throw SelectionError("select_typical: empty candidate list");
    const auto idx = detail::best_candidate(
        cands, [](const CandidateRecord& c) { return c.rx_power_dbm; }, true, [](const auto&) { return true; });
    SelectionOutcome out;
    out.protocol = Protocol::typical;
    out.serving_index = *idx;
    out.serving_sector = cands[*idx].sector_id;
    out.compliant_set = detail::compliant_sectors(cands, pd_limit_w_m2);
    return out;
}

/// Highest rate among candidates whose PD is within the guideline. When none
/// is compliant, the minimum-PD candidate serves and `fallback_used` is set.
inline SelectionOutcome select_proposed(std::span<const CandidateRecord> cands, const GuidelineConfig& guideline)
{
    if (cands.empty())
        throw SelectionError("select_proposed: empty candidate list");
    const double limit = guideline.pd_limit_w_m2;

    SelectionOutcome out;
    out.protocol = Protocol::proposed;
    out.compliant_set = detail::compliant_sectors(cands, limit);

    auto idx = detail::best_candidate(
        cands, [](const CandidateRecord& c) { return c.rate_bps; }, true,
        [limit](const CandidateRecord& c) { return c.pd_w_m2 <= limit; });
    if (!idx) {
        idx = detail::best_candidate(
            cands, [](const CandidateRecord& c) { return c.pd_w_m2; }, false, [](const auto&) { return true; });
        out.fallback_used = true;
    }
    out.serving_index = *idx;
    out.serving_sector = cands[*idx].sector_id;
    return out;
}

struct ProtocolComparison {
    SelectionOutcome typical;
    SelectionOutcome proposed;
};

inline ProtocolComparison compare_protocols(std::span<const CandidateRecord> cands, const GuidelineConfig& guideline)
{
    return {select_typical(cands, guideline.pd_limit_w_m2), select_proposed(cands, guideline)};
}

/// Returns the candidate snapshot observed at a given epoch.
using CandidateRefresh = std::function<std::vector<CandidateRecord>(std::size_t epoch)>;

/// Timeout-driven re-evaluation for one UE.
///
/// The UE attaches by strongest signal before epoch 0; epoch 0 is the first
/// PD re-evaluation and replaces that attachment. At every epoch that is a
/// multiple of the re-evaluation period the candidates are refreshed and the
/// proposed selection re-runs; in between, the serving sector is held.
inline std::vector<SelectionOutcome> run_epochs(std::size_t epochs, const GuidelineConfig& guideline,
                                                const CandidateRefresh& refresh)
{
    validate(guideline);
    std::vector<SelectionOutcome> history;
    history.reserve(epochs);
    for (std::size_t e = 0; e < epochs; ++e) {
        if (e % guideline.reevaluation_period == 0) {
            const auto cands = refresh(e);
            history.push_back(select_proposed(cands, guideline));
        } else {
            history.push_back(history.back());
        }
    }
    return history;
}

} // namespace mmexp
