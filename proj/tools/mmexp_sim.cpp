// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: loads a scenario config, runs the Monte-Carlo
// campaign and writes records.csv, cdf_*.csv and summary.txt.

#include <cstdlib>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "mmexp/config.hpp"
#include "mmexp/simengine.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

std::pair<std::string, std::string> split_assignment(const std::string& kv)
{
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
        throw mmexp::ConfigError("--set expects key=value, got '" + kv + "'");
    return {kv.substr(0, eq), kv.substr(eq + 1)};
}

void print_summary(const mmexp::CampaignResult& r, const mmexp::SimConfig& cfg, const std::string& out_dir)
{
    const auto& s = r.summary;
    std::cout << "scenario " << mmexp::to_string(cfg.scenario.name) << ", " << r.drops.size() << " drop(s), "
              << s.records << " UE records\n"
              << "  fallback fraction          " << s.fallback_fraction << "\n"
              << "  PD above limit  typical    " << s.above_limit_typical << "\n"
              << "  PD above limit  proposed   " << s.above_limit_proposed << "\n"
              << "  rate > 5 Gbps   typical    " << s.above_5gbps_typical << "\n"
              << "  rate > 5 Gbps   proposed   " << s.above_5gbps_proposed << "\n"
              << "  serving AP differs         " << s.differing_serving << " record(s)\n"
              << "results written to " << out_dir << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Downlink mmWave association simulator with RF-exposure constrained AP selection"};

    std::string config_path;
    std::string scenario;
    std::size_t drops = 0;
    std::uint64_t seed = 0;
    std::string protocol;
    std::string out_dir;
    std::size_t threads = 0;
    std::vector<std::string> sets;
    bool print_config = false;

    app.add_option("--config", config_path, "Scenario config file (INI-style)")->check(CLI::ExistingFile);
    app.add_option("--scenario", scenario, "Path-loss scenario")->check(CLI::IsMember({"rma", "uma", "umi"}));
    app.add_option("--drops", drops, "Number of Monte-Carlo drops")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--protocol", protocol, "CDF families to emit")
        ->check(CLI::IsMember({"typical", "proposed", "both"}));
    app.add_option("--out", out_dir, "Output directory (default: $MMEXP_OUT_DIR or ./results)");
    app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
    app.add_option("--set", sets, "Override a config key, e.g. --set protocol.pd_limit_w_m2=5")->take_all();
    app.add_flag("--print-config", print_config, "Print the resolved config and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    mmexp::SimConfig cfg;
    try {
        mmexp::SimConfig base;
        if (const char* env = std::getenv("MMEXP_OUT_DIR"); env && *env)
            base.campaign.out_dir = env;

        std::vector<std::pair<std::string, std::string>> overrides;
        for (const auto& kv : sets)
            overrides.push_back(split_assignment(kv));
        if (!scenario.empty())
            overrides.emplace_back("scenario.name", scenario);
        if (app.count("--drops"))
            overrides.emplace_back("campaign.n_drops", std::to_string(drops));
        if (app.count("--seed"))
            overrides.emplace_back("campaign.master_seed", std::to_string(seed));
        if (!protocol.empty())
            overrides.emplace_back("campaign.protocols", protocol);
        if (!out_dir.empty())
            overrides.emplace_back("campaign.out_dir", out_dir);
        if (app.count("--threads"))
            overrides.emplace_back("campaign.threads", std::to_string(threads));

        cfg = mmexp::load_config(config_path, overrides, base);
    } catch (const mmexp::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (print_config) {
        std::cout << mmexp::echo_config(cfg);
        return EXIT_SUCCESS;
    }

    try {
        const auto result = mmexp::run_campaign(cfg, cfg.campaign.n_drops);
        mmexp::write_results(result, cfg, cfg.campaign.out_dir);
        print_summary(result, cfg, cfg.campaign.out_dir);
    } catch (const mmexp::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return EXIT_SUCCESS;
}
