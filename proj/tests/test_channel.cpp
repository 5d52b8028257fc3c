// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>

#include "mmexp/channel.hpp"

using Catch::Approx;
using namespace mmexp;

// Expected path-loss values below were evaluated by hand (Python, float64) from
// the 38.901 closed forms at fc = 28 GHz, h_ap = 10 m, h_ue = 1.5 m.

namespace {

const LinkHeights kHeights{10.0, 1.5};

double d3(double d2d) { return std::hypot(d2d, 8.5); }

} // namespace

TEST_CASE("LoS probability", "[channel]")
{
    const auto umi = default_scenario_params(Scenario::UMi);
    CHECK(los_probability(umi, 0.0) == 1.0);
    CHECK(los_probability(umi, 18.0) == 1.0);
    CHECK(los_probability(umi, 100.0) == Approx(0.23098474969813537).epsilon(1e-12));

    const auto uma = default_scenario_params(Scenario::UMa);
    CHECK(los_probability(uma, 100.0, 1.5) == Approx(0.34767083684423117).epsilon(1e-12));
    CHECK(los_probability(uma, 100.0, 20.0) > los_probability(uma, 100.0, 1.5));

    const auto rma = default_scenario_params(Scenario::RMa);
    CHECK(los_probability(rma, 5.0) == 1.0);
    CHECK(los_probability(rma, 100.0) == Approx(0.9139311852712282).epsilon(1e-12));
}

TEST_CASE("LoS probability is non-increasing in distance", "[channel][property]")
{
    for (Scenario s : kAllScenarios) {
        const auto p = default_scenario_params(s);
        double prev = 1.0;
        for (double d = 0.0; d <= 5000.0; d += 1.0) {
            const double v = los_probability(p, d, 1.5);
            CHECK((v >= 0.0 && v <= 1.0));
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("LoS sampling", "[channel]")
{
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        CHECK(sample_los(1.0, rng));
        CHECK_FALSE(sample_los(0.0, rng));
    }
    int hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        hits += sample_los(0.5, rng) ? 1 : 0;
    CHECK(std::fabs(static_cast<double>(hits) / n - 0.5) < 0.01);

    Rng a(3), b(3);
    for (int i = 0; i < 100; ++i)
        CHECK(sample_los(0.3, a) == sample_los(0.3, b));
}

TEST_CASE("UMi path loss branches", "[channel]")
{
    const auto p = default_scenario_params(Scenario::UMi);
    // worked example: the near-LoS law at d3d = 100 m
    CHECK(p.los_near(100.0, 28.0) == Approx(103.343).margin(5e-4));
    CHECK(path_loss_db(p, true, 100.0, d3(100.0), 28.0, kHeights) == Approx(103.3759888423402).epsilon(1e-12));
    CHECK(path_loss_db(p, false, 100.0, d3(100.0), 28.0, kHeights) == Approx(123.87964873458938).epsilon(1e-12));
    CHECK(path_loss_db(p, true, 2000.0, d3(2000.0), 28.0, kHeights) == Approx(132.09782503607295).epsilon(1e-12));
}

TEST_CASE("UMa path loss branches", "[channel]")
{
    const auto p = default_scenario_params(Scenario::UMa);
    CHECK(path_loss_db(p, true, 100.0, d3(100.0), 28.0, kHeights) == Approx(100.97755209069715).epsilon(1e-12));
    CHECK(path_loss_db(p, false, 100.0, d3(100.0), 28.0, kHeights) == Approx(120.70425237263376).epsilon(1e-12));
    CHECK(path_loss_db(p, true, 2000.0, d3(2000.0), 28.0, kHeights) == Approx(130.92344042053588).epsilon(1e-12));
}

TEST_CASE("RMa path loss branches", "[channel]")
{
    const auto p = default_scenario_params(Scenario::RMa);
    CHECK(path_loss_db(p, true, 100.0, d3(100.0), 28.0, kHeights) == Approx(101.81213038937109).epsilon(1e-12));
    CHECK(path_loss_db(p, false, 100.0, d3(100.0), 28.0, kHeights) == Approx(122.28707191085675).epsilon(1e-12));
    CHECK(path_loss_db(p, true, 9000.0, d3(9000.0), 28.0, kHeights) == Approx(154.1521502005741).epsilon(1e-12));
}

TEST_CASE("free-space reference", "[channel]")
{
    CHECK(free_space_path_loss_db(1.0, 28.0) == Approx(61.34).margin(5e-3));
    CHECK(free_space_path_loss_db(1.0, 28.0) == Approx(32.4 + 20.0 * std::log10(28.0)).epsilon(1e-12));
}

TEST_CASE("path loss monotonicity and NLoS dominance", "[channel][property]")
{
    for (Scenario s : kAllScenarios) {
        const auto p = default_scenario_params(s);
        for (bool los : {true, false}) {
            double prev = 0.0;
            for (double d = 10.0; d <= 4000.0; d *= 1.05) {
                const double pl = path_loss_db(p, los, d, d3(d), 28.0, kHeights);
                CHECK(std::isfinite(pl));
                CHECK(pl > 0.0);
                CHECK(pl >= prev);
                prev = pl;
                if (2 * d <= 4000.0)
                    CHECK(path_loss_db(p, los, 2 * d, d3(2 * d), 28.0, kHeights) > pl);
            }
        }
        for (double d = 10.0; d <= 4000.0; d *= 1.1)
            CHECK(path_loss_db(p, false, d, d3(d), 28.0, kHeights) >= path_loss_db(p, true, d, d3(d), 28.0, kHeights));
    }
}

TEST_CASE("path loss out of model range is flagged", "[channel]")
{
    const auto umi = default_scenario_params(Scenario::UMi);
    CHECK_THROWS_AS(path_loss_db(umi, true, 5.0, d3(5.0), 28.0, kHeights), ModelRangeError);
    CHECK_THROWS_AS(path_loss_db(umi, true, 6000.0, d3(6000.0), 28.0, kHeights), ModelRangeError);
    CHECK_THROWS_AS(path_loss_db(umi, true, 100.0, 0.5, 28.0, kHeights), ModelRangeError);
    CHECK_THROWS_AS(path_loss_db(umi, true, 100.0, d3(100.0), 150.0, kHeights), ModelRangeError);
    const auto rma = default_scenario_params(Scenario::RMa);
    CHECK_THROWS_AS(path_loss_db(rma, true, 100.0, d3(100.0), 39.0, kHeights), ModelRangeError);
    CHECK_THROWS_AS(path_loss_db(rma, false, 7000.0, d3(7000.0), 28.0, kHeights), ModelRangeError);
    CHECK_NOTHROW(path_loss_db(rma, true, 7000.0, d3(7000.0), 28.0, kHeights));
}

TEST_CASE("coefficient table drives the urban forms", "[channel]")
{
    auto p = default_scenario_params(Scenario::UMi);
    const double base = path_loss_db(p, true, 100.0, d3(100.0), 28.0, kHeights);
    p.los_near.intercept += 3.0;
    CHECK(path_loss_db(p, true, 100.0, d3(100.0), 28.0, kHeights) == Approx(base + 3.0));
}

TEST_CASE("noise power", "[channel]")
{
    CHECK(noise_power_dbm(850e6, 7.0, 290.0) == Approx(-77.68099793708518).epsilon(1e-12));
    CHECK(noise_power_dbm(850e6, 7.0, 290.0) == Approx(-77.7).margin(0.05));
    CHECK(noise_power_dbm(1.0, 0.0, 290.0) == Approx(-173.98).margin(5e-3));
    CHECK(noise_power_dbm(2e6, 7.0) - noise_power_dbm(1e6, 7.0) == Approx(3.0103).margin(1e-4));
    CHECK_THROWS_AS(noise_power_dbm(0.0, 7.0), ConfigError);
}

TEST_CASE("SNR", "[channel]")
{
    CHECK(snr_db(62.12, 103.34, 0.0, -77.7) == Approx(36.48).margin(1e-9));
    CHECK(snr_db(62.12, 113.34, 0.0, -77.7) == Approx(snr_db(62.12, 103.34, 0.0, -77.7) - 10.0));
    CHECK(snr_db(-10.0, 80.0, 0.0, -90.0) == 0.0);
}

TEST_CASE("Shannon rate", "[channel]")
{
    CHECK(shannon_rate_bps(850e6, -10.0) / 1e9 == Approx(0.1169).margin(1e-4));
    CHECK(shannon_rate_bps(850e6, 0.0) == Approx(850e6).epsilon(1e-12));
    CHECK(shannon_rate_bps(850e6, -std::numeric_limits<double>::infinity()) == 0.0);
    CHECK_THROWS_AS(shannon_rate_bps(-1.0, 3.0), ConfigError);

    double prev = -1.0;
    for (double s = -30.0; s <= 40.0; s += 0.25) {
        const double r = shannon_rate_bps(850e6, s);
        CHECK(r > prev);
        CHECK(shannon_rate_bps(2 * 850e6, s) == Approx(2 * r).epsilon(1e-12));
        prev = r;
    }
}

TEST_CASE("scenario names", "[channel]")
{
    CHECK(parse_scenario("umi") == Scenario::UMi);
    CHECK(parse_scenario("uma") == Scenario::UMa);
    CHECK(parse_scenario("rma") == Scenario::RMa);
    CHECK_FALSE(parse_scenario("UMi").has_value());
}
