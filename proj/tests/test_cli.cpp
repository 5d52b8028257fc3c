// SPDX-License-Identifier: Apache-2.0
//
// Drives the mmexp_sim executable end to end.

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int status = -1;
    std::string output;
};

RunResult run(const std::string& args, const std::string& env = {})
{
    const auto log = fs::temp_directory_path() / "mmexp_cli_output.txt";
    const std::string cmd = env + " " + std::string(MMEXP_SIM_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream f(log);
    std::ostringstream ss;
    ss << f.rdbuf();
    r.output = ss.str();
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    auto p = fs::temp_directory_path() / "mmexp_test_cli" / name;
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("deterministic file set for a fixed seed", "[cli]")
{
    const auto a = scratch("a");
    const auto b = scratch("b");
    const auto ra = run("--scenario umi --drops 1 --seed 7 --out " + a.string());
    REQUIRE(ra.status == 0);
    CHECK_THAT(ra.output, ContainsSubstring("570 UE records"));
    REQUIRE(run("--scenario umi --drops 1 --seed 7 --threads 2 --out " + b.string()).status == 0);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        ++files;
        if (entry.path().filename() == "summary.txt")
            continue; // echoes out_dir and thread count, which differ here
        CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    }
    CHECK(files == 8);
    auto strip = [](std::string text) {
        std::string kept;
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);)
            if (line.rfind("out_dir", 0) != 0 && line.rfind("threads", 0) != 0)
                kept += line + "\n";
        return kept;
    };
    CHECK(strip(slurp(a / "summary.txt")) == strip(slurp(b / "summary.txt")));
}

TEST_CASE("--protocol both emits both CDF families", "[cli]")
{
    const auto d = scratch("both");
    REQUIRE(run("--drops 1 --set layout.rings=0 --protocol both --out " + d.string()).status == 0);
    for (const char* m : {"rate", "pd", "sar"}) {
        CHECK(fs::exists(d / (std::string("cdf_") + m + "_typical.csv")));
        CHECK(fs::exists(d / (std::string("cdf_") + m + "_proposed.csv")));
    }

    const auto p = scratch("proposed");
    REQUIRE(run("--drops 1 --set layout.rings=0 --protocol proposed --out " + p.string()).status == 0);
    CHECK(fs::exists(p / "cdf_pd_proposed.csv"));
    CHECK_FALSE(fs::exists(p / "cdf_pd_typical.csv"));
}

TEST_CASE("invalid scenario exits 2 and lists the valid names", "[cli]")
{
    const auto r = run("--scenario suburban --drops 1");
    CHECK(r.status == 2);
    CHECK_THAT(r.output, ContainsSubstring("rma"));
    CHECK_THAT(r.output, ContainsSubstring("uma"));
    CHECK_THAT(r.output, ContainsSubstring("umi"));
}

TEST_CASE("configuration errors exit 2", "[cli]")
{
    CHECK(run("--set radio.bandwidth_hz=-1 --drops 1").status == 2);
    CHECK(run("--set radio.nosuch=1 --drops 1").status == 2);
    CHECK(run("--set novalue --drops 1").status == 2);
    CHECK(run("--config /nonexistent/file.ini").status == 2);

    const auto dir = scratch("badcfg");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.ini") << "[radio]\nfc_ghz 28\n";
    const auto r = run("--config " + (dir / "bad.ini").string());
    CHECK(r.status == 2);
    CHECK_THAT(r.output, ContainsSubstring("bad.ini:2:"));
}

TEST_CASE("runtime errors exit 1", "[cli]")
{
    // valid config, but UEs dropped closer than the path-loss model's 10 m lower bound
    const auto r = run("--drops 1 --set layout.min_drop_dist_m=1 --out " + scratch("rt").string());
    CHECK(r.status == 1);
    CHECK_THAT(r.output, ContainsSubstring("drop 0"));
}

TEST_CASE("config file, --set and environment default out dir", "[cli]")
{
    const auto dir = scratch("cfgfile");
    fs::create_directories(dir);
    std::ofstream(dir / "run.ini") << "[layout]\nrings = 0\n[campaign]\nn_drops = 2\n";
    const auto out = dir / "from_env";
    const auto r = run("--config " + (dir / "run.ini").string() + " --set protocol.pd_limit_w_m2=5",
                       "MMEXP_OUT_DIR=" + out.string());
    REQUIRE(r.status == 0);
    CHECK_THAT(r.output, ContainsSubstring("60 UE records"));
    const auto summary = slurp(out / "summary.txt");
    CHECK_THAT(summary, ContainsSubstring("pd_limit_w_m2 = 5"));
    CHECK_THAT(summary, ContainsSubstring("rings = 0"));

    // summary echo is itself a valid config that reproduces the run
    const auto again = dir / "again";
    REQUIRE(run("--config " + (out / "summary.txt").string() + " --out " + again.string()).status == 0);
    CHECK(slurp(out / "records.csv") == slurp(again / "records.csv"));
}

TEST_CASE("--print-config echoes the resolved config", "[cli]")
{
    const auto r = run("--print-config --scenario rma --seed 3");
    REQUIRE(r.status == 0);
    CHECK_THAT(r.output, ContainsSubstring("name = rma"));
    CHECK_THAT(r.output, ContainsSubstring("master_seed = 3"));
}
