#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "vrrw/cli.hpp"
#include "vrrw/io.hpp"

using namespace vrrw;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
    fs::path p = fs::path(::testing::TempDir()) / "vrrw_cli_test";
    fs::create_directories(p);
    return (p / name).string();
}

} // namespace

TEST(Io, SeedLists) {
    EXPECT_EQ(parse_seed_list("7"), (std::vector<uint64_t>{7}));
    EXPECT_EQ(parse_seed_list("1..3,9"), (std::vector<uint64_t>{1, 2, 3, 9}));
    EXPECT_EQ(parse_seed_list("1..1000").size(), 1000u);
    EXPECT_THROW(parse_seed_list("5..1"), std::invalid_argument);
    EXPECT_THROW(parse_seed_list(""), std::invalid_argument);
    EXPECT_THROW(parse_seed_list("a"), std::invalid_argument);
}

TEST(Io, SweepAndWindow) {
    auto s = parse_sweep("0.45:0.55:11");
    ASSERT_EQ(s.size(), 11u);
    EXPECT_DOUBLE_EQ(s.front(), 0.45);
    EXPECT_DOUBLE_EQ(s.back(), 0.55);
    EXPECT_NEAR(s[5], 0.5, 1e-15);
    EXPECT_THROW(parse_sweep("0.4:0.6"), std::invalid_argument);
    EXPECT_EQ(parse_window("-8:8"), (std::pair<int64_t, int64_t>{-8, 8}));
    EXPECT_THROW(parse_window("3:1"), std::invalid_argument);
}

TEST(Io, AtomicWriteCreatesDirectoriesAndReplaces) {
    std::string p = tmp("nested/dir/file.txt");
    write_file_atomic(p, "one");
    write_file_atomic(p, "two");
    EXPECT_EQ(read_file(p), "two");
    for (const auto& e : fs::directory_iterator(fs::path(p).parent_path()))
        EXPECT_EQ(e.path().filename(), "file.txt");
}

TEST(Cli, NoSubcommandIsValidationError) {
    EXPECT_EQ(cli({}).code, kExitValidation);
    EXPECT_EQ(cli({"frobnicate"}).code, kExitValidation);
}

TEST(Cli, HelpListsFlagsWithDefaults) {
    for (const char* sub : {"index", "simulate", "couple", "profile", "verify", "campaign"}) {
        Result r = cli({sub, "--help"});
        EXPECT_EQ(r.code, kExitOk) << sub;
        EXPECT_NE(r.out.find("--"), std::string::npos) << sub;
    }
    Result s = cli({"simulate", "--help"});
    for (const char* flag : {"--weight", "--kind", "--steps", "--seed", "--initial", "--probes",
                             "--epsilon", "--gamma", "--L", "--csv", "--ledger"})
        EXPECT_NE(s.out.find(flag), std::string::npos) << flag;
    EXPECT_NE(s.out.find("[1000000]"), std::string::npos);
    EXPECT_NE(s.out.find("(steps)"), std::string::npos);
}

TEST(Cli, AllValidationErrorsListedAtOnce) {
    Result r = cli({"simulate", "--weight", "nope", "--kind", "sideways", "--steps", "-1",
                    "--gamma", "2"});
    EXPECT_EQ(r.code, kExitValidation);
    for (const char* flag : {"--weight", "--kind", "--steps", "--gamma"})
        EXPECT_NE(r.err.find(flag), std::string::npos) << flag << "\n" << r.err;
}

TEST(Cli, RuntimeFailureExitsOne) {
    // Bounded W has no operator calculus: a runtime, not a validation, failure.
    Result r = cli({"index", "--weight", "power:2", "--eta", "0.5"});
    EXPECT_EQ(r.code, kExitRuntime);
    EXPECT_NE(r.err.find("bounded"), std::string::npos);
}

TEST(Cli, IndexPolyLogSweep) {
    Result r = cli({"index", "--weight", "polylog:0.6", "--eta-sweep", "0.45:0.55:11"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["i_minus"], 3);
    EXPECT_EQ(j["i_plus"], 3);
}

TEST(Cli, SimulateIsReproducible) {
    std::vector<std::string> a{"simulate", "--weight", "linear:1", "--kind", "vrrw",
                               "--steps", "1000000", "--seed", "7",
                               "--csv", tmp("a.csv"), "--ledger", tmp("a.json")};
    std::vector<std::string> b{"simulate", "--weight", "linear:1", "--kind", "vrrw",
                               "--steps", "1000000", "--seed", "7",
                               "--csv", tmp("b.csv"), "--ledger", tmp("b.json")};
    ASSERT_EQ(cli(a).code, kExitOk);
    ASSERT_EQ(cli(b).code, kExitOk);
    EXPECT_EQ(read_file(tmp("a.csv")), read_file(tmp("b.csv")));
    EXPECT_EQ(read_file(tmp("a.json")), read_file(tmp("b.json")));
    auto j = nlohmann::json::parse(read_file(tmp("a.json")));
    EXPECT_EQ(j["time"], 1000000);
}

TEST(Cli, SimulateFromInitialLedger) {
    write_file_atomic(tmp("init.json"), R"({"z": {"0": 3, "1": 2}, "n": {"0": 2}})");
    Result r = cli({"simulate", "--weight", "linear:1", "--steps", "0", "--initial",
                    tmp("init.json"), "--ledger", tmp("init_out.json"), "--csv",
                    tmp("init_out.csv")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = nlohmann::json::parse(read_file(tmp("init_out.json")));
    EXPECT_EQ(j["state"]["z"]["0"], 4);
}

TEST(Cli, CoupleTildeReflectedZeroViolations) {
    Result r = cli({"couple", "--left", "tilde", "--right", "reflected", "--weight",
                    "polylog:0.6", "--seeds", "1..1000", "--steps", "10000"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["violations"], 0);
    EXPECT_EQ(j["runs_compared"], 1000);
}

TEST(Cli, CoupleReplay) {
    Result r = cli({"couple", "--weight", "linear:1", "--left", "tilde", "--replay-seed", "5",
                    "--replay-step", "40"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["time"], 40);
    Result bad = cli({"couple", "--weight", "linear:1", "--replay-seed", "5"});
    EXPECT_EQ(bad.code, kExitValidation);
}

TEST(Cli, VerifyChecks) {
    Result id = cli({"verify", "--weight", "linear:1", "--seeds", "1..3", "--steps", "20000"});
    ASSERT_EQ(id.code, kExitOk) << id.err;
    EXPECT_LE(nlohmann::json::parse(id.out)["max_residual"].get<double>(), 1e-8);
    Result tv = cli({"verify", "--check", "tv", "--kind", "vrrw", "--weight", "linear:1",
                     "--seeds", "1..2000", "--steps", "4"});
    ASSERT_EQ(tv.code, kExitOk) << tv.err;
    Result bad = cli({"verify", "--check", "tv", "--weight", "linear:1", "--steps", "20"});
    EXPECT_EQ(bad.code, kExitValidation);
}

TEST(Cli, CampaignFlagOverridesConfigWithWarning) {
    std::string cfg = tmp("camp.json");
    write_file_atomic(cfg, R"({"version": 1, "weights": ["linear:1"], "kinds": ["vrrw"],
        "seeds": "1..2", "horizons": [10000], "index_band": false,
        "output_dir": ")" + tmp("camp_cfg_dir") + R"("})");
    Result r = cli({"campaign", "--config", cfg, "--output-dir", tmp("camp_flag_dir"),
                    "--threads", "1"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.err.find("warning: --output-dir overrides"), std::string::npos);
    EXPECT_TRUE(fs::exists(tmp("camp_flag_dir") + "/report.json"));
    EXPECT_FALSE(fs::exists(tmp("camp_cfg_dir")));
}

TEST(Cli, CampaignConfigErrorsAllListed) {
    std::string cfg = tmp("bad.json");
    write_file_atomic(cfg, R"({"version": 2, "weights": [], "kinds": [], "extra": 1})");
    Result r = cli({"campaign", "--config", cfg});
    EXPECT_EQ(r.code, kExitValidation);
    for (const char* key : {"version", "weights", "kinds", "extra", "seeds", "horizons"})
        EXPECT_NE(r.err.find(key), std::string::npos) << key << "\n" << r.err;
}
