#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "weaklab/cli.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "weaklab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = weaklab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path data_dir() {
    fs::path dir = WEAKLAB_TEST_DATA_DIR;
    fs::create_directories(dir);
    return dir;
}

// Indicator of the level-2 cube [1/4, 1/2) on J=0, L=4: cells 4..7.
std::string write_indicator_csv() {
    const fs::path p = data_dir() / "indicator.csv";
    std::ofstream out(p);
    for (int i = 0; i < 16; ++i) out << (i >= 4 && i < 8 ? 1 : 0) << '\n';
    return p.string();
}

}  // namespace

TEST(Cli, ConstantsOnUnitWeight) {
    const Result r = invoke({"constants", "--weight", "const:c=1", "--kind", "Ap", "--p", "2", "--J", "0", "--L", "8"});
    ASSERT_EQ(r.code, weaklab::cli::kExitOk) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["command"], "constants");
    EXPECT_DOUBLE_EQ(j["report"]["value"].get<double>(), 1.0);
    EXPECT_EQ(j["grid"]["cells"], 256);
}

TEST(Cli, ConstantsCsv) {
    const Result r = invoke({"constants", "--weight", "const:c=3", "--kind", "A1", "--J", "0", "--L", "3", "--format", "csv"});
    ASSERT_EQ(r.code, weaklab::cli::kExitOk);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "level,value,cube_index");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 4);
}

TEST(Cli, SharpnessA1Ratios) {
    const Result r = invoke({"sharpness-a1", "--deltas", "0.5,0.25"});
    ASSERT_EQ(r.code, weaklab::cli::kExitOk) << r.err;
    const json j = json::parse(r.out);
    const auto& rows = j["sweep"]["rows"];
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NEAR(rows[0]["ratio"].get<double>(), 2.0, 1e-12);
    EXPECT_NEAR(rows[1]["ratio"].get<double>(), 4.0, 1e-12);
}

TEST(Cli, SharpnessProductHoldsLowerBound) {
    const Result r = invoke({"sharpness-product", "--alphas", "0.5,1", "--deltas", "0.5,0.25,0.125"});
    ASSERT_EQ(r.code, weaklab::cli::kExitOk) << r.err;
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["sweep"]["lower_bound_holds"].get<bool>());
    EXPECT_EQ(j["sweep"]["rows"].size(), 6u);
}

TEST(Cli, CzdOnIndicator) {
    const std::string f = write_indicator_csv();
    const fs::path g = data_dir() / "good.csv";
    const Result r = invoke({"czd", "--f", f, "--v", "const:c=1", "--height", "0.75", "--g-out", g.string()});
    ASSERT_EQ(r.code, weaklab::cli::kExitOk) << r.err << r.out;
    const json j = json::parse(r.out);
    ASSERT_EQ(j["decomposition"]["cubes"].size(), 1u);
    EXPECT_EQ(j["decomposition"]["cubes"][0]["level"], 2);
    EXPECT_EQ(j["decomposition"]["cubes"][0]["index"], 1);
    EXPECT_TRUE(j["verify"]["passed"].get<bool>());
    EXPECT_TRUE(fs::exists(g));
}

TEST(Cli, MaximalCsvRows) {
    const std::string f = write_indicator_csv();
    const Result r = invoke({"maximal", "--f", f, "--format", "csv"});
    ASSERT_EQ(r.code, weaklab::cli::kExitOk) << r.err;
    std::istringstream in(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 16);
}

TEST(Cli, WeaknormAndLemma) {
    const std::string f = write_indicator_csv();
    Result r = invoke({"weaknorm", "--f", f, "--u", "const:c=1", "--v", "const:c=1"});
    ASSERT_EQ(r.code, weaklab::cli::kExitOk) << r.err;
    EXPECT_GT(json::parse(r.out)["report"]["ratio"].get<double>(), 0.0);

    r = invoke({"lemma-check", "--v", "const:c=2", "--p-grid", "1.5,2,4", "--L", "4"});
    EXPECT_EQ(r.code, weaklab::cli::kExitOk) << r.err;
}

TEST(Cli, ExitCodes) {
    Result r = invoke({"constants", "--weight", "bogus:x=1"});
    EXPECT_EQ(r.code, weaklab::cli::kExitUsage);
    EXPECT_NE(r.err.find("'bogus:x=1'"), std::string::npos) << r.err;

    r = invoke({"constants", "--weight", "prod:(const:c=1;step:alpha=1)"});
    EXPECT_EQ(r.code, weaklab::cli::kExitUsage);
    EXPECT_NE(r.err.find(";step:alpha=1"), std::string::npos) << r.err;

    r = invoke({"no-such-command"});
    EXPECT_EQ(r.code, weaklab::cli::kExitUsage);

    r = invoke({"constants"});
    EXPECT_EQ(r.code, weaklab::cli::kExitUsage);

    r = invoke({"czd", "--f", (data_dir() / "missing.csv").string(), "--v", "const:c=1", "--height", "1"});
    EXPECT_EQ(r.code, weaklab::cli::kExitUsage);

    r = invoke({"constants", "--weight", "power:delta=0.5", "--kind", "AinfFW"});
    EXPECT_EQ(r.code, weaklab::cli::kExitUsage);
}

TEST(Cli, HelpExitsZero) {
    const Result r = invoke({"--help"});
    EXPECT_EQ(r.code, weaklab::cli::kExitOk);
    EXPECT_NE(r.out.find("sawyer-verify"), std::string::npos);
}

TEST(Cli, OutputIsReproducible) {
    const std::vector<std::string> args{"bound-audit", "--v", "step:alpha=0.5", "--p", "1", "--J", "0", "--L", "6",
                                        "--seed", "7"};
    const Result a = invoke(args);
    const Result b = invoke(args);
    EXPECT_NE(a.code, weaklab::cli::kExitUsage) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.code, b.code);
}
