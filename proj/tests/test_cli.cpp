#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "svoltails/cli.hpp"

using namespace svt;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "svoltails");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') rows.push_back(line);
    return rows;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    return cells;
}

std::map<std::string, double> constants_table(const std::string& text) {
    std::map<std::string, double> m;
    auto rows = data_lines(text);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        auto c = split(rows[i]);
        m[c[0]] = std::stod(c[1]);
    }
    return m;
}

}  // namespace

TEST(Cli, ConstantsForZeroDrift) {
    Result r = run({"constants", "--model", "heston", "--a", "1", "--b", "0", "--c", "1", "--y0", "1", "--t", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(data_lines(r.out).front(), "name,value");
    EXPECT_NE(r.out.find("C,4.93480220054467"), std::string::npos);
    auto m = constants_table(r.out);
    EXPECT_NEAR(m.at("C"), M_PI * M_PI / 2, 1e-15);
    EXPECT_NEAR(m.at("p_lo") + m.at("p_hi"), 1.0, 1e-15);
    EXPECT_EQ(r.out.rfind("# svoltails 0.1.0", 0), 0u);
}

TEST(Cli, ConstantsSteinZeroMean) {
    Result r = run({"constants", "--model", "stein_stein", "--m", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto m = constants_table(r.out);
    EXPECT_EQ(m.at("alpha3"), 0.0);
    EXPECT_EQ(m.at("alpha4"), 0.0);
    EXPECT_EQ(m.at("alpha5"), 0.0);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"constants", "--b", "1"}).code, 2);
    EXPECT_EQ(run({"constants", "--model", "sabr"}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"constants", "--t", "abc"}).code, 2);
    EXPECT_EQ(run({"constants", "--t", "-1"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    Result v = run({"--version"});
    EXPECT_EQ(v.code, 0);
    EXPECT_EQ(v.out, "svoltails 0.1.0\n");
    EXPECT_NE(run({"constants", "--b", "1"}).err.find("invalid input"), std::string::npos);
}

TEST(Cli, MixingDensityColumnsAndMass) {
    Result r = run({"density", "--model", "heston", "--b", "0", "--grid-min", "6", "--grid-max", "12", "--grid-count", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = data_lines(r.out);
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0], "x_or_y,exact,asymptotic,ratio");
    double first = std::stod(split(rows[1])[3]), last = std::stod(split(rows[4])[3]);
    EXPECT_LT(std::abs(last - 1), std::abs(first - 1));
    auto pos = r.out.find("# total_mass=");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_NEAR(std::stod(r.out.substr(pos + 13)), 1.0, 1e-3);
}

TEST(Cli, StockDensity) {
    Result r = run({"density", "--density", "stock", "--grid-min", "0.05", "--grid-max", "20", "--grid-count", "5",
                    "--grid-spacing", "log"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = data_lines(r.out);
    ASSERT_EQ(rows.size(), 6u);
    // x = 0.05 and x = 20 are symmetric partners
    auto lo = split(rows[1]), hi = split(rows[5]);
    EXPECT_NEAR(std::stod(lo[1]) / (8000.0 * std::stod(hi[1])), 1.0, 1e-6);
}

TEST(Cli, Deterministic) {
    std::vector<std::string> args = {"density", "--model", "stein_stein", "--grid-count", "6"};
    EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, SmileSymmetry) {
    Result r = run({"smile", "--grid-min", "-3", "--grid-max", "3", "--grid-count", "7"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = data_lines(r.out);
    ASSERT_EQ(rows.size(), 8u);
    EXPECT_EQ(rows[0], "k,implied_vol,asymptotic,flagged_tail");
    for (int i = 1; i <= 3; ++i)
        EXPECT_NEAR(std::stod(split(rows[i])[1]), std::stod(split(rows[8 - i])[1]), 1e-5);
    EXPECT_EQ(split(rows[4])[2], "nan");
}

TEST(Cli, ConfigFileAndOverride) {
    auto dir = std::filesystem::temp_directory_path();
    auto cfg = dir / "svoltails_test.ini";
    auto out = dir / "svoltails_test.csv";
    {
        std::ofstream f(cfg);
        f << "model=heston\nb=0\nc=1\nt=1\ny0=1\n";
    }
    Result r = run({"constants", "--config", cfg.string(), "--out", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(out);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_NEAR(constants_table(text).at("C"), M_PI * M_PI / 2, 1e-15);

    Result o = run({"constants", "--config", cfg.string(), "--c", "2"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NEAR(constants_table(o.out).at("C"), M_PI * M_PI / 8, 1e-15);
    std::filesystem::remove(cfg);
    std::filesystem::remove(out);
}

TEST(Cli, ValidatePassesOnDefaults) {
    Result r = run({"validate"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    auto rows = data_lines(r.out);
    EXPECT_EQ(rows[0], "check,statistic,threshold,status");
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(split(rows[i])[3], "pass") << rows[i];
    EXPECT_NE(r.out.find("# paths=100000"), std::string::npos);
}

TEST(Cli, ValidateDetectsCorruptedConstant) {
    Result r = run({"validate", "--paths", "20000", "--steps", "128", "--corrupt-constant", "C"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("validation failed"), std::string::npos);
    EXPECT_NE(r.out.find(",fail"), std::string::npos);
}
