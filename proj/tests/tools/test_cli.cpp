#include "cli.hpp"

#include "coda/csv.hpp"
#include "coda/io.hpp"

#include "oracles.hpp"
#include "temp_dir.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace coda {
namespace {

using testing::slurp;
using testing::TempDir;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const char* kToy = "a,b\n1,1\n1,7.38905609893065\n";  // second row: b = e^2

std::string four_part_csv() {
    std::mt19937_64 rng(91);
    const auto x = testing::random_positive(rng, 15, 4);
    std::string text = "A,B,C,D\n";
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) text += (j ? "," : "") + format_double(x(i, j));
        text += "\n";
    }
    return text;
}

TEST(CliVariance, ToyTotalIsQuarter) {
    TempDir dir;
    const auto input = dir.write("toy.csv", kToy);
    const auto r = cli({"variance", "--input", input, "--out-dir", dir / "out"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = Json::parse(slurp(dir / "out/variance.json"));
    EXPECT_NEAR(doc["clr"]["total"].get<double>(), 0.25, 1e-12);
    EXPECT_NEAR(doc["pairs"]["total"].get<double>(), 0.25, 1e-12);
    EXPECT_EQ(doc["pairs"]["n_pairs"], 1);
    EXPECT_NE(r.out.find("wrote " + (dir / "out/variance.json")), std::string::npos);
}

TEST(CliVariance, ConstantDataWarns) {
    TempDir dir;
    const auto input = dir.write("c.csv", "a,b,c\n1,2,3\n2,4,6\n10,20,30\n");
    const auto r = cli({"variance", "--input", input, "--out-dir", dir / "out"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
    EXPECT_EQ(Json::parse(slurp(dir / "out/variance.json"))["clr"]["total"].get<double>(), 0.0);
}

TEST(CliVariance, ClosureDoesNotChangeTotal) {
    TempDir dir;
    const auto input = dir.write("x.csv", four_part_csv());
    ASSERT_EQ(cli({"variance", "--input", input, "--out-dir", dir / "one"}).code, 0);
    ASSERT_EQ(cli({"variance", "--input", input, "--closure", "100", "--out-dir", dir / "hundred"}).code, 0);
    const double a = Json::parse(slurp(dir / "one/variance.json"))["clr"]["total"];
    const double b = Json::parse(slurp(dir / "hundred/variance.json"))["clr"]["total"];
    EXPECT_NEAR(a, b, 1e-12 * a);
}

TEST(CliErrors, ParseErrorsExitTwoWithPosition) {
    TempDir dir;
    const auto input = dir.write("bad.csv", "a,b\n1,2\n3,x\n");
    const auto r = cli({"variance", "--input", input, "--out-dir", dir / "out"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("row 3, column 2"), std::string::npos);
}

TEST(CliErrors, AllZeroColumnNamed) {
    TempDir dir;
    const auto input = dir.write("z.csv", "a,ghost\n1,0\n2,0\n");
    const auto r = cli({"variance", "--input", input, "--out-dir", dir / "out"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("ghost"), std::string::npos);
}

TEST(CliErrors, DegenerateOrdinationExitsThree) {
    TempDir dir;
    const auto input = dir.write("c.csv", "a,b,c\n1,2,3\n2,4,6\n");
    EXPECT_EQ(cli({"ordinate", "--input", input, "--out-dir", dir / "out"}).code, 3);
}

TEST(CliErrors, UnknownFlagExitsTwo) {
    EXPECT_EQ(cli({"variance", "--bogus"}).code, 2);
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(CliSelect, EmptyHierarchyGivesZeroRow) {
    TempDir dir;
    const auto input = dir.write("x.csv", four_part_csv());
    const auto h = dir.write("h.json", R"({"nodes":[],"splits":[],"slrs":[]})");
    const auto r = cli({"select", "--input", input, "--hierarchy", h, "--out-dir", dir / "out"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("final 0.0%"), std::string::npos);
    EXPECT_EQ(slurp(dir / "out/trace.csv"), "step,chosen,additional_pct,cumulative_pct,tie_set\n0,,0,0,\n");
}

TEST(CliSelect, InvalidHierarchyNamesTheSlr) {
    TempDir dir;
    const auto input = dir.write("x.csv", four_part_csv());
    const auto h = dir.write("h.json", R"({"nodes":[{"name":"X","parts":["A","B"]},{"name":"Y","parts":["C","D"]},
        {"name":"x1","parts":["A"]},{"name":"x2","parts":["B"]}],
        "splits":[{"parent":"X","children":["x1","x2"]}],
        "slrs":[{"step":1,"num":"x1","den":"Y","manual":false}]})");
    const auto r = cli({"select", "--input", input, "--hierarchy", h, "--out-dir", dir / "out"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("log(x1/Y)"), std::string::npos);
}

TEST(CliSelect, ExhaustivePlrSelectionMatchesOracle) {
    TempDir dir;
    const std::string csv = four_part_csv();
    const auto input = dir.write("x.csv", csv);
    const auto cands = dir.write("c.txt", "all\n");
    const auto r = cli({"select", "--input", input, "--candidates", cands, "--steps", "3", "--out-dir", dir / "out"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto trace = Json::parse(slurp(dir / "out/trace.json"));
    ASSERT_EQ(trace["steps"].size(), 3u);
    EXPECT_NEAR(trace["final_pct"].get<double>(), 100.0, 1e-7);

    // first-step ranking against the per-response oracle
    const auto m = parse_composition_csv(csv);
    const std::vector<std::string> names{"A", "B", "C", "D"};
    double last = 1e300;
    for (const auto& c : trace["steps"][0]["candidates"]) {
        const auto spec = parse_logratio(c["name"].get<std::string>(), names);
        const double oracle = 100.0 * testing::per_response_explained_fraction(
                                          m.values(), {0.25, 0.25, 0.25, 0.25}, logratio_matrix(m, std::span(&spec, 1)));
        EXPECT_NEAR(c["additional_pct"].get<double>(), oracle, 1e-7);
        EXPECT_LE(oracle, last + 1e-7);
        last = oracle;
    }
}

TEST(CliSelect, FloorStopsButExitsZero) {
    TempDir dir;
    const auto input = dir.write("x.csv", four_part_csv());
    const auto cands = dir.write("c.txt", "A/B\nC/D\n");
    const auto r = cli({"select", "--input", input, "--candidates", cands, "--floor", "99", "--out-dir", dir / "out"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("below_floor"), std::string::npos);
}

TEST(CliOrdinate, TernaryCentroid) {
    TempDir dir;
    const auto input = dir.write("t.csv", "a,b,c\n1,1,1\n1,2,3\n");
    const auto r = cli({"ordinate", "--input", input, "--mode", "ternary", "--out-dir", dir / "out"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = Json::parse(slurp(dir / "out/ordination.json"));
    EXPECT_NEAR(doc["rows"][0]["x"].get<double>(), 0.5, 1e-15);
    EXPECT_NEAR(doc["rows"][0]["y"].get<double>(), std::sqrt(3.0) / 6.0, 1e-15);
}

TEST(CliOrdinate, TernaryShapeMismatchFails) {
    TempDir dir;
    const auto input = dir.write("x.csv", four_part_csv());
    EXPECT_EQ(cli({"ordinate", "--input", input, "--mode", "ternary", "--out-dir", dir / "out"}).code, 2);
}

TEST(CliOrdinate, LraOfAmalgamationsAndWeightsFile) {
    TempDir dir;
    const auto input = dir.write("x.csv", four_part_csv());
    const auto h = dir.write("h.json", R"({"nodes":[{"name":"AB","parts":["A","B"]},{"name":"C","parts":["C"]},
        {"name":"D","parts":["D"]}],"splits":[],"slrs":[]})");
    const auto r = cli({"ordinate", "--input", input, "--hierarchy", h, "--target", "roots", "--out-dir", dir / "out"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(Json::parse(slurp(dir / "out/ordination.json"))["dims"], 2);

    const auto w = dir.write("w.csv", "part,weight\nA,1\nB,2\nC,3\nD,4\n");
    EXPECT_EQ(cli({"variance", "--input", input, "--weights", w, "--out-dir", dir / "w"}).code, 0);
    const auto doc = Json::parse(slurp(dir / "w/variance.json"));
    EXPECT_NEAR(doc["clr"]["weights"]["D"].get<double>(), 0.4, 1e-15);
}

TEST(CliDeterminism, RepeatedRunsAreByteIdentical) {
    TempDir dir;
    const auto input = dir.write("x.csv", four_part_csv());
    const auto cands = dir.write("c.txt", "all\n");
    for (int n = 0; n < 2; ++n) {
        const auto out = dir / ("run" + std::to_string(n));
        ASSERT_EQ(cli({"select", "--input", input, "--candidates", cands, "--out-dir", out}).code, 0);
        ASSERT_EQ(cli({"ordinate", "--input", input, "--out-dir", out + "/ord"}).code, 0);
    }
    for (const char* f : {"trace.csv", "trace.json", "ord/coordinates.csv", "ord/ordination.json"}) {
        EXPECT_EQ(slurp(dir / (std::string("run0/") + f)), slurp(dir / (std::string("run1/") + f))) << f;
    }
}

}  // namespace
}  // namespace coda
