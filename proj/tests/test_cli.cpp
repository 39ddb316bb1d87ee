#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "delab/cli.hpp"

using namespace delab;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "delab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "delab_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST(CliBound, DefaultTable) {
    const auto r = run({"bound", "--n", "100", "--eps", "0.1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("sphere-upper-d1"), std::string::npos);
    EXPECT_NE(r.out.find("0.110303"), std::string::npos);
}

TEST(CliBound, CsvAndFilters) {
    const auto r = run({"bound", "--n", "200", "--eps", "9e-5", "--domain", "ball", "--format", "csv"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("row,domain,d,direction,form,threshold,rhs,valid,reason\n", 0), 0u);
    EXPECT_EQ(r.out.find("sphere"), std::string::npos);
    EXPECT_NE(r.out.find("ball-lower-d2,ball,2,lower,inverted,0.2020"), std::string::npos);
    const auto bad = run({"bound", "--n", "100"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_EQ(run({"bound", "--n", "100", "--eps", "0.1", "--form", "magic"}).code, 2);
}

TEST(CliCertify, NoMismatches) {
    const auto r = run({"certify", "--d", "2", "--n", "12", "--trials", "50"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("0 mismatches", 0), 0u);
    const auto s = run({"certify", "--domain", "sphere", "--d", "2", "--n", "10", "--trials", "20"});
    EXPECT_EQ(s.code, 0);
    EXPECT_EQ(run({"certify", "--d", "2", "--n", "3"}).code, 2);
}

TEST(CliSimulate, RunsWritesAndPlots) {
    const auto prefix = scratch("sim").string();
    const auto r = run({"simulate", "--domain", "sphere", "--d", "1", "--n", "100", "--eps", "0.05,0.1", "--trials",
                        "100", "--seed", "3", "--out", prefix});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
    ASSERT_TRUE(fs::exists(prefix + ".summary.json"));
    ASSERT_TRUE(fs::exists(prefix + ".trials.csv"));

    const auto svg = scratch("sim.svg");
    const auto p = run({"plot", "--summary", prefix + ".summary.json", "--out", svg.string()});
    ASSERT_EQ(p.code, 0) << p.err;
    const std::string body = slurp(svg);
    EXPECT_EQ(body.rfind("<svg", 0), 0u);
    const auto p2 = run({"plot", "--summary", prefix + ".summary.json", "--trials", prefix + ".trials.csv", "--out",
                         scratch("sim2.svg").string()});
    EXPECT_EQ(p2.code, 0);
    EXPECT_EQ(slurp(scratch("sim2.svg")), body);
    EXPECT_EQ(run({"plot", "--summary", scratch("missing.summary.json").string(), "--out", svg.string()}).code, 2);
}

TEST(CliSimulate, AllInvalidRowsExitTwo) {
    const auto r = run({"simulate", "--domain", "sphere", "--d", "1", "--n", "50", "--eps", "0.5", "--direction",
                        "lower", "--trials", "10"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("INVALID"), std::string::npos);
}

TEST(CliSimulate, ExitCodeFromVerdicts) {
    ExperimentSummary s;
    s.rows.resize(3);
    s.rows[0].verdict = Verdict::Pass;
    s.rows[1].verdict = Verdict::Invalid;
    s.rows[2].verdict = Verdict::Pass;
    EXPECT_EQ(simulate_exit_code(s), 0);
    s.rows[2].verdict = Verdict::Fail;
    EXPECT_EQ(simulate_exit_code(s), 1);
    for (auto& r : s.rows) r.verdict = Verdict::Invalid;
    EXPECT_EQ(simulate_exit_code(s), 2);
}

TEST(CliSimulate, ConfigFileFlagsOverrideAndDumpRoundTrip) {
    const auto cfg_path = scratch("cfg.json");
    {
        std::ofstream os(cfg_path);
        os << R"({"domain": "ball", "d": 2, "n": 40, "epsilons": [0.1], "trials": 20, "seed": 5})";
    }
    const auto dump = run({"simulate", "--config", cfg_path.string(), "--n", "45", "--dump-config"});
    ASSERT_EQ(dump.code, 0) << dump.err;
    const auto j = Json::parse(dump.out);
    EXPECT_EQ(j["n"], 45);
    EXPECT_EQ(j["domain"], "ball");
    EXPECT_EQ(j["seed"], 5);

    const auto dumped = scratch("dumped.json");
    {
        std::ofstream os(dumped);
        os << dump.out;
    }
    const auto a = scratch("a").string(), b = scratch("b").string();
    ASSERT_EQ(run({"simulate", "--config", cfg_path.string(), "--n", "45", "--out", a}).code, 0);
    ASSERT_EQ(run({"simulate", "--config", dumped.string(), "--out", b}).code, 0);
    auto strip = [](std::string s) { return std::regex_replace(s, std::regex("\"timestamp\": \"[^\"]*\""), ""); };
    EXPECT_EQ(strip(slurp(a + ".summary.json")), strip(slurp(b + ".summary.json")));
    EXPECT_EQ(slurp(a + ".trials.csv"), slurp(b + ".trials.csv"));
}

TEST(CliSimulate, ConfigErrorsExitTwo) {
    const auto bad = scratch("bad.json");
    {
        std::ofstream os(bad);
        os << R"({"domain": "ball", "colour": "blue"})";
    }
    const auto r = run({"simulate", "--config", bad.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("colour"), std::string::npos);
    EXPECT_EQ(run({"simulate", "--config", scratch("nope.json").string()}).code, 2);
    EXPECT_EQ(run({"simulate", "--eps", "0.1,abc"}).code, 2);
    EXPECT_EQ(run({"simulate", "--eps", "1.5"}).code, 2);
    EXPECT_EQ(run({"simulate", "--bogus"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
}

TEST(CliHelp, EnumeratesEveryFlagAndMatchesGolden) {
    const auto r = run({"--help-all"});
    EXPECT_EQ(r.code, 0);
    for (const char* flag : {"--domain", "--d", "--n", "--eps", "--direction", "--form", "--trials", "--seed",
                             "--confidence", "--out", "--config", "--dump-config", "--summary", "--format"})
        EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
    EXPECT_EQ(r.out, slurp(fs::path(DELAB_TEST_DATA_DIR) / "help_all.txt"));
}

TEST(Svg, StepPathThresholdsAndDeterminism) {
    ExperimentConfig cfg;
    cfg.kind = DomainKind::SphereNoBoundary;
    cfg.d = 2;
    cfg.n = 50;
    cfg.epsilons = {0.1, 0.3};
    cfg.trials = 100;
    cfg.threads = 1;
    const auto res = run_experiment(cfg);
    const std::string svg = render_svg(res.summary, res.records);
    EXPECT_EQ(svg, render_svg(res.summary, res.records));

    const std::regex path_re("<path class=\"survival\" d=\"([^\"]*)\"");
    std::smatch m;
    ASSERT_TRUE(std::regex_search(svg, m, path_re));
    const std::string d = m[1];
    EXPECT_EQ(std::count(d.begin(), d.end(), 'M'), 1);
    EXPECT_EQ(std::count(d.begin(), d.end(), 'H'), 100);
    EXPECT_EQ(std::count(d.begin(), d.end(), 'V'), 100);
    auto count = [&](const std::string& needle) {
        std::size_t c = 0, pos = 0;
        while ((pos = svg.find(needle, pos)) != std::string::npos) ++c, ++pos;
        return c;
    };
    EXPECT_EQ(count("<path "), 1u);
    EXPECT_EQ(count("class=\"threshold\""), 2u);
    EXPECT_EQ(count("class=\"eps\""), 2u);

    // parse the threshold x coordinates back into lengths
    const SvgLayout L;
    const double x_max = svg_x_max(res.summary, res.records);
    const std::regex thr_re("class=\"threshold\" data-eps=\"[^\"]*\" x1=\"([0-9.]+)\"");
    std::size_t e = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), thr_re); it != std::sregex_iterator(); ++it, ++e) {
        const double px = std::stod((*it)[1]);
        const double back = (px - L.left) / (L.width - L.left - L.right) * x_max;
        EXPECT_NEAR(back, res.summary.rows[e].threshold, 0.0005 * x_max / (L.width - L.left - L.right) * 2 + 1e-9);
    }
    EXPECT_EQ(e, 2u);
    EXPECT_THROW(render_svg(res.summary, {}), ConfigError);
}
