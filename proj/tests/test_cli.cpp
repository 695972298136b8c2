#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "htc/cli.hpp"
#include "htc/report.hpp"

using namespace htc;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("no subcommand is a usage error") {
    const auto r = run({});
    CHECK(r.code == cli::kUsage);
    CHECK(r.err.find("constants") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
}

TEST_CASE("constants table") {
    const auto r = run({"constants", "--lambda", "5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("5.27803") != std::string::npos);
    const auto j = nlohmann::json::parse(r.out);
    bool cheeger = false;
    for (const auto& row : j.at("data").at("constants")) {
        if (row.at("name") == "pareto_cheeger") cheeger = std::abs(row.at("value").get<double>() - 0.329877) < 5e-7;
    }
    CHECK(cheeger);
    CHECK(j.at("subcommand") == "constants");
    CHECK(j.at("tool") == "htcheeger");
    const auto csv = run({"constants", "--lambda", "5", "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(csv.out.find("5.27803") != std::string::npos);
}

TEST_CASE("verify-pareto writes one row per dimension plus the slope") {
    const auto r = run({"verify-pareto", "--lambda", "5", "--dims", "16,64,256", "--samples", "100000", "--seed", "1",
                        "--format", "csv"});
    CHECK(r.code == cli::kPass);
    std::istringstream is(r.out);
    std::string line;
    std::getline(is, line);
    CHECK(line == kReportCsvHeader);
    int pass_rows = 0, slope_rows = 0;
    while (std::getline(is, line)) {
        if (line.rfind("pareto_theorem/n=", 0) == 0 && line.find(",pass,") != std::string::npos) ++pass_rows;
        if (line.rfind("pareto_theorem/slope", 0) == 0) ++slope_rows;
    }
    CHECK(pass_rows == 3);
    CHECK(slope_rows == 1);
}

TEST_CASE("exit codes follow the verdicts") {
    CHECK(run({"verify-tails", "--measure", "laplace", "--alpha", "1", "--cheeger", "0.1"}).code == cli::kFail);
    CHECK(run({"verify-product", "--measure", "laplace", "--fn", "identity", "--n", "1", "--certificate", "2",
               "--poincare-alpha", "0.5"})
              .code == cli::kInconclusive);
    const auto dom = run({"verify-matrix", "--n", "1"});
    CHECK(dom.code == cli::kUsage);
    CHECK(dom.err.find("error:") != std::string::npos);
}

TEST_CASE("repeat runs are byte-identical, whatever the thread count") {
    const std::vector<std::string> a{"estimate", "--fn", "max", "--n", "8", "--samples", "32000", "--seed", "5",
                                     "--threads", "1"};
    auto b = a;
    b.back() = "3";
    const auto r1 = run(a), r2 = run(a), r3 = run(b);
    CHECK(r1.code == 0);
    CHECK(r1.out == r2.out);
    // the thread count is not echoed into the document
    CHECK(r1.out == r3.out);
}

TEST_CASE("output directory from the environment") {
    const auto dir = std::filesystem::temp_directory_path() / "htcheeger_cli_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    ::setenv(cli::kOutputDirEnv, dir.c_str(), 1);
    const auto r = run({"constants", "--lambda", "5", "--format", "csv"});
    ::unsetenv(cli::kOutputDirEnv);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(dir / "constants.csv");
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str().find("5.27803") != std::string::npos);

    const auto explicit_file = dir / "x.json";
    CHECK(run({"tightness", "-o", explicit_file.string()}).code == 0);
    std::ifstream g(explicit_file);
    CHECK(nlohmann::json::parse(g).at("verdict") == "pass");
    std::filesystem::remove_all(dir);
}

TEST_CASE("cheeger-estimate and lemmas") {
    const auto c = run({"cheeger-estimate", "--measure", "pareto", "--lambda", "5", "--alpha", "0.8"});
    CHECK(c.code == 0);
    CHECK(c.out.find("0.32987") != std::string::npos);
    CHECK(run({"lemmas"}).code == cli::kPass);
    CHECK(run({"verify-dp", "--kind", "C1", "--p", "inf", "--fn", "max", "--n", "16", "--samples", "20000"}).code ==
          cli::kPass);
}
