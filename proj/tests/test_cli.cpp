#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sicta/cli.hpp"

using namespace sicta;
using Json = nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::string golden(const std::string& name)
{
    return slurp(std::filesystem::path(SICTA_GOLDEN_DIR) / name);
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream s(text);
    for (std::string line; std::getline(s, line);) {
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::istringstream s(line);
    for (std::string cell; std::getline(s, cell, ',');) {
        out.push_back(cell);
    }
    return out;
}

std::vector<std::string> keys(const Json& j)
{
    std::vector<std::string> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        out.push_back(it.key());
    }
    return out;
}

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "sicta_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("validate matches the oracle exactly")
{
    const auto r = run({"validate", "--dist", "1/2,1/2", "--nmax", "6"});
    CHECK(r.code == kExitOk);
    CHECK(r.out == golden("validate_fair2.csv"));
    for (const auto& line : lines(r.out)) {
        const auto cells = split(line);
        if (cells[0] == "n") {
            continue;
        }
        for (std::size_t k = 3; k < cells.size(); k += 3) {
            CHECK(cells[k] == "0");
        }
    }
}

TEST_CASE("validate with the printed formulas reports the known mismatches")
{
    const auto r = run({"validate", "--dist", "1/2,1/2", "--nmax", "4", "--paper-literal"});
    CHECK(r.code == kExitValidationFailed);
    CHECK(r.out == golden("validate_fair2_literal.csv"));
    const auto row = split(lines(r.out)[3]);
    REQUIRE(row[0] == "2");
    CHECK(row[7] == "1");  // S oracle
    CHECK(row[8] == "0");  // S printed
    CHECK(row[10] == "1/2");
    CHECK(row[11] == "7/2");
}

TEST_CASE("closed and exact outputs are stable")
{
    CHECK(run({"closed", "--dist", "1/2,1/4,1/4", "--obs", "L,C,S,I", "--n", "0:6", "--mode", "rational"}).out ==
          golden("closed_pbi3.csv"));
    // shorthands expand to the same exact vectors
    CHECK(run({"closed", "--dist", "pbi:3", "--obs", "L,C,S,I", "--n", "0:6", "--mode", "rational"}).out ==
          golden("closed_pbi3.csv"));
    CHECK(run({"exact", "--dist", "1/3,2/3", "--law-n", "3", "--jmax", "8"}).out == golden("exact_law.csv"));
    CHECK(run({"exact", "--dist", "pbi:3", "--nmax", "5"}).out == golden("exact_pbi3.csv"));
}

TEST_CASE("asymptotic output")
{
    const auto r = run({"asymptotic", "--dist", "pbi:3", "--obs", "L"});
    CHECK(r.code == kExitOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "observable,leading,n,g_n,tail_bound");
    CHECK(rows[1].rfind("L,1.442695", 0) == 0);

    const auto osc = lines(run({"asymptotic", "--dist", "0.3,0.7", "--obs", "L,C", "--n", "64,128"}).out);
    REQUIRE(osc.size() == 5);
    for (std::size_t i = 1; i < osc.size(); ++i) {
        CHECK(split(osc[i])[3] == "0");
    }
}

TEST_CASE("tradeoff output")
{
    const auto r = run({"tradeoff", "--d", "2", "--grid", "5"});
    CHECK(r.code == kExitOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == "x,collision_rate,p_1,p_2");
    const auto at = split(rows[3]);
    CHECK(at[0] == "0.2");
    CHECK(std::abs(std::stod(at[1]) - 0.44) < 0.02);
}

TEST_CASE("JSON schemas")
{
    const auto sim = Json::parse(run({"simulate", "--dist", "fair:2", "--n", "4", "--runs", "500"}).out);
    CHECK(keys(sim) == std::vector<std::string>{"histogram", "means", "n", "runs", "seed", "standard_errors",
                                                "variances"});
    CHECK(keys(sim["means"]) == std::vector<std::string>{"C", "I", "L", "S"});

    const auto gated = Json::parse(
        run({"simulate-gated", "--dist", "fair:2", "--lambda", "0.3", "--cris", "2000", "--warmup", "100"}).out);
    CHECK(keys(gated) == std::vector<std::string>{"cris", "histogram", "lambda", "means", "packets", "seed",
                                                  "standard_errors", "warmup"});

    const auto opt = Json::parse(run({"optimize", "--d", "3"}).out);
    CHECK(keys(opt) == std::vector<std::string>{"argmin", "d", "iterations", "lagrange_conditions", "stationarity",
                                                "throughput", "value"});
    CHECK(opt["argmin"].size() == 3);
    CHECK(std::abs(opt["argmin"][0].get<double>() - 0.5) < 1e-6);

    const auto delay = Json::parse(run({"delay", "--dist", "fair:2", "--lambda", "0.3", "--imax", "60"}).out);
    CHECK(keys(delay) == std::vector<std::string>{"lambda", "mean_resolution_delay", "mean_total_delay", "mean_wait",
                                                  "mst", "stationary_mean_cri", "truncation_report"});
    CHECK(keys(delay["truncation_report"]) ==
          std::vector<std::string>{"i_max", "j_max", "max_row_deficit", "stationary_iterations", "weighted_deficit"});
}

TEST_CASE("seeded runs are reproducible")
{
    const std::vector<std::string> args{"simulate", "--dist", "pbi:3", "--n", "30", "--runs", "3000", "--seed", "17"};
    const auto a = run(args);
    CHECK(a.out == run(args).out);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "4"});
    CHECK(a.out == run(threaded).out);
    auto other = args;
    other[8] = "18";
    CHECK(a.out != run(other).out);
}

TEST_CASE("files come with manifests that reproduce them")
{
    const auto csv = scratch("closed.csv");
    const auto hist = scratch("hist.csv");
    std::filesystem::remove(csv);
    const auto r = run({"simulate", "--dist", "fair:3", "--n", "6", "--runs", "400", "--seed", "5", "--out",
                        csv.string(), "--histogram", hist.string()});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.empty());
    const auto manifest = Json::parse(slurp(csv.string() + ".manifest.json"));
    for (const char* field : {"subcommand", "arguments", "parameters", "seeds", "library_version", "arithmetic_mode",
                              "outputs", "wall_clock_seconds"}) {
        CHECK(manifest.contains(field));
    }
    CHECK(manifest["subcommand"] == "simulate");
    CHECK(manifest["seeds"] == Json::array({5}));
    CHECK(manifest["parameters"]["runs"] == "400");
    CHECK(manifest["outputs"].size() == 2);
    CHECK(std::filesystem::exists(hist.string() + ".manifest.json"));
    CHECK(lines(slurp(hist))[0] == "length,frequency");

    const std::string first = slurp(csv);
    std::filesystem::remove(csv);
    const auto again = run(manifest["arguments"].get<std::vector<std::string>>());
    CHECK(again.code == kExitOk);
    CHECK(slurp(csv) == first);
}

TEST_CASE("errors and exit codes")
{
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"nonsense"}).code == kExitUsage);
    CHECK(run({"closed", "--dist", "1/2,1/2"}).code == kExitUsage);
    CHECK(run({"closed", "--dist", "1/2,1/2", "--n", "3", "--obs", "Q"}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);

    const auto bad = run({"closed", "--dist", "0.5,0.6", "--n", "3"});
    CHECK(bad.code == kExitUsage);
    CHECK(Json::parse(bad.err)["error"] == "RejectedDistribution");

    const auto unstable = run({"delay", "--dist", "fair:2", "--lambda", "0.8"});
    CHECK(unstable.code == kExitValidationFailed);
    const auto err = Json::parse(unstable.err);
    CHECK(err["error"] == "NotStationary");
    CHECK(err.contains("message"));
}
