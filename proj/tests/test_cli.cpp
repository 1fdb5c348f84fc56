#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "erwd/cli.hpp"

using namespace erwd;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / ("erwd_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Data lines of a CSV output (comment lines dropped).
std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    }
    return lines;
}

void check_phase_row(const std::string& row) {
    static const std::regex number(R"([-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?)");
    static const std::regex integer(R"(\d+)");
    std::vector<std::string> f;
    std::stringstream ss(row);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    REQUIRE(f.size() == 9);
    CHECK(std::regex_match(f[0], integer));
    CHECK(std::regex_match(f[1], number));
    CHECK(std::regex_match(f[2], number));
    CHECK(std::regex_match(f[3], integer));
    CHECK(std::regex_match(f[4], integer));
    CHECK(std::regex_match(f[5], number));
    CHECK(std::regex_match(f[6], number));
    CHECK((f[7] == "positive" || f[7] == "negative" || f[7] == "inconclusive"));
    CHECK(std::regex_match(f[8], integer));
    const double beta = std::stod(f[1]);
    const double mu = std::stod(f[2]);
    CHECK(beta >= 0.0);
    CHECK(beta <= 1.0);
    CHECK(mu >= 0.0);
    CHECK(mu <= 1.0);
}

void check_header(const json& doc, const std::string& command) {
    CHECK(doc.at("tool") == "erwd");
    CHECK(doc.at("version") == library_version());
    CHECK(doc.at("config").at("command") == command);
    CHECK(doc.at("result").is_object());
}

}  // namespace

TEST_CASE("usage and domain errors map to exit codes") {
    CHECK(run({"simulate", "--beta", "0.5"}).code == kExitUsage);
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"sweep", "--d", "2", "--format", "xml"}).code == kExitUsage);
    CHECK(run({"find-beta0", "--d", "2", "--mu", "0.5", "--format", "csv"}).code == kExitUsage);
    const auto bad = run({"simulate", "--d", "2", "--beta", "1.5"});
    CHECK(bad.code == kExitDomain);
    CHECK(bad.err.find("[0,1]") != std::string::npos);
    CHECK(run({"greens", "--d", "4", "--n", "2"}).code == kExitDomain);
    CHECK(run({"enumerate", "--d", "6", "--m", "6", "--N", "1", "--work-units", "10"}).code == kExitBudget);
    CHECK(run({"greens", "--d", "5", "--n", "2", "--method", "series", "--K", "64", "--target", "1e-15"}).code ==
          kExitAccuracy);
    CHECK(run({"--help"}).code == kExitOk);
    CHECK(run({"--version"}).out.find(library_version()) != std::string::npos);
}

TEST_CASE("simulate") {
    const auto r = run({"simulate", "--d", "2", "--beta", "0.5", "--mu", "0", "--walks", "1000", "--steps", "7000",
                        "--seed", "1"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    check_header(doc, "simulate");
    CHECK(doc["result"]["verdict"] == "positive");
    CHECK(doc["result"]["n_walks"] == 1000);
    CHECK(doc["result"]["stderr"].get<double>() > 0.0);
    CHECK(doc["config"]["seed"] == 1);

    const auto csv = run({"simulate", "--d", "2", "--beta", "0.5", "--format", "csv"});
    REQUIRE(csv.code == 0);
    const auto lines = csv_lines(csv.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "d,beta,mu,n_walks,n_steps,v1_hat,stderr,verdict,seed");
    check_phase_row(lines[1]);
}

TEST_CASE("sweep writes the default 21 x 21 grid") {
    const auto r = run({"sweep", "--d", "3", "--walks", "10", "--steps", "50"});
    REQUIRE(r.code == 0);
    const auto lines = csv_lines(r.out);
    REQUIRE(lines.size() == 442);
    CHECK(lines[0] == "d,beta,mu,n_walks,n_steps,v1_hat,stderr,verdict,seed");
    for (std::size_t i = 1; i < lines.size(); ++i) check_phase_row(lines[i]);
    CHECK(r.out.rfind("# erwd ", 0) == 0);
    CHECK(r.out.find("# config: {") != std::string::npos);

    const auto one = run({"sweep", "--d", "2", "--beta-points", "3", "--mu-points", "2", "--walks", "30", "--steps",
                          "40", "--workers", "1"});
    const auto many = run({"sweep", "--d", "2", "--beta-points", "3", "--mu-points", "2", "--walks", "30", "--steps",
                           "40", "--workers", "4"});
    CHECK(one.out == many.out);

    const auto js = run({"sweep", "--d", "2", "--beta-points", "3", "--mu-points", "2", "--walks", "30", "--steps",
                         "40", "--format", "json"});
    const auto doc = json::parse(js.out);
    check_header(doc, "sweep");
    CHECK(doc["result"]["cells"].size() == 6);
}

TEST_CASE("greens and bounds") {
    const auto g = run({"greens", "--d", "11", "--n", "3"});
    REQUIRE(g.code == 0);
    const auto doc = json::parse(g.out);
    check_header(doc, "greens");
    CHECK(doc["result"]["integral"]["value"].get<double>() <= 1.43043);
    CHECK(doc["result"]["method_difference"].get<double>() < 1e-6);
    CHECK(doc["result"]["within_published_bound"] == true);

    const auto b = run({"bounds", "--d", "12", "--greens", "published"});
    REQUIRE(b.code == 0);
    std::smatch m;
    REQUIRE(std::regex_search(b.out, m, std::regex(R"(grand_total = ([0-9.]+))")));
    CHECK(std::stod(m[1]) <= 0.847);
    CHECK(b.out.find("certificate derivative grand_total < 1: PASS") != std::string::npos);

    const auto bj = run({"bounds", "--d", "9", "--greens", "published", "--format", "json"});
    const auto bd = json::parse(bj.out);
    check_header(bd, "bounds");
    CHECK(bd["result"]["certificates"]["positivity_below_one"]["pass"] == true);
    CHECK(bd["result"]["certificates"]["derivative_total_below_one"]["pass"] == false);
}

TEST_CASE("enumerate and couple") {
    const auto e = run({"enumerate", "--m", "5", "--N", "1", "--d", "6"});
    REQUIRE(e.code == 0);
    const auto doc = json::parse(e.out);
    check_header(doc, "enumerate");
    CHECK(doc["result"]["coefficients"].size() == 4);
    CHECK(doc["result"]["within_bound"] == true);
    CHECK(doc["result"]["abs_total_sum"].get<double>() <= doc["result"]["order_bound"].get<double>());

    const auto t = run({"enumerate", "--d", "3", "--beta", "0", "--mu", "0.5", "--three-step"});
    REQUIRE(t.code == 0);
    const auto td = json::parse(t.out);
    CHECK(td["result"]["identical"] == true);
    CHECK(td["result"]["scaled_mean_exact"] == "-6");

    const auto c = run({"couple", "--d", "2", "--beta", "0.05", "--mu", "0.5", "--runs", "50"});
    REQUIRE(c.code == 0);
    const auto cd = json::parse(c.out);
    check_header(cd, "couple");
    CHECK(cd["result"]["all_dominated"] == true);
    CHECK(cd["result"]["beta_star"].get<double>() > 0.0);
}

TEST_CASE("outputs replay to identical bytes") {
    const fs::path dir = scratch_dir();
    const std::vector<std::vector<std::string>> commands = {
        {"simulate", "--d", "3", "--beta", "0.3", "--mu", "0.4", "--walks", "50", "--steps", "200", "--seed", "8"},
        {"simulate", "--d", "2", "--beta", "0.3", "--walks", "50", "--steps", "200", "--format", "csv"},
        {"sweep", "--d", "2", "--beta-points", "3", "--mu-points", "3", "--walks", "20", "--steps", "30"},
        {"greens", "--d", "9", "--n", "2", "--format", "csv"},
        {"bounds", "--d", "12"},
        {"enumerate", "--d", "3", "--m", "5", "--N", "2"},
        {"couple", "--d", "2", "--beta", "0.2", "--mu", "0.5", "--runs", "20", "--blocks", "30"},
        {"find-beta0", "--d", "2", "--mu", "0.8", "--walks", "50", "--steps", "500", "--width", "0.2",
         "--max-multiplier", "4"},
    };
    int i = 0;
    for (auto args : commands) {
        const fs::path first = dir / ("run" + std::to_string(i) + ".out");
        const fs::path second = dir / ("replay" + std::to_string(i) + ".out");
        ++i;
        args.push_back("--out");
        args.push_back(first.string());
        CAPTURE(args[0]);
        REQUIRE(run(args).code == 0);
        REQUIRE(run({"replay", first.string(), "--out", second.string()}).code == 0);
        CHECK(slurp(first) == slurp(second));
        CHECK_FALSE(slurp(first).empty());
    }
    CHECK(run({"replay", (dir / "missing").string()}).code == kExitUsage);
    fs::remove_all(dir);
}

TEST_CASE("output directory from the environment") {
    const fs::path dir = scratch_dir() / "env";
    ::setenv("ERWD_OUTPUT_DIR", dir.c_str(), 1);
    const auto r = run({"greens", "--d", "8", "--n", "1"});
    ::unsetenv("ERWD_OUTPUT_DIR");
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    REQUIRE(fs::exists(dir / "greens.json"));
    CHECK(json::parse(slurp(dir / "greens.json"))["result"]["n"] == 1);
    fs::remove_all(dir.parent_path());
}
