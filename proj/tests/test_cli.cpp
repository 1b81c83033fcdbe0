#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

std::string cli_path() {
    const char* env = std::getenv("MULTICI_BIN");
    REQUIRE_MESSAGE(env != nullptr, "MULTICI_BIN must point at the CLI binary");
    return env;
}

CommandResult run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CommandResult result;
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) result.output.append(buf.data(), n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("list shows the catalog") {
    const CommandResult r = run_cli("list");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("F44") != std::string::npos);
    CHECK(r.output.find("Sphere2") != std::string::npos);
}

TEST_CASE("list filters by tag") {
    const CommandResult r = run_cli("list --tag MN");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("Ackley") != std::string::npos);
    CHECK(r.output.find("Rastrigin") == std::string::npos);  // MS, filtered out
}

TEST_CASE("list emits valid json") {
    const CommandResult r = run_cli("list --format json");
    CHECK(r.exit_code == 0);
    const auto parsed = nlohmann::json::parse(r.output);
    CHECK(parsed.is_array());
    CHECK(parsed.size() >= 20);
}

TEST_CASE("run is deterministic and converges on the 30-D sphere") {
    const auto strip_timing = [](const std::string& text) {
        std::istringstream ss(text);
        std::string line, kept;
        while (std::getline(ss, line))
            if (line.rfind("wall_time", 0) != 0) kept += line + "\n";
        return kept;
    };
    const CommandResult a = run_cli("run --problem sphere2 --seed 1");
    CHECK(a.exit_code == 0);
    const CommandResult b = run_cli("run --problem sphere2 --seed 1");
    CHECK(strip_timing(a.output) == strip_timing(b.output));

    std::istringstream ss(a.output);
    std::string line;
    double fstar = -1.0;
    while (std::getline(ss, line)) {
        if (line.rfind("f*: ", 0) == 0) fstar = std::stod(line.substr(4));
    }
    CHECK(fstar >= 0.0);
    CHECK(fstar <= 1e-6);
}

TEST_CASE("run rejects unknown problems and flags") {
    CHECK(run_cli("run --problem nosuch").exit_code == 1);
    CHECK(run_cli("run --problem sphere2 --bogus-flag 1").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("trace output round-trips through the trace subcommand") {
    const fs::path dir = temp_dir("multici_cli_trace");
    const std::string trace = (dir / "trace.csv").string();
    const CommandResult r =
        run_cli("run --problem A1 --preset appendix --seed 4 --trace-out " + trace);
    CHECK(r.exit_code == 0);

    const CommandResult best = run_cli("trace --in " + trace + " --best");
    CHECK(best.exit_code == 0);
    std::istringstream ss(best.output);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "attempt,global_best");
    double prev = std::numeric_limits<double>::infinity();
    int rows = 0;
    while (std::getline(ss, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        const double v = std::stod(line.substr(comma + 1));
        CHECK(v <= prev);
        prev = v;
        ++rows;
    }
    CHECK(rows >= 1);

    const CommandResult per = run_cli("trace --in " + trace + " --per-cohort");
    CHECK(per.exit_code == 0);
    std::istringstream ps(per.output);
    std::getline(ps, line);
    CHECK(line == "attempt,cohort1,cohort2,cohort3");

    std::ofstream(dir / "empty.csv") << "";
    CHECK(run_cli("trace --in " + (dir / "empty.csv").string()).exit_code == 1);
    fs::remove_all(dir);
}

TEST_CASE("bench writes summary and results") {
    const fs::path dir = temp_dir("multici_cli_bench");
    const CommandResult r = run_cli("bench --problems A1,F7 --runs 3 --base-seed 1 --out " +
                                    dir.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "results.json"));
    CHECK(fs::exists(dir / "summary.csv"));

    std::ifstream csv(dir / "summary.csv");
    std::string header, row1, row2;
    std::getline(csv, header);
    CHECK(header == "problem,mean,std_dev,best,mean_runtime,n_runs");
    CHECK(static_cast<bool>(std::getline(csv, row1)));
    CHECK(static_cast<bool>(std::getline(csv, row2)));
    CHECK(row1.substr(0, 3) == "A1,");
    CHECK(row2.substr(0, 3) == "F7,");

    std::ifstream js(dir / "results.json");
    const auto parsed = nlohmann::json::parse(js);
    CHECK(parsed.at("problems").size() == 2);
    fs::remove_all(dir);
}

TEST_CASE("bench with a single run reports zero deviation") {
    const fs::path dir = temp_dir("multici_cli_bench1");
    const CommandResult r = run_cli("bench --problems A1 --runs 1 --out " + dir.string());
    CHECK(r.exit_code == 0);
    std::ifstream csv(dir / "summary.csv");
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    std::istringstream ss(row);
    std::string field;
    std::getline(ss, field, ',');  // problem
    std::getline(ss, field, ',');  // mean
    std::getline(ss, field, ',');  // std_dev
    CHECK(std::stod(field) == 0.0);
    fs::remove_all(dir);
}

TEST_CASE("bench requires a valid plan") {
    CHECK(run_cli("bench --plan /nonexistent/plan.json").exit_code == 1);
    CHECK(run_cli("bench").exit_code == 1);
}

TEST_CASE("compare validates alpha") {
    CHECK(run_cli("compare --ours a.json --theirs b.csv --alpha 1.0").exit_code == 2);
    CHECK(run_cli("compare --ours a.json --theirs b.csv --alpha 0").exit_code == 2);
}

TEST_CASE("compare end to end") {
    const fs::path dir = temp_dir("multici_cli_cmp");
    CHECK(run_cli("bench --problems A1,F7 --runs 5 --base-seed 3 --out " + dir.string())
              .exit_code == 0);

    // Synthetic external results: identical values, so every row ties.
    std::ifstream js(dir / "results.json");
    const auto parsed = nlohmann::json::parse(js);
    std::ofstream theirs(dir / "theirs.csv");
    theirs << "problem,run_index,value\n";
    theirs.precision(17);
    for (const auto& pj : parsed.at("problems"))
        for (const auto& rj : pj.at("runs"))
            theirs << pj.at("problem").get<std::string>() << ','
                   << rj.at("run_index").get<int>() << ','
                   << rj.at("best_value").get<double>() << "\n";
    theirs.close();

    const CommandResult r = run_cli("compare --ours " + (dir / "results.json").string() +
                                    " --theirs " + (dir / "theirs.csv").string() + " --out " +
                                    dir.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("counts(+/-/=): 0/0/2") != std::string::npos);
    CHECK(fs::exists(dir / "per_problem.csv"));
    CHECK(fs::exists(dir / "multi_problem.csv"));
    fs::remove_all(dir);
}
