#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "multici/harness.hpp"

using namespace multici;

namespace {

ExperimentPlan tiny_plan() {
    ExperimentPlan plan;
    plan.problem_ids = {"A1"};
    plan.config = MultiCiConfig::desk_example();
    plan.config.max_attempts = 100;
    plan.n_runs = 3;
    plan.base_seed = 7;
    return plan;
}

}  // namespace

TEST_CASE("execute derives seeds and summaries") {
    const ExperimentResult r = execute(tiny_plan());
    REQUIRE(r.problems.size() == 1);
    const auto& pr = r.problems.front();
    CHECK(pr.problem_id == "A1");
    REQUIRE(pr.runs.size() == 3);
    CHECK(pr.runs[0].seed == 7);
    CHECK(pr.runs[1].seed == 8);
    CHECK(pr.runs[2].seed == 9);
    for (const auto& run : pr.runs) CHECK(run.ok);
    CHECK(pr.summary.n_runs == 3);

    // The summary is recomputable from the stored runs.
    std::vector<double> values, times;
    for (const auto& run : pr.runs) {
        values.push_back(run.result.best_value);
        times.push_back(run.result.wall_time_seconds);
    }
    const SummaryStats again = summarize(values, times);
    CHECK(again.mean == pr.summary.mean);
    CHECK(again.best == pr.summary.best);
    CHECK(again.std_dev == pr.summary.std_dev);
}

TEST_CASE("execute is reproducible modulo wall time") {
    const ExperimentResult a = execute(tiny_plan());
    const ExperimentResult b = execute(tiny_plan());
    REQUIRE(a.problems.size() == b.problems.size());
    for (std::size_t p = 0; p < a.problems.size(); ++p) {
        REQUIRE(a.problems[p].runs.size() == b.problems[p].runs.size());
        for (std::size_t i = 0; i < a.problems[p].runs.size(); ++i) {
            const auto& ra = a.problems[p].runs[i];
            const auto& rb = b.problems[p].runs[i];
            CHECK(ra.result.best_value == rb.result.best_value);
            CHECK(ra.result.attempts_used == rb.result.attempts_used);
            CHECK(ra.result.evaluations == rb.result.evaluations);
            CHECK(ra.result.best_qualities == rb.result.best_qualities);
        }
    }
}

TEST_CASE("worker count does not change values or ordering") {
    ExperimentPlan plan = tiny_plan();
    plan.problem_ids = {"A1", "F7", "F25"};
    plan.n_runs = 5;
    const ExperimentResult one = execute(plan, 1);
    const ExperimentResult many = execute(plan, 4);
    REQUIRE(one.problems.size() == many.problems.size());
    for (std::size_t p = 0; p < one.problems.size(); ++p) {
        CHECK(one.problems[p].problem_id == many.problems[p].problem_id);
        for (std::size_t i = 0; i < one.problems[p].runs.size(); ++i) {
            CHECK(one.problems[p].runs[i].result.best_value ==
                  many.problems[p].runs[i].result.best_value);
            CHECK(one.problems[p].runs[i].seed == many.problems[p].runs[i].seed);
        }
    }
}

TEST_CASE("plan counts over several problems") {
    ExperimentPlan plan = tiny_plan();
    plan.problem_ids = {"A1", "F7", "F10", "F25", "F43"};
    plan.n_runs = 30;
    plan.config.max_attempts = 30;  // keep it quick; counts are the point
    const ExperimentResult r = execute(plan, 4);
    CHECK(r.problems.size() == 5);
    int total = 0;
    for (const auto& pr : r.problems) {
        CHECK(pr.runs.size() == 30);
        CHECK(pr.summary.n_runs == 30);
        total += static_cast<int>(pr.runs.size());
    }
    CHECK(total == 150);
}

TEST_CASE("unknown problems fail before any run") {
    ExperimentPlan plan = tiny_plan();
    plan.problem_ids = {"A1", "nosuch"};
    CHECK_THROWS_AS((void)execute(plan), std::invalid_argument);
}

TEST_CASE("experiment persistence round trip") {
    const ExperimentResult r = execute(tiny_plan());
    const std::string text = experiment_to_json(r);
    const ExperimentResult back = experiment_from_json(text);
    // Serializing the reloaded object reproduces the bytes, so every numeric
    // field survived at full precision.
    CHECK(experiment_to_json(back) == text);

    const std::string path = (std::filesystem::temp_directory_path() / "multici_rt.json").string();
    save_experiment(r, path);
    const ExperimentResult loaded = load_experiment(path);
    CHECK(experiment_to_json(loaded) == text);
    std::remove(path.c_str());
}

TEST_CASE("summary csv shape") {
    const ExperimentResult r = execute(tiny_plan());
    std::stringstream ss;
    write_summary_csv(ss, r);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "problem,mean,std_dev,best,mean_runtime,n_runs");
    std::string row;
    std::getline(ss, row);
    CHECK(row.substr(0, 3) == "A1,");
}

TEST_CASE("external csv parsing") {
    {
        std::stringstream ss("problem,run_index,value\nF5,0,1.5\nF5,1,2.5\nF7,0,0.0\n");
        const ExternalResults r = parse_external_csv(ss, "abc");
        CHECK(r.algorithm == "abc");
        CHECK(r.per_problem.at("F5") == std::vector<double>{1.5, 2.5});
        CHECK(r.per_problem.at("F7") == std::vector<double>{0.0});
    }
    {
        std::stringstream ss("F5,1.5\nF5,2.5\n");
        const ExternalResults r = parse_external_csv(ss, "x");
        CHECK(r.per_problem.at("F5").size() == 2);
    }
    {
        std::stringstream empty;
        CHECK_THROWS_AS((void)parse_external_csv(empty, "x"), std::runtime_error);
    }
    {
        std::stringstream bad("F5,1.5\nF5,oops\n");
        try {
            (void)parse_external_csv(bad, "x");
            FAIL("expected a parse error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
}

TEST_CASE("compare against external results") {
    ExperimentPlan plan = tiny_plan();
    plan.problem_ids = {"A1", "F7"};
    plan.n_runs = 10;
    const ExperimentResult ours = execute(plan);

    // Identical external values: everything is a tie.
    ExternalResults same;
    same.algorithm = "mirror";
    for (const auto& pr : ours.problems)
        for (const auto& run : pr.runs)
            same.per_problem[pr.problem_id].push_back(run.result.best_value);
    const ComparisonTables eq = compare(ours, same, 0.05);
    CHECK(eq.pairwise.plus == 0);
    CHECK(eq.pairwise.minus == 0);
    CHECK(eq.pairwise.equal == 2);
    CHECK(eq.multi_problem.decision == Decision::equal);

    // Uniformly worse by 1.0 per run: sweep for the other side.
    ExternalResults worse = same;
    worse.algorithm = "worse";
    for (auto& [id, values] : worse.per_problem)
        for (auto& v : values) v += 1.0;
    const ComparisonTables w = compare(ours, worse, 0.05);
    CHECK(w.pairwise.plus == 2);
    CHECK(w.pairwise.minus == 0);
    CHECK(w.pairwise.equal == 0);
    CHECK(w.multi_problem.t_plus > w.multi_problem.t_minus);

    ExternalResults disjoint;
    disjoint.per_problem["F50"] = {1.0, 2.0};
    CHECK_THROWS_AS((void)compare(ours, disjoint, 0.05), std::invalid_argument);
}

TEST_CASE("plan json round trip") {
    ExperimentPlan plan = tiny_plan();
    plan.dimension = 10;
    plan.keep_traces = true;
    const ExperimentPlan back = ExperimentPlan::from_json(plan.to_json());
    CHECK(back.problem_ids == plan.problem_ids);
    CHECK(back.n_runs == plan.n_runs);
    CHECK(back.base_seed == plan.base_seed);
    REQUIRE(back.dimension.has_value());
    CHECK(*back.dimension == 10);
    CHECK(back.keep_traces);
    CHECK(back.config.samples_T == plan.config.samples_T);
}

TEST_CASE("traces are kept only on request") {
    ExperimentPlan plan = tiny_plan();
    plan.n_runs = 1;
    const ExperimentResult without = execute(plan);
    CHECK(without.problems.front().runs.front().result.trace.empty());

    plan.keep_traces = true;
    const ExperimentResult with = execute(plan);
    CHECK(!with.problems.front().runs.front().result.trace.empty());

    // Traces survive persistence when present.
    const ExperimentResult back = experiment_from_json(experiment_to_json(with));
    CHECK(back.problems.front().runs.front().result.trace.size() ==
          with.problems.front().runs.front().result.trace.size());
}
