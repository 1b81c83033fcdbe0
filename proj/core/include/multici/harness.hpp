#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "multici/optimizer.hpp"
#include "multici/stats.hpp"

namespace multici {

// A seeded multi-run campaign. Run i of every problem uses seed
// base_seed + i, which keeps runs independent and reproducible under any
// worker count.
struct ExperimentPlan {
    std::vector<std::string> problem_ids;
    MultiCiConfig config;  // template; the per-run seed is derived
    int n_runs = 30;
    std::uint64_t base_seed = 0;
    std::optional<int> dimension;  // optional override applied to every problem
    bool keep_traces = false;      // traces are dropped from results unless set

    static ExperimentPlan from_json(const std::string& text);
    std::string to_json() const;
};

struct RunRecord {
    int run_index = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;  // set when ok is false
    RunResult result;
};

struct ProblemResults {
    std::string problem_id;
    int dimension = 0;
    std::vector<RunRecord> runs;
    SummaryStats summary;  // over the successful runs' best values
};

struct ExperimentResult {
    ExperimentPlan plan;
    std::string created_at;  // wall-clock timestamp, informational only
    std::string version;
    std::vector<ProblemResults> problems;
};

// Executes the plan, fanning runs out over `workers` threads. Results are
// assembled in (problem, run index) order, so the output is identical for
// any worker count. Per-run failures are recorded, not fatal.
ExperimentResult execute(const ExperimentPlan& plan, int workers = 1);

std::string experiment_to_json(const ExperimentResult& result);
ExperimentResult experiment_from_json(const std::string& text);
void save_experiment(const ExperimentResult& result, const std::string& path);
ExperimentResult load_experiment(const std::string& path);

// Table-shaped summary: problem,mean,std_dev,best,mean_runtime,n_runs.
void write_summary_csv(std::ostream& os, const ExperimentResult& result);

// Externally published per-run final values for one competitor algorithm.
struct ExternalResults {
    std::string algorithm;
    std::map<std::string, std::vector<double>> per_problem;
};

// Parses `problem,run_index,value` or `problem,value` rows (one optional
// header line). Malformed rows report their line number. The algorithm name
// is taken from the file name.
ExternalResults ingest_external(const std::string& path);
ExternalResults parse_external_csv(std::istream& is, const std::string& algorithm);

struct ComparisonTables {
    std::vector<std::string> problems;  // overlapping ids, catalog order
    PairwiseSummary pairwise;           // one row per problem, a=external b=ours
    WilcoxonResult multi_problem;       // over per-problem means
};

// Per-problem Wilcoxon decisions plus the multi-problem mean comparison over
// the problems both sides cover. Throws when the problem sets are disjoint.
ComparisonTables compare(const ExperimentResult& experiment, const ExternalResults& external,
                         double alpha);

}  // namespace multici
