#include "multici/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace multici {

namespace {

constexpr const char* kVersionTag = "multici-1.0.0";

std::string now_iso8601() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json run_record_to_json(const RunRecord& r) {
    nlohmann::json j;
    j["run_index"] = r.run_index;
    j["seed"] = r.seed;
    j["ok"] = r.ok;
    if (!r.ok) j["error"] = r.error;
    j["best_value"] = r.result.best_value;
    j["best_qualities"] = r.result.best_qualities;
    j["attempts_used"] = r.result.attempts_used;
    j["evaluations"] = r.result.evaluations;
    j["converged_by"] = to_string(r.result.converged_by);
    j["wall_time_seconds"] = r.result.wall_time_seconds;
    if (!r.result.trace.empty()) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& rec : r.result.trace) {
            rows.push_back({{"attempt", rec.attempt},
                            {"cohort_best", rec.cohort_best},
                            {"global_best", rec.global_best},
                            {"max_F", rec.max_f},
                            {"min_F", rec.min_f}});
        }
        j["trace"] = std::move(rows);
    }
    return j;
}

StopReason stop_reason_from_string(const std::string& s) {
    if (s == "saturation") return StopReason::saturation;
    if (s == "target") return StopReason::target;
    if (s == "attempt_cap") return StopReason::attempt_cap;
    throw std::runtime_error("unknown stop reason: " + s);
}

RunRecord run_record_from_json(const nlohmann::json& j) {
    RunRecord r;
    r.run_index = j.at("run_index").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.ok = j.at("ok").get<bool>();
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    r.result.best_value = j.at("best_value").get<double>();
    r.result.best_qualities = j.at("best_qualities").get<std::vector<double>>();
    r.result.attempts_used = j.at("attempts_used").get<int>();
    r.result.evaluations = j.at("evaluations").get<std::uint64_t>();
    r.result.converged_by = stop_reason_from_string(j.at("converged_by").get<std::string>());
    r.result.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    if (j.contains("trace")) {
        for (const auto& row : j.at("trace")) {
            TraceRecord rec;
            rec.attempt = row.at("attempt").get<int>();
            rec.cohort_best = row.at("cohort_best").get<std::vector<double>>();
            rec.global_best = row.at("global_best").get<double>();
            rec.max_f = row.at("max_F").get<double>();
            rec.min_f = row.at("min_F").get<double>();
            r.result.trace.push_back(std::move(rec));
        }
    }
    return r;
}

SummaryStats summarize_runs(const std::vector<RunRecord>& runs) {
    std::vector<double> values, times;
    for (const auto& r : runs) {
        if (!r.ok) continue;
        values.push_back(r.result.best_value);
        times.push_back(r.result.wall_time_seconds);
    }
    if (values.empty()) return SummaryStats{};
    return summarize(values, times);
}

}  // namespace

ExperimentPlan ExperimentPlan::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ExperimentPlan plan;
    plan.problem_ids = j.at("problems").get<std::vector<std::string>>();
    if (j.contains("config")) plan.config = MultiCiConfig::from_json(j.at("config").dump());
    if (j.contains("runs")) plan.n_runs = j.at("runs").get<int>();
    if (j.contains("base_seed")) plan.base_seed = j.at("base_seed").get<std::uint64_t>();
    if (j.contains("dimension") && !j.at("dimension").is_null())
        plan.dimension = j.at("dimension").get<int>();
    if (j.contains("keep_traces")) plan.keep_traces = j.at("keep_traces").get<bool>();
    return plan;
}

std::string ExperimentPlan::to_json() const {
    nlohmann::json j;
    j["problems"] = problem_ids;
    j["config"] = nlohmann::json::parse(config.to_json());
    j["runs"] = n_runs;
    j["base_seed"] = base_seed;
    if (dimension)
        j["dimension"] = *dimension;
    else
        j["dimension"] = nullptr;
    j["keep_traces"] = keep_traces;
    return j.dump(2);
}

ExperimentResult execute(const ExperimentPlan& plan, int workers) {
    if (plan.n_runs < 1) throw std::invalid_argument("plan: n_runs must be >= 1");
    if (plan.problem_ids.empty()) throw std::invalid_argument("plan: no problems");
    plan.config.validate();

    // Resolve every problem up front so unknown ids fail before any work.
    std::vector<ProblemSpec> problems;
    problems.reserve(plan.problem_ids.size());
    for (const auto& id : plan.problem_ids) {
        problems.push_back(plan.dimension ? get_problem(id, *plan.dimension) : get_problem(id));
    }

    ExperimentResult out;
    out.plan = plan;
    out.created_at = now_iso8601();
    out.version = kVersionTag;
    out.problems.resize(problems.size());
    for (std::size_t p = 0; p < problems.size(); ++p) {
        out.problems[p].problem_id = problems[p].id;
        out.problems[p].dimension = problems[p].dimension;
        out.problems[p].runs.resize(static_cast<std::size_t>(plan.n_runs));
    }

    const std::size_t total = problems.size() * static_cast<std::size_t>(plan.n_runs);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total) return;
            const std::size_t p = task / static_cast<std::size_t>(plan.n_runs);
            const int i = static_cast<int>(task % static_cast<std::size_t>(plan.n_runs));
            RunRecord& rec = out.problems[p].runs[static_cast<std::size_t>(i)];
            rec.run_index = i;
            rec.seed = plan.base_seed + static_cast<std::uint64_t>(i);
            MultiCiConfig cfg = plan.config;
            cfg.seed = rec.seed;
            try {
                rec.result = run(cfg, problems[p]);
                if (!plan.keep_traces) rec.result.trace.clear();
                rec.ok = true;
            } catch (const std::exception& e) {
                rec.ok = false;
                rec.error = e.what();
            }
        }
    };

    const int nw = std::max(1, workers);
    if (nw == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(nw));
        for (int t = 0; t < nw; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    for (auto& pr : out.problems) pr.summary = summarize_runs(pr.runs);
    return out;
}

std::string experiment_to_json(const ExperimentResult& result) {
    nlohmann::json j;
    j["plan"] = nlohmann::json::parse(result.plan.to_json());
    j["created_at"] = result.created_at;
    j["version"] = result.version;
    nlohmann::json probs = nlohmann::json::array();
    for (const auto& pr : result.problems) {
        nlohmann::json pj;
        pj["problem"] = pr.problem_id;
        pj["dimension"] = pr.dimension;
        nlohmann::json runs = nlohmann::json::array();
        for (const auto& r : pr.runs) runs.push_back(run_record_to_json(r));
        pj["runs"] = std::move(runs);
        pj["summary"] = {{"mean", pr.summary.mean},
                         {"std_dev", pr.summary.std_dev},
                         {"best", pr.summary.best},
                         {"mean_runtime_seconds", pr.summary.mean_runtime_seconds},
                         {"n_runs", pr.summary.n_runs}};
        probs.push_back(std::move(pj));
    }
    j["problems"] = std::move(probs);
    return j.dump(2);
}

ExperimentResult experiment_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ExperimentResult out;
    out.plan = ExperimentPlan::from_json(j.at("plan").dump());
    out.created_at = j.at("created_at").get<std::string>();
    out.version = j.at("version").get<std::string>();
    for (const auto& pj : j.at("problems")) {
        ProblemResults pr;
        pr.problem_id = pj.at("problem").get<std::string>();
        pr.dimension = pj.at("dimension").get<int>();
        for (const auto& rj : pj.at("runs")) pr.runs.push_back(run_record_from_json(rj));
        const auto& sj = pj.at("summary");
        pr.summary.mean = sj.at("mean").get<double>();
        pr.summary.std_dev = sj.at("std_dev").get<double>();
        pr.summary.best = sj.at("best").get<double>();
        pr.summary.mean_runtime_seconds = sj.at("mean_runtime_seconds").get<double>();
        pr.summary.n_runs = sj.at("n_runs").get<int>();
        out.problems.push_back(std::move(pr));
    }
    return out;
}

void save_experiment(const ExperimentResult& result, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << experiment_to_json(result);
}

ExperimentResult load_experiment(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return experiment_from_json(ss.str());
}

void write_summary_csv(std::ostream& os, const ExperimentResult& result) {
    os << "problem,mean,std_dev,best,mean_runtime,n_runs\n";
    os.precision(17);
    for (const auto& pr : result.problems) {
        os << pr.problem_id << ',' << pr.summary.mean << ',' << pr.summary.std_dev << ','
           << pr.summary.best << ',' << pr.summary.mean_runtime_seconds << ','
           << pr.summary.n_runs << '\n';
    }
}

ExternalResults parse_external_csv(std::istream& is, const std::string& algorithm) {
    ExternalResults out;
    out.algorithm = algorithm;
    std::string line;
    int line_no = 0;
    bool any = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && (line == "problem,run_index,value" || line == "problem,value"))
            continue;
        std::istringstream ss(line);
        std::vector<std::string> fields;
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 2 && fields.size() != 3)
            throw std::runtime_error("external csv: line " + std::to_string(line_no) +
                                     ": expected 2 or 3 fields");
        double value = 0.0;
        try {
            std::size_t pos = 0;
            value = std::stod(fields.back(), &pos);
            if (pos != fields.back().size()) throw std::invalid_argument("trailing chars");
        } catch (const std::exception&) {
            throw std::runtime_error("external csv: line " + std::to_string(line_no) +
                                     ": non-numeric value field '" + fields.back() + "'");
        }
        out.per_problem[fields.front()].push_back(value);
        any = true;
    }
    if (!any) throw std::runtime_error("external csv: no data rows");
    return out;
}

ExternalResults ingest_external(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    return parse_external_csv(is, std::filesystem::path(path).stem().string());
}

ComparisonTables compare(const ExperimentResult& experiment, const ExternalResults& external,
                         double alpha) {
    ComparisonTables tables;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
    std::vector<double> mean_theirs, mean_ours;

    for (const auto& pr : experiment.problems) {
        auto it = external.per_problem.find(pr.problem_id);
        if (it == external.per_problem.end()) continue;
        std::vector<double> ours;
        for (const auto& r : pr.runs)
            if (r.ok) ours.push_back(r.result.best_value);
        if (ours.empty()) continue;
        tables.problems.push_back(pr.problem_id);
        mean_theirs.push_back(std::accumulate(it->second.begin(), it->second.end(), 0.0) /
                              static_cast<double>(it->second.size()));
        mean_ours.push_back(std::accumulate(ours.begin(), ours.end(), 0.0) /
                            static_cast<double>(ours.size()));
        pairs.emplace_back(it->second, std::move(ours));
    }
    if (tables.problems.empty())
        throw std::invalid_argument("compare: no overlapping problems");

    tables.pairwise = pairwise_table(pairs, alpha);
    tables.multi_problem = multi_problem_compare(mean_theirs, mean_ours, alpha);
    return tables;
}

}  // namespace multici
