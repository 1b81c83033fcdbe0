// Command-line front end: problem catalog, single runs, experiment
// campaigns, comparison against published results, and trace reshaping.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "multici/harness.hpp"
#include "multici/optimizer.hpp"
#include "multici/problems.hpp"
#include "multici/stats.hpp"

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string default_out_dir() {
    if (const char* env = std::getenv("MULTICI_OUT_DIR")) return env;
    return ".";
}

struct ListOptions {
    std::string tag;
    std::string format = "table";
};

int cmd_list(const ListOptions& opt) {
    auto problems = opt.tag.empty() ? multici::list_problems() : multici::list_problems(opt.tag);
    if (opt.format == "json") {
        if (opt.tag.empty()) {
            std::cout << multici::catalog_json() << "\n";
        } else {
            // Filtered view; reuse the catalog serializer per entry.
            std::cout << "[";
            for (std::size_t i = 0; i < problems.size(); ++i) {
                const auto& p = problems[i];
                std::cout << (i ? ",\n " : "\n ") << "{\"id\":\"" << p.id << "\",\"name\":\""
                          << p.name << "\",\"dimension\":" << p.dimension << ",\"tag\":\""
                          << p.tag() << "\"}";
            }
            std::cout << "\n]\n";
        }
        return 0;
    }
    std::cout << "id    name                 dim  bounds             tag  known_optimum\n";
    for (const auto& p : problems) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-5s %-20s %3d  [%g, %g]%*s %s   ", p.id.c_str(),
                      p.name.c_str(), p.dimension, p.bounds.lower.front(),
                      p.bounds.upper.front(), 0, "", p.tag().c_str());
        std::cout << line;
        if (p.known_optimum)
            std::cout << *p.known_optimum;
        else
            std::cout << "-";
        std::cout << "\n";
    }
    return 0;
}

struct RunOptions {
    std::string problem;
    std::string config_path;
    std::string preset = "paper";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int dimension = 0;
    std::string trace_out;
};

multici::MultiCiConfig resolve_config(const std::string& config_path, const std::string& preset) {
    multici::MultiCiConfig cfg = preset == "appendix" ? multici::MultiCiConfig::desk_example()
                                                      : multici::MultiCiConfig::paper_defaults();
    if (!config_path.empty()) cfg = multici::MultiCiConfig::from_json(read_file(config_path));
    return cfg;
}

int cmd_run(const RunOptions& opt) {
    multici::MultiCiConfig cfg = resolve_config(opt.config_path, opt.preset);
    if (opt.seed_set) cfg.seed = opt.seed;
    const multici::ProblemSpec problem = opt.dimension > 0
                                             ? multici::get_problem(opt.problem, opt.dimension)
                                             : multici::get_problem(opt.problem);

    const multici::RunResult result = multici::run(cfg, problem);

    std::cout.precision(17);
    std::cout << "problem: " << problem.id << " (" << problem.name << ", dim "
              << problem.dimension << ")\n"
              << "f*: " << result.best_value << "\n"
              << "attempts: " << result.attempts_used << "\n"
              << "evaluations: " << result.evaluations << "\n"
              << "stopped_by: " << multici::to_string(result.converged_by) << "\n"
              << "wall_time_seconds: " << result.wall_time_seconds << "\n";

    if (!opt.trace_out.empty()) {
        std::ofstream os(opt.trace_out);
        if (!os) throw std::runtime_error("cannot write " + opt.trace_out);
        multici::write_trace_csv(os, result);
    }
    return 0;
}

struct BenchOptions {
    std::string plan_path;
    std::vector<std::string> problems;
    int runs = 30;
    std::uint64_t base_seed = 0;
    int dimension = 0;
    std::string config_path;
    std::string preset = "paper";
    bool keep_traces = false;
    std::string out_dir = default_out_dir();
    int workers = 1;
};

int cmd_bench(const BenchOptions& opt) {
    multici::ExperimentPlan plan;
    if (!opt.plan_path.empty()) {
        plan = multici::ExperimentPlan::from_json(read_file(opt.plan_path));
    } else {
        if (opt.problems.empty())
            throw std::runtime_error("bench: provide --plan or --problems");
        plan.problem_ids = opt.problems;
        plan.config = resolve_config(opt.config_path, opt.preset);
        plan.n_runs = opt.runs;
        plan.base_seed = opt.base_seed;
        if (opt.dimension > 0) plan.dimension = opt.dimension;
        plan.keep_traces = opt.keep_traces;
    }

    const multici::ExperimentResult result = multici::execute(plan, opt.workers);

    fs::create_directories(opt.out_dir);
    const fs::path json_path = fs::path(opt.out_dir) / "results.json";
    const fs::path csv_path = fs::path(opt.out_dir) / "summary.csv";
    multici::save_experiment(result, json_path.string());
    {
        std::ofstream os(csv_path);
        if (!os) throw std::runtime_error("cannot write " + csv_path.string());
        multici::write_summary_csv(os, result);
    }

    std::cout.precision(17);
    std::cout << "problem,mean,std_dev,best,mean_runtime,n_runs\n";
    for (const auto& pr : result.problems) {
        std::cout << pr.problem_id << ',' << pr.summary.mean << ',' << pr.summary.std_dev << ','
                  << pr.summary.best << ',' << pr.summary.mean_runtime_seconds << ','
                  << pr.summary.n_runs << "\n";
    }
    std::cout << "results: " << json_path.string() << "\n";
    std::cout << "summary: " << csv_path.string() << "\n";
    return 0;
}

struct CompareOptions {
    std::string ours_path;
    std::string theirs_path;
    double alpha = 0.05;
    std::string out_dir = default_out_dir();
};

int cmd_compare(const CompareOptions& opt) {
    const multici::ExperimentResult ours = multici::load_experiment(opt.ours_path);
    const multici::ExternalResults theirs = multici::ingest_external(opt.theirs_path);
    const multici::ComparisonTables tables = multici::compare(ours, theirs, opt.alpha);

    // Table-7-style winner: the side whose values rank lower overall, named
    // regardless of significance.
    const auto& m = tables.multi_problem;
    const std::string multi_winner =
        m.t_plus > m.t_minus ? "Multi-CI" : (m.t_plus < m.t_minus ? theirs.algorithm : "none");

    fs::create_directories(opt.out_dir);
    const fs::path per_path = fs::path(opt.out_dir) / "per_problem.csv";
    const fs::path multi_path = fs::path(opt.out_dir) / "multi_problem.csv";
    {
        std::ofstream os(per_path);
        if (!os) throw std::runtime_error("cannot write " + per_path.string());
        multici::write_comparison_csv(os, tables.problems, tables.pairwise.per_problem);
    }
    {
        std::ofstream os(multi_path);
        if (!os) throw std::runtime_error("cannot write " + multi_path.string());
        os << "comparison,p_value,t_plus,t_minus,winner\n";
        os.precision(17);
        os << theirs.algorithm << " vs Multi-CI," << m.p_value << ',' << m.t_plus << ','
           << m.t_minus << ',' << multi_winner << '\n';
    }

    std::cout.precision(17);
    std::cout << "problem,p_value,t_plus,t_minus,winner\n";
    for (std::size_t i = 0; i < tables.problems.size(); ++i) {
        const auto& r = tables.pairwise.per_problem[i];
        std::cout << tables.problems[i] << ',' << r.p_value << ',' << r.t_plus << ','
                  << r.t_minus << ',' << multici::to_string(r.decision) << "\n";
    }
    std::cout << "counts(+/-/=): " << tables.pairwise.plus << '/' << tables.pairwise.minus << '/'
              << tables.pairwise.equal << "\n";
    std::cout << "multi_problem: p=" << m.p_value << " T+=" << m.t_plus << " T-=" << m.t_minus
              << " winner=" << multi_winner << "\n";
    return 0;
}

struct TraceOptions {
    std::string in_path;
    bool per_cohort = false;
    bool best = false;
};

int cmd_trace(const TraceOptions& opt) {
    std::ifstream is(opt.in_path);
    if (!is) throw std::runtime_error("cannot read " + opt.in_path);
    const auto records = multici::read_trace_csv(is);

    std::cout.precision(17);
    if (opt.per_cohort) {
        const std::size_t k = records.front().cohort_best.size();
        std::cout << "attempt";
        for (std::size_t i = 1; i <= k; ++i) std::cout << ",cohort" << i;
        std::cout << "\n";
        for (const auto& rec : records) {
            std::cout << rec.attempt;
            for (double v : rec.cohort_best) std::cout << ',' << v;
            std::cout << "\n";
        }
    } else {
        std::cout << "attempt,global_best\n";
        for (const auto& rec : records) std::cout << rec.attempt << ',' << rec.global_best << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-CI: multi-cohort intelligence optimization toolkit"};
    app.require_subcommand(1);

    ListOptions list_opt;
    auto* list_cmd = app.add_subcommand("list", "Show the problem catalog");
    list_cmd->add_option("--tag", list_opt.tag, "Filter by tag (US, UN, MS, MN)")
        ->check(CLI::IsMember({"US", "UN", "MS", "MN", "us", "un", "ms", "mn"}));
    list_cmd->add_option("--format", list_opt.format, "Output format")
        ->check(CLI::IsMember({"table", "json"}));

    RunOptions run_opt;
    auto* run_cmd = app.add_subcommand("run", "Run one optimization");
    run_cmd->add_option("--problem", run_opt.problem, "Problem id or name")->required();
    run_cmd->add_option("--config", run_opt.config_path, "Config JSON file");
    run_cmd->add_option("--preset", run_opt.preset, "Named parameter preset")
        ->check(CLI::IsMember({"paper", "appendix"}));
    auto* seed_opt = run_cmd->add_option("--seed", run_opt.seed, "RNG seed");
    run_cmd->add_option("--dimension", run_opt.dimension, "Dimension override")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--trace-out", run_opt.trace_out, "Write the convergence trace CSV here");

    BenchOptions bench_opt;
    auto* bench_cmd = app.add_subcommand("bench", "Run a multi-run experiment campaign");
    bench_cmd->add_option("--plan", bench_opt.plan_path, "Experiment plan JSON file");
    bench_cmd->add_option("--problems", bench_opt.problems, "Problem ids")->delimiter(',');
    bench_cmd->add_option("--runs", bench_opt.runs, "Runs per problem")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--base-seed", bench_opt.base_seed, "Seed of run 0; run i adds i");
    bench_cmd->add_option("--dimension", bench_opt.dimension, "Dimension override")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--config", bench_opt.config_path, "Config JSON file");
    bench_cmd->add_option("--preset", bench_opt.preset, "Named parameter preset")
        ->check(CLI::IsMember({"paper", "appendix"}));
    bench_cmd->add_flag("--keep-traces", bench_opt.keep_traces, "Keep per-run traces in results");
    bench_cmd->add_option("--out", bench_opt.out_dir, "Output directory");
    bench_cmd->add_option("--workers", bench_opt.workers, "Worker threads")
        ->check(CLI::PositiveNumber);

    CompareOptions cmp_opt;
    auto* cmp_cmd = app.add_subcommand("compare", "Wilcoxon comparison against external results");
    cmp_cmd->add_option("--ours", cmp_opt.ours_path, "results.json from bench")->required();
    cmp_cmd->add_option("--theirs", cmp_opt.theirs_path, "External results CSV")->required();
    cmp_cmd->add_option("--alpha", cmp_opt.alpha, "Significance level")
        ->check(CLI::Range(0.0, 1.0).active(true))
        ->check([](const std::string& s) {
            const double v = std::stod(s);
            return (v > 0.0 && v < 1.0) ? std::string{} : std::string{"alpha must be in (0,1)"};
        });
    cmp_cmd->add_option("--out", cmp_opt.out_dir, "Output directory");

    TraceOptions trace_opt;
    auto* trace_cmd = app.add_subcommand("trace", "Reshape a trace CSV for plotting");
    trace_cmd->add_option("--in", trace_opt.in_path, "Trace CSV from run --trace-out")->required();
    auto* pc = trace_cmd->add_flag("--per-cohort", trace_opt.per_cohort, "Per-cohort best columns");
    trace_cmd->add_flag("--best", trace_opt.best, "Attempt vs global best")->excludes(pc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // 0 covers --help/--version
    }

    try {
        if (app.got_subcommand(list_cmd)) return cmd_list(list_opt);
        if (app.got_subcommand(run_cmd)) {
            run_opt.seed_set = seed_opt->count() > 0;
            return cmd_run(run_opt);
        }
        if (app.got_subcommand(bench_cmd)) return cmd_bench(bench_opt);
        if (app.got_subcommand(cmp_cmd)) return cmd_compare(cmp_opt);
        if (app.got_subcommand(trace_cmd)) return cmd_trace(trace_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
