#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace multici {

struct SummaryStats {
    double mean = 0.0;
    double std_dev = 0.0;  // sample standard deviation, n-1 denominator
    double best = 0.0;     // minimum
    double mean_runtime_seconds = 0.0;
    int n_runs = 0;
};

// Mean/sample-std/min of values, mean of runtimes. Throws on empty or
// mismatched inputs. A single sample reports std_dev 0.
SummaryStats summarize(std::span<const double> values, std::span<const double> runtimes);

enum class Decision { plus, minus, equal };
std::string to_string(Decision d);

struct WilcoxonResult {
    double t_plus = 0.0;
    double t_minus = 0.0;
    int n_effective = 0;  // pairs left after zero-difference removal
    double p_value = 1.0;
    double alpha = 0.05;
    Decision decision = Decision::equal;
};

// Two-sided Wilcoxon signed-rank test on paired samples, differences
// d_i = a_i - b_i with zero differences dropped and average ranks for ties.
// Exact p by full enumeration of sign assignments for n_effective <= 12;
// normal approximation with tie-corrected variance above that. The decision
// marks plus when a is statistically worse than b in the minimization sense
// (T+ dominant), minus when better, equal when H0 stands.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    double alpha);

// Exact two-sided p over all 2^n sign assignments of the given ranks:
// both tails at least as extreme as w = min(T+, T-), capped at 1. Ranks must
// be average ranks of 1..n (multiples of 0.5).
double wilcoxon_exact_p(std::span<const double> ranks, double w);

// Two-sided normal approximation on w = min(T+, T-). tie_adjustment is
// sum(t^3 - t) over tie groups. The 0.5 continuity correction is optional
// and off in the main path, which reproduces the customary published values.
double wilcoxon_normal_p(double w, int n, double tie_adjustment, bool continuity_correction);

// Ranks with ties replaced by the average of the positions they occupy.
std::vector<double> average_ranks(std::span<const double> values);

struct PairwiseSummary {
    std::vector<WilcoxonResult> per_problem;
    int plus = 0;
    int minus = 0;
    int equal = 0;
};

// One test per (other_runs, multici_runs) pair plus the +/-/= footer counts.
PairwiseSummary pairwise_table(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& per_problem_pairs,
    double alpha);

// Single test over per-problem means (multi-problem comparison).
WilcoxonResult multi_problem_compare(std::span<const double> mean_a,
                                     std::span<const double> mean_b, double alpha);

// CSV rows problem,p_value,t_plus,t_minus,winner.
void write_comparison_csv(std::ostream& os, const std::vector<std::string>& problems,
                          const std::vector<WilcoxonResult>& results);

}  // namespace multici
