#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "multici/problems.hpp"

namespace multici {

// How new qualities are drawn within a sampling interval.
enum class Sampling { uniform, gaussian };
std::string to_string(Sampling s);
Sampling sampling_from_string(const std::string& s);

// All Multi-CI tunables. Field names double as the JSON schema.
struct MultiCiConfig {
    int cohorts = 3;                // K
    int candidates_per_cohort = 5;  // C, one elite plus C-1 followers
    double reduction_factor = 0.98; // r in (0,1]
    int samples_T = 5;              // intra-group behavior variations
    int samples_TZ = 10;            // inter-group behavior variations
    double epsilon = 1e-10;
    int saturation_window = 25;     // successive attempts the convergence test must hold
    int max_attempts = 5000;
    std::optional<double> target_value;  // optional early stop: best <= target + tolerance
    double target_tolerance = 0.0;
    Sampling sampling = Sampling::uniform;
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument

    // K=3, C=5, r=0.98, T=5, TZ=10.
    static MultiCiConfig paper_defaults();
    // K=3, C=3, r=0.98, T=2, TZ=4, stop once the behavior drops below 1e-16.
    static MultiCiConfig desk_example();

    static MultiCiConfig from_json(const std::string& text);
    std::string to_json() const;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

// One solution agent: a quality vector, its behavior f(X), and the
// per-coordinate interval it currently samples from.
struct Candidate {
    std::vector<double> qualities;
    double behavior = 0.0;
    std::vector<Interval> sampling_interval;
};

struct EliteRef {
    int index = 0;     // candidate index within its cohort
    double value = 0;  // behavior at the moment of pool formation
};

struct CohortState {
    std::vector<std::vector<Candidate>> cohorts;  // K cohorts of C candidates
    std::vector<EliteRef> pool_z;                 // per-cohort elite, set each attempt
    int attempt = 1;                              // learning attempt counter l
    int saturation_counter = 0;
    double prev_max = 0.0;  // extremes of the previous attempt's behavior pool
    double prev_min = 0.0;
    std::uint64_t evaluations = 0;
};

struct SampleBatch {
    std::vector<std::vector<double>> qualities;  // count x N
    std::vector<double> behaviors;               // count
};

enum class StopReason { saturation, target, attempt_cap };
std::string to_string(StopReason r);

struct TraceRecord {
    int attempt = 0;
    std::vector<double> cohort_best;  // per-cohort minimum after the attempt
    double global_best = 0.0;
    double max_f = 0.0;
    double min_f = 0.0;
};

struct RunResult {
    double best_value = 0.0;
    std::vector<double> best_qualities;
    int attempts_used = 0;
    std::uint64_t evaluations = 0;
    StopReason converged_by = StopReason::attempt_cap;
    std::vector<TraceRecord> trace;
    double wall_time_seconds = 0.0;
};

// --- individual algorithm steps ---------------------------------------------

// K*C candidates uniform in the global bounds, every sampling interval set to
// the global box, behaviors evaluated, l = 1.
CohortState initialize(const MultiCiConfig& config, const ProblemSpec& problem,
                       std::mt19937_64& rng);

// Per-cohort (elite index, elite value); ties go to the lowest index.
std::vector<EliteRef> form_pool_z(const CohortState& state);

// Probability of following each non-elite candidate, inversely proportional
// to its (shifted, see below) behavior. When every behavior is positive the
// raw 1/f rule applies unchanged; otherwise the pool is shifted by
// f - min + 0.1*(max - min) + 1e-12 before inversion so any real-valued pool
// is admissible while preserving the ordering of selection pressure.
std::vector<double> follower_probabilities(std::span<const double> behaviors);

// Same rule over the pool-Z behaviors (one per cohort).
std::vector<double> pool_z_probabilities(std::span<const double> fz);

// Smallest index whose cumulative probability reaches u.
std::size_t roulette_pick(std::span<const double> probs, double u);
std::size_t roulette_select(std::span<const double> probs, std::mt19937_64& rng);

// Interval of half-width (followed.width()/2)*r around center, clipped to the
// global box.
Interval neighborhood_interval(double center, Interval followed, Interval global, double r);

// count quality vectors drawn coordinate-wise from intervals, each evaluated.
// Uniform draws stay inside the interval; gaussian draws center on the
// interval midpoint with sigma = half-width and clamp to the interval.
SampleBatch sample_batch(const std::vector<Interval>& intervals, int count, std::mt19937_64& rng,
                         const ProblemSpec& problem, Sampling sampling = Sampling::uniform);

struct Selection {
    double value = 0.0;
    bool from_inter = false;  // winner came from the TZ batch
    int index = 0;            // row within the winning batch
};

// Best behavior over a follower's intra (T) and inter (TZ) choices; ties go
// to the earliest intra row.
Selection select_best_behavior(std::span<const double> intra_behaviors,
                               std::span<const double> inter_behaviors);

// One full learning attempt: pool formation, intra- and inter-group sampling
// for every follower, best-behavior selection, elite carry-forward. All
// followers act on the attempt-start state; updates commit together.
void learning_attempt(CohortState& state, const MultiCiConfig& config, const ProblemSpec& problem,
                      std::mt19937_64& rng);

struct ConvergenceCheck {
    bool converged = false;
    int counter = 0;
};

// The three saturation conditions on consecutive behavior pools, evaluated
// with absolute values; the counter increments while all hold and resets
// otherwise. Converged once the counter reaches `window`.
ConvergenceCheck check_convergence(std::span<const double> current_f,
                                   std::span<const double> previous_f, double epsilon, int counter,
                                   int window);
ConvergenceCheck check_convergence_extremes(double cur_max, double cur_min, double prev_max,
                                            double prev_min, double epsilon, int counter,
                                            int window);

// The full loop: learning attempts until saturation, the optional target, or
// the attempt cap. Deterministic given (config, problem) including the seed.
RunResult run(const MultiCiConfig& config, const ProblemSpec& problem);

// --- trace I/O ---------------------------------------------------------------

// CSV with header attempt,cohort,best_value,global_best,max_F,min_F and one
// row per (attempt, cohort).
void write_trace_csv(std::ostream& os, const RunResult& result);
std::vector<TraceRecord> read_trace_csv(std::istream& is);

}  // namespace multici
