#include "multici/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "multici/rng.hpp"

namespace multici {

namespace {

// Shift constants for non-positive behavior pools.
constexpr double kShiftDelta = 0.1;
constexpr double kShiftFloor = 1e-12;

std::vector<double> inverse_fitness_probabilities(std::span<const double> behaviors) {
    if (behaviors.empty())
        throw std::invalid_argument("probabilities: empty behavior pool");
    const auto [mn_it, mx_it] = std::minmax_element(behaviors.begin(), behaviors.end());
    const double mn = *mn_it, mx = *mx_it;

    std::vector<double> inv(behaviors.size());
    bool finite = true;
    if (mn > 0.0) {
        for (std::size_t i = 0; i < behaviors.size(); ++i) {
            inv[i] = 1.0 / behaviors[i];
            finite = finite && std::isfinite(inv[i]);
        }
    }
    if (mn <= 0.0 || !finite) {
        for (std::size_t i = 0; i < behaviors.size(); ++i) {
            const double g = behaviors[i] - mn + kShiftDelta * (mx - mn) + kShiftFloor;
            inv[i] = 1.0 / g;
        }
    }
    double total = 0.0;
    for (double v : inv) total += v;
    if (!(total > 0.0) || !std::isfinite(total)) {
        // Degenerate pool (all weights over/underflowed): fall back to uniform.
        std::fill(inv.begin(), inv.end(), 1.0 / static_cast<double>(inv.size()));
        return inv;
    }
    for (double& v : inv) v /= total;
    return inv;
}

struct PoolExtremes {
    double max_f = -std::numeric_limits<double>::infinity();
    double min_f = std::numeric_limits<double>::infinity();
};

PoolExtremes pool_extremes(const CohortState& state) {
    PoolExtremes e;
    for (const auto& cohort : state.cohorts) {
        for (const auto& c : cohort) {
            e.max_f = std::max(e.max_f, c.behavior);
            e.min_f = std::min(e.min_f, c.behavior);
        }
    }
    return e;
}

}  // namespace

void MultiCiConfig::validate() const {
    if (cohorts < 1) throw std::invalid_argument("config: cohorts must be >= 1");
    if (candidates_per_cohort < 2)
        throw std::invalid_argument("config: candidates_per_cohort must be >= 2 "
                                    "(one elite plus at least one follower)");
    if (!(reduction_factor > 0.0 && reduction_factor <= 1.0))
        throw std::invalid_argument("config: reduction_factor must be in (0, 1]");
    if (samples_T < 1) throw std::invalid_argument("config: samples_T must be >= 1");
    if (samples_TZ < 1) throw std::invalid_argument("config: samples_TZ must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("config: epsilon must be > 0");
    if (saturation_window < 1)
        throw std::invalid_argument("config: saturation_window must be >= 1");
    if (max_attempts < 1) throw std::invalid_argument("config: max_attempts must be >= 1");
    if (target_tolerance < 0.0)
        throw std::invalid_argument("config: target_tolerance must be >= 0");
}

MultiCiConfig MultiCiConfig::paper_defaults() { return MultiCiConfig{}; }

MultiCiConfig MultiCiConfig::desk_example() {
    MultiCiConfig c;
    c.candidates_per_cohort = 3;
    c.samples_T = 2;
    c.samples_TZ = 4;
    c.target_value = 0.0;
    c.target_tolerance = 1e-16;
    return c;
}

MultiCiConfig MultiCiConfig::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    MultiCiConfig c;
    if (j.contains("cohorts")) c.cohorts = j.at("cohorts").get<int>();
    if (j.contains("candidates_per_cohort"))
        c.candidates_per_cohort = j.at("candidates_per_cohort").get<int>();
    if (j.contains("reduction_factor")) c.reduction_factor = j.at("reduction_factor").get<double>();
    if (j.contains("samples_T")) c.samples_T = j.at("samples_T").get<int>();
    if (j.contains("samples_TZ")) c.samples_TZ = j.at("samples_TZ").get<int>();
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("saturation_window")) c.saturation_window = j.at("saturation_window").get<int>();
    if (j.contains("max_attempts")) c.max_attempts = j.at("max_attempts").get<int>();
    if (j.contains("target_value") && !j.at("target_value").is_null())
        c.target_value = j.at("target_value").get<double>();
    if (j.contains("target_tolerance")) c.target_tolerance = j.at("target_tolerance").get<double>();
    if (j.contains("sampling")) c.sampling = sampling_from_string(j.at("sampling").get<std::string>());
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    c.validate();
    return c;
}

std::string MultiCiConfig::to_json() const {
    nlohmann::json j;
    j["cohorts"] = cohorts;
    j["candidates_per_cohort"] = candidates_per_cohort;
    j["reduction_factor"] = reduction_factor;
    j["samples_T"] = samples_T;
    j["samples_TZ"] = samples_TZ;
    j["epsilon"] = epsilon;
    j["saturation_window"] = saturation_window;
    j["max_attempts"] = max_attempts;
    if (target_value)
        j["target_value"] = *target_value;
    else
        j["target_value"] = nullptr;
    j["target_tolerance"] = target_tolerance;
    j["sampling"] = to_string(sampling);
    j["seed"] = seed;
    return j.dump(2);
}

std::string to_string(Sampling s) {
    return s == Sampling::uniform ? "uniform" : "gaussian";
}

Sampling sampling_from_string(const std::string& s) {
    if (s == "uniform") return Sampling::uniform;
    if (s == "gaussian") return Sampling::gaussian;
    throw std::invalid_argument("unknown sampling strategy: " + s);
}

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::saturation: return "saturation";
        case StopReason::target: return "target";
        case StopReason::attempt_cap: return "attempt_cap";
    }
    return "unknown";
}

CohortState initialize(const MultiCiConfig& config, const ProblemSpec& problem,
                       std::mt19937_64& rng) {
    config.validate();
    problem.bounds.validate();

    const int n = problem.dimension;
    std::vector<Interval> global(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        global[static_cast<std::size_t>(i)] = {problem.bounds.lower[static_cast<std::size_t>(i)],
                                               problem.bounds.upper[static_cast<std::size_t>(i)]};

    CohortState state;
    state.cohorts.resize(static_cast<std::size_t>(config.cohorts));
    for (auto& cohort : state.cohorts) {
        cohort.resize(static_cast<std::size_t>(config.candidates_per_cohort));
        for (auto& cand : cohort) {
            cand.qualities.resize(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                cand.qualities[static_cast<std::size_t>(i)] =
                    uniform_in(rng, global[static_cast<std::size_t>(i)].lo,
                               global[static_cast<std::size_t>(i)].hi);
            cand.sampling_interval = global;
            cand.behavior = problem.evaluate(cand.qualities);
            ++state.evaluations;
        }
    }
    state.attempt = 1;
    const auto e = pool_extremes(state);
    state.prev_max = e.max_f;
    state.prev_min = e.min_f;
    return state;
}

std::vector<EliteRef> form_pool_z(const CohortState& state) {
    std::vector<EliteRef> pool;
    pool.reserve(state.cohorts.size());
    for (const auto& cohort : state.cohorts) {
        EliteRef best{0, cohort.front().behavior};
        for (std::size_t c = 1; c < cohort.size(); ++c) {
            if (cohort[c].behavior < best.value) {
                best.index = static_cast<int>(c);
                best.value = cohort[c].behavior;
            }
        }
        pool.push_back(best);
    }
    return pool;
}

std::vector<double> follower_probabilities(std::span<const double> behaviors) {
    return inverse_fitness_probabilities(behaviors);
}

std::vector<double> pool_z_probabilities(std::span<const double> fz) {
    return inverse_fitness_probabilities(fz);
}

std::size_t roulette_pick(std::span<const double> probs, double u) {
    if (probs.empty()) throw std::invalid_argument("roulette: empty probability sequence");
    double cum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (cum >= u) return i;
    }
    return probs.size() - 1;  // u beyond the rounded cumulative sum
}

std::size_t roulette_select(std::span<const double> probs, std::mt19937_64& rng) {
    return roulette_pick(probs, uniform01(rng));
}

Interval neighborhood_interval(double center, Interval followed, Interval global, double r) {
    const double half = (followed.width() / 2.0) * r;
    Interval out{center - half, center + half};
    out.lo = std::max(out.lo, global.lo);
    out.hi = std::min(out.hi, global.hi);
    return out;
}

SampleBatch sample_batch(const std::vector<Interval>& intervals, int count, std::mt19937_64& rng,
                         const ProblemSpec& problem, Sampling sampling) {
    SampleBatch batch;
    batch.qualities.resize(static_cast<std::size_t>(count));
    batch.behaviors.resize(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) {
        auto& row = batch.qualities[static_cast<std::size_t>(t)];
        row.resize(intervals.size());
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            if (sampling == Sampling::uniform) {
                row[i] = uniform_in(rng, intervals[i].lo, intervals[i].hi);
            } else {
                const double mid = (intervals[i].lo + intervals[i].hi) / 2.0;
                const double sigma = intervals[i].width() / 2.0;
                const double x = mid + sigma * normal01(rng);
                row[i] = std::clamp(x, intervals[i].lo, intervals[i].hi);
            }
        }
        batch.behaviors[static_cast<std::size_t>(t)] = problem.evaluate(row);
    }
    return batch;
}

Selection select_best_behavior(std::span<const double> intra_behaviors,
                               std::span<const double> inter_behaviors) {
    if (intra_behaviors.empty() && inter_behaviors.empty())
        throw std::invalid_argument("select_best_behavior: no choices");
    Selection sel;
    bool first = true;
    for (std::size_t t = 0; t < intra_behaviors.size(); ++t) {
        if (first || intra_behaviors[t] < sel.value) {
            sel = {intra_behaviors[t], false, static_cast<int>(t)};
            first = false;
        }
    }
    for (std::size_t t = 0; t < inter_behaviors.size(); ++t) {
        if (first || inter_behaviors[t] < sel.value) {
            sel = {inter_behaviors[t], true, static_cast<int>(t)};
            first = false;
        }
    }
    return sel;
}

void learning_attempt(CohortState& state, const MultiCiConfig& config, const ProblemSpec& problem,
                      std::mt19937_64& rng) {
    const int n = problem.dimension;
    std::vector<Interval> global(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        global[static_cast<std::size_t>(i)] = {problem.bounds.lower[static_cast<std::size_t>(i)],
                                               problem.bounds.upper[static_cast<std::size_t>(i)]};

    state.pool_z = form_pool_z(state);

    std::vector<double> fz(state.pool_z.size());
    for (std::size_t k = 0; k < state.pool_z.size(); ++k) fz[k] = state.pool_z[k].value;
    const std::vector<double> pz_probs = pool_z_probabilities(fz);

    // Follower index lists and intra-group probabilities, from the
    // attempt-start pool.
    const std::size_t num_cohorts = state.cohorts.size();
    std::vector<std::vector<int>> followers(num_cohorts);
    std::vector<std::vector<double>> intra_probs(num_cohorts);
    for (std::size_t k = 0; k < num_cohorts; ++k) {
        const auto& cohort = state.cohorts[k];
        std::vector<double> vals;
        for (std::size_t c = 0; c < cohort.size(); ++c) {
            if (static_cast<int>(c) == state.pool_z[k].index) continue;
            followers[k].push_back(static_cast<int>(c));
            vals.push_back(cohort[c].behavior);
        }
        intra_probs[k] = follower_probabilities(vals);
    }

    // All followers act on the attempt-start state; commit afterwards.
    std::vector<std::vector<Candidate>> staged(num_cohorts);
    for (std::size_t k = 0; k < num_cohorts; ++k) {
        for (int follower_idx : followers[k]) {
            // Intra-group: roulette over the cohort's non-elite candidates,
            // then T samples in the followed candidate's neighborhood.
            const std::size_t pick = roulette_select(intra_probs[k], rng);
            const Candidate& followed = state.cohorts[k][static_cast<std::size_t>(
                followers[k][pick])];
            std::vector<Interval> intra(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                const auto ui = static_cast<std::size_t>(i);
                intra[ui] = neighborhood_interval(followed.qualities[ui],
                                                  followed.sampling_interval[ui], global[ui],
                                                  config.reduction_factor);
            }
            SampleBatch batch_t = sample_batch(intra, config.samples_T, rng, problem,
                                               config.sampling);

            // Inter-group: roulette over pool Z, then TZ samples around the
            // chosen elite.
            const std::size_t elite_cohort = roulette_select(pz_probs, rng);
            const Candidate& elite = state.cohorts[elite_cohort][static_cast<std::size_t>(
                state.pool_z[elite_cohort].index)];
            std::vector<Interval> inter(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                const auto ui = static_cast<std::size_t>(i);
                inter[ui] = neighborhood_interval(elite.qualities[ui], elite.sampling_interval[ui],
                                                  global[ui], config.reduction_factor);
            }
            SampleBatch batch_z = sample_batch(inter, config.samples_TZ, rng, problem,
                                               config.sampling);

            const Selection sel = select_best_behavior(batch_t.behaviors, batch_z.behaviors);

            Candidate next;
            next.behavior = sel.value;
            if (sel.from_inter) {
                next.qualities = std::move(batch_z.qualities[static_cast<std::size_t>(sel.index)]);
                next.sampling_interval = inter;
            } else {
                next.qualities = std::move(batch_t.qualities[static_cast<std::size_t>(sel.index)]);
                next.sampling_interval = intra;
            }
            staged[k].push_back(std::move(next));
            state.evaluations += static_cast<std::uint64_t>(config.samples_T + config.samples_TZ);
        }
    }

    // Concatenation: followers adopt their selections; elites carry their
    // qualities and behaviors forward unchanged. Elite sampling windows
    // narrow by r like everyone else's, which keeps every interval width at
    // attempt l bounded by (initial width) * r^(l-1).
    for (std::size_t k = 0; k < num_cohorts; ++k) {
        for (std::size_t j = 0; j < followers[k].size(); ++j)
            state.cohorts[k][static_cast<std::size_t>(followers[k][j])] = std::move(staged[k][j]);
        Candidate& elite = state.cohorts[k][static_cast<std::size_t>(state.pool_z[k].index)];
        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            Interval& iv = elite.sampling_interval[ui];
            const double mid = (iv.lo + iv.hi) / 2.0;
            const double half = (iv.width() / 2.0) * config.reduction_factor;
            iv.lo = std::max(mid - half, global[ui].lo);
            iv.hi = std::min(mid + half, global[ui].hi);
        }
    }
    ++state.attempt;
}

ConvergenceCheck check_convergence_extremes(double cur_max, double cur_min, double prev_max,
                                            double prev_min, double epsilon, int counter,
                                            int window) {
    const bool hold = std::abs(cur_max - prev_max) <= epsilon &&
                      std::abs(cur_min - prev_min) <= epsilon &&
                      std::abs(cur_max - cur_min) <= epsilon;
    ConvergenceCheck out;
    out.counter = hold ? counter + 1 : 0;
    out.converged = out.counter >= window;
    return out;
}

ConvergenceCheck check_convergence(std::span<const double> current_f,
                                   std::span<const double> previous_f, double epsilon, int counter,
                                   int window) {
    if (current_f.empty() || previous_f.empty())
        throw std::invalid_argument("check_convergence: empty behavior pool");
    const auto [cmin, cmax] = std::minmax_element(current_f.begin(), current_f.end());
    const auto [pmin, pmax] = std::minmax_element(previous_f.begin(), previous_f.end());
    return check_convergence_extremes(*cmax, *cmin, *pmax, *pmin, epsilon, counter, window);
}

RunResult run(const MultiCiConfig& config, const ProblemSpec& problem) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    std::mt19937_64 rng(config.seed);
    CohortState state = initialize(config, problem, rng);

    RunResult result;
    result.trace.reserve(static_cast<std::size_t>(config.max_attempts));

    int attempts = 0;
    while (true) {
        learning_attempt(state, config, problem, rng);
        ++attempts;

        TraceRecord rec;
        rec.attempt = attempts;
        rec.cohort_best.reserve(state.cohorts.size());
        double global_best = std::numeric_limits<double>::infinity();
        PoolExtremes e;
        for (const auto& cohort : state.cohorts) {
            double best = cohort.front().behavior;
            for (const auto& c : cohort) {
                best = std::min(best, c.behavior);
                e.max_f = std::max(e.max_f, c.behavior);
                e.min_f = std::min(e.min_f, c.behavior);
            }
            rec.cohort_best.push_back(best);
            global_best = std::min(global_best, best);
        }
        rec.global_best = global_best;
        rec.max_f = e.max_f;
        rec.min_f = e.min_f;
        result.trace.push_back(std::move(rec));

        const auto check = check_convergence_extremes(e.max_f, e.min_f, state.prev_max,
                                                      state.prev_min, config.epsilon,
                                                      state.saturation_counter,
                                                      config.saturation_window);
        state.saturation_counter = check.counter;
        state.prev_max = e.max_f;
        state.prev_min = e.min_f;

        if (config.target_value && global_best <= *config.target_value + config.target_tolerance) {
            result.converged_by = StopReason::target;
            break;
        }
        if (check.converged) {
            result.converged_by = StopReason::saturation;
            break;
        }
        if (attempts >= config.max_attempts) {
            result.converged_by = StopReason::attempt_cap;
            break;
        }
    }

    // By elitism the final pool minimum equals the best value ever evaluated.
    const Candidate* best = nullptr;
    for (const auto& cohort : state.cohorts) {
        for (const auto& c : cohort) {
            if (!best || c.behavior < best->behavior) best = &c;
        }
    }
    result.best_value = best->behavior;
    result.best_qualities = best->qualities;
    result.attempts_used = attempts;
    result.evaluations = state.evaluations;
    result.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

void write_trace_csv(std::ostream& os, const RunResult& result) {
    os << "attempt,cohort,best_value,global_best,max_F,min_F\n";
    os.precision(17);
    for (const auto& rec : result.trace) {
        for (std::size_t k = 0; k < rec.cohort_best.size(); ++k) {
            os << rec.attempt << ',' << (k + 1) << ',' << rec.cohort_best[k] << ','
               << rec.global_best << ',' << rec.max_f << ',' << rec.min_f << '\n';
        }
    }
}

std::vector<TraceRecord> read_trace_csv(std::istream& is) {
    std::vector<TraceRecord> records;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("trace: empty input");
    if (line != "attempt,cohort,best_value,global_best,max_F,min_F")
        throw std::runtime_error("trace: unexpected header: " + line);
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        double v[6];
        for (int i = 0; i < 6; ++i) {
            if (!std::getline(ss, field, ','))
                throw std::runtime_error("trace: short row at line " + std::to_string(line_no));
            try {
                v[i] = std::stod(field);
            } catch (const std::exception&) {
                throw std::runtime_error("trace: bad number at line " + std::to_string(line_no));
            }
        }
        const int attempt = static_cast<int>(v[0]);
        const int cohort = static_cast<int>(v[1]);
        if (records.empty() || records.back().attempt != attempt) {
            TraceRecord rec;
            rec.attempt = attempt;
            rec.global_best = v[3];
            rec.max_f = v[4];
            rec.min_f = v[5];
            records.push_back(std::move(rec));
        }
        auto& rec = records.back();
        if (static_cast<std::size_t>(cohort) != rec.cohort_best.size() + 1)
            throw std::runtime_error("trace: cohort out of order at line " + std::to_string(line_no));
        rec.cohort_best.push_back(v[2]);
    }
    if (records.empty()) throw std::runtime_error("trace: no data rows");
    return records;
}

}  // namespace multici
