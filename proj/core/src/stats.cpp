#include "multici/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace multici {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

SummaryStats summarize(std::span<const double> values, std::span<const double> runtimes) {
    if (values.empty()) throw std::invalid_argument("summarize: empty values");
    if (values.size() != runtimes.size())
        throw std::invalid_argument("summarize: values/runtimes length mismatch");

    SummaryStats s;
    s.n_runs = static_cast<int>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n_runs);
    s.best = *std::min_element(values.begin(), values.end());
    if (s.n_runs > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std_dev = std::sqrt(ss / static_cast<double>(s.n_runs - 1));
    }
    s.mean_runtime_seconds =
        std::accumulate(runtimes.begin(), runtimes.end(), 0.0) / static_cast<double>(s.n_runs);
    return s;
}

std::string to_string(Decision d) {
    switch (d) {
        case Decision::plus: return "+";
        case Decision::minus: return "-";
        case Decision::equal: return "=";
    }
    return "?";
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double wilcoxon_exact_p(std::span<const double> ranks, double w) {
    const int n = static_cast<int>(ranks.size());
    if (n == 0) return 1.0;
    if (n > 20) throw std::invalid_argument("wilcoxon_exact_p: n too large for enumeration");

    // Average ranks are multiples of 0.5; doubling them gives an integer
    // lattice, so tail counts are exact.
    std::vector<int> scaled(ranks.size());
    int total = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        scaled[i] = static_cast<int>(std::llround(2.0 * ranks[i]));
        total += scaled[i];
    }
    const int w2 = static_cast<int>(std::llround(2.0 * w));

    // counts[s] = number of sign assignments whose positive-rank sum is s.
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(total) + 1, 0);
    counts[0] = 1;
    for (int r : scaled) {
        for (int s = total; s >= r; --s) counts[static_cast<std::size_t>(s)] +=
            counts[static_cast<std::size_t>(s - r)];
    }

    std::uint64_t tail = 0;
    for (int s = 0; s <= total; ++s) {
        if (s <= w2 || s >= total - w2) tail += counts[static_cast<std::size_t>(s)];
    }
    const double p = static_cast<double>(tail) / std::ldexp(1.0, n);
    return std::min(1.0, p);
}

double wilcoxon_normal_p(double w, int n, double tie_adjustment, bool continuity_correction) {
    if (n == 0) return 1.0;
    const double dn = static_cast<double>(n);
    const double mean = dn * (dn + 1.0) / 4.0;
    const double var = (dn * (dn + 1.0) * (2.0 * dn + 1.0) - tie_adjustment / 2.0) / 24.0;
    if (!(var > 0.0)) return 1.0;  // all differences tied at one magnitude
    double num = w - mean;
    if (continuity_correction) num += 0.5;
    const double z = num / std::sqrt(var);
    return std::min(1.0, 2.0 * normal_cdf(z));
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    double alpha) {
    if (a.size() != b.size()) throw std::invalid_argument("wilcoxon: length mismatch");
    if (a.empty()) throw std::invalid_argument("wilcoxon: empty input");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("wilcoxon: alpha not in (0,1)");

    std::vector<double> diff;
    diff.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diff.push_back(d);
    }

    WilcoxonResult res;
    res.alpha = alpha;
    res.n_effective = static_cast<int>(diff.size());
    if (diff.empty()) {
        res.p_value = 1.0;
        res.decision = Decision::equal;
        return res;
    }

    std::vector<double> abs_d(diff.size());
    for (std::size_t i = 0; i < diff.size(); ++i) abs_d[i] = std::abs(diff[i]);
    const std::vector<double> ranks = average_ranks(abs_d);

    for (std::size_t i = 0; i < diff.size(); ++i) {
        if (diff[i] > 0.0)
            res.t_plus += ranks[i];
        else
            res.t_minus += ranks[i];
    }
    const double w = std::min(res.t_plus, res.t_minus);

    if (res.n_effective <= 12) {
        res.p_value = wilcoxon_exact_p(ranks, w);
    } else {
        // Tie adjustment: sum of t^3 - t over groups of equal |d|.
        std::vector<double> sorted = abs_d;
        std::sort(sorted.begin(), sorted.end());
        double tie_adj = 0.0;
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_adj += t * t * t - t;
            i = j + 1;
        }
        res.p_value = wilcoxon_normal_p(w, res.n_effective, tie_adj, false);
    }

    if (res.p_value >= alpha) {
        res.decision = Decision::equal;
    } else {
        // a worse than b (larger values, minimization) when positive ranks
        // dominate.
        res.decision = res.t_plus > res.t_minus ? Decision::plus : Decision::minus;
    }
    return res;
}

PairwiseSummary pairwise_table(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& per_problem_pairs,
    double alpha) {
    PairwiseSummary summary;
    summary.per_problem.reserve(per_problem_pairs.size());
    for (const auto& [other, ours] : per_problem_pairs) {
        WilcoxonResult r = wilcoxon_signed_rank(other, ours, alpha);
        switch (r.decision) {
            case Decision::plus: ++summary.plus; break;
            case Decision::minus: ++summary.minus; break;
            case Decision::equal: ++summary.equal; break;
        }
        summary.per_problem.push_back(std::move(r));
    }
    return summary;
}

WilcoxonResult multi_problem_compare(std::span<const double> mean_a,
                                     std::span<const double> mean_b, double alpha) {
    return wilcoxon_signed_rank(mean_a, mean_b, alpha);
}

void write_comparison_csv(std::ostream& os, const std::vector<std::string>& problems,
                          const std::vector<WilcoxonResult>& results) {
    if (problems.size() != results.size())
        throw std::invalid_argument("comparison csv: name/result count mismatch");
    os << "problem,p_value,t_plus,t_minus,winner\n";
    os.precision(17);
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        os << problems[i] << ',' << r.p_value << ',' << r.t_plus << ',' << r.t_minus << ','
           << to_string(r.decision) << '\n';
    }
}

}  // namespace multici
