#include "multici/problems.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace multici {

namespace {

constexpr double kPi = std::numbers::pi;

double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double ackley(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    double s1 = 0.0, s2 = 0.0;
    for (double v : x) {
        s1 += v * v;
        s2 += std::cos(2.0 * kPi * v);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(s1 / n)) - std::exp(s2 / n) + 20.0 + std::numbers::e;
}

double rastrigin(std::span<const double> x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * kPi * v);
    return s;
}

double rosenbrock(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = x[i] - 1.0;
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double griewank(std::span<const double> x) {
    double s = 0.0, p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * x[i] / 4000.0;
        p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return 1.0 + s - p;
}

double schwefel(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s -= v * std::sin(std::sqrt(std::abs(v)));
    return s;
}

double schwefel_2_22(std::span<const double> x) {
    double s = 0.0, p = 1.0;
    for (double v : x) {
        s += std::abs(v);
        p *= std::abs(v);
    }
    return s + p;
}

double sumsquares(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<double>(i + 1) * x[i] * x[i];
    return s;
}

double step2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
        const double t = std::floor(v + 0.5);
        s += t * t;
    }
    return s;
}

double zakharov(std::span<const double> x) {
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s1 += x[i] * x[i];
        s2 += 0.5 * static_cast<double>(i + 1) * x[i];
    }
    return s1 + s2 * s2 + s2 * s2 * s2 * s2;
}

double bohachevsky1(std::span<const double> x) {
    return x[0] * x[0] + 2.0 * x[1] * x[1] - 0.3 * std::cos(3.0 * kPi * x[0]) -
           0.4 * std::cos(4.0 * kPi * x[1]) + 0.7;
}

double bohachevsky2(std::span<const double> x) {
    return x[0] * x[0] + 2.0 * x[1] * x[1] -
           0.3 * std::cos(3.0 * kPi * x[0]) * std::cos(4.0 * kPi * x[1]) + 0.3;
}

double bohachevsky3(std::span<const double> x) {
    return x[0] * x[0] + 2.0 * x[1] * x[1] -
           0.3 * std::cos(3.0 * kPi * x[0] + 4.0 * kPi * x[1]) + 0.3;
}

double booth(std::span<const double> x) {
    const double a = x[0] + 2.0 * x[1] - 7.0;
    const double b = 2.0 * x[0] + x[1] - 5.0;
    return a * a + b * b;
}

double matyas(std::span<const double> x) {
    return 0.26 * (x[0] * x[0] + x[1] * x[1]) - 0.48 * x[0] * x[1];
}

// The classic two-variable surface; the catalog dimension follows the usual
// benchmark tables, extra coordinates are inert.
double beale(std::span<const double> x) {
    const double a = 1.5 - x[0] + x[0] * x[1];
    const double b = 2.25 - x[0] + x[0] * x[1] * x[1];
    const double c = 2.625 - x[0] + x[0] * x[1] * x[1] * x[1];
    return a * a + b * b + c * c;
}

double goldstein_price(std::span<const double> x) {
    const double a = x[0] + x[1] + 1.0;
    const double b = 19.0 - 14.0 * x[0] + 3.0 * x[0] * x[0] - 14.0 * x[1] +
                     6.0 * x[0] * x[1] + 3.0 * x[1] * x[1];
    const double c = 2.0 * x[0] - 3.0 * x[1];
    const double d = 18.0 - 32.0 * x[0] + 12.0 * x[0] * x[0] + 48.0 * x[1] -
                     36.0 * x[0] * x[1] + 27.0 * x[1] * x[1];
    return (1.0 + a * a * b) * (30.0 + c * c * d);
}

double branin(std::span<const double> x) {
    const double b = 5.1 / (4.0 * kPi * kPi);
    const double c = 5.0 / kPi;
    const double t = 1.0 / (8.0 * kPi);
    const double u = x[1] - b * x[0] * x[0] + c * x[0] - 6.0;
    return u * u + 10.0 * (1.0 - t) * std::cos(x[0]) + 10.0;
}

double six_hump_camelback(std::span<const double> x) {
    const double x2 = x[0] * x[0];
    const double y2 = x[1] * x[1];
    return 4.0 * x2 - 2.1 * x2 * x2 + x2 * x2 * x2 / 3.0 + x[0] * x[1] - 4.0 * y2 +
           4.0 * y2 * y2;
}

double foxholes(std::span<const double> x) {
    static const double a1[25] = {-32, -16, 0, 16, 32, -32, -16, 0, 16, 32, -32, -16, 0,
                                  16,  32,  -32, -16, 0,  16,  32,  -32, -16, 0, 16, 32};
    static const double a2[25] = {-32, -32, -32, -32, -32, -16, -16, -16, -16, -16, 0, 0, 0,
                                  0,   0,   16,  16,  16,  16,  16,  32,  32,  32,  32, 32};
    double s = 1.0 / 500.0;
    for (int j = 0; j < 25; ++j) {
        const double d1 = x[0] - a1[j];
        const double d2 = x[1] - a2[j];
        double p1 = d1 * d1 * d1;
        double p2 = d2 * d2 * d2;
        s += 1.0 / (static_cast<double>(j + 1) + p1 * p1 + p2 * p2);
    }
    return 1.0 / s;
}

double michalewicz(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = std::sin(static_cast<double>(i + 1) * x[i] * x[i] / kPi);
        double p = t;
        for (int k = 1; k < 20; ++k) p *= t;  // t^20
        s -= std::sin(x[i]) * p;
    }
    return s;
}

// Shekel family; columns of C are the m pit locations.
constexpr double kShekelBeta[10] = {0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5};
constexpr double kShekelC[4][10] = {
    {4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0},
    {4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6},
    {4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0},
    {4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6}};

template <int M>
double shekel(std::span<const double> x) {
    double s = 0.0;
    for (int j = 0; j < M; ++j) {
        double d = kShekelBeta[j];
        for (int i = 0; i < 4; ++i) {
            const double t = x[i] - kShekelC[i][j];
            d += t * t;
        }
        s -= 1.0 / d;
    }
    return s;
}

// Per-coordinate contribution of the Schwefel optimum at x = 420.9687463599821.
constexpr double kSchwefelCoordMin = -418.98288727243374;
constexpr double kSchwefelArgmin = 420.9687463599821;

struct Definition {
    const char* id;
    const char* name;
    Modality modality;
    Separability separability;
    double lo;
    double hi;
    int default_dim;
    bool scalable;
    double (*fn)(std::span<const double>);
    // Known optimum value and point for dimension n; either may be missing.
    std::optional<double> (*opt_value)(int n);
    std::optional<std::vector<double>> (*opt_point)(int n);
};

std::optional<double> zero_value(int) { return 0.0; }
std::optional<std::vector<double>> origin_point(int n) {
    return std::vector<double>(static_cast<std::size_t>(n), 0.0);
}
std::optional<std::vector<double>> ones_point(int n) {
    return std::vector<double>(static_cast<std::size_t>(n), 1.0);
}
std::optional<double> schwefel_value(int n) { return static_cast<double>(n) * kSchwefelCoordMin; }
std::optional<std::vector<double>> schwefel_point(int n) {
    return std::vector<double>(static_cast<std::size_t>(n), kSchwefelArgmin);
}

template <double V>
std::optional<double> fixed_value(int) {
    return V;
}

// Frozen minimizers for the fixed-dimension functions whose optima are not at
// a lattice point. Values cross-checked numerically against the published
// ones before freezing.
std::optional<std::vector<double>> foxholes_point(int) {
    return std::vector<double>{-31.978333379412483, -31.978334822443873};
}
std::optional<std::vector<double>> goldstein_point(int) { return std::vector<double>{0.0, -1.0}; }
std::optional<std::vector<double>> beale_point(int) {
    return std::vector<double>{3.0, 0.5, 0.0, 0.0, 0.0};
}
std::optional<std::vector<double>> booth_point(int) { return std::vector<double>{1.0, 3.0}; }
std::optional<std::vector<double>> branin_point(int) {
    return std::vector<double>{3.141592653589793, 2.275};
}
std::optional<std::vector<double>> sixhump_point(int) {
    return std::vector<double>{0.08984201303598689, -0.7126564021431968};
}

constexpr double kMichCoord[10] = {2.202905520142923,  1.570796326778263, 1.2849915705136004,
                                   1.9230584698297473, 1.7204697725280094, 1.5707963267772478,
                                   1.4544139713242783, 1.7560865209214074, 1.6557174167795692,
                                   1.5707963267773901};

template <int N>
std::optional<std::vector<double>> michalewicz_point(int) {
    return std::vector<double>(kMichCoord, kMichCoord + N);
}

std::optional<std::vector<double>> shekel5_point(int) {
    return std::vector<double>{4.000037152376549, 4.000133278618987, 4.000037151057555,
                               4.000133277090425};
}
std::optional<std::vector<double>> shekel7_point(int) {
    return std::vector<double>{4.000572818167059, 3.9996062070672305, 4.000572821117356,
                               3.999606210083061};
}
std::optional<std::vector<double>> shekel10_point(int) {
    return std::vector<double>{4.000746867869747, 3.999509480036287, 4.000746868809279,
                               3.999509480017675};
}

const Definition kRegistry[] = {
    {"A1", "Sphere2D", Modality::unimodal, Separability::separable, -5.12, 5.12, 2, true,
     sphere, zero_value, origin_point},
    {"F1", "Foxholes", Modality::multimodal, Separability::separable, -65.536, 65.536, 2, false,
     foxholes, fixed_value<0.9980038377944498>, foxholes_point},
    {"F2", "Goldstein-Price", Modality::multimodal, Separability::non_separable, -2, 2, 2, false,
     goldstein_price, fixed_value<3.0>, goldstein_point},
    {"F5", "Ackley", Modality::multimodal, Separability::non_separable, -32, 32, 30, true,
     ackley, zero_value, origin_point},
    {"F6", "Beale", Modality::unimodal, Separability::non_separable, -4.5, 4.5, 5, false,
     beale, zero_value, beale_point},
    {"F7", "Bohachevsky1", Modality::multimodal, Separability::separable, -100, 100, 2, false,
     bohachevsky1, zero_value, origin_point},
    {"F8", "Bohachevsky2", Modality::multimodal, Separability::non_separable, -100, 100, 2, false,
     bohachevsky2, zero_value, origin_point},
    {"F9", "Bohachevsky3", Modality::multimodal, Separability::non_separable, -100, 100, 2, false,
     bohachevsky3, zero_value, origin_point},
    {"F10", "Booth", Modality::multimodal, Separability::separable, -10, 10, 2, false,
     booth, zero_value, booth_point},
    {"F11", "Branin", Modality::multimodal, Separability::separable, -5, 10, 2, false,
     branin, fixed_value<0.39788735772973816>, branin_point},
    {"F18", "Griewank", Modality::multimodal, Separability::non_separable, -600, 600, 30, true,
     griewank, zero_value, origin_point},
    {"F25", "Matyas", Modality::unimodal, Separability::non_separable, -10, 10, 2, false,
     matyas, zero_value, origin_point},
    {"F26", "Michalewics2", Modality::multimodal, Separability::separable, 0, 3.1416, 2, false,
     michalewicz, fixed_value<-1.8013034100985532>, michalewicz_point<2>},
    {"F27", "Michalewics5", Modality::multimodal, Separability::separable, 0, 3.1416, 5, false,
     michalewicz, fixed_value<-4.687658179088148>, michalewicz_point<5>},
    {"F28", "Michalewics10", Modality::multimodal, Separability::separable, 0, 3.1416, 10, false,
     michalewicz, fixed_value<-9.660151715641343>, michalewicz_point<10>},
    {"F33", "Rastrigin", Modality::multimodal, Separability::separable, -5.12, 5.12, 30, true,
     rastrigin, zero_value, origin_point},
    {"F34", "Rosenbrock", Modality::unimodal, Separability::non_separable, -30, 30, 30, true,
     rosenbrock, zero_value, ones_point},
    {"F36", "Schwefel", Modality::multimodal, Separability::separable, -500, 500, 30, true,
     schwefel, schwefel_value, schwefel_point},
    {"F38", "Schwefel_2_22", Modality::unimodal, Separability::non_separable, -10, 10, 30, true,
     schwefel_2_22, zero_value, origin_point},
    {"F39", "Shekel10", Modality::multimodal, Separability::non_separable, 0, 10, 4, false,
     shekel<10>, fixed_value<-10.536443153483532>, shekel10_point},
    {"F40", "Shekel5", Modality::multimodal, Separability::non_separable, 0, 10, 4, false,
     shekel<5>, fixed_value<-10.153199679058229>, shekel5_point},
    {"F41", "Shekel7", Modality::multimodal, Separability::non_separable, 0, 10, 4, false,
     shekel<7>, fixed_value<-10.402915336777745>, shekel7_point},
    {"F43", "Six-hump camelback", Modality::multimodal, Separability::non_separable, -5, 5, 2,
     false, six_hump_camelback, fixed_value<-1.0316284534898776>, sixhump_point},
    {"F44", "Sphere2", Modality::unimodal, Separability::separable, -100, 100, 30, true,
     sphere, zero_value, origin_point},
    {"F45", "Step2", Modality::unimodal, Separability::separable, -100, 100, 30, true,
     step2, zero_value, origin_point},
    {"F47", "Sumsquares", Modality::unimodal, Separability::separable, -10, 10, 30, true,
     sumsquares, zero_value, origin_point},
    {"F50", "Zakharov", Modality::unimodal, Separability::non_separable, -5, 10, 10, true,
     zakharov, zero_value, origin_point},
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// "A1" < "F1" < "F2" < ... < "F50": alphabetic prefix first, then the number.
std::pair<std::string, long> split_id(const std::string& id) {
    std::size_t i = 0;
    while (i < id.size() && !std::isdigit(static_cast<unsigned char>(id[i]))) ++i;
    long num = 0;
    if (i < id.size()) num = std::stol(id.substr(i));
    return {id.substr(0, i), num};
}

const Definition* find_definition(const std::string& id_or_name) {
    const std::string key = lower(id_or_name);
    for (const auto& d : kRegistry) {
        if (lower(d.id) == key || lower(d.name) == key) return &d;
    }
    return nullptr;
}

ProblemSpec make_spec(const Definition& d, int dim) {
    ProblemSpec p;
    p.id = d.id;
    p.name = d.name;
    p.dimension = dim;
    p.bounds = Bounds::uniform(d.lo, d.hi, static_cast<std::size_t>(dim));
    p.modality = d.modality;
    p.separability = d.separability;
    if (auto v = d.opt_value(dim)) p.known_optimum = *v;
    if (auto q = d.opt_point(dim)) p.optimum_point = std::move(*q);
    p.objective = d.fn;
    return p;
}

}  // namespace

bool Bounds::contains(std::span<const double> x) const {
    if (x.size() != lower.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lower[i] || x[i] > upper[i]) return false;
    }
    return true;
}

void Bounds::validate() const {
    if (lower.size() != upper.size())
        throw std::invalid_argument("bounds: lower/upper size mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!(lower[i] < upper[i]))
            throw std::invalid_argument("bounds: lower[" + std::to_string(i) + "] must be < upper");
    }
}

Bounds Bounds::uniform(double lo, double hi, std::size_t n) {
    Bounds b;
    b.lower.assign(n, lo);
    b.upper.assign(n, hi);
    b.validate();
    return b;
}

std::string tag_of(Modality m, Separability s) {
    std::string t;
    t += (m == Modality::unimodal) ? 'U' : 'M';
    t += (s == Separability::separable) ? 'S' : 'N';
    return t;
}

double ProblemSpec::evaluate(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dimension)
        throw std::invalid_argument("evaluate: point has dimension " + std::to_string(x.size()) +
                                    ", problem " + id + " expects " + std::to_string(dimension));
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < bounds.lower[i] || x[i] > bounds.upper[i])
            throw std::domain_error("evaluate: coordinate " + std::to_string(i) +
                                    " outside bounds of " + id);
    }
    return objective(x);
}

ProblemSpec get_problem(const std::string& id_or_name) {
    const Definition* d = find_definition(id_or_name);
    if (!d) throw std::invalid_argument("unknown problem: " + id_or_name);
    return make_spec(*d, d->default_dim);
}

ProblemSpec get_problem(const std::string& id_or_name, int dimension) {
    const Definition* d = find_definition(id_or_name);
    if (!d) throw std::invalid_argument("unknown problem: " + id_or_name);
    if (dimension < 1) throw std::invalid_argument("dimension must be positive");
    if (!d->scalable && dimension != d->default_dim)
        throw std::invalid_argument(std::string(d->id) + " has fixed dimension " +
                                    std::to_string(d->default_dim));
    if (d->fn == rosenbrock && dimension < 2)
        throw std::invalid_argument("Rosenbrock needs dimension >= 2");
    return make_spec(*d, dimension);
}

std::vector<ProblemSpec> list_problems() {
    std::vector<ProblemSpec> out;
    out.reserve(std::size(kRegistry));
    for (const auto& d : kRegistry) out.push_back(make_spec(d, d.default_dim));
    std::sort(out.begin(), out.end(), [](const ProblemSpec& a, const ProblemSpec& b) {
        return split_id(a.id) < split_id(b.id);
    });
    return out;
}

std::vector<ProblemSpec> list_problems(const std::string& tag) {
    std::vector<ProblemSpec> out;
    for (auto& p : list_problems()) {
        if (lower(p.tag()) == lower(tag)) out.push_back(std::move(p));
    }
    return out;
}

std::string catalog_json() {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : list_problems()) {
        nlohmann::json e;
        e["id"] = p.id;
        e["name"] = p.name;
        e["dimension"] = p.dimension;
        e["lower"] = p.bounds.lower.front();
        e["upper"] = p.bounds.upper.front();
        e["tag"] = p.tag();
        if (p.known_optimum)
            e["known_optimum"] = *p.known_optimum;
        else
            e["known_optimum"] = nullptr;
        arr.push_back(std::move(e));
    }
    return arr.dump(2);
}

}  // namespace multici
