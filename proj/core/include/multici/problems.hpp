#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace multici {

// Per-coordinate box constraints of a problem.
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dimension() const { return lower.size(); }
    double width(std::size_t i) const { return upper[i] - lower[i]; }
    bool contains(std::span<const double> x) const;

    // Throws std::invalid_argument if sizes differ or lower[i] >= upper[i].
    void validate() const;

    static Bounds uniform(double lo, double hi, std::size_t n);
};

enum class Modality { unimodal, multimodal };
enum class Separability { separable, non_separable };

// Two-letter tag as used in the catalog: "US", "UN", "MS", "MN".
std::string tag_of(Modality m, Separability s);

// A registered benchmark objective: name, box, known optimum and the
// evaluation function itself. Instances are value types; copying is cheap
// enough for the catalog sizes involved.
struct ProblemSpec {
    std::string id;    // short identifier, e.g. "F5"
    std::string name;  // human label, e.g. "Ackley"
    int dimension = 0;
    Bounds bounds;
    std::optional<double> known_optimum;
    std::optional<std::vector<double>> optimum_point;
    Modality modality = Modality::unimodal;
    Separability separability = Separability::separable;

    std::function<double(std::span<const double>)> objective;

    std::string tag() const { return tag_of(modality, separability); }

    // Evaluates the objective. Errors on dimension mismatch and on any
    // out-of-bounds coordinate: clamping is the optimizer's job, not the
    // problem's.
    double evaluate(std::span<const double> x) const;
};

// Looks a problem up by id or by name (case-insensitive). Throws
// std::invalid_argument for unknown ids.
ProblemSpec get_problem(const std::string& id_or_name);

// Same, with the dimension overridden. Only scalable functions accept an
// override; fixed-dimension ones throw unless the override equals the
// default.
ProblemSpec get_problem(const std::string& id_or_name, int dimension);

// All registered problems, ordered by id (alphabetic prefix, then numeric).
std::vector<ProblemSpec> list_problems();

// Catalog entries whose tag() equals `tag` ("US", "UN", "MS", "MN").
std::vector<ProblemSpec> list_problems(const std::string& tag);

// Catalog as a JSON array string: id, name, dimension, bounds, tags,
// known_optimum per entry.
std::string catalog_json();

}  // namespace multici
