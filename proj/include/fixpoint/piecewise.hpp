#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fixpoint/expr.hpp"
#include "fixpoint/metric.hpp"

namespace fixpoint {

// One coordinate comparison against a constant bound, e.g. x_1 >= 3/8.
struct Comparison {
    enum class Op { LT, LE, GT, GE };

    std::size_t coord = 0;
    Op op = Op::LT;
    double bound = 0.0;

    bool holds(double v) const;
};

// Conjunction of coordinate comparisons. An empty atom list matches every
// point ("true" / catch-all guard).
struct Guard {
    std::vector<Comparison> atoms;
    std::string text;  // source form, kept for serialization

    bool matches(const Point& p) const;
};

// Guard syntax: "true" or comparisons joined by "&&", each comparing one
// coordinate variable with a constant expression, e.g. "x >= 3/8 && x < 1/2".
Guard parse_guard(const std::string& text, std::size_t dimension);

struct Branch {
    Guard guard;
    std::vector<ExprPtr> outputs;           // one expression per coordinate
    std::vector<std::string> output_texts;  // source forms
};

// Variable names available to a map expression of the given dimension:
// "x" (with alias "x_1") in 1-D, "x_1".."x_d" otherwise.
std::vector<std::string> map_variables(std::size_t dimension);

// A self-map of a box domain defined by ordered guarded branches; the first
// matching branch wins. Results within eq_tol of a domain bound are clamped,
// anything further outside is a self-map violation.
class PiecewiseMap {
public:
    PiecewiseMap() = default;
    PiecewiseMap(Domain domain, std::vector<Branch> branches, double eq_tol = 1e-9);

    // Builds from (guard text, output expression texts) pairs.
    static PiecewiseMap from_text(
        Domain domain,
        const std::vector<std::pair<std::string, std::vector<std::string>>>& branches,
        double eq_tol = 1e-9);
    // Single catch-all branch, 1-D convenience.
    static PiecewiseMap single(Domain domain, const std::string& expr, double eq_tol = 1e-9);

    Point evaluate(const Point& p) const;
    Point operator()(const Point& p) const { return evaluate(p); }

    // Index of the first branch whose guard matches, or -1.
    int matching_branch(const Point& p) const;

    const Domain& domain() const { return domain_; }
    const std::vector<Branch>& branches() const { return branches_; }
    double eq_tol() const { return eq_tol_; }

    // Sorted unique guard bounds along one axis; the locations where the
    // map may jump.
    std::vector<double> boundary_values(std::size_t axis) const;

private:
    Domain domain_;
    std::vector<Branch> branches_;
    double eq_tol_ = 1e-9;
};

struct PreimageQuery {
    Point target;
    double tolerance = 1e-9;
    int resolution = 1001;
};

// Finds p with distance(map(p), target) <= tolerance, or nothing. Affine
// 1-D branches are inverted analytically; otherwise a grid scan with
// bisection/ternary refinement is used. When several points qualify the
// lexicographically smallest candidate is returned, with constant branches
// represented by their leftmost admissible point.
std::optional<Point> preimage(const PiecewiseMap& map, const Metric& metric,
                              const PreimageQuery& query);

}  // namespace fixpoint
