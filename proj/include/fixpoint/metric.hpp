#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fixpoint/errors.hpp"

namespace fixpoint {

// A point of R^d. Coordinates are dimensionless reals and must be finite.
struct Point {
    std::vector<double> coords;

    Point() = default;
    explicit Point(std::vector<double> c);
    explicit Point(double x) : Point(std::vector<double>{x}) {}

    std::size_t dim() const { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }

    bool operator==(const Point&) const = default;
};

// Strict lexicographic order on coordinates; the deterministic tie-break
// used wherever a representative point must be chosen.
bool lex_less(const Point& a, const Point& b);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// A closed box in R^d. Closed and bounded, hence complete.
class Domain {
public:
    Domain() = default;
    explicit Domain(std::vector<Interval> bounds);
    // 1-D convenience.
    Domain(double lo, double hi) : Domain(std::vector<Interval>{{lo, hi}}) {}

    std::size_t dimension() const { return bounds_.size(); }
    const Interval& bound(std::size_t axis) const { return bounds_[axis]; }
    const std::vector<Interval>& bounds() const { return bounds_; }

    bool contains(const Point& p, double tol = 0.0) const;
    Point clamp(const Point& p) const;
    // Euclidean diameter of the box; the default T_max for audits.
    double diameter() const;

    Point lo_corner() const;
    Point hi_corner() const;
    Point center() const;

    bool operator==(const Domain&) const = default;

private:
    std::vector<Interval> bounds_;
};

enum class MetricKind {
    Euclidean,
    AbsoluteDifference,  // 1-D alias of Euclidean
    Discrete,
};

struct Metric {
    MetricKind kind = MetricKind::Euclidean;

    double operator()(const Point& p, const Point& q) const { return distance(*this, p, q); }

    friend double distance(const Metric& m, const Point& p, const Point& q);

    bool operator==(const Metric&) const = default;
};

std::string metric_kind_name(MetricKind kind);
MetricKind metric_kind_from_name(const std::string& name);

// Deterministic point-set generator: either an inclusive grid with n points
// per axis, or `count` seeded-uniform draws.
struct GeneratorSpec {
    enum class Kind { Grid, SeededUniform };

    Kind kind = Kind::Grid;
    int points_per_axis = 2;  // Grid
    int count = 0;            // SeededUniform
    std::uint64_t seed = 0;   // SeededUniform

    static GeneratorSpec grid(int n) { return {Kind::Grid, n, 0, 0}; }
    static GeneratorSpec seeded_uniform(int count, std::uint64_t seed) {
        return {Kind::SeededUniform, 0, count, seed};
    }

    bool operator==(const GeneratorSpec&) const = default;
};

struct SampleSet {
    std::vector<Point> points;
    GeneratorSpec generator;

    std::size_t size() const { return points.size(); }
};

// Deterministic sampling: identical (domain, spec) inputs yield identical
// point lists, bit for bit. Grid includes both endpoints of every axis.
SampleSet sample(const Domain& domain, const GeneratorSpec& spec);

// A uniform double in [0,1) from the top 53 bits of a raw draw. Kept public
// so other seeded searches share one convention.
double uniform01(std::uint64_t raw);

struct MetricAuditReport {
    std::size_t pairs_checked = 0;
    std::size_t triples_checked = 0;
    double worst_identity = 0.0;   // max |d(p,p)|
    double worst_symmetry = 0.0;   // max |d(p,q)-d(q,p)|
    double worst_triangle = 0.0;   // max d(p,r)-d(p,q)-d(q,r), clamped at 0
    Point identity_witness;
    Point symmetry_witness[2];
    Point triangle_witness[3];
    double tol = 0.0;
    bool pass = false;

    double worst_violation() const;
};

// Checks the metric axioms over all sampled pairs/triples. Also accepts an
// arbitrary distance functor so broken candidates can be audited.
template <class DistFn>
MetricAuditReport audit_distance(DistFn&& d, const SampleSet& s, double tol);

MetricAuditReport audit_metric(const Metric& m, const SampleSet& s, double tol);

// --- implementation of the templated audit ---

template <class DistFn>
MetricAuditReport audit_distance(DistFn&& d, const SampleSet& s, double tol) {
    if (s.size() < 3) {
        throw ConfigError("metric audit requires at least 3 sample points, got " +
                          std::to_string(s.size()));
    }
    MetricAuditReport rep;
    rep.tol = tol;
    const auto& pts = s.points;
    const std::size_t n = pts.size();

    for (std::size_t i = 0; i < n; ++i) {
        double v = d(pts[i], pts[i]);
        double viol = v < 0 ? -v : v;
        if (viol > rep.worst_identity) {
            rep.worst_identity = viol;
            rep.identity_witness = pts[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            ++rep.pairs_checked;
            double forward = d(pts[i], pts[j]);
            double backward = d(pts[j], pts[i]);
            double viol = forward > backward ? forward - backward : backward - forward;
            if (viol > rep.worst_symmetry) {
                rep.worst_symmetry = viol;
                rep.symmetry_witness[0] = pts[i];
                rep.symmetry_witness[1] = pts[j];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                ++rep.triples_checked;
                double viol = d(pts[i], pts[k]) - d(pts[i], pts[j]) - d(pts[j], pts[k]);
                if (viol > rep.worst_triangle) {
                    rep.worst_triangle = viol;
                    rep.triangle_witness[0] = pts[i];
                    rep.triangle_witness[1] = pts[j];
                    rep.triangle_witness[2] = pts[k];
                }
            }
        }
    }
    rep.pass = rep.worst_violation() <= tol;
    return rep;
}

}  // namespace fixpoint
