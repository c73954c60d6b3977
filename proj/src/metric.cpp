#include "fixpoint/metric.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fixpoint {

Point::Point(std::vector<double> c) : coords(std::move(c)) {
    if (coords.empty()) {
        throw ConfigError("point must have dimension >= 1");
    }
    for (double v : coords) {
        if (!std::isfinite(v)) {
            throw ConfigError("point coordinates must be finite");
        }
    }
}

bool lex_less(const Point& a, const Point& b) {
    return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(),
                                        b.coords.end());
}

Domain::Domain(std::vector<Interval> bounds) : bounds_(std::move(bounds)) {
    if (bounds_.empty()) {
        throw ConfigError("domain must have dimension >= 1");
    }
    for (const auto& b : bounds_) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi)) {
            throw ConfigError("domain bounds must be finite");
        }
        if (b.lo > b.hi) {
            throw ConfigError("domain interval is empty: lo > hi");
        }
    }
}

bool Domain::contains(const Point& p, double tol) const {
    if (p.dim() != dimension()) {
        throw DimensionMismatch(p.dim(), dimension());
    }
    for (std::size_t i = 0; i < dimension(); ++i) {
        if (p[i] < bounds_[i].lo - tol || p[i] > bounds_[i].hi + tol) {
            return false;
        }
    }
    return true;
}

Point Domain::clamp(const Point& p) const {
    if (p.dim() != dimension()) {
        throw DimensionMismatch(p.dim(), dimension());
    }
    std::vector<double> c = p.coords;
    for (std::size_t i = 0; i < dimension(); ++i) {
        c[i] = std::clamp(c[i], bounds_[i].lo, bounds_[i].hi);
    }
    return Point(std::move(c));
}

double Domain::diameter() const {
    double sum = 0.0;
    for (const auto& b : bounds_) {
        double w = b.hi - b.lo;
        sum += w * w;
    }
    return std::sqrt(sum);
}

Point Domain::lo_corner() const {
    std::vector<double> c;
    c.reserve(dimension());
    for (const auto& b : bounds_) c.push_back(b.lo);
    return Point(std::move(c));
}

Point Domain::hi_corner() const {
    std::vector<double> c;
    c.reserve(dimension());
    for (const auto& b : bounds_) c.push_back(b.hi);
    return Point(std::move(c));
}

Point Domain::center() const {
    std::vector<double> c;
    c.reserve(dimension());
    for (const auto& b : bounds_) c.push_back(0.5 * (b.lo + b.hi));
    return Point(std::move(c));
}

double distance(const Metric& m, const Point& p, const Point& q) {
    if (p.dim() != q.dim()) {
        throw DimensionMismatch(p.dim(), q.dim());
    }
    switch (m.kind) {
        case MetricKind::Euclidean:
        case MetricKind::AbsoluteDifference: {
            double sum = 0.0;
            for (std::size_t i = 0; i < p.dim(); ++i) {
                double diff = p[i] - q[i];
                sum += diff * diff;
            }
            return std::sqrt(sum);
        }
        case MetricKind::Discrete:
            return p.coords == q.coords ? 0.0 : 1.0;
    }
    throw ConfigError("unknown metric kind");
}

std::string metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::Euclidean: return "euclidean";
        case MetricKind::AbsoluteDifference: return "absolute_difference";
        case MetricKind::Discrete: return "discrete";
    }
    return "unknown";
}

MetricKind metric_kind_from_name(const std::string& name) {
    if (name == "euclidean") return MetricKind::Euclidean;
    if (name == "absolute_difference") return MetricKind::AbsoluteDifference;
    if (name == "discrete") return MetricKind::Discrete;
    throw ConfigError("unknown metric kind: " + name);
}

double uniform01(std::uint64_t raw) {
    return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

namespace {

SampleSet sample_grid(const Domain& domain, const GeneratorSpec& spec) {
    const int n = spec.points_per_axis;
    if (n < 2) {
        throw ConfigError("grid generator needs at least 2 points per axis, got " +
                          std::to_string(n));
    }
    const std::size_t dim = domain.dimension();
    SampleSet out;
    out.generator = spec;

    std::vector<int> idx(dim, 0);
    while (true) {
        std::vector<double> c(dim);
        for (std::size_t a = 0; a < dim; ++a) {
            const Interval& b = domain.bound(a);
            double v;
            if (idx[a] == 0) {
                v = b.lo;
            } else if (idx[a] == n - 1) {
                v = b.hi;
            } else {
                v = b.lo + static_cast<double>(idx[a]) * (b.hi - b.lo) / (n - 1);
            }
            c[a] = std::clamp(v, b.lo, b.hi);
        }
        out.points.push_back(Point(std::move(c)));

        // advance the last axis fastest
        std::size_t a = dim;
        while (a > 0) {
            --a;
            if (++idx[a] < n) break;
            idx[a] = 0;
            if (a == 0) return out;
        }
    }
}

SampleSet sample_uniform(const Domain& domain, const GeneratorSpec& spec) {
    if (spec.count < 1) {
        throw ConfigError("seeded-uniform generator needs count >= 1, got " +
                          std::to_string(spec.count));
    }
    SampleSet out;
    out.generator = spec;
    std::mt19937_64 rng(spec.seed);
    const std::size_t dim = domain.dimension();
    for (int i = 0; i < spec.count; ++i) {
        std::vector<double> c(dim);
        for (std::size_t a = 0; a < dim; ++a) {
            const Interval& b = domain.bound(a);
            double v = b.lo + uniform01(rng()) * (b.hi - b.lo);
            c[a] = std::clamp(v, b.lo, b.hi);
        }
        out.points.push_back(Point(std::move(c)));
    }
    return out;
}

}  // namespace

SampleSet sample(const Domain& domain, const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorSpec::Kind::Grid: return sample_grid(domain, spec);
        case GeneratorSpec::Kind::SeededUniform: return sample_uniform(domain, spec);
    }
    throw ConfigError("unknown generator kind");
}

double MetricAuditReport::worst_violation() const {
    return std::max({worst_identity, worst_symmetry, worst_triangle});
}

MetricAuditReport audit_metric(const Metric& m, const SampleSet& s, double tol) {
    return audit_distance([&m](const Point& p, const Point& q) { return distance(m, p, q); }, s,
                          tol);
}

}  // namespace fixpoint
