#include "fixpoint/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixpoint/search.hpp"

namespace fixpoint {

bool Comparison::holds(double v) const {
    switch (op) {
        case Op::LT: return v < bound;
        case Op::LE: return v <= bound;
        case Op::GT: return v > bound;
        case Op::GE: return v >= bound;
    }
    return false;
}

bool Guard::matches(const Point& p) const {
    for (const auto& atom : atoms) {
        if (atom.coord >= p.dim()) {
            throw DimensionMismatch(atom.coord + 1, p.dim());
        }
        if (!atom.holds(p[atom.coord])) return false;
    }
    return true;
}

std::vector<std::string> map_variables(std::size_t dimension) {
    std::vector<std::string> vars;
    if (dimension == 1) {
        vars = {"x", "x_1"};
    } else {
        for (std::size_t i = 1; i <= dimension; ++i) {
            vars.push_back("x_" + std::to_string(i));
        }
    }
    return vars;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

// Environment for evaluating a map expression at p; in 1-D both "x" and
// "x_1" alias coordinate 0.
std::vector<double> map_env(const Point& p) {
    if (p.dim() == 1) return {p[0], p[0]};
    return p.coords;
}

std::optional<std::size_t> variable_coord(const std::string& side, std::size_t dimension) {
    const auto vars = map_variables(dimension);
    std::string t = trim(side);
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (t == vars[i]) {
            return dimension == 1 ? 0 : i;
        }
    }
    return std::nullopt;
}

double constant_value(const std::string& side) {
    ExprPtr e = parse_expr(side, {});
    return eval_expr(e, std::span<const double>{});
}

Comparison::Op flip(Comparison::Op op) {
    switch (op) {
        case Comparison::Op::LT: return Comparison::Op::GT;
        case Comparison::Op::LE: return Comparison::Op::GE;
        case Comparison::Op::GT: return Comparison::Op::LT;
        case Comparison::Op::GE: return Comparison::Op::LE;
    }
    return op;
}

Comparison parse_atom(const std::string& atom, std::size_t dimension) {
    struct OpText {
        const char* text;
        Comparison::Op op;
    };
    // two-character operators first
    static const OpText ops[] = {{"<=", Comparison::Op::LE},
                                 {">=", Comparison::Op::GE},
                                 {"<", Comparison::Op::LT},
                                 {">", Comparison::Op::GT}};
    for (const auto& o : ops) {
        std::size_t at = atom.find(o.text);
        if (at == std::string::npos) continue;
        std::string lhs = atom.substr(0, at);
        std::string rhs = atom.substr(at + std::string(o.text).size());
        auto lvar = variable_coord(lhs, dimension);
        auto rvar = variable_coord(rhs, dimension);
        Comparison cmp;
        if (lvar && !rvar) {
            cmp.coord = *lvar;
            cmp.op = o.op;
            cmp.bound = constant_value(rhs);
        } else if (rvar && !lvar) {
            cmp.coord = *rvar;
            cmp.op = flip(o.op);
            cmp.bound = constant_value(lhs);
        } else {
            throw ConfigError("guard comparison must have a coordinate on exactly one side: '" +
                              atom + "'");
        }
        return cmp;
    }
    throw ConfigError("guard atom has no comparison operator: '" + atom + "'");
}

}  // namespace

Guard parse_guard(const std::string& text, std::size_t dimension) {
    Guard g;
    g.text = text;
    std::string t = trim(text);
    if (t.empty() || t == "true") {
        return g;
    }
    std::size_t start = 0;
    while (start <= t.size()) {
        std::size_t amp = t.find("&&", start);
        std::string atom =
            amp == std::string::npos ? t.substr(start) : t.substr(start, amp - start);
        if (trim(atom).empty()) {
            throw ConfigError("empty guard atom in '" + text + "'");
        }
        g.atoms.push_back(parse_atom(atom, dimension));
        if (amp == std::string::npos) break;
        start = amp + 2;
    }
    return g;
}

PiecewiseMap::PiecewiseMap(Domain domain, std::vector<Branch> branches, double eq_tol)
    : domain_(std::move(domain)), branches_(std::move(branches)), eq_tol_(eq_tol) {
    if (branches_.empty()) {
        throw ConfigError("piecewise map needs at least one branch");
    }
    for (const auto& b : branches_) {
        if (b.outputs.size() != domain_.dimension()) {
            throw ConfigError("branch must have one output expression per coordinate");
        }
    }
    if (eq_tol_ <= 0.0) {
        throw ConfigError("eq_tol must be positive");
    }
}

PiecewiseMap PiecewiseMap::from_text(
    Domain domain, const std::vector<std::pair<std::string, std::vector<std::string>>>& branches,
    double eq_tol) {
    const auto vars = map_variables(domain.dimension());
    std::vector<Branch> parsed;
    parsed.reserve(branches.size());
    for (const auto& [guard_text, exprs] : branches) {
        Branch b;
        b.guard = parse_guard(guard_text, domain.dimension());
        for (const auto& text : exprs) {
            b.outputs.push_back(parse_expr(text, vars));
            b.output_texts.push_back(text);
        }
        parsed.push_back(std::move(b));
    }
    return PiecewiseMap(std::move(domain), std::move(parsed), eq_tol);
}

PiecewiseMap PiecewiseMap::single(Domain domain, const std::string& expr, double eq_tol) {
    return from_text(std::move(domain), {{"true", {expr}}}, eq_tol);
}

int PiecewiseMap::matching_branch(const Point& p) const {
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        if (branches_[i].guard.matches(p)) return static_cast<int>(i);
    }
    return -1;
}

Point PiecewiseMap::evaluate(const Point& p) const {
    if (p.dim() != domain_.dimension()) {
        throw DimensionMismatch(p.dim(), domain_.dimension());
    }
    int idx = matching_branch(p);
    if (idx < 0) {
        std::string coords;
        for (double c : p.coords) {
            if (!coords.empty()) coords += ", ";
            coords += format_double(c);
        }
        throw CoverageError("no branch guard matches point (" + coords + ")");
    }
    const Branch& b = branches_[static_cast<std::size_t>(idx)];
    const std::vector<double> env = map_env(p);
    std::vector<double> out(domain_.dimension());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = eval_expr(b.outputs[i], env);
        const Interval& bd = domain_.bound(i);
        if (out[i] < bd.lo) {
            if (bd.lo - out[i] > eq_tol_) {
                throw SelfMapViolation("map value " + format_double(out[i]) +
                                       " is below domain bound " + format_double(bd.lo));
            }
            out[i] = bd.lo;
        } else if (out[i] > bd.hi) {
            if (out[i] - bd.hi > eq_tol_) {
                throw SelfMapViolation("map value " + format_double(out[i]) +
                                       " is above domain bound " + format_double(bd.hi));
            }
            out[i] = bd.hi;
        }
    }
    return Point(std::move(out));
}

std::vector<double> PiecewiseMap::boundary_values(std::size_t axis) const {
    std::vector<double> vals;
    for (const auto& b : branches_) {
        for (const auto& atom : b.guard.atoms) {
            if (atom.coord == axis) vals.push_back(atom.bound);
        }
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

namespace {

struct Region {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_strict = false;
    bool hi_strict = false;

    bool empty() const { return lo > hi || (lo == hi && (lo_strict || hi_strict)); }
    bool contains(double x) const {
        if (lo_strict ? x <= lo : x < lo) return false;
        if (hi_strict ? x >= hi : x > hi) return false;
        return true;
    }
    double leftmost() const {
        return lo_strict ? std::nextafter(lo, std::numeric_limits<double>::infinity()) : lo;
    }
};

// Intersection of a 1-D guard with the domain interval.
Region guard_region(const Guard& g, const Interval& bound) {
    Region r{bound.lo, bound.hi, false, false};
    for (const auto& atom : g.atoms) {
        switch (atom.op) {
            case Comparison::Op::GE:
            case Comparison::Op::GT: {
                bool strict = atom.op == Comparison::Op::GT;
                if (atom.bound > r.lo) {
                    r.lo = atom.bound;
                    r.lo_strict = strict;
                } else if (atom.bound == r.lo) {
                    r.lo_strict = r.lo_strict || strict;
                }
                break;
            }
            case Comparison::Op::LE:
            case Comparison::Op::LT: {
                bool strict = atom.op == Comparison::Op::LT;
                if (atom.bound < r.hi) {
                    r.hi = atom.bound;
                    r.hi_strict = strict;
                } else if (atom.bound == r.hi) {
                    r.hi_strict = r.hi_strict || strict;
                }
                break;
            }
        }
    }
    return r;
}

double point_gap(const PiecewiseMap& map, const Metric& metric, const Point& p,
                 const Point& target) {
    try {
        return distance(metric, map.evaluate(p), target);
    } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
    }
}

void analytic_candidates_1d(const PiecewiseMap& map, const Metric& metric,
                            const PreimageQuery& q, std::vector<Point>& out, bool& all_affine) {
    const double target = q.target[0];
    for (const auto& branch : map.branches()) {
        auto coeffs = affine_coefficients(*branch.outputs[0]);
        if (!coeffs) {
            all_affine = false;
            continue;
        }
        Region region = guard_region(branch.guard, map.domain().bound(0));
        if (region.empty()) continue;
        auto [a, b] = *coeffs;
        std::vector<double> roots;
        if (a != 0.0) {
            roots.push_back((target - b) / a);
        } else if (std::fabs(b - target) <= q.tolerance) {
            roots.push_back(region.leftmost());
        }
        for (double x : roots) {
            if (!region.contains(x)) continue;
            Point p(x);
            if (point_gap(map, metric, p, q.target) <= q.tolerance) {
                out.push_back(std::move(p));
            }
        }
    }
}

void grid_candidates(const PiecewiseMap& map, const Metric& metric, const PreimageQuery& q,
                     std::vector<Point>& out) {
    const Domain& dom = map.domain();
    SampleSet grid = sample(dom, GeneratorSpec::grid(q.resolution));
    const std::size_t n = grid.points.size();
    std::vector<double> gap(n);
    for (std::size_t i = 0; i < n; ++i) {
        gap[i] = point_gap(map, metric, grid.points[i], q.target);
        if (gap[i] <= q.tolerance) out.push_back(grid.points[i]);
    }
    if (dom.dimension() == 1) {
        auto g = [&](double x) { return point_gap(map, metric, Point(x), q.target); };
        auto refine = [&](double a, double b) {
            MinimizeResult m = minimize_on_interval(g, a, b);
            if (m.value <= q.tolerance) out.push_back(Point(m.x));
        };
        for (std::size_t i = 0; i + 1 < n; ++i) {
            // bisect across sign changes of the (scalar) residual
            double ha = 0.0, hb = 0.0;
            try {
                ha = map.evaluate(grid.points[i])[0] - q.target[0];
                hb = map.evaluate(grid.points[i + 1])[0] - q.target[0];
            } catch (const Error&) {
                continue;
            }
            if ((ha < 0.0 && hb > 0.0) || (ha > 0.0 && hb < 0.0)) {
                double x = bisect_sign_change(
                    [&](double v) { return map.evaluate(Point(v))[0] - q.target[0]; },
                    grid.points[i][0], grid.points[i + 1][0]);
                if (g(x) <= q.tolerance) out.push_back(Point(x));
            }
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            bool left_ok = gap[i] <= gap[i - 1];
            bool right_ok = gap[i] <= gap[i + 1];
            bool strict = gap[i] < gap[i - 1] || gap[i] < gap[i + 1];
            if (left_ok && right_ok && strict) {
                refine(grid.points[i - 1][0], grid.points[i + 1][0]);
            }
        }
        if (n >= 2 && gap[0] < gap[1]) refine(grid.points[0][0], grid.points[1][0]);
        if (n >= 2 && gap[n - 1] < gap[n - 2]) refine(grid.points[n - 2][0], grid.points[n - 1][0]);
    } else {
        // coordinate-descent refinement from the best grid point
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (gap[i] < gap[best]) best = i;
        }
        Point p = grid.points[best];
        for (int sweep = 0; sweep < 3; ++sweep) {
            for (std::size_t a = 0; a < dom.dimension(); ++a) {
                const Interval& bd = dom.bound(a);
                double h = (bd.hi - bd.lo) / (q.resolution - 1);
                double lo = std::max(bd.lo, p[a] - h);
                double hi = std::min(bd.hi, p[a] + h);
                MinimizeResult m = minimize_on_interval(
                    [&](double v) {
                        Point probe = p;
                        probe.coords[a] = v;
                        return point_gap(map, metric, probe, q.target);
                    },
                    lo, hi);
                p.coords[a] = m.x;
            }
        }
        if (point_gap(map, metric, p, q.target) <= q.tolerance) out.push_back(p);
    }
}

}  // namespace

std::optional<Point> preimage(const PiecewiseMap& map, const Metric& metric,
                              const PreimageQuery& query) {
    if (query.tolerance <= 0.0) {
        throw ConfigError("preimage tolerance must be positive");
    }
    if (query.resolution < 2) {
        throw ConfigError("preimage resolution must be at least 2");
    }
    if (query.target.dim() != map.domain().dimension()) {
        throw DimensionMismatch(query.target.dim(), map.domain().dimension());
    }

    std::vector<Point> candidates;
    bool all_affine = true;
    if (map.domain().dimension() == 1) {
        analytic_candidates_1d(map, metric, query, candidates, all_affine);
    } else {
        all_affine = false;
    }
    if (candidates.empty() || !all_affine) {
        grid_candidates(map, metric, query, candidates);
    }
    if (candidates.empty()) return std::nullopt;
    return *std::min_element(candidates.begin(), candidates.end(), lex_less);
}

}  // namespace fixpoint
