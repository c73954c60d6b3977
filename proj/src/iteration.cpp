#include "fixpoint/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "fixpoint/search.hpp"

namespace fixpoint {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_config(const IterationConfig& cfg, const Domain& domain) {
    if (cfg.conv_tol <= 0.0 || cfg.eq_tol <= 0.0 || cfg.preimage_tol <= 0.0) {
        throw ConfigError("iteration tolerances must be positive");
    }
    if (cfg.max_iter < 1) {
        throw ConfigError("max_iter must be at least 1");
    }
    if (cfg.preimage_resolution < 2) {
        throw ConfigError("preimage resolution must be at least 2");
    }
    if (!domain.contains(cfg.x0, cfg.eq_tol)) {
        throw ConfigError("x0 lies outside the domain");
    }
}

}  // namespace

std::string terminal_name(IterationTerminal t) {
    switch (t) {
        case IterationTerminal::Converged: return "converged";
        case IterationTerminal::MaxIterReached: return "max_iter_reached";
        case IterationTerminal::PreimageFailure: return "preimage_failure";
    }
    return "unknown";
}

std::vector<double> IterationTrace::alphas() const {
    std::vector<double> out;
    for (const auto& s : steps) {
        if (!std::isnan(s.alpha)) out.push_back(s.alpha);
    }
    return out;
}

IterationTrace jungck_iterate(const MapQuadruple& quad, const IterationConfig& cfg) {
    validate_config(cfg, quad.domain());

    IterationTrace trace;
    trace.config = cfg;
    trace.terminal = IterationTerminal::MaxIterReached;

    Point x = quad.domain().clamp(cfg.x0);
    int consecutive_small = 0;

    for (int n = 0; n < cfg.max_iter; ++n) {
        const bool even = n % 2 == 0;
        Point y = even ? quad.T(x) : quad.S(x);

        if (!trace.steps.empty()) {
            IterationStep& prev = trace.steps.back();
            prev.alpha = distance(quad.metric, prev.y, y);
            consecutive_small = prev.alpha <= cfg.conv_tol ? consecutive_small + 1 : 0;
        }
        trace.steps.push_back({static_cast<std::size_t>(n), x, y, kNaN});
        trace.limit = y;

        if (consecutive_small >= 3) {
            trace.terminal = IterationTerminal::Converged;
            return trace;
        }

        const PiecewiseMap& inverse_of = even ? quad.A : quad.B;
        auto next = preimage(inverse_of, quad.metric,
                             {y, cfg.preimage_tol, cfg.preimage_resolution});
        if (!next) {
            trace.terminal = IterationTerminal::PreimageFailure;
            trace.failure_step = static_cast<std::size_t>(n);
            trace.failure_target = y;
            return trace;
        }
        x = std::move(*next);
    }
    return trace;
}

std::string format_point(const Point& p) {
    std::string out;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        if (i > 0) out += ';';
        out += format_double(p[i]);
    }
    return out;
}

void write_trace_csv(const IterationTrace& trace, std::ostream& out) {
    out << "n,x,y,alpha\n";
    for (const auto& s : trace.steps) {
        out << s.n << ',' << format_point(s.x) << ',' << format_point(s.y) << ',';
        if (!std::isnan(s.alpha)) out << format_double(s.alpha);
        out << '\n';
    }
}

CauchyDiagnostics diagnose_cauchy(const IterationTrace& trace, const AuxFunction& psi,
                                  const ControlFunction& phi, double tol) {
    if (trace.steps.size() < 2) {
        throw ConfigError("cauchy diagnostics require a trace with at least 2 steps");
    }
    CauchyDiagnostics diag;
    diag.tol = tol;
    diag.terminal_converged = trace.terminal == IterationTerminal::Converged;

    const std::vector<double> a = trace.alphas();
    diag.steps_checked = a.size();
    diag.chain_worst = -std::numeric_limits<double>::infinity();
    diag.mono_worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        double chain = psi(a[i + 1], a[i + 1]) - phi(psi(a[i], a[i]));
        if (chain > diag.chain_worst) {
            diag.chain_worst = chain;
            diag.chain_worst_index = i;
        }
        double mono = a[i + 1] - a[i];
        if (mono > diag.mono_worst) {
            diag.mono_worst = mono;
            diag.mono_worst_index = i;
        }
    }
    diag.chain_pass = diag.chain_worst <= tol;
    diag.mono_pass = diag.mono_worst <= tol;
    diag.final_alpha = a.empty() ? kNaN : a.back();
    diag.final_pass = !diag.terminal_converged ||
                      (!a.empty() && diag.final_alpha <= trace.config.conv_tol);
    diag.pass = diag.chain_pass && diag.mono_pass && diag.final_pass;
    return diag;
}

namespace {

double map_gap(const PiecewiseMap& f, const PiecewiseMap& g, const Metric& metric,
               const Point& p) {
    try {
        return distance(metric, f.evaluate(p), g.evaluate(p));
    } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
    }
}

// Sorted union of the guard boundaries of both maps along one axis.
std::vector<double> joint_boundaries(const PiecewiseMap& f, const PiecewiseMap& g,
                                     std::size_t axis) {
    std::vector<double> vals = f.boundary_values(axis);
    std::vector<double> other = g.boundary_values(axis);
    vals.insert(vals.end(), other.begin(), other.end());
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

void dedupe_coincidences(std::vector<CoincidencePoint>& pts, double resolution) {
    std::sort(pts.begin(), pts.end(), [](const CoincidencePoint& a, const CoincidencePoint& b) {
        return lex_less(a.point, b.point);
    });
    std::vector<CoincidencePoint> out;
    for (const auto& c : pts) {
        if (!out.empty()) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < c.point.dim(); ++i) {
                double diff = c.point[i] - out.back().point[i];
                d2 += diff * diff;
            }
            if (std::sqrt(d2) <= resolution) {
                if (c.gap < out.back().gap) out.back() = c;
                continue;
            }
        }
        out.push_back(c);
    }
    pts = std::move(out);
}

}  // namespace

CoincidenceReport find_coincidence_points(const PiecewiseMap& f, const PiecewiseMap& g,
                                          const Metric& metric, const SampleSet& sample,
                                          double eq_tol) {
    if (f.domain() != g.domain()) {
        throw ConfigError("coincidence scan requires maps sharing one domain");
    }
    CoincidenceReport rep;
    rep.eq_tol = eq_tol;
    rep.grid_size = sample.points.size();

    const auto& pts = sample.points;
    std::vector<double> gaps(pts.size());
    bool all_small = !pts.empty();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        gaps[i] = map_gap(f, g, metric, pts[i]);
        all_small = all_small && gaps[i] <= eq_tol;
    }
    if (all_small) {
        rep.maps_coincide = true;
        for (std::size_t i = 0; i < pts.size() && i < CoincidenceReport::kCoincideListCap; ++i) {
            rep.points.push_back({pts[i], gaps[i]});
        }
        return rep;
    }

    std::vector<CoincidencePoint> found;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (gaps[i] <= eq_tol) found.push_back({pts[i], gaps[i]});
    }

    if (f.domain().dimension() == 1) {
        const std::vector<double> boundaries = joint_boundaries(f, g, 0);
        auto gap1 = [&](double v) { return map_gap(f, g, metric, Point(v)); };
        auto accept = [&](double x_hat, double gap_hat) {
            for (double b : boundaries) {
                if (std::fabs(x_hat - b) <= eq_tol) {
                    double gb = gap1(b);
                    if (gb <= eq_tol) {
                        found.push_back({Point(b), gb});
                    } else {
                        rep.refinement_failures.push_back(
                            {Point(x_hat), gb,
                             "refined minimum lies on a branch boundary where the gap is not "
                             "attained"});
                    }
                    return;
                }
            }
            found.push_back({Point(x_hat), gap_hat});
        };
        auto refine = [&](double a, double b) {
            MinimizeResult m = minimize_on_interval(gap1, a, b);
            if (m.value <= eq_tol) accept(m.x, m.value);
        };
        const std::size_t n = pts.size();
        for (std::size_t i = 1; i + 1 < n; ++i) {
            bool left_ok = gaps[i] <= gaps[i - 1];
            bool right_ok = gaps[i] <= gaps[i + 1];
            bool strict = gaps[i] < gaps[i - 1] || gaps[i] < gaps[i + 1];
            if (left_ok && right_ok && strict) refine(pts[i - 1][0], pts[i + 1][0]);
        }
        if (n >= 2 && gaps[0] < gaps[1]) refine(pts[0][0], pts[1][0]);
        if (n >= 2 && gaps[n - 1] < gaps[n - 2]) refine(pts[n - 2][0], pts[n - 1][0]);
    } else if (!pts.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (gaps[i] < gaps[best]) best = i;
        }
        Point p = pts[best];
        const Domain& dom = f.domain();
        int per_axis = std::max<int>(
            2, static_cast<int>(std::llround(std::pow(static_cast<double>(pts.size()),
                                                      1.0 / dom.dimension()))));
        for (int sweep = 0; sweep < 3; ++sweep) {
            for (std::size_t a = 0; a < dom.dimension(); ++a) {
                const Interval& bd = dom.bound(a);
                double h = (bd.hi - bd.lo) / std::max(1, per_axis - 1);
                MinimizeResult m = minimize_on_interval(
                    [&](double v) {
                        Point probe = p;
                        probe.coords[a] = v;
                        return map_gap(f, g, metric, probe);
                    },
                    std::max(bd.lo, p[a] - h), std::min(bd.hi, p[a] + h));
                p.coords[a] = m.x;
            }
        }
        double gp = map_gap(f, g, metric, p);
        if (gp <= eq_tol) found.push_back({p, gp});
    }

    dedupe_coincidences(found, eq_tol);
    rep.points = std::move(found);
    return rep;
}

WeaklyCompatibleReport check_weakly_compatible(const PiecewiseMap& f, const PiecewiseMap& g,
                                               const Metric& metric,
                                               const std::vector<CoincidencePoint>& coincidences,
                                               double tol) {
    WeaklyCompatibleReport rep;
    rep.tol = tol;
    if (coincidences.empty()) {
        rep.vacuous = true;
        rep.pass = true;
        return rep;
    }
    for (const auto& c : coincidences) {
        double comm = distance(metric, f(g(c.point)), g(f(c.point)));
        bool ok = comm <= tol;
        rep.checks.push_back({c.point, comm, ok});
        rep.pass = rep.pass && ok;
    }
    return rep;
}

Point eval_witness(const std::string& witness_text, const Domain& domain, double n) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t semi = witness_text.find(';', start);
        parts.push_back(witness_text.substr(
            start, semi == std::string::npos ? std::string::npos : semi - start));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    if (parts.size() != domain.dimension()) {
        throw ConfigError("witness expression count " + std::to_string(parts.size()) +
                          " does not match domain dimension " +
                          std::to_string(domain.dimension()));
    }
    std::vector<double> coords;
    const double env[1] = {n};
    for (const auto& text : parts) {
        ExprPtr e = parse_expr(text, {"n"});
        coords.push_back(eval_expr(*e, env));
    }
    Point p(std::move(coords));
    if (!domain.contains(p, 0.0)) {
        throw ConfigError("witness point " + format_point(p) + " at n = " + format_double(n) +
                          " lies outside the domain");
    }
    return p;
}

SequenceCompatReport check_compatible_on_sequence(const PiecewiseMap& f, const PiecewiseMap& g,
                                                  const Metric& metric,
                                                  const std::string& witness_text,
                                                  std::uint64_t horizon, double tol) {
    SequenceCompatReport rep;
    rep.witness_text = witness_text;
    rep.horizon = horizon;
    rep.tol = tol;

    rep.x_horizon = eval_witness(witness_text, f.domain(), static_cast<double>(horizon));
    const Point fx = f(rep.x_horizon);
    const Point gx = g(rep.x_horizon);
    rep.limit_estimate = gx;
    rep.premise_gap = distance(metric, fx, gx);
    rep.premise_established = rep.premise_gap <= tol;
    rep.tail_commutator = distance(metric, f(gx), g(fx));
    if (!rep.premise_established) {
        rep.vacuous = true;
        rep.compatible_at_witness = false;
        return rep;
    }
    rep.compatible_at_witness = rep.tail_commutator <= tol;
    return rep;
}

OrderedCompatReport check_weak_compatible_ordered(const PiecewiseMap& f, const PiecewiseMap& g,
                                                  const Metric& metric,
                                                  const std::string& witness_text,
                                                  std::uint64_t horizon, double tol) {
    OrderedCompatReport rep;
    rep.witness_text = witness_text;
    rep.horizon = horizon;
    rep.tol = tol;

    rep.x_horizon = eval_witness(witness_text, f.domain(), static_cast<double>(horizon));
    const Point fx = f(rep.x_horizon);
    const Point gx = g(rep.x_horizon);
    rep.limit_estimate = gx;  // the common limit, estimated at the horizon
    rep.g_of_limit = g(gx);

    rep.premise1_gap = distance(metric, fx, gx);
    rep.premise1 = rep.premise1_gap <= tol;
    rep.premise2_gap_fg = distance(metric, g(fx), rep.g_of_limit);
    rep.premise2_gap_gg = distance(metric, g(gx), rep.g_of_limit);
    rep.premise2 = rep.premise2_gap_fg <= tol && rep.premise2_gap_gg <= tol;

    rep.conclusion_gap = distance(metric, f(gx), rep.g_of_limit);
    if (!rep.premise1 || !rep.premise2) {
        rep.vacuous = true;
        rep.conclusion_holds = false;
        return rep;
    }
    rep.conclusion_holds = rep.conclusion_gap <= tol;
    return rep;
}

double Certificate::max_residual() const {
    return std::max({residual_A, residual_B, residual_S, residual_T});
}

Certificate certify(const MapQuadruple& quad, const IterationTrace& trace,
                    const std::vector<Point>& probes, const IterationConfig& cfg) {
    if (trace.terminal != IterationTerminal::Converged) {
        throw ConfigError("certify requires a converged trace, terminal was " +
                          terminal_name(trace.terminal));
    }
    Certificate cert;
    cert.conv_tol = cfg.conv_tol;
    cert.z = trace.limit;
    cert.residual_A = distance(quad.metric, quad.A(cert.z), cert.z);
    cert.residual_B = distance(quad.metric, quad.B(cert.z), cert.z);
    cert.residual_S = distance(quad.metric, quad.S(cert.z), cert.z);
    cert.residual_T = distance(quad.metric, quad.T(cert.z), cert.z);

    bool probes_ok = true;
    for (const Point& start : probes) {
        IterationConfig probe_cfg = cfg;
        probe_cfg.x0 = start;
        IterationTrace probe_trace = jungck_iterate(quad, probe_cfg);
        ProbeResult res;
        res.start = start;
        res.converged = probe_trace.terminal == IterationTerminal::Converged;
        res.limit = probe_trace.limit;
        res.distance_to_z = distance(quad.metric, probe_trace.limit, cert.z);
        probes_ok = probes_ok && res.converged && res.distance_to_z <= cfg.conv_tol;
        cert.probes.push_back(std::move(res));
    }

    // recover the coincidence witnesses u, v with A(u) ~ z ~ B(v)
    if (auto u = preimage(quad.A, quad.metric,
                          {cert.z, cfg.preimage_tol, cfg.preimage_resolution})) {
        cert.u_gap = distance(quad.metric, quad.A(*u), cert.z);
        cert.u = std::move(u);
    }
    if (auto v = preimage(quad.B, quad.metric,
                          {cert.z, cfg.preimage_tol, cfg.preimage_resolution})) {
        cert.v_gap = distance(quad.metric, quad.B(*v), cert.z);
        cert.v = std::move(v);
    }

    cert.certified = cert.max_residual() <= cfg.conv_tol && probes_ok;
    return cert;
}

}  // namespace fixpoint
