#include "fixpoint/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace fixpoint {

ConditionForm ConditionForm::theorem_2_1() {
    ConditionForm f;
    f.tag = Tag::Theorem21;
    return f;
}

ConditionForm ConditionForm::corollary_2_2(double scale) {
    if (scale < 0.0 || scale >= 1.0) {
        throw ConfigError("corollary_2_2: scale must satisfy 0 <= r < 1");
    }
    ConditionForm f;
    f.tag = Tag::Corollary22;
    f.scale = scale;
    return f;
}

ConditionForm ConditionForm::corollary_2_3() {
    ConditionForm f;
    f.tag = Tag::Corollary23;
    return f;
}

ConditionForm ConditionForm::theorem_2_5(double p, double q, double r, double lambda) {
    // parameter constraints are those of the scaled_power family
    AuxFunction::scaled_power(p, q, r, lambda);
    ConditionForm f;
    f.tag = Tag::Theorem25;
    f.p = p;
    f.q = q;
    f.r = r;
    f.lambda = lambda;
    return f;
}

ConditionForm ConditionForm::choudhury_sum(double r, double s) {
    if (r <= 0.0 || r >= 1.0) {
        throw ConfigError("choudhury_sum: r must satisfy 0 < r < 1");
    }
    if (s <= 0.0 || s > 1.0) {
        throw ConfigError("choudhury_sum: s must satisfy 0 < s <= 1");
    }
    ConditionForm f;
    f.tag = Tag::ChoudhurySum;
    f.sum_r = r;
    f.sum_s = s;
    return f;
}

std::string form_tag_name(ConditionForm::Tag tag) {
    switch (tag) {
        case ConditionForm::Tag::Theorem21: return "theorem_2_1";
        case ConditionForm::Tag::Corollary22: return "corollary_2_2";
        case ConditionForm::Tag::Corollary23: return "corollary_2_3";
        case ConditionForm::Tag::Theorem25: return "theorem_2_5";
        case ConditionForm::Tag::ChoudhurySum: return "choudhury_sum";
    }
    return "unknown";
}

ConditionForm::Tag form_tag_from_name(const std::string& name) {
    if (name == "theorem_2_1") return ConditionForm::Tag::Theorem21;
    if (name == "corollary_2_2") return ConditionForm::Tag::Corollary22;
    if (name == "corollary_2_3") return ConditionForm::Tag::Corollary23;
    if (name == "theorem_2_5") return ConditionForm::Tag::Theorem25;
    if (name == "choudhury_sum") return ConditionForm::Tag::ChoudhurySum;
    throw ConfigError("unknown condition form: " + name);
}

namespace {

struct RoleImages {
    Point Ax, By, Sx, Ty;
};

double majorant_of_images(const Metric& m, const AuxFunction& psi, const RoleImages& im) {
    const double d_Ax_By = distance(m, im.Ax, im.By);
    const double d_Ax_Sx = distance(m, im.Ax, im.Sx);
    const double d_By_Ty = distance(m, im.By, im.Ty);
    const double d_By_Sx = distance(m, im.By, im.Sx);
    const double d_Ax_Ty = distance(m, im.Ax, im.Ty);

    const double t1 = psi(d_Ax_By, d_Ax_Sx);
    const double t2 = psi(d_Ax_By, d_By_Ty);
    const double t3 = psi(d_Ax_Sx, d_By_Ty);
    const double t4 = psi(d_By_Ty, d_Ax_Sx);
    const double t5 = std::min(psi(d_By_Sx, d_Ax_Sx), psi(d_Ax_Ty, d_By_Ty));
    const double t6 = std::min(psi(d_By_Sx, d_By_Ty), psi(d_Ax_Ty, d_Ax_Sx));
    return std::max({t1, t2, t3, t4, t5, t6});
}

RoleImages role_images(const ConditionForm& form, const MapQuadruple& quad, const Point& x,
                       const Point& y) {
    if (form.tag == ConditionForm::Tag::Corollary23) {
        return {quad.A(x), quad.A(y), quad.T(x), quad.T(y)};
    }
    return {quad.A(x), quad.B(y), quad.S(x), quad.T(y)};
}

void require_single_map_embedding(const MapQuadruple& quad, const Point& x, const Point& y) {
    const double tol = quad.A.eq_tol();
    if (distance(quad.metric, quad.A(x), x) > tol || distance(quad.metric, quad.B(y), y) > tol ||
        distance(quad.metric, quad.S(x), quad.T(x)) > tol) {
        throw ConfigError(
            "choudhury_sum form requires a single-map quadruple: A = B = identity and S = T");
    }
}

PairCheck check_choudhury(const ConditionForm& form, const MapQuadruple& quad,
                          const AuxFunction& psi, const Point& x, const Point& y) {
    require_single_map_embedding(quad, x, y);
    const Metric& m = quad.metric;
    const Point Tx = quad.T(x);
    const Point Ty = quad.T(y);
    const Point TTx = quad.T(Tx);

    PairCheck pc;
    pc.lhs = psi(distance(m, Tx, Ty), distance(m, x, Tx)) +
             psi(distance(m, y, Ty), distance(m, y, TTx));
    pc.rhs = form.sum_r * psi(distance(m, x, y), distance(m, x, Tx)) +
             form.sum_s * psi(distance(m, y, Ty), distance(m, y, Tx));
    pc.majorant = std::numeric_limits<double>::quiet_NaN();
    pc.slack = pc.rhs - pc.lhs;
    return pc;
}

}  // namespace

double majorant(const MapQuadruple& quad, const AuxFunction& psi, const Point& x, const Point& y) {
    return majorant_of_images(quad.metric, psi,
                              {quad.A(x), quad.B(y), quad.S(x), quad.T(y)});
}

PairCheck check_pair(const ConditionForm& form, const MapQuadruple& quad, const AuxFunction& psi,
                     const ControlFunction& phi, const Point& x, const Point& y) {
    if (form.tag == ConditionForm::Tag::ChoudhurySum) {
        return check_choudhury(form, quad, psi, x, y);
    }

    const AuxFunction effective_psi =
        form.tag == ConditionForm::Tag::Theorem25
            ? AuxFunction::scaled_power(form.p, form.q, form.r, form.lambda)
            : psi;

    const RoleImages im = role_images(form, quad, x, y);
    const double displacement = distance(quad.metric, im.Sx, im.Ty);

    PairCheck pc;
    pc.lhs = effective_psi(displacement, displacement);
    pc.majorant = majorant_of_images(quad.metric, effective_psi, im);
    pc.rhs = form.tag == ConditionForm::Tag::Corollary22 ? form.scale * pc.majorant
                                                         : phi(pc.majorant);
    pc.slack = pc.rhs - pc.lhs;
    return pc;
}

namespace {

struct ChunkResult {
    double worst_slack = std::numeric_limits<double>::infinity();
    std::size_t worst_index = 0;
    PairRecord worst;
    std::vector<PairRecord> violations;
    std::size_t violation_count = 0;
};

ChunkResult check_range(const ConditionForm& form, const MapQuadruple& quad,
                        const AuxFunction& psi, const ControlFunction& phi,
                        const std::vector<Point>& pts, std::size_t begin, std::size_t end,
                        double cond_tol) {
    ChunkResult res;
    const std::size_t n = pts.size();
    for (std::size_t idx = begin; idx < end; ++idx) {
        const Point& x = pts[idx / n];
        const Point& y = pts[idx % n];
        PairCheck pc = check_pair(form, quad, psi, phi, x, y);
        if (pc.slack < res.worst_slack) {
            res.worst_slack = pc.slack;
            res.worst_index = idx;
            res.worst = PairRecord{idx, x, y, pc.lhs, pc.majorant, pc.rhs, pc.slack};
        }
        if (pc.slack < -cond_tol) {
            ++res.violation_count;
            if (res.violations.size() < ConditionReport::kMaxRecordedViolations) {
                res.violations.push_back(
                    PairRecord{idx, x, y, pc.lhs, pc.majorant, pc.rhs, pc.slack});
            }
        }
    }
    return res;
}

}  // namespace

ConditionReport verify(const ConditionForm& form, const MapQuadruple& quad,
                       const AuxFunction& psi, const ControlFunction& phi,
                       const SampleSet& sample, double cond_tol, int workers) {
    ConditionReport rep;
    rep.form = form;
    rep.cond_tol = cond_tol;
    const std::vector<Point>& pts = sample.points;
    const std::size_t total = pts.size() * pts.size();
    rep.pairs_checked = total;
    if (total == 0) {
        rep.pass = true;
        rep.worst_slack = 0.0;
        return rep;
    }

    int nworkers = std::clamp(workers, 1, 64);
    nworkers = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(nworkers), total));

    std::vector<ChunkResult> chunks(static_cast<std::size_t>(nworkers));
    if (nworkers == 1) {
        chunks[0] = check_range(form, quad, psi, phi, pts, 0, total, cond_tol);
    } else {
        std::vector<std::thread> threads;
        const std::size_t per = (total + nworkers - 1) / nworkers;
        for (int w = 0; w < nworkers; ++w) {
            const std::size_t begin = per * static_cast<std::size_t>(w);
            const std::size_t end = std::min(total, begin + per);
            threads.emplace_back([&, w, begin, end] {
                chunks[static_cast<std::size_t>(w)] =
                    check_range(form, quad, psi, phi, pts, begin, end, cond_tol);
            });
        }
        for (auto& t : threads) t.join();
    }

    rep.worst_slack = std::numeric_limits<double>::infinity();
    for (const auto& c : chunks) {
        // merge in chunk order so equal slacks resolve to the smallest index
        if (c.worst_slack < rep.worst_slack) {
            rep.worst_slack = c.worst_slack;
            rep.worst = c.worst;
        }
        rep.violation_count += c.violation_count;
        for (const auto& v : c.violations) {
            if (rep.violations.size() < ConditionReport::kMaxRecordedViolations) {
                rep.violations.push_back(v);
            }
        }
    }
    rep.pass = rep.violation_count == 0;
    return rep;
}

std::optional<PairRecord> falsify(const ConditionForm& form, const MapQuadruple& quad,
                                  const AuxFunction& psi, const ControlFunction& phi,
                                  std::size_t budget, std::uint64_t seed, double cond_tol) {
    if (budget < 1) {
        throw ConfigError("falsify budget must be at least 1");
    }
    const Domain& dom = quad.domain();
    std::mt19937_64 rng(seed);
    auto draw_point = [&] {
        std::vector<double> c(dom.dimension());
        for (std::size_t a = 0; a < dom.dimension(); ++a) {
            const Interval& b = dom.bound(a);
            c[a] = std::clamp(b.lo + uniform01(rng()) * (b.hi - b.lo), b.lo, b.hi);
        }
        return Point(std::move(c));
    };
    for (std::size_t trial = 0; trial < budget; ++trial) {
        Point x = draw_point();
        Point y = draw_point();
        PairCheck pc = check_pair(form, quad, psi, phi, x, y);
        if (pc.slack < -cond_tol) {
            return PairRecord{trial, std::move(x), std::move(y), pc.lhs, pc.majorant, pc.rhs,
                              pc.slack};
        }
    }
    return std::nullopt;
}

InclusionReport check_inclusions(const MapQuadruple& quad, const SampleSet& sample,
                                 double preimage_tol, int resolution) {
    InclusionReport rep;
    rep.preimage_tol = preimage_tol;
    rep.points_checked = sample.points.size();
    for (const Point& x : sample.points) {
        Point t_image = quad.T(x);
        if (!preimage(quad.A, quad.metric, {t_image, preimage_tol, resolution})) {
            rep.failures.push_back({x, t_image, "closure(T(K)) within A(K)"});
        }
        Point s_image = quad.S(x);
        if (!preimage(quad.B, quad.metric, {s_image, preimage_tol, resolution})) {
            rep.failures.push_back({x, s_image, "closure(S(K)) within B(K)"});
        }
    }
    rep.pass = rep.failures.empty();
    return rep;
}

}  // namespace fixpoint
