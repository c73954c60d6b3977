#include "fixpoint/aux_functions.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace fixpoint {

std::string psi_family_name(PsiFamily family) {
    switch (family) {
        case PsiFamily::PowerSum: return "power_sum";
        case PsiFamily::ProductPower: return "product_power";
        case PsiFamily::MaxPower: return "max_power";
        case PsiFamily::ScaledPower: return "scaled_power";
        case PsiFamily::Custom: return "custom";
    }
    return "unknown";
}

PsiFamily psi_family_from_name(const std::string& name) {
    if (name == "power_sum") return PsiFamily::PowerSum;
    if (name == "product_power") return PsiFamily::ProductPower;
    if (name == "max_power") return PsiFamily::MaxPower;
    if (name == "scaled_power") return PsiFamily::ScaledPower;
    if (name == "custom") return PsiFamily::Custom;
    throw ConfigError("unknown psi family: " + name);
}

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

}  // namespace

AuxFunction AuxFunction::power_sum(double p, double q) {
    require(p > 0.0, "power_sum: p must be > 0");
    require(q > 0.0, "power_sum: q must be > 0");
    AuxFunction f;
    f.family_ = PsiFamily::PowerSum;
    f.p_ = p;
    f.q_ = q;
    return f;
}

AuxFunction AuxFunction::product_power(double p, double q, double r) {
    require(p > 0.0, "product_power: p must be > 0");
    require(q >= 0.0, "product_power: q must be >= 0");
    require(r > 0.0, "product_power: r must be > 0");
    AuxFunction f;
    f.family_ = PsiFamily::ProductPower;
    f.p_ = p;
    f.q_ = q;
    f.r_ = r;
    return f;
}

AuxFunction AuxFunction::max_power(double p, double q) {
    require(p > 0.0, "max_power: p must be > 0");
    require(q > 0.0, "max_power: q must be > 0");
    AuxFunction f;
    f.family_ = PsiFamily::MaxPower;
    f.p_ = p;
    f.q_ = q;
    return f;
}

AuxFunction AuxFunction::scaled_power(double p, double q, double r, double lambda) {
    require(p > 0.0, "scaled_power: p must be > 0");
    require(lambda > 0.0, "scaled_power: lambda must be > 0");
    require(q >= 0.0, "scaled_power: q must be >= 0");
    require(r >= 0.0, "scaled_power: r must be >= 0");
    AuxFunction f;
    f.family_ = PsiFamily::ScaledPower;
    f.p_ = p;
    f.q_ = q;
    f.r_ = r;
    f.lambda_ = lambda;
    return f;
}

AuxFunction AuxFunction::custom(const std::string& expr_text) {
    AuxFunction f;
    f.family_ = PsiFamily::Custom;
    f.expr_ = parse_expr(expr_text, {"s", "t"});
    f.expr_text_ = expr_text;
    return f;
}

double AuxFunction::operator()(double s, double t) const {
    if (s < 0.0 || t < 0.0) {
        throw EvalError("auxiliary function arguments must be nonnegative");
    }
    switch (family_) {
        case PsiFamily::PowerSum: return std::pow(s, p_) + std::pow(t, q_);
        case PsiFamily::ProductPower:
            return std::pow(s, p_) * std::pow(t, q_) + std::pow(t, r_);
        case PsiFamily::MaxPower: return std::max(std::pow(s, p_), std::pow(t, q_));
        case PsiFamily::ScaledPower:
            return std::pow(std::pow(s, p_) + r_ * std::pow(t, q_), lambda_);
        case PsiFamily::Custom: {
            const double env[2] = {s, t};
            return eval_expr(*expr_, env);
        }
    }
    throw EvalError("malformed auxiliary function");
}

std::string AuxFunction::describe() const {
    if (family_ == PsiFamily::Custom) {
        return "custom(" + expr_text_ + ")";
    }
    std::string out = psi_family_name(family_) + "(p=" + format_double(p_);
    out += ", q=" + format_double(q_);
    if (family_ == PsiFamily::ProductPower || family_ == PsiFamily::ScaledPower) {
        out += ", r=" + format_double(r_);
    }
    if (family_ == PsiFamily::ScaledPower) out += ", lambda=" + format_double(lambda_);
    return out + ")";
}

ControlFunction ControlFunction::linear(double r) {
    require(r >= 0.0, "linear phi: r must be >= 0");
    require(r < 1.0, "linear phi: r must be < 1");
    ControlFunction f;
    f.kind_ = Kind::Linear;
    f.r_ = r;
    return f;
}

ControlFunction ControlFunction::custom(const std::string& expr_text) {
    ControlFunction f;
    f.kind_ = Kind::Custom;
    f.expr_ = parse_expr(expr_text, {"t"});
    f.expr_text_ = expr_text;
    return f;
}

double ControlFunction::operator()(double t) const {
    if (t < 0.0) {
        throw EvalError("control function argument must be nonnegative");
    }
    if (kind_ == Kind::Linear) {
        return r_ * t;
    }
    const double env[1] = {t};
    return eval_expr(*expr_, env);
}

std::string ControlFunction::describe() const {
    if (kind_ == Kind::Linear) return "linear(r=" + format_double(r_) + ")";
    return "custom(" + expr_text_ + ")";
}

const AuditCheck* AuditReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

namespace {

constexpr double kContinuityThreshold = 1e-6;

double continuity_step() {
    double h = 0.1;
    while (h > 1e-6) h *= 0.5;
    return h;
}

std::string point_witness(double s, double t) {
    return "(" + format_double(s) + ", " + format_double(t) + ")";
}

void finish(AuditReport& rep) {
    rep.overall = true;
    for (const auto& c : rep.checks) rep.overall = rep.overall && c.pass;
}

template <class Fn>
std::optional<double> safe_eval(Fn&& f) {
    try {
        return f();
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

AuditReport audit_condition_a(const AuxFunction& psi, const SampleSet& grid, double tol) {
    if (grid.points.empty()) {
        throw ConfigError("condition audit requires a nonempty grid");
    }
    AuditReport rep;
    rep.subject = psi.describe();

    const auto& pts = grid.points;
    const std::size_t n = pts.size();
    std::vector<std::optional<double>> values(n);
    AuditCheck evaluable{"evaluable", true, 0.0, ""};
    for (std::size_t i = 0; i < n; ++i) {
        double s = pts[i][0];
        double t = pts[i].dim() > 1 ? pts[i][1] : 0.0;
        values[i] = safe_eval([&] { return psi(s, t); });
        if (!values[i] && evaluable.pass) {
            evaluable.pass = false;
            evaluable.witness = point_witness(s, t);
        }
    }
    rep.checks.push_back(evaluable);

    AuditCheck mono1{"monotone_arg1", true, 0.0, ""};
    AuditCheck mono2{"monotone_arg2", true, 0.0, ""};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!values[i] || !values[j]) continue;
            double si = pts[i][0], ti = pts[i].dim() > 1 ? pts[i][1] : 0.0;
            double sj = pts[j][0], tj = pts[j].dim() > 1 ? pts[j][1] : 0.0;
            if (ti == tj && si < sj) {
                double viol = *values[i] - *values[j];
                if (viol > tol && viol > mono1.worst) {
                    mono1.pass = false;
                    mono1.worst = viol;
                    mono1.witness = point_witness(si, ti) + " vs " + point_witness(sj, tj);
                }
            }
            if (si == sj && ti < tj) {
                double viol = *values[i] - *values[j];
                if (viol > tol && viol > mono2.worst) {
                    mono2.pass = false;
                    mono2.worst = viol;
                    mono2.witness = point_witness(si, ti) + " vs " + point_witness(sj, tj);
                }
            }
        }
    }
    rep.checks.push_back(mono1);
    rep.checks.push_back(mono2);

    const double h = continuity_step();
    AuditCheck cont1{"continuity_arg1", true, 0.0, ""};
    AuditCheck cont2{"continuity_arg2", true, 0.0, ""};
    for (std::size_t i = 0; i < n; ++i) {
        if (!values[i]) continue;
        double s = pts[i][0];
        double t = pts[i].dim() > 1 ? pts[i][1] : 0.0;
        double scale = 1.0 + std::fabs(*values[i]);
        auto bump1 = safe_eval([&] { return psi(s + h, t); });
        if (bump1) {
            double rel = std::fabs(*bump1 - *values[i]) / scale;
            if (rel >= kContinuityThreshold && rel > cont1.worst) {
                cont1.pass = false;
                cont1.worst = rel;
                cont1.witness = point_witness(s, t);
            }
        }
        auto bump2 = safe_eval([&] { return psi(s, t + h); });
        if (bump2) {
            double rel = std::fabs(*bump2 - *values[i]) / scale;
            if (rel >= kContinuityThreshold && rel > cont2.worst) {
                cont2.pass = false;
                cont2.worst = rel;
                cont2.witness = point_witness(s, t);
            }
        }
    }
    rep.checks.push_back(cont1);
    rep.checks.push_back(cont2);

    AuditCheck origin{"vanishes_at_origin", true, 0.0, ""};
    if (auto v = safe_eval([&] { return psi(0.0, 0.0); })) {
        origin.worst = std::fabs(*v);
        if (origin.worst > tol) {
            origin.pass = false;
            origin.witness = point_witness(0.0, 0.0);
        }
    } else {
        origin.pass = false;
        origin.witness = "evaluation error at (0, 0)";
    }
    rep.checks.push_back(origin);

    // psi(t, 0) must be strictly positive for every sampled t > 0;
    // psi(t, 0) = 0 with t > 0 breaks the separation property.
    AuditCheck axis{"positive_on_axis", true, 0.0, ""};
    for (std::size_t i = 0; i < n; ++i) {
        double t = pts[i][0];
        if (t <= tol) continue;
        auto v = safe_eval([&] { return psi(t, 0.0); });
        if (!v) continue;
        if (*v <= tol && t > axis.worst) {
            axis.pass = false;
            axis.worst = t;
            axis.witness = point_witness(t, 0.0);
        }
    }
    rep.checks.push_back(axis);

    // small psi value must force a small first argument
    AuditCheck remark{"zero_forces_zero_arg1", true, 0.0, ""};
    for (std::size_t i = 0; i < n; ++i) {
        if (!values[i]) continue;
        double s = pts[i][0];
        double t = pts[i].dim() > 1 ? pts[i][1] : 0.0;
        if (*values[i] <= tol && s > tol && s > remark.worst) {
            remark.pass = false;
            remark.worst = s;
            remark.witness = point_witness(s, t);
        }
    }
    rep.checks.push_back(remark);

    finish(rep);
    return rep;
}

AuditReport audit_phi(const ControlFunction& phi, const SampleSet& grid, double tol) {
    if (grid.points.empty()) {
        throw ConfigError("control-function audit requires a nonempty grid");
    }
    for (const auto& p : grid.points) {
        if (p[0] <= 0.0) {
            throw ConfigError("control-function audit grid points must be strictly positive");
        }
    }
    AuditReport rep;
    rep.subject = phi.describe();

    const auto& pts = grid.points;
    const std::size_t n = pts.size();
    std::vector<std::optional<double>> values(n);
    AuditCheck evaluable{"evaluable", true, 0.0, ""};
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = safe_eval([&] { return phi(pts[i][0]); });
        if (!values[i] && evaluable.pass) {
            evaluable.pass = false;
            evaluable.witness = format_double(pts[i][0]);
        }
    }
    rep.checks.push_back(evaluable);

    AuditCheck mono{"monotone", true, 0.0, ""};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!values[i] || !values[j] || !(pts[i][0] < pts[j][0])) continue;
            double viol = *values[i] - *values[j];
            if (viol > tol && viol > mono.worst) {
                mono.pass = false;
                mono.worst = viol;
                mono.witness = format_double(pts[i][0]) + " vs " + format_double(pts[j][0]);
            }
        }
    }
    rep.checks.push_back(mono);

    const double h = continuity_step();
    AuditCheck cont{"continuity", true, 0.0, ""};
    for (std::size_t i = 0; i < n; ++i) {
        if (!values[i]) continue;
        double t = pts[i][0];
        auto bump = safe_eval([&] { return phi(t + h); });
        if (!bump) continue;
        double rel = std::fabs(*bump - *values[i]) / (1.0 + std::fabs(*values[i]));
        if (rel >= kContinuityThreshold && rel > cont.worst) {
            cont.pass = false;
            cont.worst = rel;
            cont.witness = format_double(t);
        }
    }
    rep.checks.push_back(cont);

    AuditCheck bounds{"strict_bounds", true, 0.0, ""};
    for (std::size_t i = 0; i < n; ++i) {
        if (!values[i]) continue;
        double t = pts[i][0];
        double v = *values[i];
        double viol = std::max(-v, v - t);  // positive when 0 < v < t fails
        if (!(v > 0.0 && v < t) && viol >= bounds.worst) {
            bounds.pass = false;
            bounds.worst = viol;
            bounds.witness = format_double(t);
        }
    }
    rep.checks.push_back(bounds);

    AuditCheck zero{"vanishes_at_zero", true, 0.0, ""};
    if (auto v = safe_eval([&] { return phi(0.0); })) {
        zero.worst = std::fabs(*v);
        if (zero.worst > tol) {
            zero.pass = false;
            zero.witness = "0";
        }
    } else {
        zero.pass = false;
        zero.witness = "evaluation error at 0";
    }
    rep.checks.push_back(zero);

    finish(rep);
    return rep;
}

}  // namespace fixpoint
