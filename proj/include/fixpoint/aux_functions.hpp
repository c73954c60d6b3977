#pragma once

#include <string>
#include <vector>

#include "fixpoint/expr.hpp"
#include "fixpoint/metric.hpp"

namespace fixpoint {

enum class PsiFamily { PowerSum, ProductPower, MaxPower, ScaledPower, Custom };

std::string psi_family_name(PsiFamily family);
PsiFamily psi_family_from_name(const std::string& name);

// Two-variable auxiliary function psi(s, t) on the nonnegative quadrant.
// Built-in families:
//   power_sum     psi(s,t) = s^p + t^q            p > 0, q > 0
//   product_power psi(s,t) = s^p t^q + t^r        p > 0, q >= 0, r > 0
//   max_power     psi(s,t) = max{s^p, t^q}        p > 0, q > 0
//   scaled_power  psi(s,t) = (s^p + r t^q)^l      p, l > 0, q, r >= 0
// plus custom expressions in variables s, t. Parameter constraints are
// enforced at construction; membership in the audited class is not (see
// audit_condition_a).
class AuxFunction {
public:
    AuxFunction() = default;

    static AuxFunction power_sum(double p, double q);
    static AuxFunction product_power(double p, double q, double r);
    static AuxFunction max_power(double p, double q);
    static AuxFunction scaled_power(double p, double q, double r, double lambda);
    static AuxFunction custom(const std::string& expr_text);

    // Throws EvalError on negative input.
    double operator()(double s, double t) const;

    PsiFamily family() const { return family_; }
    double p() const { return p_; }
    double q() const { return q_; }
    double r() const { return r_; }
    double lambda() const { return lambda_; }
    const std::string& expr_text() const { return expr_text_; }
    std::string describe() const;

private:
    PsiFamily family_ = PsiFamily::PowerSum;
    double p_ = 1.0;
    double q_ = 1.0;
    double r_ = 0.0;
    double lambda_ = 1.0;
    ExprPtr expr_;
    std::string expr_text_;
};

// One-variable control function phi with phi(0) = 0 and, for admissible
// members, 0 < phi(t) < t. Linear kind is phi(t) = r t with 0 <= r < 1.
class ControlFunction {
public:
    enum class Kind { Linear, Custom };

    ControlFunction() = default;

    static ControlFunction linear(double r);
    static ControlFunction custom(const std::string& expr_text);

    // Throws EvalError on negative input.
    double operator()(double t) const;

    Kind kind() const { return kind_; }
    double r() const { return r_; }
    const std::string& expr_text() const { return expr_text_; }
    std::string describe() const;

private:
    Kind kind_ = Kind::Linear;
    double r_ = 0.5;
    ExprPtr expr_;
    std::string expr_text_;
};

struct AuditCheck {
    std::string name;
    bool pass = true;
    double worst = 0.0;      // magnitude of the worst violation found
    std::string witness;     // where it happened
};

struct AuditReport {
    std::string subject;
    std::vector<AuditCheck> checks;
    bool overall = true;

    const AuditCheck* find(const std::string& name) const;
};

// Samples the defining properties of the auxiliary-function class over a
// 2-D grid: monotonicity in each argument, a halving-step continuity proxy,
// psi(0,0) = 0, positivity of psi(t,0) for t > 0, and the consequence that
// psi(s,t) ~ 0 forces s ~ 0. Failures are report entries, not errors.
AuditReport audit_condition_a(const AuxFunction& psi, const SampleSet& grid, double tol);

// Samples the control-function class properties over a 1-D grid of strictly
// positive points: monotonicity, continuity proxy, 0 < phi(t) < t, and
// phi(0) = 0.
AuditReport audit_phi(const ControlFunction& phi, const SampleSet& grid, double tol);

}  // namespace fixpoint
