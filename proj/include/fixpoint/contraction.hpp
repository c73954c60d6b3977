#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fixpoint/aux_functions.hpp"
#include "fixpoint/metric.hpp"
#include "fixpoint/piecewise.hpp"

namespace fixpoint {

// Four self-maps of one shared domain, checked against the contractive
// condition as the roles (A, B, S, T).
struct MapQuadruple {
    PiecewiseMap A;
    PiecewiseMap B;
    PiecewiseMap S;
    PiecewiseMap T;
    Metric metric;

    const Domain& domain() const { return A.domain(); }
};

// Which contractive inequality to check.
//   theorem_2_1    psi(d(Sx,Ty), d(Sx,Ty)) <= phi(M(x,y))
//   corollary_2_2  same lhs, rhs = scale * M(x,y)
//   corollary_2_3  theorem_2_1 with S := T and B := A substituted
//   theorem_2_5    theorem_2_1 with psi fixed to scaled_power(p, q, r, lambda)
//   choudhury_sum  two-term sum condition for a single map embedded as
//                  A = B = identity, S = T
struct ConditionForm {
    enum class Tag { Theorem21, Corollary22, Corollary23, Theorem25, ChoudhurySum };

    Tag tag = Tag::Theorem21;
    double scale = 0.0;   // corollary_2_2
    double sum_r = 0.0;   // choudhury_sum
    double sum_s = 0.0;   // choudhury_sum
    double p = 1.0;       // theorem_2_5
    double q = 0.0;
    double r = 0.0;
    double lambda = 1.0;

    static ConditionForm theorem_2_1();
    static ConditionForm corollary_2_2(double scale);
    static ConditionForm corollary_2_3();
    static ConditionForm theorem_2_5(double p, double q, double r, double lambda);
    static ConditionForm choudhury_sum(double r, double s);
};

std::string form_tag_name(ConditionForm::Tag tag);
ConditionForm::Tag form_tag_from_name(const std::string& name);

// The six-term majorant M(x,y): the max over the four plain psi terms and
// the two min-of-pair terms formed from the displacements of the quadruple.
double majorant(const MapQuadruple& quad, const AuxFunction& psi, const Point& x, const Point& y);

struct PairCheck {
    double lhs = 0.0;
    double majorant = 0.0;  // NaN for choudhury_sum
    double rhs = 0.0;
    double slack = 0.0;     // rhs - lhs
};

// Evaluates the chosen inequality at one pair. psi/phi are the scenario
// functions; forms that fix one of them ignore the given one.
PairCheck check_pair(const ConditionForm& form, const MapQuadruple& quad, const AuxFunction& psi,
                     const ControlFunction& phi, const Point& x, const Point& y);

struct PairRecord {
    std::size_t pair_index = 0;
    Point x;
    Point y;
    double lhs = 0.0;
    double majorant = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
};

struct ConditionReport {
    ConditionForm form;
    std::size_t pairs_checked = 0;
    double cond_tol = 0.0;
    double worst_slack = 0.0;
    PairRecord worst;
    std::vector<PairRecord> violations;  // first violations in pair order, capped
    std::size_t violation_count = 0;     // exact count
    bool pass = false;

    static constexpr std::size_t kMaxRecordedViolations = 100;
};

// Checks every pair of the sample with itself (including x = y). Verdict is
// "no violation found at this density", never a proof. Deterministic for any
// worker count.
ConditionReport verify(const ConditionForm& form, const MapQuadruple& quad,
                       const AuxFunction& psi, const ControlFunction& phi,
                       const SampleSet& sample, double cond_tol, int workers = 1);

// Draws seeded-uniform pairs and returns the first one violating the
// condition, or nothing once the budget is exhausted. pair_index is the
// trial number.
std::optional<PairRecord> falsify(const ConditionForm& form, const MapQuadruple& quad,
                                  const AuxFunction& psi, const ControlFunction& phi,
                                  std::size_t budget, std::uint64_t seed, double cond_tol);

struct InclusionFailure {
    Point x;
    Point target;
    std::string inclusion;  // which range inclusion failed
};

struct InclusionReport {
    std::size_t points_checked = 0;
    double preimage_tol = 0.0;
    std::vector<InclusionFailure> failures;
    bool pass = false;
};

// Numerical proxy for the range inclusions: for every sampled x, T(x) must
// have a preimage under A and S(x) a preimage under B at preimage_tol.
InclusionReport check_inclusions(const MapQuadruple& quad, const SampleSet& sample,
                                 double preimage_tol, int resolution = 1001);

}  // namespace fixpoint
