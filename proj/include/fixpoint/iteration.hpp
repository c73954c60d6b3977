#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fixpoint/contraction.hpp"

namespace fixpoint {

struct IterationConfig {
    Point x0;
    int max_iter = 200;
    double conv_tol = 1e-9;
    double eq_tol = 1e-9;
    double preimage_tol = 1e-9;
    int preimage_resolution = 1001;
};

// One step of the alternating iteration. y is T(x) on even steps and S(x)
// on odd ones; alpha is the distance to the next y and is NaN on the final
// recorded step.
struct IterationStep {
    std::size_t n = 0;
    Point x;
    Point y;
    double alpha = 0.0;
};

enum class IterationTerminal { Converged, MaxIterReached, PreimageFailure };

std::string terminal_name(IterationTerminal t);

struct IterationTrace {
    std::vector<IterationStep> steps;
    IterationTerminal terminal = IterationTerminal::MaxIterReached;
    Point limit;               // last y computed; the candidate z when converged
    std::size_t failure_step = 0;  // set on PreimageFailure
    Point failure_target;          // the unreachable preimage target
    IterationConfig config;

    // Alphas of all completed steps, in order.
    std::vector<double> alphas() const;
};

// The alternating scheme: y_2n = T(x_2n), then x_{2n+1} solves
// A(x_{2n+1}) = y_2n; y_{2n+1} = S(x_{2n+1}), then x_{2n+2} solves
// B(x_{2n+2}) = y_{2n+1}. Stops once alpha_n <= conv_tol holds for three
// consecutive steps, on max_iter, or when a preimage step fails (the range
// inclusion hypothesis breaking down numerically at that target).
IterationTrace jungck_iterate(const MapQuadruple& quad, const IterationConfig& cfg);

// CSV with header n,x,y,alpha; multi-dimensional points are semicolon-joined.
void write_trace_csv(const IterationTrace& trace, std::ostream& out);

std::string format_point(const Point& p);

struct CauchyDiagnostics {
    std::size_t steps_checked = 0;
    // max over n of psi(a_{n+1}, a_{n+1}) - phi(psi(a_n, a_n)); <= tol passes
    double chain_worst = 0.0;
    std::size_t chain_worst_index = 0;
    // max over n of a_{n+1} - a_n; <= tol passes
    double mono_worst = 0.0;
    std::size_t mono_worst_index = 0;
    double final_alpha = 0.0;
    bool terminal_converged = false;
    double tol = 0.0;
    bool chain_pass = true;
    bool mono_pass = true;
    bool final_pass = true;
    bool pass = true;
};

// Per-step checks of the contraction chain on the recorded alpha sequence:
// psi(a_{n+1}, a_{n+1}) <= phi(psi(a_n, a_n)) + tol, the alphas
// non-increasing within tol, and (when converged) the final alpha below
// conv_tol.
CauchyDiagnostics diagnose_cauchy(const IterationTrace& trace, const AuxFunction& psi,
                                  const ControlFunction& phi, double tol);

struct CoincidencePoint {
    Point point;
    double gap = 0.0;  // distance between the two images there
};

struct RefinementFailure {
    Point near;
    double boundary_gap = 0.0;
    std::string note;
};

struct CoincidenceReport {
    std::vector<CoincidencePoint> points;
    bool maps_coincide = false;
    std::vector<RefinementFailure> refinement_failures;
    double eq_tol = 0.0;
    std::size_t grid_size = 0;

    static constexpr std::size_t kCoincideListCap = 20;
};

// Grid scan of gap(x) = d(f(x), g(x)) with ternary refinement of bracketed
// local minima. A refined minimum that lands on a branch boundary of either
// map is accepted only if the gap at the boundary point itself passes;
// otherwise the infimum is not attained there and a refinement failure is
// recorded instead of a spurious coincidence.
CoincidenceReport find_coincidence_points(const PiecewiseMap& f, const PiecewiseMap& g,
                                          const Metric& metric, const SampleSet& sample,
                                          double eq_tol);

struct CommutatorCheck {
    Point point;
    double commutator = 0.0;  // d(f(g(x)), g(f(x)))
    bool pass = true;
};

struct WeaklyCompatibleReport {
    std::vector<CommutatorCheck> checks;
    bool vacuous = false;  // no coincidence points to check
    bool pass = true;
    double tol = 0.0;
};

// Weak compatibility in the commuting-at-coincidence sense: at every
// coincidence point the two compositions must agree within tol.
WeaklyCompatibleReport check_weakly_compatible(const PiecewiseMap& f, const PiecewiseMap& g,
                                               const Metric& metric,
                                               const std::vector<CoincidencePoint>& coincidences,
                                               double tol);

// Witness sequences are expressions in n, one per coordinate,
// semicolon-separated, evaluated at the horizon only.
Point eval_witness(const std::string& witness_text, const Domain& domain, double n);

struct SequenceCompatReport {
    std::string witness_text;
    std::uint64_t horizon = 0;
    double tol = 0.0;
    Point x_horizon;
    Point limit_estimate;  // g at the horizon point
    bool premise_established = false;
    double premise_gap = 0.0;      // d(f(xN), g(xN))
    double tail_commutator = 0.0;  // d(f(g(xN)), g(f(xN)))
    bool compatible_at_witness = false;
    bool vacuous = false;
};

// Compatibility probe along one witness sequence: when f(x_n) and g(x_n)
// approach a common limit, the commutator tail must vanish. A surviving
// tail is a "not compatible (at this witness)" verdict; a failed premise
// makes the probe vacuous.
SequenceCompatReport check_compatible_on_sequence(const PiecewiseMap& f, const PiecewiseMap& g,
                                                  const Metric& metric,
                                                  const std::string& witness_text,
                                                  std::uint64_t horizon, double tol);

struct OrderedCompatReport {
    std::string witness_text;
    std::uint64_t horizon = 0;
    double tol = 0.0;
    Point x_horizon;
    Point limit_estimate;  // t, estimated as g(xN)
    Point g_of_limit;      // g(t)
    bool premise1 = false;
    bool premise2 = false;
    double premise1_gap = 0.0;     // d(f(xN), g(xN))
    double premise2_gap_fg = 0.0;  // d(g(f(xN)), g(t))
    double premise2_gap_gg = 0.0;  // d(g(g(xN)), g(t))
    double conclusion_gap = 0.0;   // d(f(g(xN)), g(t))
    bool conclusion_holds = false;
    bool vacuous = false;  // premises not established
};

// Ordered-pair probe: premises f(x_n), g(x_n) -> t and
// g(f(x_n)), g(g(x_n)) -> g(t); conclusion f(g(x_n)) -> g(t). Calling with
// (f, g) probes the ordered pair (g, f) in the conventional notation.
OrderedCompatReport check_weak_compatible_ordered(const PiecewiseMap& f, const PiecewiseMap& g,
                                                  const Metric& metric,
                                                  const std::string& witness_text,
                                                  std::uint64_t horizon, double tol);

struct ProbeResult {
    Point start;
    bool converged = false;
    Point limit;
    double distance_to_z = 0.0;
};

struct Certificate {
    Point z;
    double residual_A = 0.0;
    double residual_B = 0.0;
    double residual_S = 0.0;
    double residual_T = 0.0;
    std::vector<ProbeResult> probes;
    // coincidence witnesses recovered from z: points u, v with A(u) ~ z
    // and B(v) ~ z
    std::optional<Point> u;
    std::optional<Point> v;
    double u_gap = 0.0;
    double v_gap = 0.0;
    bool certified = false;
    double conv_tol = 0.0;

    double max_residual() const;
};

// Certifies a converged trace: the four residuals at z must be below
// conv_tol and reruns from every probe start must land within conv_tol
// of z.
Certificate certify(const MapQuadruple& quad, const IterationTrace& trace,
                    const std::vector<Point>& probes, const IterationConfig& cfg);

}  // namespace fixpoint
