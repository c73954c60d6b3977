#pragma once

#include <functional>
#include <utility>

namespace fixpoint {

// Ternary search for a minimum of f on [a, b]. Assumes unimodality inside
// the interval; on functions with a jump it converges to the jump and
// returns the best point actually evaluated, which callers must validate.
// Deterministic: fixed iteration count, no randomness.
struct MinimizeResult {
    double x = 0.0;
    double value = 0.0;
};

MinimizeResult minimize_on_interval(const std::function<double(double)>& f, double a, double b,
                                    int iterations = 120);

// Bisection on [a, b] assuming h(a) and h(b) have opposite signs; returns
// the best |h| point evaluated. Works on discontinuous h: converges to the
// jump location.
double bisect_sign_change(const std::function<double(double)>& h, double a, double b,
                          int iterations = 120);

}  // namespace fixpoint
