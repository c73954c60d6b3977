#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fixpoint/errors.hpp"

namespace fixpoint {

// AST for the small arithmetic expression language used by piecewise maps,
// auxiliary/control functions and witness sequences. Supported nodes:
// constants, named variables, unary minus, + - * /, and integer-exponent
// powers. Precedence: power > unary minus > * / > + -.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow };

    Kind kind = Kind::Constant;
    double value = 0.0;  // Constant
    std::string name;    // Variable, as written
    int index = -1;      // Variable slot in the evaluation environment
    ExprPtr left;        // unary child / left operand / power base
    ExprPtr right;       // right operand
    int exponent = 1;    // Pow
};

// Parses `text` with the given allowed variable names; a variable's
// environment slot is its position in `variables`. Throws ParseError with a
// character offset on syntax errors and unknown identifiers.
ExprPtr parse_expr(std::string_view text, const std::vector<std::string>& variables);

// Evaluates with env[i] bound to variable slot i. Throws EvalError on
// division by zero and 0 raised to a negative power.
double eval_expr(const Expr& e, std::span<const double> env);

inline double eval_expr(const ExprPtr& e, std::span<const double> env) {
    return eval_expr(*e, env);
}

// Prints with minimal parentheses; parse(print(e)) is structurally equal
// to e. Constants are printed in shortest round-trip form.
std::string print_expr(const Expr& e);
inline std::string print_expr(const ExprPtr& e) { return print_expr(*e); }

bool expr_equal(const Expr& a, const Expr& b);
inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) { return expr_equal(*a, *b); }

// If e is affine in a single variable, returns (a, b) with e(x) = a*x + b.
std::optional<std::pair<double, double>> affine_coefficients(const Expr& e);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

}  // namespace fixpoint
