#include "fixpoint/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace fixpoint {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Kind kind = Kind::End;
    std::size_t pos = 0;
    double number = 0.0;
    std::string text;
    bool integral = false;  // Number consisting of digits only
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
        tok_ = Token{};
        tok_.pos = pos_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::Kind::End;
            return;
        }
        char c = src_[pos_];
        switch (c) {
            case '+': tok_.kind = Token::Kind::Plus; ++pos_; return;
            case '-': tok_.kind = Token::Kind::Minus; ++pos_; return;
            case '*': tok_.kind = Token::Kind::Star; ++pos_; return;
            case '/': tok_.kind = Token::Kind::Slash; ++pos_; return;
            case '^': tok_.kind = Token::Kind::Caret; ++pos_; return;
            case '(': tok_.kind = Token::Kind::LParen; ++pos_; return;
            case ')': tok_.kind = Token::Kind::RParen; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
            tok_.kind = Token::Kind::Ident;
            tok_.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    void lex_number() {
        std::size_t start = pos_;
        bool integral = true;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            integral = false;
            ++pos_;
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                throw ParseError("expected digits after decimal point", pos_);
            }
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            integral = false;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                throw ParseError("expected digits in exponent", pos_);
            }
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        }
        tok_.kind = Token::Kind::Number;
        tok_.text = std::string(src_.substr(start, pos_ - start));
        tok_.integral = integral;
        tok_.number = std::strtod(tok_.text.c_str(), nullptr);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token tok_;
};

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& variables)
        : lexer_(text), variables_(variables) {}

    ExprPtr parse() {
        ExprPtr e = parse_sum();
        const Token& t = lexer_.peek();
        if (t.kind != Token::Kind::End) {
            throw ParseError("unexpected trailing input", t.pos);
        }
        return e;
    }

private:
    static ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

    ExprPtr parse_sum() {
        ExprPtr lhs = parse_term();
        while (true) {
            Token::Kind k = lexer_.peek().kind;
            if (k != Token::Kind::Plus && k != Token::Kind::Minus) return lhs;
            lexer_.next();
            ExprPtr rhs = parse_term();
            Expr e;
            e.kind = k == Token::Kind::Plus ? Expr::Kind::Add : Expr::Kind::Sub;
            e.left = lhs;
            e.right = rhs;
            lhs = make(std::move(e));
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_unary();
        while (true) {
            Token::Kind k = lexer_.peek().kind;
            if (k != Token::Kind::Star && k != Token::Kind::Slash) return lhs;
            lexer_.next();
            ExprPtr rhs = parse_unary();
            Expr e;
            e.kind = k == Token::Kind::Star ? Expr::Kind::Mul : Expr::Kind::Div;
            e.left = lhs;
            e.right = rhs;
            lhs = make(std::move(e));
        }
    }

    ExprPtr parse_unary() {
        if (lexer_.peek().kind == Token::Kind::Minus) {
            lexer_.next();
            Expr e;
            e.kind = Expr::Kind::Negate;
            e.left = parse_unary();
            return make(std::move(e));
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (lexer_.peek().kind != Token::Kind::Caret) return base;
        lexer_.next();
        bool negative = false;
        if (lexer_.peek().kind == Token::Kind::Minus) {
            lexer_.next();
            negative = true;
        }
        Token t = lexer_.next();
        if (t.kind != Token::Kind::Number || !t.integral) {
            throw ParseError("exponent must be an integer literal", t.pos);
        }
        Expr e;
        e.kind = Expr::Kind::Pow;
        e.left = base;
        e.exponent = static_cast<int>(t.number) * (negative ? -1 : 1);
        return make(std::move(e));
    }

    ExprPtr parse_atom() {
        Token t = lexer_.next();
        switch (t.kind) {
            case Token::Kind::Number: {
                Expr e;
                e.kind = Expr::Kind::Constant;
                e.value = t.number;
                return make(std::move(e));
            }
            case Token::Kind::Ident: {
                for (std::size_t i = 0; i < variables_.size(); ++i) {
                    if (variables_[i] == t.text) {
                        Expr e;
                        e.kind = Expr::Kind::Variable;
                        e.name = t.text;
                        e.index = static_cast<int>(i);
                        return make(std::move(e));
                    }
                }
                throw ParseError("unknown identifier '" + t.text + "'", t.pos);
            }
            case Token::Kind::LParen: {
                ExprPtr e = parse_sum();
                Token close = lexer_.next();
                if (close.kind != Token::Kind::RParen) {
                    throw ParseError("expected ')'", close.pos);
                }
                return e;
            }
            default: throw ParseError("expected a number, variable or '('", t.pos);
        }
    }

    Lexer lexer_;
    const std::vector<std::string>& variables_;
};

double pow_int(double base, int exp) {
    if (exp < 0) {
        if (base == 0.0) {
            throw EvalError("0 raised to a negative power");
        }
        return 1.0 / pow_int(base, -exp);
    }
    double result = 1.0;
    double acc = base;
    while (exp > 0) {
        if (exp & 1) result *= acc;
        acc *= acc;
        exp >>= 1;
    }
    return result;
}

int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        case Expr::Kind::Negate: return 3;
        case Expr::Kind::Pow: return 4;
        default: return 5;
    }
}

void print_rec(const Expr& e, std::string& out) {
    auto child = [&out](const Expr& c, bool parens) {
        if (parens) out += '(';
        print_rec(c, out);
        if (parens) out += ')';
    };
    int p = precedence(e);
    switch (e.kind) {
        case Expr::Kind::Constant: out += format_double(e.value); return;
        case Expr::Kind::Variable: out += e.name; return;
        case Expr::Kind::Negate:
            out += '-';
            child(*e.left, precedence(*e.left) < p);
            return;
        case Expr::Kind::Add:
        case Expr::Kind::Sub:
        case Expr::Kind::Mul:
        case Expr::Kind::Div: {
            child(*e.left, precedence(*e.left) < p);
            const char* op = e.kind == Expr::Kind::Add   ? " + "
                             : e.kind == Expr::Kind::Sub ? " - "
                             : e.kind == Expr::Kind::Mul ? " * "
                                                         : " / ";
            out += op;
            child(*e.right, precedence(*e.right) <= p);
            return;
        }
        case Expr::Kind::Pow:
            child(*e.left, precedence(*e.left) < 5);
            out += '^';
            out += std::to_string(e.exponent);
            return;
    }
}

}  // namespace

ExprPtr parse_expr(std::string_view text, const std::vector<std::string>& variables) {
    return Parser(text, variables).parse();
}

double eval_expr(const Expr& e, std::span<const double> env) {
    switch (e.kind) {
        case Expr::Kind::Constant: return e.value;
        case Expr::Kind::Variable:
            if (e.index < 0 || static_cast<std::size_t>(e.index) >= env.size()) {
                throw EvalError("variable '" + e.name + "' is not bound");
            }
            return env[static_cast<std::size_t>(e.index)];
        case Expr::Kind::Negate: return -eval_expr(*e.left, env);
        case Expr::Kind::Add: return eval_expr(*e.left, env) + eval_expr(*e.right, env);
        case Expr::Kind::Sub: return eval_expr(*e.left, env) - eval_expr(*e.right, env);
        case Expr::Kind::Mul: return eval_expr(*e.left, env) * eval_expr(*e.right, env);
        case Expr::Kind::Div: {
            double denom = eval_expr(*e.right, env);
            if (denom == 0.0) {
                throw EvalError("division by zero");
            }
            return eval_expr(*e.left, env) / denom;
        }
        case Expr::Kind::Pow: return pow_int(eval_expr(*e.left, env), e.exponent);
    }
    throw EvalError("malformed expression node");
}

std::string print_expr(const Expr& e) {
    std::string out;
    print_rec(e, out);
    return out;
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Constant: return a.value == b.value;
        case Expr::Kind::Variable: return a.index == b.index && a.name == b.name;
        case Expr::Kind::Negate: return expr_equal(*a.left, *b.left);
        case Expr::Kind::Pow:
            return a.exponent == b.exponent && expr_equal(*a.left, *b.left);
        default: return expr_equal(*a.left, *b.left) && expr_equal(*a.right, *b.right);
    }
}

std::optional<std::pair<double, double>> affine_coefficients(const Expr& e) {
    using Coeffs = std::pair<double, double>;
    switch (e.kind) {
        case Expr::Kind::Constant: return Coeffs{0.0, e.value};
        case Expr::Kind::Variable: return Coeffs{1.0, 0.0};
        case Expr::Kind::Negate: {
            auto c = affine_coefficients(*e.left);
            if (!c) return std::nullopt;
            return Coeffs{-c->first, -c->second};
        }
        case Expr::Kind::Add:
        case Expr::Kind::Sub: {
            auto l = affine_coefficients(*e.left);
            auto r = affine_coefficients(*e.right);
            if (!l || !r) return std::nullopt;
            double sign = e.kind == Expr::Kind::Add ? 1.0 : -1.0;
            return Coeffs{l->first + sign * r->first, l->second + sign * r->second};
        }
        case Expr::Kind::Mul: {
            auto l = affine_coefficients(*e.left);
            auto r = affine_coefficients(*e.right);
            if (!l || !r) return std::nullopt;
            if (l->first == 0.0) return Coeffs{l->second * r->first, l->second * r->second};
            if (r->first == 0.0) return Coeffs{r->second * l->first, r->second * l->second};
            return std::nullopt;
        }
        case Expr::Kind::Div: {
            auto l = affine_coefficients(*e.left);
            auto r = affine_coefficients(*e.right);
            if (!l || !r) return std::nullopt;
            if (r->first != 0.0 || r->second == 0.0) return std::nullopt;
            return Coeffs{l->first / r->second, l->second / r->second};
        }
        case Expr::Kind::Pow: {
            auto base = affine_coefficients(*e.left);
            if (!base) return std::nullopt;
            if (e.exponent == 0) return Coeffs{0.0, 1.0};
            if (e.exponent == 1) return base;
            if (base->first == 0.0) {
                if (base->second == 0.0 && e.exponent < 0) return std::nullopt;
                return Coeffs{0.0, pow_int(base->second, e.exponent)};
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace fixpoint
