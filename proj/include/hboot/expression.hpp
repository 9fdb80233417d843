// expression.hpp
//
// Closed arithmetic expression language used for the vertex sub-functions of a
// calculation tree. Variables are named x<id> where <id> is a child vertex id.
// Expressions are immutable and share sub-trees, so copies are cheap.
//
// Grammar (usual precedence, '^' binds tighter than unary minus):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)?
//   exponent:= number | '-' number | '(' '-'? number ')'
//   primary := number | 'x' digits | func '(' expr ')' | '(' expr ')'
//   func    := 'exp' | 'log' | 'sqrt' | 'square'
#pragma once

#include "hboot/error.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

namespace hboot {

enum class Op { constant, variable, negate, exp, log, sqrt, square, add, sub, mul, div, pow };

class Expr {
public:
    Expr() : Expr(constant(0.0)) {}

    static Expr constant(double v) { return Expr(make(Op::constant, v, 0, nullptr, nullptr)); }
    static Expr variable(int id) { return Expr(make(Op::variable, 0.0, id, nullptr, nullptr)); }
    static Expr unary(Op op, Expr arg) { return Expr(make(op, 0.0, 0, arg.node_, nullptr)); }
    static Expr binary(Op op, Expr lhs, Expr rhs) { return Expr(make(op, 0.0, 0, lhs.node_, rhs.node_)); }
    static Expr power(Expr base, double exponent) { return Expr(make(Op::pow, exponent, 0, base.node_, nullptr)); }

    Op op() const { return node_->op; }
    // Constant value, or the exponent of a power node.
    double number() const { return node_->number; }
    int variable_id() const { return node_->var; }
    Expr lhs() const { return Expr(node_->a); }
    Expr rhs() const { return Expr(node_->b); }
    Expr arg() const { return Expr(node_->a); }

    bool is_constant() const { return op() == Op::constant; }
    bool is_constant(double v) const { return is_constant() && number() == v; }

    bool is_unary() const {
        switch (op()) {
        case Op::negate: case Op::exp: case Op::log: case Op::sqrt: case Op::square: case Op::pow:
            return true;
        default:
            return false;
        }
    }
    bool is_binary() const {
        switch (op()) {
        case Op::add: case Op::sub: case Op::mul: case Op::div:
            return true;
        default:
            return false;
        }
    }

    // `values(id)` must return the value of variable x<id>.
    template <class Lookup>
    double evaluate(const Lookup& values) const {
        return eval_node(*node_, values);
    }

    Expr derivative(int var) const;

    std::set<int> variables() const {
        std::set<int> out;
        collect(*node_, out);
        return out;
    }

    // Replace every x<id> by `replacement(id)`.
    template <class Fn>
    Expr substitute(const Fn& replacement) const;

    std::string to_string() const {
        std::ostringstream os;
        print(os, *this, 0);
        return os.str();
    }

    friend bool operator==(const Expr& l, const Expr& r) { return same(l.node_.get(), r.node_.get()); }

private:
    struct Node {
        Op op;
        double number;
        int var;
        std::shared_ptr<const Node> a;
        std::shared_ptr<const Node> b;
    };
    using NodePtr = std::shared_ptr<const Node>;

    explicit Expr(NodePtr n) : node_(std::move(n)) {}

    static NodePtr make(Op op, double number, int var, NodePtr a, NodePtr b) {
        return std::make_shared<const Node>(Node{op, number, var, std::move(a), std::move(b)});
    }

    static double checked(double v, const char* what) {
        if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
        return v;
    }

    template <class Lookup>
    static double eval_node(const Node& n, const Lookup& values) {
        switch (n.op) {
        case Op::constant: return n.number;
        case Op::variable: return values(n.var);
        case Op::negate: return -eval_node(*n.a, values);
        case Op::exp: return checked(std::exp(eval_node(*n.a, values)), "exp");
        case Op::log: {
            const double x = eval_node(*n.a, values);
            if (!(x > 0.0)) throw DomainError("log of non-positive value " + fmt(x));
            return std::log(x);
        }
        case Op::sqrt: {
            const double x = eval_node(*n.a, values);
            if (!(x >= 0.0)) throw DomainError("sqrt of negative value " + fmt(x));
            return std::sqrt(x);
        }
        case Op::square: {
            const double x = eval_node(*n.a, values);
            return checked(x * x, "square");
        }
        case Op::add: return checked(eval_node(*n.a, values) + eval_node(*n.b, values), "addition");
        case Op::sub: return checked(eval_node(*n.a, values) - eval_node(*n.b, values), "subtraction");
        case Op::mul: return checked(eval_node(*n.a, values) * eval_node(*n.b, values), "product");
        case Op::div: {
            const double num = eval_node(*n.a, values);
            const double den = eval_node(*n.b, values);
            if (den == 0.0) throw DomainError("division by zero");
            return checked(num / den, "division");
        }
        case Op::pow: {
            const double x = eval_node(*n.a, values);
            const double e = n.number;
            if (x < 0.0 && e != std::floor(e))
                throw DomainError("negative base " + fmt(x) + " with non-integer exponent");
            if (x == 0.0 && e < 0.0) throw DomainError("zero base with negative exponent");
            return checked(std::pow(x, e), "power");
        }
        }
        throw DomainError("unknown operation");
    }

    static std::string fmt(double v) {
        std::ostringstream os;
        os << std::setprecision(17) << v;
        return os.str();
    }

    static void collect(const Node& n, std::set<int>& out) {
        if (n.op == Op::variable) out.insert(n.var);
        if (n.a) collect(*n.a, out);
        if (n.b) collect(*n.b, out);
    }

    static bool same(const Node* l, const Node* r) {
        if (l == r) return true;
        if (!l || !r) return false;
        if (l->op != r->op) return false;
        if (l->op == Op::constant || l->op == Op::pow) {
            if (!(l->number == r->number) && !(std::isnan(l->number) && std::isnan(r->number))) return false;
        }
        if (l->op == Op::variable && l->var != r->var) return false;
        return same(l->a.get(), r->a.get()) && same(l->b.get(), r->b.get());
    }

    static int precedence(const Expr& e) {
        switch (e.op()) {
        case Op::add: case Op::sub: return 1;
        case Op::mul: case Op::div: return 2;
        case Op::negate: return 3;
        case Op::pow: return 4;
        case Op::constant: return e.number() < 0.0 ? 3 : 5;
        default: return 5;
        }
    }

    static void print_number(std::ostream& os, double v) {
        if (v < 0.0) {
            os << "(-" << fmt(-v) << ")";
        } else {
            os << fmt(v);
        }
    }

    // `min_prec` is the precedence the context requires; anything lower is parenthesised.
    static void print(std::ostream& os, const Expr& e, int min_prec) {
        const int p = precedence(e);
        const bool paren = p < min_prec && e.op() != Op::constant;
        if (paren) os << '(';
        switch (e.op()) {
        case Op::constant: print_number(os, e.number()); break;
        case Op::variable: os << 'x' << e.variable_id(); break;
        case Op::negate: os << '-'; print(os, e.arg(), 4); break;
        case Op::exp: os << "exp("; print(os, e.arg(), 0); os << ')'; break;
        case Op::log: os << "log("; print(os, e.arg(), 0); os << ')'; break;
        case Op::sqrt: os << "sqrt("; print(os, e.arg(), 0); os << ')'; break;
        case Op::square: os << "square("; print(os, e.arg(), 0); os << ')'; break;
        case Op::pow: print(os, e.arg(), 5); os << '^'; print_number(os, e.number()); break;
        case Op::add: print(os, e.lhs(), 1); os << '+'; print(os, e.rhs(), 2); break;
        case Op::sub: print(os, e.lhs(), 1); os << '-'; print(os, e.rhs(), 2); break;
        case Op::mul: print(os, e.lhs(), 2); os << '*'; print(os, e.rhs(), 3); break;
        case Op::div: print(os, e.lhs(), 2); os << '/'; print(os, e.rhs(), 3); break;
        }
        if (paren) os << ')';
    }

    NodePtr node_;
};

// Builders with light algebraic simplification, used by differentiation.
namespace simplify {

inline Expr add(const Expr& l, const Expr& r) {
    if (l.is_constant(0.0)) return r;
    if (r.is_constant(0.0)) return l;
    if (l.is_constant() && r.is_constant()) return Expr::constant(l.number() + r.number());
    return Expr::binary(Op::add, l, r);
}

inline Expr neg(const Expr& e) {
    if (e.is_constant()) return Expr::constant(-e.number());
    if (e.op() == Op::negate) return e.arg();
    return Expr::unary(Op::negate, e);
}

inline Expr sub(const Expr& l, const Expr& r) {
    if (r.is_constant(0.0)) return l;
    if (l.is_constant(0.0)) return neg(r);
    if (l.is_constant() && r.is_constant()) return Expr::constant(l.number() - r.number());
    return Expr::binary(Op::sub, l, r);
}

inline Expr mul(const Expr& l, const Expr& r) {
    if (l.is_constant(0.0) || r.is_constant(0.0)) return Expr::constant(0.0);
    if (l.is_constant(1.0)) return r;
    if (r.is_constant(1.0)) return l;
    if (l.is_constant() && r.is_constant()) return Expr::constant(l.number() * r.number());
    return Expr::binary(Op::mul, l, r);
}

inline Expr div(const Expr& l, const Expr& r) {
    if (r.is_constant(1.0)) return l;
    if (l.is_constant(0.0) && !r.is_constant(0.0)) return Expr::constant(0.0);
    return Expr::binary(Op::div, l, r);
}

inline Expr pow(const Expr& base, double exponent) {
    if (exponent == 0.0) return Expr::constant(1.0);
    if (exponent == 1.0) return base;
    return Expr::power(base, exponent);
}

} // namespace simplify

inline Expr Expr::derivative(int var) const {
    namespace s = simplify;
    const Expr& e = *this;
    switch (op()) {
    case Op::constant: return constant(0.0);
    case Op::variable: return constant(variable_id() == var ? 1.0 : 0.0);
    case Op::negate: return s::neg(arg().derivative(var));
    case Op::exp: return s::mul(e, arg().derivative(var));
    case Op::log: return s::div(arg().derivative(var), arg());
    case Op::sqrt: return s::div(arg().derivative(var), s::mul(constant(2.0), e));
    case Op::square: return s::mul(s::mul(constant(2.0), arg()), arg().derivative(var));
    case Op::add: return s::add(lhs().derivative(var), rhs().derivative(var));
    case Op::sub: return s::sub(lhs().derivative(var), rhs().derivative(var));
    case Op::mul:
        return s::add(s::mul(lhs().derivative(var), rhs()), s::mul(lhs(), rhs().derivative(var)));
    case Op::div: {
        const Expr num = s::sub(s::mul(lhs().derivative(var), rhs()), s::mul(lhs(), rhs().derivative(var)));
        return s::div(num, s::pow(rhs(), 2.0));
    }
    case Op::pow: {
        const Expr inner = arg().derivative(var);
        if (inner.is_constant(0.0)) return constant(0.0);
        return s::mul(s::mul(constant(number()), s::pow(arg(), number() - 1.0)), inner);
    }
    }
    return constant(0.0);
}

template <class Fn>
Expr Expr::substitute(const Fn& replacement) const {
    switch (op()) {
    case Op::constant: return *this;
    case Op::variable: return replacement(variable_id());
    case Op::pow: return power(arg().substitute(replacement), number());
    default:
        if (is_unary()) return unary(op(), arg().substitute(replacement));
        return binary(op(), lhs().substitute(replacement), rhs().substitute(replacement));
    }
}

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw SyntaxError("expression \"" + std::string(text_) + "\" at offset " + std::to_string(pos_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    bool peek_digit() {
        skip_ws();
        return pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.');
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (accept('+')) e = Expr::binary(Op::add, e, term());
            else if (accept('-')) e = Expr::binary(Op::sub, e, term());
            else return e;
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (accept('*')) e = Expr::binary(Op::mul, e, unary());
            else if (accept('/')) e = Expr::binary(Op::div, e, unary());
            else return e;
        }
    }

    Expr unary() {
        if (accept('-')) {
            Expr operand = unary();
            // Negative literals stay constants so printing round-trips.
            if (operand.is_constant()) return Expr::constant(-operand.number());
            return Expr::unary(Op::negate, operand);
        }
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (accept('^')) return Expr::power(base, exponent());
        return base;
    }

    double exponent() {
        if (accept('(')) {
            const double sign = accept('-') ? -1.0 : 1.0;
            const double v = number();
            expect(')');
            return sign * v;
        }
        const double sign = accept('-') ? -1.0 : 1.0;
        if (!peek_digit()) fail("exponent must be a numeric literal");
        return sign * number();
    }

    double number() {
        skip_ws();
        const std::string rest(text_.substr(pos_));
        char* end = nullptr;
        const double v = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str()) fail("expected number");
        pos_ += static_cast<std::size_t>(end - rest.c_str());
        return v;
    }

    Expr primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        if (accept('(')) {
            Expr e = expr();
            expect(')');
            return e;
        }
        if (peek_digit()) return Expr::constant(number());
        if (std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string word(text_.substr(start, pos_ - start));
            if (word.size() > 1 && word[0] == 'x' &&
                word.find_first_not_of("0123456789", 1) == std::string::npos) {
                const long id = std::strtol(word.c_str() + 1, nullptr, 10);
                if (id < 1 || id > std::numeric_limits<int>::max()) fail("variable id out of range in " + word);
                return Expr::variable(static_cast<int>(id));
            }
            Op op;
            if (word == "exp") op = Op::exp;
            else if (word == "log") op = Op::log;
            else if (word == "sqrt") op = Op::sqrt;
            else if (word == "square") op = Op::square;
            else {
                pos_ = start;
                fail("unknown identifier '" + word + "'");
            }
            expect('(');
            Expr a = expr();
            expect(')');
            return Expr::unary(op, a);
        }
        fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Expr parse_expression(std::string_view text) {
    return detail::ExprParser(text).parse();
}

} // namespace hboot
