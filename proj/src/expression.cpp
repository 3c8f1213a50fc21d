#include "curvekit/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

namespace curvekit {

ExprPtr expr_const(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Constant;
    e->constant = v;
    return e;
}

ExprPtr expr_var(Var v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Variable;
    e->var = v;
    return e;
}

ExprPtr expr_unary(UnaryOp op, ExprPtr a) {
    // fold negation of a literal so printing and reparsing are stable
    if (op == UnaryOp::Neg && a->kind == Expr::Kind::Constant) return expr_const(-a->constant);
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Unary;
    e->uop = op;
    e->lhs = std::move(a);
    return e;
}

ExprPtr expr_binary(BinaryOp op, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Binary;
    e->bop = op;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr expr_pow(ExprPtr base, int exponent) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::PowInt;
    e->exponent = exponent;
    e->lhs = std::move(base);
    return e;
}

namespace {

struct Parser {
    std::string_view src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eof() {
        skip_ws();
        return pos >= src.size();
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        skip_ws();
        std::ostringstream msg;
        msg << "parse error at byte " << pos << ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) msg << " | ";
            msg << expected[i];
        }
        if (pos < src.size())
            msg << ", got '" << src[pos] << "'";
        else
            msg << ", got end of input";
        throw ParseError(pos, std::move(expected), msg.str());
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = expr_binary(BinaryOp::Add, lhs, parse_term());
            else if (accept('-'))
                lhs = expr_binary(BinaryOp::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        for (;;) {
            if (accept('*'))
                lhs = expr_binary(BinaryOp::Mul, lhs, parse_factor());
            else if (accept('/'))
                lhs = expr_binary(BinaryOp::Div, lhs, parse_factor());
            else
                return lhs;
        }
    }

    ExprPtr parse_factor() {
        if (accept('-')) return expr_unary(UnaryOp::Neg, parse_factor());
        if (accept('+')) return parse_factor();
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        while (accept('^')) base = expr_pow(base, parse_int_literal());
        return base;
    }

    int parse_int_literal() {
        skip_ws();
        std::size_t start = pos;
        if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) ++pos;
        std::size_t digits = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos == digits) {
            pos = start;
            fail({"integer exponent"});
        }
        int value = 0;
        auto res = std::from_chars(src.data() + start, src.data() + pos, value);
        if (res.ec != std::errc{}) {
            pos = start;
            fail({"integer exponent"});
        }
        return value;
    }

    ExprPtr parse_primary() {
        skip_ws();
        if (pos >= src.size()) fail({"number", "identifier", "'('"});
        char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        if (c == '(') {
            ++pos;
            ExprPtr inner = parse_expr();
            if (!accept(')')) fail({"')'"});
            return inner;
        }
        fail({"number", "identifier", "'('"});
    }

    ExprPtr parse_number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos < src.size() && src[pos] == '.') {
            ++pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        }
        if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
            std::size_t mark = pos;
            ++pos;
            if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
            if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            } else {
                pos = mark;  // 'e' belongs to something else; not part of the number
            }
        }
        double value = 0.0;
        auto res = std::from_chars(src.data() + start, src.data() + pos, value);
        if (res.ec != std::errc{} || res.ptr != src.data() + pos) {
            pos = start;
            fail({"number"});
        }
        return expr_const(value);
    }

    ExprPtr parse_identifier() {
        skip_ws();
        std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        std::string_view name = src.substr(start, pos - start);
        if (name == "t") return expr_var(Var::T);
        if (name == "s1") return expr_var(Var::S1);
        if (name == "s2") return expr_var(Var::S2);
        UnaryOp op;
        if (name == "sin")
            op = UnaryOp::Sin;
        else if (name == "cos")
            op = UnaryOp::Cos;
        else if (name == "exp")
            op = UnaryOp::Exp;
        else if (name == "sqrt")
            op = UnaryOp::Sqrt;
        else
            throw UnknownIdentifier(start, "unknown identifier '" + std::string(name) +
                                               "' at byte " + std::to_string(start));
        if (!accept('(')) fail({"'(' after function name"});
        ExprPtr arg = parse_expr();
        if (!accept(')')) fail({"')'"});
        return expr_unary(op, arg);
    }
};

int precedence_of(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Binary:
            return (e.bop == BinaryOp::Add || e.bop == BinaryOp::Sub) ? 1 : 2;
        case Expr::Kind::Unary:
            return e.uop == UnaryOp::Neg ? 3 : 5;
        case Expr::Kind::PowInt:
            return 4;
        case Expr::Kind::Constant:
            return e.constant < 0 ? 3 : 5;  // negative literals print like a negation
        default:
            return 5;
    }
}

void print_rec(const ExprPtr& e, std::ostringstream& out, int parent_prec) {
    int prec = precedence_of(*e);
    bool paren = prec < parent_prec;
    if (paren) out << '(';
    switch (e->kind) {
        case Expr::Kind::Constant: {
            std::ostringstream num;
            num.precision(17);
            num << e->constant;
            out << num.str();
            break;
        }
        case Expr::Kind::Variable:
            out << (e->var == Var::T ? "t" : e->var == Var::S1 ? "s1" : "s2");
            break;
        case Expr::Kind::Unary:
            switch (e->uop) {
                case UnaryOp::Neg:
                    out << '-';
                    print_rec(e->lhs, out, 3 + 1);
                    break;
                case UnaryOp::Sin: out << "sin("; print_rec(e->lhs, out, 0); out << ')'; break;
                case UnaryOp::Cos: out << "cos("; print_rec(e->lhs, out, 0); out << ')'; break;
                case UnaryOp::Exp: out << "exp("; print_rec(e->lhs, out, 0); out << ')'; break;
                case UnaryOp::Sqrt: out << "sqrt("; print_rec(e->lhs, out, 0); out << ')'; break;
            }
            break;
        case Expr::Kind::Binary: {
            const char* op = e->bop == BinaryOp::Add   ? " + "
                             : e->bop == BinaryOp::Sub ? " - "
                             : e->bop == BinaryOp::Mul ? "*"
                                                       : "/";
            print_rec(e->lhs, out, prec);
            out << op;
            // right operand of - and / needs the next precedence level
            print_rec(e->rhs, out, prec + (e->bop == BinaryOp::Sub || e->bop == BinaryOp::Div));
            break;
        }
        case Expr::Kind::PowInt:
            print_rec(e->lhs, out, 4 + 1);
            out << '^' << e->exponent;
            break;
    }
    if (paren) out << ')';
}

}  // namespace

ExprPtr parse_expression(std::string_view text) {
    Parser p{text};
    ExprPtr e = p.parse_expr();
    if (!p.eof()) p.fail({"operator", "end of input"});
    return e;
}

std::string pretty_print(const ExprPtr& e) {
    std::ostringstream out;
    print_rec(e, out, 0);
    return out.str();
}

double eval_scalar(const Expr& e, double t, double s1, double s2) {
    switch (e.kind) {
        case Expr::Kind::Constant:
            return e.constant;
        case Expr::Kind::Variable:
            return e.var == Var::T ? t : e.var == Var::S1 ? s1 : s2;
        case Expr::Kind::Unary: {
            double a = eval_scalar(*e.lhs, t, s1, s2);
            switch (e.uop) {
                case UnaryOp::Neg: return -a;
                case UnaryOp::Sin: return std::sin(a);
                case UnaryOp::Cos: return std::cos(a);
                case UnaryOp::Exp: return std::exp(a);
                case UnaryOp::Sqrt:
                    if (!(a > 0.0)) throw DomainError("sqrt of non-positive value");
                    return std::sqrt(a);
            }
            return 0.0;
        }
        case Expr::Kind::Binary: {
            double a = eval_scalar(*e.lhs, t, s1, s2);
            double b = eval_scalar(*e.rhs, t, s1, s2);
            switch (e.bop) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div:
                    if (b == 0.0) throw DomainError("division by zero");
                    return a / b;
            }
            return 0.0;
        }
        case Expr::Kind::PowInt: {
            double a = eval_scalar(*e.lhs, t, s1, s2);
            return std::pow(a, e.exponent);
        }
    }
    return 0.0;
}

Jet eval_jet(const Expr& e, double t0, int degree, double s1, double s2) {
    switch (e.kind) {
        case Expr::Kind::Constant:
            return Jet::constant(e.constant, degree, t0);
        case Expr::Kind::Variable:
            if (e.var == Var::T) return Jet::variable(t0, degree);
            return Jet::constant(e.var == Var::S1 ? s1 : s2, degree, t0);
        case Expr::Kind::Unary: {
            Jet a = eval_jet(*e.lhs, t0, degree, s1, s2);
            switch (e.uop) {
                case UnaryOp::Neg: return -a;
                case UnaryOp::Sin: return sin(a);
                case UnaryOp::Cos: return cos(a);
                case UnaryOp::Exp: return exp(a);
                case UnaryOp::Sqrt: return sqrt(a);
            }
            return a;
        }
        case Expr::Kind::Binary: {
            Jet a = eval_jet(*e.lhs, t0, degree, s1, s2);
            Jet b = eval_jet(*e.rhs, t0, degree, s1, s2);
            switch (e.bop) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div: return a / b;
            }
            return a;
        }
        case Expr::Kind::PowInt:
            return pow_int(eval_jet(*e.lhs, t0, degree, s1, s2), e.exponent);
    }
    return Jet::constant(0.0, degree, t0);
}

ExprPtr substitute_t(const ExprPtr& e, const ExprPtr& replacement) {
    switch (e->kind) {
        case Expr::Kind::Constant:
            return e;
        case Expr::Kind::Variable:
            return e->var == Var::T ? replacement : e;
        case Expr::Kind::Unary:
            return expr_unary(e->uop, substitute_t(e->lhs, replacement));
        case Expr::Kind::Binary:
            return expr_binary(e->bop, substitute_t(e->lhs, replacement),
                               substitute_t(e->rhs, replacement));
        case Expr::Kind::PowInt:
            return expr_pow(substitute_t(e->lhs, replacement), e->exponent);
    }
    return e;
}

ExprPtr bind_params(const ExprPtr& e, double s1, double s2) {
    switch (e->kind) {
        case Expr::Kind::Constant:
            return e;
        case Expr::Kind::Variable:
            if (e->var == Var::S1) return expr_const(s1);
            if (e->var == Var::S2) return expr_const(s2);
            return e;
        case Expr::Kind::Unary:
            return expr_unary(e->uop, bind_params(e->lhs, s1, s2));
        case Expr::Kind::Binary:
            return expr_binary(e->bop, bind_params(e->lhs, s1, s2), bind_params(e->rhs, s1, s2));
        case Expr::Kind::PowInt:
            return expr_pow(bind_params(e->lhs, s1, s2), e->exponent);
    }
    return e;
}

}  // namespace curvekit
