#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "curvekit/jet.hpp"

namespace curvekit {

enum class Var { T, S1, S2 };
enum class UnaryOp { Neg, Sin, Cos, Exp, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Constant, Variable, Unary, Binary, PowInt };

    Kind kind = Kind::Constant;
    double constant = 0.0;
    Var var = Var::T;
    UnaryOp uop = UnaryOp::Neg;
    BinaryOp bop = BinaryOp::Add;
    int exponent = 1;
    ExprPtr lhs, rhs;  // unary and pow use lhs only
};

ExprPtr expr_const(double v);
ExprPtr expr_var(Var v);
ExprPtr expr_unary(UnaryOp op, ExprPtr a);
ExprPtr expr_binary(BinaryOp op, ExprPtr a, ExprPtr b);
ExprPtr expr_pow(ExprPtr base, int exponent);

// Infix grammar: + - * /, ^ with integer exponent binding tightest, parentheses,
// identifiers t, s1, s2, functions sin cos exp sqrt. Throws ParseError / UnknownIdentifier.
ExprPtr parse_expression(std::string_view text);

std::string pretty_print(const ExprPtr& e);

double eval_scalar(const Expr& e, double t, double s1 = 0.0, double s2 = 0.0);
Jet eval_jet(const Expr& e, double t0, int degree, double s1 = 0.0, double s2 = 0.0);

// t := replacement (an expression in t); used for reparametrizations.
ExprPtr substitute_t(const ExprPtr& e, const ExprPtr& replacement);
// s1,s2 := fixed numbers; the result depends on t only.
ExprPtr bind_params(const ExprPtr& e, double s1, double s2);

}  // namespace curvekit
