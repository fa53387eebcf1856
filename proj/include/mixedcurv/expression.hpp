#pragma once

// Scalar-field expressions over chart coordinates x1..xd and named
// parameters. Evaluation is generic over the numeric carrier so the same
// AST produces values, first and second derivatives through jets.

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixedcurv/jet.hpp"

namespace mixedcurv {

struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { Number, Variable, Parameter, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh };

using ParamMap = std::map<std::string, double>;

class Expr {
  public:
    ExprKind kind;
    double number = 0.0;    // Number
    int var_index = -1;     // Variable (0-based)
    std::string name;       // Parameter
    Func func = Func::Sin;  // Call
    ExprPtr lhs, rhs;

    template <class T>
    T eval(std::span<const T> x, const ParamMap& params) const {
        switch (kind) {
            case ExprKind::Number: return T(number);
            case ExprKind::Variable:
                if (var_index >= static_cast<int>(x.size()))
                    throw std::runtime_error("variable x" + std::to_string(var_index + 1) +
                                             " out of range for chart dimension");
                return x[var_index];
            case ExprKind::Parameter: {
                auto it = params.find(name);
                if (it == params.end())
                    throw std::runtime_error("unbound parameter '" + name + "'");
                return T(it->second);
            }
            case ExprKind::Neg: return -lhs->eval(x, params);
            case ExprKind::Add: return lhs->eval(x, params) + rhs->eval(x, params);
            case ExprKind::Sub: return lhs->eval(x, params) - rhs->eval(x, params);
            case ExprKind::Mul: return lhs->eval(x, params) * rhs->eval(x, params);
            case ExprKind::Div: return lhs->eval(x, params) / rhs->eval(x, params);
            case ExprKind::Pow: return pow(lhs->eval(x, params), rhs->eval(x, params));
            case ExprKind::Call: {
                T a = lhs->eval(x, params);
                switch (func) {
                    case Func::Sin: return sin(a);
                    case Func::Cos: return cos(a);
                    case Func::Tan: return tan(a);
                    case Func::Exp: return exp(a);
                    case Func::Log: return log(a);
                    case Func::Sqrt: return sqrt(a);
                    case Func::Sinh: return sinh(a);
                    case Func::Cosh: return cosh(a);
                    case Func::Tanh: return tanh(a);
                }
                throw std::logic_error("unreachable");
            }
        }
        throw std::logic_error("unreachable");
    }

    bool depends_on_coords() const;
    std::string print() const;
};

ExprPtr parse_expression(const std::string& text);
ExprPtr make_number(double v);

// Structural equality (used by the parse/print round-trip tests).
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

}  // namespace mixedcurv
