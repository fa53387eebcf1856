#include "mixedcurv/expression.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace mixedcurv {

namespace {

const std::map<std::string, Func>& function_table() {
    static const std::map<std::string, Func> t = {
        {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},
        {"exp", Func::Exp},   {"log", Func::Log},   {"sqrt", Func::Sqrt},
        {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"tanh", Func::Tanh}};
    return t;
}

const char* function_name(Func f) {
    for (const auto& [name, fn] : function_table())
        if (fn == f) return name.c_str();
    return "?";
}

ExprPtr node(ExprKind k, ExprPtr l = nullptr, ExprPtr r = nullptr) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

// Recursive-descent parser, standard precedence, '^' right-associative.
class Parser {
  public:
    explicit Parser(const std::string& text) : s_(text) {}

    ExprPtr parse() {
        ExprPtr e = sum();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    ExprPtr sum() {
        ExprPtr e = product();
        for (;;) {
            if (eat('+'))
                e = node(ExprKind::Add, e, product());
            else if (eat('-'))
                e = node(ExprKind::Sub, e, product());
            else
                return e;
        }
    }

    ExprPtr product() {
        ExprPtr e = unary();
        for (;;) {
            if (eat('*'))
                e = node(ExprKind::Mul, e, unary());
            else if (eat('/'))
                e = node(ExprKind::Div, e, unary());
            else
                return e;
        }
    }

    ExprPtr unary() {
        if (eat('-')) return node(ExprKind::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (eat('^')) return node(ExprKind::Pow, base, unary());  // right-assoc
        return base;
    }

    ExprPtr atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    ExprPtr number() {
        std::size_t start = pos_;
        const char* begin = s_.c_str() + start;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ = start + static_cast<std::size_t>(end - begin);
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Number;
        e->number = v;
        return e;
    }

    ExprPtr identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string id = s_.substr(start, pos_ - start);

        if (auto it = function_table().find(id); it != function_table().end()) {
            if (!eat('(')) fail("expected '(' after function name '" + id + "'");
            ExprPtr arg = sum();
            if (!eat(')')) fail("expected ')'");
            auto e = std::make_shared<Expr>();
            e->kind = ExprKind::Call;
            e->func = it->second;
            e->lhs = std::move(arg);
            return e;
        }
        if (id == "pi") return make_number(3.14159265358979323846);

        // x1..xd are coordinates, anything else a named parameter.
        if (id.size() >= 2 && id[0] == 'x') {
            bool digits = true;
            for (std::size_t k = 1; k < id.size(); ++k)
                if (!std::isdigit(static_cast<unsigned char>(id[k]))) digits = false;
            if (digits) {
                auto e = std::make_shared<Expr>();
                e->kind = ExprKind::Variable;
                e->var_index = std::stoi(id.substr(1)) - 1;
                if (e->var_index < 0) fail("coordinate index must be >= 1");
                return e;
            }
        }
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Parameter;
        e->name = std::move(id);
        return e;
    }
};

int precedence(ExprKind k) {
    switch (k) {
        case ExprKind::Add:
        case ExprKind::Sub: return 1;
        case ExprKind::Mul:
        case ExprKind::Div: return 2;
        case ExprKind::Neg: return 3;
        case ExprKind::Pow: return 4;
        default: return 5;
    }
}

void print_rec(const Expr& e, std::ostringstream& out, int parent_prec) {
    int prec = precedence(e.kind);
    bool paren = prec < parent_prec;
    if (paren) out << '(';
    switch (e.kind) {
        case ExprKind::Number: {
            std::ostringstream num;
            num.precision(17);
            num << e.number;
            out << num.str();
            break;
        }
        case ExprKind::Variable: out << 'x' << (e.var_index + 1); break;
        case ExprKind::Parameter: out << e.name; break;
        case ExprKind::Neg:
            out << '-';
            print_rec(*e.lhs, out, prec + 1);
            break;
        case ExprKind::Add:
            print_rec(*e.lhs, out, prec);
            out << " + ";
            print_rec(*e.rhs, out, prec + 1);
            break;
        case ExprKind::Sub:
            print_rec(*e.lhs, out, prec);
            out << " - ";
            print_rec(*e.rhs, out, prec + 1);
            break;
        case ExprKind::Mul:
            print_rec(*e.lhs, out, prec);
            out << "*";
            print_rec(*e.rhs, out, prec + 1);
            break;
        case ExprKind::Div:
            print_rec(*e.lhs, out, prec);
            out << "/";
            print_rec(*e.rhs, out, prec + 1);
            break;
        case ExprKind::Pow:
            print_rec(*e.lhs, out, prec + 1);
            out << "^";
            print_rec(*e.rhs, out, prec);
            break;
        case ExprKind::Call:
            out << function_name(e.func) << '(';
            print_rec(*e.lhs, out, 0);
            out << ')';
            break;
    }
    if (paren) out << ')';
}

}  // namespace

ExprPtr parse_expression(const std::string& text) { return Parser(text).parse(); }

ExprPtr make_number(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Number;
    e->number = v;
    return e;
}

bool Expr::depends_on_coords() const {
    switch (kind) {
        case ExprKind::Variable: return true;
        case ExprKind::Number:
        case ExprKind::Parameter: return false;
        default:
            return (lhs && lhs->depends_on_coords()) || (rhs && rhs->depends_on_coords());
    }
}

std::string Expr::print() const {
    std::ostringstream out;
    print_rec(*this, out, 0);
    return out.str();
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::Number: return a->number == b->number;
        case ExprKind::Variable: return a->var_index == b->var_index;
        case ExprKind::Parameter: return a->name == b->name;
        default: return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    }
}

}  // namespace mixedcurv
