#include "tsc/expr.hpp"

#include <charconv>
#include <cmath>
#include <system_error>
#include <vector>

#include "tsc/exponential.hpp"
#include "tsc/timescale.hpp"

namespace tsc {

namespace ast {

bool equal(const NodePtr& x, const NodePtr& y) {
    if (!x || !y) return !x && !y;
    if (x->kind != y->kind) return false;
    if (x->num != y->num || x->cnum != y->cnum || x->ival != y->ival || x->a != y->a ||
        x->b != y->b) {
        return false;
    }
    return equal(x->lhs, y->lhs) && equal(x->rhs, y->rhs);
}

}  // namespace ast

using ast::Kind;
using ast::Node;
using ast::NodePtr;

namespace {

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size()) err("trailing input");
        return e;
    }

  private:
    [[noreturn]] void err(const std::string& what) const {
        throw SyntaxError("expression: " + what, pos_);
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) err(std::string("expected '") + c + "'");
    }

    double number() {
        skip_ws();
        double v = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (ec != std::errc{}) err("expected a number");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return v;
    }

    int integer() {
        const double v = number();
        const int n = static_cast<int>(v);
        if (static_cast<double>(n) != v) err("expected an integer");
        return n;
    }

    Complex complex_literal() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ')' && text_[pos_] != ',') ++pos_;
        std::string_view lit = text_.substr(start, pos_ - start);
        try {
            return parse_complex(lit);
        } catch (const Error& e) {
            pos_ = start;
            err(e.what());
        }
    }

    NodePtr expr() {
        NodePtr node;
        if (eat('-')) {
            node = make({.kind = Kind::Neg, .lhs = term()});
        } else {
            node = term();
        }
        while (true) {
            if (eat('+')) {
                node = make({.kind = Kind::Add, .lhs = node, .rhs = term()});
            } else if (eat('-')) {
                node = make({.kind = Kind::Sub, .lhs = node, .rhs = term()});
            } else {
                return node;
            }
        }
    }

    NodePtr term() {
        NodePtr node = factor();
        while (true) {
            if (eat('*')) {
                node = make({.kind = Kind::Mul, .lhs = node, .rhs = factor()});
            } else if (eat('/')) {
                node = make({.kind = Kind::Div, .lhs = node, .rhs = factor()});
            } else {
                return node;
            }
        }
    }

    NodePtr factor() {
        NodePtr node = base();
        if (eat('^')) {
            node = make({.kind = Kind::Pow, .num = number(), .lhs = node});
        }
        return node;
    }

    NodePtr base() {
        skip_ws();
        if (pos_ >= text_.size()) err("unexpected end of input");
        const char c = text_[pos_];

        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            expect(')');
            return inner;
        }
        if ((c >= '0' && c <= '9') || c == '.') {
            return make({.kind = Kind::Number, .num = number()});
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos_;
            while (end < text_.size() && std::isalpha(static_cast<unsigned char>(text_[end]))) ++end;
            const std::string_view word = text_.substr(pos_, end - pos_);

            if (word == "t") {
                pos_ = end;
                return make({.kind = Kind::Var});
            }
            if (word == "i") {
                pos_ = end;
                return make({.kind = Kind::Imag});
            }

            pos_ = end;
            if (word == "exp" || word == "sin" || word == "cos") {
                expect('(');
                NodePtr arg = expr();
                expect(')');
                const Kind k = (word == "exp") ? Kind::Exp : (word == "sin") ? Kind::Sin : Kind::Cos;
                return make({.kind = k, .lhs = arg});
            }
            if (word == "hk") {
                expect('(');
                const int n = integer();
                expect(')');
                if (n < 0) err("hk order must be nonnegative");
                return make({.kind = Kind::Hk, .ival = n});
            }
            if (word == "ets" || word == "etsinv") {
                expect('(');
                const Complex z = complex_literal();
                expect(')');
                return make({.kind = (word == "ets") ? Kind::Ets : Kind::EtsInv, .cnum = z});
            }
            if (word == "chi") {
                expect('(');
                const double a = number();
                expect(',');
                const double b = number();
                expect(')');
                return make({.kind = Kind::Chi, .a = a, .b = b});
            }
            if (word == "ind") {
                expect('(');
                const double a = number();
                expect(')');
                return make({.kind = Kind::Ind, .a = a});
            }
            throw UnknownFunction("expression: unknown function '" + std::string(word) + "'");
        }
        err("unexpected character");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

// precedence: additive 1, multiplicative 2, power 3, atom 4
int precedence(Kind k) {
    switch (k) {
        case Kind::Add:
        case Kind::Sub:
        case Kind::Neg:
            return 1;
        case Kind::Mul:
        case Kind::Div:
            return 2;
        case Kind::Pow:
            return 3;
        default:
            return 4;
    }
}

void print_node(const NodePtr& n, int parent_prec, std::string& out) {
    const int prec = precedence(n->kind);
    const bool wrap = prec < parent_prec;
    if (wrap) out += '(';
    switch (n->kind) {
        case Kind::Number: out += format_double(n->num); break;
        case Kind::Imag: out += 'i'; break;
        case Kind::Var: out += 't'; break;
        case Kind::Neg:
            out += '-';
            print_node(n->lhs, 2, out);
            break;
        case Kind::Add:
            print_node(n->lhs, 1, out);
            out += '+';
            print_node(n->rhs, 2, out);
            break;
        case Kind::Sub:
            print_node(n->lhs, 1, out);
            out += '-';
            print_node(n->rhs, 2, out);
            break;
        case Kind::Mul:
            print_node(n->lhs, 2, out);
            out += '*';
            print_node(n->rhs, 3, out);
            break;
        case Kind::Div:
            print_node(n->lhs, 2, out);
            out += '/';
            print_node(n->rhs, 3, out);
            break;
        case Kind::Pow:
            print_node(n->lhs, 4, out);
            out += '^';
            out += format_double(n->num);
            break;
        case Kind::Exp:
        case Kind::Sin:
        case Kind::Cos:
            out += (n->kind == Kind::Exp) ? "exp(" : (n->kind == Kind::Sin) ? "sin(" : "cos(";
            print_node(n->lhs, 0, out);
            out += ')';
            break;
        case Kind::Hk:
            out += "hk(" + std::to_string(n->ival) + ")";
            break;
        case Kind::Ets:
            out += "ets(" + format_complex(n->cnum) + ")";
            break;
        case Kind::EtsInv:
            out += "etsinv(" + format_complex(n->cnum) + ")";
            break;
        case Kind::Chi:
            out += "chi(" + format_double(n->a) + "," + format_double(n->b) + ")";
            break;
        case Kind::Ind:
            out += "ind(" + format_double(n->a) + ")";
            break;
    }
    if (wrap) out += ')';
}

using Eval = std::function<Complex(double, bool)>;  // (t, suppress point masses)

Eval compile_node(const NodePtr& n, const TimeScale& ts, double s, const QuadratureConfig& cfg) {
    switch (n->kind) {
        case Kind::Number: {
            const Complex v(n->num);
            return [v](double, bool) { return v; };
        }
        case Kind::Imag:
            return [](double, bool) { return Complex(0.0, 1.0); };
        case Kind::Var:
            return [](double t, bool) { return Complex(t); };
        case Kind::Neg: {
            auto a = compile_node(n->lhs, ts, s, cfg);
            return [a](double t, bool q) { return -a(t, q); };
        }
        case Kind::Add: {
            auto a = compile_node(n->lhs, ts, s, cfg);
            auto b = compile_node(n->rhs, ts, s, cfg);
            return [a, b](double t, bool q) { return a(t, q) + b(t, q); };
        }
        case Kind::Sub: {
            auto a = compile_node(n->lhs, ts, s, cfg);
            auto b = compile_node(n->rhs, ts, s, cfg);
            return [a, b](double t, bool q) { return a(t, q) - b(t, q); };
        }
        case Kind::Mul: {
            auto a = compile_node(n->lhs, ts, s, cfg);
            auto b = compile_node(n->rhs, ts, s, cfg);
            return [a, b](double t, bool q) { return a(t, q) * b(t, q); };
        }
        case Kind::Div: {
            auto a = compile_node(n->lhs, ts, s, cfg);
            auto b = compile_node(n->rhs, ts, s, cfg);
            return [a, b](double t, bool q) { return a(t, q) / b(t, q); };
        }
        case Kind::Pow: {
            auto a = compile_node(n->lhs, ts, s, cfg);
            const double e = n->num;
            return [a, e](double t, bool q) { return std::pow(a(t, q), e); };
        }
        case Kind::Exp: {
            auto a = compile_node(n->lhs, ts, s, cfg);
            return [a](double t, bool q) { return std::exp(a(t, q)); };
        }
        case Kind::Sin: {
            auto a = compile_node(n->lhs, ts, s, cfg);
            return [a](double t, bool q) { return std::sin(a(t, q)); };
        }
        case Kind::Cos: {
            auto a = compile_node(n->lhs, ts, s, cfg);
            return [a](double t, bool q) { return std::cos(a(t, q)); };
        }
        case Kind::Hk: {
            auto table = std::make_shared<MonomialTable>(ts, s, cfg);
            const int order = n->ival;
            return [table, order](double t, bool) { return Complex(table->value(order, t)); };
        }
        case Kind::Ets: {
            auto walker = std::make_shared<ExpProduct>(
                ts, s, std::vector<ExpProduct::Factor>{{n->cnum, 1}}, cfg);
            return [walker](double t, bool) { return walker->at(t); };
        }
        case Kind::EtsInv: {
            auto walker = std::make_shared<ExpProduct>(
                ts, s, std::vector<ExpProduct::Factor>{{n->cnum, -1}}, cfg);
            return [walker](double t, bool) { return walker->at(t); };
        }
        case Kind::Chi: {
            const double a = n->a;
            const double b = n->b;
            return [a, b](double t, bool) { return Complex((t >= a && t < b) ? 1.0 : 0.0); };
        }
        case Kind::Ind: {
            const double a = n->a;
            return [a](double t, bool suppress) {
                if (suppress) return Complex(0.0);
                return Complex(std::abs(t - a) <= kMembershipTol ? 1.0 : 0.0);
            };
        }
    }
    throw Error("expression: unreachable node kind");
}

}  // namespace

std::string Expression::print() const {
    std::string out;
    print_node(root_, 0, out);
    return out;
}

GridFunction Expression::compile(const TimeScale& ts, double s, const QuadratureConfig& cfg) const {
    if (!root_) throw Error("expression: empty");
    Eval eval = compile_node(root_, ts, s, cfg);
    return GridFunction([eval](double t) { return eval(t, false); },
                        [eval](double t) { return eval(t, true); });
}

Expression parse_expr(std::string_view text) {
    if (text.empty()) throw SyntaxError("expression: empty input", 0);
    return Expression(Parser(text).run());
}

Complex parse_complex(std::string_view text) {
    if (text.empty()) throw Error("complex literal: empty");

    const auto parse_part = [&](std::size_t& pos) -> double {
        double sign = 1.0;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            if (text[pos] == '-') sign = -1.0;
            ++pos;
        }
        if (pos < text.size() && text[pos] == 'i') return sign;  // bare i
        double v = 0;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
        if (ec != std::errc{}) throw Error("complex literal: expected a number in '" + std::string(text) + "'");
        pos = static_cast<std::size_t>(ptr - text.data());
        return sign * v;
    };

    std::size_t pos = 0;
    const double first = parse_part(pos);
    if (pos == text.size()) return Complex(first, 0.0);
    if (text[pos] == 'i') {
        if (pos + 1 != text.size()) throw Error("complex literal: trailing input in '" + std::string(text) + "'");
        return Complex(0.0, first);
    }
    const double second = parse_part(pos);
    if (pos >= text.size() || text[pos] != 'i' || pos + 1 != text.size()) {
        throw Error("complex literal: expected 'a+bi' form in '" + std::string(text) + "'");
    }
    return Complex(first, second);
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_complex(Complex z) {
    if (z.imag() == 0.0) return format_double(z.real());
    std::string out;
    if (z.real() != 0.0) {
        out += format_double(z.real());
        if (z.imag() > 0) out += '+';
    }
    out += format_double(z.imag());
    out += 'i';
    return out;
}

}  // namespace tsc
