#include "hamrep/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "hamrep/errors.hpp"

namespace hamrep {

struct Expr::Node {
    enum class Kind { constant, variable, neg, binary, call } kind;
    double value = 0.0;
    std::size_t index = 0;
    std::string op;
    std::vector<std::shared_ptr<const Node>> args;

    double eval(std::span<const double> v) const {
        switch (kind) {
            case Kind::constant:
                return value;
            case Kind::variable:
                return v[index];
            case Kind::neg:
                return -args[0]->eval(v);
            case Kind::binary: {
                if (op == "&&") return (args[0]->eval(v) != 0.0 && args[1]->eval(v) != 0.0) ? 1.0 : 0.0;
                if (op == "||") return (args[0]->eval(v) != 0.0 || args[1]->eval(v) != 0.0) ? 1.0 : 0.0;
                const double a = args[0]->eval(v), b = args[1]->eval(v);
                if (op == "+") return a + b;
                if (op == "-") return a - b;
                if (op == "*") return a * b;
                if (op == "/") return a / b;
                if (op == "^") return std::pow(a, b);
                if (op == "<") return a < b ? 1.0 : 0.0;
                if (op == "<=") return a <= b ? 1.0 : 0.0;
                if (op == ">") return a > b ? 1.0 : 0.0;
                if (op == ">=") return a >= b ? 1.0 : 0.0;
                if (op == "==") return a == b ? 1.0 : 0.0;
                return a != b ? 1.0 : 0.0;
            }
            case Kind::call: {
                const double a = args[0]->eval(v);
                if (op == "abs") return std::abs(a);
                if (op == "sqrt") return std::sqrt(a);
                if (op == "ln") return std::log(a);
                if (op == "exp") return std::exp(a);
                if (op == "sin") return std::sin(a);
                if (op == "cos") return std::cos(a);
                double r = a;
                for (std::size_t k = 1; k < args.size(); ++k) {
                    const double b = args[k]->eval(v);
                    r = op == "max" ? std::max(r, b) : std::min(r, b);
                }
                return r;
            }
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

class Parser {
public:
    Parser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

    NodePtr parse() {
        auto n = parse_or();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    const std::string& s_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::ConfigError, "expression \"" + s_ + "\" at " + std::to_string(pos_) + ": " + msg);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(const std::string& tok) {
        skip();
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }
    static NodePtr binary(std::string op, NodePtr a, NodePtr b) {
        auto n = std::make_shared<Expr::Node>();
        n->kind = Kind::binary;
        n->op = std::move(op);
        n->args = {std::move(a), std::move(b)};
        return n;
    }

    NodePtr parse_or() {
        auto n = parse_and();
        while (accept("||")) n = binary("||", n, parse_and());
        return n;
    }
    NodePtr parse_and() {
        auto n = parse_cmp();
        while (accept("&&")) n = binary("&&", n, parse_cmp());
        return n;
    }
    NodePtr parse_cmp() {
        auto n = parse_sum();
        for (const char* op : {"<=", ">=", "==", "!=", "<", ">"})
            if (accept(op)) return binary(op, n, parse_sum());
        return n;
    }
    NodePtr parse_sum() {
        auto n = parse_term();
        for (;;) {
            if (accept("+"))
                n = binary("+", n, parse_term());
            else if (accept("-"))
                n = binary("-", n, parse_term());
            else
                return n;
        }
    }
    NodePtr parse_term() {
        auto n = parse_unary();
        for (;;) {
            if (accept("*"))
                n = binary("*", n, parse_unary());
            else if (accept("/"))
                n = binary("/", n, parse_unary());
            else
                return n;
        }
    }
    NodePtr parse_unary() {
        if (accept("-")) {
            auto n = std::make_shared<Expr::Node>();
            n->kind = Kind::neg;
            n->args = {parse_unary()};
            return n;
        }
        if (accept("+")) return parse_unary();
        return parse_power();
    }
    NodePtr parse_power() {
        auto base = parse_primary();
        if (accept("^")) return binary("^", base, parse_unary());
        return base;
    }
    NodePtr parse_primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (accept("(")) {
            auto n = parse_or();
            if (!accept(")")) fail("expected ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            auto n = std::make_shared<Expr::Node>();
            n->kind = Kind::constant;
            auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), n->value);
            if (ec != std::errc()) fail("bad number");
            pos_ = static_cast<std::size_t>(ptr - s_.data());
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
            const std::string id = s_.substr(pos_, end - pos_);
            pos_ = end;
            if (accept("(")) return parse_call(id);
            auto n = std::make_shared<Expr::Node>();
            if (id == "pi") {
                n->kind = Kind::constant;
                n->value = std::numbers::pi;
                return n;
            }
            for (std::size_t k = 0; k < vars_.size(); ++k)
                if (vars_[k] == id) {
                    n->kind = Kind::variable;
                    n->index = k;
                    return n;
                }
            fail("unknown variable '" + id + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
    NodePtr parse_call(const std::string& id) {
        static const std::vector<std::string> unary{"abs", "sqrt", "ln", "exp", "sin", "cos"};
        const bool is_unary = std::find(unary.begin(), unary.end(), id) != unary.end();
        if (!is_unary && id != "max" && id != "min") fail("unknown function '" + id + "'");
        auto n = std::make_shared<Expr::Node>();
        n->kind = Kind::call;
        n->op = id;
        n->args.push_back(parse_or());
        while (accept(",")) n->args.push_back(parse_or());
        if (!accept(")")) fail("expected ')'");
        if (is_unary && n->args.size() != 1) fail(id + " takes one argument");
        if (!is_unary && n->args.size() < 2) fail(id + " takes at least two arguments");
        return n;
    }
};

}  // namespace

Expr Expr::parse(const std::string& text, const std::vector<std::string>& variables) {
    Expr e;
    e.text_ = text;
    e.root_ = Parser(text, variables).parse();
    return e;
}

double Expr::operator()(std::span<const double> values) const { return root_->eval(values); }

PiecewiseExpr::PiecewiseExpr(const std::vector<Piece>& pieces, const std::vector<std::string>& variables) {
    if (pieces.empty()) throw Error(ErrorCode::ConfigError, "piecewise definition without pieces");
    for (const auto& p : pieces) {
        std::optional<Expr> cond;
        if (!p.condition.empty()) cond = Expr::parse(p.condition, variables);
        pieces_.emplace_back(std::move(cond), Expr::parse(p.value, variables));
    }
}

double PiecewiseExpr::operator()(std::span<const double> values) const {
    for (const auto& [cond, value] : pieces_)
        if (!cond || (*cond)(values) != 0.0) return value(values);
    throw Error(ErrorCode::InvalidArgument, "no piece matches");
}

}  // namespace hamrep
