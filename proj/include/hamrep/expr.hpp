#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hamrep {

// Compiled arithmetic expression over named variables.
// Grammar: numbers, variables, + - * / ^, unary minus, parentheses,
// comparisons (< <= > >= == !=) and && || yielding 1 or 0, the constant pi,
// and the functions abs sqrt ln exp sin cos max min (max/min take 2+ arguments).
class Expr {
public:
    // Throws ConfigError on syntax errors or unknown identifiers.
    static Expr parse(const std::string& text, const std::vector<std::string>& variables);

    // values[k] is the value of variables[k].
    double operator()(std::span<const double> values) const;
    double operator()(std::initializer_list<double> values) const {
        return (*this)(std::span<const double>(values.begin(), values.size()));
    }
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

// Piecewise definition: the first piece whose condition is nonzero supplies the value;
// a piece without a condition always matches. Throws InvalidArgument when none matches.
class PiecewiseExpr {
public:
    struct Piece {
        std::string condition;  // empty means "otherwise"
        std::string value;
    };
    PiecewiseExpr(const std::vector<Piece>& pieces, const std::vector<std::string>& variables);

    double operator()(std::span<const double> values) const;
    double operator()(std::initializer_list<double> values) const {
        return (*this)(std::span<const double>(values.begin(), values.size()));
    }

private:
    std::vector<std::pair<std::optional<Expr>, Expr>> pieces_;
};

}  // namespace hamrep
