#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kanto/errors.hpp"
#include "kanto/group_model.hpp"

namespace kanto::dsl {

class ParseError : public InvalidInput {
public:
    ParseError(const std::string& msg, size_t offset, std::string expected)
        : InvalidInput(msg), offset(offset), expected(std::move(expected)) {}

    size_t offset;
    std::string expected;
};

/// AST over literals, the variable x, unary minus, + - * / ^ and the
/// builtin functions exp, ln, sin, cos, abs, sinc.
class Expression {
public:
    double eval(double x) const;
    std::string format() const;
    bool identical(const Expression& other) const;

    struct Node;  // implementation detail, defined in the .cpp

private:
    std::shared_ptr<const Node> root_;
    friend Expression parse_expression(std::string_view text);
};

Expression parse_expression(std::string_view text);

enum class DomainTag { RealLine, PositiveReals };

struct PieceSpec {
    std::string interval;    // "a<=x<b" | "x<b" | "x>=a"
    std::string expression;
};

/// Ordered left-closed/right-open pieces covering the declared domain.
class PiecewiseFunction {
public:
    static PiecewiseFunction parse(const std::vector<PieceSpec>& pieces, DomainTag domain);

    // Test signals: f1 and f2 on R (the convolution experiments), f3 on R+
    // (the Mellin experiment).
    static PiecewiseFunction preset_f1();
    static PiecewiseFunction preset_f2();
    static PiecewiseFunction preset_f3();

    double eval(double x) const;
    std::vector<double> breakpoints() const;
    DomainTag domain() const { return domain_; }
    /// Max |f| over a dense probe grid plus piece endpoints; used for
    /// truncation certificates.
    double sup_abs_estimate() const;

private:
    struct Piece {
        double lo, hi;
        Expression expr;
    };
    std::vector<Piece> pieces_;
    DomainTag domain_ = DomainTag::RealLine;
};

} // namespace kanto::dsl
