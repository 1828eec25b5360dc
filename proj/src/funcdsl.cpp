#include "kanto/funcdsl.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "kanto/kernels.hpp"  // sinc_eval

namespace kanto::dsl {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

struct Expression::Node {
    enum class Kind { Literal, Variable, Unary, Binary, Call };
    Kind kind;
    double value = 0.0;        // Literal
    char op = 0;               // Unary ('-') / Binary ('+','-','*','/','^')
    std::string func;          // Call
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make_literal(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Literal;
    n->value = v;
    return n;
}

NodePtr make_variable() {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Variable;
    return n;
}

NodePtr make_unary(NodePtr operand) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Unary;
    n->op = '-';
    n->lhs = std::move(operand);
    return n;
}

NodePtr make_binary(char op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr make_call(std::string func, NodePtr arg) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Call;
    n->func = std::move(func);
    n->lhs = std::move(arg);
    return n;
}

double eval_node(const Node& n, double x) {
    switch (n.kind) {
        case Node::Kind::Literal: return n.value;
        case Node::Kind::Variable: return x;
        case Node::Kind::Unary: return -eval_node(*n.lhs, x);
        case Node::Kind::Binary: {
            const double a = eval_node(*n.lhs, x);
            const double b = eval_node(*n.rhs, x);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                case '^': return std::pow(a, b);
            }
            return 0.0;
        }
        case Node::Kind::Call: {
            const double a = eval_node(*n.lhs, x);
            if (n.func == "exp") return std::exp(a);
            if (n.func == "ln") return std::log(a);
            if (n.func == "sin") return std::sin(a);
            if (n.func == "cos") return std::cos(a);
            if (n.func == "abs") return std::abs(a);
            if (n.func == "sinc") return sinc_eval(a);
            return 0.0;
        }
    }
    return 0.0;
}

void format_node(const Node& n, std::ostream& os) {
    switch (n.kind) {
        case Node::Kind::Literal: {
            std::ostringstream tmp;
            tmp.precision(17);
            tmp << n.value;
            os << tmp.str();
            break;
        }
        case Node::Kind::Variable: os << 'x'; break;
        case Node::Kind::Unary:
            os << "(-";
            format_node(*n.lhs, os);
            os << ')';
            break;
        case Node::Kind::Binary:
            os << '(';
            format_node(*n.lhs, os);
            os << n.op;
            format_node(*n.rhs, os);
            os << ')';
            break;
        case Node::Kind::Call:
            os << n.func << '(';
            format_node(*n.lhs, os);
            os << ')';
            break;
    }
}

bool identical_nodes(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.op != b.op || a.func != b.func) return false;
    if (a.kind == Node::Kind::Literal) return a.value == b.value;
    if (a.lhs && (!b.lhs || !identical_nodes(*a.lhs, *b.lhs))) return false;
    if (!a.lhs && b.lhs) return false;
    if (a.rhs && (!b.rhs || !identical_nodes(*a.rhs, *b.rhs))) return false;
    if (!a.rhs && b.rhs) return false;
    return true;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        skip_space();
        if (pos_ >= text_.size()) fail("expression");
        NodePtr e = parse_sum();
        skip_space();
        if (pos_ < text_.size()) fail("end of input or operator");
        return e;
    }

private:
    std::string_view text_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) {
        std::ostringstream msg;
        msg << "syntax error at offset " << pos_ << ": expected " << expected;
        throw ParseError(msg.str(), pos_, expected);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            if (consume('+')) lhs = make_binary('+', lhs, parse_product());
            else if (consume('-')) lhs = make_binary('-', lhs, parse_product());
            else return lhs;
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_factor();
        for (;;) {
            if (consume('*')) lhs = make_binary('*', lhs, parse_factor());
            else if (consume('/')) lhs = make_binary('/', lhs, parse_factor());
            else return lhs;
        }
    }

    // unary minus binds below ^, so -x^2 parses as -(x^2)
    NodePtr parse_factor() {
        if (consume('-')) return make_unary(parse_factor());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (consume('^')) return make_binary('^', base, parse_factor());
        return base;
    }

    NodePtr parse_primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("number, 'x', function or '('");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_sum();
            if (!consume(')')) fail("')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
        fail("number, 'x', function or '('");
    }

    NodePtr parse_number() {
        const char* begin = text_.data() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("number");
        const size_t len = static_cast<size_t>(end - begin);
        if (pos_ + len > text_.size()) fail("number");
        pos_ += len;
        return make_literal(v);
    }

    NodePtr parse_name() {
        const size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        if (name == "x") return make_variable();
        static const char* const funcs[] = {"exp", "ln", "sin", "cos", "abs", "sinc"};
        for (const char* f : funcs) {
            if (name == f) {
                if (!consume('(')) fail("'('");
                NodePtr arg = parse_sum();
                if (!consume(')')) fail("')'");
                return make_call(name, arg);
            }
        }
        pos_ = start;
        fail("'x' or one of exp, ln, sin, cos, abs, sinc");
    }
};

} // namespace

double Expression::eval(double x) const {
    if (!root_) throw InvalidInput("Expression: empty");
    return eval_node(*root_, x);
}

std::string Expression::format() const {
    if (!root_) throw InvalidInput("Expression: empty");
    std::ostringstream os;
    format_node(*root_, os);
    return os.str();
}

bool Expression::identical(const Expression& other) const {
    if (!root_ || !other.root_) return root_ == other.root_;
    return identical_nodes(*root_, *other.root_);
}

Expression parse_expression(std::string_view text) {
    if (text.empty()) throw ParseError("parse_expression: empty input", 0, "an expression");
    Parser p(text);
    Expression e;
    e.root_ = p.parse();
    return e;
}

namespace {

double parse_bound(const std::string& s, size_t from, size_t to) {
    const std::string tok = s.substr(from, to - from);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw InvalidInput("piecewise interval: bad bound '" + tok + "'");
    return v;
}

// "a<=x<b" | "x<b" | "x>=a"
std::pair<double, double> parse_interval(const std::string& s) {
    const size_t xpos = s.find('x');
    if (xpos == std::string::npos)
        throw InvalidInput("piecewise interval: missing 'x' in '" + s + "'");
    double lo = -kInf, hi = kInf;
    if (xpos > 0) {
        if (xpos < 2 || s.compare(xpos - 2, 2, "<=") != 0)
            throw InvalidInput("piecewise interval: lower bound must use '<=' in '" + s + "'");
        lo = parse_bound(s, 0, xpos - 2);
    }
    const size_t after = xpos + 1;
    if (after < s.size()) {
        if (s.compare(after, 1, "<") == 0 && (after + 1 >= s.size() || s[after + 1] != '='))
            hi = parse_bound(s, after + 1, s.size());
        else if (s.compare(after, 2, ">=") == 0) {
            if (xpos > 0) throw InvalidInput("piecewise interval: two lower bounds in '" + s + "'");
            lo = parse_bound(s, after + 2, s.size());
        } else
            throw InvalidInput("piecewise interval: expected '<b' or '>=a' in '" + s + "'");
    }
    if (!(lo < hi)) throw InvalidInput("piecewise interval: empty interval '" + s + "'");
    return {lo, hi};
}

} // namespace

PiecewiseFunction PiecewiseFunction::parse(const std::vector<PieceSpec>& specs, DomainTag domain) {
    if (specs.empty()) throw InvalidInput("PiecewiseFunction: no pieces");
    PiecewiseFunction f;
    f.domain_ = domain;
    for (const auto& spec : specs) {
        auto [lo, hi] = parse_interval(spec.interval);
        f.pieces_.push_back({lo, hi, parse_expression(spec.expression)});
    }
    std::sort(f.pieces_.begin(), f.pieces_.end(),
              [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    const double domain_lo = domain == DomainTag::PositiveReals ? 0.0 : -kInf;
    if (f.pieces_.front().lo != domain_lo)
        throw InvalidInput("PiecewiseFunction: first piece must start at the domain edge");
    for (size_t i = 1; i < f.pieces_.size(); ++i) {
        const double prev_hi = f.pieces_[i - 1].hi;
        const double lo = f.pieces_[i].lo;
        std::ostringstream at;
        at.precision(17);
        at << lo;
        if (lo < prev_hi)
            throw InvalidInput("PiecewiseFunction: pieces overlap at x=" + at.str());
        if (lo > prev_hi)
            throw InvalidInput("PiecewiseFunction: gap between pieces at x=" + at.str());
    }
    if (f.pieces_.back().hi != kInf)
        throw InvalidInput("PiecewiseFunction: last piece must extend to +inf");
    return f;
}

PiecewiseFunction PiecewiseFunction::preset_f1() {
    return parse({{"x<-1", "3*exp(x)"},
                  {"-1<=x<0", "-1"},
                  {"0<=x<1", "2"},
                  {"1<=x<2", "x"},
                  {"x>=2", "-2*exp(-x)"}},
                 DomainTag::RealLine);
}

PiecewiseFunction PiecewiseFunction::preset_f2() {
    return parse({{"x<-1", "3*exp(x)"},
                  {"-1<=x<0", "-1"},
                  {"0<=x<2", "2"},
                  {"x>=2", "-2*exp(-x)"}},
                 DomainTag::RealLine);
}

PiecewiseFunction PiecewiseFunction::preset_f3() {
    return parse({{"0<=x<2", "2*x"},
                  {"2<=x<4", "1"},
                  {"x>=4", "-25/x^3"}},
                 DomainTag::PositiveReals);
}

double PiecewiseFunction::eval(double x) const {
    if (domain_ == DomainTag::PositiveReals && !(x > 0.0))
        throw InvalidInput("PiecewiseFunction: x must be positive on this domain");
    if (!std::isfinite(x)) throw InvalidInput("PiecewiseFunction: x must be finite");
    // Left-closed/right-open pieces: find the unique covering piece.
    for (const auto& p : pieces_)
        if (x >= p.lo && x < p.hi) return p.expr.eval(x);
    return pieces_.back().expr.eval(x);
}

std::vector<double> PiecewiseFunction::breakpoints() const {
    std::vector<double> b;
    for (size_t i = 1; i < pieces_.size(); ++i) b.push_back(pieces_[i].lo);
    return b;
}

double PiecewiseFunction::sup_abs_estimate() const {
    const double lo = domain_ == DomainTag::PositiveReals ? 1e-6 : -50.0;
    const double hi = domain_ == DomainTag::PositiveReals ? 1e4 : 50.0;
    double sup = 0.0;
    for (const auto& p : pieces_) {
        const double a = std::max(p.lo, lo);
        const double b = std::min(p.hi, hi);
        if (!(a < b)) continue;
        for (int i = 0; i <= 400; ++i) {
            const double x = a + (b - a) * i / 400.0;
            const double v = p.expr.eval(x == b ? std::nextafter(b, a) : x);
            if (std::isfinite(v)) sup = std::max(sup, std::abs(v));
        }
    }
    return sup;
}

} // namespace kanto::dsl
