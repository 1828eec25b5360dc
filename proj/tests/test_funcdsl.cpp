#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "kanto/funcdsl.hpp"

using namespace kanto;
using namespace kanto::dsl;

TEST_CASE("expression evaluation and precedence") {
    CHECK(parse_expression("3*exp(x)").eval(0.0) == doctest::Approx(3.0));
    CHECK(parse_expression("-25/x^3").eval(5.0) == doctest::Approx(-0.2));
    CHECK(parse_expression("2^3^2").eval(0.0) == doctest::Approx(512.0));  // right-assoc
    CHECK(parse_expression("-2^2").eval(0.0) == doctest::Approx(-4.0));    // ^ binds tighter
    CHECK(parse_expression("2*-3").eval(0.0) == doctest::Approx(-6.0));
    CHECK(parse_expression("1-2-3").eval(0.0) == doctest::Approx(-4.0));   // left-assoc
    CHECK(parse_expression("sinc(0)").eval(0.0) == doctest::Approx(1.0));
    CHECK(parse_expression("abs(-x)+cos(0)").eval(2.0) == doctest::Approx(3.0));
    CHECK(parse_expression("sin(x)/x").eval(1e-8) == doctest::Approx(1.0));
}

TEST_CASE("syntax errors carry byte offsets") {
    try {
        parse_expression("2*x-+");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);
        CHECK(!e.expected.empty());
    }
    CHECK_THROWS_AS(parse_expression(""), ParseError);
    CHECK_THROWS_AS(parse_expression("foo(x)"), ParseError);
    CHECK_THROWS_AS(parse_expression("(1+2"), ParseError);
}

TEST_CASE("format round-trips to an identical AST") {
    for (const char* text : {"3*exp(x)", "-25/x^3", "2^3^2", "x*(x+1)-sin(x)/2",
                             "abs(x)^2.5+1e-3"}) {
        const Expression e = parse_expression(text);
        const Expression r = parse_expression(e.format());
        CHECK(e.identical(r));
    }
}

TEST_CASE("the test-signal presets evaluate per their displays") {
    const auto f1 = PiecewiseFunction::preset_f1();
    CHECK(f1.eval(-2.0) == doctest::Approx(3.0 * std::exp(-2.0)));
    CHECK(f1.eval(-1.0) == doctest::Approx(-1.0));
    CHECK(f1.eval(0.0) == doctest::Approx(2.0));
    CHECK(f1.eval(1.5) == doctest::Approx(1.5));
    CHECK(f1.eval(2.0) == doctest::Approx(-2.0 * std::exp(-2.0)));
    CHECK(f1.breakpoints() == std::vector<double>{-1.0, 0.0, 1.0, 2.0});

    const auto f2 = PiecewiseFunction::preset_f2();
    CHECK(f2.eval(1.0) == doctest::Approx(2.0));
    CHECK(f2.breakpoints() == std::vector<double>{-1.0, 0.0, 2.0});

    const auto f3 = PiecewiseFunction::preset_f3();
    CHECK(f3.eval(1.0) == doctest::Approx(2.0));
    CHECK(f3.eval(3.0) == doctest::Approx(1.0));
    CHECK(f3.eval(5.0) == doctest::Approx(-25.0 / 125.0));
    CHECK_THROWS_AS(f3.eval(0.0), InvalidInput);
    CHECK_THROWS_AS(f3.eval(-1.0), InvalidInput);
}

TEST_CASE("piecewise validation") {
    CHECK_THROWS_AS(PiecewiseFunction::parse({{"0<=x<2", "1"}, {"1<=x<3", "2"}, {"x>=3", "0"},
                                              {"x<0", "0"}},
                                             DomainTag::RealLine),
                    InvalidInput);  // overlap
    CHECK_THROWS_AS(PiecewiseFunction::parse({{"x<0", "0"}, {"1<=x<2", "1"}, {"x>=2", "0"}},
                                             DomainTag::RealLine),
                    InvalidInput);  // gap
    CHECK_THROWS_AS(PiecewiseFunction::parse({{"0<=x<1", "1"}}, DomainTag::RealLine),
                    InvalidInput);  // does not cover R

    const auto ident = PiecewiseFunction::parse({{"x<0", "x"}, {"x>=0", "x"}},
                                                DomainTag::RealLine);
    CHECK(ident.eval(-3.25) == doctest::Approx(-3.25));
    CHECK(ident.eval(7.0) == doctest::Approx(7.0));
}

TEST_CASE("parser survives fuzzed input") {
    std::mt19937 rng(20260823);
    const std::string charset = "0123456789.+-*/^()x abcdefghinlpqs<>=";
    std::uniform_int_distribution<int> len(0, 64);
    std::uniform_int_distribution<size_t> pick(0, charset.size() - 1);
    int parsed_ok = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string text;
        const int n = len(rng);
        for (int j = 0; j < n; ++j) text.push_back(charset[pick(rng)]);
        try {
            const Expression e = parse_expression(text);
            ++parsed_ok;
            try {
                (void)e.eval(1.0);
            } catch (const std::exception&) {
                // runtime domain errors are fine; crashes are not
            }
        } catch (const ParseError&) {
            // positioned rejection is the expected outcome
        }
    }
    CHECK(parsed_ok > 0);  // the fuzz grammar does produce some valid inputs
}
