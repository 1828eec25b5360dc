#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "kanto/orlicz.hpp"

using namespace kanto;

namespace {

Window unit_line(double lo, double hi) { return {lo, hi, Measure::Lebesgue}; }

struct StepFn {
    std::vector<double> edges;   // strictly increasing, size n+1
    std::vector<double> values;  // size n

    double operator()(double x) const {
        for (size_t i = 0; i + 1 < edges.size(); ++i)
            if (x >= edges[i] && x < edges[i + 1]) return values[i];
        return 0.0;
    }

    double lp_norm(double p) const {
        double acc = 0.0;
        for (size_t i = 0; i + 1 < edges.size(); ++i)
            acc += std::pow(std::abs(values[i]), p) * (edges[i + 1] - edges[i]);
        return std::pow(acc, 1.0 / p);
    }
};

StepFn random_step(std::mt19937& rng) {
    std::uniform_int_distribution<int> npieces(1, 5);
    std::uniform_real_distribution<double> edge(-3.0, 3.0);
    std::uniform_real_distribution<double> value(-4.0, 4.0);
    StepFn f;
    const int n = npieces(rng);
    for (int i = 0; i <= n; ++i) f.edges.push_back(edge(rng));
    std::sort(f.edges.begin(), f.edges.end());
    for (size_t i = 0; i + 1 < f.edges.size(); ++i) {
        if (f.edges[i + 1] - f.edges[i] < 1e-3) f.edges[i + 1] = f.edges[i] + 1e-3;
        double v = value(rng);
        if (std::abs(v) < 0.1) v = 0.5;
        f.values.push_back(v);
    }
    return f;
}

} // namespace

TEST_CASE("phi factories and axioms") {
    CHECK(PhiFunction::power(2.0)(3.0) == doctest::Approx(9.0));
    CHECK(PhiFunction::power(2.0)(-3.0) == doctest::Approx(9.0));  // acts on |u|
    CHECK(PhiFunction::exponential(1.0)(1.0) == doctest::Approx(std::exp(1.0) - 1.0));
    CHECK(PhiFunction::interpolation(1.0, 1.0)(0.0) == doctest::Approx(0.0));
    for (const auto& phi : {PhiFunction::power(1.0), PhiFunction::power(3.5),
                            PhiFunction::interpolation(1.0, 1.0),
                            PhiFunction::exponential(1.0)})
        CHECK_NOTHROW(phi.check_axioms());
    // sqrt(u) is not convex.
    auto bad = PhiFunction::custom_fn([](double u) { return std::sqrt(u); });
    CHECK_THROWS_AS(bad.check_axioms(), InvalidInput);
    // phi(0) != 0.
    auto offset = PhiFunction::custom_fn([](double u) { return u + 1.0; });
    CHECK_THROWS_AS(offset.check_axioms(), InvalidInput);
}

TEST_CASE("modular of indicator functions") {
    auto ind03 = [](double x) { return (x >= 0.0 && x < 3.0) ? 1.0 : 0.0; };
    const Window win = unit_line(-1.0, 4.0);
    for (double p : {1.0, 2.0, 3.5})
        CHECK(modular(PhiFunction::power(p), ind03, win, 2.0, 1e-10, {0.0, 3.0}) ==
              doctest::Approx(3.0 * std::pow(2.0, p)).epsilon(1e-8));
    CHECK(modular(PhiFunction::power(2.0), [](double) { return 0.0; }, win) ==
          doctest::Approx(0.0));
    auto ind01 = [](double x) { return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0; };
    CHECK(modular(PhiFunction::exponential(1.0), ind01, unit_line(-0.5, 1.5), 1.0, 1e-10,
                  {0.0, 1.0}) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-8));
}

TEST_CASE("modular scaling identity and monotonicity in lambda") {
    auto g = [](double x) { return std::sin(x) + 1.2; };
    const Window win = unit_line(0.0, 2.0);
    const auto phi = PhiFunction::interpolation(1.0, 1.0);
    for (double lambda : {0.5, 1.0, 3.0}) {
        auto scaled = [&, lambda](double x) { return lambda * g(x); };
        CHECK(modular(phi, g, win, lambda) ==
              doctest::Approx(modular(phi, scaled, win, 1.0)).epsilon(1e-8));
    }
    double prev = 0.0;
    for (double lambda : {0.25, 0.5, 1.0, 2.0}) {
        const double cur = modular(phi, g, win, lambda);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("modular overflow names the offending lambda") {
    auto g = [](double) { return 50.0; };
    try {
        (void)modular(PhiFunction::exponential(2.0), g, unit_line(0.0, 1.0), 8.0);
        FAIL("expected overflow");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("8") != std::string::npos);
    }
}

TEST_CASE("Luxemburg norms in both conventions") {
    auto g = [](double x) { return (x >= 0.0 && x < 1.0) ? 2.0 : 0.0; };
    const Window win = unit_line(-1.0, 2.0);
    const std::vector<double> bp = {0.0, 1.0};
    const auto phi2 = PhiFunction::power(2.0);
    CHECK(luxemburg_norm(phi2, g, win, LuxemburgConvention::Standard, 1e-9, bp) ==
          doctest::Approx(2.0).epsilon(1e-7));
    // PaperVariant: I(g/lambda) = 4/lambda^2 = lambda at lambda = 4^(1/3).
    CHECK(luxemburg_norm(phi2, g, win, LuxemburgConvention::PaperVariant, 1e-9, bp) ==
          doctest::Approx(std::pow(4.0, 1.0 / 3.0)).epsilon(1e-8));
    CHECK(luxemburg_norm(phi2, [](double) { return 0.0; }, win) == 0.0);
}

TEST_CASE("standard Luxemburg norm with a power phi is the Lp norm") {
    std::mt19937 rng(20260823);
    for (int i = 0; i < 50; ++i) {
        const StepFn f = random_step(rng);
        const Window win = unit_line(f.edges.front() - 0.5, f.edges.back() + 0.5);
        for (double p : {1.0, 2.0, 3.5}) {
            const double lux = luxemburg_norm(PhiFunction::power(p), f, win,
                                              LuxemburgConvention::Standard, 1e-10, f.edges);
            CHECK(lux == doctest::Approx(f.lp_norm(p)).epsilon(1e-7));
        }
    }
}

TEST_CASE("delta2 verdicts") {
    CHECK(delta2_audit(PhiFunction::power(2.0)).satisfied);
    CHECK(delta2_audit(PhiFunction::power(2.0)).sup_ratio == doctest::Approx(4.0));
    CHECK(delta2_audit(PhiFunction::interpolation(1.0, 1.0)).satisfied);
    const auto exp_report = delta2_audit(PhiFunction::exponential(1.0));
    CHECK(!exp_report.satisfied);
    CHECK(exp_report.sup_ratio > 1e6);  // phi(40)/phi(20) ~ e^20
    CHECK(exp_report.verdict.find("fails") != std::string::npos);
}

TEST_CASE("error metrics") {
    Signal f, g;
    f.eval = [](double x) { return x; };
    f.sup_abs = 2.0;
    g.eval = [](double x) { return x * x; };
    g.sup_abs = 4.0;
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i) grid.push_back(-1.0 + i / 100.0);
    const Window win = unit_line(0.0, 1.0);
    const auto table = error_metrics(f, g, grid, win, {1.0, 2.0},
                                     {PhiFunction::interpolation(1.0, 1.0)}, {0.1}, 1e-10);
    // |x - x^2| on the grid peaks at x = -1 (difference 2).
    CHECK(table.sup_error == doctest::Approx(2.0).epsilon(1e-9));
    // integral of x - x^2 over [0, 1] = 1/6.
    CHECK(table.lp_errors[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-8));
    CHECK(table.lp_errors[1] ==
          doctest::Approx(std::sqrt(1.0 / 30.0)).epsilon(1e-8));
    // modular of 0.1 |x - x^2| with u ln(e + u); cross-check one probe value
    // of the phi itself first.
    const auto phi = PhiFunction::interpolation(1.0, 1.0);
    CHECK(phi(0.1) == doctest::Approx(0.1 * std::log(std::exp(1.0) + 0.1)).epsilon(1e-12));
    CHECK(table.modular_distances[0][0] > 0.0);
    CHECK(table.modular_distances[0][0] < phi(0.1 * 0.25));  // crude upper bound
}

TEST_CASE("exp(0.1)-1 spot value for the exponential phi") {
    CHECK(PhiFunction::exponential(1.0)(0.1) ==
          doctest::Approx(0.10517091807564771).epsilon(1e-12));
}
