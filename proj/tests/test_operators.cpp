#include <cmath>
#include <random>

#include "doctest.h"
#include "kanto/operators.hpp"
#include "kanto/quadrature.hpp"

using namespace kanto;

namespace {

KernelFamily m_dilate() {
    return {make_combo_kernel(), KernelFamily::Scaling::DilateArgument};
}

KernelFamily m_weighted() {
    return {make_combo_kernel(), KernelFamily::Scaling::DilateAndWeight};
}

KernelFamily mellin_family() {
    return {Kernel{}, KernelFamily::Scaling::MellinPower};
}

Signal hat() {
    return Signal::from_piecewise(dsl::PiecewiseFunction::parse(
        {{"x<-1", "0"}, {"-1<=x<0", "x+1"}, {"0<=x<1", "1-x"}, {"x>=1", "0"}},
        dsl::DomainTag::RealLine));
}

} // namespace

TEST_CASE("constants are reproduced by every variant") {
    const Signal one = Signal::constant(1.0);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> pick(-3.0, 3.0);
    for (double w : {5.0, 15.0}) {
        const auto specs = {
            make_operator_spec(OperatorVariant::SamplingKantorovich, m_dilate(), w),
            make_operator_spec(OperatorVariant::SamplingKantorovichSymmetric, m_dilate(), w),
            make_operator_spec(OperatorVariant::ConvKantorovichScaled, m_dilate(), w),
            make_operator_spec(OperatorVariant::ConvKantorovichUnit, m_weighted(), w),
        };
        for (const auto& spec : specs)
            for (int i = 0; i < 5; ++i)
                CHECK(apply(spec, one, pick(rng)) == doctest::Approx(1.0).epsilon(1e-6));
        const auto mel = make_operator_spec(OperatorVariant::MellinKantorovich,
                                            mellin_family(), w);
        for (int i = 0; i < 5; ++i)
            CHECK(apply(mel, one, std::exp(0.5 * pick(rng))) ==
                  doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("mollifier-style unit kernel at the origin") {
    KernelFamily m3{make_bspline_kernel(3), KernelFamily::Scaling::DilateAndWeight};
    const auto spec = make_operator_spec(OperatorVariant::ConvKantorovichUnit, m3, 8.0);
    CHECK(apply(spec, Signal::constant(1.0), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("convolution-Kantorovich value matches a brute-force oracle") {
    const Signal f1 = Signal::from_piecewise(dsl::PiecewiseFunction::preset_f1());
    const double w = 15.0, z = 3.0;
    auto spec = make_operator_spec(OperatorVariant::ConvKantorovichScaled, m_dilate(), w);
    const double value = apply(spec, f1, z);

    // Same formula, assembled independently at much finer tolerance.
    const Kernel kw = m_dilate().at(w);
    auto integrand = [&](double t) {
        const double v = kw.eval(z - t / w);
        if (v == 0.0) return 0.0;
        const double lo = (t - 1.0) / w, hi = (t + 1.0) / w;
        const double mean =
            integrate([&](double s) { return f1.eval(s); }, lo, hi, 1e-12, f1.breakpoints) /
            (hi - lo);
        return v * mean;
    };
    std::vector<double> breaks;
    for (double knot : kw.knots) breaks.push_back(w * (z - knot));
    for (double b : f1.breakpoints) {
        breaks.push_back(w * b + 1.0);
        breaks.push_back(w * b - 1.0);
    }
    const double oracle = integrate(integrand, w * (z - kw.hi), w * (z - kw.lo), 1e-11, breaks);
    CHECK(value == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("grid evaluation is deterministic and consistent with apply") {
    const Signal f1 = Signal::from_piecewise(dsl::PiecewiseFunction::preset_f1());
    auto spec = make_operator_spec(OperatorVariant::SamplingKantorovich, m_dilate(), 10.0);
    const auto single = apply_grid(spec, f1, {0.7});
    CHECK(single.values[0] == apply(spec, f1, 0.7));

    std::vector<double> grid = {-1.0, -0.3, 0.2, 0.9, 2.4};
    const auto forward = apply_grid(spec, f1, grid);
    std::vector<double> reversed(grid.rbegin(), grid.rend());
    const auto backward = apply_grid(spec, f1, reversed);
    for (size_t i = 0; i < grid.size(); ++i)
        CHECK(forward.values[i] == backward.values[grid.size() - 1 - i]);  // bitwise
}

TEST_CASE("linearity") {
    const Signal f1 = Signal::from_piecewise(dsl::PiecewiseFunction::preset_f1());
    const Signal h = hat();
    Signal combo;
    combo.eval = [&](double x) { return 2.0 * f1.eval(x) - 0.5 * h.eval(x); };
    combo.breakpoints = f1.breakpoints;
    combo.breakpoints.insert(combo.breakpoints.end(), h.breakpoints.begin(),
                             h.breakpoints.end());
    combo.sup_abs = 2.0 * f1.sup_abs + 0.5 * h.sup_abs;
    auto spec = make_operator_spec(OperatorVariant::ConvKantorovichScaled, m_dilate(), 5.0);
    for (double z : {-0.4, 0.3, 1.1}) {
        const double lhs = apply(spec, combo, z);
        const double rhs = 2.0 * apply(spec, f1, z) - 0.5 * apply(spec, h, z);
        CHECK(lhs == doctest::Approx(rhs).epsilon(2e-9));
    }
}

TEST_CASE("translation and dilation covariance") {
    const Signal h = hat();
    const double a = 0.75;
    Signal shifted;
    shifted.eval = [&, a](double x) { return h.eval(x - a); };
    for (double b : h.breakpoints) shifted.breakpoints.push_back(b + a);
    shifted.sup_abs = h.sup_abs;
    auto spec = make_operator_spec(OperatorVariant::ConvKantorovichScaled, m_dilate(), 8.0);
    for (double z : {-0.2, 0.5, 1.3})
        CHECK(apply(spec, shifted, z + a) == doctest::Approx(apply(spec, h, z)).epsilon(1e-8));

    // Mellin: group operation is multiplication.
    const Signal f3 = Signal::from_piecewise(dsl::PiecewiseFunction::preset_f3());
    const double s = 1.7;
    Signal dilated;
    dilated.eval = [&, s](double x) { return f3.eval(x / s); };
    for (double b : f3.breakpoints) dilated.breakpoints.push_back(b * s);
    dilated.sup_abs = f3.sup_abs;
    auto mel = make_operator_spec(OperatorVariant::MellinKantorovich, mellin_family(), 10.0);
    for (double z : {0.8, 2.5, 5.0})
        CHECK(apply(mel, dilated, z * s) == doctest::Approx(apply(mel, f3, z)).epsilon(1e-7));
}

TEST_CASE("sup bound against the audited moment") {
    const Signal f1 = Signal::from_piecewise(dsl::PiecewiseFunction::preset_f1());
    auto spec = make_operator_spec(OperatorVariant::ConvKantorovichScaled, m_dilate(), 10.0);
    std::vector<double> grid;
    for (int i = 0; i <= 80; ++i) grid.push_back(-4.0 + 0.1 * i);
    const auto res = apply_grid(spec, f1, grid);
    const auto chi3 = audit_chi3(spec.kernel_family, spec.cell_family, {10.0});
    double sup = 0.0;
    for (double v : res.values) sup = std::max(sup, std::abs(v));
    CHECK(sup <= f1.sup_abs * (chi3.bound + 1e-6));
}

TEST_CASE("multidimensional tensor consistency") {
    const Signal g = hat();
    const Signal2 f = Signal2::tensor(g, g);
    const double w = 6.0;
    auto spec2 = make_operator_spec(OperatorVariant::MultiDimSamplingKantorovich, m_dilate(),
                                    w, SampleSequence::uniform(), 2);
    auto spec1 = make_operator_spec(OperatorVariant::SamplingKantorovich, m_dilate(), w);
    for (double z1 : {-0.3, 0.4})
        for (double z2 : {0.1, 0.8}) {
            const double product = apply(spec1, g, z1) * apply(spec1, g, z2);
            CHECK(apply2(spec2, f, z1, z2) == doctest::Approx(product).epsilon(1e-7));
        }
    const Signal2 one2 = Signal2::tensor(Signal::constant(1.0), Signal::constant(1.0));
    CHECK(apply2(spec2, one2, 0.37, -1.2) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("classical comparators") {
    // Classical sampling of a constant: partition of unity.
    auto sym = make_operator_spec(OperatorVariant::SamplingKantorovichSymmetric, m_dilate(), 7.0);
    CHECK(classical_comparator(sym, Signal::constant(1.0), 0.4) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // C_w of a constant with a normalized mollifier.
    KernelFamily m3{make_bspline_kernel(3), KernelFamily::Scaling::DilateAndWeight};
    auto cu = make_operator_spec(OperatorVariant::ConvKantorovichUnit, m3, 9.0);
    CHECK(classical_comparator(cu, Signal::constant(2.5), 0.0) ==
          doctest::Approx(2.5).epsilon(1e-9));

    // Kantorovich-vs-classical gap shrinks for a Lipschitz signal.
    const Signal h = hat();
    auto gap_at = [&](double w) {
        auto spec = make_operator_spec(OperatorVariant::ConvKantorovichUnit, m_weighted(), w);
        double gap = 0.0;
        for (double z : {-0.5, 0.0, 0.4, 0.9})
            gap = std::max(gap, std::abs(apply(spec, h, z) - classical_comparator(spec, h, z)));
        return gap;
    };
    const double g5 = gap_at(5.0), g10 = gap_at(10.0), g20 = gap_at(20.0), g40 = gap_at(40.0);
    CHECK(g10 < g5);
    CHECK(g20 < g10);
    CHECK(g40 < g20);
}

TEST_CASE("Mellin mean prefactor") {
    CHECK(mellin_mean_prefactor(1.0) == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-12));
    CHECK(std::abs(mellin_mean_prefactor(1000.0) - 1.0) < 5e-4);
    double prev = mellin_mean_prefactor(1.0);
    for (double w = 2.0; w <= 1000.0; w += 7.0) {
        const double cur = mellin_mean_prefactor(w);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("validation errors") {
    auto spec = make_operator_spec(OperatorVariant::MellinKantorovich, mellin_family(), 5.0);
    CHECK_THROWS_AS(apply(spec, Signal::constant(1.0), -1.0), InvalidInput);
    spec.w = -1.0;
    CHECK_THROWS_AS(spec.validate(), InvalidInput);
    auto bad = make_operator_spec(OperatorVariant::ConvKantorovichScaled, mellin_family(), 5.0);
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    CHECK_THROWS_AS(Signal::interpolant({0.0, 0.0}, {1.0, 2.0}), InvalidInput);
}
