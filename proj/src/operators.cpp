#include "kanto/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "kanto/errors.hpp"
#include "kanto/quadrature.hpp"

namespace kanto {

Signal Signal::constant(double c) {
    Signal s;
    s.eval = [c](double) { return c; };
    s.sup_abs = std::abs(c);
    return s;
}

Signal Signal::from_piecewise(const dsl::PiecewiseFunction& f) {
    Signal s;
    s.eval = [f](double x) { return f.eval(x); };
    s.breakpoints = f.breakpoints();
    s.sup_abs = f.sup_abs_estimate();
    return s;
}

Signal Signal::interpolant(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() != values.size() || grid.size() < 2)
        throw InvalidInput("Signal::interpolant: need matching grid/values with >= 2 points");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw InvalidInput("Signal::interpolant: grid must be strictly increasing");
    Signal s;
    s.breakpoints = grid;
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    s.sup_abs = m;
    s.eval = [g = std::move(grid), v = std::move(values)](double x) {
        if (x < g.front() || x > g.back()) return 0.0;
        auto it = std::upper_bound(g.begin(), g.end(), x);
        if (it == g.end()) return v.back();
        if (it == g.begin()) return v.front();
        const size_t i = static_cast<size_t>(it - g.begin());
        const double t = (x - g[i - 1]) / (g[i] - g[i - 1]);
        return v[i - 1] + t * (v[i] - v[i - 1]);
    };
    return s;
}

Signal2 Signal2::tensor(const Signal& gx, const Signal& gy) {
    Signal2 s;
    s.eval = [fx = gx.eval, fy = gy.eval](double x, double y) { return fx(x) * fy(y); };
    s.breakpoints_x = gx.breakpoints;
    s.breakpoints_y = gy.breakpoints;
    s.sup_abs = gx.sup_abs * gy.sup_abs;
    return s;
}

double mellin_mean_prefactor(double w) {
    if (!(w > 0.0)) throw InvalidInput("mellin_mean_prefactor: w must be positive");
    return (1.0 / w) / std::log1p(1.0 / w);
}

namespace {

CellFamily::Rule expected_rule(OperatorVariant v) {
    switch (v) {
        case OperatorVariant::SamplingKantorovich: return CellFamily::Rule::Sampling;
        case OperatorVariant::SamplingKantorovichSymmetric:
        case OperatorVariant::ClassicalSampling: return CellFamily::Rule::SamplingSymmetric;
        case OperatorVariant::ConvKantorovichScaled: return CellFamily::Rule::ConvScaled;
        case OperatorVariant::ConvKantorovichUnit:
        case OperatorVariant::ClassicalConvolution: return CellFamily::Rule::ConvUnit;
        case OperatorVariant::MellinKantorovich:
        case OperatorVariant::ClassicalMellin: return CellFamily::Rule::Mellin;
        case OperatorVariant::MultiDimSamplingKantorovich:
            return CellFamily::Rule::MultiDimSampling;
    }
    throw InvalidInput("unknown operator variant");
}

// Effective support [lo, hi] of an additive kernel: exact for compact
// kernels, tail-certified at mass <= tol otherwise.
struct SupportWindow {
    double lo, hi, radius;
};

SupportWindow additive_support(const Kernel& kw, double mass_tol) {
    if (kw.compact)
        return {kw.lo, kw.hi, std::max(std::abs(kw.lo), std::abs(kw.hi))};
    const double r = truncation_radius(kw, mass_tol);
    return {-r, r, r};
}

// Truncation mass tolerance so the discarded part is below quad_tol even
// after multiplying by sup|f| and any kernel weight.
double mass_tolerance(const OperatorSpec& spec, const Signal& f, double weight) {
    const double tol = std::max(spec.quad_tol, 1e-12);
    return tol / (weight * std::max(1.0, f.sup_abs));
}

void push_breaks_in(std::vector<double>& out, const std::vector<double>& candidates,
                    double a, double b) {
    for (double x : candidates)
        if (x > a && x < b) out.push_back(x);
}

using MeanCache = std::unordered_map<long, double>;

// Discrete Kantorovich settings (1) and (1,1): sum of chi_w(z - h_w(k))
// times the mean of f over B_w(k).
double apply_discrete(const OperatorSpec& spec, const Signal& f, double z,
                      const Kernel& kw, MeanCache* cache) {
    const double inner_tol = 0.1 * spec.quad_tol;
    auto cell_mean = [&](long k) {
        if (cache) {
            auto it = cache->find(k);
            if (it != cache->end()) return it->second;
        }
        const double m =
            mean_value(f.eval, spec.cell_family.cell(spec.w, k), inner_tol, f.breakpoints);
        if (cache) cache->emplace(k, m);
        return m;
    };
    double sum = 0.0;
    auto add = [&](long k, double a) {
        const double v = kw.eval(z - a);
        if (v != 0.0) sum += v * cell_mean(k);
    };
    if (kw.compact) {
        visit_anchor_window(spec.cell_family, spec.w, z - kw.hi, z - kw.lo, add);
        return sum;
    }
    const double mtol = mass_tolerance(spec, f, 1.0);
    double radius = 16.0;
    while (lattice_tail_bound(kw, spec.cell_family, spec.w, radius) > mtol) {
        radius *= 2.0;
        if (radius > 1e12)
            throw NumericError("apply: lattice truncation never certified", sum,
                               lattice_tail_bound(kw, spec.cell_family, spec.w, radius));
    }
    visit_anchor_window(spec.cell_family, spec.w, z - radius, z + radius, add);
    return sum;
}

// Setting (2): integral over t of chi_w(z - t/w) * mean of f over
// [(t-1)/w, (t+1)/w].
double apply_conv_scaled(const OperatorSpec& spec, const Signal& f, double z,
                         const Kernel& kw) {
    const double w = spec.w;
    const SupportWindow sup = additive_support(kw, mass_tolerance(spec, f, w));
    const double a = w * (z - sup.hi), b = w * (z - sup.lo);
    const double inner_tol = 0.1 * spec.quad_tol;

    IntegrationRequest req;
    req.a = a;
    req.b = b;
    req.tolerance = spec.quad_tol;
    for (double knot : kw.knots) req.breakpoints.push_back(w * (z - knot));
    for (double bk : f.breakpoints) {
        req.breakpoints.push_back(w * bk + 1.0);
        req.breakpoints.push_back(w * bk - 1.0);
    }
    req.integrand = [&](double t) {
        const double v = kw.eval(z - t / w);
        if (v == 0.0) return 0.0;
        Cell cell = spec.cell_family.cell(w, t);
        return v * mean_value(f.eval, cell, inner_tol, f.breakpoints);
    };
    return integrate(req);
}

// Setting (3): integral over t of chi_w(z - t) * mean over [t-1/w, t+1/w].
double apply_conv_unit(const OperatorSpec& spec, const Signal& f, double z,
                       const Kernel& kw) {
    const double w = spec.w;
    const SupportWindow sup = additive_support(kw, mass_tolerance(spec, f, 1.0));
    const double a = z - sup.hi, b = z - sup.lo;
    const double inner_tol = 0.1 * spec.quad_tol;

    IntegrationRequest req;
    req.a = a;
    req.b = b;
    req.tolerance = spec.quad_tol;
    for (double knot : kw.knots) req.breakpoints.push_back(z - knot);
    for (double bk : f.breakpoints) {
        req.breakpoints.push_back(bk + 1.0 / w);
        req.breakpoints.push_back(bk - 1.0 / w);
    }
    req.integrand = [&](double t) {
        const double v = kw.eval(z - t);
        if (v == 0.0) return 0.0;
        Cell cell = spec.cell_family.cell(w, t);
        return v * mean_value(f.eval, cell, inner_tol, f.breakpoints);
    };
    return integrate(req);
}

// Effective ratio support [lo, hi] of an R+ kernel: exact when the support
// is bounded away from 0 and infinity, tail-certified otherwise.
SupportWindow ratio_support(const Kernel& kw, double mass_tol) {
    double lo = kw.lo, hi = kw.hi;
    if (!(lo > 0.0) || !std::isfinite(hi)) {
        if (!kw.ratio_tail_mass)
            throw InvalidInput("operator: R+ kernel needs a ratio tail bound");
        double r = 2.0;
        while (kw.ratio_tail_mass(r) > mass_tol) {
            r *= 2.0;
            if (r > 1e300)
                throw NumericError("operator: ratio truncation never certified", 0.0,
                                   kw.ratio_tail_mass(r));
        }
        lo = std::max(lo, 1.0 / r);
        hi = std::min(hi, r);
    }
    return {lo, hi, hi / lo};
}

// Setting (4): integral over t (log measure) of chi_w(z/t) * mean of f
// over [t w/(w+1), t (w+1)/w] with the log measure.
double apply_mellin(const OperatorSpec& spec, const Signal& f, double z,
                    const Kernel& kw) {
    if (!(z > 0.0)) throw InvalidInput("apply: Mellin operator needs z > 0");
    const double w = spec.w;
    const SupportWindow sup = ratio_support(kw, mass_tolerance(spec, f, 1.0));
    const double a = z / sup.hi, b = z / sup.lo;
    const double inner_tol = 0.1 * spec.quad_tol;

    IntegrationRequest req;
    req.a = a;
    req.b = b;
    req.measure = Measure::Logarithmic;
    req.tolerance = spec.quad_tol;
    for (double knot : kw.knots)
        if (knot > 0.0) req.breakpoints.push_back(z / knot);
    for (double bk : f.breakpoints) {
        if (!(bk > 0.0)) continue;
        req.breakpoints.push_back(bk * (w + 1.0) / w);
        req.breakpoints.push_back(bk * w / (w + 1.0));
    }
    req.integrand = [&](double t) {
        const double v = kw.eval(z / t);
        if (v == 0.0) return 0.0;
        Cell cell = spec.cell_family.cell(w, t);
        return v * mean_value(f.eval, cell, inner_tol, f.breakpoints);
    };
    return integrate(req);
}

double classical_eval(const OperatorSpec& spec, const Signal& f, double z,
                      const Kernel& kw) {
    const double w = spec.w;
    switch (spec.variant) {
        case OperatorVariant::ClassicalSampling: {
            double sum = 0.0;
            auto add = [&](long, double a) { sum += kw.eval(z - a) * f.eval(a); };
            if (kw.compact) {
                visit_anchor_window(spec.cell_family, w, z - kw.hi, z - kw.lo, add);
                return sum;
            }
            const double mtol = mass_tolerance(spec, f, 1.0);
            double radius = 16.0;
            while (lattice_tail_bound(kw, spec.cell_family, w, radius) > mtol) radius *= 2.0;
            visit_anchor_window(spec.cell_family, w, z - radius, z + radius, add);
            return sum;
        }
        case OperatorVariant::ClassicalConvolution: {
            const SupportWindow sup = additive_support(kw, mass_tolerance(spec, f, 1.0));
            IntegrationRequest req;
            req.a = z - sup.hi;
            req.b = z - sup.lo;
            req.tolerance = spec.quad_tol;
            for (double knot : kw.knots) req.breakpoints.push_back(z - knot);
            push_breaks_in(req.breakpoints, f.breakpoints, req.a, req.b);
            req.integrand = [&](double t) { return kw.eval(z - t) * f.eval(t); };
            return integrate(req);
        }
        case OperatorVariant::ClassicalMellin: {
            if (!(z > 0.0)) throw InvalidInput("classical Mellin needs z > 0");
            const SupportWindow sup = ratio_support(kw, mass_tolerance(spec, f, 1.0));
            IntegrationRequest req;
            req.a = z / sup.hi;
            req.b = z / sup.lo;
            req.measure = Measure::Logarithmic;
            req.tolerance = spec.quad_tol;
            for (double knot : kw.knots)
                if (knot > 0.0) req.breakpoints.push_back(z / knot);
            push_breaks_in(req.breakpoints, f.breakpoints, req.a, req.b);
            req.integrand = [&](double t) { return kw.eval(z / t) * f.eval(t); };
            return integrate(req);
        }
        default:
            throw InvalidInput("classical_eval: not a classical variant");
    }
}

double apply_impl(const OperatorSpec& spec, const Signal& f, double z, const Kernel& kw,
                  MeanCache* cache) {
    if (!std::isfinite(z)) throw InvalidInput("apply: evaluation point must be finite");
    switch (spec.variant) {
        case OperatorVariant::SamplingKantorovich:
        case OperatorVariant::SamplingKantorovichSymmetric:
            return apply_discrete(spec, f, z, kw, cache);
        case OperatorVariant::ConvKantorovichScaled:
            return apply_conv_scaled(spec, f, z, kw);
        case OperatorVariant::ConvKantorovichUnit:
            return apply_conv_unit(spec, f, z, kw);
        case OperatorVariant::MellinKantorovich:
            return apply_mellin(spec, f, z, kw);
        case OperatorVariant::MultiDimSamplingKantorovich:
            throw InvalidInput("apply: multidimensional variant needs apply2");
        case OperatorVariant::ClassicalSampling:
        case OperatorVariant::ClassicalConvolution:
        case OperatorVariant::ClassicalMellin:
            return classical_eval(spec, f, z, kw);
    }
    throw InvalidInput("apply: unknown variant");
}

} // namespace

void OperatorSpec::validate() const {
    if (!(w > 0.0)) throw InvalidInput("operator spec: w must be positive");
    if (!(quad_tol > 0.0)) throw InvalidInput("operator spec: tolerance must be positive");
    if (cell_family.rule != expected_rule(variant))
        throw InvalidInput("operator spec: cell family does not match the variant");
    const bool mellin = variant == OperatorVariant::MellinKantorovich ||
                        variant == OperatorVariant::ClassicalMellin;
    const bool kernel_multiplicative =
        kernel_family.scaling == KernelFamily::Scaling::MellinPower ||
        kernel_family.base.space.multiplicative();
    if (mellin != kernel_multiplicative)
        throw InvalidInput("operator spec: kernel group does not match the variant");
    if (variant == OperatorVariant::MultiDimSamplingKantorovich) {
        if (dim < 2 || dim != cell_family.dim)
            throw InvalidInput("operator spec: dimension mismatch");
    }
}

double apply(const OperatorSpec& spec, const Signal& f, double z) {
    spec.validate();
    const Kernel kw = spec.kernel_family.at(spec.w);
    return apply_impl(spec, f, z, kw, nullptr);
}

double apply2(const OperatorSpec& spec, const Signal2& f, double z1, double z2) {
    spec.validate();
    if (spec.variant != OperatorVariant::MultiDimSamplingKantorovich)
        throw InvalidInput("apply2: variant is not multidimensional");
    if (!std::isfinite(z1) || !std::isfinite(z2))
        throw InvalidInput("apply2: evaluation point must be finite");
    const Kernel kw = spec.kernel_family.at(spec.w);
    if (!kw.compact)
        throw InvalidInput("apply2: multidimensional evaluation needs a compact kernel");
    const double inner_tol = 0.1 * spec.quad_tol;

    std::vector<std::pair<long, double>> k1s, k2s;
    visit_anchor_window(spec.cell_family, spec.w, z1 - kw.hi, z1 - kw.lo,
                        [&](long k, double a) { k1s.emplace_back(k, a); });
    visit_anchor_window(spec.cell_family, spec.w, z2 - kw.hi, z2 - kw.lo,
                        [&](long k, double a) { k2s.emplace_back(k, a); });
    double sum = 0.0;
    for (const auto& [k1, a1] : k1s) {
        const double v1 = kw.eval(z1 - a1);
        if (v1 == 0.0) continue;
        for (const auto& [k2, a2] : k2s) {
            const double v2 = kw.eval(z2 - a2);
            if (v2 == 0.0) continue;
            Cell box = spec.cell_family.cell(spec.w, std::vector<long>{k1, k2});
            sum += v1 * v2 *
                   mean_value2(f.eval, box, inner_tol, f.breakpoints_x, f.breakpoints_y);
        }
    }
    return sum;
}

EvaluationResult apply_grid(const OperatorSpec& spec, const Signal& f,
                            const std::vector<double>& grid) {
    spec.validate();
    if (grid.empty()) throw InvalidInput("apply_grid: empty grid");
    const Kernel kw = spec.kernel_family.at(spec.w);

    EvaluationResult res;
    res.grid = grid;
    res.quad_tol = spec.quad_tol;
    if (kw.compact)
        res.truncation_radius = std::max(std::abs(kw.lo), std::abs(kw.hi));
    else if (kw.has_tail_bound())
        res.truncation_radius = truncation_radius(kw, mass_tolerance(spec, f, 1.0));

    MeanCache cache;
    const bool cacheable = spec.variant == OperatorVariant::SamplingKantorovich ||
                           spec.variant == OperatorVariant::SamplingKantorovichSymmetric;
    res.values.reserve(grid.size());
    for (double z : grid)
        res.values.push_back(apply_impl(spec, f, z, kw, cacheable ? &cache : nullptr));
    return res;
}

double classical_comparator(const OperatorSpec& spec, const Signal& f, double z) {
    OperatorSpec cls = spec;
    switch (spec.variant) {
        case OperatorVariant::SamplingKantorovichSymmetric:
        case OperatorVariant::ClassicalSampling:
            cls.variant = OperatorVariant::ClassicalSampling;
            break;
        case OperatorVariant::ConvKantorovichUnit:
        case OperatorVariant::ClassicalConvolution:
            cls.variant = OperatorVariant::ClassicalConvolution;
            break;
        case OperatorVariant::MellinKantorovich:
        case OperatorVariant::ClassicalMellin:
            cls.variant = OperatorVariant::ClassicalMellin;
            break;
        default:
            throw InvalidInput("classical_comparator: no classical counterpart for variant");
    }
    cls.validate();
    const Kernel kw = cls.kernel_family.at(cls.w);
    return classical_eval(cls, f, z, kw);
}

OperatorSpec make_operator_spec(OperatorVariant variant, KernelFamily kernels, double w,
                                SampleSequence samples, int dim) {
    OperatorSpec spec;
    spec.variant = variant;
    spec.kernel_family = std::move(kernels);
    spec.w = w;
    switch (variant) {
        case OperatorVariant::SamplingKantorovich:
            spec.cell_family = CellFamily::sampling(samples);
            break;
        case OperatorVariant::SamplingKantorovichSymmetric:
        case OperatorVariant::ClassicalSampling:
            // Classical-sampling setup: nodes t_k/w so the spacing shrinks
            // with w; required for the partition of unity with chi(w u).
            spec.cell_family = CellFamily::sampling_symmetric_scaled(samples);
            break;
        case OperatorVariant::ConvKantorovichScaled:
            spec.cell_family = CellFamily::conv_scaled();
            break;
        case OperatorVariant::ConvKantorovichUnit:
        case OperatorVariant::ClassicalConvolution:
            spec.cell_family = CellFamily::conv_unit();
            break;
        case OperatorVariant::MellinKantorovich:
        case OperatorVariant::ClassicalMellin:
            spec.cell_family = CellFamily::mellin();
            break;
        case OperatorVariant::MultiDimSamplingKantorovich:
            spec.cell_family = CellFamily::multidim_sampling(dim, samples);
            spec.dim = dim;
            break;
    }
    return spec;
}

} // namespace kanto
