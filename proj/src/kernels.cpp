#include "kanto/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kanto/quadrature.hpp"

namespace kanto {
namespace {

constexpr double kPi = std::numbers::pi;

double binom(int n, int j) {
    double c = 1.0;
    for (int i = 1; i <= j; ++i) c = c * (n - j + i) / i;
    return c;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double truncated_power(double t, int e) {
    if (t <= 0.0) return 0.0;
    return e == 0 ? 1.0 : std::pow(t, e);
}

} // namespace

double bspline_eval(int n, double x) {
    if (n < 1 || n > 10) throw InvalidInput("bspline_eval: order must be in [1,10]");
    if (std::abs(x) >= 0.5 * n) return 0.0;
    double s = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double term = binom(n, j) * truncated_power(0.5 * n + x - j, n - 1);
        s += (j % 2 == 0) ? term : -term;
    }
    return s / factorial(n - 1);
}

double combo_kernel_eval(double x) {
    return 4.0 * bspline_eval(3, x) - 3.0 * bspline_eval(4, x);
}

double sinc_eval(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

double fejer_eval(double x) {
    const double s = sinc_eval(0.5 * x);
    return 0.5 * s * s;
}

double mellin_kernel_eval(double w, double u) {
    if (!(w > 0.0)) throw InvalidInput("mellin_kernel_eval: w must be positive");
    if (!(u > 0.0)) throw InvalidInput("mellin_kernel_eval: u must be positive");
    if (u >= 1.0) return 0.0;
    return w * std::pow(u, w);
}

bool Kernel::has_tail_bound() const {
    if (compact) return true;
    if (space.multiplicative()) return static_cast<bool>(ratio_tail_mass);
    return std::isfinite(tail_invsq) || static_cast<bool>(tail_mass);
}

Kernel make_bspline_kernel(int n) {
    if (n < 1 || n > 10) throw InvalidInput("make_bspline_kernel: order must be in [1,10]");
    Kernel k;
    k.eval = [n](double x) { return bspline_eval(n, x); };
    k.lo = -0.5 * n;
    k.hi = 0.5 * n;
    for (int j = 1; j < n; ++j) k.knots.push_back(-0.5 * n + j);
    return k;
}

Kernel make_combo_kernel() {
    Kernel k;
    k.eval = [](double x) { return combo_kernel_eval(x); };
    k.lo = -2.0;
    k.hi = 2.0;
    k.knots = {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5};
    return k;
}

Kernel make_fejer_kernel() {
    Kernel k;
    k.eval = [](double x) { return fejer_eval(x); };
    k.compact = false;
    k.lo = -std::numeric_limits<double>::infinity();
    k.hi = std::numeric_limits<double>::infinity();
    k.tail_invsq = 2.0 / (kPi * kPi);
    k.tail_mass = [](double r) { return 4.0 / (kPi * kPi * r); };
    // Integrating (1-cos(pi x))/(pi^2 x^2) by parts: the oscillatory part of
    // the tail is O(1/R^2), so the 1/(pi^2 R) term per side is an estimate
    // with a certified remainder.
    k.tail_estimate = [](double r) { return 2.0 / (kPi * kPi * r); };
    k.tail_estimate_err = [](double r) { return 4.0 / (kPi * kPi * kPi * r * r); };
    k.osc_period = 2.0;
    return k;
}

Kernel make_mellin_kernel(double w) {
    if (!(w > 0.0)) throw InvalidInput("make_mellin_kernel: w must be positive");
    Kernel k;
    k.space = GroupSpace::positive_reals();
    k.eval = [w](double u) { return mellin_kernel_eval(w, u); };
    k.compact = false;
    k.lo = 0.0;
    k.hi = 1.0;
    // Mass (log measure) below 1/R is exactly R^-w; nothing lives above 1.
    k.ratio_tail_mass = [w](double r) { return std::pow(r, -w); };
    k.ratio_tail_exact = true;
    return k;
}

Kernel make_custom_kernel(std::function<double(double)> eval, double lo, double hi,
                          std::vector<double> knots) {
    if (!(lo < hi)) throw InvalidInput("make_custom_kernel: requires lo < hi");
    Kernel k;
    k.eval = [eval = std::move(eval), lo, hi](double x) {
        return (x <= lo || x >= hi) ? 0.0 : eval(x);
    };
    k.lo = lo;
    k.hi = hi;
    k.knots = std::move(knots);
    return k;
}

double truncation_radius(const Kernel& k, double tol) {
    if (k.compact) return 0.0;
    if (!(tol > 0.0)) throw InvalidInput("truncation_radius: tolerance must be positive");
    const auto& mass = k.space.multiplicative() ? k.ratio_tail_mass : k.tail_mass;
    std::function<double(double)> bound = mass;
    if (!bound && std::isfinite(k.tail_invsq)) {
        const double c = k.tail_invsq;
        bound = [c](double r) { return 2.0 * c / r; };
    }
    if (!bound) throw InvalidInput("truncation_radius: kernel declares no tail bound");
    double r = k.space.multiplicative() ? 2.0 : 16.0;
    while (bound(r) > tol) {
        r *= 2.0;
        if (r > 1e12)
            throw NumericError("truncation_radius: tail bound never reaches tolerance", r, bound(r));
    }
    return r;
}

namespace {

std::vector<double> oscillation_breaks(const Kernel& k, double a, double b) {
    std::vector<double> breaks = k.knots;
    if (k.osc_period > 0.0) {
        double stride = k.osc_period;
        while ((b - a) / stride > 20000.0) stride *= 2.0;
        for (double x = std::ceil(a / stride) * stride; x < b; x += stride)
            breaks.push_back(x);
    }
    return breaks;
}

double integrate_additive(const Kernel& k, double a, double b, bool absolute, double tol) {
    if (!(a < b)) return 0.0;
    auto f = absolute ? std::function<double(double)>([&k](double x) { return std::abs(k.eval(x)); })
                      : std::function<double(double)>(k.eval);
    IntegrationRequest req;
    req.integrand = std::move(f);
    req.a = a;
    req.b = b;
    req.breakpoints = oscillation_breaks(k, a, b);
    req.tolerance = tol;
    return integrate(req);
}

double integrate_log(const Kernel& k, double a, double b, bool absolute, double tol) {
    if (!(a < b)) return 0.0;
    auto f = absolute ? std::function<double(double)>([&k](double u) { return std::abs(k.eval(u)); })
                      : std::function<double(double)>(k.eval);
    IntegrationRequest req;
    req.integrand = std::move(f);
    req.a = a;
    req.b = b;
    req.measure = Measure::Logarithmic;
    req.breakpoints = k.knots;
    req.tolerance = tol;
    return integrate(req);
}

// Truncation radius for an unbounded additive kernel when the accurate tail
// estimate is available; the estimate itself is added back by the caller.
double estimate_radius(const Kernel& k, double tol) {
    double r = 16.0;
    while (k.tail_estimate_err(r) > tol) {
        r *= 2.0;
        if (r > 1e12) throw NumericError("kernel tail estimate never reaches tolerance", r, tol);
    }
    return r;
}

} // namespace

double kernel_integral(const Kernel& k, bool absolute, double tol) {
    if (!k.eval) throw InvalidInput("kernel_integral: kernel has no evaluator");
    if (k.space.multiplicative()) {
        double a = k.lo, b = k.hi;
        double correction = 0.0;
        if (!(a > 0.0) || !std::isfinite(b)) {
            if (!k.ratio_tail_mass)
                throw InvalidInput("kernel_integral: R+ kernel needs a ratio tail bound");
            double r = 2.0;
            while (k.ratio_tail_mass(r) > 0.5 * tol) {
                r *= 2.0;
                if (r > 1e300) throw NumericError("kernel_integral: tail never certified", r, tol);
            }
            if (k.ratio_tail_exact) correction = k.ratio_tail_mass(r);
            a = std::max(a, 1.0 / r);
            b = std::min(b, r);
        }
        return integrate_log(k, a, b, absolute, tol) + correction;
    }
    if (k.compact) return integrate_additive(k, k.lo, k.hi, absolute, tol);
    if (!k.has_tail_bound())
        throw InvalidInput("kernel_integral: unbounded support without a tail bound");
    if (k.tail_estimate && k.tail_estimate_err) {
        const double r = estimate_radius(k, 0.5 * tol);
        return integrate_additive(k, -r, r, absolute, tol) + k.tail_estimate(r);
    }
    const double r = truncation_radius(k, tol);
    return integrate_additive(k, -r, r, absolute, tol);
}

double kernel_l1_norm(const Kernel& k, double tol) {
    return kernel_integral(k, true, tol);
}

Kernel KernelFamily::at(double w) const {
    if (!(w > 0.0)) throw InvalidInput("KernelFamily::at: w must be positive");
    switch (scaling) {
        case Scaling::Unscaled:
            return base;
        case Scaling::MellinPower:
            return make_mellin_kernel(w);
        case Scaling::DilateArgument:
        case Scaling::DilateAndWeight: {
            if (base.space.multiplicative())
                throw InvalidInput("KernelFamily::at: dilation scalings apply to additive kernels");
            const double weight = scaling == Scaling::DilateAndWeight ? w : 1.0;
            Kernel k;
            k.space = base.space;
            auto b = base.eval;
            k.eval = [b, w, weight](double u) { return weight * b(w * u); };
            k.compact = base.compact;
            k.lo = base.lo / w;
            k.hi = base.hi / w;
            k.knots.reserve(base.knots.size());
            for (double x : base.knots) k.knots.push_back(x / w);
            if (std::isfinite(base.tail_invsq)) k.tail_invsq = base.tail_invsq * weight / (w * w);
            if (base.tail_mass) {
                auto tm = base.tail_mass;
                k.tail_mass = [tm, w, weight](double r) { return weight * tm(w * r) / w; };
            }
            if (base.tail_estimate) {
                auto te = base.tail_estimate;
                k.tail_estimate = [te, w, weight](double r) { return weight * te(w * r) / w; };
            }
            if (base.tail_estimate_err) {
                auto te = base.tail_estimate_err;
                k.tail_estimate_err = [te, w, weight](double r) { return weight * te(w * r) / w; };
            }
            k.osc_period = base.osc_period / w;
            return k;
        }
    }
    throw InvalidInput("KernelFamily::at: unknown scaling");
}

namespace {

// Minimum anchor spacing of a discrete family.
double anchor_spacing(const CellFamily& cells, double w) {
    switch (cells.rule) {
        case CellFamily::Rule::Sampling:
        case CellFamily::Rule::MultiDimSampling:
            return cells.samples.delta / w;
        case CellFamily::Rule::SamplingSymmetric:
            return cells.scale_by_w ? cells.samples.delta / w : cells.samples.delta;
        default:
            throw InvalidInput("anchor_spacing: rule is not discrete");
    }
}

double anchor_at(const CellFamily& cells, double w, long k) {
    if (cells.rule == CellFamily::Rule::MultiDimSampling)
        return cells.samples.point(k) / w;
    return cells.anchor(w, k);
}

// Visits every k whose anchor lies in [lo, hi] (anchors are increasing).
template <class F>
void for_anchors_in(const CellFamily& cells, double w, double lo, double hi, F&& visit) {
    if (!(lo <= hi)) return;
    const double avg = 0.5 * (cells.samples.delta + cells.samples.big_delta);
    const bool unscaled =
        cells.rule == CellFamily::Rule::SamplingSymmetric && !cells.scale_by_w;
    const double step = unscaled ? avg : avg / w;
    long k = static_cast<long>(std::llround(lo / step));
    while (anchor_at(cells, w, k) > lo) --k;
    while (anchor_at(cells, w, k) < lo) ++k;
    for (; anchor_at(cells, w, k) <= hi; ++k) visit(k, anchor_at(cells, w, k));
}

// Sum over the index lattice of chi_w(z - anchor(k)), optionally absolute,
// optionally restricted to |z - anchor(k)| > exclude_within.
double lattice_sum(const Kernel& kw, const CellFamily& cells, double w, double z,
                   bool absolute, double exclude_within, double tol) {
    double sum = 0.0;
    auto add = [&](long, double a) {
        const double arg = z - a;
        if (exclude_within >= 0.0 && std::abs(arg) <= exclude_within) return;
        const double v = kw.eval(arg);
        sum += absolute ? std::abs(v) : v;
    };
    if (kw.compact) {
        for_anchors_in(cells, w, z - kw.hi, z - kw.lo, add);
        return sum;
    }
    if (!std::isfinite(kw.tail_invsq))
        throw InvalidInput("lattice_sum: unbounded kernel without a pointwise tail bound");
    const double d = anchor_spacing(cells, w);
    const double c = kw.tail_invsq;
    double radius = std::max(16.0 * d, 2.0 * std::max(exclude_within, 0.0));
    const bool estimated = kw.tail_estimate && kw.tail_estimate_err;
    auto residual = [&](double r) {
        // Terms beyond distance r: one term within each spacing-d slot.
        const double crude = 2.0 * (c / (r * r) + c / (d * r));
        if (!estimated) return crude;
        return kw.tail_estimate_err(r) / d + 2.0 * c / (r * r);
    };
    while (residual(radius) > tol) {
        radius *= 2.0;
        if (radius / d > 2e7)
            throw NumericError("lattice_sum: truncation never certified", sum, residual(radius));
    }
    for_anchors_in(cells, w, z - radius, z + radius, add);
    if (estimated) sum += kw.tail_estimate(radius) / d;
    return sum;
}

// One-sided mass of |chi_w| over {s > x0} (above) or {s < x0}. Assumes an
// even kernel when splitting the two-sided tail estimate.
double kernel_mass_beyond(const Kernel& kw, double x0, bool above, double tol) {
    if (kw.compact) {
        if (above) return integrate_additive(kw, std::max(x0, kw.lo), kw.hi, true, tol);
        return integrate_additive(kw, kw.lo, std::min(x0, kw.hi), true, tol);
    }
    if (!kw.has_tail_bound())
        throw InvalidInput("kernel_mass_beyond: unbounded support without a tail bound");
    const bool estimated = kw.tail_estimate && kw.tail_estimate_err;
    const double r = estimated ? estimate_radius(kw, tol) : truncation_radius(kw, tol);
    double v = above ? integrate_additive(kw, std::max(x0, -r), r, true, tol)
                     : integrate_additive(kw, -r, std::min(x0, r), true, tol);
    if (estimated) v += 0.5 * kw.tail_estimate(r);
    return v;
}

// Mass (log measure) of |chi_w| over {u > r0} (above) or {u < r0} on R+.
double kernel_ratio_mass_beyond(const Kernel& kw, double r0, bool above, double tol) {
    double a = kw.lo, b = kw.hi;
    double correction = 0.0;
    if (!(a > 0.0) || !std::isfinite(b)) {
        if (!kw.ratio_tail_mass)
            throw InvalidInput("kernel_ratio_mass_beyond: missing ratio tail bound");
        double r = std::max(2.0, 2.0 * r0);
        while (kw.ratio_tail_mass(r) > 0.5 * tol) r *= 2.0;
        if (kw.ratio_tail_exact && !above) correction = kw.ratio_tail_mass(r);
        a = std::max(a, 1.0 / r);
        b = std::min(b, r);
    }
    if (above) return integrate_log(kw, std::max(r0, a), b, true, tol);
    return integrate_log(kw, a, std::min(r0, b), true, tol) + correction;
}

} // namespace

void visit_anchor_window(const CellFamily& cells, double w, double lo, double hi,
                         const std::function<void(long, double)>& visit) {
    for_anchors_in(cells, w, lo, hi, visit);
}

double lattice_tail_bound(const Kernel& kw, const CellFamily& cells, double w, double radius) {
    if (kw.compact) return radius >= std::max(std::abs(kw.lo), std::abs(kw.hi)) ? 0.0 : 1e300;
    if (!std::isfinite(kw.tail_invsq))
        throw InvalidInput("lattice_tail_bound: unbounded kernel without a pointwise tail bound");
    const double d = anchor_spacing(cells, w);
    const double c = kw.tail_invsq;
    return 2.0 * (c / (radius * radius) + c / (d * radius));
}

double index_group_integral(const KernelFamily& family, const CellFamily& cells,
                            double w, double z, bool absolute, double tol) {
    const Kernel kw = family.at(w);
    switch (cells.rule) {
        case CellFamily::Rule::Sampling:
        case CellFamily::Rule::SamplingSymmetric:
            return lattice_sum(kw, cells, w, z, absolute, -1.0, tol);
        case CellFamily::Rule::MultiDimSampling: {
            const double one = lattice_sum(kw, cells, w, z, absolute, -1.0, tol);
            return std::pow(one, cells.dim);
        }
        case CellFamily::Rule::ConvScaled:
            return w * kernel_integral(kw, absolute, tol);
        case CellFamily::Rule::ConvUnit:
            return kernel_integral(kw, absolute, tol);
        case CellFamily::Rule::Mellin:
            return kernel_integral(kw, absolute, tol);
    }
    throw InvalidInput("index_group_integral: unsupported rule");
}

std::vector<double> default_probe_grid(const KernelFamily&, const CellFamily& cells,
                                       double w) {
    std::vector<double> probes;
    switch (cells.rule) {
        case CellFamily::Rule::ConvScaled:
        case CellFamily::Rule::ConvUnit:
            return {0.0};  // the H-integral is translation invariant in z
        case CellFamily::Rule::Mellin:
            return {1.0};  // dilation invariant in z
        default: break;
    }
    const bool uniform = cells.samples.delta == cells.samples.big_delta;
    if (uniform) {
        // Periodic in z; one period suffices.
        const double period = anchor_spacing(cells, w);
        for (int i = 0; i < 33; ++i) probes.push_back(period * i / 33.0);
    } else {
        for (int i = 0; i <= 100; ++i) probes.push_back(-10.0 + 0.2 * i);
    }
    return probes;
}

double audit_chi2(const KernelFamily& family, const CellFamily& cells, double w,
                  const std::vector<double>& probes, double tol) {
    if (probes.empty()) throw InvalidInput("audit_chi2: probe grid must be nonempty");
    double dev = 0.0;
    for (double z : probes)
        dev = std::max(dev, std::abs(index_group_integral(family, cells, w, z, false, tol) - 1.0));
    return dev;
}

Chi3Result audit_chi3(const KernelFamily& family, const CellFamily& cells,
                      const std::vector<double>& w_list, double tol, double cap) {
    if (w_list.empty()) throw InvalidInput("audit_chi3: w list must be nonempty");
    Chi3Result res;
    for (double w : w_list) {
        double sup = 0.0;
        for (double z : default_probe_grid(family, cells, w))
            sup = std::max(sup, index_group_integral(family, cells, w, z, true, tol));
        if (sup > cap) throw AuditFailure("audit_chi3: estimate exceeds divergence cap");
        res.per_w.push_back(sup);
        res.bound = std::max(res.bound, sup);
    }
    return res;
}

namespace {

double chi4_quantity(const KernelFamily& family, const CellFamily& cells, double w,
                     double z, double gamma, double tol) {
    const Kernel kw = family.at(w);
    switch (cells.rule) {
        case CellFamily::Rule::Sampling:
        case CellFamily::Rule::SamplingSymmetric:
            return lattice_sum(kw, cells, w, z, true, gamma, tol);
        case CellFamily::Rule::MultiDimSampling: {
            // Tensor bound: some coordinate argument exceeds gamma.
            const double tail = lattice_sum(kw, cells, w, z, true, gamma, tol);
            const double full = lattice_sum(kw, cells, w, z, true, -1.0, tol);
            return cells.dim * tail * std::pow(full, cells.dim - 1);
        }
        case CellFamily::Rule::ConvScaled:
            return w * (kernel_mass_beyond(kw, gamma, true, tol) +
                        kernel_mass_beyond(kw, -gamma, false, tol));
        case CellFamily::Rule::ConvUnit:
            return kernel_mass_beyond(kw, gamma, true, tol) +
                   kernel_mass_beyond(kw, -gamma, false, tol);
        case CellFamily::Rule::Mellin:
            if (!(gamma > 1.0))
                throw InvalidInput("chi4: Mellin neighborhoods require gamma > 1");
            return kernel_ratio_mass_beyond(kw, gamma, true, tol) +
                   kernel_ratio_mass_beyond(kw, 1.0 / gamma, false, tol);
    }
    throw InvalidInput("chi4: unsupported rule");
}

} // namespace

std::vector<double> audit_chi4(const KernelFamily& family, const CellFamily& cells,
                               double gamma, const std::vector<double>& w_list, double tol) {
    if (!(gamma > 0.0)) throw InvalidInput("audit_chi4: gamma must be positive");
    if (w_list.empty()) throw InvalidInput("audit_chi4: w list must be nonempty");
    std::vector<double> per_w;
    for (double w : w_list) {
        double sup = 0.0;
        for (double z : default_probe_grid(family, cells, w))
            sup = std::max(sup, chi4_quantity(family, cells, w, z, gamma, tol));
        per_w.push_back(sup);
    }
    const double slack = 10.0 * tol;
    for (size_t i = 1; i < per_w.size(); ++i)
        if (per_w[i] > per_w[i - 1] + slack)
            throw AuditFailure("audit_chi4: tail mass fails to decrease in w");
    return per_w;
}

namespace {

std::vector<double> anchor_probes(const CellFamily& cells, double gamma) {
    if (cells.rule == CellFamily::Rule::Mellin) {
        std::vector<double> probes;
        for (int i = -2; i <= 2; ++i) probes.push_back(std::pow(gamma, 0.5 * i));
        return probes;
    }
    return {-gamma, -0.5 * gamma, 0.0, 0.5 * gamma, gamma};
}

double chi5_quantity(const Kernel& kw, const CellFamily& cells, double w, double h,
                     double radius, double tol) {
    switch (cells.rule) {
        case CellFamily::Rule::Sampling:
        case CellFamily::Rule::SamplingSymmetric:
        case CellFamily::Rule::ConvScaled:
            return w * (kernel_mass_beyond(kw, radius - h, true, tol) +
                        kernel_mass_beyond(kw, -radius - h, false, tol));
        case CellFamily::Rule::ConvUnit:
            return kernel_mass_beyond(kw, radius - h, true, tol) +
                   kernel_mass_beyond(kw, -radius - h, false, tol);
        case CellFamily::Rule::Mellin:
            return kernel_ratio_mass_beyond(kw, radius / h, true, tol) +
                   kernel_ratio_mass_beyond(kw, 1.0 / (radius * h), false, tol);
        case CellFamily::Rule::MultiDimSampling: {
            const double one = w * (kernel_mass_beyond(kw, radius - h, true, tol) +
                                    kernel_mass_beyond(kw, -radius - h, false, tol));
            return cells.dim * one;
        }
    }
    throw InvalidInput("chi5: unsupported rule");
}

} // namespace

double audit_chi5(const KernelFamily& family, const CellFamily& cells, double gamma,
                  double eps, const std::vector<double>& w_list, double tol) {
    if (!(eps > 0.0)) throw InvalidInput("audit_chi5: eps must be positive");
    if (w_list.empty()) throw InvalidInput("audit_chi5: w list must be nonempty");
    const bool mellin = cells.rule == CellFamily::Rule::Mellin;
    if (mellin && !(gamma > 1.0))
        throw InvalidInput("audit_chi5: Mellin compact sets require gamma > 1");
    const double r0 = mellin ? std::max(gamma, 1.0) * 1.05 : gamma * 1.05;
    const int count = 80;
    const double growth = std::pow(1e6, 1.0 / (count - 1));
    std::vector<double> radii(count);
    for (int i = 0; i < count; ++i) radii[i] = r0 * std::pow(growth, i);

    const auto anchors = anchor_probes(cells, gamma);
    auto passes = [&](double radius) {
        for (double w : w_list) {
            const Kernel kw = family.at(w);
            for (double h : anchors)
                if (chi5_quantity(kw, cells, w, h, radius, std::min(tol, 0.01 * eps)) >= eps)
                    return false;
        }
        return true;
    };
    // The quantity is nonincreasing in the radius: binary search the grid.
    int lo = 0, hi = count - 1;
    if (!passes(radii[hi]))
        throw AuditFailure("audit_chi5: no probed radius reaches the requested eps");
    if (passes(radii[lo])) return radii[lo];
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (passes(radii[mid]) ? hi : lo) = mid;
    }
    return radii[hi];
}

Chi6Result audit_chi6(const KernelFamily& family, const CellFamily& cells,
                      const std::vector<double>& w_list, double tol) {
    if (w_list.empty()) throw InvalidInput("audit_chi6: w list must be nonempty");
    Chi6Result res;
    for (double w : w_list) {
        const double l1 = kernel_l1_norm(family.at(w), tol);
        double q = 0.0;
        switch (cells.rule) {
            case CellFamily::Rule::Sampling:
            case CellFamily::Rule::SamplingSymmetric:
                q = l1 / anchor_spacing(cells, w);  // the m_0 scale of the discrete sum
                break;
            case CellFamily::Rule::ConvScaled:
                q = w * l1;
                break;
            case CellFamily::Rule::ConvUnit:
            case CellFamily::Rule::Mellin:
                q = l1;
                break;
            case CellFamily::Rule::MultiDimSampling:
                q = std::pow(l1 / anchor_spacing(cells, w), cells.dim);
                break;
        }
        res.per_w.push_back(q);
        res.constant = std::max(res.constant, q);
    }
    bool increasing = res.per_w.size() > 1;
    for (size_t i = 1; i < res.per_w.size(); ++i)
        if (res.per_w[i] <= res.per_w[i - 1] + 10.0 * tol) increasing = false;
    if (increasing && res.per_w.back() > 2.0 * res.per_w.front())
        throw AuditFailure("audit_chi6: kernel quantity grows across the w grid");
    return res;
}

bool ConditionReport::all_pass() const {
    for (const auto& e : entries)
        if (!e.pass) return false;
    return true;
}

std::string ConditionReport::to_text() const {
    std::ostringstream os;
    os.precision(17);
    for (const auto& e : entries) {
        os << e.condition << ": " << (e.pass ? "pass" : "FAIL");
        if (!e.note.empty()) os << " (" << e.note << ")";
        os << "\n  w:";
        for (double w : e.w_grid) os << ' ' << w;
        os << "\n  values:";
        for (double v : e.values) os << ' ' << v;
        os << "\n  tolerance: " << e.tolerance << "\n";
    }
    if (std::isfinite(m_bound)) os << "estimated M: " << m_bound << "\n";
    if (std::isfinite(c_bound)) os << "estimated C: " << c_bound << "\n";
    return os.str();
}

ConditionReport run_audits(const KernelFamily& family, const CellFamily& cells,
                           const std::vector<double>& w_list, double gamma, double eps,
                           double tol) {
    if (w_list.empty()) throw InvalidInput("run_audits: w list must be nonempty");
    ConditionReport report;
    const double audit_tol = std::max(1e-8, 10.0 * tol);

    AuditEntry chi2{"chi2", w_list, {}, audit_tol, true, ""};
    for (double w : w_list) {
        const double dev = audit_chi2(family, cells, w, default_probe_grid(family, cells, w), tol);
        chi2.values.push_back(dev);
        if (dev > audit_tol) chi2.pass = false;
    }
    report.entries.push_back(std::move(chi2));

    AuditEntry chi3{"chi3", w_list, {}, 1e6, true, ""};
    try {
        const auto r = audit_chi3(family, cells, w_list, tol);
        chi3.values = r.per_w;
        report.m_bound = r.bound;
    } catch (const AuditFailure& e) {
        chi3.pass = false;
        chi3.note = e.what();
    }
    report.entries.push_back(std::move(chi3));

    AuditEntry chi4{"chi4", w_list, {}, audit_tol, true, ""};
    try {
        chi4.values = audit_chi4(family, cells, gamma, w_list, std::max(tol, 1e-9));
    } catch (const AuditFailure& e) {
        chi4.pass = false;
        chi4.note = e.what();
    }
    report.entries.push_back(std::move(chi4));

    AuditEntry chi5{"chi5", w_list, {}, eps, true, ""};
    try {
        chi5.values = {audit_chi5(family, cells, gamma, eps, w_list, tol)};
        chi5.note = "truncation radius";
    } catch (const AuditFailure& e) {
        chi5.pass = false;
        chi5.note = e.what();
    }
    report.entries.push_back(std::move(chi5));

    AuditEntry chi6{"chi6", w_list, {}, audit_tol, true, ""};
    try {
        const auto r = audit_chi6(family, cells, w_list, tol);
        chi6.values = r.per_w;
        report.c_bound = r.constant;
    } catch (const AuditFailure& e) {
        chi6.pass = false;
        chi6.note = e.what();
    }
    report.entries.push_back(std::move(chi6));
    return report;
}

} // namespace kanto
