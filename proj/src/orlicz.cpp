#include "kanto/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "kanto/errors.hpp"
#include "kanto/quadrature.hpp"

namespace kanto {

PhiFunction PhiFunction::power(double p) {
    if (!(p >= 1.0)) throw InvalidInput("PhiFunction::power: need p >= 1");
    PhiFunction phi;
    phi.variant = Variant::Power;
    phi.p = p;
    return phi;
}

PhiFunction PhiFunction::interpolation(double alpha, double beta) {
    if (!(alpha >= 1.0) || !(beta > 0.0))
        throw InvalidInput("PhiFunction::interpolation: need alpha >= 1, beta > 0");
    PhiFunction phi;
    phi.variant = Variant::Interpolation;
    phi.alpha = alpha;
    phi.beta = beta;
    return phi;
}

PhiFunction PhiFunction::exponential(double alpha) {
    if (!(alpha > 0.0)) throw InvalidInput("PhiFunction::exponential: need alpha > 0");
    PhiFunction phi;
    phi.variant = Variant::Exponential;
    phi.alpha = alpha;
    return phi;
}

PhiFunction PhiFunction::custom_fn(std::function<double(double)> eval, bool convex) {
    if (!eval) throw InvalidInput("PhiFunction::custom_fn: missing evaluator");
    PhiFunction phi;
    phi.variant = Variant::Custom;
    phi.custom = std::move(eval);
    phi.convex = convex;
    return phi;
}

double PhiFunction::operator()(double u) const {
    u = std::abs(u);
    switch (variant) {
        case Variant::Power:
            return std::pow(u, p);
        case Variant::Interpolation:
            return std::pow(u, alpha) * std::pow(std::log(std::exp(1.0) + u), beta);
        case Variant::Exponential:
            return std::expm1(std::pow(u, alpha));
        case Variant::Custom:
            return custom(u);
    }
    throw InvalidInput("PhiFunction: unknown variant");
}

std::string PhiFunction::name() const {
    std::ostringstream os;
    switch (variant) {
        case Variant::Power: os << "Power(" << p << ")"; break;
        case Variant::Interpolation:
            os << "Interpolation(" << alpha << "," << beta << ")";
            break;
        case Variant::Exponential: os << "Exponential(" << alpha << ")"; break;
        case Variant::Custom: os << "Custom"; break;
    }
    return os.str();
}

void PhiFunction::check_axioms() const {
    const PhiFunction& phi = *this;
    if (phi(0.0) != 0.0) throw InvalidInput("phi-function: phi(0) must be 0");
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i)
        grid.push_back(1e-6 * std::pow(1e9, i / 40.0));  // 1e-6 .. 1e3
    double prev = 0.0;
    for (double u : grid) {
        const double v = phi(u);
        if (std::isnan(v)) throw InvalidInput("phi-function: NaN on probe grid");
        if (!(v > 0.0)) throw InvalidInput("phi-function: must be positive for u > 0");
        if (v + 1e-15 < prev) throw InvalidInput("phi-function: must be nondecreasing");
        prev = v;
    }
    if (!(phi(grid.back()) > phi(1.0)))
        throw InvalidInput("phi-function: must be unbounded (no growth detected)");
    if (convex) {
        std::mt19937 rng(20260823);
        std::uniform_real_distribution<double> pick(-3.0, 1.5);  // log10 range
        for (int i = 0; i < 200; ++i) {
            const double u = std::pow(10.0, pick(rng));
            const double v = std::pow(10.0, pick(rng));
            const double m = phi(0.5 * (u + v));
            const double avg = 0.5 * (phi(u) + phi(v));
            if (!std::isfinite(m) || !std::isfinite(avg)) continue;
            if (m > avg * (1.0 + 1e-12) + 1e-12)
                throw InvalidInput("phi-function: midpoint convexity violated");
        }
    }
}

double modular(const PhiFunction& phi, const std::function<double(double)>& g,
               const Window& window, double lambda, double tol,
               const std::vector<double>& breakpoints) {
    if (!(lambda > 0.0)) throw InvalidInput("modular: lambda must be positive");
    if (!(window.lo < window.hi)) throw InvalidInput("modular: empty window");
    IntegrationRequest req;
    req.a = window.lo;
    req.b = window.hi;
    req.measure = window.measure;
    req.tolerance = tol;
    req.breakpoints = breakpoints;
    req.integrand = [&](double x) {
        const double v = phi(lambda * std::abs(g(x)));
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "modular: " << phi.name() << " overflows at lambda=" << lambda;
            throw NumericError(os.str(), v, lambda);
        }
        return v;
    };
    return integrate(req);
}

double luxemburg_norm(const PhiFunction& phi, const std::function<double(double)>& g,
                      const Window& window, LuxemburgConvention convention, double tol,
                      const std::vector<double>& breakpoints) {
    const double target_one = convention == LuxemburgConvention::Standard ? 1.0 : 0.0;
    // excess(lambda) = I(g/lambda) - target(lambda); decreasing in lambda.
    auto excess = [&](double lambda) {
        double value;
        try {
            value = modular(phi, g, window, 1.0 / lambda, tol, breakpoints);
        } catch (const NumericError&) {
            return std::numeric_limits<double>::infinity();  // lambda too small
        }
        return value - (target_one != 0.0 ? 1.0 : lambda);
    };
    double lo = 1.0, hi = 1.0;
    if (excess(1.0) <= 0.0) {
        // Norm is at most 1; shrink until the modular exceeds the target.
        while (excess(lo) <= 0.0) {
            lo *= 0.5;
            if (lo < 1e-14) return 0.0;  // zero function
        }
        hi = 2.0 * lo;
    } else {
        while (excess(hi) > 0.0) {
            hi *= 2.0;
            if (hi > 1e14)
                throw NumericError("luxemburg_norm: bracketing failure (modular stays above target)",
                                   hi, std::numeric_limits<double>::infinity());
        }
        lo = 0.5 * hi;
    }
    while ((hi - lo) > 1e-8 * hi) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) <= 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

Delta2Report delta2_audit(const PhiFunction& phi, std::vector<double> u_grid) {
    if (u_grid.empty())
        for (int i = 0; i <= 60; ++i)
            u_grid.push_back(1e-3 * std::pow(20.0 / 1e-3, i / 60.0));
    std::sort(u_grid.begin(), u_grid.end());
    Delta2Report rep;
    rep.u_grid = u_grid;
    for (double u : u_grid) {
        if (!(u > 0.0)) throw InvalidInput("delta2_audit: grid must be positive");
        const double denom = phi(u);
        const double ratio = phi(2.0 * u) / denom;
        rep.ratios.push_back(ratio);
        if (!(ratio <= rep.sup_ratio)) {
            rep.sup_ratio = ratio;
            rep.sup_at = u;
        }
    }
    std::vector<double> sorted = rep.ratios;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double last = rep.ratios.back();
    rep.satisfied = std::isfinite(last) && last <= 10.0 * median;
    rep.verdict = rep.satisfied ? "satisfied on grid" : "fails on grid";
    return rep;
}

ErrorTable error_metrics(const Signal& f, const Signal& g, const std::vector<double>& grid,
                         const Window& window, const std::vector<double>& p_list,
                         const std::vector<PhiFunction>& phi_list,
                         const std::vector<double>& lambda_list, double tol) {
    ErrorTable table;
    table.p_list = p_list;
    table.lambda_list = lambda_list;

    for (double z : grid)
        table.sup_error = std::max(table.sup_error, std::abs(f.eval(z) - g.eval(z)));

    std::vector<double> breaks = f.breakpoints;
    breaks.insert(breaks.end(), g.breakpoints.begin(), g.breakpoints.end());
    auto diff = [&](double x) { return f.eval(x) - g.eval(x); };

    for (double p : p_list) {
        if (!(p >= 1.0)) throw InvalidInput("error_metrics: need p >= 1");
        IntegrationRequest req;
        req.a = window.lo;
        req.b = window.hi;
        req.measure = window.measure;
        req.tolerance = tol;
        req.breakpoints = breaks;
        req.integrand = [&](double x) { return std::pow(std::abs(diff(x)), p); };
        table.lp_errors.push_back(std::pow(integrate(req), 1.0 / p));
    }
    for (const PhiFunction& phi : phi_list) {
        table.phi_names.push_back(phi.name());
        std::vector<double> row;
        for (double lambda : lambda_list)
            row.push_back(modular(phi, diff, window, lambda, tol, breaks));
        table.modular_distances.push_back(std::move(row));
    }
    return table;
}

} // namespace kanto
