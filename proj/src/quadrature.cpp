#include "kanto/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace kanto {
namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1,1].
constexpr double kNodes[8] = {
    0.000000000000000, 0.405845151377397, 0.741531185599394, 0.949107912342759,
    0.207784955007898, 0.586087235467691, 0.864864423359769, 0.991455371120813};
constexpr double kGauss[8] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
    0.0, 0.0, 0.0, 0.0};
constexpr double kKronrod[8] = {
    0.209482141084728, 0.190350578064785, 0.140653259715525, 0.063092092629979,
    0.204432940075298, 0.169004726639267, 0.104790010322250, 0.022935322010529};

struct Panel {
    double a, b;
    double estimate;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    fv[0] = f(mid);
    double g7 = kGauss[0] * fv[0];
    double k15 = kKronrod[0] * fv[0];
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kNodes[i];
        const double y1 = f(mid + dx);
        const double y2 = f(mid - dx);
        fv[2 * i - 1] = y1;
        fv[2 * i] = y2;
        g7 += kGauss[i] * (y1 + y2);
        k15 += kKronrod[i] * (y1 + y2);
    }
    for (double v : fv)
        if (!std::isfinite(v))
            throw NumericError("integrate: non-finite integrand value");

    const double mean = k15 * 0.5;
    double resasc = kKronrod[0] * std::abs(fv[0] - mean);
    for (int i = 1; i < 8; ++i)
        resasc += kKronrod[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
    resasc *= half;

    const double diff = std::abs(g7 - k15) * half;
    double err = diff;
    if (resasc > 0.0 && diff > 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * diff / resasc, 1.5));
    return {a, b, k15 * half, err};
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                std::vector<double> breaks, double tol) {
    if (a == b) return 0.0;
    if (a > b) throw InvalidInput("integrate: requires a <= b");
    if (!(tol > 0.0)) throw InvalidInput("integrate: tolerance must be positive");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw InvalidInput("integrate: interval must be finite");

    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::priority_queue<Panel> queue;
    double total = 0.0, total_err = 0.0;
    double prev = a;
    auto push_panel = [&](double lo, double hi) {
        Panel p = gk15(f, lo, hi);
        total += p.estimate;
        total_err += p.error;
        queue.push(p);
    };
    for (double x : breaks) {
        if (x <= a || x >= b) continue;
        push_panel(prev, x);
        prev = x;
    }
    push_panel(prev, b);

    const double min_width = 1e-15 * (std::abs(a) + std::abs(b) + 1.0);
    const int max_panels = 200000;
    int panels = static_cast<int>(queue.size());
    double stuck_err = 0.0;

    while (total_err + stuck_err > tol * std::max(1.0, std::abs(total))) {
        if (queue.empty() || panels >= max_panels)
            throw NumericError("integrate: subdivision limit reached", total,
                               (total_err + stuck_err) / std::max(1.0, std::abs(total)));
        Panel worst = queue.top();
        queue.pop();
        total -= worst.estimate;
        total_err -= worst.error;
        if (worst.b - worst.a < min_width) {
            // Cannot split further at working precision; keep its estimate.
            total += worst.estimate;
            stuck_err += worst.error;
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        push_panel(worst.a, mid);
        push_panel(mid, worst.b);
        ++panels;
    }
    return total;
}

} // namespace

double integrate(const IntegrationRequest& req) {
    if (!req.integrand) throw InvalidInput("integrate: missing integrand");
    if (req.measure == Measure::Counting)
        throw InvalidInput("integrate: counting measure uses sum_over_lattice");
    if (req.measure == Measure::Logarithmic) {
        if (!(req.a > 0.0)) throw InvalidInput("integrate: logarithmic measure requires a > 0");
        auto f = req.integrand;
        std::vector<double> logbreaks;
        logbreaks.reserve(req.breakpoints.size());
        for (double x : req.breakpoints)
            if (x > 0.0) logbreaks.push_back(std::log(x));
        return adaptive([f](double x) { return f(std::exp(x)); },
                        std::log(req.a), std::log(req.b), std::move(logbreaks), req.tolerance);
    }
    return adaptive(req.integrand, req.a, req.b, req.breakpoints, req.tolerance);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tolerance, std::vector<double> breakpoints) {
    IntegrationRequest req;
    req.integrand = f;
    req.a = a;
    req.b = b;
    req.breakpoints = std::move(breakpoints);
    req.tolerance = tolerance;
    return integrate(req);
}

double mean_value(const std::function<double(double)>& f, const Cell& cell,
                  double tolerance, const std::vector<double>& breakpoints) {
    if (cell.dim() != 1) throw InvalidInput("mean_value: use mean_value2 for boxes");
    IntegrationRequest req;
    req.integrand = f;
    req.a = cell.lo[0];
    req.b = cell.hi[0];
    req.measure = cell.space.measure();
    req.breakpoints = breakpoints;
    req.tolerance = tolerance;
    return integrate(req) / haar_measure(cell);
}

double mean_value2(const std::function<double(double, double)>& f, const Cell& cell,
                   double tolerance, const std::vector<double>& breakpoints_x,
                   const std::vector<double>& breakpoints_y) {
    if (cell.dim() != 2) throw InvalidInput("mean_value2: requires a 2-dimensional box");
    const double y_lo = cell.lo[1], y_hi = cell.hi[1];
    auto inner = [&](double x) {
        return integrate([&, x](double y) { return f(x, y); }, y_lo, y_hi,
                         tolerance * 0.1, breakpoints_y);
    };
    const double v = integrate(inner, cell.lo[0], cell.hi[0], tolerance, breakpoints_x);
    return v / haar_measure(cell);
}

double sum_over_lattice(const std::function<double(long)>& term, long k_lo, long k_hi) {
    double s = 0.0;
    for (long k = k_lo; k <= k_hi; ++k) s += term(k);
    return s;
}

double sum_over_lattice_tail(const std::function<double(long)>& term, long center,
                             const std::function<double(double)>& tail_bound,
                             double tolerance) {
    if (!tail_bound) throw InvalidInput("sum_over_lattice_tail: missing tail bound");
    long radius = 8;
    double s = 0.0;
    for (long k = center - radius; k <= center + radius; ++k) s += term(k);
    while (tail_bound(static_cast<double>(radius)) > tolerance) {
        if (radius > (1L << 40))
            throw NumericError("sum_over_lattice_tail: tail bound never certified", s, tolerance);
        const long next = radius * 2;
        for (long k = center + radius + 1; k <= center + next; ++k) s += term(k);
        for (long k = center - next; k <= center - radius - 1; ++k) s += term(k);
        radius = next;
    }
    return s;
}

} // namespace kanto
