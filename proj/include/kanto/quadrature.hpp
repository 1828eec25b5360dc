#pragma once

#include <functional>
#include <vector>

#include "kanto/group_model.hpp"

namespace kanto {

struct IntegrationRequest {
    std::function<double(double)> integrand;
    double a = 0.0;
    double b = 1.0;
    Measure measure = Measure::Lebesgue;
    std::vector<double> breakpoints;  // interior kinks/jumps, any order
    double tolerance = 1e-9;
};

/// Adaptive Gauss-Kronrod (G7K15) bisection. The interval is split at the
/// declared breakpoints first; the logarithmic measure is handled by the
/// substitution x = ln t. Achieves |error| <= tolerance * max(1, |result|)
/// or throws NumericError carrying the best estimate.
double integrate(const IntegrationRequest& req);

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tolerance = 1e-9, std::vector<double> breakpoints = {});

/// (1/mu(B)) * integral of f over the cell with the cell's Haar measure.
/// Boxes are handled by iterated integration (dim <= 3).
double mean_value(const std::function<double(double)>& f, const Cell& cell,
                  double tolerance = 1e-9, const std::vector<double>& breakpoints = {});

double mean_value2(const std::function<double(double, double)>& f, const Cell& cell,
                   double tolerance = 1e-9,
                   const std::vector<double>& breakpoints_x = {},
                   const std::vector<double>& breakpoints_y = {});

/// Exact finite sum of term(k) for k in [k_lo, k_hi].
double sum_over_lattice(const std::function<double(long)>& term, long k_lo, long k_hi);

/// Truncated sum with certified tail: expands the window symmetrically
/// around `center` until tail_bound(radius) <= tolerance. tail_bound(R)
/// must bound the absolute sum of all terms with |k - center| > R.
double sum_over_lattice_tail(const std::function<double(long)>& term, long center,
                             const std::function<double(double)>& tail_bound,
                             double tolerance);

} // namespace kanto
