#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kanto/group_model.hpp"
#include "kanto/operators.hpp"

namespace kanto {

/// Convex phi-function generating an Orlicz space. Built-ins: u^p,
/// u^alpha ln^beta(e+u), exp(u^alpha)-1.
struct PhiFunction {
    enum class Variant { Power, Interpolation, Exponential, Custom };

    Variant variant = Variant::Power;
    double p = 2.0;
    double alpha = 1.0, beta = 1.0;
    std::function<double(double)> custom;
    bool convex = true;

    static PhiFunction power(double p);
    static PhiFunction interpolation(double alpha, double beta);
    static PhiFunction exponential(double alpha);
    static PhiFunction custom_fn(std::function<double(double)> eval, bool convex = true);

    double operator()(double u) const;
    std::string name() const;

    /// phi(0)=0, positivity, monotonicity and growth on a geometric probe
    /// grid; midpoint convexity on random triples. Throws InvalidInput.
    void check_axioms() const;
};

/// Integration window with its measure (Lebesgue on R, logarithmic on R+).
struct Window {
    double lo = 0.0, hi = 1.0;
    Measure measure = Measure::Lebesgue;
};

/// I_phi[lambda g] = integral of phi(lambda |g|) over the window.
/// Overflow of phi raises NumericError naming lambda.
double modular(const PhiFunction& phi, const std::function<double(double)>& g,
               const Window& window, double lambda = 1.0, double tol = 1e-9,
               const std::vector<double>& breakpoints = {});

enum class LuxemburgConvention { Standard, PaperVariant };

/// Standard: inf{lambda>0 : I(g/lambda) <= 1}; PaperVariant: <= lambda.
/// Bracketing + bisection to relative 1e-8. Returns 0 for g == 0.
double luxemburg_norm(const PhiFunction& phi, const std::function<double(double)>& g,
                      const Window& window,
                      LuxemburgConvention convention = LuxemburgConvention::Standard,
                      double tol = 1e-9, const std::vector<double>& breakpoints = {});

struct Delta2Report {
    std::vector<double> u_grid;
    std::vector<double> ratios;  // phi(2u)/phi(u)
    double sup_ratio = 0.0;
    double sup_at = 0.0;
    bool satisfied = false;
    std::string verdict;  // "satisfied on grid" | "fails on grid"
};

/// Ratio scan phi(2u)/phi(u); the default grid is geometric over
/// [1e-3, 20]. Satisfied iff the ratio at the largest u is finite and
/// within 10x of the median ratio.
Delta2Report delta2_audit(const PhiFunction& phi, std::vector<double> u_grid = {});

struct ErrorTable {
    double sup_error = 0.0;
    std::vector<double> p_list;
    std::vector<double> lp_errors;
    std::vector<std::string> phi_names;
    std::vector<double> lambda_list;
    // modular_distances[i][j] = I_{phi_i}[lambda_j (f - g)]
    std::vector<std::vector<double>> modular_distances;
};

/// Sup-error on the grid plus L^p errors and modular distances over the
/// window. Breakpoints of both signals are declared to the quadrature.
ErrorTable error_metrics(const Signal& f, const Signal& g, const std::vector<double>& grid,
                         const Window& window, const std::vector<double>& p_list,
                         const std::vector<PhiFunction>& phi_list,
                         const std::vector<double>& lambda_list, double tol = 1e-9);

} // namespace kanto
