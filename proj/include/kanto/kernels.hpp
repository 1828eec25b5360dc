#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "kanto/group_model.hpp"

namespace kanto {

// Central B-spline of order n; exactly 0 for |x| >= n/2. Valid for 1 <= n <= 10.
double bspline_eval(int n, double x);
// M(x) = 4 M_3(x) - 3 M_4(x); support [-2,2].
double combo_kernel_eval(double x);
double sinc_eval(double x);
// F(x) = (1/2) sinc^2(x/2); tail bound F(x) <= 2/(pi^2 x^2).
double fejer_eval(double x);
// w u^w on (0,1), 0 elsewhere; u <= 0 is rejected.
double mellin_kernel_eval(double w, double u);

struct Kernel {
    GroupSpace space = GroupSpace::real_line();
    std::function<double(double)> eval;
    bool compact = true;
    double lo = 0.0, hi = 0.0;        // support bounds; may be 0 / +inf on R+
    std::vector<double> knots;        // interior kinks, for quadrature
    // |eval(u)| <= tail_invsq / u^2 for large |u| (additive kernels with
    // unbounded support); NaN when absent.
    double tail_invsq = std::numeric_limits<double>::quiet_NaN();
    // Certified bound on the L1 mass outside [-R,R].
    std::function<double(double)> tail_mass;
    // Accurate two-sided tail mass estimate with its error bound, for even
    // kernels with nonnegative tails. Tightens truncation beyond what the
    // plain bound allows.
    std::function<double(double)> tail_estimate;
    std::function<double(double)> tail_estimate_err;
    // Oscillation period of the tail, used to seed quadrature panels.
    double osc_period = 0.0;
    // L1 mass (log measure) outside [1/R, R]; R+ kernels with support
    // touching 0. ratio_tail_exact marks the bound as an exact mass of a
    // nonnegative kernel, so it can be added back as a correction.
    std::function<double(double)> ratio_tail_mass;
    bool ratio_tail_exact = false;

    bool has_tail_bound() const;
};

Kernel make_bspline_kernel(int n);
Kernel make_combo_kernel();
Kernel make_fejer_kernel();
Kernel make_mellin_kernel(double w);
Kernel make_custom_kernel(std::function<double(double)> eval, double lo, double hi,
                          std::vector<double> knots = {});

/// Truncation radius R such that the kernel's mass outside [-R,R]
/// (resp. [1/R,R] on R+) is at most tol. Returns 0 for compact kernels.
double truncation_radius(const Kernel& k, double tol);

/// Integral of |chi| (or signed chi) over the kernel's domain measure, with
/// tail-bound-certified truncation for unbounded supports.
double kernel_l1_norm(const Kernel& k, double tol = 1e-9);
double kernel_integral(const Kernel& k, bool absolute, double tol = 1e-9);

struct KernelFamily {
    enum class Scaling {
        DilateArgument,  // chi_w(u) = chi(wu)
        DilateAndWeight, // chi_w(u) = w chi(wu)
        MellinPower,     // chi_w = M_w, the w u^w kernel on (0,1)
        Unscaled,        // chi_w = chi
    };

    Kernel base;
    Scaling scaling = Scaling::DilateArgument;
    int tensor_dim = 1;

    Kernel at(double w) const;
};

struct AuditEntry {
    std::string condition;
    std::vector<double> w_grid;
    std::vector<double> values;
    double tolerance = 0.0;
    bool pass = true;
    std::string note;
};

struct ConditionReport {
    std::vector<AuditEntry> entries;
    double m_bound = std::numeric_limits<double>::quiet_NaN();  // from chi3
    double c_bound = std::numeric_limits<double>::quiet_NaN();  // from chi6

    bool all_pass() const;
    std::string to_text() const;
};

/// Visits every lattice index k whose anchor h_w(k) lies in [lo, hi]
/// (anchors are increasing in k).
void visit_anchor_window(const CellFamily& cells, double w, double lo, double hi,
                         const std::function<void(long, double)>& visit);

/// Bound on the sum of |kw(z - anchor(k))| over anchors farther than
/// `radius` from z. Zero for compact kernels once radius covers the support.
double lattice_tail_bound(const Kernel& kw, const CellFamily& cells, double w, double radius);

// Integral (or sum) over H of chi_w(z - h_w(t)) d mu_H(t), the quantity
// behind conditions (chi2) and (chi3). absolute selects |chi_w|.
double index_group_integral(const KernelFamily& family, const CellFamily& cells,
                            double w, double z, bool absolute, double tol);

std::vector<double> default_probe_grid(const KernelFamily& family, const CellFamily& cells,
                                       double w);

// Max over probes z of |integral - 1|.
double audit_chi2(const KernelFamily& family, const CellFamily& cells, double w,
                  const std::vector<double>& probes, double tol = 1e-9);

struct Chi3Result {
    std::vector<double> per_w;
    double bound = 0.0;  // estimated M
};
Chi3Result audit_chi3(const KernelFamily& family, const CellFamily& cells,
                      const std::vector<double>& w_list, double tol = 1e-9,
                      double cap = 1e6);

// Per-w sup over probes of the mass beyond distance gamma from z; throws
// AuditFailure if the sequence fails to decrease.
std::vector<double> audit_chi4(const KernelFamily& family, const CellFamily& cells,
                               double gamma, const std::vector<double>& w_list,
                               double tol = 1e-9);

// Smallest probed truncation radius for which the variant-specific
// truncated integral stays below eps for all probed w and anchors in K.
double audit_chi5(const KernelFamily& family, const CellFamily& cells, double gamma,
                  double eps, const std::vector<double>& w_list, double tol = 1e-9);

struct Chi6Result {
    std::vector<double> per_w;
    double constant = 0.0;  // estimated C
};
Chi6Result audit_chi6(const KernelFamily& family, const CellFamily& cells,
                      const std::vector<double>& w_list, double tol = 1e-9);

ConditionReport run_audits(const KernelFamily& family, const CellFamily& cells,
                           const std::vector<double>& w_list, double gamma = 1.0,
                           double eps = 1e-3, double tol = 1e-9);

} // namespace kanto
