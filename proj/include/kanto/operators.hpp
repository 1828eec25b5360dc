#pragma once

#include <functional>
#include <vector>

#include "kanto/funcdsl.hpp"
#include "kanto/group_model.hpp"
#include "kanto/kernels.hpp"

namespace kanto {

/// A function the operators can consume: evaluator, declared breakpoints
/// and a sup bound used for truncation certificates.
struct Signal {
    std::function<double(double)> eval;
    std::vector<double> breakpoints;
    double sup_abs = 1.0;

    static Signal constant(double c);
    static Signal from_piecewise(const dsl::PiecewiseFunction& f);
    /// Piecewise-linear interpolant of grid samples.
    static Signal interpolant(std::vector<double> grid, std::vector<double> values);
};

struct Signal2 {
    std::function<double(double, double)> eval;
    std::vector<double> breakpoints_x, breakpoints_y;
    double sup_abs = 1.0;

    static Signal2 tensor(const Signal& gx, const Signal& gy);
};

enum class OperatorVariant {
    SamplingKantorovich,           // S_w^(1)
    SamplingKantorovichSymmetric,  // S_w^(1,1)
    ConvKantorovichScaled,         // S_w^(2)
    ConvKantorovichUnit,           // S_w^(3)
    MellinKantorovich,             // S_w^(4)
    MultiDimSamplingKantorovich,   // S_w^(5)
    ClassicalSampling,
    ClassicalConvolution,
    ClassicalMellin,
};

struct OperatorSpec {
    OperatorVariant variant = OperatorVariant::ConvKantorovichScaled;
    KernelFamily kernel_family;
    CellFamily cell_family;
    double w = 1.0;
    int dim = 1;
    double quad_tol = 1e-9;

    void validate() const;
};

struct EvaluationResult {
    std::vector<double> grid;
    std::vector<double> values;
    double truncation_radius = 0.0;
    double quad_tol = 0.0;
};

double apply(const OperatorSpec& spec, const Signal& f, double z);
double apply2(const OperatorSpec& spec, const Signal2& f, double z1, double z2);
EvaluationResult apply_grid(const OperatorSpec& spec, const Signal& f,
                            const std::vector<double>& grid);

/// The non-Kantorovich counterpart: classical sampling (point samples),
/// classical convolution C_w, classical Mellin M_w.
double classical_comparator(const OperatorSpec& spec, const Signal& f, double z);

/// (1/w)/ln(1+1/w), the mean-value prefactor of the Mellin variant.
double mellin_mean_prefactor(double w);

/// Standard operator builders wiring the kernel, scaling and cell family
/// the way the concrete settings require. The kernel family must be on
/// the variant's group.
OperatorSpec make_operator_spec(OperatorVariant variant, KernelFamily kernels, double w,
                                SampleSequence samples = SampleSequence::uniform(),
                                int dim = 2);

} // namespace kanto
