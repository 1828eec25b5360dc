#pragma once

#include <string>
#include <vector>

#include "kanto/funcdsl.hpp"
#include "kanto/kernels.hpp"
#include "kanto/operators.hpp"
#include "kanto/orlicz.hpp"

namespace kanto::experiments {

struct GridSpec {
    double min = -4.0, max = 4.0;
    int count = 801;

    std::vector<double> points() const;
};

struct MetricsSpec {
    bool sup = true;
    std::vector<double> p_list;
    std::vector<std::string> phi_list;  // "power:p" | "interpolation:a:b" | "exponential:a"
    std::vector<double> lambda_list;
};

/// One experiment, loadable from a JSON document. See docs/config.md for
/// the schema; echo_json() reproduces a document that parses back to the
/// same configuration.
struct ExperimentConfig {
    std::string name = "experiment";
    OperatorVariant variant = OperatorVariant::ConvKantorovichScaled;
    std::string kernel = "M";  // M | M3 | M4 | bspline:n | fejer | mellin
    std::string kernel_expression;  // alternative: custom expression chi(u)
    double kernel_support_lo = 0.0, kernel_support_hi = 0.0;
    KernelFamily::Scaling scaling = KernelFamily::Scaling::DilateArgument;
    std::string samples = "uniform";  // uniform | perturbed
    std::string signal_preset;        // f1 | f2 | f3, or empty with inline pieces
    std::vector<dsl::PieceSpec> signal_pieces;
    dsl::DomainTag signal_domain = dsl::DomainTag::RealLine;
    std::vector<double> w_list = {5, 10, 15};
    GridSpec grid;
    MetricsSpec metrics;
    std::vector<std::string> checks;  // sup-decreasing | l1-decreasing | lp-inequality |
                                      // modular-bound | lambda-scan | gap-decreasing
    double tolerance = 1e-9;
    LuxemburgConvention convention = LuxemburgConvention::Standard;
    int dim = 2;

    static ExperimentConfig from_json(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    std::string echo_json() const;
    void validate() const;

    KernelFamily kernel_family() const;
    dsl::PiecewiseFunction signal() const;
    SampleSequence sample_sequence() const;
    OperatorSpec operator_spec(double w) const;
    /// Metric window over the grid range with the domain's measure.
    Window window() const;
};

/// Bundled presets fig3, fig4, fig5.
ExperimentConfig preset(const std::string& name);
std::string preset_json(const std::string& name);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// CSV with a header row, comma separators, LF endings and 17-significant-
/// digit floats.
void write_csv(const Table& table, const std::string& path);
std::string format_g17(double v);

/// Self-contained SVG 1.1, 800x600: column 0 is the abscissa, each further
/// column one polyline, legend labels taken from the column names.
void write_svg(const Table& table, const std::string& path, const std::string& title);

struct TheoremCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct MetricRow {
    double w = 0.0;
    double sup_error = 0.0;
    std::vector<double> lp_errors;
    std::vector<std::vector<double>> modular_distances;  // [phi][lambda]
};

struct ExperimentReport {
    std::string config_echo;
    ConditionReport audits;
    std::vector<MetricRow> rows;
    std::vector<TheoremCheck> theorem_checks;
    std::vector<std::string> artifacts;

    bool all_pass() const;
    std::string to_text() const;
};

ConditionReport cmd_audit(const ExperimentConfig& config);
ExperimentReport cmd_figure(const ExperimentConfig& config, const std::string& out_dir);
ExperimentReport cmd_convergence(const ExperimentConfig& config, const std::string& out_dir);
ExperimentReport cmd_compare_classical(const ExperimentConfig& config,
                                       const std::string& out_dir);

PhiFunction parse_phi(const std::string& text);
/// Default geometric lambda scan 2^0 .. 2^-10.
std::vector<double> default_lambda_scan();

} // namespace kanto::experiments
