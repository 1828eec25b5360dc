// Command-line front end: kernel audits, figure reproduction, convergence
// tables and classical comparisons, driven by JSON configs.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kanto/errors.hpp"
#include "kanto/experiments.hpp"

namespace {

using namespace kanto;
using namespace kanto::experiments;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitAudit = 3;
constexpr int kExitNumeric = 4;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    double tolerance = 0.0;  // 0 = keep the config's value
    std::string luxemburg;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required) {
    auto* c = cmd->add_option("--config", opts.config_path, "experiment config (JSON)");
    if (config_required) c->required();
    cmd->add_option("--out-dir", opts.out_dir, "output directory for CSV/SVG artifacts");
    cmd->add_option("--tolerance", opts.tolerance, "override the config's quadrature tolerance");
    cmd->add_option("--luxemburg", opts.luxemburg, "Luxemburg convention: standard|paper")
        ->check(CLI::IsMember({"standard", "paper"}));
}

ExperimentConfig resolve(const CommonOpts& opts, const std::string& preset_name) {
    ExperimentConfig cfg = preset_name.empty() ? ExperimentConfig::load(opts.config_path)
                                               : preset(preset_name);
    if (opts.tolerance > 0.0) cfg.tolerance = opts.tolerance;
    if (opts.luxemburg == "standard") cfg.convention = LuxemburgConvention::Standard;
    if (opts.luxemburg == "paper") cfg.convention = LuxemburgConvention::PaperVariant;
    cfg.validate();
    return cfg;
}

int report_exit(const ExperimentReport& report) {
    std::cout << report.to_text();
    if (!report.all_pass()) {
        std::cout << "RESULT: FAIL\n";
        return kExitAudit;
    }
    std::cout << "RESULT: PASS\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kantorovich-type operator toolkit"};
    app.require_subcommand(1);

    CommonOpts audit_opts, figure_opts, conv_opts, cmp_opts;
    std::string preset_name;

    auto* audit = app.add_subcommand("audit-kernel", "run the kernel condition audits");
    add_common(audit, audit_opts, true);

    auto* figure = app.add_subcommand("figure", "reproduce an operator-vs-signal figure");
    add_common(figure, figure_opts, false);
    figure->add_option("--preset", preset_name, "bundled preset: fig3|fig4|fig5")
        ->check(CLI::IsMember({"fig3", "fig4", "fig5"}));

    auto* conv = app.add_subcommand("convergence", "convergence metrics and theorem checks");
    add_common(conv, conv_opts, true);

    auto* cmp = app.add_subcommand("compare-classical",
                                   "gap between Kantorovich and classical operators");
    add_common(cmp, cmp_opts, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (audit->parsed()) {
            const ConditionReport report = cmd_audit(resolve(audit_opts, ""));
            std::cout << report.to_text();
            std::cout << (report.all_pass() ? "RESULT: PASS\n" : "RESULT: FAIL\n");
            return report.all_pass() ? kExitOk : kExitAudit;
        }
        if (figure->parsed()) {
            if (preset_name.empty() && figure_opts.config_path.empty()) {
                std::cerr << "figure: need --preset or --config\n";
                return kExitValidation;
            }
            return report_exit(cmd_figure(resolve(figure_opts, preset_name),
                                          figure_opts.out_dir));
        }
        if (conv->parsed())
            return report_exit(cmd_convergence(resolve(conv_opts, ""), conv_opts.out_dir));
        if (cmp->parsed())
            return report_exit(cmd_compare_classical(resolve(cmp_opts, ""), cmp_opts.out_dir));
    } catch (const InvalidInput& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const AuditFailure& e) {
        std::cerr << "audit failure: " << e.what() << "\n";
        return kExitAudit;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitValidation;
}
