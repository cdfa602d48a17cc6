// hybridqc: run hybrid quantum-classical simulations from config files or presets.
//
//   hybridqc run <config|preset>
//   hybridqc sweep <config|preset> --axis mu --values 0,5
//   hybridqc presets list | presets show <name>
//   hybridqc verify
//
// Exit codes: 0 success, 1 config error, 2 integration failure, 3 acceptance failure.

#include <CLI11.hpp>

#include <iostream>

#include "hybridqc/acceptance.hpp"
#include "hybridqc/runner.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kIntegrationFailure = 2, kAcceptanceFailure = 3 };

void print_summary(const hqc::RunSummary& s) {
    std::cout << s.config.name << ": verdict " << hqc::to_string(s.verdict);
    if (s.lyapunov) std::cout << ", lyapunov " << s.lyapunov->exponent << " +- " << s.lyapunov->standard_error;
    std::cout << " (" << s.wall_seconds << " s)\n";
    for (const auto& r : s.reports) {
        std::cout << "  " << r.series << ": peak fraction " << r.report.dominant_peak_fraction << ", flatness "
                  << r.report.spectral_flatness << " (baseline " << r.report.flatness_baseline << "), "
                  << hqc::to_string(r.report.verdict) << "\n";
    }
    for (const auto& [label, drift] : s.drifts) std::cout << "  drift " << label << " " << drift << "\n";
    for (const auto& w : s.config.warnings) std::cout << "  warning: " << w << "\n";
    for (const auto& f : s.files) std::cout << "  wrote " << f.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid quantum-classical dynamics: two qubits coupled to a classical oscillator"};
    app.require_subcommand(1);

    std::string run_target;
    auto* run_cmd = app.add_subcommand("run", "Integrate one configuration and write outputs");
    run_cmd->add_option("config", run_target, "Config file or preset name")->required();

    std::string sweep_target, axis;
    std::vector<double> values;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run one configuration over a list of parameter values");
    sweep_cmd->add_option("config", sweep_target, "Config file or preset name")->required();
    sweep_cmd->add_option("--axis", axis, "Model parameter (omega, mu, beta, m, k, c1, c2, hbar)")->required();
    sweep_cmd->add_option("--values", values, "Comma-separated values")->delimiter(',');

    auto* presets_cmd = app.add_subcommand("presets", "Built-in presets");
    presets_cmd->require_subcommand(1);
    presets_cmd->add_subcommand("list", "List preset names");
    std::string show_name;
    auto* show_cmd = presets_cmd->add_subcommand("show", "Print a preset as TOML");
    show_cmd->add_option("name", show_name)->required();

    std::string work_dir;
    std::vector<int> only;
    auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite");
    verify_cmd->add_option("--work-dir", work_dir, "Scratch directory for output comparisons");
    verify_cmd->add_option("--only", only, "Criterion ids to run")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const auto summary = hqc::run(hqc::resolve_config(run_target));
            print_summary(summary);
            return kOk;
        }
        if (*sweep_cmd) {
            const auto summaries = hqc::sweep(hqc::resolve_config(sweep_target), axis, values);
            bool all_ok = true;
            for (std::size_t i = 0; i < summaries.size(); ++i) {
                const auto& s = summaries[i];
                std::cout << axis << "=" << values[i] << ": "
                          << (s.ok ? std::string(hqc::to_string(s.verdict)) : "FAILED: " + s.error) << "\n";
                all_ok = all_ok && s.ok;
            }
            return all_ok ? kOk : kIntegrationFailure;
        }
        if (*presets_cmd) {
            if (*show_cmd) {
                std::cout << hqc::preset_toml(show_name);
            } else {
                for (const auto& name : hqc::preset_names()) std::cout << name << "\n";
            }
            return kOk;
        }
        if (*verify_cmd) {
            hqc::acceptance::Options opts;
            opts.work_dir = work_dir;
            opts.only = only;
            const auto results = hqc::acceptance::run_all(opts, std::cout);
            bool ok = true;
            for (const auto& r : results) ok = ok && r.passed;
            std::cout << (ok ? "all criteria passed\n" : "acceptance FAILED\n");
            return ok ? kOk : kAcceptanceFailure;
        }
    } catch (const hqc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const hqc::RunError& e) {
        std::cerr << "integration failure: " << e.what() << "\n";
        return kIntegrationFailure;
    } catch (const hqc::IntegrationError& e) {
        std::cerr << "integration failure: " << e.what() << "\n";
        return kIntegrationFailure;
    }
    return kOk;
}
