#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridqc/diagnostics.hpp"

namespace hqc {

/// Invalid or unparsable configuration. `key()` names the offending entry when known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string key = {})
        : std::runtime_error(what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// Integration failed during a run; partial outputs were written and marked.
class RunError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InitialStateSpec {
    enum class Kind { Named, Explicit, Random };
    Kind kind = Kind::Named;
    /// "equal-superposition" or "basis-1".."basis-4" for Kind::Named.
    std::string name = "equal-superposition";
    ComplexVector4 amplitudes{};
    std::uint64_t seed = 0;
    double q = 1.0;
    double p = 0.0;
};

/// Builds the normalized quantum state (scaled to the 2*hbar convention) plus (q, p).
/// Explicit amplitudes must already be normalized within 1e-9.
HybridState make_initial_state(const InitialStateSpec& spec, double hbar);

struct RunConfig {
    std::string name = "run";
    HybridModel model;
    InitialStateSpec initial;
    IntegratorConfig integrator;
    double horizon = 2000.0;
    int sample_every = 10;

    bool spectra = true;
    bool lyapunov = true;
    LyapunovConfig lyapunov_config{1.0, 30000, 1e-8, 1};
    VerdictThresholds thresholds;

    std::string output_dir = "output";

    /// Keys filled from defaults, and notes such as the beta default for ns1.
    std::vector<std::string> defaulted;
    std::vector<std::string> warnings;

    void validate() const;
};

RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Fully explicit TOML rendering; parse_config(to_toml(c)) reproduces the run.
std::string to_toml(const RunConfig& cfg);

std::vector<std::string> preset_names();
/// TOML text of a built-in preset; throws ConfigError for an unknown name.
std::string preset_toml(const std::string& name);
RunConfig preset_config(const std::string& name);

/// A path to an existing file is loaded; otherwise the argument is looked up as a preset name.
RunConfig resolve_config(const std::string& path_or_preset);

struct SeriesReport {
    std::string series;
    ChaosReport report;
};

struct RunSummary {
    RunConfig config;
    bool ok = true;
    std::string error;
    double final_time = 0.0;
    std::map<std::string, double> drifts;
    std::optional<LyapunovEstimate> lyapunov;
    std::vector<SeriesReport> reports;  // q then x1 when spectra are enabled
    /// Regular iff the q series is Regular; Chaotic iff every series is Chaotic.
    Verdict verdict = Verdict::Indeterminate;
    double wall_seconds = 0.0;
    std::vector<std::filesystem::path> files;

    const SeriesReport* report_for(const std::string& series) const;
};

/// Output directory after applying the HQC_OUTPUT_DIR environment override.
std::filesystem::path effective_output_dir(const RunConfig& cfg);

/// Integrates, runs the enabled diagnostics on q(t) and x1(t), and writes
///   <name>_timeseries.csv, <name>_spectrum_q.csv, <name>_spectrum_x1.csv,
///   <name>_config.toml, <name>_summary.json
/// Throws RunError after flushing <name>_timeseries.partial.csv and a failed summary.
RunSummary run(const RunConfig& cfg);

/// Runs without writing any files.
RunSummary run_in_memory(const RunConfig& cfg);

/// Sets a model parameter by name (omega, mu, beta, m, k, c1, c2, hbar).
void set_model_parameter(HybridModel& model, const std::string& axis, double value);

/// One independent run per value (concurrently, up to `max_threads`; 0 = hardware
/// concurrency), summaries in input order. A failing run is marked, not fatal.
/// Writes <output_dir>/sweep_<axis>.csv unless `write_files` is false.
std::vector<RunSummary> sweep(const RunConfig& base, const std::string& axis, const std::vector<double>& values,
                              bool write_files = true, unsigned max_threads = 0);

std::string summary_json(const RunSummary& summary);

}  // namespace hqc
