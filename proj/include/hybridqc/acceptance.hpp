#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace hqc::acceptance {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    /// Scratch space for the determinism check.
    std::filesystem::path work_dir;
    /// Criterion ids to run; empty runs all seven.
    std::vector<int> only;
};

/// Runs the acceptance criteria, printing one PASS/FAIL line per criterion to `log`.
std::vector<CriterionResult> run_all(const Options& options, std::ostream& log);

/// Regression baselines for the chaotic presets (20% tolerance).
inline constexpr double kLyapunovBaselineNs2 = 1.8096;
inline constexpr double kLyapunovBaselineNs1 = 1.4426;
inline constexpr double kLyapunovBaselineTolerance = 0.20;

/// Explicit Hamilton functions of the three two-qubit models in canonical coordinates,
/// written out term by term (independent of the matrix route).
double explicit_hamilton_symmetric(const double* x, const double* y, double omega, double mu);
double explicit_hamilton_ns1(const double* x, const double* y, double omega, double mu, double beta);
double explicit_hamilton_ns2(const double* x, const double* y, double omega, double mu);

}  // namespace hqc::acceptance
