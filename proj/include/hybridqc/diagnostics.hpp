#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridqc/integrator.hpp"

namespace hqc {

/// One-sided amplitude spectrum; freqs in cycles per unit time.
struct AmplitudeSpectrum {
    std::vector<double> freqs;
    std::vector<double> amps;
    /// Number of time samples the spectrum was computed from.
    std::size_t n_samples = 0;
    /// Sum of the Hann window weights used for normalization.
    double window_sum = 0.0;

    std::size_t size() const { return freqs.size(); }
};

/// |DFT| of the mean-removed, Hann-windowed series, one-sided, scaled so that a
/// unit-amplitude sinusoid centred on a bin peaks at 1. Needs at least 16 samples.
AmplitudeSpectrum amplitude_spectrum(std::span<const double> series, double dt_sample);

/// Power in the largest bin and its two neighbours over total power (0 for an all-zero spectrum).
double dominant_peak_fraction(const AmplitudeSpectrum& sp);

/// Geometric over arithmetic mean of bin powers, with bins below 1e-15 of the peak
/// clamped to that floor.
double spectral_flatness(const AmplitudeSpectrum& sp);

/// Flatness of a unit sinusoid with the same length and spacing, placed on a bin centre.
double pure_tone_flatness(std::size_t n_samples, double dt_sample);

struct LyapunovConfig {
    double renorm_interval = 1.0;
    int n_renorms = 10000;
    double d0 = 1e-8;
    /// Seeds the direction of the initial perturbation.
    unsigned long long seed = 1;
};

struct LyapunovEstimate {
    double exponent = 0.0;
    /// Standard error of the mean over the per-interval rates.
    double standard_error = 0.0;
    int n_renorms = 0;
};

/// Two-trajectory Benettin estimate of the largest Lyapunov exponent. The separation is
/// measured in the full ten-dimensional Euclidean norm. A negative cfg.dt integrates
/// backwards in time.
LyapunovEstimate lyapunov_benettin(const HybridModel& m, const HybridState& s0, const IntegratorConfig& cfg,
                                   const LyapunovConfig& lcfg);

/// max_i |value_i - value_0| for a recorded observable; throws std::out_of_range on an unknown label.
double conservation_drift(const Trajectory& traj, std::string_view label);

enum class Verdict { Regular, Chaotic, Indeterminate };
std::string_view to_string(Verdict v);

struct VerdictThresholds {
    double regular_max_lyapunov = 1e-3;
    double regular_min_peak_fraction = 0.8;
    double chaotic_min_lyapunov = 5e-3;
    double chaotic_flatness_factor = 10.0;
};

struct ChaosReport {
    double lyapunov = 0.0;
    double lyapunov_error = 0.0;
    double dominant_peak_fraction = 0.0;
    double spectral_flatness = 0.0;
    double flatness_baseline = 0.0;
    Verdict verdict = Verdict::Indeterminate;
    VerdictThresholds thresholds;
};

/// Regular iff |lambda| < regular_max_lyapunov and peak fraction > regular_min_peak_fraction;
/// Chaotic iff lambda > chaotic_min_lyapunov and flatness > factor * baseline; otherwise Indeterminate.
Verdict classify(double lyapunov, double peak_fraction, double flatness, double baseline,
                 const VerdictThresholds& thresholds);

ChaosReport chaos_report(const AmplitudeSpectrum& sp, const LyapunovEstimate& lyap,
                         const VerdictThresholds& thresholds);

}  // namespace hqc
