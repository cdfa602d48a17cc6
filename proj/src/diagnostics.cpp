#include "hybridqc/diagnostics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hqc {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<double> bin_powers(const AmplitudeSpectrum& sp) {
    std::vector<double> power(sp.amps.size());
    std::transform(sp.amps.begin(), sp.amps.end(), power.begin(), [](double a) { return a * a; });
    return power;
}

}  // namespace

AmplitudeSpectrum amplitude_spectrum(std::span<const double> series, double dt_sample) {
    const std::size_t n = series.size();
    if (n < 16) throw std::invalid_argument("amplitude_spectrum: need at least 16 samples, got " + std::to_string(n));
    if (!(dt_sample > 0.0)) throw std::invalid_argument("amplitude_spectrum: sample spacing must be positive");

    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    const std::size_t n_out = n / 2 + 1;

    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n_out);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }

    double window_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // periodic Hann
        const double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)));
        window_sum += w;
        in[i] = w * (series[i] - mean);
    }
    fftw_execute(plan);

    AmplitudeSpectrum sp;
    sp.n_samples = n;
    sp.window_sum = window_sum;
    sp.freqs.resize(n_out);
    sp.amps.resize(n_out);
    const double df = 1.0 / (static_cast<double>(n) * dt_sample);
    for (std::size_t k = 0; k < n_out; ++k) {
        const bool unpaired = (k == 0) || (n % 2 == 0 && k == n / 2);
        sp.freqs[k] = static_cast<double>(k) * df;
        sp.amps[k] = (unpaired ? 1.0 : 2.0) * std::hypot(out[k][0], out[k][1]) / window_sum;
    }

    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return sp;
}

double dominant_peak_fraction(const AmplitudeSpectrum& sp) {
    if (sp.amps.empty()) throw std::invalid_argument("dominant_peak_fraction: empty spectrum");
    const auto power = bin_powers(sp);
    const double total = std::accumulate(power.begin(), power.end(), 0.0);
    if (total <= 0.0) return 0.0;
    const auto peak = static_cast<std::size_t>(std::max_element(power.begin(), power.end()) - power.begin());
    double top = power[peak];
    if (peak > 0) top += power[peak - 1];
    if (peak + 1 < power.size()) top += power[peak + 1];
    return top / total;
}

double spectral_flatness(const AmplitudeSpectrum& sp) {
    if (sp.amps.empty()) throw std::invalid_argument("spectral_flatness: empty spectrum");
    auto power = bin_powers(sp);
    const double peak = *std::max_element(power.begin(), power.end());
    if (peak <= 0.0) return 1.0;
    const double floor = 1e-15 * peak;
    double log_sum = 0.0, sum = 0.0;
    for (double& p : power) {
        p = std::max(p, floor);
        log_sum += std::log(p);
        sum += p;
    }
    const double count = static_cast<double>(power.size());
    return std::min(1.0, std::exp(log_sum / count) / (sum / count));
}

double pure_tone_flatness(std::size_t n_samples, double dt_sample) {
    // Quarter of the Nyquist band, on an exact bin.
    const std::size_t bin = std::max<std::size_t>(1, n_samples / 8);
    const double freq = static_cast<double>(bin) / (static_cast<double>(n_samples) * dt_sample);
    std::vector<double> tone(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i)
        tone[i] = std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) * dt_sample);
    return spectral_flatness(amplitude_spectrum(tone, dt_sample));
}

LyapunovEstimate lyapunov_benettin(const HybridModel& m, const HybridState& s0, const IntegratorConfig& cfg,
                                   const LyapunovConfig& lcfg) {
    if (!(lcfg.d0 > 0.0)) throw std::invalid_argument("d0: must be positive");
    if (lcfg.n_renorms < 1) throw std::invalid_argument("n_renorms: must be >= 1");
    if (!(lcfg.renorm_interval > 0.0)) throw std::invalid_argument("renorm_interval: must be positive");
    if (cfg.dt == 0.0 || !std::isfinite(cfg.dt)) throw std::invalid_argument("dt: must be nonzero");

    const HybridHamiltonian h(m);
    const long steps_per_interval = step_count(lcfg.renorm_interval, std::abs(cfg.dt));
    const double interval = static_cast<double>(steps_per_interval) * std::abs(cfg.dt);

    std::mt19937_64 rng(lcfg.seed);
    std::normal_distribution<double> gauss;
    StateArray direction;
    double dnorm = 0.0;
    for (double& d : direction) {
        d = gauss(rng);
        dnorm += d * d;
    }
    dnorm = std::sqrt(dnorm);

    StateArray ref = s0.to_array();
    StateArray companion = ref;
    for (std::size_t i = 0; i < kHybridDim; ++i) companion[i] += lcfg.d0 * direction[i] / dnorm;

    std::vector<double> rates;
    rates.reserve(static_cast<std::size_t>(lcfg.n_renorms));
    double log_sum = 0.0;
    for (int r = 0; r < lcfg.n_renorms; ++r) {
        for (long s = 0; s < steps_per_interval; ++s) {
            ref = step(h, ref, cfg);
            companion = step(h, companion, cfg);
        }
        double d = 0.0;
        for (std::size_t i = 0; i < kHybridDim; ++i) d += (companion[i] - ref[i]) * (companion[i] - ref[i]);
        d = std::sqrt(d);
        if (!(d > 0.0) || !std::isfinite(d) || d / lcfg.d0 > 1e150) {
            throw std::runtime_error("lyapunov_benettin: separation left the representable range at renormalization " +
                                     std::to_string(r) + "; try a different d0 or a shorter renorm_interval");
        }
        const double growth = std::log(d / lcfg.d0);
        log_sum += growth;
        rates.push_back(growth / interval);
        for (std::size_t i = 0; i < kHybridDim; ++i) companion[i] = ref[i] + (companion[i] - ref[i]) * (lcfg.d0 / d);
    }

    LyapunovEstimate est;
    est.n_renorms = lcfg.n_renorms;
    est.exponent = log_sum / (static_cast<double>(lcfg.n_renorms) * interval);
    if (lcfg.n_renorms > 1) {
        double var = 0.0;
        for (double r : rates) var += (r - est.exponent) * (r - est.exponent);
        var /= static_cast<double>(lcfg.n_renorms - 1);
        est.standard_error = std::sqrt(var / static_cast<double>(lcfg.n_renorms));
    }
    return est;
}

double conservation_drift(const Trajectory& traj, std::string_view label) {
    const auto& values = traj.series(label);
    double worst = 0.0;
    for (double v : values) worst = std::max(worst, std::abs(v - values.front()));
    return worst;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Regular: return "Regular";
        case Verdict::Chaotic: return "Chaotic";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

Verdict classify(double lyapunov, double peak_fraction, double flatness, double baseline,
                 const VerdictThresholds& t) {
    if (std::abs(lyapunov) < t.regular_max_lyapunov && peak_fraction > t.regular_min_peak_fraction)
        return Verdict::Regular;
    if (lyapunov > t.chaotic_min_lyapunov && flatness > t.chaotic_flatness_factor * baseline) return Verdict::Chaotic;
    return Verdict::Indeterminate;
}

ChaosReport chaos_report(const AmplitudeSpectrum& sp, const LyapunovEstimate& lyap, const VerdictThresholds& t) {
    ChaosReport r;
    r.lyapunov = lyap.exponent;
    r.lyapunov_error = lyap.standard_error;
    r.dominant_peak_fraction = dominant_peak_fraction(sp);
    r.spectral_flatness = spectral_flatness(sp);
    r.flatness_baseline = pure_tone_flatness(sp.n_samples, 1.0 / (static_cast<double>(sp.n_samples) * sp.freqs.at(1)));
    r.thresholds = t;
    r.verdict = classify(r.lyapunov, r.dominant_peak_fraction, r.spectral_flatness, r.flatness_baseline, t);
    return r;
}

}  // namespace hqc
