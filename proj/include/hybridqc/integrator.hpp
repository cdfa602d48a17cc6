#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hybridqc/hybrid_system.hpp"

namespace hqc {

/// ImplicitMidpoint: symplectic, implicit (fixed-point solve).
/// ExplicitRK4: classical four-stage reference scheme.
/// Splitting: Strang composition of the exact oscillator flow (half steps) around the
/// exact flow of H_q + q*coupling at frozen q (4x4 unitary plus the time-integrated kick
/// on p). Symplectic, explicit, conserves the norm and every operator commuting with
/// H_q and the coupling to round-off.
enum class Scheme { ImplicitMidpoint, ExplicitRK4, Splitting };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view text);

struct IntegratorConfig {
    double dt = 0.01;
    Scheme scheme = Scheme::Splitting;
    double fixed_point_tol = 1e-13;
    int fixed_point_max_iters = 50;

    void validate() const;
};

/// Raised when the implicit midpoint fixed-point solve does not converge.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, int iterations, double residual, double time = 0.0)
        : std::runtime_error(what), iterations_(iterations), residual_(residual), time_(time) {}

    int iterations() const { return iterations_; }
    double residual() const { return residual_; }
    double time() const { return time_; }

private:
    int iterations_;
    double residual_;
    double time_;
};

/// One step of size cfg.dt (any sign; dt == 0 returns the input unchanged).
/// Implicit midpoint solves z' = z + dt F((z + z')/2) by fixed-point iteration until the
/// max-norm update is below fixed_point_tol * max(1, |z|_inf).
StateArray step(const HybridHamiltonian& h, const StateArray& z, const IntegratorConfig& cfg);
HybridState step(const HybridHamiltonian& h, const HybridState& s, const IntegratorConfig& cfg);
HybridState step(const HybridState& s, const HybridModel& m, const IntegratorConfig& cfg);

struct Trajectory {
    std::vector<double> times;
    std::vector<HybridState> states;
    std::vector<std::string> labels;
    /// values[k][i] is observable labels[k] at sample i.
    std::vector<std::vector<double>> values;

    std::size_t size() const { return times.size(); }
    /// Throws std::out_of_range for an unknown label.
    const std::vector<double>& series(std::string_view label) const;
    /// q, p, x1..x4, y1..y4 by name.
    std::vector<double> coordinate_series(std::string_view name) const;
};

/// Steps from t=0 until t_end (final time within dt of t_end), recording every
/// `sample_every`-th state together with all tracked observables.
/// Step failures are rethrown as IntegrationError with the failing time attached.
Trajectory integrate(const HybridState& s0, const HybridModel& m, const IntegratorConfig& cfg, double t_end,
                     int sample_every);

struct IntegrationOutcome {
    Trajectory trajectory;
    /// Set when a step failed; the trajectory then holds the samples recorded before it.
    std::optional<IntegrationError> failure;
};

/// Same as integrate() but returns the partial trajectory instead of throwing on step failure.
IntegrationOutcome integrate_checked(const HybridState& s0, const HybridModel& m, const IntegratorConfig& cfg,
                                     double t_end, int sample_every);

/// Number of steps integrate() takes for the horizon.
long step_count(double t_end, double dt);

}  // namespace hqc
