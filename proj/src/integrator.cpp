#include "hybridqc/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hqc {

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::ImplicitMidpoint: return "implicit_midpoint";
        case Scheme::ExplicitRK4: return "rk4";
        case Scheme::Splitting: return "splitting";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view text) {
    if (text == "implicit_midpoint" || text == "midpoint") return Scheme::ImplicitMidpoint;
    if (text == "rk4" || text == "explicit_rk4") return Scheme::ExplicitRK4;
    if (text == "splitting" || text == "split") return Scheme::Splitting;
    throw std::invalid_argument("unknown integration scheme '" + std::string(text) + "'");
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt: must be positive");
    if (!(fixed_point_tol > 0.0)) throw std::invalid_argument("fixed_point_tol: must be positive");
    if (fixed_point_max_iters < 1) throw std::invalid_argument("fixed_point_max_iters: must be >= 1");
}

namespace {

StateArray axpy(const StateArray& z, double a, const StateArray& k) {
    StateArray out;
    for (std::size_t i = 0; i < kHybridDim; ++i) out[i] = z[i] + a * k[i];
    return out;
}

StateArray rk4_step(const HybridHamiltonian& h, const StateArray& z, double dt) {
    const auto k1 = h.vector_field(z);
    const auto k2 = h.vector_field(axpy(z, 0.5 * dt, k1));
    const auto k3 = h.vector_field(axpy(z, 0.5 * dt, k2));
    const auto k4 = h.vector_field(axpy(z, dt, k3));
    StateArray out;
    for (std::size_t i = 0; i < kHybridDim; ++i)
        out[i] = z[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

StateArray midpoint_step(const HybridHamiltonian& h, const StateArray& z, const IntegratorConfig& cfg) {
    const double dt = cfg.dt;
    StateArray next = axpy(z, dt, h.vector_field(z));
    double scale = 1.0;
    for (double v : z) scale = std::max(scale, std::abs(v));
    const double tol = cfg.fixed_point_tol * scale;
    double residual = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= cfg.fixed_point_max_iters; ++iter) {
        StateArray mid;
        for (std::size_t i = 0; i < kHybridDim; ++i) mid[i] = 0.5 * (z[i] + next[i]);
        const StateArray candidate = axpy(z, dt, h.vector_field(mid));
        residual = 0.0;
        for (std::size_t i = 0; i < kHybridDim; ++i) residual = std::max(residual, std::abs(candidate[i] - next[i]));
        next = candidate;
        if (residual <= tol) return next;
        // Stalled at the round-off floor just above tol.
        if (residual >= previous && residual <= 100.0 * tol) return next;
        previous = residual;
    }
    std::ostringstream msg;
    msg << "implicit midpoint did not converge in " << cfg.fixed_point_max_iters << " iterations (residual "
        << residual << "); reduce dt";
    throw IntegrationError(msg.str(), cfg.fixed_point_max_iters, residual);
}

// Exact flow of p^2/2m + k q^2 over time t.
void oscillator_flow(double& q, double& p, double mass, double stiffness, double t) {
    const double w = std::sqrt(2.0 * stiffness / mass);
    const double c = std::cos(w * t), s = std::sin(w * t);
    const double q0 = q, p0 = p;
    q = q0 * c + p0 / (mass * w) * s;
    p = p0 * c - mass * w * q0 * s;
}

ComplexMatrix as_matrix(const QuadraticObservable& a, double factor) {
    ComplexMatrix m(4);
    const double f = factor * a.scale();
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m(i, j) = f * Complex(a.real_part()[i][j], a.imag_part()[i][j]);
    return m;
}

// (e^{i w t} - 1) / (i w), stable as w -> 0.
Complex phase_integral(double w, double t) {
    const double half = 0.5 * w * t;
    const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
    return t * sinc * std::polar(1.0, half);
}

// Exact flow of H_q + q <C> with q frozen: psi <- exp(-i (H_q + q C) t / hbar) psi and
// p <- p - int_0^t <C>(s) ds.
void quantum_flow(const HybridHamiltonian& h, StateArray& z, double t) {
    const double hbar = h.model().hbar;
    const double q = z[8];
    ComplexMatrix generator = as_matrix(h.quantum_part(), 1.0);
    if (q != 0.0) generator += as_matrix(h.coupling_sum(), q);
    const auto eig = hermitian_eigen(generator);
    const auto& v = eig.vectors;

    const double s = std::sqrt(2.0 * hbar);
    ComplexVector4 psi;
    for (std::size_t n = 0; n < 4; ++n) psi[n] = Complex(z[n], z[4 + n]) / s;

    // Eigenbasis amplitudes b = V^dagger psi and coupling C~ = V^dagger C V.
    ComplexVector4 b{};
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < 4; ++i) b[k] += std::conj(v(i, k)) * psi[i];
    const ComplexMatrix coupling = as_matrix(h.coupling_sum(), 1.0);
    const ComplexMatrix coupling_eig = v.adjoint() * coupling * v;

    double kick = 0.0;
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t l = 0; l < 4; ++l) {
            const double w = (eig.values[k] - eig.values[l]) / hbar;
            kick += (std::conj(b[k]) * coupling_eig(k, l) * b[l] * phase_integral(w, t)).real();
        }

    for (std::size_t k = 0; k < 4; ++k) b[k] *= std::polar(1.0, -eig.values[k] * t / hbar);
    for (std::size_t n = 0; n < 4; ++n) {
        Complex c{};
        for (std::size_t k = 0; k < 4; ++k) c += v(n, k) * b[k];
        z[n] = s * c.real();
        z[4 + n] = s * c.imag();
    }
    z[9] -= kick;
}

StateArray splitting_step(const HybridHamiltonian& h, const StateArray& z, double dt) {
    const auto& m = h.model();
    StateArray out = z;
    oscillator_flow(out[8], out[9], m.mass, m.stiffness, 0.5 * dt);
    quantum_flow(h, out, dt);
    oscillator_flow(out[8], out[9], m.mass, m.stiffness, 0.5 * dt);
    return out;
}

}  // namespace

StateArray step(const HybridHamiltonian& h, const StateArray& z, const IntegratorConfig& cfg) {
    if (cfg.dt == 0.0) return z;
    switch (cfg.scheme) {
        case Scheme::ImplicitMidpoint: return midpoint_step(h, z, cfg);
        case Scheme::ExplicitRK4: return rk4_step(h, z, cfg.dt);
        case Scheme::Splitting: return splitting_step(h, z, cfg.dt);
    }
    return z;
}

HybridState step(const HybridHamiltonian& h, const HybridState& s, const IntegratorConfig& cfg) {
    return HybridState::from_array(step(h, s.to_array(), cfg));
}

HybridState step(const HybridState& s, const HybridModel& m, const IntegratorConfig& cfg) {
    return step(HybridHamiltonian(m), s, cfg);
}

const std::vector<double>& Trajectory::series(std::string_view label) const {
    for (std::size_t k = 0; k < labels.size(); ++k)
        if (labels[k] == label) return values[k];
    throw std::out_of_range("trajectory has no observable '" + std::string(label) + "'");
}

std::vector<double> Trajectory::coordinate_series(std::string_view name) const {
    std::size_t index = kHybridDim;
    if (name == "q") index = 8;
    else if (name == "p") index = 9;
    else if (name.size() == 2 && (name[0] == 'x' || name[0] == 'y') && name[1] >= '1' && name[1] <= '4')
        index = (name[0] == 'x' ? 0 : 4) + static_cast<std::size_t>(name[1] - '1');
    if (index == kHybridDim) throw std::out_of_range("unknown coordinate '" + std::string(name) + "'");
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.to_array()[index]);
    return out;
}

long step_count(double t_end, double dt) { return std::max(1L, std::lround(t_end / dt)); }

IntegrationOutcome integrate_checked(const HybridState& s0, const HybridModel& m, const IntegratorConfig& cfg,
                                     double t_end, int sample_every) {
    cfg.validate();
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end: must be positive");
    if (sample_every < 1) throw std::invalid_argument("sample_every: must be >= 1");

    const HybridHamiltonian h(m);
    const auto observables = tracked_observables(m);
    const long n_steps = step_count(t_end, cfg.dt);

    IntegrationOutcome outcome;
    Trajectory& traj = outcome.trajectory;
    for (const auto& o : observables) traj.labels.push_back(o.label);
    traj.values.resize(observables.size());
    const std::size_t expected = static_cast<std::size_t>(n_steps / sample_every) + 2;
    traj.times.reserve(expected);
    traj.states.reserve(expected);
    for (auto& v : traj.values) v.reserve(expected);

    auto record = [&](double t, const StateArray& z) {
        const auto s = HybridState::from_array(z);
        traj.times.push_back(t);
        traj.states.push_back(s);
        for (std::size_t k = 0; k < observables.size(); ++k) traj.values[k].push_back(observables[k].evaluate(s));
    };

    StateArray z = s0.to_array();
    record(0.0, z);
    for (long n = 1; n <= n_steps; ++n) {
        try {
            z = step(h, z, cfg);
        } catch (const IntegrationError& e) {
            const double t = static_cast<double>(n - 1) * cfg.dt;
            std::ostringstream msg;
            msg << e.what() << " at t=" << t;
            outcome.failure.emplace(msg.str(), e.iterations(), e.residual(), t);
            return outcome;
        }
        if (n % sample_every == 0 || n == n_steps) record(static_cast<double>(n) * cfg.dt, z);
    }
    return outcome;
}

Trajectory integrate(const HybridState& s0, const HybridModel& m, const IntegratorConfig& cfg, double t_end,
                     int sample_every) {
    auto outcome = integrate_checked(s0, m, cfg, t_end, sample_every);
    if (outcome.failure) throw *outcome.failure;
    return std::move(outcome.trajectory);
}

}  // namespace hqc
