#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hybridqc/phase_space.hpp"

namespace hqc {

inline constexpr std::size_t kHybridDim = 10;
using StateArray = std::array<double, kHybridDim>;

/// Point of the hybrid phase space: quantum canonical coordinates plus oscillator (q, p).
struct HybridState {
    QuantumPhasePoint quantum;
    double q = 0.0;
    double p = 0.0;

    /// Layout (x1..x4, y1..y4, q, p).
    StateArray to_array() const;
    static HybridState from_array(const StateArray& a);

    friend bool operator==(const HybridState&, const HybridState&) = default;
};

struct HybridModel {
    ModelKind kind = ModelKind::Symmetric;
    double omega = 1.0;
    double mu = 5.0;
    double beta = 1.0;
    double mass = 1.0;
    double stiffness = 1.0;
    double c1 = 15.0;
    double c2 = 1.0;
    double hbar = 1.0;

    QuantumParams quantum_params() const { return {omega, mu, beta}; }
    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// One term q * strength * <A> of the quantum-classical interaction.
struct QuadraticCoupling {
    std::string label;
    QuadraticObservable op;
    double strength = 0.0;
};

/// Total Hamiltonian H_q(x,y) + p^2/2m + k q^2 + q * sum_j strength_j <A_j>.
///
/// Holds the precomputed quadratic forms so the vector field can be evaluated in
/// real arithmetic only. The default coupling is c1*hbar*sz1 + c2*hbar*sz2.
class HybridHamiltonian {
public:
    explicit HybridHamiltonian(const HybridModel& model);
    HybridHamiltonian(const HybridModel& model, std::vector<QuadraticCoupling> couplings);

    const HybridModel& model() const { return model_; }
    const QuadraticObservable& quantum_part() const { return quantum_; }
    const std::vector<QuadraticCoupling>& couplings() const { return couplings_; }
    /// sum_j strength_j A_j as a single quadratic form.
    const QuadraticObservable& coupling_sum() const { return coupling_sum_; }

    double quantum_energy(const HybridState& s) const;
    double classical_energy(const HybridState& s) const;
    /// sum_j strength_j <A_j>, i.e. dH_int/dq.
    double coupling_force(const HybridState& s) const;
    double energy(const HybridState& s) const;

    /// (dx/dt, dy/dt, dq/dt, dp/dt) in the to_array() layout.
    StateArray vector_field(const StateArray& z) const;
    HybridState vector_field(const HybridState& s) const;

private:
    HybridModel model_;
    QuadraticObservable quantum_;
    std::vector<QuadraticCoupling> couplings_;
    QuadraticObservable coupling_sum_;
};

double total_energy(const HybridState& s, const HybridModel& m);
HybridState vector_field(const HybridState& s, const HybridModel& m);

struct ObservableFunction {
    std::string label;
    std::function<double(const HybridState&)> evaluate;
};

/// Canonical Poisson bracket {f, g} over all ten coordinates, partials by central
/// differences with step max(1e-6 |z_i|, 1e-8).
double poisson_bracket(const ObservableFunction& f, const ObservableFunction& g, const HybridState& s,
                       const HybridModel& m);

namespace labels {
inline constexpr const char* kEnergy = "energy";
inline constexpr const char* kSigmaZ1 = "sigma_z1";
inline constexpr const char* kSigmaZ2 = "sigma_z2";
inline constexpr const char* kNorm = "norm";
inline constexpr const char* kQuantumEnergy = "h_quantum";
}  // namespace labels

ObservableFunction energy_observable(const HybridModel& m);
ObservableFunction sigma_z_observable(int qubit, const HybridModel& m);
/// sum |c_n|^2, i.e. norm_squared / 2hbar.
ObservableFunction norm_observable(const HybridModel& m);
ObservableFunction quantum_energy_observable(const HybridModel& m);

/// Constants of motion for the model:
///   Symmetric:     energy, sigma_z1, sigma_z2, norm
///   NonSymmetric1: energy, sigma_z2, norm
///   NonSymmetric2: energy, norm
std::vector<ObservableFunction> conserved_set(const HybridModel& m);

/// Everything recorded along a trajectory: the conserved set plus sigma_z of both
/// qubits and H_q, in a fixed order (energy, norm, sigma_z1, sigma_z2, h_quantum).
std::vector<ObservableFunction> tracked_observables(const HybridModel& m);

}  // namespace hqc
