#pragma once

#include <array>

#include "hybridqc/pauli_algebra.hpp"

namespace hqc {

using Real4 = std::array<double, 4>;
using RealMatrix4 = std::array<std::array<double, 4>, 4>;

/// Canonical coordinates of the quantum subsystem: c_n = (x_n + i y_n) / sqrt(2 hbar).
struct QuantumPhasePoint {
    Real4 x{};
    Real4 y{};

    /// sum(x^2 + y^2); equals 2*hbar for a normalized state.
    double norm_squared() const;

    friend bool operator==(const QuantumPhasePoint&, const QuantumPhasePoint&) = default;
};

/// Hermitian operator A = R + iS stored as its real symmetric part R and real
/// antisymmetric part S, with an overall scale.
class QuadraticObservable {
public:
    QuadraticObservable() = default;
    explicit QuadraticObservable(const ComplexMatrix& matrix, double scale = 1.0);

    const RealMatrix4& real_part() const { return real_; }
    const RealMatrix4& imag_part() const { return imag_; }
    double scale() const { return scale_; }

    ComplexMatrix matrix() const;

    /// Adds `factor` times another observable (both scales folded in; result has scale 1).
    QuadraticObservable& add_scaled(const QuadraticObservable& other, double factor);

private:
    RealMatrix4 real_{};
    RealMatrix4 imag_{};
    double scale_ = 1.0;
};

struct PhaseGradient {
    Real4 gx{};
    Real4 gy{};
};

QuantumPhasePoint state_to_coords(const ComplexVector4& psi, double hbar);
ComplexVector4 coords_to_state(const QuantumPhasePoint& point, double hbar);

/// <psi|A|psi> for psi = coords_to_state(point):
///   (1/2hbar) [x'Rx + y'Ry - 2 x'Sy] * scale
double eval_observable(const QuadraticObservable& a, const QuantumPhasePoint& point, double hbar);

/// Exact gradient: gx = (Rx - Sy) scale/hbar, gy = (Ry + Sx) scale/hbar.
PhaseGradient gradient(const QuadraticObservable& a, const QuantumPhasePoint& point, double hbar);

/// <sigma_axis^qubit> at the given phase point (qubit is 1 or 2).
double expectation_sigma(int qubit, PauliAxis axis, const QuantumPhasePoint& point, double hbar);

}  // namespace hqc
