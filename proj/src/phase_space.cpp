#include "hybridqc/phase_space.hpp"

#include <cmath>
#include <stdexcept>

namespace hqc {

double QuantumPhasePoint::norm_squared() const {
    double sum = 0.0;
    for (std::size_t n = 0; n < 4; ++n) sum += x[n] * x[n] + y[n] * y[n];
    return sum;
}

QuadraticObservable::QuadraticObservable(const ComplexMatrix& matrix, double scale) : scale_(scale) {
    if (matrix.dim() != 4) throw std::invalid_argument("QuadraticObservable: expected a 4x4 matrix");
    if (!matrix.is_hermitian(1e-12 * std::max(1.0, matrix.frobenius_norm()))) {
        throw std::invalid_argument("QuadraticObservable: matrix is not Hermitian");
    }
    // Symmetrize so R is exactly symmetric and S exactly antisymmetric.
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const Complex avg = 0.5 * (matrix(i, j) + std::conj(matrix(j, i)));
            real_[i][j] = avg.real();
            imag_[i][j] = avg.imag();
        }
}

ComplexMatrix QuadraticObservable::matrix() const {
    ComplexMatrix m(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m(i, j) = scale_ * Complex(real_[i][j], imag_[i][j]);
    return m;
}

QuadraticObservable& QuadraticObservable::add_scaled(const QuadraticObservable& other, double factor) {
    const double mine = scale_;
    const double theirs = factor * other.scale_;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            real_[i][j] = mine * real_[i][j] + theirs * other.real_[i][j];
            imag_[i][j] = mine * imag_[i][j] + theirs * other.imag_[i][j];
        }
    scale_ = 1.0;
    return *this;
}

QuantumPhasePoint state_to_coords(const ComplexVector4& psi, double hbar) {
    if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
    const double s = std::sqrt(2.0 * hbar);
    QuantumPhasePoint out;
    for (std::size_t n = 0; n < 4; ++n) {
        out.x[n] = s * psi[n].real();
        out.y[n] = s * psi[n].imag();
    }
    return out;
}

ComplexVector4 coords_to_state(const QuantumPhasePoint& point, double hbar) {
    if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
    const double s = std::sqrt(2.0 * hbar);
    ComplexVector4 out;
    for (std::size_t n = 0; n < 4; ++n) out[n] = Complex(point.x[n], point.y[n]) / s;
    return out;
}

double eval_observable(const QuadraticObservable& a, const QuantumPhasePoint& p, double hbar) {
    const auto& r = a.real_part();
    const auto& s = a.imag_part();
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double rx = 0.0, ry = 0.0, sy = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            rx += r[i][j] * p.x[j];
            ry += r[i][j] * p.y[j];
            sy += s[i][j] * p.y[j];
        }
        sum += p.x[i] * rx + p.y[i] * ry - 2.0 * p.x[i] * sy;
    }
    return sum * a.scale() / (2.0 * hbar);
}

PhaseGradient gradient(const QuadraticObservable& a, const QuantumPhasePoint& p, double hbar) {
    const auto& r = a.real_part();
    const auto& s = a.imag_part();
    const double f = a.scale() / hbar;
    PhaseGradient g;
    for (std::size_t i = 0; i < 4; ++i) {
        double gx = 0.0, gy = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            gx += r[i][j] * p.x[j] - s[i][j] * p.y[j];
            gy += r[i][j] * p.y[j] + s[i][j] * p.x[j];
        }
        g.gx[i] = gx * f;
        g.gy[i] = gy * f;
    }
    return g;
}

double expectation_sigma(int qubit, PauliAxis axis, const QuantumPhasePoint& point, double hbar) {
    return eval_observable(QuadraticObservable(two_qubit_pauli(qubit, axis)), point, hbar);
}

}  // namespace hqc
