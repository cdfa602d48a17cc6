#include "hybridqc/pauli_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hqc {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_) {
        throw std::invalid_argument("ComplexMatrix: expected " + std::to_string(dim_ * dim_) +
                                    " entries, got " + std::to_string(entries_.size()));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

double ComplexMatrix::frobenius_norm() const {
    double sum = 0.0;
    for (const auto& e : entries_) sum += std::norm(e);
    return std::sqrt(sum);
}

double ComplexMatrix::hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (other.dim_ != dim_) throw std::invalid_argument("ComplexMatrix: dimension mismatch in +");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (other.dim_ != dim_) throw std::invalid_argument("ComplexMatrix: dimension mismatch in -");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex factor) {
    for (auto& e : entries_) e *= factor;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("ComplexMatrix: dimension mismatch in *");
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

ComplexVector4 operator*(const ComplexMatrix& a, const ComplexVector4& v) {
    if (a.dim() != 4) throw std::invalid_argument("expected a 4x4 matrix");
    ComplexVector4 out{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) out[i] += a(i, j) * v[j];
    return out;
}

double norm(const ComplexVector4& v) {
    double sum = 0.0;
    for (const auto& c : v) sum += std::norm(c);
    return std::sqrt(sum);
}

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Symmetric: return "symmetric";
        case ModelKind::NonSymmetric1: return "nonsymmetric1";
        case ModelKind::NonSymmetric2: return "nonsymmetric2";
    }
    return "unknown";
}

std::string_view to_string(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::X: return "x";
        case PauliAxis::Y: return "y";
        case PauliAxis::Z: return "z";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view text) {
    if (text == "symmetric" || text == "s") return ModelKind::Symmetric;
    if (text == "nonsymmetric1" || text == "ns1") return ModelKind::NonSymmetric1;
    if (text == "nonsymmetric2" || text == "ns2") return ModelKind::NonSymmetric2;
    throw std::invalid_argument("unknown model kind '" + std::string(text) + "'");
}

ComplexMatrix pauli(PauliAxis axis) {
    constexpr Complex i{0.0, 1.0};
    switch (axis) {
        case PauliAxis::X: return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0});
        case PauliAxis::Y: return ComplexMatrix(2, {0.0, -i, i, 0.0});
        case PauliAxis::Z: return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0});
    }
    throw std::invalid_argument("invalid Pauli axis");
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != 2 || b.dim() != 2) {
        throw std::invalid_argument("tensor_product: both factors must be 2x2 (got " +
                                    std::to_string(a.dim()) + " and " + std::to_string(b.dim()) +
                                    ")");
    }
    ComplexMatrix out(4);
    for (std::size_t i1 = 0; i1 < 2; ++i1)
        for (std::size_t j1 = 0; j1 < 2; ++j1)
            for (std::size_t i2 = 0; i2 < 2; ++i2)
                for (std::size_t j2 = 0; j2 < 2; ++j2)
                    out(2 * i1 + i2, 2 * j1 + j2) = a(i1, j1) * b(i2, j2);
    return out;
}

ComplexMatrix two_qubit_pauli(int qubit, PauliAxis axis) {
    const auto id = ComplexMatrix::identity(2);
    if (qubit == 1) return tensor_product(pauli(axis), id);
    if (qubit == 2) return tensor_product(id, pauli(axis));
    throw std::invalid_argument("qubit index must be 1 or 2, got " + std::to_string(qubit));
}

ComplexMatrix build_quantum_hamiltonian(ModelKind kind, const QuantumParams& params, double hbar) {
    if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
    const auto sz1 = two_qubit_pauli(1, PauliAxis::Z);
    const auto sz2 = two_qubit_pauli(2, PauliAxis::Z);
    ComplexMatrix h = (hbar * params.omega) * (sz1 + sz2);
    switch (kind) {
        case ModelKind::Symmetric:
            h += (hbar * params.mu) * (sz1 * sz2);
            break;
        case ModelKind::NonSymmetric1:
            h += (hbar * params.mu) * (sz1 * sz2);
            h += (hbar * params.beta) * two_qubit_pauli(1, PauliAxis::Y);
            break;
        case ModelKind::NonSymmetric2:
            h += (hbar * params.mu) *
                 tensor_product(pauli(PauliAxis::X), pauli(PauliAxis::X));
            break;
    }
    return h;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (i != j) sum += std::norm(a(i, j));
    return std::sqrt(sum);
}

// Zeroes a(p,q) with U = D*P: D removes the phase of a(p,q), P is a real Jacobi rotation.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const Complex apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    const Complex phase = std::conj(apq) / mag;  // e^{-i arg a_pq}

    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double theta = (aqq - app) / (2.0 * mag);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    // Columns p and q of U; all other columns are unit vectors.
    // U(p,p) = c, U(p,q) = s, U(q,p) = -s*phase, U(q,q) = c*phase.
    const std::size_t n = a.dim();
    const Complex upp = c, upq = s, uqp = -s * phase, uqq = c * phase;

    // a <- a * U (columns p, q)
    for (std::size_t i = 0; i < n; ++i) {
        const Complex aip = a(i, p), aiq = a(i, q);
        a(i, p) = aip * upp + aiq * uqp;
        a(i, q) = aip * upq + aiq * uqq;
    }
    // a <- U^dagger * a (rows p, q)
    for (std::size_t j = 0; j < n; ++j) {
        const Complex apj = a(p, j), aqj = a(q, j);
        a(p, j) = std::conj(upp) * apj + std::conj(uqp) * aqj;
        a(q, j) = std::conj(upq) * apj + std::conj(uqq) * aqj;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();

    for (std::size_t i = 0; i < n; ++i) {
        const Complex vip = v(i, p), viq = v(i, q);
        v(i, p) = vip * upp + viq * uqp;
        v(i, q) = vip * upq + viq * uqq;
    }
}

}  // namespace

HermitianEigen hermitian_eigen(const ComplexMatrix& a, double off_diag_tol) {
    constexpr int kMaxSweeps = 100;
    if (a.hermiticity_defect() > 1e-12 * std::max(1.0, a.frobenius_norm())) {
        throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian (defect " +
                                    std::to_string(a.hermiticity_defect()) + ")");
    }
    const std::size_t n = a.dim();
    ComplexMatrix work = a;
    ComplexMatrix vecs = ComplexMatrix::identity(n);
    const double threshold = off_diag_tol * std::max(1.0, a.frobenius_norm());

    int sweep = 0;
    while (off_diagonal_norm(work) > threshold) {
        if (++sweep > kMaxSweeps) throw std::runtime_error("hermitian_eigen: Jacobi did not converge");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(work, vecs, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return work(i, i).real() < work(j, j).real(); });

    HermitianEigen out{std::vector<double>(n), ComplexMatrix(n), sweep};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = work(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = vecs(i, order[k]);
    }
    return out;
}

UnitaryPropagator::UnitaryPropagator(const ComplexMatrix& hamiltonian, double hbar)
    : eigen_(hermitian_eigen(hamiltonian)), hbar_(hbar) {
    if (hamiltonian.dim() != 4) throw std::invalid_argument("UnitaryPropagator: expected 4x4 Hamiltonian");
    if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
}

ComplexVector4 UnitaryPropagator::evolve(const ComplexVector4& psi0, double t) const {
    if (t == 0.0) return psi0;
    const auto& v = eigen_.vectors;
    ComplexVector4 out{};
    for (std::size_t k = 0; k < 4; ++k) {
        Complex overlap{};
        for (std::size_t i = 0; i < 4; ++i) overlap += std::conj(v(i, k)) * psi0[i];
        overlap *= std::polar(1.0, -eigen_.values[k] * t / hbar_);
        for (std::size_t i = 0; i < 4; ++i) out[i] += v(i, k) * overlap;
    }
    return out;
}

ComplexVector4 unitary_evolve(const ComplexMatrix& hamiltonian, const ComplexVector4& psi0, double t,
                              double hbar) {
    return UnitaryPropagator(hamiltonian, hbar).evolve(psi0, t);
}

}  // namespace hqc
