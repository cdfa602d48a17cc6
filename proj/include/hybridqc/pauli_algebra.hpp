#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hqc {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    std::span<const Complex> entries() const { return entries_; }

    Complex& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
    const Complex& operator()(std::size_t row, std::size_t col) const {
        return entries_[row * dim_ + col];
    }

    ComplexMatrix adjoint() const;
    double frobenius_norm() const;
    /// Largest |A(i,j) - conj(A(j,i))|.
    double hermiticity_defect() const;
    bool is_hermitian(double tol = 1e-14) const { return hermiticity_defect() <= tol; }

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex factor);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex f) { return a *= f; }
    friend ComplexMatrix operator*(Complex f, ComplexMatrix a) { return a *= f; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t dim_ = 0;
    std::vector<Complex> entries_;
};

using ComplexVector4 = std::array<Complex, 4>;

ComplexVector4 operator*(const ComplexMatrix& a, const ComplexVector4& v);
double norm(const ComplexVector4& v);

enum class PauliAxis { X, Y, Z };

enum class ModelKind { Symmetric, NonSymmetric1, NonSymmetric2 };

std::string_view to_string(ModelKind kind);
std::string_view to_string(PauliAxis axis);
/// Accepts "symmetric", "ns1"/"nonsymmetric1", "ns2"/"nonsymmetric2".
ModelKind parse_model_kind(std::string_view text);

/// Standard 2x2 Pauli matrix.
ComplexMatrix pauli(PauliAxis axis);

/// Kronecker product of two 2x2 operators.
///
/// The first factor acts on qubit 1, which is the slow index, giving the basis order
/// |1,1>, |1,-1>, |-1,1>, |-1,-1>.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Single-qubit Pauli operator lifted to the two-qubit space (qubit is 1 or 2).
ComplexMatrix two_qubit_pauli(int qubit, PauliAxis axis);

struct QuantumParams {
    double omega = 1.0;
    double mu = 5.0;
    double beta = 1.0;
};

/// Two-qubit Hamiltonian for the chosen model:
///   Symmetric:      hbar*omega*(sz1 + sz2) + hbar*mu*sz1*sz2
///   NonSymmetric1:  Symmetric + hbar*beta*sy1
///   NonSymmetric2:  hbar*omega*(sz1 + sz2) + hbar*mu*sx1*sx2
/// beta only enters NonSymmetric1.
ComplexMatrix build_quantum_hamiltonian(ModelKind kind, const QuantumParams& params, double hbar);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

struct HermitianEigen {
    std::vector<double> values;
    ComplexMatrix vectors;  // columns are eigenvectors
    int sweeps = 0;
};

/// Cyclic complex Jacobi diagonalization. Iterates until the off-diagonal Frobenius
/// norm drops below `off_diag_tol` times max(1, ||A||_F).
HermitianEigen hermitian_eigen(const ComplexMatrix& a, double off_diag_tol = 1e-13);

/// exp(-i H t / hbar) psi0 via eigendecomposition of H.
ComplexVector4 unitary_evolve(const ComplexMatrix& hamiltonian, const ComplexVector4& psi0, double t,
                              double hbar);

/// Precomputed propagator for repeated evaluation at many times.
class UnitaryPropagator {
public:
    UnitaryPropagator(const ComplexMatrix& hamiltonian, double hbar);
    ComplexVector4 evolve(const ComplexVector4& psi0, double t) const;

private:
    HermitianEigen eigen_;
    double hbar_;
};

}  // namespace hqc
