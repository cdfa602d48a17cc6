#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "test_support.hpp"

using namespace hqc;
using hqc::testing::max_diff;

namespace {

ComplexMatrix diag4(double a, double b, double c, double d) {
    ComplexMatrix m(4);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    m(3, 3) = d;
    return m;
}

}  // namespace

TEST_CASE("pauli matrices") {
    const auto z = pauli(PauliAxis::Z);
    CHECK(z(0, 0) == Complex(1));
    CHECK(z(1, 1) == Complex(-1));
    CHECK(z(0, 1) == Complex(0));
    const auto x = pauli(PauliAxis::X);
    CHECK(x(0, 1) == Complex(1));
    CHECK(x(1, 0) == Complex(1));
    CHECK(x(0, 0) == Complex(0));
    const auto y = pauli(PauliAxis::Y);
    CHECK(max_diff(y * y, ComplexMatrix::identity(2)) == 0.0);
    for (auto axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
        const auto s = pauli(axis);
        CHECK(s.is_hermitian());
        CHECK(std::abs(s(0, 0) + s(1, 1)) == 0.0);
        CHECK(max_diff(s * s, ComplexMatrix::identity(2)) == 0.0);
    }
}

TEST_CASE("tensor products in the |1,1>,|1,-1>,|-1,1>,|-1,-1> ordering") {
    const auto z = pauli(PauliAxis::Z);
    const auto x = pauli(PauliAxis::X);
    CHECK(max_diff(tensor_product(z, z), diag4(1, -1, -1, 1)) == 0.0);
    CHECK(max_diff(tensor_product(ComplexMatrix::identity(2), z), diag4(1, -1, 1, -1)) == 0.0);

    const auto xx = tensor_product(x, x);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(xx(i, j) == Complex(i + j == 3 ? 1.0 : 0.0));

    CHECK_THROWS_AS(tensor_product(ComplexMatrix(3), z), std::invalid_argument);
    CHECK(max_diff(two_qubit_pauli(1, PauliAxis::Z), tensor_product(z, ComplexMatrix::identity(2))) == 0.0);
    CHECK(max_diff(two_qubit_pauli(2, PauliAxis::X), tensor_product(ComplexMatrix::identity(2), x)) == 0.0);
}

TEST_CASE("model Hamiltonians") {
    const QuantumParams fig1{1.0, 5.0, 1.0};
    CHECK(max_diff(build_quantum_hamiltonian(ModelKind::Symmetric, fig1, 1.0), diag4(7, -5, -5, 3)) < 1e-15);

    auto ns2 = diag4(2, 0, 0, -2);
    for (std::size_t i = 0; i < 4; ++i) ns2(i, 3 - i) = 5.0;
    CHECK(max_diff(build_quantum_hamiltonian(ModelKind::NonSymmetric2, fig1, 1.0), ns2) < 1e-15);

    for (double hbar : {0.5, 1.0, 3.0}) {
        const auto zero = build_quantum_hamiltonian(ModelKind::Symmetric, {0.0, 0.0, 1.0}, hbar);
        CHECK(zero.frobenius_norm() == 0.0);
    }

    // ns1 adds hbar*beta*sigma_y on qubit 1
    const auto ns1 = build_quantum_hamiltonian(ModelKind::NonSymmetric1, {1.0, 5.0, 0.7}, 2.0);
    auto expected = build_quantum_hamiltonian(ModelKind::Symmetric, {1.0, 5.0, 0.7}, 2.0);
    auto sy = two_qubit_pauli(1, PauliAxis::Y);
    sy *= Complex(2.0 * 0.7);
    expected += sy;
    CHECK(max_diff(ns1, expected) < 1e-15);

    CHECK_THROWS_AS(build_quantum_hamiltonian(ModelKind::Symmetric, fig1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_quantum_hamiltonian(ModelKind::Symmetric, fig1, -1.0), std::invalid_argument);
}

TEST_CASE("model kind names") {
    CHECK(parse_model_kind("symmetric") == ModelKind::Symmetric);
    CHECK(parse_model_kind("ns1") == ModelKind::NonSymmetric1);
    CHECK(parse_model_kind("nonsymmetric2") == ModelKind::NonSymmetric2);
    CHECK_THROWS(parse_model_kind("ns3"));
    for (auto k : {ModelKind::Symmetric, ModelKind::NonSymmetric1, ModelKind::NonSymmetric2})
        CHECK(parse_model_kind(to_string(k)) == k);
}

TEST_CASE("Hamiltonians are Hermitian for arbitrary parameters") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 50; ++i) {
        const QuantumParams p{u(rng), u(rng), u(rng)};
        for (auto k : {ModelKind::Symmetric, ModelKind::NonSymmetric1, ModelKind::NonSymmetric2})
            CHECK(build_quantum_hamiltonian(k, p, 0.1 + std::abs(u(rng))).hermiticity_defect() <= 1e-14);
    }
}

TEST_CASE("commutator classification of the three models") {
    const QuantumParams fig1{1.0, 5.0, 1.0};
    const auto z1 = two_qubit_pauli(1, PauliAxis::Z);
    const auto z2 = two_qubit_pauli(2, PauliAxis::Z);
    const auto hs = build_quantum_hamiltonian(ModelKind::Symmetric, fig1, 1.0);
    const auto h1 = build_quantum_hamiltonian(ModelKind::NonSymmetric1, fig1, 1.0);
    const auto h2 = build_quantum_hamiltonian(ModelKind::NonSymmetric2, fig1, 1.0);
    CHECK(commutator(hs, z1).frobenius_norm() == 0.0);
    CHECK(commutator(hs, z2).frobenius_norm() == 0.0);
    CHECK(commutator(h1, z2).frobenius_norm() == 0.0);
    CHECK(commutator(h1, z1).frobenius_norm() > 1.0);
    CHECK(commutator(h2, z1).frobenius_norm() > 1.0);
    CHECK(commutator(h2, z2).frobenius_norm() > 1.0);
}

TEST_CASE("Jacobi diagonalization reconstructs the matrix") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = hqc::testing::random_hermitian(rng);
        const auto eig = hermitian_eigen(a);
        ComplexMatrix d(4);
        for (std::size_t i = 0; i < 4; ++i) d(i, i) = eig.values[i];
        const auto& v = eig.vectors;
        CHECK(max_diff(v * d * v.adjoint(), a) < 1e-12);
        CHECK(max_diff(v.adjoint() * v, ComplexMatrix::identity(4)) < 1e-13);
        CHECK(std::is_sorted(eig.values.begin(), eig.values.end()));
    }
    ComplexMatrix bad(4);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eigen(bad), std::invalid_argument);
}

TEST_CASE("unitary evolution examples") {
    const QuantumParams fig1{1.0, 5.0, 1.0};
    const ComplexVector4 e1{Complex(1), Complex(0), Complex(0), Complex(0)};

    const auto hs = build_quantum_hamiltonian(ModelKind::Symmetric, fig1, 1.0);
    for (double tau : {0.3, 1.0, 17.5}) {
        const auto psi = unitary_evolve(hs, e1, tau, 1.0);
        CHECK(std::abs(psi[0] - std::exp(Complex(0, -7.0 * tau))) < 1e-13);
        CHECK(std::abs(psi[1]) + std::abs(psi[2]) + std::abs(psi[3]) < 1e-13);
    }

    std::mt19937_64 rng(5);
    const auto h = hqc::testing::random_hermitian(rng);
    const auto psi0 = hqc::testing::random_state(rng);
    const auto same = unitary_evolve(h, psi0, 0.0, 1.0);
    for (std::size_t i = 0; i < 4; ++i) CHECK(same[i] == psi0[i]);

    // |1,1> only mixes with |-1,-1> under the sigma_x sigma_x coupling; 2x2 block [[2,5],[5,-2]]
    const auto h2 = build_quantum_hamiltonian(ModelKind::NonSymmetric2, fig1, 1.0);
    const double w = std::sqrt(29.0);
    const ComplexVector4 expected{Complex(std::cos(w), -2.0 * std::sin(w) / w), Complex(0), Complex(0),
                                  Complex(0, -5.0 * std::sin(w) / w)};
    CHECK(max_diff(unitary_evolve(h2, e1, 1.0, 1.0), expected) < 1e-13);

    ComplexMatrix bad(4);
    bad(0, 1) = Complex(0, 1);
    CHECK_THROWS_AS(unitary_evolve(bad, e1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("unitary evolution preserves the norm and composes") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> t(0.0, 1e4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto h = hqc::testing::random_hermitian(rng);
        const auto psi0 = hqc::testing::random_state(rng);
        const double hbar = 0.5 + trial % 3;
        const double t1 = t(rng), t2 = t(rng);
        const auto a = unitary_evolve(h, psi0, t1, hbar);
        CHECK(std::abs(norm(a) - 1.0) < 1e-12);
        const auto b = unitary_evolve(h, a, t2, hbar);
        CHECK(std::abs(norm(b) - 1.0) < 1e-12);
        CHECK(max_diff(b, unitary_evolve(h, psi0, t1 + t2, hbar)) < 1e-10);
    }
}
