#include "hybridqc/hybrid_system.hpp"

#include <cmath>
#include <stdexcept>

namespace hqc {

StateArray HybridState::to_array() const {
    StateArray a{};
    for (std::size_t n = 0; n < 4; ++n) {
        a[n] = quantum.x[n];
        a[4 + n] = quantum.y[n];
    }
    a[8] = q;
    a[9] = p;
    return a;
}

HybridState HybridState::from_array(const StateArray& a) {
    HybridState s;
    for (std::size_t n = 0; n < 4; ++n) {
        s.quantum.x[n] = a[n];
        s.quantum.y[n] = a[4 + n];
    }
    s.q = a[8];
    s.p = a[9];
    return s;
}

void HybridModel::validate() const {
    auto require = [](bool ok, const char* field, const char* what) {
        if (!ok) throw std::invalid_argument(std::string(field) + ": " + what);
    };
    for (auto [value, name] : {std::pair{omega, "omega"}, {mu, "mu"}, {beta, "beta"}, {mass, "m"},
                               {stiffness, "k"}, {c1, "c1"}, {c2, "c2"}, {hbar, "hbar"}}) {
        require(std::isfinite(value), name, "must be finite");
    }
    require(mass > 0.0, "m", "must be positive");
    require(stiffness > 0.0, "k", "must be positive");
    require(hbar > 0.0, "hbar", "must be positive");
}

namespace {

std::vector<QuadraticCoupling> default_couplings(const HybridModel& m) {
    return {
        {labels::kSigmaZ1, QuadraticObservable(two_qubit_pauli(1, PauliAxis::Z)), m.c1 * m.hbar},
        {labels::kSigmaZ2, QuadraticObservable(two_qubit_pauli(2, PauliAxis::Z)), m.c2 * m.hbar},
    };
}

}  // namespace

HybridHamiltonian::HybridHamiltonian(const HybridModel& model)
    : HybridHamiltonian(model, default_couplings(model)) {}

HybridHamiltonian::HybridHamiltonian(const HybridModel& model, std::vector<QuadraticCoupling> couplings)
    : model_(model), couplings_(std::move(couplings)) {
    model_.validate();
    quantum_ = QuadraticObservable(build_quantum_hamiltonian(model_.kind, model_.quantum_params(), model_.hbar));
    coupling_sum_ = QuadraticObservable(ComplexMatrix(4));
    for (const auto& c : couplings_) coupling_sum_.add_scaled(c.op, c.strength);
}

double HybridHamiltonian::quantum_energy(const HybridState& s) const {
    return eval_observable(quantum_, s.quantum, model_.hbar);
}

double HybridHamiltonian::classical_energy(const HybridState& s) const {
    return s.p * s.p / (2.0 * model_.mass) + model_.stiffness * s.q * s.q;
}

double HybridHamiltonian::coupling_force(const HybridState& s) const {
    return eval_observable(coupling_sum_, s.quantum, model_.hbar);
}

double HybridHamiltonian::energy(const HybridState& s) const {
    return quantum_energy(s) + classical_energy(s) + s.q * coupling_force(s);
}

StateArray HybridHamiltonian::vector_field(const StateArray& z) const {
    const double q = z[8];
    const double p = z[9];
    const auto& rq = quantum_.real_part();
    const auto& sq = quantum_.imag_part();
    const auto& rc = coupling_sum_.real_part();
    const auto& sc = coupling_sum_.imag_part();
    const double inv_hbar = 1.0 / model_.hbar;
    const double fq = quantum_.scale();
    const double fc = coupling_sum_.scale();

    StateArray out{};
    double force = 0.0;  // 2hbar * <coupling>
    for (std::size_t i = 0; i < 4; ++i) {
        double qgx = 0.0, qgy = 0.0, cgx = 0.0, cgy = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            const double xj = z[j], yj = z[4 + j];
            qgx += rq[i][j] * xj - sq[i][j] * yj;
            qgy += rq[i][j] * yj + sq[i][j] * xj;
            cgx += rc[i][j] * xj - sc[i][j] * yj;
            cgy += rc[i][j] * yj + sc[i][j] * xj;
        }
        const double gx = (fq * qgx + q * fc * cgx) * inv_hbar;
        const double gy = (fq * qgy + q * fc * cgy) * inv_hbar;
        out[i] = gy;
        out[4 + i] = -gx;
        // x'(Rx - Sy) + y'(Ry + Sx) = x'Rx + y'Ry - 2x'Sy
        force += z[i] * cgx + z[4 + i] * cgy;
    }
    force *= fc * 0.5 * inv_hbar;
    out[8] = p / model_.mass;
    out[9] = -2.0 * model_.stiffness * q - force;
    return out;
}

HybridState HybridHamiltonian::vector_field(const HybridState& s) const {
    return HybridState::from_array(vector_field(s.to_array()));
}

double total_energy(const HybridState& s, const HybridModel& m) { return HybridHamiltonian(m).energy(s); }

HybridState vector_field(const HybridState& s, const HybridModel& m) {
    return HybridHamiltonian(m).vector_field(s);
}

double poisson_bracket(const ObservableFunction& f, const ObservableFunction& g, const HybridState& s,
                       const HybridModel& /*m*/) {
    const StateArray z = s.to_array();
    StateArray df{}, dg{};
    for (std::size_t i = 0; i < kHybridDim; ++i) {
        const double h = std::max(1e-6 * std::abs(z[i]), 1e-8);
        StateArray plus = z, minus = z;
        plus[i] += h;
        minus[i] -= h;
        const auto sp = HybridState::from_array(plus);
        const auto sm = HybridState::from_array(minus);
        const double width = plus[i] - minus[i];
        df[i] = (f.evaluate(sp) - f.evaluate(sm)) / width;
        dg[i] = (g.evaluate(sp) - g.evaluate(sm)) / width;
    }
    double bracket = 0.0;
    for (std::size_t n = 0; n < 4; ++n) bracket += df[n] * dg[4 + n] - df[4 + n] * dg[n];
    bracket += df[8] * dg[9] - df[9] * dg[8];
    return bracket;
}

ObservableFunction energy_observable(const HybridModel& m) {
    auto h = std::make_shared<const HybridHamiltonian>(m);
    return {labels::kEnergy, [h](const HybridState& s) { return h->energy(s); }};
}

ObservableFunction sigma_z_observable(int qubit, const HybridModel& m) {
    auto op = std::make_shared<const QuadraticObservable>(two_qubit_pauli(qubit, PauliAxis::Z));
    const double hbar = m.hbar;
    return {qubit == 1 ? labels::kSigmaZ1 : labels::kSigmaZ2,
            [op, hbar](const HybridState& s) { return eval_observable(*op, s.quantum, hbar); }};
}

ObservableFunction norm_observable(const HybridModel& m) {
    const double hbar = m.hbar;
    return {labels::kNorm, [hbar](const HybridState& s) { return s.quantum.norm_squared() / (2.0 * hbar); }};
}

ObservableFunction quantum_energy_observable(const HybridModel& m) {
    auto h = std::make_shared<const HybridHamiltonian>(m);
    return {labels::kQuantumEnergy, [h](const HybridState& s) { return h->quantum_energy(s); }};
}

std::vector<ObservableFunction> conserved_set(const HybridModel& m) {
    switch (m.kind) {
        case ModelKind::Symmetric:
            return {energy_observable(m), sigma_z_observable(1, m), sigma_z_observable(2, m), norm_observable(m)};
        case ModelKind::NonSymmetric1:
            return {energy_observable(m), sigma_z_observable(2, m), norm_observable(m)};
        case ModelKind::NonSymmetric2:
            return {energy_observable(m), norm_observable(m)};
    }
    return {};
}

std::vector<ObservableFunction> tracked_observables(const HybridModel& m) {
    return {energy_observable(m), norm_observable(m), sigma_z_observable(1, m), sigma_z_observable(2, m),
            quantum_energy_observable(m)};
}

}  // namespace hqc
