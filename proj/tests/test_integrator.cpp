#include <doctest.h>

#include <cmath>

#include "hybridqc/diagnostics.hpp"
#include "hybridqc/integrator.hpp"
#include "test_support.hpp"

using namespace hqc;
using hqc::testing::fig1_model;

namespace {

HybridModel decoupled_oscillator() {
    HybridModel m;
    m.omega = 0.0;
    m.mu = 0.0;
    m.c1 = 0.0;
    m.c2 = 0.0;
    return m;
}

HybridState oscillator_start() {
    HybridState s;
    s.q = 1.0;
    return s;
}

IntegratorConfig config(Scheme scheme, double dt) {
    IntegratorConfig cfg;
    cfg.scheme = scheme;
    cfg.dt = dt;
    return cfg;
}

constexpr Scheme kSchemes[] = {Scheme::ImplicitMidpoint, Scheme::ExplicitRK4, Scheme::Splitting};

}  // namespace

TEST_CASE("scheme names") {
    for (auto s : kSchemes) CHECK(parse_scheme(to_string(s)) == s);
    CHECK(parse_scheme("midpoint") == Scheme::ImplicitMidpoint);
    CHECK_THROWS(parse_scheme("euler"));
}

TEST_CASE("config validation") {
    IntegratorConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.dt = 0.0;
    CHECK_THROWS(cfg.validate());
    cfg = IntegratorConfig{};
    cfg.fixed_point_tol = 0.0;
    CHECK_THROWS(cfg.validate());
    cfg = IntegratorConfig{};
    cfg.fixed_point_max_iters = 0;
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("midpoint step preserves the oscillator energy") {
    const auto m = decoupled_oscillator();
    const auto s = oscillator_start();
    for (double dt : {0.01, 0.1, 0.5}) {
        const auto next = step(s, m, config(Scheme::ImplicitMidpoint, dt));
        const double e = next.p * next.p / 2.0 + next.q * next.q;
        CHECK(std::abs(e - 1.0) < 1e-12);
    }
}

TEST_CASE("zero step returns the input state") {
    std::mt19937_64 rng(1);
    const auto s = hqc::testing::random_hybrid_state(rng);
    for (auto scheme : kSchemes) {
        auto cfg = config(scheme, 0.0);
        CHECK(step(s, fig1_model(ModelKind::NonSymmetric2), cfg).to_array() == s.to_array());
    }
}

TEST_CASE("steps are deterministic") {
    std::mt19937_64 rng(2);
    const auto s = hqc::testing::random_hybrid_state(rng);
    for (auto scheme : kSchemes) {
        const auto cfg = config(scheme, 0.01);
        const auto m = fig1_model(ModelKind::NonSymmetric1);
        CHECK(step(s, m, cfg).to_array() == step(s, m, cfg).to_array());
    }
}

TEST_CASE("one isolated quantum step agrees with the propagator") {
    std::mt19937_64 rng(3);
    for (auto kind : {ModelKind::Symmetric, ModelKind::NonSymmetric1, ModelKind::NonSymmetric2}) {
        auto m = fig1_model(kind);
        m.c1 = 0.0;
        m.c2 = 0.0;
        const auto h = build_quantum_hamiltonian(kind, m.quantum_params(), m.hbar);
        for (int trial = 0; trial < 10; ++trial) {
            const auto psi0 = hqc::testing::random_state(rng);
            HybridState s;
            s.quantum = state_to_coords(psi0, m.hbar);
            const auto exact = unitary_evolve(h, psi0, 1e-3, m.hbar);
            for (auto scheme : {Scheme::ExplicitRK4, Scheme::Splitting}) {
                const auto next = step(s, m, config(scheme, 1e-3));
                CHECK(hqc::testing::max_diff(coords_to_state(next.quantum, m.hbar), exact) < 1e-9);
            }
            const auto mid = step(s, m, config(Scheme::ImplicitMidpoint, 1e-3));
            CHECK(hqc::testing::max_diff(coords_to_state(mid.quantum, m.hbar), exact) < 1e-6);
        }
    }
}

TEST_CASE("fixed point failure raises an error with iteration count and residual") {
    std::mt19937_64 rng(4);
    const auto s = hqc::testing::random_hybrid_state(rng);
    auto cfg = config(Scheme::ImplicitMidpoint, 0.5);
    cfg.fixed_point_max_iters = 3;
    try {
        step(s, fig1_model(ModelKind::NonSymmetric2), cfg);
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.iterations() == 3);
        CHECK(e.residual() > 0.0);
    }
}

TEST_CASE("integrate: sigma_z eigenstate stays put in the symmetric model") {
    const auto m = fig1_model();
    HybridState s;
    s.quantum = state_to_coords(ComplexVector4{Complex(1), Complex(0), Complex(0), Complex(0)}, 1.0);
    for (auto [scheme, dt] : {std::pair{Scheme::ImplicitMidpoint, 1e-3}, std::pair{Scheme::Splitting, 1e-2}}) {
        auto cfg = config(scheme, dt);
        cfg.fixed_point_tol = 1e-15;
        const auto traj = integrate(s, m, cfg, 50.0, 10);
        for (double v : traj.series(labels::kSigmaZ1)) CHECK(std::abs(v - 1.0) < 1e-10);
        for (double v : traj.series(labels::kSigmaZ2)) CHECK(std::abs(v - 1.0) < 1e-10);
    }
}

TEST_CASE("integrate: decoupled oscillator follows cos(sqrt(2k/m) t)") {
    auto m = decoupled_oscillator();
    m.mass = 0.5;
    m.stiffness = 2.0;
    const double w = std::sqrt(2.0 * m.stiffness / m.mass);
    for (auto scheme : kSchemes) {
        const double dt = scheme == Scheme::ImplicitMidpoint ? 1e-4 : 1e-2;
        const auto traj = integrate(oscillator_start(), m, config(scheme, dt), 10.0, 100);
        CHECK(traj.times.back() == doctest::Approx(10.0));
        CHECK(std::abs(traj.states.back().q - std::cos(w * 10.0)) < 1e-8);
    }
}

TEST_CASE("integrate bookkeeping") {
    const auto m = fig1_model();
    std::mt19937_64 rng(5);
    const auto s = hqc::testing::random_hybrid_state(rng);
    const auto cfg = config(Scheme::Splitting, 0.01);

    const auto two = integrate(s, m, cfg, 0.01, 1);
    CHECK(two.size() == 2);
    CHECK(two.times[0] == 0.0);
    CHECK(two.times[1] == doctest::Approx(0.01));

    const auto traj = integrate(s, m, cfg, 1.0, 7);
    CHECK(std::abs(traj.times.back() - 1.0) <= cfg.dt);
    for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
    CHECK(traj.states.size() == traj.size());
    CHECK(traj.labels.size() == traj.values.size());
    for (const auto& v : traj.values) CHECK(v.size() == traj.size());
    CHECK(traj.series(labels::kEnergy).size() == traj.size());
    CHECK_THROWS_AS(traj.series("nope"), std::out_of_range);
    CHECK(traj.coordinate_series("q")[0] == s.q);
    CHECK(traj.coordinate_series("y4")[0] == s.quantum.y[3]);

    CHECK_THROWS(integrate(s, m, cfg, 0.0, 1));
    CHECK_THROWS(integrate(s, m, cfg, 1.0, 0));
}

TEST_CASE("integrate attaches the failure time") {
    std::mt19937_64 rng(6);
    const auto s = hqc::testing::random_hybrid_state(rng);
    auto cfg = config(Scheme::ImplicitMidpoint, 0.5);
    cfg.fixed_point_max_iters = 2;
    const auto out = integrate_checked(s, fig1_model(ModelKind::NonSymmetric2), cfg, 10.0, 1);
    REQUIRE(out.failure.has_value());
    CHECK(out.failure->time() >= 0.0);
    CHECK_THROWS_AS(integrate(s, fig1_model(ModelKind::NonSymmetric2), cfg, 10.0, 1), IntegrationError);
}

TEST_CASE("midpoint conserves the quantum norm to solver tolerance") {
    const auto m = fig1_model();
    std::mt19937_64 rng(7);
    const auto s = hqc::testing::random_hybrid_state(rng);
    const auto traj = integrate(s, m, config(Scheme::ImplicitMidpoint, 0.01), 200.0, 10);
    CHECK(conservation_drift(traj, labels::kNorm) < 1e-10);
}

TEST_CASE("splitting: no secular energy growth and conserved constants") {
    const auto m = fig1_model();
    HybridState s0;
    s0.quantum = state_to_coords(ComplexVector4{Complex(0.5), Complex(0.5), Complex(0.5), Complex(0.5)}, 1.0);
    s0.q = 1.0;
    const auto traj = integrate(s0, m, config(Scheme::Splitting, 0.01), 2000.0, 10);
    const auto& e = traj.series(labels::kEnergy);
    double early = 0.0, total = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double d = std::abs(e[i] - e[0]);
        total = std::max(total, d);
        if (traj.times[i] <= 200.0) early = std::max(early, d);
    }
    CHECK(total / std::abs(e[0]) < 1e-6);
    CHECK(total < 10.0 * std::max(early, 1e-13));
    CHECK(conservation_drift(traj, labels::kNorm) < 1e-8);
    CHECK(conservation_drift(traj, labels::kSigmaZ1) < 1e-8);
    CHECK(conservation_drift(traj, labels::kSigmaZ2) < 1e-8);
}

TEST_CASE("orders of convergence") {
    const HybridHamiltonian h(fig1_model(ModelKind::NonSymmetric2));
    HybridState s0;
    s0.quantum = state_to_coords(ComplexVector4{Complex(0.5), Complex(0.5), Complex(0.5), Complex(0.5)}, 1.0);
    s0.q = 1.0;
    const auto z0 = s0.to_array();
    auto run = [&](Scheme scheme, double dt) {
        auto z = z0;
        const auto cfg = config(scheme, dt);
        for (long i = 0; i < step_count(1.0, dt); ++i) z = step(h, z, cfg);
        return z;
    };
    auto err = [](const StateArray& a, const StateArray& b) {
        double e = 0.0;
        for (std::size_t i = 0; i < kHybridDim; ++i) e = std::max(e, std::abs(a[i] - b[i]));
        return e;
    };
    const double dt = 0.0025;
    for (auto [scheme, expected] : {std::pair{Scheme::ImplicitMidpoint, 4.0}, std::pair{Scheme::ExplicitRK4, 16.0},
                                    std::pair{Scheme::Splitting, 4.0}}) {
        const auto ref = run(scheme, dt / 16.0);
        const double ratio = err(run(scheme, dt), ref) / err(run(scheme, dt / 2.0), ref);
        CAPTURE(to_string(scheme));
        CHECK(ratio == doctest::Approx(expected).epsilon(0.2));
    }
}

TEST_CASE("forward then backward returns to the start") {
    const HybridHamiltonian h(fig1_model());
    std::mt19937_64 rng(8);
    const auto z0 = hqc::testing::random_hybrid_state(rng).to_array();
    for (auto scheme : {Scheme::ImplicitMidpoint, Scheme::Splitting}) {
        auto fwd = config(scheme, 0.01);
        fwd.fixed_point_tol = 1e-15;
        auto back = fwd;
        back.dt = -0.01;
        auto z = z0;
        const long n = step_count(100.0, 0.01);
        for (long i = 0; i < n; ++i) z = step(h, z, fwd);
        for (long i = 0; i < n; ++i) z = step(h, z, back);
        for (std::size_t i = 0; i < kHybridDim; ++i) CHECK(std::abs(z[i] - z0[i]) < 1e-8);
    }
}

TEST_CASE("nonsymmetric1 breaks the sigma_z^1 symmetry along the flow") {
    const auto m = fig1_model(ModelKind::NonSymmetric1);
    HybridState s0;
    s0.quantum = state_to_coords(ComplexVector4{Complex(0.5), Complex(0.5), Complex(0.5), Complex(0.5)}, 1.0);
    s0.q = 1.0;
    const auto traj = integrate(s0, m, config(Scheme::Splitting, 0.01), 20.0, 1);
    const auto& z1 = traj.series(labels::kSigmaZ1);
    double rate = 0.0;
    for (std::size_t i = 1; i < z1.size(); ++i) rate = std::max(rate, std::abs(z1[i] - z1[i - 1]) / 0.01);
    CHECK(rate > 1e-3);
    CHECK(conservation_drift(traj, labels::kSigmaZ2) < 1e-10);
}
