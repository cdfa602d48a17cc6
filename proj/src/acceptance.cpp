#include "hybridqc/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "hybridqc/runner.hpp"

namespace hqc::acceptance {

namespace fs = std::filesystem;

double explicit_hamilton_symmetric(const double* x, const double* y, double omega, double mu) {
    return omega * (x[0] * x[0] + y[0] * y[0] - x[3] * x[3] - y[3] * y[3]) +
           0.5 * mu *
               (x[0] * x[0] - x[1] * x[1] - x[2] * x[2] + x[3] * x[3] + y[0] * y[0] - y[1] * y[1] - y[2] * y[2] +
                y[3] * y[3]);
}

double explicit_hamilton_ns1(const double* x, const double* y, double omega, double mu, double beta) {
    return explicit_hamilton_symmetric(x, y, omega, mu) +
           beta * (y[2] * x[0] + y[3] * x[1] - y[0] * x[2] - y[1] * x[3]);
}

double explicit_hamilton_ns2(const double* x, const double* y, double omega, double mu) {
    return omega * (x[0] * x[0] + y[0] * y[0] - x[3] * x[3] - y[3] * y[3]) +
           mu * (x[1] * x[2] + x[0] * x[3] + y[1] * y[2] + y[0] * y[3]);
}

namespace {

using Clock = std::chrono::steady_clock;

HybridModel reference_model(ModelKind kind) {
    HybridModel m;
    m.kind = kind;
    m.omega = 1.0;
    m.mu = 5.0;
    m.beta = 1.0;
    m.mass = 1.0;
    m.stiffness = 1.0;
    m.c1 = 15.0;
    m.c2 = 1.0;
    m.hbar = 1.0;
    return m;
}

constexpr ModelKind kAllKinds[] = {ModelKind::Symmetric, ModelKind::NonSymmetric1, ModelKind::NonSymmetric2};

ComplexVector4 random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    ComplexVector4 psi;
    for (auto& c : psi) c = Complex(gauss(rng), gauss(rng));
    const double n = norm(psi);
    for (auto& c : psi) c /= n;
    return psi;
}

HybridState default_initial_state() { return make_initial_state(InitialStateSpec{}, 1.0); }

std::string sci(double v) {
    std::ostringstream o;
    o << std::scientific << std::setprecision(3) << v;
    return o.str();
}

struct Check {
    bool ok = true;
    std::ostringstream detail;
    void require(bool cond, const std::string& what) {
        if (!detail.str().empty()) detail << "; ";
        detail << what << (cond ? "" : " [FAIL]");
        ok = ok && cond;
    }
};

// 1. Integrated Hamilton equations reproduce the Schroedinger propagator.
CriterionResult criterion_equivalence() {
    Check c;
    std::mt19937_64 rng(20240601);
    IntegratorConfig cfg;
    cfg.scheme = Scheme::ExplicitRK4;
    cfg.dt = 1e-3;
    const long n_steps = step_count(100.0, cfg.dt);
    const long stride = step_count(1.0, cfg.dt);
    for (ModelKind kind : kAllKinds) {
        HybridModel m = reference_model(kind);
        m.c1 = 0.0;
        m.c2 = 0.0;
        const HybridHamiltonian h(m);
        const UnitaryPropagator oracle(build_quantum_hamiltonian(kind, m.quantum_params(), m.hbar), m.hbar);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const auto psi0 = random_state(rng);
            HybridState s;
            s.quantum = state_to_coords(psi0, m.hbar);
            StateArray z = s.to_array();
            for (long n = 1; n <= n_steps; ++n) {
                z = step(h, z, cfg);
                if (n % stride != 0) continue;
                const auto psi = coords_to_state(HybridState::from_array(z).quantum, m.hbar);
                const auto exact = oracle.evolve(psi0, static_cast<double>(n) * cfg.dt);
                for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(psi[i] - exact[i]));
            }
        }
        c.require(worst < 1e-8, std::string(to_string(kind)) + " max|dc|=" + sci(worst));
    }
    return {1, "Hamilton flow matches unitary propagator (20 states x 3 models, tau<=100, tol 1e-8)", c.ok,
            c.detail.str()};
}

// 2. Matrix-route Hamilton functions equal the explicit polynomials.
CriterionResult criterion_hamilton_functions() {
    Check c;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    const QuantumParams params{1.0, 5.0, 1.0};
    for (ModelKind kind : kAllKinds) {
        const QuadraticObservable h(build_quantum_hamiltonian(kind, params, 1.0));
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            QuantumPhasePoint p;
            for (auto& v : p.x) v = coord(rng);
            for (auto& v : p.y) v = coord(rng);
            double expected = 0.0;
            switch (kind) {
                case ModelKind::Symmetric:
                    expected = explicit_hamilton_symmetric(p.x.data(), p.y.data(), params.omega, params.mu);
                    break;
                case ModelKind::NonSymmetric1:
                    expected = explicit_hamilton_ns1(p.x.data(), p.y.data(), params.omega, params.mu, params.beta);
                    break;
                case ModelKind::NonSymmetric2:
                    expected = explicit_hamilton_ns2(p.x.data(), p.y.data(), params.omega, params.mu);
                    break;
            }
            const double got = eval_observable(h, p, 1.0);
            worst = std::max(worst, std::abs(got - expected) / std::max(1.0, std::abs(expected)));
        }
        c.require(worst < 1e-12, std::string(to_string(kind)) + " rel err=" + sci(worst));
    }
    return {2, "Hamilton functions match explicit polynomials (1000 points, rel 1e-12)", c.ok, c.detail.str()};
}

// 3. Which observables are conserved depends on the quantum symmetry.
CriterionResult criterion_conservation() {
    Check c;
    IntegratorConfig cfg;  // default scheme, dt = 0.01
    const auto s0 = default_initial_state();
    {
        const auto traj = integrate(s0, reference_model(ModelKind::Symmetric), cfg, 2000.0, 10);
        const double e0 = std::abs(traj.series(labels::kEnergy).front());
        const double rel_e = conservation_drift(traj, labels::kEnergy) / e0;
        const double norm = conservation_drift(traj, labels::kNorm);
        const double z1 = conservation_drift(traj, labels::kSigmaZ1);
        const double z2 = conservation_drift(traj, labels::kSigmaZ2);
        c.require(rel_e < 1e-6, "sym energy rel=" + sci(rel_e));
        c.require(norm < 1e-8, "sym norm=" + sci(norm));
        c.require(z1 < 1e-8, "sym sz1=" + sci(z1));
        c.require(z2 < 1e-8, "sym sz2=" + sci(z2));
    }
    {
        const auto traj = integrate(s0, reference_model(ModelKind::NonSymmetric1), cfg, 2000.0, 10);
        const double z1 = conservation_drift(traj, labels::kSigmaZ1);
        const double z2 = conservation_drift(traj, labels::kSigmaZ2);
        c.require(z2 < 1e-8, "ns1 sz2=" + sci(z2));
        c.require(z1 > 0.1, "ns1 sz1 excursion=" + sci(z1));
    }
    {
        const auto traj = integrate(s0, reference_model(ModelKind::NonSymmetric2), cfg, 2000.0, 10);
        const double z1 = conservation_drift(traj, labels::kSigmaZ1);
        const double z2 = conservation_drift(traj, labels::kSigmaZ2);
        c.require(z1 > 0.1, "ns2 sz1 excursion=" + sci(z1));
        c.require(z2 > 0.1, "ns2 sz2 excursion=" + sci(z2));
    }
    return {3, "Conservation dichotomy over tau in [0,2000], dt=0.01", c.ok, c.detail.str()};
}

// 4. Constants of the symmetric hybrid are in involution.
CriterionResult criterion_involution() {
    Check c;
    const auto m = reference_model(ModelKind::Symmetric);
    const auto set = conserved_set(m);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> classical(-2.0, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        HybridState s;
        s.quantum = state_to_coords(random_state(rng), m.hbar);
        s.q = classical(rng);
        s.p = classical(rng);
        for (std::size_t i = 0; i < set.size(); ++i)
            for (std::size_t j = i + 1; j < set.size(); ++j)
                worst = std::max(worst, std::abs(poisson_bracket(set[i], set[j], s, m)));
    }
    c.require(worst < 1e-6, "max |{f,g}|=" + sci(worst));
    return {4, "Pairwise Poisson brackets of symmetric constants vanish (50 states, tol 1e-6)", c.ok,
            c.detail.str()};
}

// 5. Spectral/Lyapunov verdicts for the three presets.
CriterionResult criterion_spectral() {
    Check c;
    auto describe = [](const RunSummary& s, const std::string& series) {
        const auto* r = s.report_for(series);
        return series + "(dpf=" + sci(r->report.dominant_peak_fraction) + ",flat=" + sci(r->report.spectral_flatness) +
               ",verdict=" + std::string(to_string(r->report.verdict)) + ")";
    };
    {
        const auto s = run_in_memory(preset_config("fig1-symmetric"));
        const auto& q = s.report_for("q")->report;
        const double lambda = s.lyapunov->exponent;
        c.require(s.verdict == Verdict::Regular && q.dominant_peak_fraction > 0.8 && std::abs(lambda) < 1e-3,
                  "fig1-symmetric " + std::string(to_string(s.verdict)) + " lambda=" + sci(lambda) + " " +
                      describe(s, "q") + " " + describe(s, "x1"));
        c.require(s.report_for("x1")->report.verdict != Verdict::Chaotic, "fig1-symmetric x1 not chaotic");
    }
    const std::pair<const char*, double> chaotic[] = {{"fig1-nonsymmetric2", kLyapunovBaselineNs2},
                                                      {"fig3-nonsymmetric1", kLyapunovBaselineNs1}};
    for (const auto& [name, baseline] : chaotic) {
        const auto s = run_in_memory(preset_config(name));
        const double lambda = s.lyapunov->exponent;
        bool both = true;
        for (const char* series : {"q", "x1"}) {
            const auto& r = s.report_for(series)->report;
            both = both && r.verdict == Verdict::Chaotic && r.spectral_flatness >= 10.0 * r.flatness_baseline;
        }
        c.require(s.verdict == Verdict::Chaotic && lambda > 5e-3 && both,
                  std::string(name) + " " + std::string(to_string(s.verdict)) + " lambda=" + sci(lambda) + " " +
                      describe(s, "q") + " " + describe(s, "x1"));
        const double rel = std::abs(lambda - baseline) / baseline;
        c.require(rel <= kLyapunovBaselineTolerance,
                  std::string(name) + " lambda vs baseline " + sci(baseline) + " rel=" + sci(rel));
    }
    return {5, "Spectral dichotomy: symmetric Regular, non-symmetric presets Chaotic (q and x1)", c.ok,
            c.detail.str()};
}

double endpoint_error(const HybridHamiltonian& h, const StateArray& z0, Scheme scheme, double dt, double t_end,
                      const StateArray& reference) {
    IntegratorConfig cfg;
    cfg.scheme = scheme;
    cfg.dt = dt;
    StateArray z = z0;
    const long n = step_count(t_end, dt);
    for (long i = 0; i < n; ++i) z = step(h, z, cfg);
    double err = 0.0;
    for (std::size_t i = 0; i < kHybridDim; ++i) err = std::max(err, std::abs(z[i] - reference[i]));
    return err;
}

// 6. Convergence orders and time reversibility.
CriterionResult criterion_integrator() {
    Check c;
    const HybridHamiltonian h(reference_model(ModelKind::NonSymmetric2));
    const StateArray z0 = default_initial_state().to_array();
    const double t_end = 1.0;
    const double dt = 0.0025;
    const std::pair<Scheme, double> orders[] = {
        {Scheme::ImplicitMidpoint, 4.0}, {Scheme::ExplicitRK4, 16.0}, {Scheme::Splitting, 4.0}};
    for (const auto& [scheme, expected] : orders) {
        IntegratorConfig ref_cfg;
        ref_cfg.scheme = scheme;
        ref_cfg.dt = dt / 16.0;
        StateArray reference = z0;
        for (long i = 0; i < step_count(t_end, ref_cfg.dt); ++i) reference = step(h, reference, ref_cfg);
        const double e1 = endpoint_error(h, z0, scheme, dt, t_end, reference);
        const double e2 = endpoint_error(h, z0, scheme, dt / 2.0, t_end, reference);
        const double ratio = e1 / e2;
        c.require(std::abs(ratio / expected - 1.0) <= 0.2,
                  std::string(to_string(scheme)) + " ratio=" + sci(ratio) + " (expect " + sci(expected) + ")");
    }

    const HybridHamiltonian sym(reference_model(ModelKind::Symmetric));
    for (Scheme scheme : {Scheme::ImplicitMidpoint, Scheme::Splitting}) {
        IntegratorConfig fwd;
        fwd.scheme = scheme;
        fwd.dt = 0.01;
        fwd.fixed_point_tol = 1e-15;
        IntegratorConfig back = fwd;
        back.dt = -fwd.dt;
        const long n = step_count(100.0, fwd.dt);
        StateArray z = z0;
        for (long i = 0; i < n; ++i) z = step(sym, z, fwd);
        for (long i = 0; i < n; ++i) z = step(sym, z, back);
        double err = 0.0;
        for (std::size_t i = 0; i < kHybridDim; ++i) err = std::max(err, std::abs(z[i] - z0[i]));
        c.require(err < 1e-8, std::string(to_string(scheme)) + " reversal err=" + sci(err));
    }
    return {6, "Integrator order (2/4/2 within 20%) and forward-backward reversal over tau=100", c.ok,
            c.detail.str()};
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// 7. Identical configs give byte-identical CSV files.
CriterionResult criterion_determinism(const fs::path& work_dir) {
    Check c;
    for (const auto& name : preset_names()) {
        std::vector<std::vector<std::pair<std::string, std::string>>> outputs;
        for (const char* tag : {"a", "b"}) {
            RunConfig cfg = preset_config(name);
            cfg.lyapunov = false;
            cfg.output_dir = (work_dir / tag).string();
            fs::remove_all(cfg.output_dir);
            const auto summary = run(cfg);
            std::vector<std::pair<std::string, std::string>> files;
            for (const auto& f : summary.files)
                if (f.extension() == ".csv") files.emplace_back(f.filename().string(), read_file(f));
            outputs.push_back(std::move(files));
        }
        const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
        c.require(same, name + " " + std::to_string(outputs[0].size()) + " csv files identical");
    }
    return {7, "Determinism: repeated preset runs give byte-identical CSVs", c.ok, c.detail.str()};
}

}  // namespace

std::vector<CriterionResult> run_all(const Options& options, std::ostream& log) {
    fs::path work = options.work_dir;
    if (work.empty()) work = fs::temp_directory_path() / "hybridqc_acceptance";
    fs::create_directories(work);

    const std::vector<std::pair<int, std::function<CriterionResult()>>> criteria = {
        {1, criterion_equivalence},
        {2, criterion_hamilton_functions},
        {3, criterion_conservation},
        {4, criterion_involution},
        {5, criterion_spectral},
        {6, criterion_integrator},
        {7, [&] { return criterion_determinism(work); }},
    };

    std::vector<CriterionResult> results;
    for (const auto& [id, fn] : criteria) {
        if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end())
            continue;
        const auto start = Clock::now();
        CriterionResult r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        log << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << " (" << std::fixed
            << std::setprecision(1) << r.seconds << "s)\n      " << r.detail << "\n";
        log.unsetf(std::ios::fixed);
        log.flush();
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace hqc::acceptance
