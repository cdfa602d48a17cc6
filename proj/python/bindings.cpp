#include <algorithm>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hybridqc/runner.hpp"

namespace py = pybind11;
using namespace hqc;

namespace {

py::array_t<Complex> to_numpy(const ComplexMatrix& m) {
    py::array_t<Complex> out({m.dim(), m.dim()});
    auto r = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) r(i, j) = m(i, j);
    return out;
}

ComplexMatrix from_numpy(const py::array_t<Complex, py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw std::invalid_argument("expected a square matrix");
    const auto n = static_cast<std::size_t>(a.shape(0));
    ComplexMatrix m(n);
    auto r = a.unchecked<2>();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = r(i, j);
    return m;
}

ComplexVector4 to_vec4(const std::vector<Complex>& v) {
    if (v.size() != 4) throw std::invalid_argument("expected 4 amplitudes");
    return {v[0], v[1], v[2], v[3]};
}

HybridState state_from(const std::vector<Complex>& psi, double q, double p, double hbar) {
    HybridState s;
    s.quantum = state_to_coords(to_vec4(psi), hbar);
    s.q = q;
    s.p = p;
    return s;
}

py::dict trajectory_dict(const Trajectory& t) {
    py::dict d;
    d["tau"] = py::array_t<double>(t.times.size(), t.times.data());
    for (const char* c : {"q", "p", "x1", "x2", "x3", "x4", "y1", "y2", "y3", "y4"}) {
        const auto v = t.coordinate_series(c);
        d[c] = py::array_t<double>(v.size(), v.data());
    }
    for (std::size_t k = 0; k < t.labels.size(); ++k)
        d[t.labels[k].c_str()] = py::array_t<double>(t.values[k].size(), t.values[k].data());
    return d;
}

py::dict summary_dict(const RunSummary& s) {
    py::dict d;
    d["name"] = s.config.name;
    d["ok"] = s.ok;
    d["verdict"] = std::string(to_string(s.verdict));
    d["drifts"] = s.drifts;
    if (s.lyapunov) {
        d["lyapunov"] = s.lyapunov->exponent;
        d["lyapunov_error"] = s.lyapunov->standard_error;
    }
    py::dict reports;
    for (const auto& r : s.reports) {
        py::dict e;
        e["dominant_peak_fraction"] = r.report.dominant_peak_fraction;
        e["spectral_flatness"] = r.report.spectral_flatness;
        e["flatness_baseline"] = r.report.flatness_baseline;
        e["verdict"] = std::string(to_string(r.report.verdict));
        reports[r.series.c_str()] = e;
    }
    d["reports"] = reports;
    std::vector<std::string> files;
    for (const auto& f : s.files) files.push_back(f.string());
    d["files"] = files;
    d["wall_seconds"] = s.wall_seconds;
    return d;
}

}  // namespace

PYBIND11_MODULE(_hybridqc, m) {
    m.doc() = "Hybrid quantum-classical dynamics of two qubits coupled to an oscillator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<RunError>(m, "RunError", PyExc_RuntimeError);
    py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);

    py::enum_<ModelKind>(m, "ModelKind")
        .value("Symmetric", ModelKind::Symmetric)
        .value("NonSymmetric1", ModelKind::NonSymmetric1)
        .value("NonSymmetric2", ModelKind::NonSymmetric2);
    py::enum_<Scheme>(m, "Scheme")
        .value("ImplicitMidpoint", Scheme::ImplicitMidpoint)
        .value("ExplicitRK4", Scheme::ExplicitRK4)
        .value("Splitting", Scheme::Splitting);

    py::class_<HybridModel>(m, "HybridModel")
        .def(py::init<>())
        .def_readwrite("kind", &HybridModel::kind)
        .def_readwrite("omega", &HybridModel::omega)
        .def_readwrite("mu", &HybridModel::mu)
        .def_readwrite("beta", &HybridModel::beta)
        .def_readwrite("m", &HybridModel::mass)
        .def_readwrite("k", &HybridModel::stiffness)
        .def_readwrite("c1", &HybridModel::c1)
        .def_readwrite("c2", &HybridModel::c2)
        .def_readwrite("hbar", &HybridModel::hbar)
        .def("validate", &HybridModel::validate);

    py::class_<IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init<>())
        .def_readwrite("dt", &IntegratorConfig::dt)
        .def_readwrite("scheme", &IntegratorConfig::scheme)
        .def_readwrite("fixed_point_tol", &IntegratorConfig::fixed_point_tol)
        .def_readwrite("fixed_point_max_iters", &IntegratorConfig::fixed_point_max_iters);

    m.def(
        "build_quantum_hamiltonian",
        [](ModelKind kind, double omega, double mu, double beta, double hbar) {
            return to_numpy(build_quantum_hamiltonian(kind, {omega, mu, beta}, hbar));
        },
        py::arg("kind"), py::arg("omega") = 1.0, py::arg("mu") = 5.0, py::arg("beta") = 1.0, py::arg("hbar") = 1.0);

    m.def(
        "unitary_evolve",
        [](const py::array_t<Complex, py::array::forcecast>& h, const std::vector<Complex>& psi0, double t,
           double hbar) {
            const auto v = unitary_evolve(from_numpy(h), to_vec4(psi0), t, hbar);
            return std::vector<Complex>(v.begin(), v.end());
        },
        py::arg("hamiltonian"), py::arg("psi0"), py::arg("t"), py::arg("hbar") = 1.0);

    m.def(
        "total_energy",
        [](const HybridModel& model, const std::vector<Complex>& psi, double q, double p) {
            return total_energy(state_from(psi, q, p, model.hbar), model);
        },
        py::arg("model"), py::arg("psi"), py::arg("q") = 0.0, py::arg("p") = 0.0);

    m.def(
        "integrate",
        [](const HybridModel& model, const std::vector<Complex>& psi, double q, double p,
           const IntegratorConfig& cfg, double t_end, int sample_every) {
            const auto s0 = state_from(psi, q, p, model.hbar);
            Trajectory t;
            {
                py::gil_scoped_release release;
                t = integrate(s0, model, cfg, t_end, sample_every);
            }
            return trajectory_dict(t);
        },
        py::arg("model"), py::arg("psi"), py::arg("q") = 1.0, py::arg("p") = 0.0,
        py::arg("config") = IntegratorConfig{}, py::arg("t_end") = 100.0, py::arg("sample_every") = 10);

    m.def(
        "amplitude_spectrum",
        [](const std::vector<double>& series, double dt_sample) {
            const auto sp = amplitude_spectrum(series, dt_sample);
            return py::make_tuple(py::array_t<double>(sp.freqs.size(), sp.freqs.data()),
                                  py::array_t<double>(sp.amps.size(), sp.amps.data()));
        },
        py::arg("series"), py::arg("dt_sample"));

    m.def("preset_names", &preset_names);
    m.def("preset_toml", &preset_toml, py::arg("name"));
    m.def(
        "run",
        [](const std::string& config_text, bool write_files, py::object horizon, py::object lyapunov) {
            const auto names = preset_names();
            auto cfg = std::find(names.begin(), names.end(), config_text) != names.end() ? preset_config(config_text)
                                                                                       : parse_config(config_text);
            if (!horizon.is_none()) cfg.horizon = horizon.cast<double>();
            if (!lyapunov.is_none()) cfg.lyapunov = lyapunov.cast<bool>();
            RunSummary s;
            {
                py::gil_scoped_release release;
                s = write_files ? hqc::run(cfg) : run_in_memory(cfg);
            }
            return summary_dict(s);
        },
        py::arg("config"), py::arg("write_files") = false, py::arg("horizon") = py::none(),
        py::arg("lyapunov") = py::none(),
        "Run a preset name or TOML config text; returns the summary as a dict.");
}
