#include "hybridqc/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "toml_lite.hpp"

namespace hqc {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Initial state

HybridState make_initial_state(const InitialStateSpec& spec, double hbar) {
    ComplexVector4 psi{};
    switch (spec.kind) {
        case InitialStateSpec::Kind::Named:
            if (spec.name == "equal-superposition") {
                psi = {0.5, 0.5, 0.5, 0.5};
            } else if (spec.name.size() == 7 && spec.name.rfind("basis-", 0) == 0 && spec.name[6] >= '1' &&
                       spec.name[6] <= '4') {
                psi[static_cast<std::size_t>(spec.name[6] - '1')] = 1.0;
            } else {
                throw ConfigError("initial.state: unknown named state '" + spec.name + "'", "initial.state");
            }
            break;
        case InitialStateSpec::Kind::Explicit: {
            const double n = norm(spec.amplitudes);
            if (std::abs(n * n - 1.0) > 1e-9) {
                throw ConfigError("initial.amplitudes: squared norm " + std::to_string(n * n) + " differs from 1",
                                  "initial.amplitudes_re");
            }
            psi = spec.amplitudes;
            break;
        }
        case InitialStateSpec::Kind::Random: {
            std::mt19937_64 rng(spec.seed);
            std::normal_distribution<double> gauss;
            for (auto& c : psi) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                c = Complex(re, im);
            }
            const double n = norm(psi);
            for (auto& c : psi) c /= n;
            break;
        }
    }
    HybridState s;
    s.quantum = state_to_coords(psi, hbar);
    s.q = spec.q;
    s.p = spec.p;
    return s;
}

// ---------------------------------------------------------------------------
// Config parsing

void RunConfig::validate() const {
    try {
        model.validate();
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        throw ConfigError(std::string("model.") + what, "model." + what.substr(0, what.find(':')));
    }
    try {
        integrator.validate();
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        throw ConfigError(std::string("integrator.") + what, "integrator." + what.substr(0, what.find(':')));
    }
    if (!(horizon > 0.0)) throw ConfigError("integrator.horizon: must be positive", "integrator.horizon");
    if (sample_every < 1) throw ConfigError("integrator.sample_every: must be >= 1", "integrator.sample_every");
    if (lyapunov) {
        if (!(lyapunov_config.renorm_interval > 0.0))
            throw ConfigError("diagnostics.renorm_interval: must be positive", "diagnostics.renorm_interval");
        if (lyapunov_config.n_renorms < 100)
            throw ConfigError("diagnostics.n_renorms: must be >= 100", "diagnostics.n_renorms");
        if (!(lyapunov_config.d0 > 0.0)) throw ConfigError("diagnostics.d0: must be positive", "diagnostics.d0");
    }
    if (name.empty() || name.find_first_of("/\\") != std::string::npos)
        throw ConfigError("name: must be a non-empty file-name-safe string", "name");
}

namespace {

class ConfigReader {
public:
    ConfigReader(toml_lite::Document doc, std::string source) : doc_(std::move(doc)), source_(std::move(source)) {}

    bool has(const std::string& key) const { return doc_.count(key) != 0; }

    double number(const std::string& key, double fallback, std::vector<std::string>& defaulted) {
        auto it = take(key);
        if (!it) {
            defaulted.push_back(key);
            return fallback;
        }
        if (const double* v = std::get_if<double>(&it->value)) return *v;
        fail(key, "expected a number");
    }

    int integer(const std::string& key, int fallback, std::vector<std::string>& defaulted) {
        const double v = number(key, fallback, defaulted);
        if (v != std::floor(v) || std::abs(v) > std::numeric_limits<int>::max()) fail(key, "expected an integer");
        return static_cast<int>(v);
    }

    std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback, std::vector<std::string>& defaulted) {
        auto it = take(key);
        if (!it) {
            defaulted.push_back(key);
            return fallback;
        }
        std::uint64_t out = 0;
        const auto& raw = it->raw;
        auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), out);
        if (ec != std::errc{} || ptr != raw.data() + raw.size()) fail(key, "expected a non-negative 64-bit integer");
        return out;
    }

    bool boolean(const std::string& key, bool fallback, std::vector<std::string>& defaulted) {
        auto it = take(key);
        if (!it) {
            defaulted.push_back(key);
            return fallback;
        }
        if (const bool* v = std::get_if<bool>(&it->value)) return *v;
        fail(key, "expected true or false");
    }

    std::string string(const std::string& key, const std::string& fallback, std::vector<std::string>& defaulted) {
        auto it = take(key);
        if (!it) {
            defaulted.push_back(key);
            return fallback;
        }
        if (const std::string* v = std::get_if<std::string>(&it->value)) return *v;
        fail(key, "expected a string");
    }

    std::vector<double> array(const std::string& key, std::size_t size) {
        auto it = take(key);
        if (!it) fail(key, "missing");
        const auto* v = std::get_if<std::vector<double>>(&it->value);
        if (!v || v->size() != size) fail(key, "expected an array of " + std::to_string(size) + " numbers");
        return *v;
    }

    void reject_unknown() const {
        for (const auto& [key, entry] : doc_)
            if (!used_.count(key)) {
                throw ConfigError(source_ + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'", key);
            }
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        auto it = doc_.find(key);
        const std::string where = it == doc_.end() ? source_ : source_ + ":" + std::to_string(it->second.line);
        throw ConfigError(where + ": " + key + ": " + what, key);
    }

private:
    const toml_lite::Entry* take(const std::string& key) {
        auto it = doc_.find(key);
        if (it == doc_.end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    toml_lite::Document doc_;
    std::string source_;
    std::set<std::string> used_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
    toml_lite::Document doc;
    try {
        doc = toml_lite::parse(text, source);
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    }
    ConfigReader r(std::move(doc), source);
    RunConfig c;
    auto& d = c.defaulted;

    c.name = r.string("name", c.name, d);

    const std::string kind = r.string("model.kind", "symmetric", d);
    try {
        c.model.kind = parse_model_kind(kind);
    } catch (const std::invalid_argument& e) {
        r.fail("model.kind", e.what());
    }
    const HybridModel defaults;
    c.model.omega = r.number("model.omega", defaults.omega, d);
    c.model.mu = r.number("model.mu", defaults.mu, d);
    const bool beta_given = r.has("model.beta");
    c.model.beta = r.number("model.beta", defaults.beta, d);
    if (!beta_given && c.model.kind == ModelKind::NonSymmetric1) {
        c.warnings.push_back("model.beta not given for nonsymmetric1; using default beta = 1");
    }
    c.model.mass = r.number("model.m", defaults.mass, d);
    c.model.stiffness = r.number("model.k", defaults.stiffness, d);
    c.model.c1 = r.number("model.c1", defaults.c1, d);
    c.model.c2 = r.number("model.c2", defaults.c2, d);
    c.model.hbar = r.number("model.hbar", defaults.hbar, d);

    const std::string state = r.string("initial.state", "equal-superposition", d);
    if (state == "explicit") {
        c.initial.kind = InitialStateSpec::Kind::Explicit;
        const auto re = r.array("initial.amplitudes_re", 4);
        std::vector<double> im(4, 0.0);
        if (r.has("initial.amplitudes_im")) im = r.array("initial.amplitudes_im", 4);
        for (std::size_t n = 0; n < 4; ++n) c.initial.amplitudes[n] = Complex(re[n], im[n]);
    } else if (state == "random") {
        c.initial.kind = InitialStateSpec::Kind::Random;
        c.initial.seed = r.unsigned64("initial.seed", 0, d);
    } else {
        c.initial.kind = InitialStateSpec::Kind::Named;
        c.initial.name = state;
    }
    c.initial.q = r.number("initial.q", 1.0, d);
    c.initial.p = r.number("initial.p", 0.0, d);

    try {
        c.integrator.scheme = parse_scheme(r.string("integrator.scheme", "splitting", d));
    } catch (const std::invalid_argument& e) {
        r.fail("integrator.scheme", e.what());
    }
    c.integrator.dt = r.number("integrator.dt", c.integrator.dt, d);
    c.integrator.fixed_point_tol = r.number("integrator.fixed_point_tol", c.integrator.fixed_point_tol, d);
    c.integrator.fixed_point_max_iters =
        r.integer("integrator.fixed_point_max_iters", c.integrator.fixed_point_max_iters, d);
    c.horizon = r.number("integrator.horizon", c.horizon, d);
    c.sample_every = r.integer("integrator.sample_every", c.sample_every, d);

    c.spectra = r.boolean("diagnostics.spectra", c.spectra, d);
    c.lyapunov = r.boolean("diagnostics.lyapunov", c.lyapunov, d);
    c.lyapunov_config.renorm_interval =
        r.number("diagnostics.renorm_interval", c.lyapunov_config.renorm_interval, d);
    c.lyapunov_config.n_renorms = r.integer("diagnostics.n_renorms", c.lyapunov_config.n_renorms, d);
    c.lyapunov_config.d0 = r.number("diagnostics.d0", c.lyapunov_config.d0, d);
    c.lyapunov_config.seed = r.unsigned64("diagnostics.lyapunov_seed", c.lyapunov_config.seed, d);
    auto& t = c.thresholds;
    t.regular_max_lyapunov = r.number("diagnostics.regular_max_lyapunov", t.regular_max_lyapunov, d);
    t.regular_min_peak_fraction = r.number("diagnostics.regular_min_peak_fraction", t.regular_min_peak_fraction, d);
    t.chaotic_min_lyapunov = r.number("diagnostics.chaotic_min_lyapunov", t.chaotic_min_lyapunov, d);
    t.chaotic_flatness_factor = r.number("diagnostics.chaotic_flatness_factor", t.chaotic_flatness_factor, d);

    c.output_dir = r.string("output.directory", c.output_dir, d);

    r.reject_unknown();
    c.validate();
    if (c.initial.kind != InitialStateSpec::Kind::Random) {
        make_initial_state(c.initial, c.model.hbar);  // validates named/explicit states
    }
    return c;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.string());
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, ptr);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string to_toml(const RunConfig& c) {
    std::ostringstream o;
    o << "name = \"" << c.name << "\"\n\n";
    o << "[model]\n"
      << "kind = \"" << to_string(c.model.kind) << "\"\n"
      << "omega = " << fmt_double(c.model.omega) << "\n"
      << "mu = " << fmt_double(c.model.mu) << "\n"
      << "beta = " << fmt_double(c.model.beta) << "\n"
      << "m = " << fmt_double(c.model.mass) << "\n"
      << "k = " << fmt_double(c.model.stiffness) << "\n"
      << "c1 = " << fmt_double(c.model.c1) << "\n"
      << "c2 = " << fmt_double(c.model.c2) << "\n"
      << "hbar = " << fmt_double(c.model.hbar) << "\n\n";
    o << "[initial]\n";
    switch (c.initial.kind) {
        case InitialStateSpec::Kind::Named:
            o << "state = \"" << c.initial.name << "\"\n";
            break;
        case InitialStateSpec::Kind::Explicit: {
            o << "state = \"explicit\"\n";
            o << "amplitudes_re = [";
            for (std::size_t n = 0; n < 4; ++n) o << (n ? ", " : "") << fmt_double(c.initial.amplitudes[n].real());
            o << "]\namplitudes_im = [";
            for (std::size_t n = 0; n < 4; ++n) o << (n ? ", " : "") << fmt_double(c.initial.amplitudes[n].imag());
            o << "]\n";
            break;
        }
        case InitialStateSpec::Kind::Random:
            o << "state = \"random\"\nseed = " << c.initial.seed << "\n";
            break;
    }
    o << "q = " << fmt_double(c.initial.q) << "\n"
      << "p = " << fmt_double(c.initial.p) << "\n\n";
    o << "[integrator]\n"
      << "scheme = \"" << to_string(c.integrator.scheme) << "\"\n"
      << "dt = " << fmt_double(c.integrator.dt) << "\n"
      << "fixed_point_tol = " << fmt_double(c.integrator.fixed_point_tol) << "\n"
      << "fixed_point_max_iters = " << c.integrator.fixed_point_max_iters << "\n"
      << "horizon = " << fmt_double(c.horizon) << "\n"
      << "sample_every = " << c.sample_every << "\n\n";
    o << "[diagnostics]\n"
      << "spectra = " << fmt_bool(c.spectra) << "\n"
      << "lyapunov = " << fmt_bool(c.lyapunov) << "\n"
      << "renorm_interval = " << fmt_double(c.lyapunov_config.renorm_interval) << "\n"
      << "n_renorms = " << c.lyapunov_config.n_renorms << "\n"
      << "d0 = " << fmt_double(c.lyapunov_config.d0) << "\n"
      << "lyapunov_seed = " << c.lyapunov_config.seed << "\n"
      << "regular_max_lyapunov = " << fmt_double(c.thresholds.regular_max_lyapunov) << "\n"
      << "regular_min_peak_fraction = " << fmt_double(c.thresholds.regular_min_peak_fraction) << "\n"
      << "chaotic_min_lyapunov = " << fmt_double(c.thresholds.chaotic_min_lyapunov) << "\n"
      << "chaotic_flatness_factor = " << fmt_double(c.thresholds.chaotic_flatness_factor) << "\n\n";
    o << "[output]\n"
      << "directory = \"" << c.output_dir << "\"\n";
    return o.str();
}

// ---------------------------------------------------------------------------
// Presets

namespace {

struct Preset {
    const char* name;
    const char* toml;
};

// Oscillator and coupling parameters: omega=1, mu=5, m=k=1, c1=15, c2=1.
constexpr Preset kPresets[] = {
    {"fig1-symmetric", R"(name = "fig1-symmetric"

[model]
kind = "symmetric"
omega = 1.0
mu = 5.0
m = 1.0
k = 1.0
c1 = 15.0
c2 = 1.0
hbar = 1.0

[initial]
state = "equal-superposition"
q = 1.0
p = 0.0
)"},
    {"fig1-nonsymmetric2", R"(name = "fig1-nonsymmetric2"

[model]
kind = "nonsymmetric2"
omega = 1.0
mu = 5.0
m = 1.0
k = 1.0
c1 = 15.0
c2 = 1.0
hbar = 1.0

[initial]
state = "equal-superposition"
q = 1.0
p = 0.0
)"},
    {"fig3-nonsymmetric1", R"(name = "fig3-nonsymmetric1"

[model]
kind = "nonsymmetric1"
omega = 1.0
mu = 5.0
# beta is not pinned by the reference figures
beta = 1.0
m = 1.0
k = 1.0
c1 = 15.0
c2 = 1.0
hbar = 1.0

[initial]
state = "equal-superposition"
q = 1.0
p = 0.0
)"},
};

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : kPresets) out.emplace_back(p.name);
    return out;
}

std::string preset_toml(const std::string& name) {
    for (const auto& p : kPresets)
        if (name == p.name) return p.toml;
    throw ConfigError("unknown preset '" + name + "'");
}

RunConfig preset_config(const std::string& name) { return parse_config(preset_toml(name), "preset:" + name); }

RunConfig resolve_config(const std::string& path_or_preset) {
    if (fs::is_regular_file(path_or_preset)) return load_config(path_or_preset);
    for (const auto& p : kPresets)
        if (path_or_preset == p.name) return preset_config(p.name);
    throw ConfigError("'" + path_or_preset + "' is neither a config file nor a preset name");
}

// ---------------------------------------------------------------------------
// Running

const SeriesReport* RunSummary::report_for(const std::string& series) const {
    for (const auto& r : reports)
        if (r.series == series) return &r;
    return nullptr;
}

fs::path effective_output_dir(const RunConfig& cfg) {
    if (const char* env = std::getenv("HQC_OUTPUT_DIR"); env && *env) return fs::path(env);
    return fs::path(cfg.output_dir);
}

namespace {

void write_timeseries(const fs::path& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "tau,q,p,x1,x2,x3,x4,y1,y2,y3,y4";
    for (const auto& l : traj.labels) out << ',' << l;
    out << '\n';
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf;
    };
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& s = traj.states[i];
        put(traj.times[i]);
        for (double v : {s.q, s.p}) out << ',', put(v);
        for (double v : s.quantum.x) out << ',', put(v);
        for (double v : s.quantum.y) out << ',', put(v);
        for (const auto& col : traj.values) out << ',', put(col[i]);
        out << '\n';
    }
}

void write_spectrum(const fs::path& path, const AmplitudeSpectrum& sp) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "freq,amplitude\n";
    char buf[64];
    for (std::size_t k = 0; k < sp.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", sp.freqs[k], sp.amps[k]);
        out << buf;
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

json chaos_json(const ChaosReport& r) {
    auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return json{{"lyapunov", finite_or_null(r.lyapunov)},
                {"lyapunov_error", finite_or_null(r.lyapunov_error)},
                {"dominant_peak_fraction", r.dominant_peak_fraction},
                {"spectral_flatness", r.spectral_flatness},
                {"flatness_baseline", r.flatness_baseline},
                {"verdict", std::string(to_string(r.verdict))},
                {"thresholds",
                 {{"regular_max_lyapunov", r.thresholds.regular_max_lyapunov},
                  {"regular_min_peak_fraction", r.thresholds.regular_min_peak_fraction},
                  {"chaotic_min_lyapunov", r.thresholds.chaotic_min_lyapunov},
                  {"chaotic_flatness_factor", r.thresholds.chaotic_flatness_factor}}}};
}

struct RunProducts {
    RunSummary summary;
    Trajectory trajectory;
    std::vector<std::pair<std::string, AmplitudeSpectrum>> spectra;
    std::optional<IntegrationError> failure;
};

RunProducts execute(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    cfg.validate();
    RunProducts out;
    auto& summary = out.summary;
    summary.config = cfg;

    const HybridState s0 = make_initial_state(cfg.initial, cfg.model.hbar);
    auto outcome = integrate_checked(s0, cfg.model, cfg.integrator, cfg.horizon, cfg.sample_every);
    out.trajectory = std::move(outcome.trajectory);
    const auto& traj = out.trajectory;
    summary.final_time = traj.times.empty() ? 0.0 : traj.times.back();
    for (const auto& label : traj.labels) summary.drifts[label] = conservation_drift(traj, label);

    if (outcome.failure) {
        summary.ok = false;
        summary.error = outcome.failure->what();
        out.failure = std::move(outcome.failure);
    } else {
        if (cfg.lyapunov) {
            try {
                summary.lyapunov = lyapunov_benettin(cfg.model, s0, cfg.integrator, cfg.lyapunov_config);
            } catch (const IntegrationError& e) {
                summary.ok = false;
                summary.error = std::string("lyapunov: ") + e.what();
                out.failure = IntegrationError(summary.error, e.iterations(), e.residual(), e.time());
            } catch (const std::runtime_error& e) {
                summary.ok = false;
                summary.error = std::string("lyapunov: ") + e.what();
                out.failure = IntegrationError(summary.error, 0, 0.0, summary.final_time);
            }
        }
        if (cfg.spectra && summary.ok) {
            // Only the uniformly spaced samples (a trailing partial stride is dropped).
            const long n_steps = step_count(cfg.horizon, cfg.integrator.dt);
            const auto uniform = static_cast<std::size_t>(n_steps / cfg.sample_every) + 1;
            const double dt_sample = cfg.integrator.dt * cfg.sample_every;
            LyapunovEstimate lyap{std::numeric_limits<double>::quiet_NaN(), 0.0, 0};
            if (summary.lyapunov) lyap = *summary.lyapunov;
            for (const std::string series : {"q", "x1"}) {
                auto values = traj.coordinate_series(series);
                values.resize(std::min(values.size(), uniform));
                auto sp = amplitude_spectrum(values, dt_sample);
                summary.reports.push_back({series, chaos_report(sp, lyap, cfg.thresholds)});
                out.spectra.emplace_back(series, std::move(sp));
            }
            const bool regular = summary.reports.front().report.verdict == Verdict::Regular;
            const bool chaotic = std::all_of(summary.reports.begin(), summary.reports.end(),
                                             [](const SeriesReport& r) { return r.report.verdict == Verdict::Chaotic; });
            summary.verdict = regular ? Verdict::Regular : chaotic ? Verdict::Chaotic : Verdict::Indeterminate;
        }
    }
    summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace

std::string summary_json(const RunSummary& s) {
    const auto& c = s.config;
    json j;
    j["name"] = c.name;
    j["status"] = s.ok ? "ok" : "failed";
    if (!s.ok) j["error"] = s.error;
    j["config_toml"] = to_toml(c);
    j["defaulted_keys"] = c.defaulted;
    j["warnings"] = c.warnings;

    const auto s0 = make_initial_state(c.initial, c.model.hbar);
    const auto psi = coords_to_state(s0.quantum, c.model.hbar);
    json amps = json::array();
    for (const auto& a : psi) amps.push_back({a.real(), a.imag()});
    j["initial_state"] = {{"amplitudes", amps}, {"q", s0.q}, {"p", s0.p}};
    if (c.initial.kind == InitialStateSpec::Kind::Random) j["initial_state"]["seed"] = c.initial.seed;

    j["final_time"] = s.final_time;
    j["drifts"] = s.drifts;
    if (s.lyapunov) {
        j["lyapunov"] = {{"exponent", s.lyapunov->exponent},
                         {"standard_error", s.lyapunov->standard_error},
                         {"n_renorms", s.lyapunov->n_renorms}};
    }
    json reports = json::object();
    for (const auto& r : s.reports) reports[r.series] = chaos_json(r.report);
    j["reports"] = reports;
    j["verdict"] = std::string(to_string(s.verdict));
    j["wall_seconds"] = s.wall_seconds;
    json files = json::array();
    for (const auto& f : s.files) files.push_back(f.filename().string());
    j["files"] = files;
    return j.dump(2) + "\n";
}

RunSummary run_in_memory(const RunConfig& cfg) {
    auto products = execute(cfg);
    if (products.failure) throw RunError(products.summary.error);
    return std::move(products.summary);
}

namespace {

RunSummary run_into(const RunConfig& cfg, const fs::path& dir) {
    auto products = execute(cfg);
    auto& summary = products.summary;
    fs::create_directories(dir);
    const std::string stem = cfg.name;

    if (products.failure) {
        const auto partial = dir / (stem + "_timeseries.partial.csv");
        write_timeseries(partial, products.trajectory);
        summary.files.push_back(partial);
        const auto summary_path = dir / (stem + "_summary.json");
        summary.files.push_back(summary_path);
        write_text(summary_path, summary_json(summary));
        throw RunError(summary.error);
    }

    const auto ts = dir / (stem + "_timeseries.csv");
    write_timeseries(ts, products.trajectory);
    summary.files.push_back(ts);
    for (const auto& [series, sp] : products.spectra) {
        const auto path = dir / (stem + "_spectrum_" + series + ".csv");
        write_spectrum(path, sp);
        summary.files.push_back(path);
    }
    const auto cfg_path = dir / (stem + "_config.toml");
    write_text(cfg_path, to_toml(cfg));
    summary.files.push_back(cfg_path);
    const auto summary_path = dir / (stem + "_summary.json");
    summary.files.push_back(summary_path);
    write_text(summary_path, summary_json(summary));
    return summary;
}

}  // namespace

RunSummary run(const RunConfig& cfg) { return run_into(cfg, effective_output_dir(cfg)); }

// ---------------------------------------------------------------------------
// Sweeps

void set_model_parameter(HybridModel& m, const std::string& axis, double value) {
    if (axis == "omega") m.omega = value;
    else if (axis == "mu") m.mu = value;
    else if (axis == "beta") m.beta = value;
    else if (axis == "m" || axis == "mass") m.mass = value;
    else if (axis == "k" || axis == "stiffness") m.stiffness = value;
    else if (axis == "c1") m.c1 = value;
    else if (axis == "c2") m.c2 = value;
    else if (axis == "hbar") m.hbar = value;
    else throw ConfigError("unknown sweep axis '" + axis + "'", axis);
}

std::vector<RunSummary> sweep(const RunConfig& base, const std::string& axis, const std::vector<double>& values,
                              bool write_files, unsigned max_threads) {
    {
        HybridModel probe = base.model;
        set_model_parameter(probe, axis, 0.0);  // rejects unknown axes before any work
    }
    const fs::path base_dir = effective_output_dir(base);

    std::vector<RunConfig> configs;
    for (double v : values) {
        RunConfig c = base;
        set_model_parameter(c.model, axis, v);
        c.name = base.name + "_" + axis + "=" + fmt_double(v);
        c.output_dir = (base_dir / (axis + "=" + fmt_double(v))).string();
        configs.push_back(std::move(c));
    }

    auto run_one = [write_files](const RunConfig& c) {
        try {
            if (!write_files) return run_in_memory(c);
            return run_into(c, c.output_dir);
        } catch (const std::exception& e) {
            RunSummary failed;
            failed.config = c;
            failed.ok = false;
            failed.error = e.what();
            return failed;
        }
    };

    unsigned threads = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<RunSummary> summaries(configs.size());
    for (std::size_t begin = 0; begin < configs.size(); begin += threads) {
        const std::size_t end = std::min(configs.size(), begin + threads);
        std::vector<std::future<RunSummary>> pending;
        for (std::size_t i = begin; i < end; ++i)
            pending.push_back(std::async(std::launch::async, run_one, std::cref(configs[i])));
        for (std::size_t i = begin; i < end; ++i) summaries[i] = pending[i - begin].get();
    }

    if (write_files && !values.empty()) {
        fs::create_directories(base_dir);
        std::ofstream out(base_dir / ("sweep_" + axis + ".csv"));
        out << axis << ",status,verdict,lyapunov,q_peak_fraction,q_flatness,x1_peak_fraction,x1_flatness,error\n";
        for (std::size_t i = 0; i < summaries.size(); ++i) {
            const auto& s = summaries[i];
            out << fmt_double(values[i]) << ',' << (s.ok ? "ok" : "failed") << ',' << to_string(s.verdict) << ',';
            if (s.lyapunov) out << fmt_double(s.lyapunov->exponent);
            for (const char* series : {"q", "x1"}) {
                out << ',';
                if (const auto* r = s.report_for(series))
                    out << fmt_double(r->report.dominant_peak_fraction) << ',' << fmt_double(r->report.spectral_flatness);
                else
                    out << ',';
            }
            std::string err = s.error;
            std::replace(err.begin(), err.end(), ',', ';');
            std::replace(err.begin(), err.end(), '\n', ' ');
            out << ',' << err << '\n';
        }
    }
    return summaries;
}

}  // namespace hqc
