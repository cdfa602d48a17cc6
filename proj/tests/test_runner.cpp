#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hybridqc/runner.hpp"

using namespace hqc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "hybridqc_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string key_of_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<no error>";
}

RunConfig short_run(const std::string& preset, double horizon = 50.0) {
    auto cfg = preset_config(preset);
    cfg.horizon = horizon;
    cfg.lyapunov_config.n_renorms = 200;
    return cfg;
}

}  // namespace

TEST_CASE("preset fig1-symmetric carries the figure parameters") {
    const auto cfg = preset_config("fig1-symmetric");
    const auto& m = cfg.model;
    CHECK(m.kind == ModelKind::Symmetric);
    CHECK(m.omega == 1.0);
    CHECK(m.mu == 5.0);
    CHECK(m.mass == 1.0);
    CHECK(m.stiffness == 1.0);
    CHECK(m.c1 == 15.0);
    CHECK(m.c2 == 1.0);
    CHECK(m.hbar == 1.0);
    CHECK(preset_config("fig1-nonsymmetric2").model.kind == ModelKind::NonSymmetric2);
    CHECK(preset_config("fig3-nonsymmetric1").model.kind == ModelKind::NonSymmetric1);
    CHECK_THROWS_AS(preset_config("fig2"), ConfigError);
}

TEST_CASE("shipped preset files match the built-in presets") {
    for (const auto& name : preset_names()) {
        const fs::path file = fs::path(HQC_SOURCE_DIR) / "presets" / (name + ".toml");
        REQUIRE(fs::exists(file));
        CHECK(slurp(file) == preset_toml(name));
        CHECK(to_toml(load_config(file)) == to_toml(preset_config(name)));
        CHECK(to_toml(resolve_config(file.string())) == to_toml(resolve_config(name)));
    }
}

TEST_CASE("beta defaults to 1 for nonsymmetric1 with a warning") {
    const auto cfg = parse_config("[model]\nkind = \"ns1\"\n");
    CHECK(cfg.model.beta == 1.0);
    REQUIRE(cfg.warnings.size() == 1);
    CHECK(cfg.warnings[0].find("beta") != std::string::npos);
    CHECK(parse_config("[model]\nkind = \"ns1\"\nbeta = 0.5\n").warnings.empty());
    CHECK(parse_config("[model]\nkind = \"symmetric\"\n").warnings.empty());
}

TEST_CASE("invalid values are reported by key") {
    CHECK(key_of_error("[model]\nk = -1\n") == "model.k");
    CHECK(key_of_error("[model]\nm = 0\n") == "model.m");
    CHECK(key_of_error("[model]\nhbar = -2\n") == "model.hbar");
    CHECK(key_of_error("[model]\nkind = \"ns9\"\n") == "model.kind");
    CHECK(key_of_error("[integrator]\ndt = 0\n") == "integrator.dt");
    CHECK(key_of_error("[integrator]\nscheme = \"euler\"\n") == "integrator.scheme");
    CHECK(key_of_error("[integrator]\nhorizon = -5\n") == "integrator.horizon");
    CHECK(key_of_error("[diagnostics]\nn_renorms = 10\n") == "diagnostics.n_renorms");
    CHECK(key_of_error("[model]\nspin = 3\n") == "model.spin");
    CHECK(key_of_error("[model]\nomega = \"fast\"\n") == "model.omega");
    CHECK(key_of_error("[initial]\nstate = \"explicit\"\namplitudes_re = [1, 1, 0, 0]\n").rfind(
              "initial.amplitudes", 0) == 0);
    try {
        parse_config("[model]\nk = -1\n");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("k") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("[model\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.toml"), ConfigError);
}

TEST_CASE("defaults are recorded and the config echo round trips") {
    const auto cfg = parse_config("name = \"x\"\n[model]\nkind = \"ns2\"\nmu = 2.5\n");
    CHECK(cfg.model.mu == 2.5);
    CHECK(!cfg.defaulted.empty());
    CHECK(std::find(cfg.defaulted.begin(), cfg.defaulted.end(), "model.c1") != cfg.defaulted.end());
    const auto again = parse_config(to_toml(cfg));
    CHECK(to_toml(again) == to_toml(cfg));
    CHECK(again.defaulted.empty());
}

TEST_CASE("initial states") {
    InitialStateSpec spec;
    auto s = make_initial_state(spec, 1.0);
    CHECK(s.quantum.norm_squared() == doctest::Approx(2.0));
    CHECK(s.q == 1.0);
    CHECK(s.p == 0.0);

    spec.name = "basis-4";
    s = make_initial_state(spec, 2.0);
    CHECK(s.quantum.x[3] == doctest::Approx(2.0));

    spec.kind = InitialStateSpec::Kind::Random;
    spec.seed = 77;
    const auto r1 = make_initial_state(spec, 1.0);
    const auto r2 = make_initial_state(spec, 1.0);
    CHECK(r1.to_array() == r2.to_array());
    CHECK(r1.quantum.norm_squared() == doctest::Approx(2.0).epsilon(1e-14));
    spec.seed = 78;
    CHECK(make_initial_state(spec, 1.0).to_array() != r1.to_array());

    const auto cfg = parse_config(
        "[initial]\nstate = \"explicit\"\namplitudes_re = [0.6, 0, 0, 0]\namplitudes_im = [0, 0, 0, 0.8]\nq = 0.5\n");
    const auto e = make_initial_state(cfg.initial, 1.0);
    CHECK(e.quantum.x[0] == doctest::Approx(0.6 * std::sqrt(2.0)));
    CHECK(e.quantum.y[3] == doctest::Approx(0.8 * std::sqrt(2.0)));
    CHECK(e.q == 0.5);
}

TEST_CASE("run writes the manifest files") {
    auto cfg = short_run("fig1-symmetric");
    cfg.output_dir = scratch("run").string();
    const auto summary = run(cfg);
    CHECK(summary.ok);
    CHECK(summary.files.size() == 5);
    for (const auto& f : summary.files) {
        CHECK(fs::exists(f));
        CHECK(fs::file_size(f) > 0);
    }
    const auto csv = slurp(fs::path(cfg.output_dir) / "fig1-symmetric_timeseries.csv");
    CHECK(csv.rfind("tau,q,p,x1,x2,x3,x4,y1,y2,y3,y4,energy,norm,sigma_z1,sigma_z2,h_quantum\n", 0) == 0);

    const auto json = nlohmann::json::parse(slurp(fs::path(cfg.output_dir) / "fig1-symmetric_summary.json"));
    CHECK(json["status"] == "ok");
    const auto echoed = parse_config(json["config_toml"].get<std::string>());
    CHECK(to_toml(echoed) == to_toml(cfg));
    CHECK(slurp(fs::path(cfg.output_dir) / "fig1-symmetric_config.toml") == to_toml(cfg));
}

TEST_CASE("output directory override from the environment") {
    const auto dir = scratch("env");
    auto cfg = short_run("fig1-symmetric", 10.0);
    cfg.lyapunov = false;
    cfg.output_dir = "should-not-be-used";
    ::setenv("HQC_OUTPUT_DIR", dir.c_str(), 1);
    CHECK(effective_output_dir(cfg) == dir);
    const auto summary = run(cfg);
    ::unsetenv("HQC_OUTPUT_DIR");
    CHECK(fs::exists(dir / "fig1-symmetric_timeseries.csv"));
    CHECK(!fs::exists("should-not-be-used"));
    CHECK(effective_output_dir(cfg) == fs::path("should-not-be-used"));
}

TEST_CASE("integration failure flushes partial output and is marked") {
    auto cfg = short_run("fig1-nonsymmetric2");
    cfg.integrator.scheme = Scheme::ImplicitMidpoint;
    cfg.integrator.dt = 0.5;
    cfg.integrator.fixed_point_max_iters = 2;
    cfg.output_dir = scratch("fail").string();
    CHECK_THROWS_AS(run(cfg), RunError);
    CHECK(fs::exists(fs::path(cfg.output_dir) / "fig1-nonsymmetric2_timeseries.partial.csv"));
    const auto json =
        nlohmann::json::parse(slurp(fs::path(cfg.output_dir) / "fig1-nonsymmetric2_summary.json"));
    CHECK(json["status"] == "failed");
}

TEST_CASE("repeated runs are byte identical") {
    auto cfg = short_run("fig3-nonsymmetric1", 100.0);
    cfg.lyapunov = false;
    const auto a = scratch("det_a"), b = scratch("det_b");
    cfg.output_dir = a.string();
    run(cfg);
    cfg.output_dir = b.string();
    run(cfg);
    for (const char* f : {"_timeseries.csv", "_spectrum_q.csv", "_spectrum_x1.csv"})
        CHECK(slurp(a / ("fig3-nonsymmetric1" + std::string(f))) == slurp(b / ("fig3-nonsymmetric1" + std::string(f))));
}

TEST_CASE("sweep over mu on the symmetric preset stays regular") {
    auto base = preset_config("fig1-symmetric");
    base.output_dir = scratch("sweep_mu").string();
    const auto out = sweep(base, "mu", {0.0, 5.0});
    REQUIRE(out.size() == 2);
    CHECK(out[0].config.model.mu == 0.0);
    CHECK(out[1].config.model.mu == 5.0);
    for (const auto& s : out) {
        CAPTURE(s.config.model.mu);
        CHECK(s.ok);
        CHECK(s.verdict == Verdict::Regular);
    }
    CHECK(fs::exists(fs::path(base.output_dir) / "sweep_mu.csv"));
    CHECK(fs::exists(fs::path(base.output_dir) / "mu=0.0" / "fig1-symmetric_mu=0.0_timeseries.csv"));
}

TEST_CASE("sweep over the coupling on nonsymmetric2") {
    auto base = preset_config("fig1-nonsymmetric2");
    base.model.c2 = 0.0;
    base.output_dir = scratch("sweep_c1").string();
    const auto out = sweep(base, "c1", {0.0, 15.0}, false);
    REQUIRE(out.size() == 2);
    CHECK(out[0].verdict == Verdict::Regular);
    CHECK(out[1].verdict == Verdict::Chaotic);
}

TEST_CASE("sweep edge cases") {
    auto base = short_run("fig1-symmetric", 10.0);
    CHECK(sweep(base, "mu", {}, false).empty());
    CHECK_THROWS_AS(sweep(base, "colour", {1.0}, false), ConfigError);
    const auto out = sweep(base, "k", {-1.0, 1.0}, false);
    REQUIRE(out.size() == 2);
    CHECK(!out[0].ok);
    CHECK(!out[0].error.empty());
    CHECK(out[1].ok);
}

TEST_CASE("a diagnostics failure is reported as a failed run") {
    auto cfg = short_run("fig1-nonsymmetric2");
    cfg.lyapunov_config.d0 = 1e300;
    cfg.output_dir = scratch("lyap_fail").string();
    CHECK_THROWS_AS(run(cfg), RunError);
    const auto json =
        nlohmann::json::parse(slurp(fs::path(cfg.output_dir) / "fig1-nonsymmetric2_summary.json"));
    CHECK(json["status"] == "failed");
}
