#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "isoflow/config.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/scenario.hpp"

using namespace isoflow;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "isoflow_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("minimal config fills the documented defaults") {
    const ScenarioConfig cfg = parse_config_text(R"({"scenario": "rescaled-run",
        "initial": {"type": "bumps", "bumps": [{"center": 0, "width": 1, "amp": 0.5}]},
        "horizon": {"t_end": 1.0}})");
    CHECK(cfg.L == 10.0);
    CHECK(cfg.n == 400);
    CHECK(cfg.cfl == 0.4);
    CHECK(cfg.kappa == 1.0);
    CHECK(cfg.pressure.kind == "isothermal");
}

TEST_CASE("validation errors carry field paths") {
    SUBCASE("negative kappa") {
        try {
            parse_config_text(R"({"scenario": "tau-study", "model": {"kappa": -1.0},
                "horizon": {"t_end": 1.0}})");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("model.kappa") != std::string::npos);
        }
    }
    SUBCASE("Mellet-Vasseur regime") {
        try {
            parse_config_text(R"({"scenario": "rescaled-run",
                "model": {"eps": 2.0, "nu": 1.0, "require_mellet_vasseur": true},
                "initial": {"type": "bumps", "bumps": [{"center": 0, "width": 1, "amp": 1}]},
                "horizon": {"t_end": 1.0}})");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("eps <= nu") != std::string::npos);
        }
    }
    SUBCASE("several violations are reported together") {
        try {
            parse_config_text(R"({"scenario": "rescaled-run", "model": {"kappa": -2.0},
                "grid": {"n": 17}, "horizon": {"t_end": 1.0}})");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("model.kappa") != std::string::npos);
            CHECK(msg.find("grid.n") != std::string::npos);
        }
    }
}

TEST_CASE("unknown scenario and malformed files are parse errors") {
    CHECK_THROWS_AS(parse_config_text(R"({"scenario": "quantum-leap"})"), ParseError);
    CHECK_THROWS_AS(parse_config_text("{scenario: nope"), ParseError);
    CHECK_THROWS_AS(parse_config("/nonexistent/path.json"), ParseError);
}

TEST_CASE("subcommand supplies or cross-checks the scenario kind") {
    const ScenarioConfig cfg =
        parse_config_text(R"({"horizon": {"t_end": 1.0}})", ScenarioKind::TauStudy);
    CHECK(cfg.scenario == ScenarioKind::TauStudy);
    CHECK_THROWS_AS(parse_config_text(R"({"scenario": "tau-study", "horizon": {"t_end": 1}})",
                                      ScenarioKind::FokkerPlanck),
                    ValidationError);
}

TEST_CASE("tau-study scenario writes its outputs and passes") {
    const fs::path out = temp_dir("tau_study");
    ScenarioConfig cfg = parse_config_text(R"({"scenario": "tau-study",
        "horizon": {"t_end": 1000.0}})");
    cfg.output = out.string();
    const ScenarioResult res = run_scenario(cfg);
    CHECK(res.all_pass());
    CHECK(fs::exists(out / "trajectory.csv"));
    CHECK(fs::exists(out / "summary.csv"));
    CHECK(fs::exists(out / "run_meta.json"));
    const std::string summary = slurp(out / "summary.csv");
    CHECK(summary.find("scaling_ode.first_integral_conservation") != std::string::npos);
}

TEST_CASE("rescaled-run is deterministic byte for byte") {
    auto once = [&](const std::string& name) {
        const fs::path out = temp_dir(name);
        ScenarioConfig cfg = parse_config_text(R"({"scenario": "rescaled-run",
            "grid": {"L": 8.0, "n": 64},
            "horizon": {"t_end": 0.5}, "observe_every": 0.25,
            "initial": {"type": "bumps",
                        "bumps": [{"center": -1.0, "width": 0.7, "amp": 0.6},
                                   {"center": 1.2, "width": 0.5, "amp": 0.4}]}})");
        cfg.output = out.string();
        run_scenario(cfg);
        return slurp(out / "diagnostics.csv");
    };
    const std::string a = once("det_a");
    const std::string b = once("det_b");
    CHECK(a == b);
    CHECK(a.find("t,mass,I1,I2") == 0);
}

TEST_CASE("rescaled-run emits frames and verdicts") {
    const fs::path out = temp_dir("run_small");
    ScenarioConfig cfg = parse_config_text(R"({"scenario": "rescaled-run",
        "grid": {"L": 8.0, "n": 64}, "horizon": {"t_end": 0.5}, "observe_every": 0.25,
        "initial": {"type": "gaussian", "b0": 1.0, "alpha0": [1.0], "beta0": [0.0], "c0": [0.0]}})");
    cfg.output = out.string();
    const ScenarioResult res = run_scenario(cfg);
    CHECK(fs::exists(out / "frame_0.csv"));
    CHECK(fs::exists(out / "frame_0.5.csv"));
    bool has_mass = false, has_ck = false, has_energy = false;
    for (const auto& v : res.verdicts) {
        if (v.name == "rescaled_solver.mass_conservation") has_mass = true;
        if (v.name == "diagnostics.csiszar_kullback") has_ck = true;
        if (v.name == "rescaled_solver.pseudo_energy_decay") has_energy = true;
    }
    CHECK(has_mass);
    CHECK(has_ck);
    CHECK(has_energy);
    CHECK(res.all_pass());
}

TEST_CASE("fokker-planck scenario verdicts") {
    const fs::path out = temp_dir("fp_small");
    ScenarioConfig cfg = parse_config_text(R"({"scenario": "fokker-planck",
        "grid": {"L": 6.0, "n": 128}, "horizon": {"s_end": 2.0}, "observe_every": 0.02,
        "initial": {"type": "gaussian", "b0": 1.0, "alpha0": [2.0], "beta0": [0.0], "c0": [0.8]}})");
    cfg.output = out.string();
    const ScenarioResult res = run_scenario(cfg);
    CHECK(res.all_pass());
    CHECK(fs::exists(out / "fp_diagnostics.csv"));
}

TEST_CASE("gaussian-oracle scenario reports the refinement ratio") {
    const fs::path out = temp_dir("go_small");
    ScenarioConfig cfg = parse_config_text(R"({"scenario": "gaussian-oracle",
        "grid": {"L": 8.0, "n": 100}, "horizon": {"t_end": 0.5}, "observe_every": 0.25,
        "initial": {"type": "gaussian", "b0": 1.0, "alpha0": [1.0], "beta0": [0.0], "c0": [0.0]},
        "tolerances": {"l1_ratio_min": 1.5}})");
    cfg.output = out.string();
    const ScenarioResult res = run_scenario(cfg);
    CHECK(fs::exists(out / "refinement.csv"));
    CHECK(fs::exists(out / "gaussian_states.csv"));
    CHECK(res.all_pass());
}

TEST_CASE("isentropic-contrast scenario") {
    const fs::path out = temp_dir("contrast_small");
    ScenarioConfig cfg = parse_config_text(R"({"scenario": "isentropic-contrast",
        "gamma": 1.5, "grid": {"L": 10.0, "n": 128}, "horizon": {"sigma_end": 0.9},
        "profiles": {"a": [{"center": -3.0, "width": 0.5, "amp": 0.05}],
                     "b": [{"center": 3.0, "width": 0.5, "amp": 0.05}]}})");
    cfg.output = out.string();
    const ScenarioResult res = run_scenario(cfg);
    CHECK(fs::exists(out / "contrast.csv"));
    CHECK(res.all_pass());
}
