#ifndef ISOFLOW_CONFIG_HPP
#define ISOFLOW_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

namespace isoflow {

enum class ScenarioKind { TauStudy, GaussianOracle, RescaledRun, FokkerPlanck, IsentropicContrast };

const char* to_string(ScenarioKind k);
std::optional<ScenarioKind> scenario_from_string(const std::string& s);

struct PressureSpec {
    std::string kind = "isothermal";  // isothermal | isothermal-plus-powers | exponential
    double kappa = 1.0;
    std::vector<std::pair<double, double>> powers;  // (k_j, gamma_j)
};

struct BumpSpec {
    double center = 0.0;
    double width = 1.0;  // Gaussian e^{-((y-center)/width)^2 / 2} scale below
    double amp = 1.0;
};

struct InitialSpec {
    std::string type = "gaussian";  // gaussian | bumps | file
    // gaussian
    double b0 = 1.0;
    std::vector<double> alpha0{1.0}, beta0{0.0}, c0{0.0};
    // bumps (rescaled-frame density) with a constant initial velocity
    std::vector<BumpSpec> bumps;
    double u0 = 0.0;
    // file
    std::string path;
};

struct Tolerances {
    std::optional<double> drift_max;            // tau-study first-integral drift
    double l1_ratio_min = 1.8;                  // gaussian-oracle refinement ratio
    double mass_drift_max = 1e-8;
    double ck_slack = 1e-12;
    std::optional<double> energy_increase_max;  // rescaled-run pseudo-energy slack
    double rate_rel_tol = 0.10;                 // fokker-planck rate vs eigen oracle
    double persist_min = 0.5;                   // isentropic mutual-distance retention
    double halve_max = 0.5;                     // isothermal distance-to-Gamma shrink
};

struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::RescaledRun;
    // model
    double kappa = 1.0, eps = 0.0, nu = 0.0;
    int d = 1;
    PressureSpec pressure;
    bool require_mellet_vasseur = false;
    // grid
    double L = 10.0;
    int n = 400;
    // horizons (one of, depending on scenario)
    double t_end = 10.0;
    double s_end = 1.0;
    double sigma_end = 0.99;
    // isentropic
    double gamma = 1.5;
    std::vector<BumpSpec> profile_a, profile_b;
    // tau-study initial data
    double tau_alpha = 1.0, tau_beta = 0.0;
    double rel_tol = 1e-10;
    // run controls
    InitialSpec initial;
    double observe_every = 1.0;
    double cfl = 0.4;
    std::string output = "out";
    Tolerances tol;
};

// Parses and fully validates a config file. Throws ParseError on malformed
// input and ValidationError listing every violated precondition with its
// field path. When the file omits the "scenario" field, `kind` (the CLI
// subcommand) supplies it; a conflicting value is a ValidationError.
ScenarioConfig parse_config(const std::string& path,
                            std::optional<ScenarioKind> kind = std::nullopt);
ScenarioConfig parse_config_text(const std::string& text,
                                 std::optional<ScenarioKind> kind = std::nullopt);

// Collects precondition violations ("field.path: message" per entry).
std::vector<std::string> validate(const ScenarioConfig& cfg);

}  // namespace isoflow

#endif
