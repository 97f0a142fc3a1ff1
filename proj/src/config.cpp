#include "isoflow/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "isoflow/errors.hpp"

namespace isoflow {

using nlohmann::json;

const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::TauStudy: return "tau-study";
        case ScenarioKind::GaussianOracle: return "gaussian-oracle";
        case ScenarioKind::RescaledRun: return "rescaled-run";
        case ScenarioKind::FokkerPlanck: return "fokker-planck";
        case ScenarioKind::IsentropicContrast: return "isentropic-contrast";
    }
    return "?";
}

std::optional<ScenarioKind> scenario_from_string(const std::string& s) {
    for (ScenarioKind k : {ScenarioKind::TauStudy, ScenarioKind::GaussianOracle,
                           ScenarioKind::RescaledRun, ScenarioKind::FokkerPlanck,
                           ScenarioKind::IsentropicContrast})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

namespace {

std::vector<BumpSpec> read_bumps(const json& arr, const std::string& path,
                                 std::vector<std::string>& errors) {
    std::vector<BumpSpec> out;
    if (!arr.is_array()) {
        errors.push_back(path + ": expected an array of {center,width,amp}");
        return out;
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& b = arr[i];
        BumpSpec s;
        s.center = b.value("center", 0.0);
        s.width = b.value("width", 1.0);
        s.amp = b.value("amp", 1.0);
        if (!(s.width > 0))
            errors.push_back(path + "[" + std::to_string(i) + "].width: must be > 0");
        out.push_back(s);
    }
    return out;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text, std::optional<ScenarioKind> kind) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    std::vector<std::string> errors;
    ScenarioConfig cfg;

    if (j.contains("scenario")) {
        const auto s = j["scenario"].get<std::string>();
        const auto k = scenario_from_string(s);
        if (!k) throw ParseError("scenario: unknown kind '" + s + "'");
        cfg.scenario = *k;
        if (kind && *kind != *k)
            errors.push_back(std::string("scenario: '") + s + "' conflicts with the subcommand '" +
                             to_string(*kind) + "'");
    } else if (kind) {
        cfg.scenario = *kind;
    } else {
        errors.push_back("scenario: missing (no subcommand supplied either)");
    }

    if (j.contains("model")) {
        const json& m = j["model"];
        cfg.kappa = m.value("kappa", 1.0);
        cfg.eps = m.value("eps", 0.0);
        cfg.nu = m.value("nu", 0.0);
        cfg.d = m.value("d", 1);
        if (m.contains("pressure")) {
            const json& p = m["pressure"];
            cfg.pressure.kind = p.value("kind", "isothermal");
            cfg.pressure.kappa = p.value("kappa", cfg.kappa);
            if (p.contains("powers")) {
                for (const auto& pw : p["powers"]) {
                    if (!pw.is_array() || pw.size() != 2) {
                        errors.push_back("model.pressure.powers: entries must be [k_j, gamma_j]");
                        continue;
                    }
                    cfg.pressure.powers.emplace_back(pw[0].get<double>(), pw[1].get<double>());
                }
            }
        } else {
            cfg.pressure.kappa = cfg.kappa;
        }
        cfg.require_mellet_vasseur = m.value("require_mellet_vasseur", false);
    }

    if (j.contains("grid")) {
        cfg.L = j["grid"].value("L", 10.0);
        cfg.n = j["grid"].value("n", 400);
    }

    if (j.contains("horizon")) {
        const json& h = j["horizon"];
        cfg.t_end = h.value("t_end", cfg.t_end);
        cfg.s_end = h.value("s_end", cfg.s_end);
        cfg.sigma_end = h.value("sigma_end", cfg.sigma_end);
    }

    cfg.gamma = j.value("gamma", cfg.gamma);
    if (j.contains("profiles")) {
        cfg.profile_a = read_bumps(j["profiles"].value("a", json::array()), "profiles.a", errors);
        cfg.profile_b = read_bumps(j["profiles"].value("b", json::array()), "profiles.b", errors);
    }

    if (j.contains("tau0")) {
        cfg.tau_alpha = j["tau0"].value("alpha", 1.0);
        cfg.tau_beta = j["tau0"].value("beta", 0.0);
    }
    cfg.rel_tol = j.value("rel_tol", 1e-10);

    if (j.contains("initial")) {
        const json& in = j["initial"];
        cfg.initial.type = in.value("type", "gaussian");
        cfg.initial.b0 = in.value("b0", 1.0);
        if (in.contains("alpha0")) cfg.initial.alpha0 = in["alpha0"].get<std::vector<double>>();
        if (in.contains("beta0")) cfg.initial.beta0 = in["beta0"].get<std::vector<double>>();
        if (in.contains("c0")) cfg.initial.c0 = in["c0"].get<std::vector<double>>();
        if (in.contains("bumps")) cfg.initial.bumps = read_bumps(in["bumps"], "initial.bumps", errors);
        cfg.initial.u0 = in.value("u0", 0.0);
        cfg.initial.path = in.value("path", "");
    }

    cfg.observe_every = j.value("observe_every", 1.0);
    cfg.cfl = j.value("cfl", 0.4);
    cfg.output = j.value("output", "out");

    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        if (t.contains("drift_max")) cfg.tol.drift_max = t["drift_max"].get<double>();
        cfg.tol.l1_ratio_min = t.value("l1_ratio_min", cfg.tol.l1_ratio_min);
        cfg.tol.mass_drift_max = t.value("mass_drift_max", cfg.tol.mass_drift_max);
        cfg.tol.ck_slack = t.value("ck_slack", cfg.tol.ck_slack);
        if (t.contains("energy_increase_max"))
            cfg.tol.energy_increase_max = t["energy_increase_max"].get<double>();
        cfg.tol.rate_rel_tol = t.value("rate_rel_tol", cfg.tol.rate_rel_tol);
        cfg.tol.persist_min = t.value("persist_min", cfg.tol.persist_min);
        cfg.tol.halve_max = t.value("halve_max", cfg.tol.halve_max);
    }

    auto more = validate(cfg);
    errors.insert(errors.end(), more.begin(), more.end());
    if (!errors.empty()) {
        std::ostringstream os;
        os << "config validation failed:";
        for (const auto& e : errors) os << "\n  - " << e;
        throw ValidationError(os.str());
    }
    return cfg;
}

ScenarioConfig parse_config(const std::string& path, std::optional<ScenarioKind> kind) {
    std::ifstream in(path);
    if (!in) throw ParseError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), kind);
}

std::vector<std::string> validate(const ScenarioConfig& cfg) {
    std::vector<std::string> errors;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) errors.push_back(msg);
    };
    require(cfg.kappa > 0, "model.kappa: must be > 0");
    require(cfg.eps >= 0, "model.eps: must be >= 0");
    require(cfg.nu >= 0, "model.nu: must be >= 0");
    require(cfg.d >= 1 && cfg.d <= 3, "model.d: must be 1, 2 or 3");
    require(cfg.pressure.kind == "isothermal" || cfg.pressure.kind == "isothermal-plus-powers" ||
                cfg.pressure.kind == "exponential",
            "model.pressure.kind: unknown kind '" + cfg.pressure.kind + "'");
    if (cfg.pressure.kind == "exponential")
        require(std::abs(cfg.pressure.kappa - 1.0) < 1e-14,
                "model.pressure.kappa: exponential law has P'(0) = 1");
    else
        require(cfg.pressure.kappa > 0, "model.pressure.kappa: must be > 0");
    require(std::abs(cfg.pressure.kappa - cfg.kappa) < 1e-12 ||
                cfg.pressure.kind == "exponential",
            "model.pressure.kappa: must equal model.kappa (P'(0))");
    for (std::size_t i = 0; i < cfg.pressure.powers.size(); ++i) {
        const auto& [kj, gj] = cfg.pressure.powers[i];
        const std::string p = "model.pressure.powers[" + std::to_string(i) + "]";
        require(kj > 0, p + ": k_j must be > 0");
        require(gj > 1, p + ": gamma_j must be > 1");
    }
    if (cfg.require_mellet_vasseur) {
        require(cfg.nu > 0, "model.nu: Mellet-Vasseur requires nu > 0");
        require(cfg.eps <= cfg.nu,
                "model.eps: Mellet-Vasseur regime requires eps <= nu (Prop. hypothesis 0 <= eps <= nu)");
    }
    require(cfg.L > 0, "grid.L: must be > 0");
    require(cfg.n >= 16 && cfg.n % 2 == 0, "grid.n: must be even and >= 16");
    require(cfg.rel_tol > 0 && cfg.rel_tol <= 1e-2, "rel_tol: must lie in (0, 1e-2]");
    require(cfg.observe_every > 0, "observe_every: must be > 0");
    require(cfg.tau_alpha > 0, "tau0.alpha: must be > 0");

    switch (cfg.scenario) {
        case ScenarioKind::TauStudy:
            require(cfg.t_end > 0, "horizon.t_end: must be > 0");
            break;
        case ScenarioKind::GaussianOracle: {
            require(cfg.t_end > 0, "horizon.t_end: must be > 0");
            require(cfg.initial.type == "gaussian", "initial.type: gaussian-oracle needs 'gaussian'");
            const auto d = static_cast<std::size_t>(cfg.d);
            require(cfg.initial.alpha0.size() == d && cfg.initial.beta0.size() == d &&
                        cfg.initial.c0.size() == d,
                    "initial: alpha0, beta0, c0 must have model.d entries");
            require(cfg.initial.b0 > 0, "initial.b0: must be > 0");
            for (std::size_t i = 0; i < cfg.initial.alpha0.size(); ++i)
                require(cfg.initial.alpha0[i] > 0,
                        "initial.alpha0[" + std::to_string(i) + "]: must be > 0");
            break;
        }
        case ScenarioKind::RescaledRun:
            require(cfg.t_end > 0, "horizon.t_end: must be > 0");
            require(cfg.d == 1, "model.d: the PDE solver is 1-D");
            require(cfg.initial.type == "gaussian" || cfg.initial.type == "bumps" ||
                        cfg.initial.type == "file",
                    "initial.type: must be gaussian, bumps or file");
            if (cfg.initial.type == "bumps")
                require(!cfg.initial.bumps.empty(), "initial.bumps: must not be empty");
            break;
        case ScenarioKind::FokkerPlanck:
            require(cfg.s_end > 0, "horizon.s_end: must be > 0");
            require(cfg.n <= 512, "grid.n: fokker-planck eigen oracle needs n <= 512");
            require(2.0 * cfg.L * cfg.L / cfg.n < 1.0,
                    "grid: dy*L must be < 1 for the symmetrizable eigen oracle");
            break;
        case ScenarioKind::IsentropicContrast:
            require(cfg.gamma > 1.0 && cfg.gamma <= 1.0 + 2.0 / cfg.d,
                    "gamma: must lie in (1, 1 + 2/d]");
            require(cfg.sigma_end > 0 && cfg.sigma_end < 1.0,
                    "horizon.sigma_end: must lie in (0, 1)");
            require(!cfg.profile_a.empty(), "profiles.a: must not be empty");
            require(!cfg.profile_b.empty(), "profiles.b: must not be empty");
            for (const auto* prof : {&cfg.profile_a, &cfg.profile_b})
                for (const auto& b : *prof)
                    require(b.amp <= 0.05, "profiles: peak amplitude must be <= 0.05");
            break;
    }
    return errors;
}

}  // namespace isoflow
