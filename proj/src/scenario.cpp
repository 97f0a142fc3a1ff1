#include "isoflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "isoflow/errors.hpp"
#include "isoflow/fokker_planck.hpp"
#include "isoflow/gaussian.hpp"
#include "isoflow/isentropic.hpp"
#include "isoflow/rescaled_solver.hpp"

namespace isoflow {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

PressureLaw make_law(const PressureSpec& spec) {
    if (spec.kind == "isothermal") return PressureLaw::isothermal(spec.kappa);
    if (spec.kind == "isothermal-plus-powers")
        return PressureLaw::with_powers(spec.kappa, spec.powers);
    if (spec.kind == "exponential") return PressureLaw::exponential();
    throw ValidationError("pressure.kind: unknown kind '" + spec.kind + "'");
}

ModelParams make_model(const ScenarioConfig& cfg) {
    ModelParams m;
    m.kappa = cfg.kappa;
    m.eps = cfg.eps;
    m.nu = cfg.nu;
    m.d = cfg.d;
    m.law = make_law(cfg.pressure);
    return m;
}

std::vector<double> bumps_on_grid(const std::vector<BumpSpec>& bumps, const Grid1D& grid) {
    std::vector<double> R(static_cast<std::size_t>(grid.n), 0.0);
    for (std::size_t i = 0; i < R.size(); ++i) {
        const double y = grid.centers[i];
        for (const auto& b : bumps) {
            const double z = (y - b.center) / b.width;
            R[i] += b.amp * std::exp(-0.5 * z * z);
        }
    }
    return R;
}

void write_meta(const ScenarioConfig& cfg, const fs::path& dir) {
    nlohmann::json j;
    j["scenario"] = to_string(cfg.scenario);
    j["model"] = {{"kappa", cfg.kappa}, {"eps", cfg.eps}, {"nu", cfg.nu}, {"d", cfg.d},
                  {"pressure", {{"kind", cfg.pressure.kind}, {"kappa", cfg.pressure.kappa}}}};
    j["grid"] = {{"L", cfg.L}, {"n", cfg.n}};
    j["horizon"] = {{"t_end", cfg.t_end}, {"s_end", cfg.s_end}, {"sigma_end", cfg.sigma_end}};
    j["observe_every"] = cfg.observe_every;
    j["rel_tol"] = cfg.rel_tol;
    std::ofstream os(dir / "run_meta.json");
    os << j.dump(2) << '\n';
}

void write_summary(const ScenarioResult& res, const fs::path& dir) {
    std::ofstream os(dir / "summary.csv");
    os << "verdict,value,threshold,pass\n";
    for (const auto& v : res.verdicts)
        os << v.name << ',' << fmt(v.value) << ',' << fmt(v.threshold) << ','
           << (v.pass ? "1" : "0") << '\n';
}

std::string frame_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "frame_%.6g.csv", t);
    return buf;
}

// Rescaled initial state from a closed-form Gaussian (exact transform at
// t=0 where tau=1, taudot=0: R = rho/theta, U = u).
FluidState1D gaussian_initial_state(const ScenarioConfig& cfg, const Grid1D& grid) {
    const double a0 = cfg.initial.alpha0[0];
    const double b0 = cfg.initial.b0;
    const double mass = b0 * std::sqrt(M_PI / a0);
    FluidState1D st;
    st.t = 0.0;
    st.grid = grid;
    st.theta = mass / std::sqrt(M_PI);
    st.model = make_model(cfg);
    st.R.resize(static_cast<std::size_t>(grid.n));
    st.RU.resize(static_cast<std::size_t>(grid.n));
    for (std::size_t i = 0; i < st.R.size(); ++i) {
        const double y = grid.centers[i];
        const double rho = b0 * std::exp(-a0 * y * y);
        const double u = cfg.initial.beta0[0] * y + cfg.initial.c0[0];
        st.R[i] = rho / st.theta;
        st.RU[i] = st.R[i] * u;
    }
    return st;
}

FluidState1D initial_state(const ScenarioConfig& cfg, const Grid1D& grid) {
    if (cfg.initial.type == "gaussian") return gaussian_initial_state(cfg, grid);
    FluidState1D st;
    st.t = 0.0;
    st.grid = grid;
    st.model = make_model(cfg);
    if (cfg.initial.type == "bumps") {
        st.R = bumps_on_grid(cfg.initial.bumps, grid);
        st.RU.resize(st.R.size());
        for (std::size_t i = 0; i < st.R.size(); ++i) st.RU[i] = st.R[i] * cfg.initial.u0;
    } else {  // file: CSV with header y,R,RU
        std::ifstream in(cfg.initial.path);
        if (!in) throw ParseError("initial.path: cannot open '" + cfg.initial.path + "'");
        std::string line;
        std::getline(in, line);
        std::vector<double> R, RU;
        while (std::getline(in, line)) {
            double y, r, m;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &y, &r, &m) != 3)
                throw ParseError("initial.path: expected rows 'y,R,RU'");
            R.push_back(r);
            RU.push_back(m);
        }
        if (R.size() != static_cast<std::size_t>(grid.n))
            throw ValidationError("initial.path: row count must equal grid.n");
        st.R = std::move(R);
        st.RU = std::move(RU);
    }
    double mass = 0.0;
    for (double r : st.R) mass += r;
    mass *= grid.dy;
    if (!(mass > 0)) throw ValidationError("initial: data must carry positive mass");
    st.theta = mass / std::sqrt(M_PI);
    return st;
}

// ---------------------------------------------------------------------------
// tau-study
// ---------------------------------------------------------------------------

ScenarioResult scenario_tau_study(const ScenarioConfig& cfg, const fs::path& dir) {
    TauParams p{cfg.tau_alpha, cfg.tau_beta, cfg.kappa, cfg.eps, cfg.nu};
    const TauTrajectory traj = integrate_tau(p, cfg.t_end, cfg.rel_tol);
    {
        std::ofstream os(dir / "trajectory.csv");
        write_trajectory_csv(traj, os);
    }

    ScenarioResult res;
    // first-integral drift relative to the magnitude of its terms
    double drift = 0.0, scale = 1.0;
    const double fi0 = first_integral(traj, 0);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        drift = std::max(drift, std::abs(first_integral(traj, i) - fi0));
        const double v = traj.taudot_at(i);
        scale = std::max(scale, v * v + 4.0 * cfg.kappa * std::abs(std::log(traj.tau_at(i))));
    }
    const double drift_max = cfg.tol.drift_max.value_or(10.0 * cfg.rel_tol);
    res.verdicts.push_back(
        {"scaling_ode.first_integral_conservation", drift / scale, drift_max, drift / scale < drift_max});

    // asymptote ratios at decades
    std::vector<std::pair<double, double>> ratios;
    for (double t = 10.0; t <= cfg.t_end * (1 + 1e-12); t *= 10.0) {
        if (t <= std::exp(1.0)) continue;
        const auto [ta, va] = tau_asymptote(cfg.kappa, t);
        (void)va;
        ratios.emplace_back(t, std::abs(traj.tau(t) / ta - 1.0));
    }
    {
        std::ofstream os(dir / "asymptote.csv");
        os << "t,rel_error\n";
        for (auto& [t, e] : ratios) os << fmt(t) << ',' << fmt(e) << '\n';
    }
    if (ratios.size() >= 2) {
        bool decreasing = true;
        for (std::size_t i = 1; i < ratios.size(); ++i)
            if (ratios[i].second >= ratios[i - 1].second) decreasing = false;
        res.verdicts.push_back({"scaling_ode.asymptotic_rate_decreasing",
                                ratios.back().second, ratios.front().second, decreasing});
    }
    return res;
}

// ---------------------------------------------------------------------------
// gaussian-oracle
// ---------------------------------------------------------------------------

// Exact rescaled profile of the Gaussian solution on the grid.
void oracle_rescaled(const GaussianSolution& sol, const TauTrajectory& traj, double t,
                     double theta, const Grid1D& grid, std::vector<double>& R,
                     std::vector<double>& U) {
    const GaussianState gs = sol.state_at(t);
    const double tau = traj.tau(t);
    const double taudot = traj.taudot(t);
    R.resize(static_cast<std::size_t>(grid.n));
    U.resize(static_cast<std::size_t>(grid.n));
    std::vector<double> x(1);
    for (std::size_t i = 0; i < R.size(); ++i) {
        const double y = grid.centers[i];
        x[0] = tau * y;
        R[i] = tau * density_at(gs, x) / theta;
        U[i] = tau * velocity_at(gs, x)[0] - taudot * tau * y;
    }
}

ScenarioResult scenario_gaussian_oracle(const ScenarioConfig& cfg, const fs::path& dir) {
    GaussianParams gp;
    gp.d = 1;
    gp.b0 = cfg.initial.b0;
    gp.alpha0 = {cfg.initial.alpha0[0]};
    gp.beta0 = {cfg.initial.beta0[0]};
    gp.c0 = {cfg.initial.c0[0]};
    gp.kappa = cfg.kappa;
    gp.eps = cfg.eps;
    gp.nu = cfg.nu;
    const GaussianSolution sol(gp, cfg.t_end * 1.01 + 1.0, cfg.rel_tol);
    {
        std::ofstream os(dir / "gaussian_states.csv");
        write_state_csv_header(1, os);
        for (double t = 0.0; t <= cfg.t_end * (1 + 1e-12); t += cfg.observe_every)
            write_state_csv_row(sol.state_at(t), os);
    }

    // The change of variables uses the Euler scaling (no eps/nu terms in
    // the tau ODE); capillarity and viscosity act through the RHS of the
    // rescaled system only.
    TauParams tp{1.0, 0.0, cfg.kappa, 0.0, 0.0};
    const TauTrajectory traj = integrate_tau(tp, cfg.t_end * 1.01 + 1.0, cfg.rel_tol);

    auto solve_err = [&](int n, bool emit) {
        const Grid1D grid = Grid1D::uniform(cfg.L, n);
        FluidState1D st = gaussian_initial_state(cfg, grid);
        std::ofstream diag;
        if (emit) {
            diag.open(dir / "diagnostics.csv");
            write_diagnostics_header(diag);
        }
        DiagnosticsSink sink;
        if (emit) sink = [&](const DiagnosticsRecord& r) { append_diagnostics_row(r, diag); };
        st = run(std::move(st), traj, cfg.t_end, cfg.observe_every, sink);
        if (emit) {
            std::ofstream os(dir / frame_name(st.t));
            write_frame_csv(st, os);
        }
        std::vector<double> Rex, Uex;
        oracle_rescaled(sol, traj, cfg.t_end, st.theta, grid, Rex, Uex);
        double err = 0.0, mass = 0.0;
        for (std::size_t i = 0; i < st.R.size(); ++i) {
            err += std::abs(st.R[i] - Rex[i]);
            mass += Rex[i];
        }
        return std::pair{err * grid.dy, mass * grid.dy};
    };
    const auto [e1, m1] = solve_err(cfg.n, true);
    const auto [e2, m2] = solve_err(2 * cfg.n, false);
    (void)m2;

    ScenarioResult res;
    const double ratio = e1 / e2;
    res.verdicts.push_back({"rescaled_solver.oracle_convergence_ratio", ratio,
                            cfg.tol.l1_ratio_min, ratio >= cfg.tol.l1_ratio_min});
    {
        std::ofstream os(dir / "refinement.csv");
        os << "n,l1_error,l1_error_rel_mass,order\n";
        os << cfg.n << ',' << fmt(e1) << ',' << fmt(e1 / m1) << ",\n";
        os << 2 * cfg.n << ',' << fmt(e2) << ',' << fmt(e2 / m1) << ',' << fmt(std::log2(ratio))
           << '\n';
    }
    return res;
}

// ---------------------------------------------------------------------------
// rescaled-run
// ---------------------------------------------------------------------------

ScenarioResult scenario_rescaled_run(const ScenarioConfig& cfg, const fs::path& dir) {
    const Grid1D grid = Grid1D::uniform(cfg.L, cfg.n);
    FluidState1D st = initial_state(cfg, grid);
    // The change of variables uses the Euler scaling (no eps/nu terms in
    // the tau ODE); capillarity and viscosity act through the RHS of the
    // rescaled system only.
    TauParams tp{1.0, 0.0, cfg.kappa, 0.0, 0.0};
    const TauTrajectory traj = integrate_tau(tp, cfg.t_end * 1.01 + 1.0, cfg.rel_tol);

    std::ofstream diag(dir / "diagnostics.csv");
    write_diagnostics_header(diag);
    std::vector<DiagnosticsRecord> records;
    {
        std::ofstream os(dir / frame_name(0.0));
        write_frame_csv(st, os);
    }
    const double frame_every = cfg.observe_every;
    double next_frame = frame_every;
    DiagnosticsSink sink = [&](const DiagnosticsRecord& r) {
        records.push_back(r);
        append_diagnostics_row(r, diag);
    };
    while (st.t < cfg.t_end) {
        const double target = std::min(next_frame, cfg.t_end);
        st = run(std::move(st), traj, target, cfg.observe_every, sink);
        // run() emits a record at both ends of each segment; drop duplicates
        if (records.size() >= 2 && records[records.size() - 1].t == records[records.size() - 2].t)
            records.pop_back();
        std::ofstream os(dir / frame_name(st.t));
        write_frame_csv(st, os);
        next_frame += frame_every;
    }

    ScenarioResult res;
    double mass_drift = 0.0;
    bool ck_ok = true;
    double ck_worst = 0.0;
    for (const auto& r : records) {
        mass_drift = std::max(mass_drift, std::abs(r.mass - records.front().mass));
        ck_worst = std::max(ck_worst, r.ck_lhs - r.ck_rhs);
        if (r.ck_lhs > r.ck_rhs + cfg.tol.ck_slack) ck_ok = false;
    }
    mass_drift /= records.front().mass;
    res.verdicts.push_back({"rescaled_solver.mass_conservation", mass_drift,
                            cfg.tol.mass_drift_max, mass_drift < cfg.tol.mass_drift_max});
    res.verdicts.push_back(
        {"diagnostics.csiszar_kullback", ck_worst, cfg.tol.ck_slack, ck_ok});

    const bool isothermal_euler = cfg.eps == 0.0 && cfg.nu == 0.0 &&
                                  cfg.pressure.kind == "isothermal";
    if (isothermal_euler) {
        // Default slack is a documented heuristic for the spatial error scale.
        const double slack =
            cfg.tol.energy_increase_max.value_or(10.0 * grid.dy * records.front().mass * cfg.kappa);
        double worst_up = 0.0;
        for (std::size_t i = 1; i < records.size(); ++i)
            worst_up = std::max(worst_up, records[i].pseudo_energy - records[i - 1].pseudo_energy);
        res.verdicts.push_back(
            {"rescaled_solver.pseudo_energy_decay", worst_up, slack, worst_up <= slack});
    }
    return res;
}

// ---------------------------------------------------------------------------
// fokker-planck
// ---------------------------------------------------------------------------

// Least-squares slope of ln(relent - plateau) over the clean decay window.
double fit_entropy_rate(const std::vector<FPRecord>& recs) {
    const double h0 = recs.front().relative_entropy;
    const double hend = recs.back().relative_entropy;
    std::vector<double> xs, ys;
    for (const auto& r : recs) {
        const double h = r.relative_entropy - hend;
        if (r.relative_entropy < 0.5 * h0 && h > 30.0 * std::abs(hend)) {
            xs.push_back(r.s);
            ys.push_back(std::log(h));
        }
    }
    if (xs.size() < 3) throw InvalidParams("fokker-planck: decay window too short for a rate fit");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    // Relative entropy is quadratic near equilibrium, so it decays like
    // exp(-2 lambda s); report lambda.
    return -0.5 * slope;
}

ScenarioResult scenario_fokker_planck(const ScenarioConfig& cfg, const fs::path& dir) {
    const Grid1D grid = Grid1D::uniform(cfg.L, cfg.n);
    FPState st;
    st.s = 0.0;
    st.grid = grid;
    if (cfg.initial.type == "bumps" && !cfg.initial.bumps.empty()) {
        st.R = bumps_on_grid(cfg.initial.bumps, grid);
    } else {
        st.R.resize(static_cast<std::size_t>(grid.n));
        const double a0 = cfg.initial.alpha0[0], c0 = cfg.initial.c0[0];
        for (std::size_t i = 0; i < st.R.size(); ++i) {
            const double y = grid.centers[i] - c0;
            st.R[i] = cfg.initial.b0 * std::exp(-a0 * y * y);
        }
    }

    std::vector<FPRecord> recs;
    std::ofstream diag(dir / "fp_diagnostics.csv");
    diag << "s,mass,l1_to_gamma,relative_entropy\n";
    FPSink sink = [&](const FPRecord& r) {
        recs.push_back(r);
        diag << fmt(r.s) << ',' << fmt(r.mass) << ',' << fmt(r.l1_to_gamma) << ','
             << fmt(r.relative_entropy) << '\n';
    };
    st = fp_relax(std::move(st), cfg.s_end, cfg.observe_every, sink);
    {
        std::ofstream os(dir / "fp_final.csv");
        os << "y,R\n";
        for (std::size_t i = 0; i < st.R.size(); ++i)
            os << fmt(grid.centers[i]) << ',' << fmt(st.R[i]) << '\n';
    }

    ScenarioResult res;
    double mass_drift = 0.0;
    for (const auto& r : recs)
        mass_drift = std::max(mass_drift, std::abs(r.mass - recs.front().mass));
    mass_drift /= recs.front().mass;
    res.verdicts.push_back({"fokker_planck.mass_conservation", mass_drift,
                            cfg.tol.mass_drift_max, mass_drift < cfg.tol.mass_drift_max});

    bool monotone = true;
    const double slack = 1e-12 + 1e-9 * recs.front().relative_entropy;
    for (std::size_t i = 1; i < recs.size(); ++i)
        if (recs[i].relative_entropy > recs[i - 1].relative_entropy + slack) monotone = false;
    res.verdicts.push_back({"fokker_planck.entropy_monotonicity",
                            monotone ? 0.0 : 1.0, 0.0, monotone});

    const double rate = fit_entropy_rate(recs);
    const double gap = fp_spectral_gap(grid);
    const double rel = std::abs(rate - gap) / gap;
    res.verdicts.push_back(
        {"fokker_planck.entropy_decay_rate_vs_spectrum", rel, cfg.tol.rate_rel_tol,
         rel < cfg.tol.rate_rel_tol});
    return res;
}

// ---------------------------------------------------------------------------
// isentropic-contrast
// ---------------------------------------------------------------------------

ScenarioResult scenario_isentropic(const ScenarioConfig& cfg, const fs::path& dir) {
    IsentropicConfig icfg;
    icfg.gamma = cfg.gamma;
    icfg.kappa = cfg.kappa;
    icfg.d = 1;
    icfg.grid = Grid1D::uniform(cfg.L, cfg.n);
    icfg.sigma_end = cfg.sigma_end;
    icfg.cfl = cfg.cfl;
    const std::vector<double> a = bumps_on_grid(cfg.profile_a, icfg.grid);
    const std::vector<double> b = bumps_on_grid(cfg.profile_b, icfg.grid);
    const ContrastResult c = profile_contrast(a, b, icfg);

    {
        std::ofstream os(dir / "contrast.csv");
        os << "exponent,dist_init,dist_final_isentropic,dist_final_isothermal,iso_init_a,"
              "iso_final_a,iso_init_b,iso_final_b\n";
        os << fmt(isentropic_exponent(icfg)) << ',' << fmt(c.dist_init) << ','
           << fmt(c.dist_final_isentropic) << ',' << fmt(c.dist_final_isothermal) << ','
           << fmt(c.iso_init_a) << ',' << fmt(c.iso_final_a) << ',' << fmt(c.iso_init_b) << ','
           << fmt(c.iso_final_b) << '\n';
    }

    ScenarioResult res;
    const double retention = c.dist_final_isentropic / c.dist_init;
    res.verdicts.push_back({"isentropic.profile_persistence", retention, cfg.tol.persist_min,
                            retention >= cfg.tol.persist_min});
    const double shrink =
        std::max(c.iso_final_a / c.iso_init_a, c.iso_final_b / c.iso_init_b);
    res.verdicts.push_back({"rescaled_solver.gaussian_attraction", shrink, cfg.tol.halve_max,
                            shrink <= cfg.tol.halve_max});
    return res;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    const auto errors = validate(cfg);
    if (!errors.empty()) {
        std::ostringstream os;
        os << "config validation failed:";
        for (const auto& e : errors) os << "\n  - " << e;
        throw ValidationError(os.str());
    }
    const fs::path dir(cfg.output);
    fs::create_directories(dir);
    write_meta(cfg, dir);
    ScenarioResult res;
    switch (cfg.scenario) {
        case ScenarioKind::TauStudy: res = scenario_tau_study(cfg, dir); break;
        case ScenarioKind::GaussianOracle: res = scenario_gaussian_oracle(cfg, dir); break;
        case ScenarioKind::RescaledRun: res = scenario_rescaled_run(cfg, dir); break;
        case ScenarioKind::FokkerPlanck: res = scenario_fokker_planck(cfg, dir); break;
        case ScenarioKind::IsentropicContrast: res = scenario_isentropic(cfg, dir); break;
    }
    write_summary(res, dir);
    return res;
}

int run_scenario_exit_code(const ScenarioConfig& cfg) {
    return run_scenario(cfg).all_pass() ? 0 : 1;
}

}  // namespace isoflow
