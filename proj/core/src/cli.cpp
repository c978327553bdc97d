// Copyright 2026 The bhdimer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bhdimer/cli.hpp"

#include <cmath>
#include <random>

#include "bhdimer/errors.hpp"
#include "bhdimer/three_mode.hpp"

namespace bhd {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Context {
    const RunConfig& cfg;
    fs::path dir;
    std::ostream& log;
    json outputs = json::array();
    json results = json::object();
    json settings = json::object();

    fs::path file(const std::string& name) {
        outputs.push_back(name);
        return dir / name;
    }
};

IntegratorSettings integrator(const RunConfig& c) {
    IntegratorSettings s;
    s.rel_tol = c.tol;
    s.abs_tol = c.tol * 1e-2;
    s.sample_dt = c.sample_dt;
    return s;
}

json to_json(const IntegratorSettings& s) {
    return {{"rel_tol", s.rel_tol},
            {"abs_tol", s.abs_tol},
            {"sample_dt", s.sample_dt},
            {"shell_tolerance", s.shell_tolerance},
            {"method", "dopri5 dense output"}};
}

json to_json(const ClassifierSettings& s) {
    return {{"transient_fraction", s.transient_fraction}, {"eps_fp", s.eps_fp},
            {"eps_r", s.eps_r},                           {"peak_floor", s.peak_floor},
            {"tc2_secondary_ratio", s.tc2_secondary_ratio}, {"even_harmonic_ratio", s.even_harmonic_ratio},
            {"rational_q_max", s.rational_q_max},         {"rational_tol", s.rational_tol}};
}

json to_json(const SpectrumSettings& s) {
    return {{"dense_cap", s.dense_cap},         {"k", s.k},
            {"shift_real", s.shift_real},       {"shift_imag_min", s.shift_imag_min},
            {"shift_imag_max", s.shift_imag_max}, {"shift_imag_step", s.shift_imag_step},
            {"per_shift", s.per_shift},         {"residual_tol", s.residual_tol}};
}

int require_n_total(const RunConfig& c) {
    if (!c.params.n_total) {
        throw ConfigError(c.subcommand + " needs --n-total");
    }
    return *c.params.n_total;
}

void cmd_meanfield(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto is = integrator(c);
    ClassifierSettings cs;
    ctx.settings["integrator"] = to_json(is);
    ctx.settings["classifier"] = to_json(cs);
    ctx.settings["initial_state"] = "alpha = sqrt(1.2) exp(0.3i), beta = sqrt(0.8) exp(-0.2i)";
    const auto traj = integrate_mf(default_initial_state(), c.params, c.t_end, is);
    write_trajectory_csv(ctx.file("trajectory.csv"), traj);
    write_spin_csv(ctx.file("spin.csv"), spin_observables_from_bosonic(traj));
    try {
        const auto label = classify_phase(traj, c.params, cs);
        write_json(ctx.file("phase.json"), to_json(label));
        ctx.results["label"] = to_string(label.phase);
        ctx.log << "phase: " << to_string(label.phase) << '\n';
    } catch (const InconclusivePhase& e) {
        auto j = to_json(e.diagnostics());
        j["label"] = "Inconclusive";
        j["reason"] = e.what();
        write_json(ctx.file("phase.json"), j);
        throw;
    }
}

void cmd_fluctuations(Context& ctx) {
    const auto& c = ctx.cfg;
    LyapunovSettings ls;
    ls.integrator = integrator(c);
    ls.noise = noise_normalization_from_string(c.noise);
    ctx.settings["integrator"] = to_json(ls.integrator);
    ctx.settings["noise"] = to_string(ls.noise);
    ctx.settings["physicality_tolerance"] = ls.physicality_tolerance;
    ctx.settings["sigma0"] = "identity";
    const auto run = integrate_lyapunov(default_initial_state(), Mat4::Identity(), c.params, c.t_end, ls);
    const auto reports = correlation_series(run.covariances.sigmas, LogBase::Two, c.threads);
    write_trajectory_csv(ctx.file("trajectory.csv"), run.trajectory);
    write_covariance_csv(ctx.file("covariance.csv"), run.covariances);
    write_correlations_csv(ctx.file("correlations.csv"), run.covariances.times, reports);
    ctx.results["final_eps"] = reports.back().log_negativity;
    ctx.results["physicality_warnings"] = run.covariances.warnings.size();
    ctx.log << "final eps: " << reports.back().log_negativity << '\n';
}

void cmd_spectrum(Context& ctx) {
    const auto& c = ctx.cfg;
    SpectrumSettings ss;
    ss.k = c.k;
    ss.threads = c.threads;
    ctx.settings["spectrum"] = to_json(ss);
    if (!c.n_list.empty()) {
        const auto gaps = gap_scaling(c.n_list, c.params, 1, ss, c.threads);
        write_gap_csv(ctx.file("gap.csv"), gaps);
        json errs = json::object();
        for (const auto& g : gaps) {
            if (!g.error.empty()) errs[std::to_string(g.n)] = g.error;
        }
        ctx.results["errors"] = errs;
        return;
    }
    const int n = require_n_total(c);
    const int np = c.n_prime.value_or(n);
    const auto block = build_block(c.params, n, np);
    const auto spec = block_spectrum(block, ss);
    write_spectrum_csv(ctx.file("spectrum.csv"), spec);
    ctx.results["iterative"] = spec.iterative;
    ctx.results["max_residual"] = spec.max_residual;
    if (!spec.eigenvalues.empty()) {
        ctx.log << "leading eigenvalue: " << spec.eigenvalues.front() << '\n';
    }
}

void cmd_evolve(Context& ctx) {
    const auto& c = ctx.cfg;
    const int n = require_n_total(c);
    EvolveSettings es;
    es.rel_tol = c.tol;
    es.abs_tol = c.tol * 1e-2;
    es.threads = c.threads;
    ctx.settings["evolve"] = {{"rel_tol", es.rel_tol}, {"abs_tol", es.abs_tol}, {"halfwidth", c.halfwidth}};
    const auto s0 = default_initial_state();
    const auto blocks = coherent_initial_blocks(n, s0.alpha(), s0.beta(), c.halfwidth);
    const auto obs = evolve_blocks(blocks, c.params, c.t_end, c.sample_dt, es);
    write_observables_csv(ctx.file("observables.csv"), obs);
}

void cmd_sweep(Context& ctx) {
    const auto& c = ctx.cfg;
    SweepSettings ss;
    ss.settle_time = c.settle_time;
    ss.transient_fraction = c.transient_fraction;
    ss.integrator.rel_tol = c.tol;
    ss.integrator.abs_tol = c.tol * 1e-2;
    ss.integrator.sample_dt = c.sample_dt;
    ctx.settings["integrator"] = to_json(ss.integrator);
    ctx.settings["classifier"] = to_json(ss.classifier);
    std::vector<SweepRecord> recs;
    if (c.direction == "forward" || c.direction == "both") {
        recs.push_back(hysteresis_sweep(c.params, c.omega_grid, SweepDirection::Forward, ss));
    }
    if (c.direction == "backward" || c.direction == "both") {
        recs.push_back(hysteresis_sweep(c.params, c.omega_grid, SweepDirection::Backward, ss));
    }
    if (recs.empty()) {
        throw ConfigError("direction must be forward, backward or both");
    }
    write_sweep_csv(ctx.file("sweep.csv"), recs);
    if (recs.size() == 2) {
        const double area = hysteresis_loop_area(recs[0], recs[1]);
        ctx.results["loop_area"] = area;
        ctx.log << "loop area: " << area << '\n';
    }
}

void cmd_phasediagram(Context& ctx) {
    const auto& c = ctx.cfg;
    PhaseDiagramSettings ps;
    ps.threads = c.threads;
    ps.averaging_time = c.averaging_time;
    ps.sweep.settle_time = c.settle_time;
    ps.sweep.transient_fraction = c.transient_fraction;
    ps.sweep.integrator.rel_tol = c.tol;
    ps.sweep.integrator.abs_tol = c.tol * 1e-2;
    ps.sweep.integrator.sample_dt = c.sample_dt;
    ctx.settings["protocol"] = "forward omega sweep per u row";
    ctx.settings["integrator"] = to_json(ps.sweep.integrator);
    ctx.settings["classifier"] = to_json(ps.sweep.classifier);
    ctx.settings["averaging_fraction"] = ps.averaging_fraction;
    ctx.settings["lyapunov_sample_dt"] = ps.lyapunov_sample_dt;
    ps.noise = noise_normalization_from_string(c.noise);
    ctx.settings["noise"] = to_string(ps.noise);
    const auto pd = phase_diagram(c.params, c.omega_grid, c.u_grid, ps);
    write_phase_diagram_csv(ctx.file("phase_diagram.csv"), pd);
    json errs = json::array();
    for (const auto& cell : pd.cells) {
        if (!cell.error.empty()) errs.push_back({{"omega", cell.omega}, {"u", cell.u}, {"error", cell.error}});
    }
    ctx.results["cell_errors"] = errs;
}

void cmd_fit(Context& ctx) {
    const auto& c = ctx.cfg;
    if (c.fit_kind == "exponent") {
        ExponentSettings es;
        es.threads = c.threads;
        ctx.settings["steady_state"] = {{"chunk_time", es.steady.chunk_time},
                                        {"max_chunks", es.steady.max_chunks},
                                        {"derivative_tol", es.steady.derivative_tol},
                                        {"integrator", to_json(es.steady.integrator)}};
        const auto f = critical_exponent_fit(c.params, c.omega_grid, es);
        write_json(ctx.file("exponent.json"), {{"slope", f.fit.slope},
                                               {"slope_stderr", f.fit.slope_stderr},
                                               {"r_squared", f.fit.r_squared},
                                               {"omega_c", f.omega_c},
                                               {"distance", f.distance},
                                               {"delta_N", f.delta_n}});
        ctx.results["slope"] = f.fit.slope;
        ctx.log << "exponent: " << f.fit.slope << " +- " << f.fit.slope_stderr << '\n';
    } else if (c.fit_kind == "growth") {
        std::vector<double> times{0.0};
        const int per_decade = 50;
        const double lo = -1.0;
        const double hi = std::log10(c.t_end);
        const auto m = static_cast<int>(std::ceil((hi - lo) * per_decade));
        for (int i = 0; i <= m; ++i) times.push_back(std::pow(10.0, lo + (hi - lo) * i / m));
        LyapunovSettings ls;
        ls.integrator = integrator(c);
        ls.noise = noise_normalization_from_string(c.noise);
        ctx.settings["integrator"] = to_json(ls.integrator);
        ctx.settings["noise"] = to_string(ls.noise);
        ctx.settings["samples_per_decade"] = per_decade;
        const auto run = integrate_lyapunov_at(default_initial_state(), Mat4::Identity(), c.params, times, ls);
        const auto reports = correlation_series(run.covariances.sigmas, LogBase::Two, c.threads);
        std::vector<double> eps;
        for (const auto& r : reports) eps.push_back(r.log_negativity);
        write_correlations_csv(ctx.file("correlations.csv"), run.covariances.times, reports);
        const auto g = entanglement_growth_fit(run.covariances.times, eps, c.t_lo, c.t_hi, c.params.kappa);
        json j{{"slope", g.fit.slope},   {"intercept", g.fit.intercept}, {"r_squared", g.fit.r_squared},
               {"non_monotone", g.non_monotone}};
        j["onset"] = g.onset ? json(*g.onset) : json(nullptr);
        j["first_onset"] = g.first_onset ? json(*g.first_onset) : json(nullptr);
        write_json(ctx.file("growth.json"), j);
        ctx.results["slope"] = g.fit.slope;
        ctx.log << "growth slope: " << g.fit.slope << '\n';
    } else {
        throw ConfigError("fit kind must be exponent or growth");
    }
}

bool cmd_validate(Context& ctx) {
    const auto& c = ctx.cfg;
    json out{{"check", c.check}};
    bool pass = false;
    if (c.check == "spin-equivalence") {
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> om(0.1, 2.0), uu(0.0, 0.5), nt(0.0, 1.0);
        double worst = 0.0;
        bool ambiguous = false;
        for (int d = 0; d < c.draws; ++d) {
            ModelParams p;
            p.omega = om(rng);
            p.u = uu(rng);
            p.n_th = nt(rng);
            const auto r = spin_equivalence_check(p, c.n);
            worst = std::max(worst, r.mismatch);
            ambiguous = ambiguous || r.ambiguous;
        }
        pass = worst < 1e-9;
        out["n"] = c.n;
        out["draws"] = c.draws;
        out["max_mismatch"] = worst;
        out["ambiguous_matching"] = ambiguous;
    } else if (c.check == "adiabatic-elimination") {
        ModelParams p = c.params;
        p.n_total = c.n;
        json rows = json::array();
        std::vector<double> td;
        for (double ratio : {10.0, 30.0, 100.0}) {
            const auto [g, gamma] = couplings_for_ratio(p.kappa, ratio);
            const auto r = three_mode_oracle(p, g, gamma, 6, 5.0);
            td.push_back(r.max_trace_distance);
            rows.push_back({{"ratio", ratio},
                            {"max_trace_distance", r.max_trace_distance},
                            {"leakage_warning", r.leakage_warning}});
        }
        pass = td[1] < td[0] && td[2] < td[1] && td[2] < 0.5 * td[0];
        out["runs"] = rows;
    } else {
        throw ConfigError("unknown check '" + c.check + "'");
    }
    out["pass"] = pass;
    write_json(ctx.file("validate.json"), out);
    ctx.log << (pass ? "PASS" : "FAIL") << ' ' << c.check << '\n';
    ctx.results["pass"] = pass;
    return pass;
}

json conventions() {
    return {{"quadratures", Conventions::quad_scale},
            {"shell", Conventions::shell},
            {"vacuum_variance", Conventions::vacuum_variance},
            {"finite_n_rates", "2 kappa / N and 2 U / N with N = n_total when given, else the block's N"},
            {"interaction", "U sum_j n_j (n_j - 1)"},
            {"csv_number_format", "%.16e"}};
}

json error_details(const std::exception& e) {
    json d{{"message", e.what()}};
    if (const auto* ie = dynamic_cast<const IntegrationError*>(&e)) {
        d["type"] = "IntegrationError";
        d["time"] = ie->time();
        d["step"] = ie->step();
    } else if (const auto* ee = dynamic_cast<const EigensolverError*>(&e)) {
        d["type"] = "EigensolverError";
        d["residual"] = ee->residual();
    } else if (const auto* ip = dynamic_cast<const InconclusivePhase*>(&e)) {
        d["type"] = "ClassificationInconclusive";
        d["diagnostics"] = to_json(ip->diagnostics());
    } else if (dynamic_cast<const DegenerateNullSpaceError*>(&e)) {
        d["type"] = "DegenerateNullSpaceError";
    } else if (dynamic_cast<const ConfigError*>(&e)) {
        d["type"] = "ConfigError";
    } else {
        d["type"] = "NumericalError";
    }
    return d;
}

}  // namespace

int run(const RunConfig& raw, std::ostream& log) {
    RunConfig cfg;
    try {
        cfg = resolve_defaults(raw);
        cfg.params.validate();
        if (cfg.threads < 1 || !(cfg.t_end > 0.0) || !(cfg.tol > 0.0) || !(cfg.sample_dt > 0.0)) {
            throw ConfigError("threads, t_end, tol and sample_dt must be positive");
        }
        fs::create_directories(cfg.out);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const fs::filesystem_error& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    Context ctx{cfg, fs::path(cfg.out), log};
    int status = kExitOk;
    try {
        const auto& sc = cfg.subcommand;
        if (sc == "meanfield") {
            cmd_meanfield(ctx);
        } else if (sc == "fluctuations") {
            cmd_fluctuations(ctx);
        } else if (sc == "spectrum") {
            cmd_spectrum(ctx);
        } else if (sc == "evolve") {
            cmd_evolve(ctx);
        } else if (sc == "sweep") {
            cmd_sweep(ctx);
        } else if (sc == "phasediagram") {
            cmd_phasediagram(ctx);
        } else if (sc == "fit") {
            cmd_fit(ctx);
        } else if (sc == "validate") {
            status = cmd_validate(ctx) ? kExitOk : kExitFailed;
        } else {
            throw ConfigError("unknown subcommand '" + sc + "'");
        }
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        log << "numerical error: " << e.what() << '\n';
        write_json(ctx.dir / "diagnostics.json", {{"error", error_details(e)}, {"config", to_json(cfg)}});
        return kExitNumeric;
    }

    const auto manifest = ctx.file("manifest.json");
    write_json(manifest, {{"version", version()},
                          {"config", to_json(cfg)},
                          {"settings", ctx.settings},
                          {"conventions", conventions()},
                          {"outputs", ctx.outputs},
                          {"results", ctx.results},
                          {"exit_code", status}});
    return status;
}

}  // namespace bhd
