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

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "bhdimer/cli.hpp"
#include "bhdimer/errors.hpp"

namespace {

// Option bound to `value`; when given on the command line or through the
// environment, `apply` copies it into the resolved config.
struct Binding {
    CLI::Option* option;
    std::function<void(bhd::RunConfig&)> apply;
};

template <class T, class Apply>
CLI::Option* add(std::vector<Binding>& out, CLI::App& app, const std::string& flag, T& value, const std::string& env,
                  const std::string& help, Apply apply) {
    auto* o = app.add_option(flag, value, help)->envname("BHD_" + env);
    out.push_back({o, [&value, apply](bhd::RunConfig& c) { apply(c, value); }});
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bose-Hubbard dimer with coherent and incoherent hopping"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", bhd::version());

    bhd::RunConfig v;
    std::string config_path;
    double omega = 0, u = 0, kappa = 1, n_th = 0;
    int n_total = 0;
    std::vector<Binding> b;
    using C = bhd::RunConfig;
    add(b, app, "--omega", omega, "OMEGA", "coherent hopping rate", [](C& c, double x) { c.params.omega = x; });
    add(b, app, "--u", u, "U", "on-site interaction", [](C& c, double x) { c.params.u = x; });
    add(b, app, "--kappa", kappa, "KAPPA", "dissipation rate", [](C& c, double x) { c.params.kappa = x; });
    add(b, app, "--n-th", n_th, "N_TH", "thermal occupation", [](C& c, double x) { c.params.n_th = x; });
    add(b, app, "--n-total", n_total, "N_TOTAL", "total excitation number", [](C& c, int x) { c.params.n_total = x; });
    add(b, app, "--t-end", v.t_end, "T_END", "final time", [](C& c, double x) { c.t_end = x; });
    add(b, app, "--tol", v.tol, "TOL", "relative integrator tolerance", [](C& c, double x) { c.tol = x; });
    add(b, app, "--sample-dt", v.sample_dt, "SAMPLE_DT", "output sampling step", [](C& c, double x) { c.sample_dt = x; });
    add(b, app, "--out", v.out, "OUT", "output directory", [](C& c, const std::string& x) { c.out = x; });
    add(b, app, "--threads", v.threads, "THREADS", "worker threads", [](C& c, int x) { c.threads = x; });
    add(b, app, "--seed", v.seed, "SEED", "random seed", [](C& c, std::uint64_t x) { c.seed = x; });
    add(b, app, "--noise", v.noise, "NOISE", "covariance noise normalization (consistent|printed)",
        [](C& c, const std::string& x) { c.noise = x; })
        ->check(CLI::IsMember({"consistent", "printed"}));
    app.add_option("--config", config_path, "JSON configuration file")->envname("BHD_CONFIG");

    auto* meanfield = app.add_subcommand("meanfield", "mean-field trajectory and phase label");
    auto* fluct = app.add_subcommand("fluctuations", "covariance and correlation series");
    auto* spectrum = app.add_subcommand("spectrum", "Liouvillian block spectrum or gap scaling");
    auto* evolve = app.add_subcommand("evolve", "finite-N observables");
    auto* sweep = app.add_subcommand("sweep", "adiabatic omega sweeps");
    auto* pdiag = app.add_subcommand("phasediagram", "phase labels and averaged entanglement on a grid");
    auto* fit = app.add_subcommand("fit", "critical exponent or entanglement growth");
    auto* validate = app.add_subcommand("validate", "cross-checks against dense oracles");
    (void)meanfield;
    (void)fluct;

    int n_prime = 0;
    add(b, *spectrum, "--n-prime", n_prime, "N_PRIME", "sector N' (default N)", [](C& c, int x) { c.n_prime = x; });
    add(b, *spectrum, "--n-list", v.n_list, "N_LIST", "N values for gap scaling",
         [](C& c, const std::vector<int>& x) { c.n_list = x; })
        ->delimiter(',');
    add(b, *spectrum, "--k", v.k, "K", "number of eigenvalues", [](C& c, int x) { c.k = x; });
    add(b, *evolve, "--halfwidth", v.halfwidth, "HALFWIDTH", "sectors kept around N",
         [](C& c, int x) { c.halfwidth = x; });
    for (auto* sc : {sweep, pdiag, fit}) {
        add(b, *sc, "--omega-grid", v.omega_grid, "OMEGA_GRID", "ascending omega values",
             [](C& c, const std::vector<double>& x) { c.omega_grid = x; })
            ->delimiter(',');
    }
    for (auto* sc : {sweep, pdiag}) {
        add(b, *sc, "--settle", v.settle_time, "SETTLE", "settle time per step",
             [](C& c, double x) { c.settle_time = x; });
        add(b, *sc, "--transient", v.transient_fraction, "TRANSIENT", "discarded fraction per step",
             [](C& c, double x) { c.transient_fraction = x; });
    }
    add(b, *sweep, "--direction", v.direction, "DIRECTION", "forward, backward or both",
         [](C& c, const std::string& x) { c.direction = x; });
    add(b, *pdiag, "--u-grid", v.u_grid, "U_GRID", "ascending u values",
         [](C& c, const std::vector<double>& x) { c.u_grid = x; })
        ->delimiter(',');
    add(b, *pdiag, "--averaging-time", v.averaging_time, "AVERAGING_TIME", "Lyapunov run length",
         [](C& c, double x) { c.averaging_time = x; });
    add(b, *fit, "--kind", v.fit_kind, "KIND", "exponent or growth", [](C& c, const std::string& x) { c.fit_kind = x; });
    add(b, *fit, "--t-lo", v.t_lo, "T_LO", "growth-fit window start", [](C& c, double x) { c.t_lo = x; });
    add(b, *fit, "--t-hi", v.t_hi, "T_HI", "growth-fit window end", [](C& c, double x) { c.t_hi = x; });
    add(b, *validate, "--check", v.check, "CHECK", "spin-equivalence or adiabatic-elimination",
         [](C& c, const std::string& x) { c.check = x; });
    add(b, *validate, "--n", v.n, "N", "excitation number of the check", [](C& c, int x) { c.n = x; });
    add(b, *validate, "--draws", v.draws, "DRAWS", "random parameter draws", [](C& c, int x) { c.draws = x; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : bhd::kExitConfig;
    }

    bhd::RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw bhd::ConfigError("cannot read config file '" + config_path + "'");
            }
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw bhd::ConfigError(std::string("config file is not valid JSON: ") + e.what());
            }
            cfg = bhd::run_config_from_json(j);
        }
    } catch (const bhd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return bhd::kExitConfig;
    }

    // Command line and environment override the config file.
    cfg.subcommand = app.get_subcommands().front()->get_name();
    for (const auto& x : b) {
        if (x.option->count() > 0) x.apply(cfg);
    }
    return bhd::run(cfg, std::cout);
}
