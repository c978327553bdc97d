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

#include "bhdimer/io.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "bhdimer/errors.hpp"

#ifndef BHDIMER_VERSION
#define BHDIMER_VERSION "unknown"
#endif

namespace bhd {

const char* version() { return BHDIMER_VERSION; }

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::span<const std::string> header) : out_(path) {
    if (!out_) {
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    }
    for (const auto& h : header) cell(h);
    end_row();
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_double(v)); }

CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }

CsvWriter& CsvWriter::cell(const std::string& v) {
    if (!first_) out_ << ',';
    out_ << v;
    first_ = false;
    return *this;
}

void CsvWriter::end_row() {
    out_ << '\n';
    first_ = true;
}

namespace {

std::vector<std::string> cols(std::initializer_list<const char*> names) { return {names.begin(), names.end()}; }

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    CsvWriter w(path, cols({"t", "x_a", "p_a", "x_b", "p_b"}));
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& s = traj.states[i];
        w.cell(traj.times[i]).cell(s.x_a).cell(s.p_a).cell(s.x_b).cell(s.p_b).end_row();
    }
}

void write_covariance_csv(const std::filesystem::path& path, const CovarianceSeries& cov) {
    std::vector<std::string> header{"t"};
    for (int r = 1; r <= 4; ++r) {
        for (int c = r; c <= 4; ++c) header.push_back("s" + std::to_string(r) + std::to_string(c));
    }
    CsvWriter w(path, header);
    for (std::size_t i = 0; i < cov.times.size(); ++i) {
        w.cell(cov.times[i]);
        for (double v : pack_upper(cov.sigmas[i])) w.cell(v);
        w.end_row();
    }
}

void write_correlations_csv(const std::filesystem::path& path, std::span<const double> times,
                            std::span<const CorrelationReport> reports) {
    if (times.size() != reports.size()) {
        throw ConfigError("write_correlations_csv: size mismatch");
    }
    CsvWriter w(path, cols({"t", "eps", "discord", "classical"}));
    for (std::size_t i = 0; i < times.size(); ++i) {
        w.cell(times[i]).cell(reports[i].log_negativity).cell(reports[i].discord).cell(reports[i].classical).end_row();
    }
}

void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& spectrum) {
    CsvWriter w(path, cols({"n", "n_prime", "re_lambda", "im_lambda"}));
    for (const auto& l : spectrum.eigenvalues) {
        w.cell(spectrum.n).cell(spectrum.n_prime).cell(l.real()).cell(l.imag()).end_row();
    }
}

void write_observables_csv(const std::filesystem::path& path, const ObservableSeries& obs) {
    CsvWriter w(path, cols({"t", "x_a", "p_a", "x_b", "p_b", "n_a", "n_b"}));
    const double nan = std::nan("");
    for (std::size_t i = 0; i < obs.times.size(); ++i) {
        w.cell(obs.times[i]);
        if (obs.has_quadratures) {
            w.cell(obs.x_a[i]).cell(obs.p_a[i]).cell(obs.x_b[i]).cell(obs.p_b[i]);
        } else {
            w.cell(nan).cell(nan).cell(nan).cell(nan);
        }
        if (obs.has_populations) {
            w.cell(obs.n_a[i]).cell(obs.n_b[i]);
        } else {
            w.cell(nan).cell(nan);
        }
        w.end_row();
    }
}

void write_spin_csv(const std::filesystem::path& path, const SpinObservables& obs) {
    CsvWriter w(path, cols({"t", "m_x", "m_y", "m_z"}));
    for (std::size_t i = 0; i < obs.times.size(); ++i) {
        w.cell(obs.times[i]).cell(obs.m_x[i]).cell(obs.m_y[i]).cell(obs.m_z[i]).end_row();
    }
}

void write_phase_diagram_csv(const std::filesystem::path& path, const PhaseDiagram& pd) {
    CsvWriter w(path, cols({"omega", "u", "label", "eps_avg"}));
    for (const auto& c : pd.cells) {
        w.cell(c.omega).cell(c.u).cell(c.label_string()).cell(c.eps_avg).end_row();
    }
}

void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRecord> records) {
    CsvWriter w(path, cols({"omega", "direction", "delta_N", "delta_R_bar", "label"}));
    for (const auto& r : records) {
        for (const auto& s : r.steps) {
            w.cell(s.control)
                .cell(to_string(r.direction))
                .cell(s.order.delta_n)
                .cell(s.order.delta_r_bar)
                .cell(s.label ? to_string(*s.label) : std::string("Inconclusive"))
                .end_row();
        }
    }
}

void write_gap_csv(const std::filesystem::path& path, std::span<const GapEntry> entries) {
    CsvWriter w(path, cols({"n", "re_lambda", "im_lambda", "mode_index"}));
    for (const auto& e : entries) {
        for (std::size_t k = 0; k < e.eigenvalues.size(); ++k) {
            w.cell(e.n).cell(e.eigenvalues[k].real()).cell(e.eigenvalues[k].imag()).cell(static_cast<long long>(k));
            w.end_row();
        }
    }
}

nlohmann::json to_json(const PhaseLabel& label) {
    nlohmann::json freqs = nlohmann::json::array();
    nlohmann::json powers = nlohmann::json::array();
    for (const auto& p : label.peaks) {
        freqs.push_back(p.frequency);
        powers.push_back(p.power);
    }
    return {{"label", to_string(label.phase)},
            {"frequencies", freqs},
            {"powers", powers},
            {"resolution", label.resolution},
            {"delta_N", label.delta_n},
            {"delta_R_bar", label.delta_r_bar},
            {"derivative_norm", label.derivative_norm},
            {"even_harmonic_ratio", label.even_harmonic_ratio}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    }
    out << j.dump(2) << '\n';
}

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
    j["subcommand"] = c.subcommand;
    j["params"] = to_json(c.params);
    j["t_end"] = c.t_end;
    j["tol"] = c.tol;
    j["sample_dt"] = c.sample_dt;
    j["out"] = c.out;
    j["threads"] = c.threads;
    j["seed"] = c.seed;
    j["noise"] = c.noise;
    j["omega_grid"] = c.omega_grid;
    j["u_grid"] = c.u_grid;
    j["direction"] = c.direction;
    j["settle_time"] = c.settle_time;
    j["transient_fraction"] = c.transient_fraction;
    j["averaging_time"] = c.averaging_time;
    j["n_prime"] = c.n_prime ? nlohmann::json(*c.n_prime) : nlohmann::json(nullptr);
    j["n_list"] = c.n_list;
    j["k"] = c.k;
    j["halfwidth"] = c.halfwidth;
    j["fit_kind"] = c.fit_kind;
    j["t_lo"] = c.t_lo;
    j["t_hi"] = c.t_hi;
    j["check"] = c.check;
    j["n"] = c.n;
    j["draws"] = c.draws;
    return j;
}

namespace {

template <class T>
void read(const nlohmann::json& j, const char* key, T& field) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
        field = it->get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j, RunConfig c) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    if (!j.contains("params")) {
        c.params = params_from_json(j);
        return c;
    }
    static const std::set<std::string> known{
        "subcommand", "params", "t_end", "tol", "sample_dt", "out", "threads", "seed", "noise", "omega_grid",
        "u_grid", "direction", "settle_time", "transient_fraction", "averaging_time", "n_prime", "n_list",
        "k", "halfwidth", "fit_kind", "t_lo", "t_hi", "check", "n", "draws"};
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    c.params = params_from_json(j.at("params"));
    read(j, "subcommand", c.subcommand);
    read(j, "t_end", c.t_end);
    read(j, "tol", c.tol);
    read(j, "sample_dt", c.sample_dt);
    read(j, "out", c.out);
    read(j, "threads", c.threads);
    read(j, "seed", c.seed);
    read(j, "noise", c.noise);
    noise_normalization_from_string(c.noise);
    read(j, "omega_grid", c.omega_grid);
    read(j, "u_grid", c.u_grid);
    read(j, "direction", c.direction);
    read(j, "settle_time", c.settle_time);
    read(j, "transient_fraction", c.transient_fraction);
    read(j, "averaging_time", c.averaging_time);
    if (j.contains("n_prime")) {
        if (j["n_prime"].is_null()) {
            c.n_prime.reset();
        } else {
            int v = 0;
            read(j, "n_prime", v);
            c.n_prime = v;
        }
    }
    read(j, "n_list", c.n_list);
    read(j, "k", c.k);
    read(j, "halfwidth", c.halfwidth);
    read(j, "fit_kind", c.fit_kind);
    read(j, "t_lo", c.t_lo);
    read(j, "t_hi", c.t_hi);
    read(j, "check", c.check);
    read(j, "n", c.n);
    read(j, "draws", c.draws);
    return c;
}

namespace {

std::vector<double> uniform_grid(double lo, double hi, double step) {
    std::vector<double> g;
    const auto n = static_cast<long>(std::lround((hi - lo) / step));
    for (long i = 0; i <= n; ++i) g.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
    return g;
}

}  // namespace

RunConfig resolve_defaults(RunConfig c) {
    if (c.subcommand == "sweep" && c.omega_grid.empty()) {
        c.omega_grid = uniform_grid(1.0, 1.6, 0.01);
    }
    if (c.subcommand == "phasediagram") {
        if (c.omega_grid.empty()) c.omega_grid = uniform_grid(0.5, 2.0, 0.1);
        if (c.u_grid.empty()) c.u_grid = uniform_grid(0.0, 0.5, 0.05);
    }
    if (c.subcommand == "fit" && c.fit_kind == "exponent" && c.omega_grid.empty()) {
        for (int i = 0; i <= 8; ++i) c.omega_grid.push_back(1.0 - std::pow(10.0, -4.0 + 0.25 * i));
        std::sort(c.omega_grid.begin(), c.omega_grid.end());
    }
    return c;
}

}  // namespace bhd
