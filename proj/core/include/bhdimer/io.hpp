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

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bhdimer/correlations.hpp"
#include "bhdimer/experiments.hpp"
#include "bhdimer/fluctuations.hpp"
#include "bhdimer/liouvillian.hpp"
#include "bhdimer/meanfield.hpp"
#include "bhdimer/model.hpp"
#include "bhdimer/spin.hpp"

namespace bhd {

const char* version();

/// Scientific notation with 17 significant digits.
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::span<const std::string> header);

    CsvWriter& cell(double v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
    CsvWriter& cell(const std::string& v);
    void end_row();

private:
    std::ofstream out_;
    bool first_ = true;
};

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
void write_covariance_csv(const std::filesystem::path& path, const CovarianceSeries& cov);
void write_correlations_csv(const std::filesystem::path& path, std::span<const double> times,
                            std::span<const CorrelationReport> reports);
void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& spectrum);
void write_observables_csv(const std::filesystem::path& path, const ObservableSeries& obs);
void write_spin_csv(const std::filesystem::path& path, const SpinObservables& obs);
void write_phase_diagram_csv(const std::filesystem::path& path, const PhaseDiagram& pd);
void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRecord> records);
void write_gap_csv(const std::filesystem::path& path, std::span<const GapEntry> entries);

nlohmann::json to_json(const PhaseLabel& label);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

struct RunConfig {
    std::string subcommand;
    ModelParams params;
    double t_end = 500.0;
    double tol = 1e-10;  // relative tolerance; the absolute tolerance is tol / 100
    double sample_dt = 0.05;
    std::string out = ".";
    int threads = 1;
    std::uint64_t seed = 12345;
    std::string noise = "consistent";  // covariance noise normalization: consistent | printed

    // sweep, phasediagram, fit
    std::vector<double> omega_grid;
    std::vector<double> u_grid;
    std::string direction = "both";
    double settle_time = 200.0;
    double transient_fraction = 0.5;
    double averaging_time = 4000.0;

    // spectrum, evolve
    std::optional<int> n_prime;
    std::vector<int> n_list;
    int k = 16;
    int halfwidth = 2;

    // fit
    std::string fit_kind = "exponent";
    double t_lo = 100.0;
    double t_hi = 10000.0;

    // validate
    std::string check = "spin-equivalence";
    int n = 4;
    int draws = 5;

    bool operator==(const RunConfig&) const = default;
};

/// Every field, including defaults.
nlohmann::json to_json(const RunConfig& cfg);

/// Strict parse: unknown keys and type mismatches raise ConfigError. Missing
/// keys keep the defaults. An object without "params" is read as bare model
/// parameters.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig defaults = {});

/// Fills grids left empty with the subcommand defaults.
RunConfig resolve_defaults(RunConfig cfg);

}  // namespace bhd
