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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bhdimer/correlations.hpp"
#include "bhdimer/fluctuations.hpp"
#include "bhdimer/fourier.hpp"
#include "bhdimer/liouvillian.hpp"
#include "bhdimer/meanfield.hpp"

namespace bhd {

// ---------------------------------------------------------------- sweeps

enum class SweepDirection { Forward, Backward };

std::string to_string(SweepDirection d);
SweepDirection direction_from_string(const std::string& s);

struct SweepSettings {
    double settle_time = 200.0;
    double transient_fraction = 0.5;
    IntegratorSettings integrator{1e-10, 1e-12, 0.05, 1e-6};
    ClassifierSettings classifier;
};

struct SweepStep {
    double control = 0.0;
    MeanFieldState initial;
    MeanFieldState final_state;
    OrderParameters order;
    std::optional<Phase> label;  // empty when the classifier was inconclusive
    std::string note;
};

struct SweepRecord {
    std::string control_name;  // "omega" or "u"
    SweepDirection direction = SweepDirection::Forward;
    ModelParams base;
    std::vector<SweepStep> steps;  // in traversal order

    std::vector<double> controls() const;
    std::vector<double> delta_n() const;
};

/// Chained mean-field runs over an ascending omega grid, traversed upward for
/// Forward and downward for Backward. Step k+1 starts from the final state of
/// step k. Without `initial` the first step starts from the default state.
SweepRecord hysteresis_sweep(const ModelParams& base, std::span<const double> omega_grid, SweepDirection direction,
                             const SweepSettings& settings = {}, std::optional<MeanFieldState> initial = std::nullopt);

/// Same protocol over an ascending u grid at fixed omega.
SweepRecord interaction_sweep(const ModelParams& base, std::span<const double> u_grid, SweepDirection direction,
                              const SweepSettings& settings = {}, std::optional<MeanFieldState> initial = std::nullopt);

/// Integral of |dN_forward - dN_backward| over the control (trapezoid rule).
/// Both records must cover the same grid.
double hysteresis_loop_area(const SweepRecord& forward, const SweepRecord& backward);

/// First control value, in traversal order, whose label differs from `from`
/// while the preceding step carried `from`. Empty when no such transition.
std::optional<double> transition_point(const SweepRecord& record, Phase from);

// ---------------------------------------------------------- phase diagram

enum class PhaseProtocol { ForwardSweep, Independent };

struct PhaseDiagramSettings {
    PhaseProtocol protocol = PhaseProtocol::ForwardSweep;
    SweepSettings sweep;
    double averaging_time = 4000.0;   // Lyapunov run length for the entanglement average
    double averaging_fraction = 0.1;  // trailing fraction of that run that is averaged
    double lyapunov_sample_dt = 0.5;
    NoiseNormalization noise = NoiseNormalization::Consistent;
    bool with_entanglement = true;
    int threads = 1;
};

struct PhaseCell {
    double omega = 0.0;
    double u = 0.0;
    std::optional<Phase> label;
    double eps_avg = 0.0;
    double delta_n = 0.0;
    double delta_r_bar = 0.0;
    std::string error;  // non-empty when the cell failed or was inconclusive

    std::string label_string() const;
};

struct PhaseDiagram {
    std::vector<double> omega_grid;
    std::vector<double> u_grid;
    std::vector<PhaseCell> cells;  // row-major: u index outer, omega index inner

    const PhaseCell& at(std::size_t iu, std::size_t iw) const { return cells[iu * omega_grid.size() + iw]; }
    /// U_c(omega) for omega >= kappa, empty below.
    static std::optional<double> boundary(double omega, double kappa = 1.0);
};

/// Time average of the logarithmic negativity over the trailing window of a
/// Lyapunov run from the vacuum covariance.
double averaged_entanglement(const MeanFieldState& state0, const ModelParams& params, double t_end,
                             double fraction, double sample_dt = 0.5,
                             NoiseNormalization noise = NoiseNormalization::Consistent);

PhaseDiagram phase_diagram(const ModelParams& base, std::span<const double> omega_grid,
                           std::span<const double> u_grid, const PhaseDiagramSettings& settings = {});

// ------------------------------------------------------------------ fits

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares y = slope x + intercept.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Log-log fit of y vs x (both positive).
LinearFit fit_power_law(std::span<const double> x, std::span<const double> y);

struct SteadyStateSettings {
    double chunk_time = 200.0;
    int max_chunks = 400;
    double derivative_tol = 1e-11;
    IntegratorSettings integrator{1e-11, 1e-13, 1.0, 1e-6};
};

struct SteadyState {
    MeanFieldState state;
    double delta_n = 0.0;  // |R_a^2 - R_b^2| / 2
    double derivative_norm = 0.0;
    double time = 0.0;
};

/// Integrates in chunks until the mean-field derivative norm drops below the
/// tolerance. Throws IntegrationError when it does not.
SteadyState mean_field_steady_state(const ModelParams& params, const MeanFieldState& state0,
                                    const SteadyStateSettings& settings = {});

struct ExponentFit {
    LinearFit fit;
    double omega_c = 1.0;
    std::vector<double> distance;  // (omega_c - omega) / kappa
    std::vector<double> delta_n;
};

struct ExponentSettings {
    SteadyStateSettings steady;
    bool fit_omega_c = false;
    int threads = 1;
};

/// Power-law fit of dN vs (omega_c - omega)/kappa with omega_c = kappa unless
/// fit_omega_c is set. Needs at least 5 grid points below omega_c.
ExponentFit critical_exponent_fit(const ModelParams& base, std::span<const double> omega_grid,
                                  const ExponentSettings& settings = {});

/// Fit on precomputed order parameters.
ExponentFit critical_exponent_fit(std::span<const double> omega_grid, std::span<const double> delta_n,
                                  double kappa = 1.0, bool fit_omega_c = false);

struct GrowthFit {
    LinearFit fit;  // eps against ln(kappa t)
    std::optional<double> onset;        // start of the last interval with eps > threshold that lasts to the end
    std::optional<double> first_onset;  // first sample with eps > threshold
    bool non_monotone = false;          // eps decreased inside the window
};

GrowthFit entanglement_growth_fit(std::span<const double> times, std::span<const double> eps, double t_lo,
                                  double t_hi, double kappa = 1.0, double onset_threshold = 0.01);

// ---------------------------------------------------------- gap scaling

struct GapEntry {
    int n = 0;
    std::vector<cplx> eigenvalues;  // descending real part
    bool iterative = false;
    double max_residual = 0.0;
    std::string error;
};

/// Leading eigenvalues of L_{N, N - offset} for each N.
std::vector<GapEntry> gap_scaling(std::span<const int> n_list, const ModelParams& params, int offset = 1,
                                  const SpectrumSettings& settings = {}, int threads = 1);

}  // namespace bhd
