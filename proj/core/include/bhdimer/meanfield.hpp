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

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "bhdimer/errors.hpp"
#include "bhdimer/fourier.hpp"
#include "bhdimer/model.hpp"

namespace bhd {

/// Scaled quadratures; alpha = (x_a + i p_a)/sqrt(2), shell |alpha|^2 + |beta|^2 = 2.
struct MeanFieldState {
    double x_a = 0.0;
    double p_a = 0.0;
    double x_b = 0.0;
    double p_b = 0.0;

    static MeanFieldState from_amplitudes(std::complex<double> alpha, std::complex<double> beta);
    static MeanFieldState from_array(const std::array<double, 4>& v) { return {v[0], v[1], v[2], v[3]}; }

    std::complex<double> alpha() const;
    std::complex<double> beta() const;
    std::array<double, 4> as_array() const { return {x_a, p_a, x_b, p_b}; }
    double shell() const { return 0.5 * (x_a * x_a + p_a * p_a + x_b * x_b + p_b * p_b); }
    double norm() const;

    bool operator==(const MeanFieldState&) const = default;
};

/// R_a = |alpha|, R_b = |beta|, delta_phi = phi_b - phi_a in (-pi, pi],
/// sigma_phi = phi_a + phi_b, taken as 2 phi_a + delta_phi so from_polar inverts to_polar.
struct PolarState {
    double r_a = 0.0;
    double r_b = 0.0;
    double delta_phi = 0.0;
    double sigma_phi = 0.0;
};

inline constexpr double kDefaultPolarEps = 1e-9;

PolarState to_polar(const MeanFieldState& s, double eps_r = kDefaultPolarEps);
MeanFieldState from_polar(const PolarState& p);

MeanFieldState mf_rhs(const MeanFieldState& s, const ModelParams& params);
PolarState polar_rhs(const PolarState& s, const ModelParams& params, double eps_r = kDefaultPolarEps);

/// (a <-> b, p -> -p). The flow satisfies f(T s) = -T f(s).
MeanFieldState pt_transform(const MeanFieldState& s);

/// alpha = sqrt(1.2) e^{0.3 i}, beta = sqrt(0.8) e^{-0.2 i}.
MeanFieldState default_initial_state();

struct IntegratorSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double sample_dt = 0.05;
    double shell_tolerance = 1e-9;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<MeanFieldState> states;
    ModelParams params;
    IntegratorSettings settings;
    bool default_initial_state = false;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
    double dt() const;
    /// Drops the leading fraction of samples.
    Trajectory tail(double transient_fraction) const;
    std::vector<double> component(int index) const;
};

Trajectory integrate_mf(const MeanFieldState& state0, const ModelParams& params, double t_end,
                        const IntegratorSettings& settings = {});

/// Polar samples with the total phase unwrapped by continuity.
std::vector<PolarState> polar_series(const Trajectory& traj);

struct FixedPoints {
    std::vector<PolarState> branches;
    double sigma_phi_rate = 0.0;  // -8U
};

FixedPoints fixed_points(const ModelParams& params);

/// Critical interaction for the limit-cycle to quasi-periodic transition.
double critical_u(double omega, double kappa = 1.0);

enum class Phase { Stationary, TC1, TC2, TC3 };

std::string to_string(Phase p);
Phase phase_from_string(const std::string& s);

struct OrderParameters {
    double delta_n = 0.0;
    double delta_r_bar = 0.0;
};

/// Hann-weighted time averages over the whole trajectory:
/// delta_n = |<R_a^2 - R_b^2>|/2, delta_r_bar = |<R_a> - <R_b>|/sqrt(2).
OrderParameters order_parameters(const Trajectory& traj);

struct ClassifierSettings {
    double transient_fraction = 0.5;
    double eps_fp = 1e-8;
    double eps_r = 1e-3;
    double peak_floor = 1e-4;
    double tc2_secondary_ratio = 1e-2;
    double even_harmonic_ratio = 1e-3;
    int rational_q_max = 8;
    double rational_tol = 1e-3;
    double u_zero_tol = 1e-12;
};

struct PhaseLabel {
    Phase phase = Phase::Stationary;
    std::vector<FourierPeak> peaks;
    double delta_n = 0.0;
    double delta_r_bar = 0.0;
    double derivative_norm = 0.0;
    double even_harmonic_ratio = 0.0;
    double resolution = 0.0;

    double dominant_frequency() const { return peaks.empty() ? 0.0 : peaks.front().frequency; }
};

/// Carries the diagnostics gathered before classification gave up.
class InconclusivePhase : public ClassificationInconclusive {
public:
    InconclusivePhase(const std::string& what, PhaseLabel diagnostics)
        : ClassificationInconclusive(what), diagnostics_(std::move(diagnostics)) {}
    const PhaseLabel& diagnostics() const noexcept { return diagnostics_; }

private:
    PhaseLabel diagnostics_;
};

/// Throws InconclusivePhase when diagnostics do not match any phase.
PhaseLabel classify_phase(const Trajectory& traj, const ModelParams& params,
                          const ClassifierSettings& settings = {});

/// Largest p_a power within +-2 bins of the even multiples of the fundamental,
/// relative to the fundamental's power.
double even_harmonic_power_ratio(std::span<const double> series, double fundamental_bin);

/// True when r is within tol of some p/q with q <= q_max.
bool is_near_rational(double r, int q_max, double tol);

}  // namespace bhd
