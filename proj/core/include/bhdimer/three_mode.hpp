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

#include <vector>

#include <Eigen/Dense>

#include "bhdimer/model.hpp"

namespace bhd {

struct ThreeModeLimits {
    int max_n = 3;
    int max_cutoff = 6;
};

struct ThreeModeResult {
    std::vector<double> times;
    std::vector<double> trace_distance;
    std::vector<double> n_a_full;       // <n_a> of the three-mode model
    std::vector<double> n_a_effective;  // <n_a> of the effective two-mode model
    double max_trace_distance = 0.0;
    double max_cutoff_population = 0.0;
    bool leakage_warning = false;
    double kappa_effective = 0.0;  // 4 g^2 / gamma
};

/// Dense evolution of the rotated-frame three-mode model (a, b plus a damped
/// mode c with coupling g/sqrt(N/2) and decay gamma) against the effective
/// two-mode master equation with kappa = 4 g^2 / gamma. Uses omega, u, n_th and
/// n_total from params; params.kappa is ignored. Starts from all excitations
/// in mode a and mode c thermal.
ThreeModeResult three_mode_oracle(const ModelParams& params, double g, double gamma, int cutoff_c, double t_end,
                                  double sample_dt = 0.05, const ThreeModeLimits& limits = {});

/// (g, gamma) with 4 g^2 / gamma = kappa at the given ratio gamma / g.
std::pair<double, double> couplings_for_ratio(double kappa, double ratio);

struct RateFit {
    double gamma_r = 0.0;  // a -> b rate of the single-excitation population decay
    double gamma_l = 0.0;  // b -> a
    double ratio() const { return gamma_l / gamma_r; }
};

/// Fits a two-state rate equation to <n_a>(t) of the three-mode model with
/// N = 1, omega = u = 0.
RateFit fit_effective_rates(double n_th, double g, double gamma, int cutoff_c, double t_end);

}  // namespace bhd
