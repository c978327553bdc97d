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

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bhdimer/meanfield.hpp"

namespace bhd {

using Mat4 = Eigen::Matrix4d;
using CMat4 = Eigen::Matrix4cd;

/// Symplectic form for [x, p] = 2i in the order (x_a, p_a, x_b, p_b).
Mat4 symplectic_form();

/// Minimum eigenvalue of the Hermitian matrix sigma + iJ. Physical states have
/// a non-negative margin; the vacuum saturates it.
double physicality_margin(const Mat4& sigma);

/// Scale applied to z_mat in the covariance equation. Consistent doubles it,
/// matching the damping rate in q_mat; Printed leaves it unchanged.
enum class NoiseNormalization { Consistent, Printed };

std::string to_string(NoiseNormalization n);
NoiseNormalization noise_normalization_from_string(const std::string& s);

struct FluctuationMatrices {
    Mat4 a_mat;
    Mat4 q_mat;
    CMat4 z_mat;
    double noise_scale = 2.0;

    Mat4 drift() const { return a_mat + q_mat; }
    /// noise_scale * Re((Z + Z^T)/2), the part that enters the covariance equation.
    Mat4 noise() const;
};

FluctuationMatrices build_matrices(const MeanFieldState& s, const ModelParams& params,
                                   NoiseNormalization normalization = NoiseNormalization::Consistent);

/// d sigma/dt = M sigma + sigma M^T + noise() with M = A + Q.
Mat4 lyapunov_rhs(const Mat4& sigma, const FluctuationMatrices& m);

struct PhysicalityWarning {
    double time;
    double margin;
};

struct CovarianceSeries {
    std::vector<double> times;
    std::vector<Mat4> sigmas;
    std::vector<PhysicalityWarning> warnings;
};

struct LyapunovResult {
    Trajectory trajectory;
    CovarianceSeries covariances;
};

struct LyapunovSettings {
    IntegratorSettings integrator;
    double physicality_tolerance = 1e-9;
    NoiseNormalization noise = NoiseNormalization::Consistent;
};

/// Joint integration of the mean field and the covariance matrix. The
/// covariance is carried as its 10 upper-triangle entries so it stays exactly
/// symmetric.
LyapunovResult integrate_lyapunov(const MeanFieldState& state0, const Mat4& sigma0, const ModelParams& params,
                                  double t_end, const LyapunovSettings& settings = {});

/// Same as above with explicit, non-decreasing output times starting at >= 0.
LyapunovResult integrate_lyapunov_at(const MeanFieldState& state0, const Mat4& sigma0, const ModelParams& params,
                                     std::span<const double> sample_times, const LyapunovSettings& settings = {});

/// Upper-triangle packing in row order s11, s12, s13, s14, s22, ..., s44.
std::array<double, 10> pack_upper(const Mat4& m);
Mat4 unpack_upper(std::span<const double> v);

}  // namespace bhd
