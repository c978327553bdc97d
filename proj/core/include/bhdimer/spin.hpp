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

#include "bhdimer/meanfield.hpp"
#include "bhdimer/model.hpp"

namespace bhd {

struct SpinParams {
    double s = 0.5;
    double omega = 0.0;
    double u = 0.0;
    double kappa = 1.0;
    double n_th = 0.0;

    static SpinParams from_model(const ModelParams& params, int n_total);
    int two_s() const;
};

/// Dense generator on (2S+1)^2 coefficients, basis m = -S..S, row-major
/// vectorization (index (m + S) * (2S+1) + (m' + S)).
Eigen::MatrixXcd build_spin_liouvillian(const SpinParams& params, int max_two_s = 64);

/// Collective spin operators S_z, S_+ in the basis m = -S..S.
Eigen::MatrixXd spin_sz(int two_s);
Eigen::MatrixXd spin_splus(int two_s);

struct SpinObservables {
    std::vector<double> times;
    std::vector<double> m_x, m_y, m_z;
};

/// m_z = (|alpha|^2 - |beta|^2)/2, m_x + i m_y = conj(alpha) beta.
SpinObservables spin_observables_from_bosonic(const Trajectory& traj);

}  // namespace bhd
