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
#include <random>
#include <string>
#include <vector>

#include "bhdimer/fluctuations.hpp"
#include "bhdimer/meanfield.hpp"
#include "bhdimer/model.hpp"

namespace props {

/// Hand-rolled generators for randomized invariant checks.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    /// omega in [0, 2], u in [0, 0.5], kappa = 1, n_th in [0, n_th_max].
    bhd::ModelParams params(double n_th_max = 1.0);
    /// Uniform direction on the shell sum (x^2 + p^2)/2 = 2.
    bhd::MeanFieldState shell_state();
    /// exp(J K) with a random symmetric K of entries in [-scale, scale].
    bhd::Mat4 symplectic(double scale = 0.8);
    /// S diag(n1, n1, n2, n2) S^T with n1, n2 >= 1.
    bhd::Mat4 physical_covariance();
    /// Random 2x2 matrix with unit determinant.
    Eigen::Matrix2d local_symplectic();

private:
    std::mt19937_64 rng_;
};

struct SuiteResult {
    std::string name;
    int instances = 0;
    int failures = 0;
    double worst = 0.0;  // largest violation metric seen
};

SuiteResult shell_conservation(int instances, std::uint64_t seed);
SuiteResult pt_flow_invariance(int instances, std::uint64_t seed);
SuiteResult covariance_physicality(int instances, std::uint64_t seed);
SuiteResult block_trace_preservation(int instances, std::uint64_t seed);
SuiteResult spectrum_stability(int instances, std::uint64_t seed);
SuiteResult local_symplectic_invariance(int instances, std::uint64_t seed);

std::vector<SuiteResult> run_all(int instances, std::uint64_t seed);

}  // namespace props
