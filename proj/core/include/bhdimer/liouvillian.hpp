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

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bhdimer/eigensolvers.hpp"
#include "bhdimer/model.hpp"

namespace bhd {

struct BlockLimits {
    std::size_t max_dimension = std::size_t{1} << 20;
};

/// Generator restricted to coefficients rho^{n,n'}_{N_a,N'_a}, vectorized
/// row-major: index = N_a * (n' + 1) + N'_a.
struct BlockOperator {
    int n = 0;
    int n_prime = 0;
    double scale_n = 1.0;  // N entering the 2 kappa / N and 2 U / N prefactors
    SparseMatrixC matrix;

    Eigen::Index dimension() const { return matrix.rows(); }
    Eigen::Index index(int n_a, int n_a_prime) const { return static_cast<Eigen::Index>(n_a) * (n_prime + 1) + n_a_prime; }
};

/// The prefactors use params.n_total when set, otherwise n.
BlockOperator build_block(const ModelParams& params, int n, int n_prime, const BlockLimits& limits = {});

struct SpectrumSettings {
    std::size_t dense_cap = 4096;
    int k = 16;
    bool want_vectors = false;
    // Iterative path: shifts sigma_j = shift_real + i y_j, y_j on a uniform grid.
    double shift_real = 0.05;
    double shift_imag_min = -4.0;
    double shift_imag_max = 4.0;
    double shift_imag_step = 0.5;
    int per_shift = 6;
    double residual_tol = 1e-8;
    int threads = 1;
};

struct SpectrumResult {
    int n = 0;
    int n_prime = 0;
    std::vector<cplx> eigenvalues;             // descending real part
    std::optional<Eigen::MatrixXcd> eigenvectors;
    bool iterative = false;
    double max_residual = 0.0;
};

SpectrumResult block_spectrum(const BlockOperator& block, const SpectrumSettings& settings = {});

struct DensityBlock {
    int n = 0;
    int n_prime = 0;
    Eigen::MatrixXcd coeffs;  // (n+1) x (n'+1)

    cplx trace() const;
};

/// Unique, trace-normalized null vector of an n = n' block.
DensityBlock steady_state(const BlockOperator& block);

struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> x_a, p_a, x_b, p_b;  // 2 Re<a>/sqrt(N), 2 Im<a>/sqrt(N), ...
    std::vector<double> n_a, n_b;            // raw <n_a>, <n_b>
    std::vector<double> trace;
    int n_scale = 0;
    bool has_quadratures = false;
    bool has_populations = false;
};

struct EvolveSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    bool quadratures = true;
    bool populations = true;
    int threads = 1;
};

/// Evolves each block under its own generator. Quadratures need (M, M-1)
/// blocks, populations need (M, M) blocks; otherwise MissingSectorError.
ObservableSeries evolve_blocks(std::span<const DensityBlock> initial, const ModelParams& params, double t_end,
                               double sample_dt, const EvolveSettings& settings = {});

/// Blocks evolved to `t` (used by tests and the dense cross-check).
std::vector<DensityBlock> propagate_blocks(std::span<const DensityBlock> initial, const ModelParams& params, double t,
                                           const EvolveSettings& settings = {});

/// Projection of |alpha sqrt(N/2), beta sqrt(N/2)> onto sectors N-halfwidth..N+halfwidth,
/// renormalized. Returns the (M, M) and (M, M-1) blocks.
std::vector<DensityBlock> coherent_initial_blocks(int n_total, std::complex<double> alpha, std::complex<double> beta,
                                                  int halfwidth = 2);

struct SpinEquivalence {
    double mismatch = 0.0;
    bool ambiguous = false;  // near-degenerate eigenvalues made the matching non-unique
};

SpinEquivalence spin_equivalence_check(const ModelParams& params, int n);

/// Minimal-cost perfect matching (Hungarian algorithm). Returns col index per row.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

}  // namespace bhd
