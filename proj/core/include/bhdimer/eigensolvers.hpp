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
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace bhd {

using cplx = std::complex<double>;
using SparseMatrixC = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

struct EigenPairs {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;  // columns; empty when not requested
};

/// General complex eigendecomposition (LAPACK zgeev).
EigenPairs dense_eigen(const Eigen::MatrixXcd& m, bool want_vectors);

struct ShiftInvertSettings {
    int nev = 6;          // eigenvalues nearest the shift
    int krylov_dim = 30;  // maximum basis size before restart
    double tol = 1e-12;   // relative Ritz residual in the inverted operator
    int max_restarts = 300;
};

struct ShiftInvertResult {
    std::vector<cplx> values;
    Eigen::MatrixXcd vectors;
    std::vector<double> residuals;  // ||L x - lambda x|| / ||x|| in the original operator
    int restarts = 0;
    bool converged = false;
};

/// Eigenvalues of `l` nearest `sigma` by Krylov-Schur iteration on (l - sigma)^-1.
ShiftInvertResult shift_invert_eigs(const SparseMatrixC& l, cplx sigma, const ShiftInvertSettings& settings = {},
                                    unsigned seed = 12345u);

}  // namespace bhd
