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

#include "bhdimer/eigensolvers.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "bhdimer/errors.hpp"

namespace bhd {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Moves the eigenvalues flagged in `select` to the leading diagonal positions of
// the Schur form (t, q), keeping the order of the others.
void reorder_schur(MatrixXcd& t, MatrixXcd& q, const std::vector<int>& select) {
    const auto n = static_cast<lapack_int>(t.rows());
    std::vector<lapack_logical> sel(select.begin(), select.end());
    VectorXcd w(n);
    lapack_int m = 0;
    double s = 0.0;
    double sep = 0.0;
    const lapack_int info = LAPACKE_ztrsen(LAPACK_COL_MAJOR, 'N', 'V', sel.data(), n, t.data(), n, q.data(), n,
                                           w.data(), &m, &s, &sep);
    if (info != 0) {
        throw EigensolverError("Schur reordering failed", static_cast<double>(info));
    }
}

std::vector<int> top_by_modulus(const MatrixXcd& t, int count) {
    const int n = static_cast<int>(t.rows());
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return std::abs(t(a, a)) > std::abs(t(b, b)); });
    std::vector<int> sel(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < std::min(count, n); ++i) {
        sel[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = 1;
    }
    return sel;
}

}  // namespace

EigenPairs dense_eigen(const MatrixXcd& m, bool want_vectors) {
    const auto n = static_cast<lapack_int>(m.rows());
    if (m.rows() != m.cols()) {
        throw ConfigError("dense_eigen: matrix must be square");
    }
    EigenPairs out;
    if (n == 0) {
        return out;
    }
    MatrixXcd a = m;
    out.values.resize(n);
    cplx dummy;
    if (want_vectors) {
        out.vectors.resize(n, n);
    }
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, a.data(), n, out.values.data(), &dummy, 1,
                      want_vectors ? out.vectors.data() : &dummy, want_vectors ? n : 1);
    if (info != 0) {
        throw EigensolverError("zgeev did not converge", static_cast<double>(info));
    }
    return out;
}

ShiftInvertResult shift_invert_eigs(const SparseMatrixC& l, cplx sigma, const ShiftInvertSettings& settings,
                                    unsigned seed) {
    const Eigen::Index n = l.rows();
    if (l.cols() != n) {
        throw ConfigError("shift_invert_eigs: matrix must be square");
    }
    const int nev = static_cast<int>(std::min<Eigen::Index>(settings.nev, n));
    ShiftInvertResult res;
    if (nev <= 0) {
        res.converged = true;
        return res;
    }

    // Small problems: dense path.
    if (n <= settings.krylov_dim + 1) {
        const auto ep = dense_eigen(MatrixXcd(l), true);
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return std::abs(ep.values(a) - sigma) < std::abs(ep.values(b) - sigma);
        });
        res.vectors.resize(n, nev);
        for (int i = 0; i < nev; ++i) {
            const int k = idx[static_cast<std::size_t>(i)];
            res.values.push_back(ep.values(k));
            res.vectors.col(i) = ep.vectors.col(k);
            const VectorXcd x = ep.vectors.col(k);
            res.residuals.push_back((l * x - ep.values(k) * x).norm() / x.norm());
        }
        res.converged = true;
        return res;
    }

    Eigen::SparseMatrix<cplx> shifted = l;
    for (Eigen::Index i = 0; i < n; ++i) {
        shifted.coeffRef(i, i) -= sigma;
    }
    shifted.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success) {
        throw EigensolverError("sparse LU of the shifted operator failed", 0.0);
    }

    const int m = std::max(settings.krylov_dim, 2 * nev + 2);
    const int keep = std::min(m - 1, nev + (m - nev) / 2);
    MatrixXcd v = MatrixXcd::Zero(n, m + 1);
    MatrixXcd h = MatrixXcd::Zero(m + 1, m);

    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    auto random_vector = [&] {
        VectorXcd x(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            x(i) = cplx(gauss(rng), gauss(rng));
        }
        return x;
    };
    VectorXcd v0 = random_vector();
    v.col(0) = v0 / v0.norm();

    int p = 0;
    MatrixXcd t;
    MatrixXcd q;
    for (int restart = 0; restart <= settings.max_restarts; ++restart) {
        for (int j = p; j < m; ++j) {
            VectorXcd w = lu.solve(v.col(j));
            VectorXcd hc = v.leftCols(j + 1).adjoint() * w;
            w -= v.leftCols(j + 1) * hc;
            const VectorXcd h2 = v.leftCols(j + 1).adjoint() * w;
            w -= v.leftCols(j + 1) * h2;
            hc += h2;
            h.block(0, j, j + 1, 1) = hc;
            double beta = w.norm();
            if (beta < 1e-14 * std::max(1.0, hc.norm())) {
                // Invariant subspace found: continue with a fresh orthogonal direction.
                VectorXcd r = random_vector();
                r -= v.leftCols(j + 1) * (v.leftCols(j + 1).adjoint() * r);
                r -= v.leftCols(j + 1) * (v.leftCols(j + 1).adjoint() * r);
                v.col(j + 1) = r / r.norm();
                h(j + 1, j) = 0.0;
            } else {
                v.col(j + 1) = w / beta;
                h(j + 1, j) = beta;
            }
        }

        Eigen::ComplexSchur<MatrixXcd> cs(h.topLeftCorner(m, m));
        t = cs.matrixT();
        q = cs.matrixU();
        reorder_schur(t, q, top_by_modulus(t, keep));
        {
            // Bring the nev largest to the very front, keeping the rest of the kept block behind.
            MatrixXcd lead = t.topLeftCorner(keep, keep);
            MatrixXcd ql = MatrixXcd::Identity(keep, keep);
            reorder_schur(lead, ql, top_by_modulus(lead, nev));
            t.topLeftCorner(keep, keep) = lead;
            t.topRightCorner(keep, m - keep) = ql.adjoint() * t.topRightCorner(keep, m - keep);
            q.leftCols(keep) = q.leftCols(keep) * ql;
        }
        const cplx hlast = h(m, m - 1);
        const Eigen::RowVectorXcd b = hlast * q.row(m - 1);

        bool converged = true;
        for (int j = 0; j < nev; ++j) {
            converged = converged && std::abs(b(j)) <= settings.tol * std::abs(t(j, j));
        }
        res.restarts = restart;
        if (converged || restart == settings.max_restarts) {
            res.converged = converged;
            break;
        }

        MatrixXcd vnew = MatrixXcd::Zero(n, m + 1);
        vnew.leftCols(keep) = v.leftCols(m) * q.leftCols(keep);
        vnew.col(keep) = v.col(m);
        v = std::move(vnew);
        MatrixXcd hnew = MatrixXcd::Zero(m + 1, m);
        hnew.topLeftCorner(keep, keep) = t.topLeftCorner(keep, keep);
        hnew.block(keep, 0, 1, keep) = b.head(keep);
        h = std::move(hnew);
        p = keep;
    }

    Eigen::ComplexEigenSolver<MatrixXcd> small(t.topLeftCorner(nev, nev));
    const MatrixXcd basis = v.leftCols(m) * q.leftCols(nev);
    res.vectors.resize(n, nev);
    for (int i = 0; i < nev; ++i) {
        const cplx theta = small.eigenvalues()(i);
        const cplx lambda = sigma + 1.0 / theta;
        VectorXcd x = basis * small.eigenvectors().col(i);
        x /= x.norm();
        res.values.push_back(lambda);
        res.vectors.col(i) = x;
        res.residuals.push_back((l * x - lambda * x).norm());
    }
    return res;
}

}  // namespace bhd
