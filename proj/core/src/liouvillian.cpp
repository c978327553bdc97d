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

#include "bhdimer/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <Eigen/SparseLU>

#include "bhdimer/errors.hpp"
#include "bhdimer/parallel.hpp"
#include "bhdimer/spin.hpp"
#include "ode.hpp"

namespace bhd {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

double interaction_energy(int n, int n_a) {
    const double a = n_a;
    const double b = n - n_a;
    return a * (a - 1.0) + b * (b - 1.0);
}

VectorXcd vectorize(const DensityBlock& b) {
    VectorXcd v(b.coeffs.size());
    const Eigen::Index cols = b.coeffs.cols();
    for (Eigen::Index r = 0; r < b.coeffs.rows(); ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            v(r * cols + c) = b.coeffs(r, c);
        }
    }
    return v;
}

MatrixXcd unvectorize(const cplx* data, int n, int n_prime) {
    MatrixXcd m(n + 1, n_prime + 1);
    for (int r = 0; r <= n; ++r) {
        for (int c = 0; c <= n_prime; ++c) {
            m(r, c) = data[r * (n_prime + 1) + c];
        }
    }
    return m;
}

}  // namespace

BlockOperator build_block(const ModelParams& params, int n, int n_prime, const BlockLimits& limits) {
    params.validate();
    if (n < 0 || n_prime < 0) {
        throw ParameterDomainError("sector labels must be non-negative");
    }
    const std::size_t dim = static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n_prime + 1);
    if (dim > limits.max_dimension) {
        std::ostringstream os;
        os << "block (" << n << "," << n_prime << ") has dimension " << dim << " above the cap "
           << limits.max_dimension;
        throw DimensionError(os.str());
    }
    BlockOperator op;
    op.n = n;
    op.n_prime = n_prime;
    op.scale_n = static_cast<double>(params.n_total.value_or(std::max(n, 1)));

    const double half_om = 0.5 * params.omega;
    const double g_r = 2.0 * params.kappa * (1.0 + params.n_th) / op.scale_n;
    const double g_l = 2.0 * params.kappa * params.n_th / op.scale_n;
    const double u = 2.0 * params.u / op.scale_n;
    const cplx i(0.0, 1.0);

    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(dim * 7);
    auto add = [&](Eigen::Index row, int a, int b, cplx val) {
        if (a < 0 || a > n || b < 0 || b > n_prime || val == cplx(0.0)) {
            return;
        }
        trip.emplace_back(row, op.index(a, b), val);
    };
    for (int a = 0; a <= n; ++a) {
        for (int b = 0; b <= n_prime; ++b) {
            const Eigen::Index row = op.index(a, b);
            const double nb = n - a;
            const double mb = n_prime - b;
            // Coherent hopping, ket and bra sides.
            add(row, a - 1, b, -i * half_om * std::sqrt(a * (nb + 1.0)));
            add(row, a + 1, b, -i * half_om * std::sqrt(nb * (a + 1.0)));
            add(row, a, b + 1, i * half_om * std::sqrt(mb * (b + 1.0)));
            add(row, a, b - 1, i * half_om * std::sqrt(b * (mb + 1.0)));
            // Incoherent hopping a -> b and b -> a.
            add(row, a + 1, b + 1, g_r * std::sqrt((a + 1.0) * nb * (b + 1.0) * mb));
            add(row, a - 1, b - 1, g_l * std::sqrt((nb + 1.0) * a * (mb + 1.0) * b));
            cplx diag = -i * u * (interaction_energy(n, a) - interaction_energy(n_prime, b));
            diag -= 0.5 * g_r * (a * (nb + 1.0) + b * (mb + 1.0));
            diag -= 0.5 * g_l * (nb * (a + 1.0) + mb * (b + 1.0));
            add(row, a, b, diag);
        }
    }
    op.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    op.matrix.setFromTriplets(trip.begin(), trip.end());
    op.matrix.makeCompressed();
    return op;
}

SpectrumResult block_spectrum(const BlockOperator& block, const SpectrumSettings& settings) {
    SpectrumResult res;
    res.n = block.n;
    res.n_prime = block.n_prime;
    const auto dim = static_cast<std::size_t>(block.dimension());

    if (dim <= settings.dense_cap) {
        const auto ep = dense_eigen(MatrixXcd(block.matrix), settings.want_vectors);
        std::vector<int> order(dim);
        for (std::size_t k = 0; k < dim; ++k) order[k] = static_cast<int>(k);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            const cplx x = ep.values(a);
            const cplx y = ep.values(b);
            if (x.real() != y.real()) return x.real() > y.real();
            return x.imag() > y.imag();
        });
        for (int k : order) res.eigenvalues.push_back(ep.values(k));
        if (settings.want_vectors) {
            MatrixXcd vecs(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
            for (std::size_t c = 0; c < dim; ++c) vecs.col(static_cast<Eigen::Index>(c)) = ep.vectors.col(order[c]);
            res.eigenvectors = std::move(vecs);
        }
        return res;
    }

    res.iterative = true;
    std::vector<double> shifts;
    for (double y = settings.shift_imag_min; y <= settings.shift_imag_max + 1e-12; y += settings.shift_imag_step) {
        shifts.push_back(y);
    }
    std::vector<ShiftInvertResult> parts(shifts.size());
    ShiftInvertSettings sis;
    sis.nev = settings.per_shift;
    parallel_for(shifts.size(), settings.threads, [&](std::size_t j) {
        parts[j] = shift_invert_eigs(block.matrix, cplx(settings.shift_real, shifts[j]), sis,
                                     12345u + static_cast<unsigned>(j));
    });

    struct Candidate {
        cplx value;
        double residual;
        const ShiftInvertResult* src;
        int col;
    };
    std::vector<Candidate> all;
    for (const auto& p : parts) {
        for (std::size_t k = 0; k < p.values.size(); ++k) {
            all.push_back({p.values[k], p.residuals[k], &p, static_cast<int>(k)});
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
        if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
        return a.value.imag() > b.value.imag();
    });
    std::vector<Candidate> unique;
    for (const auto& c : all) {
        bool dup = false;
        for (auto& u : unique) {
            if (std::abs(u.value - c.value) < 1e-8 * (1.0 + std::abs(c.value))) {
                dup = true;
                if (c.residual < u.residual) u = c;
                break;
            }
        }
        if (!dup) unique.push_back(c);
    }
    if (unique.size() > static_cast<std::size_t>(settings.k)) {
        unique.resize(static_cast<std::size_t>(settings.k));
    }
    for (const auto& c : unique) {
        res.eigenvalues.push_back(c.value);
        res.max_residual = std::max(res.max_residual, c.residual);
    }
    if (settings.want_vectors) {
        MatrixXcd vecs(block.dimension(), static_cast<Eigen::Index>(unique.size()));
        for (std::size_t c = 0; c < unique.size(); ++c) {
            vecs.col(static_cast<Eigen::Index>(c)) = unique[c].src->vectors.col(unique[c].col);
        }
        res.eigenvectors = std::move(vecs);
    }
    if (res.max_residual > settings.residual_tol) {
        std::ostringstream os;
        os << "iterative eigensolver residual " << res.max_residual << " exceeds " << settings.residual_tol;
        throw EigensolverError(os.str(), res.max_residual);
    }
    return res;
}

cplx DensityBlock::trace() const {
    cplx t = 0.0;
    for (Eigen::Index k = 0; k < std::min(coeffs.rows(), coeffs.cols()); ++k) t += coeffs(k, k);
    return t;
}

DensityBlock steady_state(const BlockOperator& block) {
    if (block.n != block.n_prime) {
        throw ConfigError("steady_state requires a diagonal (n, n) block");
    }
    const int n = block.n;
    const Eigen::Index dim = block.dimension();
    DensityBlock out;
    out.n = n;
    out.n_prime = n;

    // Nullity from the spectrum near zero.
    const double scale = std::max(1.0, MatrixXcd(block.matrix).cwiseAbs().maxCoeff());
    int nullity = 0;
    if (static_cast<std::size_t>(dim) <= 4096) {
        const auto ep = dense_eigen(MatrixXcd(block.matrix), false);
        for (Eigen::Index k = 0; k < ep.values.size(); ++k) {
            if (std::abs(ep.values(k)) < 1e-9 * scale) ++nullity;
        }
    } else {
        ShiftInvertSettings sis;
        sis.nev = 2;
        const auto r = shift_invert_eigs(block.matrix, cplx(1e-3, 0.0), sis);
        for (const auto& v : r.values) {
            if (std::abs(v) < 1e-9 * scale) ++nullity;
        }
    }
    if (nullity > 1) {
        throw DegenerateNullSpaceError("steady state is not unique: numerical nullity > 1");
    }
    if (nullity == 0 && dim > 1) {
        throw NumericalError("no zero eigenvalue found in the diagonal block");
    }

    // Bordered solve: replace the first equation by the trace condition.
    Eigen::SparseMatrix<cplx> a = block.matrix;
    std::vector<Eigen::Triplet<cplx>> trip;
    for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(a, r); it; ++it) {
            if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (int k = 0; k <= n; ++k) trip.emplace_back(0, block.index(k, k), cplx(1.0));
    Eigen::SparseMatrix<cplx> bordered(dim, dim);
    bordered.setFromTriplets(trip.begin(), trip.end());
    bordered.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.compute(bordered);
    if (lu.info() != Eigen::Success) {
        throw NumericalError("bordered steady-state system is singular");
    }
    VectorXcd rhs = VectorXcd::Zero(dim);
    rhs(0) = 1.0;
    const VectorXcd x = lu.solve(rhs);
    MatrixXcd rho = unvectorize(x.data(), n, n);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) {
        throw NumericalError("steady state is not positive semidefinite");
    }
    out.coeffs = rho;
    return out;
}

namespace {

// Integrates one block and hands the raw coefficient array to `observe` at each sample.
template <class Observer>
void evolve_one(const DensityBlock& b0, const ModelParams& params, std::span<const double> grid,
                const EvolveSettings& settings, Observer&& observe) {
    const BlockOperator op = build_block(params, b0.n, b0.n_prime);
    const VectorXcd v0 = vectorize(b0);
    std::vector<double> state(2 * static_cast<std::size_t>(v0.size()));
    const auto* raw = reinterpret_cast<const double*>(v0.data());
    std::copy(raw, raw + state.size(), state.begin());
    auto rhs = [&op](const std::vector<double>& x, std::vector<double>& dx, double) {
        dx.resize(x.size());
        Eigen::Map<const VectorXcd> xv(reinterpret_cast<const cplx*>(x.data()), op.dimension());
        Eigen::Map<VectorXcd> dv(reinterpret_cast<cplx*>(dx.data()), op.dimension());
        dv.noalias() = op.matrix * xv;
    };
    detail::StepControl ctl;
    ctl.rel_tol = settings.rel_tol;
    ctl.abs_tol = settings.abs_tol;
    detail::integrate_sampled(rhs, state, 0.0, grid, ctl, [&](double t, const std::vector<double>& x) {
        observe(t, op, reinterpret_cast<const cplx*>(x.data()));
    });
}

}  // namespace

std::vector<DensityBlock> propagate_blocks(std::span<const DensityBlock> initial, const ModelParams& params, double t,
                                           const EvolveSettings& settings) {
    std::vector<DensityBlock> out(initial.size());
    const double times[1] = {t};
    parallel_for(initial.size(), settings.threads, [&](std::size_t j) {
        const auto& b0 = initial[j];
        out[j] = {b0.n, b0.n_prime, {}};
        evolve_one(b0, params, std::span<const double>(times, 1), settings,
                   [&](double, const BlockOperator&, const cplx* r) { out[j].coeffs = unvectorize(r, b0.n, b0.n_prime); });
    });
    return out;
}

ObservableSeries evolve_blocks(std::span<const DensityBlock> initial, const ModelParams& params, double t_end,
                               double sample_dt, const EvolveSettings& settings) {
    params.validate();
    if (!params.n_total) {
        throw ConfigError("evolve_blocks needs n_total for the observable scaling");
    }
    if (!(t_end > 0.0) || !(sample_dt > 0.0)) {
        throw ConfigError("t_end and sample_dt must be positive");
    }
    std::map<std::pair<int, int>, std::size_t> present;
    for (std::size_t j = 0; j < initial.size(); ++j) {
        const auto& b = initial[j];
        if (b.coeffs.rows() != b.n + 1 || b.coeffs.cols() != b.n_prime + 1) {
            throw ConfigError("density block shape does not match its sector labels");
        }
        present[{b.n, b.n_prime}] = j;
    }
    bool any_diag = false;
    bool any_lower = false;
    for (const auto& [key, j] : present) {
        any_diag = any_diag || key.first == key.second;
        any_lower = any_lower || key.first == key.second + 1;
    }
    if (settings.quadratures && !any_lower) {
        throw MissingSectorError("quadrature observables need (N, N-1) blocks");
    }
    if (settings.populations && !any_diag) {
        throw MissingSectorError("population observables need (N, N) blocks");
    }
    // Every (M, M-1) block needs its neighbours' diagonal blocks for a consistent state.
    if (settings.quadratures) {
        for (const auto& [key, j] : present) {
            if (key.first == key.second + 1 && (!present.count({key.first, key.first}) ||
                                                 !present.count({key.second, key.second}))) {
                throw MissingSectorError("coherence block without both diagonal neighbours");
            }
        }
    }

    const auto n_samples = static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / sample_dt - 1e-9)));
    std::vector<double> grid(n_samples + 1);
    for (std::size_t i = 0; i <= n_samples; ++i) grid[i] = t_end * static_cast<double>(i) / static_cast<double>(n_samples);

    // Per-block sampled contributions to each observable.
    struct Contrib {
        std::vector<cplx> a, b;
        std::vector<double> na, nb, tr;
    };
    std::vector<Contrib> contrib(initial.size());
    parallel_for(initial.size(), settings.threads, [&](std::size_t j) {
        const auto& b0 = initial[j];
        const bool diag = b0.n == b0.n_prime;
        const bool lower = b0.n == b0.n_prime + 1;
        if (!diag && !lower) {
            return;
        }
        Contrib& c = contrib[j];
        const int m = b0.n;
        evolve_one(b0, params, grid, settings, [&](double, const BlockOperator& op, const cplx* r) {
            if (diag) {
                double na = 0.0;
                double tr = 0.0;
                for (int k = 0; k <= m; ++k) {
                    const double p = r[op.index(k, k)].real();
                    na += k * p;
                    tr += p;
                }
                c.na.push_back(na);
                c.nb.push_back(m * tr - na);
                c.tr.push_back(tr);
            } else {
                cplx ea = 0.0;
                cplx eb = 0.0;
                for (int k = 1; k <= m; ++k) ea += std::sqrt(static_cast<double>(k)) * r[op.index(k, k - 1)];
                for (int k = 0; k <= m - 1; ++k) eb += std::sqrt(static_cast<double>(m - k)) * r[op.index(k, k)];
                c.a.push_back(ea);
                c.b.push_back(eb);
            }
        });
    });

    ObservableSeries out;
    out.times = grid;
    out.n_scale = *params.n_total;
    out.has_quadratures = settings.quadratures;
    out.has_populations = settings.populations;
    const double norm = 2.0 / std::sqrt(static_cast<double>(*params.n_total));
    const std::size_t ns = grid.size();
    std::vector<cplx> ea(ns, 0.0);
    std::vector<cplx> eb(ns, 0.0);
    std::vector<double> na(ns, 0.0);
    std::vector<double> nb(ns, 0.0);
    std::vector<double> tr(ns, 0.0);
    for (const auto& c : contrib) {
        for (std::size_t i = 0; i < c.a.size(); ++i) {
            ea[i] += c.a[i];
            eb[i] += c.b[i];
        }
        for (std::size_t i = 0; i < c.na.size(); ++i) {
            na[i] += c.na[i];
            nb[i] += c.nb[i];
            tr[i] += c.tr[i];
        }
    }
    out.trace = tr;
    if (settings.quadratures) {
        for (std::size_t i = 0; i < ns; ++i) {
            out.x_a.push_back(norm * ea[i].real());
            out.p_a.push_back(norm * ea[i].imag());
            out.x_b.push_back(norm * eb[i].real());
            out.p_b.push_back(norm * eb[i].imag());
        }
    }
    if (settings.populations) {
        out.n_a = na;
        out.n_b = nb;
    }
    return out;
}

std::vector<DensityBlock> coherent_initial_blocks(int n_total, std::complex<double> alpha, std::complex<double> beta,
                                                  int halfwidth) {
    if (n_total < 1 || halfwidth < 0) {
        throw ParameterDomainError("coherent_initial_blocks: need N >= 1 and halfwidth >= 0");
    }
    const double s = std::sqrt(0.5 * n_total);
    const cplx ca = alpha * s;
    const cplx cb = beta * s;
    const int lo = std::max(0, n_total - halfwidth);
    const int hi = n_total + halfwidth;
    std::map<int, VectorXcd> amps;
    double total = 0.0;
    for (int m = lo; m <= hi; ++m) {
        VectorXcd c(m + 1);
        for (int k = 0; k <= m; ++k) {
            // A^k B^(m-k) / sqrt(k! (m-k)!), the common Gaussian factor dropped by renormalization.
            const double logmag = (k > 0 ? k * std::log(std::abs(ca)) : 0.0) +
                                  (m - k > 0 ? (m - k) * std::log(std::abs(cb)) : 0.0) -
                                  0.5 * (std::lgamma(k + 1.0) + std::lgamma(m - k + 1.0));
            const double phase = k * std::arg(ca) + (m - k) * std::arg(cb);
            const bool zero = (k > 0 && std::abs(ca) == 0.0) || (m - k > 0 && std::abs(cb) == 0.0);
            c(k) = zero ? cplx(0.0) : std::polar(std::exp(logmag), phase);
        }
        // exp(-(|A|^2+|B|^2)/2) is common to all sectors; Poisson weights come from the coefficients.
        total += c.squaredNorm();
        amps[m] = c;
    }
    if (!(total > 0.0)) {
        throw NumericalError("coherent projection has zero weight in the selected sectors");
    }
    const double inv = 1.0 / std::sqrt(total);
    for (auto& [m, c] : amps) c *= inv;

    std::vector<DensityBlock> out;
    for (int m = lo; m <= hi; ++m) {
        out.push_back({m, m, amps[m] * amps[m].adjoint()});
        if (m - 1 >= lo) {
            out.push_back({m, m - 1, amps[m] * amps[m - 1].adjoint()});
        }
    }
    return out;
}

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
    // Hungarian algorithm with potentials, O(n^3).
    const int n = static_cast<int>(cost.rows());
    if (cost.cols() != n) {
        throw ConfigError("assignment cost matrix must be square");
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> assign(n, -1);
    for (int j = 1; j <= n; ++j) {
        if (p[j] > 0) assign[p[j] - 1] = j - 1;
    }
    return assign;
}

SpinEquivalence spin_equivalence_check(const ModelParams& params, int n) {
    ModelParams p = params;
    p.n_total = n;
    const BlockOperator block = build_block(p, n, n);
    const auto boson = dense_eigen(MatrixXcd(block.matrix), false).values;
    const auto spin = dense_eigen(build_spin_liouvillian(SpinParams::from_model(params, n)), false).values;
    if (boson.size() != spin.size()) {
        throw NumericalError("boson and spin generators differ in dimension");
    }
    const auto d = static_cast<int>(boson.size());
    Eigen::MatrixXd cost(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) cost(i, j) = std::abs(boson(i) - spin(j));
    }
    const auto match = min_cost_assignment(cost);
    SpinEquivalence out;
    for (int i = 0; i < d; ++i) out.mismatch = std::max(out.mismatch, cost(i, match[i]));
    for (int i = 0; i < d && !out.ambiguous; ++i) {
        for (int j = i + 1; j < d; ++j) {
            if (std::abs(boson(i) - boson(j)) < 1e-8) {
                out.ambiguous = true;
                break;
            }
        }
    }
    return out;
}

}  // namespace bhd
