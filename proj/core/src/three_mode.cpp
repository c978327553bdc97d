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

#include "bhdimer/three_mode.hpp"

#include <cmath>
#include <complex>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "bhdimer/errors.hpp"

namespace bhd {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using cd = std::complex<double>;

// Row-major vectorized Lindbladian.
MatrixXcd lindbladian(const MatrixXcd& h, const std::vector<MatrixXcd>& jumps) {
    const auto d = h.rows();
    const MatrixXcd id = MatrixXcd::Identity(d, d);
    const cd i(0.0, 1.0);
    MatrixXcd l = -i * (Eigen::kroneckerProduct(h, id).eval() - Eigen::kroneckerProduct(id, h.transpose()).eval());
    for (const auto& j : jumps) {
        const MatrixXcd jdj = j.adjoint() * j;
        l += Eigen::kroneckerProduct(j, j.conjugate()).eval() - 0.5 * Eigen::kroneckerProduct(jdj, id).eval() -
             0.5 * Eigen::kroneckerProduct(id, jdj.transpose()).eval();
    }
    return l;
}

MatrixXcd as_matrix(const VectorXcd& v, Eigen::Index d) {
    MatrixXcd m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) m(r, c) = v(r * d + c);
    }
    return m;
}

VectorXcd as_vector(const MatrixXcd& m) {
    const auto d = m.rows();
    VectorXcd v(d * d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) v(r * d + c) = m(r, c);
    }
    return v;
}

double trace_distance(const MatrixXcd& a, const MatrixXcd& b) {
    const MatrixXcd diff = 0.5 * ((a - b) + (a - b).adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

std::pair<double, double> couplings_for_ratio(double kappa, double ratio) {
    if (!(kappa > 0.0) || !(ratio > 0.0)) {
        throw ParameterDomainError("couplings_for_ratio needs positive kappa and ratio");
    }
    // 4 g^2 / gamma = kappa with gamma = ratio * g.
    const double g = kappa * ratio / 4.0;
    return {g, ratio * g};
}

ThreeModeResult three_mode_oracle(const ModelParams& params, double g, double gamma, int cutoff_c, double t_end,
                                  double sample_dt, const ThreeModeLimits& limits) {
    if (!params.n_total) {
        throw ConfigError("three_mode_oracle needs n_total");
    }
    const int n = *params.n_total;
    if (n < 1 || n > limits.max_n || cutoff_c < 1 || cutoff_c > limits.max_cutoff) {
        throw DimensionError("three-mode oracle limited to small N and mode-c cutoff");
    }
    if (g < 0.0 || !(gamma > 0.0) || params.omega < 0.0 || params.u < 0.0 || params.n_th < 0.0) {
        throw ParameterDomainError("three_mode_oracle: invalid couplings");
    }
    if (!(t_end > 0.0) || !(sample_dt > 0.0)) {
        throw ConfigError("three_mode_oracle: t_end and sample_dt must be positive");
    }
    const int dab = n + 1;
    const int dc = cutoff_c + 1;
    MatrixXcd hop = MatrixXcd::Zero(dab, dab);  // a^dag b, raises N_a
    MatrixXcd na = MatrixXcd::Zero(dab, dab);
    MatrixXcd nb = MatrixXcd::Zero(dab, dab);
    for (int k = 0; k <= n; ++k) {
        na(k, k) = k;
        nb(k, k) = n - k;
        if (k < n) hop(k + 1, k) = std::sqrt(static_cast<double>((k + 1) * (n - k)));
    }
    MatrixXcd c = MatrixXcd::Zero(dc, dc);
    for (int k = 1; k < dc; ++k) c(k - 1, k) = std::sqrt(static_cast<double>(k));
    const MatrixXcd iab = MatrixXcd::Identity(dab, dab);
    const MatrixXcd ic = MatrixXcd::Identity(dc, dc);

    const MatrixXcd hab = 0.5 * params.omega * (hop + hop.adjoint()) +
                          (2.0 * params.u / n) * (na * (na - iab) + nb * (nb - iab));
    const double gt = g / std::sqrt(0.5 * n);
    const MatrixXcd h3 = Eigen::kroneckerProduct(hab, ic).eval() +
                         gt * (Eigen::kroneckerProduct(hop, c).eval() + Eigen::kroneckerProduct(hop.adjoint(), c.adjoint()).eval());
    std::vector<MatrixXcd> j3;
    j3.push_back(std::sqrt(gamma * (1.0 + params.n_th)) * Eigen::kroneckerProduct(iab, c).eval());
    if (params.n_th > 0.0) {
        j3.push_back(std::sqrt(gamma * params.n_th) * Eigen::kroneckerProduct(iab, c.adjoint()).eval());
    }
    const MatrixXcd l3 = lindbladian(h3, j3);

    ThreeModeResult res;
    res.kappa_effective = 4.0 * g * g / gamma;
    std::vector<MatrixXcd> je;
    if (res.kappa_effective > 0.0) {
        je.push_back(std::sqrt(2.0 * res.kappa_effective * (1.0 + params.n_th) / n) * hop.adjoint());
        if (params.n_th > 0.0) {
            je.push_back(std::sqrt(2.0 * res.kappa_effective * params.n_th / n) * hop);
        }
    }
    const MatrixXcd le = lindbladian(hab, je);

    MatrixXcd rab0 = MatrixXcd::Zero(dab, dab);
    rab0(n, n) = 1.0;
    MatrixXcd rc0 = MatrixXcd::Zero(dc, dc);
    double zc = 0.0;
    for (int k = 0; k < dc; ++k) {
        const double p = std::pow(params.n_th, k) / std::pow(1.0 + params.n_th, k + 1);
        rc0(k, k) = p;
        zc += p;
    }
    rc0 /= zc;
    VectorXcd x = as_vector(Eigen::kroneckerProduct(rab0, rc0).eval());
    VectorXcd y = as_vector(rab0);

    const auto steps = static_cast<int>(std::max(1.0, std::ceil(t_end / sample_dt - 1e-9)));
    const double dt = t_end / steps;
    const MatrixXcd e3 = (l3 * dt).exp();
    const MatrixXcd ee = (le * dt).exp();

    auto record = [&](double t) {
        const MatrixXcd r3 = as_matrix(x, dab * dc);
        MatrixXcd rab = MatrixXcd::Zero(dab, dab);
        MatrixXcd rc = MatrixXcd::Zero(dc, dc);
        for (int a1 = 0; a1 < dab; ++a1) {
            for (int a2 = 0; a2 < dab; ++a2) {
                for (int k = 0; k < dc; ++k) rab(a1, a2) += r3(a1 * dc + k, a2 * dc + k);
            }
        }
        for (int k1 = 0; k1 < dc; ++k1) {
            for (int k2 = 0; k2 < dc; ++k2) {
                for (int a = 0; a < dab; ++a) rc(k1, k2) += r3(a * dc + k1, a * dc + k2);
            }
        }
        const MatrixXcd re = as_matrix(y, dab);
        res.times.push_back(t);
        const double td = trace_distance(rab, re);
        res.trace_distance.push_back(td);
        res.max_trace_distance = std::max(res.max_trace_distance, td);
        res.n_a_full.push_back((na * rab).trace().real());
        res.n_a_effective.push_back((na * re).trace().real());
        res.max_cutoff_population = std::max(res.max_cutoff_population, rc(dc - 1, dc - 1).real());
    };
    record(0.0);
    for (int s = 1; s <= steps; ++s) {
        x = e3 * x;
        y = ee * y;
        record(s * dt);
    }
    res.leakage_warning = res.max_cutoff_population > 1e-6;
    return res;
}

RateFit fit_effective_rates(double n_th, double g, double gamma, int cutoff_c, double t_end) {
    ModelParams p;
    p.omega = 0.0;
    p.u = 0.0;
    p.n_th = n_th;
    p.n_total = 1;
    const auto r = three_mode_oracle(p, g, gamma, cutoff_c, t_end, t_end / 400.0);
    const std::size_t ns = r.times.size();
    const std::size_t tail = std::max<std::size_t>(1, ns / 10);
    double p_inf = 0.0;
    for (std::size_t i = ns - tail; i < ns; ++i) p_inf += r.n_a_full[i];
    p_inf /= static_cast<double>(tail);

    // Log-linear regression of |p - p_inf| over the part of the decay well above the floor.
    const double p0 = r.n_a_full.front();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int cnt = 0;
    for (std::size_t i = 0; i < ns; ++i) {
        const double dev = std::abs(r.n_a_full[i] - p_inf);
        if (dev < 1e-3 * std::abs(p0 - p_inf) || r.times[i] < 0.2 * t_end / 10.0) continue;
        const double yv = std::log(dev);
        sx += r.times[i];
        sy += yv;
        sxx += r.times[i] * r.times[i];
        sxy += r.times[i] * yv;
        ++cnt;
    }
    if (cnt < 3) {
        throw InsufficientDataError("rate fit: not enough decay samples");
    }
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    const double total = -slope;
    RateFit fit;
    fit.gamma_l = total * p_inf;
    fit.gamma_r = total * (1.0 - p_inf);
    return fit;
}

}  // namespace bhd
