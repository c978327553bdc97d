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

#include "property_suites.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "bhdimer/correlations.hpp"
#include "bhdimer/liouvillian.hpp"

namespace props {

using namespace bhd;

ModelParams Gen::params(double n_th_max) {
    ModelParams p;
    p.omega = uniform(0.0, 2.0);
    p.u = uniform(0.0, 0.5);
    p.n_th = uniform(0.0, n_th_max);
    return p;
}

MeanFieldState Gen::shell_state() {
    std::array<double, 4> v{};
    double n2 = 0.0;
    do {
        for (auto& x : v) x = normal();
        n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3];
    } while (n2 < 1e-6);
    const double s = std::sqrt(2.0 * Conventions::shell / n2);
    for (auto& x : v) x *= s;
    return MeanFieldState::from_array(v);
}

Mat4 Gen::symplectic(double scale) {
    Mat4 k;
    for (int r = 0; r < 4; ++r) {
        for (int c = r; c < 4; ++c) k(r, c) = k(c, r) = uniform(-scale, scale);
    }
    const Mat4 h = symplectic_form() * k;
    return h.exp();
}

Mat4 Gen::physical_covariance() {
    const Mat4 s = symplectic();
    const double n1 = uniform(1.0, 3.0);
    const double n2 = uniform(1.0, 3.0);
    const Eigen::Vector4d d(n1, n1, n2, n2);
    const Mat4 sigma = s * d.asDiagonal() * s.transpose();
    return 0.5 * (sigma + sigma.transpose());
}

Eigen::Matrix2d Gen::local_symplectic() {
    double a = 0.0;
    do {
        a = uniform(-2.0, 2.0);
    } while (std::abs(a) < 0.2);
    const double b = uniform(-2.0, 2.0);
    const double c = uniform(-2.0, 2.0);
    Eigen::Matrix2d m;
    m << a, b, c, (1.0 + b * c) / a;
    return m;
}

namespace {

template <class Check>
SuiteResult run_suite(const std::string& name, int instances, std::uint64_t seed, double threshold, Check&& check) {
    SuiteResult r{name, instances, 0, 0.0};
    Gen gen(seed);
    for (int i = 0; i < instances; ++i) {
        double v = 0.0;
        try {
            v = check(gen);
        } catch (const std::exception&) {
            v = std::numeric_limits<double>::infinity();
        }
        if (!(v <= threshold)) ++r.failures;
        r.worst = std::max(r.worst, std::isfinite(v) ? v : std::numeric_limits<double>::infinity());
    }
    return r;
}

double diff(const MeanFieldState& a, const MeanFieldState& b) {
    return std::max({std::abs(a.x_a - b.x_a), std::abs(a.p_a - b.p_a), std::abs(a.x_b - b.x_b),
                     std::abs(a.p_b - b.p_b)});
}

}  // namespace

SuiteResult shell_conservation(int instances, std::uint64_t seed) {
    return run_suite("shell conservation", instances, seed, 1e-7, [](Gen& g) {
        const auto p = g.params();
        IntegratorSettings is;
        is.sample_dt = 1.0;
        const auto traj = integrate_mf(g.shell_state(), p, 20.0, is);
        double worst = 0.0;
        for (const auto& s : traj.states) worst = std::max(worst, std::abs(s.shell() - Conventions::shell));
        return worst;
    });
}

SuiteResult pt_flow_invariance(int instances, std::uint64_t seed) {
    return run_suite("PT flow invariance", instances, seed, 1e-7, [](Gen& g) {
        const auto p = g.params();
        const auto s = g.shell_state();
        // Pointwise: f(T s) = -T f(s).
        const auto lhs = mf_rhs(pt_transform(s), p);
        const auto rhs = pt_transform(mf_rhs(s, p));
        const MeanFieldState neg{-rhs.x_a, -rhs.p_a, -rhs.x_b, -rhs.p_b};
        double worst = diff(lhs, neg);
        // Flow: evolving T s(t) forward by t returns T s(0).
        IntegratorSettings is;
        is.rel_tol = 1e-12;
        is.abs_tol = 1e-13;
        is.sample_dt = 1.0;
        const auto s1 = integrate_mf(s, p, 1.0, is).states.back();
        const auto back = integrate_mf(pt_transform(s1), p, 1.0, is).states.back();
        worst = std::max(worst, diff(back, pt_transform(s)));
        return worst;
    });
}

SuiteResult covariance_physicality(int instances, std::uint64_t seed) {
    return run_suite("covariance symmetry/physicality", instances, seed, 1e-8, [](Gen& g) {
        const auto p = g.params();
        const Mat4 sigma0 = g.integer(0, 1) ? Mat4(Mat4::Identity()) : g.physical_covariance();
        LyapunovSettings ls;
        ls.integrator.sample_dt = 0.5;
        const auto run = integrate_lyapunov(g.shell_state(), sigma0, p, 10.0, ls);
        double worst = 0.0;
        for (const auto& s : run.covariances.sigmas) {
            worst = std::max(worst, (s - s.transpose()).cwiseAbs().maxCoeff());
            worst = std::max(worst, -physicality_margin(s));
        }
        return worst;
    });
}

SuiteResult block_trace_preservation(int instances, std::uint64_t seed) {
    return run_suite("block trace preservation", instances, seed, 1e-12, [](Gen& g) {
        auto p = g.params();
        const int n = g.integer(1, 10);
        p.n_total = n;
        const auto block = build_block(p, n, n);
        const Eigen::MatrixXcd l(block.matrix);
        Eigen::RowVectorXcd t = Eigen::RowVectorXcd::Zero(l.cols());
        for (int a = 0; a <= n; ++a) t += l.row(block.index(a, a));
        return t.cwiseAbs().maxCoeff() / std::max(1.0, l.cwiseAbs().maxCoeff());
    });
}

SuiteResult spectrum_stability(int instances, std::uint64_t seed) {
    return run_suite("spectrum stability", instances, seed, 1e-10, [](Gen& g) {
        auto p = g.params();
        const int n = g.integer(1, 8);
        const int np = std::max(0, n - g.integer(0, 2));
        p.n_total = n;
        const auto spec = block_spectrum(build_block(p, n, np));
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& l : spec.eigenvalues) worst = std::max(worst, l.real());
        return worst;
    });
}

SuiteResult local_symplectic_invariance(int instances, std::uint64_t seed) {
    return run_suite("local symplectic invariance of eps", instances, seed, 1e-9, [](Gen& g) {
        const Mat4 sigma = g.physical_covariance();
        Mat4 local = Mat4::Zero();
        local.topLeftCorner<2, 2>() = g.local_symplectic();
        local.bottomRightCorner<2, 2>() = g.local_symplectic();
        Mat4 moved = local * sigma * local.transpose();
        moved = 0.5 * (moved + moved.transpose());
        const double e0 = logarithmic_negativity(sigma);
        const double e1 = logarithmic_negativity(moved);
        return std::abs(e0 - e1) / std::max(1.0, e0);
    });
}

std::vector<SuiteResult> run_all(int instances, std::uint64_t seed) {
    return {shell_conservation(instances, seed),          pt_flow_invariance(instances, seed + 1),
            covariance_physicality(instances, seed + 2),  block_trace_preservation(instances, seed + 3),
            spectrum_stability(instances, seed + 4),      local_symplectic_invariance(instances, seed + 5)};
}

}  // namespace props
