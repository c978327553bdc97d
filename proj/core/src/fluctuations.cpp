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

#include "bhdimer/fluctuations.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bhdimer/errors.hpp"
#include "ode.hpp"

namespace bhd {

Mat4 symplectic_form() {
    Mat4 j = Mat4::Zero();
    j(0, 1) = 1.0;
    j(1, 0) = -1.0;
    j(2, 3) = 1.0;
    j(3, 2) = -1.0;
    return j;
}

double physicality_margin(const Mat4& sigma) {
    const std::complex<double> i(0.0, 1.0);
    CMat4 h = sigma.cast<std::complex<double>>() + i * symplectic_form().cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<CMat4> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Mat4 FluctuationMatrices::noise() const { return noise_scale * (0.5 * (z_mat + z_mat.transpose())).real(); }

std::string to_string(NoiseNormalization n) {
    return n == NoiseNormalization::Consistent ? "consistent" : "printed";
}

NoiseNormalization noise_normalization_from_string(const std::string& s) {
    if (s == "consistent") return NoiseNormalization::Consistent;
    if (s == "printed") return NoiseNormalization::Printed;
    throw ConfigError("unknown noise normalization '" + s + "'");
}

FluctuationMatrices build_matrices(const MeanFieldState& s, const ModelParams& params,
                                   NoiseNormalization normalization) {
    const double xa = s.x_a;
    const double pa = s.p_a;
    const double xb = s.x_b;
    const double pb = s.p_b;
    const double ea = xa * xa + pa * pa;
    const double eb = xb * xb + pb * pb;
    const double u = params.u;
    const double om = params.omega;
    const double k = params.kappa;

    FluctuationMatrices m;
    m.a_mat << 2.0 * u * xa * pa, u * (ea + 2.0 * pa * pa), 0.0, 0.5 * om,
        -u * (ea + 2.0 * xa * xa), -2.0 * u * xa * pa, -0.5 * om, 0.0,
        0.0, 0.5 * om, 2.0 * u * xb * pb, u * (eb + 2.0 * pb * pb),
        -0.5 * om, 0.0, -u * (eb + 2.0 * xb * xb), -2.0 * u * xb * pb;

    m.q_mat << -eb, 0.0, -2.0 * xa * xb, -2.0 * xa * pb,
        0.0, -eb, -2.0 * pa * xb, -2.0 * pa * pb,
        2.0 * xa * xb, 2.0 * pa * xb, ea, 0.0,
        2.0 * xa * pb, 2.0 * pa * pb, 0.0, ea;
    m.q_mat *= 0.25 * k;

    using C = std::complex<double>;
    const C i(0.0, 1.0);
    const double d = pa * pb - xa * xb;
    const double e = xa * pb + xb * pa;
    m.z_mat << C(eb), i * eb, d - i * e, -i * d - e,
        -i * eb, C(eb), i * d - e, -d + i * e,
        d + i * e, -i * d - e, C(ea), -i * ea,
        i * d - e, -d - i * e, i * ea, C(ea);
    m.z_mat *= 0.25 * k * (2.0 * params.n_th + 1.0);
    m.noise_scale = normalization == NoiseNormalization::Consistent ? 2.0 : 1.0;
    return m;
}

Mat4 lyapunov_rhs(const Mat4& sigma, const FluctuationMatrices& m) {
    const Mat4 drift = m.drift();
    return drift * sigma + sigma * drift.transpose() + m.noise();
}

std::array<double, 10> pack_upper(const Mat4& m) {
    std::array<double, 10> v{};
    std::size_t n = 0;
    for (int r = 0; r < 4; ++r) {
        for (int c = r; c < 4; ++c) {
            v[n++] = m(r, c);
        }
    }
    return v;
}

Mat4 unpack_upper(std::span<const double> v) {
    if (v.size() != 10) {
        throw ConfigError("unpack_upper expects 10 entries");
    }
    Mat4 m;
    std::size_t n = 0;
    for (int r = 0; r < 4; ++r) {
        for (int c = r; c < 4; ++c) {
            m(r, c) = v[n];
            m(c, r) = v[n];
            ++n;
        }
    }
    return m;
}

LyapunovResult integrate_lyapunov_at(const MeanFieldState& state0, const Mat4& sigma0, const ModelParams& params,
                                     std::span<const double> sample_times, const LyapunovSettings& settings) {
    params.validate();
    if (sample_times.empty()) {
        throw EmptyInputError("integrate_lyapunov: no sample times");
    }
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (!(sample_times[i] >= 0.0) || (i > 0 && sample_times[i] < sample_times[i - 1])) {
            throw ConfigError("sample times must be non-negative and non-decreasing");
        }
    }
    if ((sigma0 - sigma0.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw ConfigError("initial covariance is not symmetric");
    }
    if (physicality_margin(sigma0) < -settings.physicality_tolerance) {
        throw ParameterDomainError("initial covariance violates the uncertainty principle");
    }
    if (std::abs(state0.shell() - Conventions::shell) > settings.integrator.shell_tolerance) {
        throw ParameterDomainError("initial mean-field state is off the shell");
    }

    using State = std::array<double, 14>;
    State x0{};
    const auto m0 = state0.as_array();
    const auto s0 = pack_upper(sigma0);
    std::copy(m0.begin(), m0.end(), x0.begin());
    std::copy(s0.begin(), s0.end(), x0.begin() + 4);

    auto rhs = [&params, &settings](const State& x, State& dx, double) {
        const MeanFieldState s{x[0], x[1], x[2], x[3]};
        const auto ds = mf_rhs(s, params).as_array();
        const Mat4 sigma = unpack_upper(std::span<const double>(x.data() + 4, 10));
        const auto dsig = pack_upper(lyapunov_rhs(sigma, build_matrices(s, params, settings.noise)));
        std::copy(ds.begin(), ds.end(), dx.begin());
        std::copy(dsig.begin(), dsig.end(), dx.begin() + 4);
    };

    LyapunovResult out;
    out.trajectory.params = params;
    out.trajectory.settings = settings.integrator;
    out.trajectory.default_initial_state = state0 == default_initial_state();
    detail::StepControl ctl;
    ctl.rel_tol = settings.integrator.rel_tol;
    ctl.abs_tol = settings.integrator.abs_tol;
    detail::integrate_sampled(rhs, x0, 0.0, sample_times, ctl, [&](double t, const State& x) {
        out.trajectory.times.push_back(t);
        out.trajectory.states.push_back({x[0], x[1], x[2], x[3]});
        const Mat4 sigma = unpack_upper(std::span<const double>(x.data() + 4, 10));
        out.covariances.times.push_back(t);
        out.covariances.sigmas.push_back(sigma);
        const double margin = physicality_margin(sigma);
        if (margin < -settings.physicality_tolerance) {
            out.covariances.warnings.push_back({t, margin});
        }
    });
    return out;
}

LyapunovResult integrate_lyapunov(const MeanFieldState& state0, const Mat4& sigma0, const ModelParams& params,
                                  double t_end, const LyapunovSettings& settings) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw ConfigError("t_end must be positive and finite");
    }
    if (!(settings.integrator.sample_dt > 0.0)) {
        throw ConfigError("sample_dt must be positive");
    }
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / settings.integrator.sample_dt - 1e-9)));
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        grid[i] = t_end * static_cast<double>(i) / static_cast<double>(n);
    }
    return integrate_lyapunov_at(state0, sigma0, params, grid, settings);
}

}  // namespace bhd
