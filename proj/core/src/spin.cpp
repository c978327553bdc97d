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

#include "bhdimer/spin.hpp"

#include <cmath>
#include <complex>

#include <unsupported/Eigen/KroneckerProduct>

#include "bhdimer/errors.hpp"

namespace bhd {

SpinParams SpinParams::from_model(const ModelParams& params, int n_total) {
    params.validate();
    if (n_total < 1) {
        throw ParameterDomainError("spin model needs N >= 1");
    }
    return {0.5 * n_total, params.omega, params.u, params.kappa, params.n_th};
}

int SpinParams::two_s() const {
    const double t = 2.0 * s;
    const long r = std::lround(t);
    if (r < 1 || std::abs(t - static_cast<double>(r)) > 1e-12) {
        throw ParameterDomainError("2S must be a positive integer");
    }
    return static_cast<int>(r);
}

Eigen::MatrixXd spin_sz(int two_s) {
    const int d = two_s + 1;
    Eigen::MatrixXd sz = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        sz(k, k) = k - 0.5 * two_s;
    }
    return sz;
}

Eigen::MatrixXd spin_splus(int two_s) {
    const int d = two_s + 1;
    Eigen::MatrixXd sp = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k + 1 < d; ++k) {
        sp(k + 1, k) = std::sqrt(static_cast<double>((two_s - k) * (k + 1)));
    }
    return sp;
}

Eigen::MatrixXcd build_spin_liouvillian(const SpinParams& params, int max_two_s) {
    if (params.kappa <= 0.0 || params.omega < 0.0 || params.u < 0.0 || params.n_th < 0.0) {
        throw ParameterDomainError("invalid spin-model couplings");
    }
    const int two_s = params.two_s();
    if (two_s > max_two_s) {
        throw DimensionError("spin generator exceeds the configured size cap");
    }
    const int d = two_s + 1;
    const double s = params.s;
    using Eigen::MatrixXcd;
    const MatrixXcd sz = spin_sz(two_s).cast<std::complex<double>>();
    const MatrixXcd sp = spin_splus(two_s).cast<std::complex<double>>();
    const MatrixXcd sm = sp.adjoint();
    const MatrixXcd id = MatrixXcd::Identity(d, d);

    const MatrixXcd h = params.omega * 0.5 * (sp + sm) + (2.0 * params.u / s) * (sz * sz + (s * s - s) * id);
    const std::complex<double> i(0.0, 1.0);
    MatrixXcd l = -i * (Eigen::kroneckerProduct(h, id).eval() - Eigen::kroneckerProduct(id, h.transpose()).eval());

    auto dissipator = [&](const MatrixXcd& j, double rate) {
        if (rate == 0.0) {
            return;
        }
        const MatrixXcd jdj = j.adjoint() * j;
        l += rate * (Eigen::kroneckerProduct(j, j.conjugate()).eval() - 0.5 * Eigen::kroneckerProduct(jdj, id).eval() -
                     0.5 * Eigen::kroneckerProduct(id, jdj.transpose()).eval());
    };
    dissipator(sm, params.kappa * (1.0 + params.n_th) / s);
    dissipator(sp, params.kappa * params.n_th / s);
    return l;
}

SpinObservables spin_observables_from_bosonic(const Trajectory& traj) {
    SpinObservables out;
    out.times = traj.times;
    out.m_x.reserve(traj.size());
    out.m_y.reserve(traj.size());
    out.m_z.reserve(traj.size());
    for (const auto& st : traj.states) {
        const auto a = st.alpha();
        const auto b = st.beta();
        const auto c = std::conj(a) * b;
        out.m_x.push_back(c.real());
        out.m_y.push_back(c.imag());
        out.m_z.push_back(0.5 * (std::norm(a) - std::norm(b)));
    }
    return out;
}

}  // namespace bhd
