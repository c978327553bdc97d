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

#include "bhdimer/correlations.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bhdimer/errors.hpp"
#include "bhdimer/parallel.hpp"

namespace bhd {

namespace {

constexpr double kNuUnitTol = 1e-12;

using Mat2 = Eigen::Matrix2d;

void require_symmetric(const Mat4& s) {
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw ConfigError("covariance matrix is not symmetric");
    }
}

double log_in(double x, LogBase base) { return base == LogBase::Two ? std::log2(x) : std::log(x); }

// x log x with the 0 log 0 = 0 limit.
double xlogx(double x, LogBase base) { return x <= 0.0 ? 0.0 : x * log_in(x, base); }

Mat2 inv_sqrt(const Mat2& m) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(m);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw NumericalError("local covariance block is not positive definite");
    }
    return es.operatorInverseSqrt();
}

}  // namespace

SymplecticSpectrum symplectic_eigenvalues(const Mat4& sigma, bool partial_transpose) {
    require_symmetric(sigma);
    Mat4 s = sigma;
    if (partial_transpose) {
        s.row(3) *= -1.0;
        s.col(3) *= -1.0;
    }
    // Eigenvalues of the Hermitian sqrt(s) iJ sqrt(s) are +-nu.
    Eigen::SelfAdjointEigenSolver<Mat4> es(s);
    const Eigen::Vector4d root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Mat4 r = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
    const std::complex<double> i(0.0, 1.0);
    CMat4 h = i * (r * symplectic_form() * r).cast<std::complex<double>>();
    h = (0.5 * (h + h.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<CMat4> eh(h, Eigen::EigenvaluesOnly);
    const auto& v = eh.eigenvalues();
    return {std::max(0.0, 0.5 * (v(2) - v(1))), std::max(0.0, 0.5 * (v(3) - v(0)))};
}

double logarithmic_negativity(const Mat4& sigma, LogBase base) {
    const auto nu = symplectic_eigenvalues(sigma, true);
    if (nu.nu_minus >= 1.0 - kNuUnitTol) {
        return 0.0;
    }
    if (nu.nu_minus <= 0.0) {
        throw NumericalError("partially transposed covariance has a vanishing symplectic eigenvalue");
    }
    return -log_in(nu.nu_minus, base);
}

Mat4 standard_form(const Mat4& sigma) {
    require_symmetric(sigma);
    const Mat2 a = sigma.topLeftCorner<2, 2>();
    const Mat2 b = sigma.bottomRightCorner<2, 2>();
    const Mat2 c = sigma.topRightCorner<2, 2>();
    const Mat2 ta = std::sqrt(std::sqrt(a.determinant())) * inv_sqrt(a);
    const Mat2 tb = std::sqrt(std::sqrt(b.determinant())) * inv_sqrt(b);
    const Mat2 cp = ta * c * tb.transpose();
    Eigen::JacobiSVD<Mat2> svd(cp, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat2 uu = svd.matrixU();
    Mat2 vv = svd.matrixV();
    Eigen::Vector2d s = svd.singularValues();
    if (uu.determinant() < 0.0) {
        uu.col(1) *= -1.0;
        s(1) *= -1.0;
    }
    if (vv.determinant() < 0.0) {
        vv.col(1) *= -1.0;
        s(1) *= -1.0;
    }
    Mat4 out = Mat4::Zero();
    out(0, 0) = out(1, 1) = std::sqrt(a.determinant());
    out(2, 2) = out(3, 3) = std::sqrt(b.determinant());
    out(0, 2) = out(2, 0) = s(0);
    out(1, 3) = out(3, 1) = s(1);
    return out;
}

double gaussian_entropy(double nu, LogBase base) {
    const double x = std::max(nu, 1.0);
    return xlogx(0.5 * (x + 1.0), base) - xlogx(0.5 * (x - 1.0), base);
}

double minimal_conditional_determinant(const Mat4& sigma) {
    const Mat4 sf = standard_form(sigma);
    const double aa = sf(0, 0) * sf(0, 0);
    const double bb = sf(2, 2) * sf(2, 2);
    const double cc = sf(0, 2) * sf(1, 3);
    const double dd = sf.determinant();
    if (std::abs(cc) < 1e-14 * std::max(1.0, aa) || std::abs(bb - 1.0) < 1e-12) {
        return aa;
    }
    const double lhs = (dd - aa * bb) * (dd - aa * bb);
    const double rhs = (1.0 + bb) * cc * cc * (aa + dd);
    if (lhs <= rhs) {
        const double inner = std::max(0.0, cc * cc + (bb - 1.0) * (dd - aa));
        return (2.0 * cc * cc + (bb - 1.0) * (dd - aa) + 2.0 * std::abs(cc) * std::sqrt(inner)) /
               ((bb - 1.0) * (bb - 1.0));
    }
    const double inner = std::max(0.0, cc * cc * cc * cc + (dd - aa * bb) * (dd - aa * bb) - 2.0 * cc * cc * (aa * bb + dd));
    return (aa * bb - cc * cc + dd - std::sqrt(inner)) / (2.0 * bb);
}

DiscordResult gaussian_discord(const Mat4& sigma, LogBase base) {
    const auto nu = symplectic_eigenvalues(sigma, false);
    if (nu.nu_minus < 1.0 - 1e-9) {
        throw ParameterDomainError("gaussian_discord: covariance is not physical");
    }
    const double aa = sigma.topLeftCorner<2, 2>().determinant();
    const double bb = sigma.bottomRightCorner<2, 2>().determinant();
    const double emin = std::max(1.0, minimal_conditional_determinant(sigma));
    DiscordResult r;
    r.mutual_information = gaussian_entropy(std::sqrt(aa), base) + gaussian_entropy(std::sqrt(bb), base) -
                           gaussian_entropy(nu.nu_minus, base) - gaussian_entropy(nu.nu_plus, base);
    r.classical = gaussian_entropy(std::sqrt(aa), base) - gaussian_entropy(std::sqrt(emin), base);
    r.discord = r.mutual_information - r.classical;
    r.mutual_information = std::max(0.0, r.mutual_information);
    r.classical = std::max(0.0, r.classical);
    r.discord = std::max(0.0, r.discord);
    return r;
}

CorrelationReport correlation_report(const Mat4& sigma, LogBase base) {
    CorrelationReport r;
    r.nu = symplectic_eigenvalues(sigma, false);
    r.nu_pt = symplectic_eigenvalues(sigma, true);
    r.log_negativity = logarithmic_negativity(sigma, base);
    const auto d = gaussian_discord(sigma, base);
    r.discord = d.discord;
    r.classical = d.classical;
    return r;
}

std::vector<CorrelationReport> correlation_series(std::span<const Mat4> sigmas, LogBase base, int threads) {
    std::vector<CorrelationReport> out(sigmas.size());
    parallel_for(sigmas.size(), threads, [&](std::size_t i) { out[i] = correlation_report(sigmas[i], base); });
    return out;
}

CorrelationReport time_average(std::span<const double> times, std::span<const CorrelationReport> series, double t_lo,
                               double t_hi) {
    if (times.size() != series.size()) {
        throw ConfigError("time_average: times and series differ in length");
    }
    if (series.empty()) {
        throw EmptyInputError("time_average: empty series");
    }
    if (t_lo > t_hi || t_hi < times.front() || t_lo > times.back()) {
        throw EmptyInputError("time_average: window outside the time span");
    }
    CorrelationReport acc;
    acc.nu = {0.0, 0.0};
    acc.nu_pt = {0.0, 0.0};
    std::size_t count = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) {
            continue;
        }
        const auto& r = series[i];
        acc.log_negativity += r.log_negativity;
        acc.discord += r.discord;
        acc.classical += r.classical;
        acc.nu.nu_minus += r.nu.nu_minus;
        acc.nu.nu_plus += r.nu.nu_plus;
        acc.nu_pt.nu_minus += r.nu_pt.nu_minus;
        acc.nu_pt.nu_plus += r.nu_pt.nu_plus;
        ++count;
    }
    if (count == 0) {
        throw EmptyInputError("time_average: no samples in window");
    }
    const double inv = 1.0 / static_cast<double>(count);
    acc.log_negativity *= inv;
    acc.discord *= inv;
    acc.classical *= inv;
    acc.nu.nu_minus *= inv;
    acc.nu.nu_plus *= inv;
    acc.nu_pt.nu_minus *= inv;
    acc.nu_pt.nu_plus *= inv;
    return acc;
}

}  // namespace bhd
