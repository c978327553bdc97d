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

#include <span>
#include <vector>

#include "bhdimer/fluctuations.hpp"

namespace bhd {

enum class LogBase { Two, E };

struct SymplecticSpectrum {
    double nu_minus;
    double nu_plus;
};

/// Moduli of the eigenvalues of iJ sigma, ascending. With partial_transpose the
/// sign of p_b is flipped first. Vacuum gives (1, 1).
SymplecticSpectrum symplectic_eigenvalues(const Mat4& sigma, bool partial_transpose);

double logarithmic_negativity(const Mat4& sigma, LogBase base = LogBase::Two);

/// Local symplectic reduction to [[a I, diag(c+, c-)], [diag(c+, c-), b I]].
Mat4 standard_form(const Mat4& sigma);

struct DiscordResult {
    double discord = 0.0;
    double classical = 0.0;
    double mutual_information = 0.0;
};

/// Gaussian discord with Gaussian measurements on mode b.
DiscordResult gaussian_discord(const Mat4& sigma, LogBase base = LogBase::Two);

/// Conditional-entropy argument used by the discord: min over pure single-mode
/// Gaussian measurements on b of det(alpha - gamma (beta + sigma_m)^-1 gamma^T).
double minimal_conditional_determinant(const Mat4& sigma);

/// Von Neumann entropy of a Gaussian mode with symplectic eigenvalue nu.
double gaussian_entropy(double nu, LogBase base = LogBase::Two);

struct CorrelationReport {
    double log_negativity = 0.0;
    double discord = 0.0;
    double classical = 0.0;
    SymplecticSpectrum nu{1.0, 1.0};
    SymplecticSpectrum nu_pt{1.0, 1.0};
};

CorrelationReport correlation_report(const Mat4& sigma, LogBase base = LogBase::Two);

std::vector<CorrelationReport> correlation_series(std::span<const Mat4> sigmas, LogBase base = LogBase::Two,
                                                  int threads = 1);

/// Arithmetic mean over samples with t in [t_lo, t_hi].
CorrelationReport time_average(std::span<const double> times, std::span<const CorrelationReport> series, double t_lo,
                               double t_hi);

}  // namespace bhd
