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

#include <optional>
#include <span>
#include <vector>

namespace bhd {

struct FourierPeak {
    double frequency;  // angular
    double power;
};

struct FourierPeaks {
    std::vector<FourierPeak> peaks;  // sorted by power, descending
    double resolution = 0.0;         // 2 pi / window length
    std::size_t window_samples = 0;
};

struct PeakSettings {
    double relative_floor = 1e-4;
    std::optional<double> lowest_expected_frequency;
    double min_periods = 8.0;
};

/// Hann-windowed power spectrum of a uniformly sampled series after dropping
/// the leading `transient_fraction`. The mean is removed before the transform.
FourierPeaks fourier_peaks(std::span<const double> series, double dt, double transient_fraction,
                           const PeakSettings& settings = {});

/// One-sided power |X_k|^2 of the Hann-windowed, mean-removed series.
std::vector<double> hann_power_spectrum(std::span<const double> series);

/// Hann-weighted mean, normalized by the sum of weights.
double hann_mean(std::span<const double> series);

}  // namespace bhd
