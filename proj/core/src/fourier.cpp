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

#include "bhdimer/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "bhdimer/errors.hpp"

namespace bhd {

namespace {

// FFTW planning is not thread-safe.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

double hann(std::size_t i, std::size_t n) {
    if (n < 2) {
        return 1.0;
    }
    return 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
}

}  // namespace

double hann_mean(std::span<const double> series) {
    if (series.empty()) {
        throw EmptyInputError("hann_mean: empty series");
    }
    if (series.size() < 3) {
        double s = 0.0;
        for (double v : series) s += v;
        return s / static_cast<double>(series.size());
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double w = hann(i, series.size());
        num += w * series[i];
        den += w;
    }
    return num / den;
}

std::vector<double> hann_power_spectrum(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 16) {
        throw InsufficientDataError("spectrum needs at least 16 samples");
    }
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);

    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }
    for (std::size_t i = 0; i < n; ++i) {
        in[i] = (series[i] - mean) * hann(i, n);
    }
    fftw_execute(plan);
    std::vector<double> power(n / 2 + 1);
    for (std::size_t k = 0; k < power.size(); ++k) {
        power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    }
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return power;
}

FourierPeaks fourier_peaks(std::span<const double> series, double dt, double transient_fraction,
                           const PeakSettings& settings) {
    if (!(dt > 0.0)) {
        throw ConfigError("fourier_peaks: dt must be positive");
    }
    if (transient_fraction < 0.0 || transient_fraction >= 1.0) {
        throw ConfigError("fourier_peaks: transient fraction must lie in [0, 1)");
    }
    const auto skip = static_cast<std::size_t>(std::floor(transient_fraction * static_cast<double>(series.size())));
    auto tail = series.subspan(skip);
    const double window = dt * static_cast<double>(tail.size());
    if (tail.size() < 16) {
        throw InsufficientDataError("fourier_peaks: series too short");
    }
    if (settings.lowest_expected_frequency) {
        const double periods = window * *settings.lowest_expected_frequency / (2.0 * std::numbers::pi);
        if (periods < settings.min_periods) {
            throw InsufficientDataError("fourier_peaks: window covers fewer than the required periods");
        }
    }

    const auto power = hann_power_spectrum(tail);
    const double dw = 2.0 * std::numbers::pi / window;
    double pmax = 0.0;
    for (std::size_t k = 1; k < power.size(); ++k) pmax = std::max(pmax, power[k]);

    FourierPeaks result;
    result.resolution = dw;
    result.window_samples = tail.size();
    if (pmax <= 0.0) {
        return result;
    }
    const double floor = settings.relative_floor * pmax;
    for (std::size_t k = 1; k + 1 < power.size(); ++k) {
        const double p = power[k];
        if (p < floor || !(p > power[k - 1]) || p < power[k + 1]) {
            continue;
        }
        // Parabolic fit on log power.
        double delta = 0.0;
        double peak_power = p;
        if (power[k - 1] > 0.0 && power[k + 1] > 0.0) {
            const double l0 = std::log(power[k - 1]);
            const double l1 = std::log(p);
            const double l2 = std::log(power[k + 1]);
            const double denom = l0 - 2.0 * l1 + l2;
            if (denom < 0.0) {
                delta = std::clamp(0.5 * (l0 - l2) / denom, -0.5, 0.5);
                peak_power = std::exp(l1 - 0.25 * (l0 - l2) * delta);
            }
        }
        result.peaks.push_back({(static_cast<double>(k) + delta) * dw, peak_power});
    }
    std::sort(result.peaks.begin(), result.peaks.end(),
              [](const FourierPeak& a, const FourierPeak& b) { return a.power > b.power; });
    return result;
}

}  // namespace bhd
