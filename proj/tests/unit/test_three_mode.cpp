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


#include <gtest/gtest.h>

#include <cmath>

#include "bhdimer/errors.hpp"
#include "bhdimer/three_mode.hpp"

namespace bhd {
namespace {

TEST(ThreeMode, CouplingsForRatio) {
    const auto [g, gamma] = couplings_for_ratio(1.0, 30.0);
    EXPECT_NEAR(4.0 * g * g / gamma, 1.0, 1e-14);
    EXPECT_NEAR(gamma / g, 30.0, 1e-12);
}

TEST(ThreeMode, DecoupledCavityIsExact) {
    ModelParams p;
    p.omega = 1.2;
    p.u = 0.3;
    p.n_total = 2;
    const auto r = three_mode_oracle(p, 0.0, 5.0, 3, 3.0);
    EXPECT_DOUBLE_EQ(r.kappa_effective, 0.0);
    EXPECT_LT(r.max_trace_distance, 1e-10);
}

TEST(ThreeMode, ImprovesWithAdiabaticity) {
    ModelParams p;
    p.omega = 1.0;
    p.u = 0.25;
    p.n_total = 2;
    const auto [g1, c1] = couplings_for_ratio(1.0, 10.0);
    const auto [g2, c2] = couplings_for_ratio(1.0, 50.0);
    const auto a = three_mode_oracle(p, g1, c1, 5, 5.0, 0.1);
    const auto b = three_mode_oracle(p, g2, c2, 5, 5.0, 0.1);
    EXPECT_LT(b.max_trace_distance, a.max_trace_distance);
    EXPECT_FALSE(b.leakage_warning);
}

TEST(ThreeMode, ThermalRateRatio) {
    const auto [g, gamma] = couplings_for_ratio(1.0, 50.0);
    const auto fit = fit_effective_rates(0.5, g, gamma, 6, 6.0);
    EXPECT_NEAR(fit.ratio(), 1.0 / 3.0, 0.02);
    EXPECT_NEAR(fit.gamma_r - fit.gamma_l, 2.0, 0.1);
}

TEST(ThreeMode, Limits) {
    ModelParams p;
    p.n_total = 5;
    EXPECT_THROW(three_mode_oracle(p, 0.1, 1.0, 3, 1.0), DimensionError);
    p.n_total = 2;
    EXPECT_THROW(three_mode_oracle(p, 0.1, 1.0, 9, 1.0), DimensionError);
}

}  // namespace
}  // namespace bhd
