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
#include <limits>

#include <nlohmann/json.hpp>

#include "bhdimer/errors.hpp"
#include "bhdimer/model.hpp"
#include "property_suites.hpp"

namespace bhd {
namespace {

TEST(DeriveRates, UnidirectionalAtZeroTemperature) {
    ModelParams p;
    const auto r = derive_rates(p);
    EXPECT_DOUBLE_EQ(r.gamma_r, 1.0);
    EXPECT_DOUBLE_EQ(r.gamma_l, 0.0);
    EXPECT_FALSE(r.kappa_scaled.has_value());
}

TEST(DeriveRates, ThermalArithmetic) {
    ModelParams p;
    p.n_th = 0.5;
    const auto r = derive_rates(p);
    EXPECT_DOUBLE_EQ(r.gamma_r, 1.5);
    EXPECT_DOUBLE_EQ(r.gamma_l, 0.5);
}

TEST(DeriveRates, ReciprocalLimit) {
    ModelParams p;
    p.n_th = 1e8;
    const auto r = derive_rates(p);
    EXPECT_NEAR(r.gamma_l / r.gamma_r, 1.0, 1e-7);
}

TEST(DeriveRates, FiniteNScaling) {
    ModelParams p;
    p.kappa = 0.7;
    p.u = 0.3;
    p.n_total = 20;
    const auto r = derive_rates(p);
    ASSERT_TRUE(r.kappa_scaled && r.u_scaled);
    EXPECT_DOUBLE_EQ(*r.kappa_scaled, 0.07);
    EXPECT_DOUBLE_EQ(*r.u_scaled, 0.03);
}

TEST(DeriveRates, DifferenceAndRatioProperty) {
    props::Gen gen(7);
    for (int i = 0; i < 200; ++i) {
        ModelParams p;
        p.kappa = gen.uniform(0.1, 3.0);
        p.n_th = gen.uniform(0.0, 5.0);
        const auto r = derive_rates(p);
        EXPECT_NEAR(r.gamma_r - r.gamma_l, p.kappa, 1e-12);
        EXPECT_NEAR(r.gamma_l / r.gamma_r, p.n_th / (1.0 + p.n_th), 1e-12);
    }
}

TEST(ModelParams, ValidateRejectsBadCouplings) {
    ModelParams p;
    p.omega = -0.1;
    EXPECT_THROW(p.validate(), ParameterDomainError);
    p.omega = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(p.validate(), ParameterDomainError);
    p = {};
    p.kappa = 0.0;
    EXPECT_THROW(p.validate(), ParameterDomainError);
    p = {};
    p.n_th = 0.0;
    EXPECT_NO_THROW(p.validate());
    p.n_th = -1.0;
    EXPECT_THROW(p.validate(), ParameterDomainError);
}

TEST(ModelParams, JsonRoundTrip) {
    props::Gen gen(11);
    for (int i = 0; i < 100; ++i) {
        ModelParams p = gen.params(2.0);
        if (i % 2 == 0) p.n_total = gen.integer(1, 80);
        EXPECT_EQ(params_from_json_string(to_json_string(p)), p);
    }
}

TEST(ModelParams, StrictParser) {
    EXPECT_THROW(params_from_json(nlohmann::json::object()), ConfigError);
    EXPECT_THROW(params_from_json({{"omega", 1.0}, {"gamma", 2.0}}), ConfigError);
    EXPECT_THROW(params_from_json({{"omega", "fast"}}), ConfigError);
    EXPECT_THROW(params_from_json(nlohmann::json::array()), ConfigError);
    const auto p = params_from_json({{"omega", 1.45}, {"u", 0.25}});
    EXPECT_DOUBLE_EQ(p.omega, 1.45);
    EXPECT_DOUBLE_EQ(p.u, 0.25);
    EXPECT_DOUBLE_EQ(p.kappa, 1.0);
}

}  // namespace
}  // namespace bhd
