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
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace bhd {

/// Couplings of the dimer in units where the dissipation rate sets the scale.
///
/// `n_total` is only meaningful for finite-N code paths; the mean-field
/// modules ignore it.
struct ModelParams {
    double omega = 0.0;
    double u = 0.0;
    double kappa = 1.0;
    double n_th = 0.0;
    std::optional<int> n_total;

    /// Throws ParameterDomainError on negative or non-finite couplings.
    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

struct DerivedRates {
    double gamma_r;
    double gamma_l;
    std::optional<double> kappa_scaled;  // 2 kappa / N
    std::optional<double> u_scaled;      // 2 U / N
};

DerivedRates derive_rates(const ModelParams& params);

/// Quadrature convention shared by all modules.
struct Conventions {
    static constexpr const char* quad_scale = "x=a+a^dag,p=-i(a-a^dag),[x,p]=2i";
    static constexpr bool hbar_free = true;
    static constexpr double vacuum_variance = 1.0;
    static constexpr double shell = 2.0;
};

/// Strict parser: unknown keys and wrong types raise ConfigError.
ModelParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelParams& params);

ModelParams params_from_json_string(const std::string& text);
std::string to_json_string(const ModelParams& params);

}  // namespace bhd
