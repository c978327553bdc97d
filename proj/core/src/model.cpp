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

#include "bhdimer/model.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "bhdimer/errors.hpp"

namespace bhd {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) {
        throw ParameterDomainError(msg);
    }
}

double read_number(const nlohmann::json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number()) {
        throw ConfigError(std::string("config key '") + key + "' must be a number");
    }
    return v.get<double>();
}

}  // namespace

void ModelParams::validate() const {
    require(std::isfinite(omega) && omega >= 0.0, "omega must be finite and >= 0");
    require(std::isfinite(u) && u >= 0.0, "u must be finite and >= 0");
    require(std::isfinite(kappa) && kappa > 0.0, "kappa must be finite and > 0");
    require(std::isfinite(n_th) && n_th >= 0.0, "n_th must be finite and >= 0");
    if (n_total) {
        require(*n_total >= 1, "n_total must be >= 1");
    }
}

DerivedRates derive_rates(const ModelParams& params) {
    params.validate();
    DerivedRates r{};
    r.gamma_r = (1.0 + params.n_th) * params.kappa;
    r.gamma_l = params.n_th * params.kappa;
    if (params.n_total) {
        const double n = static_cast<double>(*params.n_total);
        r.kappa_scaled = 2.0 * params.kappa / n;
        r.u_scaled = 2.0 * params.u / n;
    }
    return r;
}

ModelParams params_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ConfigError("model parameters must be a JSON object");
    }
    if (j.empty()) {
        throw ConfigError("empty model configuration");
    }
    static const char* const known[] = {"omega", "u", "kappa", "n_th", "n_total"};
    for (const auto& item : j.items()) {
        bool found = false;
        for (const char* k : known) {
            found = found || item.key() == k;
        }
        if (!found) {
            throw ConfigError("unknown config key '" + item.key() + "'");
        }
    }
    ModelParams p;
    if (j.contains("omega")) p.omega = read_number(j, "omega");
    if (j.contains("u")) p.u = read_number(j, "u");
    if (j.contains("kappa")) p.kappa = read_number(j, "kappa");
    if (j.contains("n_th")) p.n_th = read_number(j, "n_th");
    if (j.contains("n_total") && !j.at("n_total").is_null()) {
        const auto& v = j.at("n_total");
        if (!v.is_number_integer()) {
            throw ConfigError("config key 'n_total' must be an integer");
        }
        p.n_total = v.get<int>();
    }
    p.validate();
    return p;
}

nlohmann::json to_json(const ModelParams& params) {
    nlohmann::json j;
    j["omega"] = params.omega;
    j["u"] = params.u;
    j["kappa"] = params.kappa;
    j["n_th"] = params.n_th;
    if (params.n_total) {
        j["n_total"] = *params.n_total;
    } else {
        j["n_total"] = nullptr;
    }
    return j;
}

ModelParams params_from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return params_from_json(j);
}

std::string to_json_string(const ModelParams& params) { return to_json(params).dump(); }

}  // namespace bhd
