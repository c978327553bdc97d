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

#include <stdexcept>
#include <string>

namespace bhd {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: configuration, parameter domain, shapes. CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParameterDomainError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class DimensionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class MissingSectorError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class EmptyInputError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Numerical failure. CLI exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SingularCoordinatesError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IntegrationError : public NumericalError {
public:
    IntegrationError(const std::string& what, double time, double step)
        : NumericalError(what), time_(time), step_(step) {}
    double time() const noexcept { return time_; }
    double step() const noexcept { return step_; }

private:
    double time_;
    double step_;
};

class EigensolverError : public NumericalError {
public:
    EigensolverError(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class DegenerateNullSpaceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ClassificationInconclusive : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InsufficientDataError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace bhd
