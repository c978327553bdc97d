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

#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "bhdimer/errors.hpp"

namespace bhd::detail {

struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_dt = 1e-3;
    double min_dt = 1e-14;
    std::size_t max_steps = 50'000'000;
};

template <class State>
bool all_finite(const State& x) {
    for (const auto& v : x) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

// Adaptive Dormand-Prince 5(4) with dense output, sampled at the given times.
// sample_times must be non-decreasing and start at or after t0. The observer
// receives (t, state) at each sample.
template <class State, class Rhs, class Observer>
void integrate_sampled(Rhs&& rhs, State x0, double t0, std::span<const double> sample_times,
                       const StepControl& ctl, Observer&& observe) {
    namespace odeint = boost::numeric::odeint;
    using Stepper = odeint::runge_kutta_dopri5<State>;

    std::size_t i = 0;
    while (i < sample_times.size() && sample_times[i] <= t0) {
        observe(sample_times[i], x0);
        ++i;
    }
    if (i == sample_times.size()) {
        return;
    }

    auto stepper = odeint::make_dense_output(ctl.abs_tol, ctl.rel_tol, Stepper());
    stepper.initialize(x0, t0, ctl.initial_dt);
    State buf = x0;
    std::size_t steps = 0;
    while (i < sample_times.size()) {
        try {
            stepper.do_step(rhs);
        } catch (const odeint::step_adjustment_error& e) {
            throw IntegrationError(std::string("step adjustment failed: ") + e.what(),
                                   stepper.current_time(), stepper.current_time_step());
        }
        if (!all_finite(stepper.current_state())) {
            std::ostringstream os;
            os << "non-finite state at t=" << stepper.current_time();
            throw IntegrationError(os.str(), stepper.current_time(), stepper.current_time_step());
        }
        while (i < sample_times.size() && sample_times[i] <= stepper.current_time()) {
            stepper.calc_state(sample_times[i], buf);
            observe(sample_times[i], buf);
            ++i;
        }
        if (i < sample_times.size() && stepper.current_time_step() < ctl.min_dt) {
            std::ostringstream os;
            os << "step size underflow (stiff system) at t=" << stepper.current_time()
               << ", dt=" << stepper.current_time_step();
            throw IntegrationError(os.str(), stepper.current_time(), stepper.current_time_step());
        }
        if (++steps > ctl.max_steps) {
            throw IntegrationError("maximum number of steps exceeded", stepper.current_time(),
                                   stepper.current_time_step());
        }
    }
}

}  // namespace bhd::detail
