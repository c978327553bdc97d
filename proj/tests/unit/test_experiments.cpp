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
#include <vector>

#include "bhdimer/errors.hpp"
#include "bhdimer/experiments.hpp"
#include "property_suites.hpp"

namespace bhd {
namespace {

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> g;
    const auto n = static_cast<int>(std::lround((hi - lo) / step));
    for (int i = 0; i <= n; ++i) g.push_back(std::round((lo + i * step) * 1e9) / 1e9);
    return g;
}

TEST(LinearFit, ExactLine) {
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(0.3 * i);
        y.push_back(-1.7 * x.back() + 0.4);
    }
    const auto f = linear_fit(x, y);
    EXPECT_NEAR(f.slope, -1.7, 1e-13);
    EXPECT_NEAR(f.intercept, 0.4, 1e-13);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-13);
    EXPECT_EQ(f.points, 20u);
    EXPECT_NEAR(f.slope_stderr, 0.0, 1e-12);
}

TEST(LinearFit, NoisyLineRecoversSlope) {
    props::Gen gen(101);
    for (int it = 0; it < 100; ++it) {
        const double a = gen.uniform(-3.0, 3.0);
        std::vector<double> x, y;
        for (int i = 0; i < 200; ++i) {
            x.push_back(gen.uniform(0.0, 10.0));
            y.push_back(a * x.back() + 1.0 + 0.01 * gen.normal());
        }
        const auto f = linear_fit(x, y);
        EXPECT_NEAR(f.slope, a, 6.0 * f.slope_stderr + 1e-12);
    }
}

TEST(LinearFit, Degenerate) {
    const std::vector<double> x{1.0, 1.0, 1.0};
    const std::vector<double> y{1.0, 2.0, 3.0};
    EXPECT_THROW(linear_fit(x, y), InsufficientDataError);
    EXPECT_THROW(linear_fit(std::vector<double>{1.0}, std::vector<double>{1.0}), InsufficientDataError);
    EXPECT_THROW(fit_power_law(std::vector<double>{1.0, -2.0}, std::vector<double>{1.0, 2.0}), ConfigError);
}

TEST(CriticalExponent, ClosedFormSamples) {
    std::vector<double> w, dn;
    for (int i = 0; i <= 8; ++i) {
        w.push_back(1.0 - std::pow(10.0, -4.0 + 0.25 * i));
        dn.push_back(std::sqrt(1.0 - w.back() * w.back()));
    }
    const auto f = critical_exponent_fit(w, dn);
    EXPECT_NEAR(f.fit.slope, 0.5, 0.005);
    EXPECT_NEAR(f.fit.r_squared, 1.0, 1e-4);
}

TEST(CriticalExponent, ConstantOrderParameter) {
    std::vector<double> w, dn;
    for (int i = 0; i <= 8; ++i) {
        w.push_back(0.9 + 0.01 * i);
        dn.push_back(0.3);
    }
    EXPECT_NEAR(critical_exponent_fit(w, dn).fit.slope, 0.0, 1e-12);
}

TEST(CriticalExponent, TooFewPoints) {
    const std::vector<double> w{0.99, 0.995, 0.999, 1.2};
    const std::vector<double> dn{0.1, 0.1, 0.05, 0.0};
    EXPECT_THROW(critical_exponent_fit(w, dn), InsufficientDataError);
}

TEST(CriticalExponent, FittedCriticalPoint) {
    std::vector<double> w, dn;
    for (int i = 0; i <= 10; ++i) {
        w.push_back(1.0 - std::pow(10.0, -3.0 + 0.2 * i));
        dn.push_back(2.0 * std::pow(1.0 - w.back(), 0.5));
    }
    const auto f = critical_exponent_fit(w, dn, 1.0, true);
    EXPECT_NEAR(f.omega_c, 1.0, 1e-4);
    EXPECT_NEAR(f.fit.slope, 0.5, 1e-3);
}

TEST(SteadyState, OrderParameterClosedForm) {
    for (double w : {0.2, 0.5, 0.8}) {
        ModelParams p;
        p.omega = w;
        const auto ss = mean_field_steady_state(p, default_initial_state());
        EXPECT_NEAR(ss.delta_n, std::sqrt(1.0 - w * w), 1e-6);
        EXPECT_LT(ss.derivative_norm, 1e-11);
    }
}

TEST(GrowthFit, SyntheticLogarithm) {
    std::vector<double> t, eps;
    for (int i = 0; i <= 400; ++i) {
        t.push_back(std::pow(10.0, -1.0 + 5.0 * i / 400.0));
        eps.push_back(std::max(0.0, 0.8 * std::log(t.back()) - 0.5));
    }
    const auto g = entanglement_growth_fit(t, eps, 1e2, 1e4);
    EXPECT_NEAR(g.fit.slope, 0.8, 1e-12);
    EXPECT_NEAR(g.fit.r_squared, 1.0, 1e-12);
    ASSERT_TRUE(g.onset.has_value());
    EXPECT_NEAR(*g.onset, std::exp(0.51 / 0.8), 0.2);
    EXPECT_FALSE(g.non_monotone);
}

TEST(GrowthFit, SustainedOnsetIgnoresEarlyBlip) {
    std::vector<double> t, eps;
    for (int i = 0; i <= 200; ++i) {
        t.push_back(0.1 * i);
        eps.push_back(t.back() < 0.5 ? 0.05 : (t.back() > 10.0 ? 0.1 * (t.back() - 10.0) + 0.02 : 0.0));
    }
    const auto g = entanglement_growth_fit(t, eps, 11.0, 20.0);
    ASSERT_TRUE(g.onset && g.first_onset);
    EXPECT_LT(*g.first_onset, 0.5);
    EXPECT_GT(*g.onset, 10.0);
}

TEST(GrowthFit, OffCriticalSaturates) {
    std::vector<double> t;
    for (int i = 0; i <= 200; ++i) t.push_back(std::pow(10.0, -1.0 + 4.0 * i / 200.0));
    t.insert(t.begin(), 0.0);
    ModelParams p;
    p.omega = 0.8;
    const auto run = integrate_lyapunov_at(default_initial_state(), Mat4::Identity(), p, t);
    std::vector<double> eps;
    for (const auto& s : run.covariances.sigmas) eps.push_back(logarithmic_negativity(s));
    const auto g = entanglement_growth_fit(run.covariances.times, eps, 1e2, 1e3);
    EXPECT_LT(std::abs(g.fit.slope), 1e-3);
}

TEST(Sweep, ChainsFinalStates) {
    ModelParams p;
    p.u = 0.25;
    SweepSettings ss;
    ss.settle_time = 50.0;
    const auto g = grid(1.30, 1.36, 0.02);
    for (auto dir : {SweepDirection::Forward, SweepDirection::Backward}) {
        const auto rec = hysteresis_sweep(p, g, dir, ss);
        ASSERT_EQ(rec.steps.size(), g.size());
        EXPECT_EQ(rec.control_name, "omega");
        EXPECT_EQ(rec.steps.front().initial, default_initial_state());
        for (std::size_t k = 1; k < rec.steps.size(); ++k) {
            EXPECT_EQ(rec.steps[k].initial, rec.steps[k - 1].final_state);
        }
        const double first = dir == SweepDirection::Forward ? g.front() : g.back();
        EXPECT_DOUBLE_EQ(rec.steps.front().control, first);
    }
}

TEST(Sweep, ForwardTransitionNearFixedPointBound) {
    ModelParams p;
    p.u = 0.25;
    p.omega = 1.30;
    const auto g = grid(1.30, 1.50, 0.01);
    const auto seed = from_polar(fixed_points(p).branches.at(0));
    const auto rec = hysteresis_sweep(p, g, SweepDirection::Forward, {}, seed);
    const auto at = transition_point(rec, Phase::TC2);
    ASSERT_TRUE(at.has_value());
    EXPECT_GT(*at, std::sqrt(2.0));
    EXPECT_LE(*at, std::sqrt(2.0) + 0.01 + 1e-12);
}

TEST(Sweep, LoopAreaOfIdenticalRecordsIsZero) {
    ModelParams p;
    SweepSettings ss;
    ss.settle_time = 40.0;
    const auto g = grid(1.0, 1.1, 0.05);
    const auto f = hysteresis_sweep(p, g, SweepDirection::Forward, ss);
    EXPECT_EQ(hysteresis_loop_area(f, f), 0.0);
    const auto shorter = hysteresis_sweep(p, grid(1.0, 1.05, 0.05), SweepDirection::Backward, ss);
    EXPECT_THROW(hysteresis_loop_area(f, shorter), ConfigError);
}

TEST(Sweep, DirectionNames) {
    EXPECT_EQ(direction_from_string(to_string(SweepDirection::Backward)), SweepDirection::Backward);
    EXPECT_THROW(direction_from_string("sideways"), ConfigError);
}

TEST(PhaseDiagram, LabelledCells) {
    const std::vector<double> w{0.5, 1.0, 1.45};
    const std::vector<double> u{0.0, 0.2, 0.3};
    PhaseDiagramSettings s;
    s.with_entanglement = false;
    s.threads = 3;
    const auto pd = phase_diagram(ModelParams{}, w, u, s);
    ASSERT_EQ(pd.cells.size(), 9u);
    EXPECT_EQ(pd.at(0, 0).label, Phase::Stationary);
    EXPECT_EQ(pd.at(1, 2).label, Phase::TC3);
    EXPECT_EQ(pd.at(2, 2).label, Phase::TC2);
    EXPECT_DOUBLE_EQ(pd.at(2, 2).u, 0.3);
    EXPECT_DOUBLE_EQ(pd.at(2, 2).omega, 1.45);
    EXPECT_FALSE(PhaseDiagram::boundary(0.9).has_value());
    EXPECT_NEAR(*PhaseDiagram::boundary(1.45), 0.2625, 1e-12);
}

TEST(PhaseDiagram, EntanglementAverage) {
    ModelParams p;
    p.omega = 1.0;
    const double e = averaged_entanglement(default_initial_state(), p, 200.0, 0.1);
    EXPECT_GT(e, 0.5);
    EXPECT_THROW(averaged_entanglement(default_initial_state(), p, 200.0, 0.0), ConfigError);
}

TEST(GapScaling, MatchesDirectSpectra) {
    ModelParams p;
    p.omega = 0.8;
    p.u = 0.25;
    const std::vector<int> ns{4, 6};
    const auto gaps = gap_scaling(ns, p);
    ASSERT_EQ(gaps.size(), 2u);
    for (std::size_t k = 0; k < gaps.size(); ++k) {
        EXPECT_TRUE(gaps[k].error.empty());
        const auto direct = block_spectrum(build_block(p, ns[k], ns[k] - 1));
        ASSERT_FALSE(gaps[k].eigenvalues.empty());
        EXPECT_NEAR(std::abs(gaps[k].eigenvalues[0] - direct.eigenvalues[0]), 0.0, 1e-10);
    }
}

}  // namespace
}  // namespace bhd
