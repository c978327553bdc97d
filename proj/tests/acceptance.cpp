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

// Acceptance suite. One PASS/FAIL line per criterion; exits 1 if any fails.
// `acceptance 3 7` runs a subset, `note` adds the entanglement-ordering note.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "bhdimer/correlations.hpp"
#include "bhdimer/errors.hpp"
#include "bhdimer/experiments.hpp"
#include "bhdimer/liouvillian.hpp"
#include "bhdimer/meanfield.hpp"
#include "bhdimer/three_mode.hpp"
#include "property_suites.hpp"

namespace {

using namespace bhd;

namespace tol {
constexpr double stationary_delta_n = 1e-6;
constexpr double exponent = 0.02;
constexpr double u_grid_step = 1e-3;
constexpr double spin_mismatch = 1e-9;
constexpr double gap_im_relative = 0.05;
constexpr double growth_r2 = 0.99;
constexpr double growth_slope_relative = 0.05;
constexpr double even_harmonic = 1e-3;
constexpr double loop_area = 1e-3;  // one omega step (0.01) times a dN mismatch of 0.1
constexpr int property_instances = 100;
}  // namespace tol

struct Outcome {
    bool pass = false;
    std::string detail;
};

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

template <class... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome c1_stationary() {
    double worst = 0.0;
    for (double w : {0.2, 0.5, 0.8}) {
        ModelParams p;
        p.omega = w;
        const auto ss = mean_field_steady_state(p, default_initial_state());
        worst = std::max(worst, std::abs(ss.delta_n - std::sqrt(1.0 - w * w)));
    }
    return {worst < tol::stationary_delta_n, fmt("max |dN - sqrt(1 - w^2)| = %.3e", worst)};
}

Outcome c2_exponent() {
    std::vector<double> grid;
    for (int i = 0; i <= 8; ++i) grid.push_back(1.0 - std::pow(10.0, -4.0 + 0.25 * i));
    std::sort(grid.begin(), grid.end());
    ModelParams p;
    ExponentSettings es;
    es.threads = threads();
    const auto f = critical_exponent_fit(p, grid, es);
    return {std::abs(f.fit.slope - 0.5) <= tol::exponent,
            fmt("slope = %.5f +- %.1e over %zu points", f.fit.slope, f.fit.slope_stderr, f.fit.points)};
}

Outcome c3_boundary() {
    bool ok = true;
    std::ostringstream os;
    for (double w : {1.2, 1.45}) {
        const double uc = critical_u(w);
        const double center = std::round(uc * 1000.0) / 1000.0;
        std::vector<double> grid;
        for (int i = -4; i <= 4; ++i) grid.push_back(center + i * tol::u_grid_step);
        ModelParams p;
        p.omega = w;
        p.u = grid.back();
        // Seed on the branch with the smaller a-mode radius at the top of the sweep.
        PolarState seed = fixed_points(p).branches.at(1);
        SweepSettings ss;
        ss.settle_time = 1000.0;
        const auto rec = interaction_sweep(p, grid, SweepDirection::Backward, ss, from_polar(seed));
        // Steps run from high to low u. The flip is the first step after the TC2
        // run that is not TC2; it must be TC3 and no TC2 may follow.
        std::optional<double> lowest_tc2, flip_tc3;
        bool ordered = true;
        int inconclusive = 0;
        for (const auto& st : rec.steps) {
            const bool tc2 = st.label == Phase::TC2;
            if (!st.label) ++inconclusive;
            if (tc2 && (flip_tc3 || (!lowest_tc2 && st.control != rec.steps.front().control))) ordered = false;
            if (tc2 && !flip_tc3) lowest_tc2 = st.control;
            if (!tc2 && lowest_tc2 && !flip_tc3) {
                if (st.label == Phase::TC3) {
                    flip_tc3 = st.control;
                } else {
                    ordered = false;
                }
            }
        }
        const bool here = ordered && lowest_tc2 && flip_tc3 && *lowest_tc2 >= uc - tol::u_grid_step - 1e-12 &&
                          *flip_tc3 <= uc + tol::u_grid_step + 1e-12;
        ok = ok && here;
        os << fmt("w=%.2f Uc=%.5f", w, uc);
        if (lowest_tc2 && flip_tc3) os << fmt(" TC2 down to %.3f, TC3 at %.3f", *lowest_tc2, *flip_tc3);
        if (!ordered) os << " (labels out of order)";
        if (inconclusive > 0) os << fmt(" (%d inconclusive below the flip)", inconclusive);
        os << "; ";
    }
    return {ok, os.str()};
}

Outcome c4_tc2_frequency() {
    ModelParams p;
    p.omega = 0.8;
    p.u = 0.25;
    const auto traj = integrate_mf(default_initial_state(), p, 2000.0);
    const auto pa = traj.component(1);
    const auto peaks = fourier_peaks(pa, traj.dt(), 0.5);
    const double f = peaks.peaks.at(0).frequency;
    return {std::abs(f - 4.0 * p.u) <= peaks.resolution,
            fmt("peak %.5f vs 4U = %.5f, bin %.2e", f, 4.0 * p.u, peaks.resolution)};
}

Outcome c5_odd_harmonics() {
    ModelParams p;
    p.omega = 1.45;
    const auto traj = integrate_mf(default_initial_state(), p, 2000.0);
    const auto label = classify_phase(traj, p);
    return {label.phase == Phase::TC1 && label.even_harmonic_ratio < tol::even_harmonic,
            fmt("label %s, even/fundamental power = %.2e", to_string(label.phase).c_str(),
                label.even_harmonic_ratio)};
}

Outcome c6_spin_equivalence() {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> om(0.1, 2.0), uu(0.0, 0.5), nt(0.0, 1.0);
    double worst = 0.0;
    int ambiguous = 0;
    for (int n : {2, 4, 6}) {
        for (int d = 0; d < 5; ++d) {
            ModelParams p;
            p.omega = om(rng);
            p.u = uu(rng);
            p.n_th = nt(rng);
            const auto r = spin_equivalence_check(p, n);
            worst = std::max(worst, r.mismatch);
            ambiguous += r.ambiguous;
        }
    }
    return {worst < tol::spin_mismatch, fmt("max mismatch %.2e over 15 draws (%d ambiguous)", worst, ambiguous)};
}

Outcome c7_gap_closure() {
    ModelParams p;
    p.omega = 0.8;
    p.u = 0.25;
    const std::vector<int> ns{20, 30, 40, 50};
    SpectrumSettings ss;
    ss.k = 8;
    const auto gaps = gap_scaling(ns, p, 1, ss, threads());
    std::ostringstream os;
    bool ok = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& g : gaps) {
        if (!g.error.empty() || g.eigenvalues.empty()) {
            os << "N=" << g.n << " failed: " << g.error << "; ";
            ok = false;
            continue;
        }
        const cplx l = g.eigenvalues.front();
        os << fmt("N=%d %.3e%+.4fi; ", g.n, l.real(), l.imag());
        ok = ok && -l.real() < prev;
        prev = -l.real();
    }
    if (ok) {
        const double im = std::abs(gaps.back().eigenvalues.front().imag());
        ok = std::abs(im - 4.0 * p.u) <= tol::gap_im_relative * 4.0 * p.u;
    }
    return {ok, os.str()};
}

Outcome c8_convergence() {
    std::ostringstream os;
    bool ok = true;
    const std::vector<std::pair<double, double>> cases{{0.8, 0.25}, {1.45, 0.0}, {1.45, 0.2}};
    for (const auto& [w, u] : cases) {
        ModelParams p;
        p.omega = w;
        p.u = u;
        IntegratorSettings is;
        is.sample_dt = 0.1;
        const auto s0 = default_initial_state();
        const auto mf = integrate_mf(s0, p, 20.0, is);
        double prev = std::numeric_limits<double>::infinity();
        os << fmt("(%.2f,%.2f):", w, u);
        for (int n : {20, 30, 40}) {
            ModelParams pn = p;
            pn.n_total = n;
            EvolveSettings es;
            es.populations = false;
            es.threads = threads();
            const auto blocks = coherent_initial_blocks(n, s0.alpha(), s0.beta(), 2);
            const auto obs = evolve_blocks(blocks, pn, 20.0, 0.1, es);
            double dev = 0.0;
            for (std::size_t i = 0; i < obs.times.size(); ++i) {
                dev = std::max(dev, std::abs(obs.p_a[i] - mf.states[i].p_a));
            }
            os << fmt(" %.3e", dev);
            ok = ok && dev < prev;
            prev = dev;
        }
        os << "; ";
    }
    return {ok, os.str()};
}

Outcome c9_growth() {
    std::vector<double> times{0.0};
    for (int i = 0; i <= 300; ++i) times.push_back(std::pow(10.0, -1.0 + 5.0 * i / 300.0));
    std::vector<double> slopes, onsets;
    bool ok = true;
    std::ostringstream os;
    for (double nth : {0.0, 0.5, 1.0}) {
        ModelParams p;
        p.omega = 1.0;
        p.n_th = nth;
        const auto run = integrate_lyapunov_at(default_initial_state(), Mat4::Identity(), p, times);
        std::vector<double> eps;
        for (const auto& s : run.covariances.sigmas) eps.push_back(logarithmic_negativity(s));
        const auto g = entanglement_growth_fit(run.covariances.times, eps, 1e2, 1e4);
        slopes.push_back(g.fit.slope);
        onsets.push_back(g.onset.value_or(std::nan("")));
        ok = ok && g.fit.r_squared > tol::growth_r2 && g.onset.has_value();
        os << fmt("n_th=%.1f slope %.4f R2 %.6f onset %.2f; ", nth, g.fit.slope, g.fit.r_squared, onsets.back());
    }
    const auto [mn, mx] = std::minmax_element(slopes.begin(), slopes.end());
    ok = ok && (*mx - *mn) <= tol::growth_slope_relative * std::abs(*mn);
    ok = ok && onsets[0] < onsets[1] && onsets[1] < onsets[2];
    return {ok, os.str()};
}

Outcome c10_hysteresis() {
    std::vector<double> grid;
    for (int i = 0; i <= 60; ++i) grid.push_back(std::round((1.0 + 0.01 * i) * 100.0) / 100.0);
    SweepSettings ss;
    double areas[2];
    int k = 0;
    for (double u : {0.25, 0.0}) {
        ModelParams p;
        p.u = u;
        const auto fwd = hysteresis_sweep(p, grid, SweepDirection::Forward, ss);
        const auto bwd = hysteresis_sweep(p, grid, SweepDirection::Backward, ss);
        areas[k++] = hysteresis_loop_area(fwd, bwd);
    }
    return {areas[0] > tol::loop_area && areas[1] < tol::loop_area,
            fmt("area(U=0.25) = %.4e, area(U=0) = %.4e, resolution %.0e", areas[0], areas[1], tol::loop_area)};
}

Outcome c11_adiabatic_elimination() {
    ModelParams p;
    p.omega = 1.0;
    p.u = 0.25;
    p.n_total = 2;
    std::vector<double> td;
    std::ostringstream os;
    bool leak = false;
    for (double r : {10.0, 30.0, 100.0}) {
        const auto [g, gamma] = couplings_for_ratio(1.0, r);
        const auto res = three_mode_oracle(p, g, gamma, 6, 5.0);
        td.push_back(res.max_trace_distance);
        leak = leak || res.leakage_warning;
        os << fmt("ratio %.0f: %.4e; ", r, res.max_trace_distance);
    }
    if (leak) os << "cutoff leakage warning; ";
    return {td[1] < td[0] && td[2] < td[1] && td[2] < 0.5 * td[0], os.str()};
}

Outcome c12_properties() {
    std::ostringstream os;
    bool ok = true;
    for (const auto& r : props::run_all(tol::property_instances, 20260101u)) {
        os << r.name << (r.failures == 0 ? " ok" : " FAILED") << fmt("(%d/%d, worst %.1e); ", r.instances - r.failures,
                                                                   r.instances, r.worst);
        ok = ok && r.failures == 0 && r.instances >= tol::property_instances;
    }
    return {ok, os.str()};
}

void qualitative_note() {
    const double t_avg = 4000.0;
    std::vector<std::pair<double, double>> line;
    for (double w : {0.8, 0.9, 1.0, 1.1, 1.2}) {
        ModelParams p;
        p.omega = w;
        line.emplace_back(w, averaged_entanglement(default_initial_state(), p, t_avg, 0.1));
    }
    const auto best = std::max_element(line.begin(), line.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
    ModelParams tc2, tc3;
    tc2.omega = tc3.omega = 1.45;
    tc2.u = 0.3;
    tc3.u = 0.2;
    const double e2 = averaged_entanglement(default_initial_state(), tc2, t_avg, 0.1);
    const double e3 = averaged_entanglement(default_initial_state(), tc3, t_avg, 0.1);
    std::printf("NOTE eps ordering (qualitative): U=0 maximum at w=%.1f (%s); TC2 side %.4f vs TC3 side %.4f (%s)\n",
                best->first, best->first == 1.0 ? "holds" : "does not hold", e2, e3, e2 > e3 ? "holds" : "does not hold");
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"stationary order parameter", c1_stationary},
        {"critical exponent", c2_exponent},
        {"fixed-point phase boundary", c3_boundary},
        {"TC2 frequency", c4_tc2_frequency},
        {"TC1 odd harmonics", c5_odd_harmonics},
        {"spin-boson spectral equivalence", c6_spin_equivalence},
        {"finite-size gap closure", c7_gap_closure},
        {"finite-N to mean-field convergence", c8_convergence},
        {"entanglement log-growth", c9_growth},
        {"hysteresis", c10_hysteresis},
        {"adiabatic-elimination oracle", c11_adiabatic_elimination},
        {"property suites", c12_properties},
    };
    std::set<int> only;
    bool note = argc == 1;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "note") {
            note = true;
        } else {
            only.insert(std::stoi(argv[i]));
        }
    }
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.contains(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    if (note) {
        try {
            qualitative_note();
        } catch (const std::exception& e) {
            std::printf("NOTE eps ordering could not be evaluated: %s\n", e.what());
        }
    }
    return failed == 0 ? 0 : 1;
}
