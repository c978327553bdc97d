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

#include "bhdimer/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "bhdimer/errors.hpp"
#include "bhdimer/parallel.hpp"

namespace bhd {

namespace {

void require_ascending(std::span<const double> grid, const char* name) {
    if (grid.empty()) {
        throw EmptyInputError(std::string(name) + " grid is empty");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw ConfigError(std::string(name) + " grid must be strictly ascending");
        }
    }
}

SweepStep sweep_step(const ModelParams& params, const MeanFieldState& state, double control,
                     const SweepSettings& settings) {
    SweepStep step;
    step.control = control;
    step.initial = state;
    const Trajectory traj = integrate_mf(state, params, settings.settle_time, settings.integrator);
    step.final_state = traj.states.back();
    step.order = order_parameters(traj.tail(settings.transient_fraction));
    ClassifierSettings cs = settings.classifier;
    cs.transient_fraction = settings.transient_fraction;
    try {
        step.label = classify_phase(traj, params, cs).phase;
    } catch (const ClassificationInconclusive& e) {
        step.note = e.what();
    }
    return step;
}

SweepRecord run_sweep(const ModelParams& base, std::span<const double> grid, SweepDirection direction,
                      const SweepSettings& settings, std::optional<MeanFieldState> initial, const char* name,
                      const std::function<void(ModelParams&, double)>& set_control) {
    require_ascending(grid, name);
    if (!(settings.settle_time > 0.0) || settings.transient_fraction < 0.0 || settings.transient_fraction >= 1.0) {
        throw ConfigError("sweep settle_time must be positive and transient_fraction in [0, 1)");
    }
    SweepRecord rec;
    rec.control_name = name;
    rec.direction = direction;
    rec.base = base;
    std::vector<double> order(grid.begin(), grid.end());
    if (direction == SweepDirection::Backward) {
        std::reverse(order.begin(), order.end());
    }
    MeanFieldState state = initial.value_or(default_initial_state());
    for (double c : order) {
        ModelParams p = base;
        set_control(p, c);
        rec.steps.push_back(sweep_step(p, state, c, settings));
        state = rec.steps.back().final_state;
    }
    return rec;
}

}  // namespace

std::string to_string(SweepDirection d) { return d == SweepDirection::Forward ? "forward" : "backward"; }

SweepDirection direction_from_string(const std::string& s) {
    if (s == "forward") return SweepDirection::Forward;
    if (s == "backward") return SweepDirection::Backward;
    throw ConfigError("unknown sweep direction '" + s + "'");
}

std::vector<double> SweepRecord::controls() const {
    std::vector<double> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.control);
    return out;
}

std::vector<double> SweepRecord::delta_n() const {
    std::vector<double> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.order.delta_n);
    return out;
}

SweepRecord hysteresis_sweep(const ModelParams& base, std::span<const double> omega_grid, SweepDirection direction,
                             const SweepSettings& settings, std::optional<MeanFieldState> initial) {
    return run_sweep(base, omega_grid, direction, settings, initial, "omega",
                     [](ModelParams& p, double v) { p.omega = v; });
}

SweepRecord interaction_sweep(const ModelParams& base, std::span<const double> u_grid, SweepDirection direction,
                              const SweepSettings& settings, std::optional<MeanFieldState> initial) {
    return run_sweep(base, u_grid, direction, settings, initial, "u", [](ModelParams& p, double v) { p.u = v; });
}

double hysteresis_loop_area(const SweepRecord& forward, const SweepRecord& backward) {
    if (forward.steps.size() != backward.steps.size() || forward.steps.empty()) {
        throw ConfigError("hysteresis_loop_area: sweeps cover different grids");
    }
    auto sorted = [](const SweepRecord& r) {
        std::vector<std::pair<double, double>> v;
        for (const auto& s : r.steps) v.emplace_back(s.control, s.order.delta_n);
        std::sort(v.begin(), v.end());
        return v;
    };
    const auto f = sorted(forward);
    const auto b = sorted(backward);
    double area = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (std::abs(f[i].first - b[i].first) > 1e-12 * std::max(1.0, std::abs(f[i].first))) {
            throw ConfigError("hysteresis_loop_area: sweeps cover different grids");
        }
        if (i > 0) {
            const double d0 = std::abs(f[i - 1].second - b[i - 1].second);
            const double d1 = std::abs(f[i].second - b[i].second);
            area += 0.5 * (d0 + d1) * (f[i].first - f[i - 1].first);
        }
    }
    return area;
}

std::optional<double> transition_point(const SweepRecord& record, Phase from) {
    for (std::size_t i = 1; i < record.steps.size(); ++i) {
        if (record.steps[i - 1].label == from && record.steps[i].label != from) {
            return record.steps[i].control;
        }
    }
    return std::nullopt;
}

std::string PhaseCell::label_string() const {
    if (label) return to_string(*label);
    return error.empty() ? "Inconclusive" : "Error";
}

std::optional<double> PhaseDiagram::boundary(double omega, double kappa) {
    if (omega < kappa) return std::nullopt;
    return critical_u(omega, kappa);
}

double averaged_entanglement(const MeanFieldState& state0, const ModelParams& params, double t_end, double fraction,
                             double sample_dt, NoiseNormalization noise) {
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw ConfigError("averaging fraction must be in (0, 1]");
    }
    LyapunovSettings ls;
    ls.integrator.sample_dt = sample_dt;
    ls.integrator.shell_tolerance = 1e-6;
    ls.noise = noise;
    const auto run = integrate_lyapunov(state0, Mat4::Identity(), params, t_end, ls);
    const double t_lo = (1.0 - fraction) * t_end;
    double sum = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < run.covariances.times.size(); ++i) {
        if (run.covariances.times[i] >= t_lo) {
            sum += logarithmic_negativity(run.covariances.sigmas[i]);
            ++cnt;
        }
    }
    return cnt ? sum / static_cast<double>(cnt) : 0.0;
}

PhaseDiagram phase_diagram(const ModelParams& base, std::span<const double> omega_grid,
                           std::span<const double> u_grid, const PhaseDiagramSettings& settings) {
    require_ascending(omega_grid, "omega");
    require_ascending(u_grid, "u");
    PhaseDiagram pd;
    pd.omega_grid.assign(omega_grid.begin(), omega_grid.end());
    pd.u_grid.assign(u_grid.begin(), u_grid.end());
    pd.cells.resize(u_grid.size() * omega_grid.size());

    parallel_for(u_grid.size(), settings.threads, [&](std::size_t iu) {
        MeanFieldState state = default_initial_state();
        for (std::size_t iw = 0; iw < omega_grid.size(); ++iw) {
            PhaseCell& cell = pd.cells[iu * omega_grid.size() + iw];
            cell.omega = omega_grid[iw];
            cell.u = u_grid[iu];
            ModelParams p = base;
            p.omega = cell.omega;
            p.u = cell.u;
            if (settings.protocol == PhaseProtocol::Independent) {
                state = default_initial_state();
            }
            try {
                const SweepStep step = sweep_step(p, state, cell.omega, settings.sweep);
                cell.label = step.label;
                cell.delta_n = step.order.delta_n;
                cell.delta_r_bar = step.order.delta_r_bar;
                if (!step.label) cell.error = step.note;
                state = step.final_state;
                if (settings.with_entanglement) {
                    cell.eps_avg = averaged_entanglement(state, p, settings.averaging_time,
                                                         settings.averaging_fraction, settings.lyapunov_sample_dt,
                                                         settings.noise);
                }
            } catch (const Error& e) {
                cell.label.reset();
                cell.error = e.what();
                state = default_initial_state();
            }
        }
    });
    return pd;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ConfigError("linear_fit: size mismatch");
    }
    const std::size_t n = x.size();
    if (n < 3) {
        throw InsufficientDataError("linear_fit needs at least 3 points");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw InsufficientDataError("linear_fit: abscissae are all equal");
    }
    LinearFit f;
    f.points = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        sse += r * r;
    }
    f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    f.slope_stderr = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    return f;
}

LinearFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ConfigError("fit_power_law: size mismatch");
    }
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw ParameterDomainError("fit_power_law needs positive data");
        }
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return linear_fit(lx, ly);
}

SteadyState mean_field_steady_state(const ModelParams& params, const MeanFieldState& state0,
                                    const SteadyStateSettings& settings) {
    SteadyState ss;
    ss.state = state0;
    for (int c = 0; c < settings.max_chunks; ++c) {
        const auto traj = integrate_mf(ss.state, params, settings.chunk_time, settings.integrator);
        ss.state = traj.states.back();
        ss.time += settings.chunk_time;
        ss.derivative_norm = mf_rhs(ss.state, params).norm();
        if (ss.derivative_norm < settings.derivative_tol) {
            ss.delta_n = 0.5 * std::abs(std::norm(ss.state.alpha()) - std::norm(ss.state.beta()));
            return ss;
        }
    }
    std::ostringstream os;
    os << "no stationary state within t = " << ss.time << " (|f| = " << ss.derivative_norm << ")";
    throw IntegrationError(os.str(), ss.time, settings.chunk_time);
}

ExponentFit critical_exponent_fit(std::span<const double> omega_grid, std::span<const double> delta_n, double kappa,
                                  bool fit_omega_c) {
    if (omega_grid.size() != delta_n.size()) {
        throw ConfigError("critical_exponent_fit: size mismatch");
    }
    auto collect = [&](double omega_c, std::vector<double>& d, std::vector<double>& y) {
        d.clear();
        y.clear();
        for (std::size_t i = 0; i < omega_grid.size(); ++i) {
            const double dist = (omega_c - omega_grid[i]) / kappa;
            if (dist > 0.0) {
                d.push_back(dist);
                y.push_back(delta_n[i]);
            }
        }
    };
    ExponentFit out;
    out.omega_c = kappa;
    if (fit_omega_c) {
        if (omega_grid.empty()) {
            throw InsufficientDataError("critical_exponent_fit needs at least 5 points");
        }
        const double wmax = *std::max_element(omega_grid.begin(), omega_grid.end());
        auto sse = [&](double wc) {
            std::vector<double> d, y;
            collect(wc, d, y);
            const auto f = fit_power_law(d, y);
            double s = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) {
                const double r = std::log(y[i]) - (f.slope * std::log(d[i]) + f.intercept);
                s += r * r;
            }
            return s;
        };
        const double span = std::max(1e-6, 0.1 * kappa);
        out.omega_c = boost::math::tools::brent_find_minima(sse, wmax + 1e-12 * kappa, wmax + span, 40).first;
    }
    collect(out.omega_c, out.distance, out.delta_n);
    if (out.distance.size() < 5) {
        throw InsufficientDataError("critical_exponent_fit needs at least 5 points below omega_c");
    }
    out.fit = fit_power_law(out.distance, out.delta_n);
    return out;
}

ExponentFit critical_exponent_fit(const ModelParams& base, std::span<const double> omega_grid,
                                  const ExponentSettings& settings) {
    if (omega_grid.size() < 5) {
        throw InsufficientDataError("critical_exponent_fit needs at least 5 points");
    }
    std::vector<double> dn(omega_grid.size());
    parallel_for(omega_grid.size(), settings.threads, [&](std::size_t i) {
        ModelParams p = base;
        p.omega = omega_grid[i];
        dn[i] = mean_field_steady_state(p, default_initial_state(), settings.steady).delta_n;
    });
    return critical_exponent_fit(omega_grid, dn, base.kappa, settings.fit_omega_c);
}

GrowthFit entanglement_growth_fit(std::span<const double> times, std::span<const double> eps, double t_lo,
                                  double t_hi, double kappa, double onset_threshold) {
    if (times.size() != eps.size()) {
        throw ConfigError("entanglement_growth_fit: size mismatch");
    }
    if (times.empty()) {
        throw EmptyInputError("entanglement_growth_fit: empty series");
    }
    GrowthFit g;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] >= t_lo && times[i] <= t_hi && times[i] > 0.0) {
            x.push_back(std::log(kappa * times[i]));
            y.push_back(eps[i]);
        }
    }
    if (x.size() < 3) {
        throw InsufficientDataError("entanglement_growth_fit: fewer than 3 samples in the window");
    }
    g.fit = linear_fit(x, y);
    const double range = *std::max_element(y.begin(), y.end()) - *std::min_element(y.begin(), y.end());
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (y[i] < y[i - 1] - 1e-6 * std::max(range, 1e-12)) {
            g.non_monotone = true;
            break;
        }
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (eps[i] > onset_threshold) {
            g.first_onset = times[i];
            break;
        }
    }
    if (eps.back() > onset_threshold) {
        std::size_t i = eps.size() - 1;
        while (i > 0 && eps[i - 1] > onset_threshold) --i;
        g.onset = times[i];
    }
    return g;
}

std::vector<GapEntry> gap_scaling(std::span<const int> n_list, const ModelParams& params, int offset,
                                  const SpectrumSettings& settings, int threads) {
    if (n_list.empty()) {
        throw EmptyInputError("gap_scaling: empty N list");
    }
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] - offset < 0 || offset < 0 || (i > 0 && n_list[i] <= n_list[i - 1])) {
            throw ConfigError("gap_scaling: N list must be ascending with N >= offset >= 0");
        }
    }
    std::vector<GapEntry> out(n_list.size());
    parallel_for(n_list.size(), threads, [&](std::size_t i) {
        GapEntry& e = out[i];
        e.n = n_list[i];
        try {
            ModelParams p = params;
            p.n_total = e.n;
            const auto block = build_block(p, e.n, e.n - offset);
            const auto spec = block_spectrum(block, settings);
            e.eigenvalues = spec.eigenvalues;
            e.iterative = spec.iterative;
            e.max_residual = spec.max_residual;
        } catch (const Error& ex) {
            e.error = ex.what();
        }
    });
    return out;
}

}  // namespace bhd
