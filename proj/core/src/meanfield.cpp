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

#include "bhdimer/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bhdimer/errors.hpp"
#include "ode.hpp"

namespace bhd {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * kPi);
    if (a <= -kPi) {
        a += 2.0 * kPi;
    }
    return a;
}

}  // namespace

MeanFieldState MeanFieldState::from_amplitudes(std::complex<double> alpha, std::complex<double> beta) {
    const double r2 = std::numbers::sqrt2;
    return {r2 * alpha.real(), r2 * alpha.imag(), r2 * beta.real(), r2 * beta.imag()};
}

std::complex<double> MeanFieldState::alpha() const { return {x_a / std::numbers::sqrt2, p_a / std::numbers::sqrt2}; }

std::complex<double> MeanFieldState::beta() const { return {x_b / std::numbers::sqrt2, p_b / std::numbers::sqrt2}; }

double MeanFieldState::norm() const { return std::sqrt(x_a * x_a + p_a * p_a + x_b * x_b + p_b * p_b); }

PolarState to_polar(const MeanFieldState& s, double eps_r) {
    const auto a = s.alpha();
    const auto b = s.beta();
    PolarState p;
    p.r_a = std::abs(a);
    p.r_b = std::abs(b);
    if (p.r_a < eps_r || p.r_b < eps_r) {
        throw SingularCoordinatesError("polar coordinates undefined: an amplitude vanishes");
    }
    const double pa = std::arg(a);
    const double pb = std::arg(b);
    p.delta_phi = wrap_angle(pb - pa);
    p.sigma_phi = 2.0 * pa + p.delta_phi;
    return p;
}

MeanFieldState from_polar(const PolarState& p) {
    const double phi_a = 0.5 * (p.sigma_phi - p.delta_phi);
    const double phi_b = 0.5 * (p.sigma_phi + p.delta_phi);
    return MeanFieldState::from_amplitudes(std::polar(p.r_a, phi_a), std::polar(p.r_b, phi_b));
}

MeanFieldState mf_rhs(const MeanFieldState& s, const ModelParams& params) {
    const double om = params.omega;
    const double k = params.kappa;
    const double u = params.u;
    const double ea = s.x_a * s.x_a + s.p_a * s.p_a;
    const double eb = s.x_b * s.x_b + s.p_b * s.p_b;
    MeanFieldState d;
    d.x_a = 0.5 * om * s.p_b - 0.25 * k * s.x_a * eb + u * s.p_a * ea;
    d.p_a = -0.5 * om * s.x_b - 0.25 * k * s.p_a * eb - u * s.x_a * ea;
    d.x_b = 0.5 * om * s.p_a + 0.25 * k * s.x_b * ea + u * s.p_b * eb;
    d.p_b = -0.5 * om * s.x_a + 0.25 * k * s.p_b * ea - u * s.x_b * eb;
    return d;
}

PolarState polar_rhs(const PolarState& s, const ModelParams& params, double eps_r) {
    if (s.r_a < eps_r || s.r_b < eps_r) {
        throw SingularCoordinatesError("polar_rhs: an amplitude is below the singular threshold");
    }
    const double om = params.omega;
    const double k = params.kappa;
    const double u = params.u;
    const double ra2 = s.r_a * s.r_a;
    const double rb2 = s.r_b * s.r_b;
    const double c = om * std::cos(s.delta_phi) / (2.0 * s.r_a * s.r_b);
    PolarState d;
    d.r_a = 0.5 * om * s.r_b * std::sin(s.delta_phi) - 0.5 * k * s.r_a * rb2;
    d.r_b = -0.5 * om * s.r_a * std::sin(s.delta_phi) + 0.5 * k * s.r_b * ra2;
    d.delta_phi = (c - 2.0 * u) * (rb2 - ra2);
    d.sigma_phi = -(c + 2.0 * u) * (ra2 + rb2);
    return d;
}

MeanFieldState pt_transform(const MeanFieldState& s) { return {s.x_b, -s.p_b, s.x_a, -s.p_a}; }

MeanFieldState default_initial_state() {
    return MeanFieldState::from_amplitudes(std::polar(std::sqrt(1.2), 0.3), std::polar(std::sqrt(0.8), -0.2));
}

double Trajectory::dt() const {
    if (times.size() < 2) {
        throw EmptyInputError("trajectory has fewer than two samples");
    }
    return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

Trajectory Trajectory::tail(double transient_fraction) const {
    if (transient_fraction < 0.0 || transient_fraction >= 1.0) {
        throw ConfigError("transient fraction must lie in [0, 1)");
    }
    const auto skip = static_cast<std::size_t>(std::floor(transient_fraction * static_cast<double>(size())));
    Trajectory out;
    out.params = params;
    out.settings = settings;
    out.default_initial_state = default_initial_state;
    out.times.assign(times.begin() + static_cast<std::ptrdiff_t>(skip), times.end());
    out.states.assign(states.begin() + static_cast<std::ptrdiff_t>(skip), states.end());
    return out;
}

std::vector<double> Trajectory::component(int index) const {
    std::vector<double> out(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        out[i] = states[i].as_array()[static_cast<std::size_t>(index)];
    }
    return out;
}

Trajectory integrate_mf(const MeanFieldState& state0, const ModelParams& params, double t_end,
                        const IntegratorSettings& settings) {
    params.validate();
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw ConfigError("t_end must be positive and finite");
    }
    if (!(settings.sample_dt > 0.0)) {
        throw ConfigError("sample_dt must be positive");
    }
    if (std::abs(state0.shell() - Conventions::shell) > settings.shell_tolerance) {
        std::ostringstream os;
        os << "initial state is off the shell: sum (x^2+p^2)/2 = " << state0.shell();
        throw ParameterDomainError(os.str());
    }
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / settings.sample_dt - 1e-9)));
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        grid[i] = t_end * static_cast<double>(i) / static_cast<double>(n);
    }

    Trajectory traj;
    traj.params = params;
    traj.settings = settings;
    traj.default_initial_state = state0 == default_initial_state();
    traj.times.reserve(grid.size());
    traj.states.reserve(grid.size());

    using State = std::array<double, 4>;
    auto rhs = [&params](const State& x, State& dx, double) {
        dx = mf_rhs(MeanFieldState::from_array(x), params).as_array();
    };
    detail::StepControl ctl;
    ctl.rel_tol = settings.rel_tol;
    ctl.abs_tol = settings.abs_tol;
    detail::integrate_sampled(rhs, state0.as_array(), 0.0, grid, ctl, [&traj](double t, const State& x) {
        traj.times.push_back(t);
        traj.states.push_back(MeanFieldState::from_array(x));
    });
    return traj;
}

std::vector<PolarState> polar_series(const Trajectory& traj) {
    std::vector<PolarState> out;
    out.reserve(traj.size());
    double offset = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        PolarState p = to_polar(traj.states[i]);
        if (i > 0) {
            const double jump = p.sigma_phi + offset - prev;
            offset -= 2.0 * kPi * std::round(jump / (2.0 * kPi));
        }
        p.sigma_phi += offset;
        prev = p.sigma_phi;
        out.push_back(p);
    }
    return out;
}

FixedPoints fixed_points(const ModelParams& params) {
    params.validate();
    FixedPoints fp;
    fp.sigma_phi_rate = -8.0 * params.u;
    const double denom = 16.0 * params.u * params.u + params.kappa * params.kappa;
    const double q = 1.0 - params.omega * params.omega / denom;
    if (q < 0.0) {
        return fp;
    }
    const double root = std::sqrt(q);
    const double plus = std::sqrt(1.0 + root);
    const double minus = std::sqrt(std::max(0.0, 1.0 - root));
    const double dphi = std::atan2(params.kappa, 4.0 * params.u);
    fp.branches.push_back({plus, minus, dphi, 0.0});
    fp.branches.push_back({minus, plus, dphi, 0.0});
    return fp;
}

double critical_u(double omega, double kappa) {
    const double r = omega / kappa;
    if (r < 1.0) {
        throw ParameterDomainError("critical_u requires omega >= kappa");
    }
    return kappa * std::sqrt(r * r - 1.0) / 4.0;
}

std::string to_string(Phase p) {
    switch (p) {
        case Phase::Stationary: return "Stationary";
        case Phase::TC1: return "TC1";
        case Phase::TC2: return "TC2";
        case Phase::TC3: return "TC3";
    }
    return "?";
}

Phase phase_from_string(const std::string& s) {
    if (s == "Stationary") return Phase::Stationary;
    if (s == "TC1") return Phase::TC1;
    if (s == "TC2") return Phase::TC2;
    if (s == "TC3") return Phase::TC3;
    throw ConfigError("unknown phase label '" + s + "'");
}

OrderParameters order_parameters(const Trajectory& traj) {
    if (traj.empty()) {
        throw EmptyInputError("order_parameters: empty trajectory");
    }
    std::vector<double> imbalance(traj.size());
    std::vector<double> ra(traj.size());
    std::vector<double> rb(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double a2 = std::norm(traj.states[i].alpha());
        const double b2 = std::norm(traj.states[i].beta());
        imbalance[i] = a2 - b2;
        ra[i] = std::sqrt(a2);
        rb[i] = std::sqrt(b2);
    }
    OrderParameters op;
    op.delta_n = 0.5 * std::abs(hann_mean(imbalance));
    op.delta_r_bar = std::abs(hann_mean(ra) - hann_mean(rb)) / std::numbers::sqrt2;
    return op;
}

bool is_near_rational(double r, int q_max, double tol) {
    for (int q = 1; q <= q_max; ++q) {
        const double p = std::round(r * q);
        if (std::abs(r - p / q) <= tol) {
            return true;
        }
    }
    return false;
}

double even_harmonic_power_ratio(std::span<const double> series, double fundamental_bin) {
    const auto power = hann_power_spectrum(series);
    const auto nb = static_cast<long>(power.size());
    auto window_max = [&](double center, long half) {
        const long c = std::lround(center);
        double m = 0.0;
        for (long k = std::max(1L, c - half); k <= std::min(nb - 1, c + half); ++k) {
            m = std::max(m, power[static_cast<std::size_t>(k)]);
        }
        return m;
    };
    const double fundamental = window_max(fundamental_bin, 1);
    if (fundamental <= 0.0) {
        return 0.0;
    }
    double worst = 0.0;
    for (int m = 2; m * fundamental_bin < static_cast<double>(nb - 2); m += 2) {
        worst = std::max(worst, window_max(m * fundamental_bin, 2));
    }
    return worst / fundamental;
}

PhaseLabel classify_phase(const Trajectory& traj, const ModelParams& params, const ClassifierSettings& settings) {
    if (traj.size() < 32) {
        throw EmptyInputError("classify_phase: trajectory too short");
    }
    const Trajectory tail = traj.tail(settings.transient_fraction);
    PhaseLabel label;

    const std::size_t late = std::max<std::size_t>(1, tail.size() / 10);
    for (std::size_t i = tail.size() - late; i < tail.size(); ++i) {
        label.derivative_norm = std::max(label.derivative_norm, mf_rhs(tail.states[i], params).norm());
    }
    const auto op = order_parameters(tail);
    label.delta_n = op.delta_n;
    label.delta_r_bar = op.delta_r_bar;

    if (label.derivative_norm < settings.eps_fp) {
        label.phase = Phase::Stationary;
        return label;
    }

    const auto pa = tail.component(1);
    const double dt = tail.dt();
    PeakSettings ps;
    ps.relative_floor = settings.peak_floor;
    const auto peaks = fourier_peaks(pa, dt, 0.0, ps);
    label.peaks = peaks.peaks;
    label.resolution = peaks.resolution;
    if (label.peaks.empty()) {
        throw InconclusivePhase("no spectral peaks in a non-stationary trajectory", label);
    }
    const double p0 = label.peaks.front().power;
    const double f0 = label.peaks.front().frequency;

    if (label.delta_r_bar > settings.eps_r) {
        bool single = true;
        for (std::size_t i = 1; i < label.peaks.size(); ++i) {
            single = single && label.peaks[i].power < settings.tc2_secondary_ratio * p0;
        }
        if (single) {
            label.phase = Phase::TC2;
            return label;
        }
        throw InconclusivePhase("unequal radii but several spectral peaks", label);
    }

    if (params.u <= settings.u_zero_tol) {
        bool odd_only = true;
        for (const auto& pk : label.peaks) {
            const double m = pk.frequency / f0;
            const long k = std::lround(m);
            const bool on_harmonic = std::abs(pk.frequency - static_cast<double>(k) * f0) <= 2.0 * label.resolution;
            odd_only = odd_only && k >= 1 && (k % 2 == 1) && on_harmonic;
        }
        label.even_harmonic_ratio = even_harmonic_power_ratio(pa, f0 / label.resolution);
        if (odd_only && label.even_harmonic_ratio < settings.even_harmonic_ratio) {
            label.phase = Phase::TC1;
            return label;
        }
    }

    for (std::size_t i = 0; i < label.peaks.size(); ++i) {
        for (std::size_t j = i + 1; j < label.peaks.size(); ++j) {
            const double lo = std::min(label.peaks[i].frequency, label.peaks[j].frequency);
            const double hi = std::max(label.peaks[i].frequency, label.peaks[j].frequency);
            if (lo <= 0.0) {
                continue;
            }
            if (!is_near_rational(hi / lo, settings.rational_q_max, settings.rational_tol)) {
                label.phase = Phase::TC3;
                return label;
            }
        }
    }
    throw InconclusivePhase("equal radii without an incommensurate peak pair", label);
}

}  // namespace bhd
