// Copyright 2026 The esdlab Authors
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

/**
 * @file dynamics.hpp
 * @brief Master-equation generators for two driven, coupled qubits and a
 *        fixed-step RK4 integrator for the 4x4 density matrix.
 *
 * All rates and frequencies are in units of a reference decay rate, times in
 * its inverse. Three generators are provided:
 *  - RotatingFrameGenerator: RWA Hamiltonian plus zero-temperature amplitude damping.
 *  - SecularGenerator: the time-averaged equation in the drive's interaction
 *    picture, valid for Rabi frequencies much larger than the decay rate.
 *  - ThermalUndrivenGenerator: no drive, amplitude damping into baths with
 *    thermal occupations nbar_j.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "esdlab/error.hpp"
#include "esdlab/qmatrix.hpp"

namespace esdlab {

struct SystemParams {
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    double rabi1 = 0.0;
    double rabi2 = 0.0;
    double detuning1 = 0.0;
    double detuning2 = 0.0;
    double omega_xx = 0.0;
    double omega_yy = 0.0;
    double nbar1 = 0.0;
    double nbar2 = 0.0;

    /// Effective flip-flop coupling after the rotating-wave approximation.
    double omega_c() const { return omega_xx + omega_yy; }

    void validate() const {
        if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0))
            throw Error(ErrorCode::NegativeRate, "relaxation rates must be >= 0");
        if (!(nbar1 >= 0.0) || !(nbar2 >= 0.0))
            throw Error(ErrorCode::ParameterOutOfRange, "thermal occupations must be >= 0");
    }

    /// Identical qubits, resonant drive, coupling placed entirely in omega_xx.
    static SystemParams symmetric(double gamma, double rabi, double omega_c, double nbar = 0.0) {
        SystemParams p;
        p.gamma1 = p.gamma2 = gamma;
        p.rabi1 = p.rabi2 = rabi;
        p.omega_xx = omega_c;
        p.nbar1 = p.nbar2 = nbar;
        return p;
    }
};

// ---------------------------------------------------------------------------
// Density matrices
// ---------------------------------------------------------------------------

inline constexpr double kHermiticityTolerance = 1e-9;
inline constexpr double kTraceTolerance = 1e-9;
inline constexpr double kPositivityTolerance = -1e-7;

struct DensityCheck {
    double hermiticity = 0.0;  ///< max |rho - rho^dagger|
    double trace_error = 0.0;  ///< |tr rho - 1|
    double min_eigenvalue = 0.0;

    bool ok() const {
        return hermiticity < kHermiticityTolerance && trace_error < kTraceTolerance &&
               min_eigenvalue >= kPositivityTolerance;
    }
};

inline DensityCheck check_density(const ComplexMatrix4& rho) {
    DensityCheck c;
    c.hermiticity = rho.hermiticity_defect();
    c.trace_error = std::abs(rho.trace() - 1.0);
    c.min_eigenvalue = herm_eigvals(0.5 * (rho + rho.adjoint()))[3];
    return c;
}

/// A validated two-qubit state: Hermitian, unit trace, positive within tolerance.
class DensityMatrix {
public:
    explicit DensityMatrix(const ComplexMatrix4& m) : m_(m) {
        const DensityCheck c = check_density(m);
        if (!(c.hermiticity < kHermiticityTolerance))
            throw Error(ErrorCode::NotHermitian, "density matrix defect " + std::to_string(c.hermiticity));
        if (!(c.trace_error < kTraceTolerance))
            throw Error(ErrorCode::InvariantViolated, "trace deviates from 1 by " + std::to_string(c.trace_error));
        if (!(c.min_eigenvalue >= kPositivityTolerance))
            throw Error(ErrorCode::NotPositive, "min eigenvalue " + std::to_string(c.min_eigenvalue));
    }

    const ComplexMatrix4& matrix() const { return m_; }
    operator const ComplexMatrix4&() const { return m_; }

private:
    ComplexMatrix4 m_;
};

// ---------------------------------------------------------------------------
// Hamiltonian and dissipators
// ---------------------------------------------------------------------------

/// H = sum_j (delta_j/2 sz_j + Omega_j/2 sx_j) + omega_c/2 (sx_1 sx_2 + sy_1 sy_2).
inline ComplexMatrix4 build_h_rf(const SystemParams& p) {
    const auto sx1 = embed_pauli(PauliAxis::x, Qubit::first);
    const auto sx2 = embed_pauli(PauliAxis::x, Qubit::second);
    const auto sy1 = embed_pauli(PauliAxis::y, Qubit::first);
    const auto sy2 = embed_pauli(PauliAxis::y, Qubit::second);
    const auto sz1 = embed_pauli(PauliAxis::z, Qubit::first);
    const auto sz2 = embed_pauli(PauliAxis::z, Qubit::second);
    return 0.5 * p.detuning1 * sz1 + 0.5 * p.rabi1 * sx1 + 0.5 * p.detuning2 * sz2 +
           0.5 * p.rabi2 * sx2 + 0.5 * p.omega_c() * (sx1 * sx2 + sy1 * sy2);
}

/// rate/2 (2 L rho L^dagger - L^dagger L rho - rho L^dagger L)
inline ComplexMatrix4 dissipator(const ComplexMatrix4& l, double rate, const ComplexMatrix4& rho) {
    if (!(rate >= 0.0)) throw Error(ErrorCode::NegativeRate, "dissipator rate " + std::to_string(rate));
    if (rate == 0.0) return ComplexMatrix4::zero();
    const ComplexMatrix4 ld = l.adjoint();
    const ComplexMatrix4 ldl = ld * l;
    return (0.5 * rate) * (2.0 * (l * rho * ld) - ldl * rho - rho * ldl);
}

namespace detail {

// Spectral-norm bound of a Liouvillian built from H and jump operators with
// |L| <= 1: |[H, .]| <= 2 |H|, each dissipator <= 2 rate.
inline double generator_norm_bound(const ComplexMatrix4& h, double dissipative_rates) {
    const auto ev = herm_eigvals(h);
    const double h_norm = std::max(std::abs(ev[0]), std::abs(ev[3]));
    return 2.0 * h_norm + 2.0 * dissipative_rates;
}

} // namespace detail

/// d rho/dt = -i[H_rf, rho] + sum_j D[sigma_j^-] at rate gamma_j.
class RotatingFrameGenerator {
public:
    explicit RotatingFrameGenerator(const SystemParams& p)
        : h_(build_h_rf(p)),
          lower1_(embed_pauli(PauliAxis::minus, Qubit::first)),
          lower2_(embed_pauli(PauliAxis::minus, Qubit::second)),
          gamma1_(p.gamma1),
          gamma2_(p.gamma2) {
        p.validate();
    }

    ComplexMatrix4 operator()(const ComplexMatrix4& rho) const {
        const complex minus_i(0.0, -1.0);
        return minus_i * commutator(h_, rho) + dissipator(lower1_, gamma1_, rho) +
               dissipator(lower2_, gamma2_, rho);
    }

    const ComplexMatrix4& hamiltonian() const { return h_; }
    double norm_bound() const { return detail::generator_norm_bound(h_, gamma1_ + gamma2_); }

private:
    ComplexMatrix4 h_, lower1_, lower2_;
    double gamma1_, gamma2_;
};

/// Secular (time-averaged) equation in the interaction picture of a strong,
/// resonant, symmetric drive. Defined only for gamma1 == gamma2, rabi1 == rabi2,
/// zero detunings and nbar == 0; anything else throws SecularPreconditionViolated.
class SecularGenerator {
public:
    explicit SecularGenerator(const SystemParams& p) : gamma_(p.gamma1) {
        p.validate();
        if (p.gamma1 != p.gamma2)
            throw Error(ErrorCode::SecularPreconditionViolated, "secular equation needs gamma1 == gamma2");
        if (p.rabi1 != p.rabi2)
            throw Error(ErrorCode::SecularPreconditionViolated, "secular equation needs rabi1 == rabi2");
        if (p.detuning1 != 0.0 || p.detuning2 != 0.0)
            throw Error(ErrorCode::SecularPreconditionViolated, "secular equation needs resonant driving");
        if (p.nbar1 != 0.0 || p.nbar2 != 0.0)
            throw Error(ErrorCode::SecularPreconditionViolated, "secular equation needs zero-temperature baths");

        const auto sx1 = embed_pauli(PauliAxis::x, Qubit::first);
        const auto sx2 = embed_pauli(PauliAxis::x, Qubit::second);
        const auto sy1 = embed_pauli(PauliAxis::y, Qubit::first);
        const auto sy2 = embed_pauli(PauliAxis::y, Qubit::second);
        const auto sz1 = embed_pauli(PauliAxis::z, Qubit::first);
        const auto sz2 = embed_pauli(PauliAxis::z, Qubit::second);
        h_ = (0.25 * p.omega_c()) * (2.0 * (sx1 * sx2) + sy1 * sy2 + sz1 * sz2);
        for (Qubit q : {Qubit::first, Qubit::second}) {
            const std::size_t j = q == Qubit::first ? 0 : 1;
            plus_[j] = embed_pauli(PauliAxis::plus, q);
            minus_[j] = embed_pauli(PauliAxis::minus, q);
            z_[j] = embed_pauli(PauliAxis::z, q);
            pm_[j] = plus_[j] * minus_[j];
            mp_[j] = minus_[j] * plus_[j];
        }
    }

    ComplexMatrix4 operator()(const ComplexMatrix4& rho) const {
        const complex minus_i(0.0, -1.0);
        ComplexMatrix4 out = minus_i * commutator(h_, rho);
        if (gamma_ == 0.0) return out;
        for (std::size_t j = 0; j < 2; ++j) {
            const auto& sp = plus_[j];
            const auto& sm = minus_[j];
            const auto& sz = z_[j];
            out += (gamma_ / 8.0) * (sp * rho * sp + sm * rho * sm + sz * rho * sz - rho);
            out += (3.0 * gamma_ / 16.0) *
                   (2.0 * (sm * rho * sp) + 2.0 * (sp * rho * sm) - pm_[j] * rho - mp_[j] * rho -
                    rho * pm_[j] - rho * mp_[j]);
        }
        return out;
    }

    const ComplexMatrix4& hamiltonian() const { return h_; }
    double norm_bound() const { return detail::generator_norm_bound(h_, 2.0 * gamma_); }

private:
    double gamma_;
    ComplexMatrix4 h_;
    std::array<ComplexMatrix4, 2> plus_, minus_, z_, pm_, mp_;
};

/// Undriven qubits (Omega_j = 0) relaxing into baths at thermal occupation nbar_j:
/// gamma_j (nbar_j + 1) D[sigma_j^-] + gamma_j nbar_j D[sigma_j^+].
class ThermalUndrivenGenerator {
public:
    explicit ThermalUndrivenGenerator(const SystemParams& p) {
        p.validate();
        SystemParams undriven = p;
        undriven.rabi1 = undriven.rabi2 = 0.0;
        h_ = build_h_rf(undriven);
        lower_ = {embed_pauli(PauliAxis::minus, Qubit::first), embed_pauli(PauliAxis::minus, Qubit::second)};
        raise_ = {embed_pauli(PauliAxis::plus, Qubit::first), embed_pauli(PauliAxis::plus, Qubit::second)};
        down_ = {p.gamma1 * (p.nbar1 + 1.0), p.gamma2 * (p.nbar2 + 1.0)};
        up_ = {p.gamma1 * p.nbar1, p.gamma2 * p.nbar2};
    }

    ComplexMatrix4 operator()(const ComplexMatrix4& rho) const {
        const complex minus_i(0.0, -1.0);
        ComplexMatrix4 out = minus_i * commutator(h_, rho) + dissipator(lower_[0], down_[0], rho) +
                             dissipator(lower_[1], down_[1], rho);
        if (up_[0] != 0.0) out += dissipator(raise_[0], up_[0], rho);
        if (up_[1] != 0.0) out += dissipator(raise_[1], up_[1], rho);
        return out;
    }

    double norm_bound() const {
        return detail::generator_norm_bound(h_, down_[0] + down_[1] + up_[0] + up_[1]);
    }

private:
    ComplexMatrix4 h_;
    std::array<ComplexMatrix4, 2> lower_, raise_;
    std::array<double, 2> down_{}, up_{};
};

inline ComplexMatrix4 rhs_rotating_frame(const SystemParams& p, const ComplexMatrix4& rho) {
    return RotatingFrameGenerator(p)(rho);
}

inline ComplexMatrix4 rhs_secular(const SystemParams& p, const ComplexMatrix4& rho) {
    return SecularGenerator(p)(rho);
}

inline ComplexMatrix4 rhs_thermal_undriven(const SystemParams& p, const ComplexMatrix4& rho) {
    return ThermalUndrivenGenerator(p)(rho);
}

/// Bose-Einstein occupation 1/(exp(larmor/T) - 1) with hbar = k_B = 1.
inline double nbar_from_temperature(double larmor, double temperature) {
    if (!(larmor > 0.0)) throw Error(ErrorCode::NonPositiveLarmor, "larmor frequency must be > 0");
    if (!(temperature >= 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "temperature must be >= 0");
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(larmor / temperature);
}

/// Rho = U rho_rf U^dagger with U = exp(i Omega t (sx_1 + sx_2) / 2).
inline ComplexMatrix4 interaction_transform(const ComplexMatrix4& rho_rf, double t, double rabi) {
    const double half = 0.5 * rabi * t;
    const ComplexMatrix2 u = std::cos(half) * ComplexMatrix2::identity() +
                             complex(0.0, std::sin(half)) * pauli(PauliAxis::x);
    const ComplexMatrix4 uu = tensor(u, u);
    return uu * rho_rf * uu.adjoint();
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

/// dt * |generator| must stay below this for the fixed RK4 step to be accepted.
inline constexpr double kStabilityLimit = 0.1;

/// min(1e-3/gamma, 0.01/rabi, 0.01/omega_c), ignoring zero scales.
inline double default_step(double gamma, double rabi, double omega_c) {
    double dt = gamma > 0.0 ? 1e-3 / gamma : 1e-3;
    if (rabi != 0.0) dt = std::min(dt, 0.01 / std::abs(rabi));
    if (omega_c != 0.0) dt = std::min(dt, 0.01 / std::abs(omega_c));
    return dt;
}

/// Number of RK4 steps for a uniform grid 0, dt, ..., n dt <= t_max.
inline std::size_t step_count(double t_max, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidStep, "dt must be > 0");
    if (!(t_max >= dt)) throw Error(ErrorCode::InvalidStep, "t_max must be >= dt");
    return static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
}

template <class Rhs, class State>
State rk4_step(const Rhs& rhs, const State& y, double dt) {
    const State k1 = rhs(y);
    const State k2 = rhs(y + (0.5 * dt) * k1);
    const State k3 = rhs(y + (0.5 * dt) * k2);
    const State k4 = rhs(y + dt * k3);
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <class Rhs>
void check_step_stability(const Rhs& rhs, double dt) {
    if constexpr (requires { rhs.norm_bound(); }) {
        const double product = dt * rhs.norm_bound();
        if (!(product < kStabilityLimit))
            throw Error(ErrorCode::InvalidStep, "dt * |generator| = " + std::to_string(product) +
                                                    " exceeds stability limit " + std::to_string(kStabilityLimit));
    }
}

/// Worst values seen by the integrator's per-sample checks.
struct InvariantStats {
    double max_trace_drift = 0.0;
    double max_hermiticity = 0.0;
    double min_eigenvalue = std::numeric_limits<double>::infinity();

    void merge(const InvariantStats& o) {
        max_trace_drift = std::max(max_trace_drift, o.max_trace_drift);
        max_hermiticity = std::max(max_hermiticity, o.max_hermiticity);
        min_eigenvalue = std::min(min_eigenvalue, o.min_eigenvalue);
    }
};

/**
 * Integrates d rho/dt = rhs(rho) with classic RK4 on a uniform grid and
 * calls `observe(t, rho)` at every grid time, including t = 0.
 *
 * Each sample is checked against the initial trace (drift < 1e-9), the
 * Hermiticity tolerance and the positivity tolerance; the first failure
 * throws InvariantViolation carrying the offending time.
 */
template <class Rhs, class Observer>
void integrate_observed(const Rhs& rhs, const ComplexMatrix4& rho0, double t_max, double dt, Observer&& observe,
                        InvariantStats* stats = nullptr) {
    const std::size_t n = step_count(t_max, dt);
    check_step_stability(rhs, dt);

    const complex trace0 = rho0.trace();
    InvariantStats local;
    auto verify = [&](double t, const ComplexMatrix4& rho) {
        if (!rho.all_finite()) throw InvariantViolation(t, "non-finite density matrix");
        const double drift = std::abs(rho.trace() - trace0);
        const double herm = rho.hermiticity_defect();
        const double min_ev = herm_eigvals(0.5 * (rho + rho.adjoint()))[3];
        local.max_trace_drift = std::max(local.max_trace_drift, drift);
        local.max_hermiticity = std::max(local.max_hermiticity, herm);
        local.min_eigenvalue = std::min(local.min_eigenvalue, min_ev);
        if (stats) *stats = local;
        if (!(drift < kTraceTolerance)) throw InvariantViolation(t, "trace drift " + std::to_string(drift));
        if (!(herm < kHermiticityTolerance)) throw InvariantViolation(t, "Hermiticity defect " + std::to_string(herm));
        if (!(min_ev >= kPositivityTolerance))
            throw InvariantViolation(t, "min eigenvalue " + std::to_string(min_ev));
    };

    ComplexMatrix4 rho = rho0;
    verify(0.0, rho);
    observe(0.0, rho);
    for (std::size_t i = 1; i <= n; ++i) {
        rho = rk4_step(rhs, rho, dt);
        const double t = static_cast<double>(i) * dt;
        verify(t, rho);
        observe(t, rho);
    }
}

struct Trajectory {
    std::vector<double> times;
    std::vector<ComplexMatrix4> states;
    double dt = 0.0;
    std::string model;
};

template <class Rhs>
Trajectory integrate(const Rhs& rhs, const DensityMatrix& rho0, double t_max, double dt, std::string model = {}) {
    Trajectory traj;
    traj.dt = dt;
    traj.model = std::move(model);
    integrate_observed(rhs, rho0.matrix(), t_max, dt, [&](double t, const ComplexMatrix4& rho) {
        traj.times.push_back(t);
        traj.states.push_back(rho);
    });
    return traj;
}

} // namespace esdlab
