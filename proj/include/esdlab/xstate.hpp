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
 * @file xstate.hpp
 * @brief X-shaped two-qubit states, their six-variable kinetic equation under
 *        the secular generator, and closed-form solutions for four families.
 *
 * An X state has non-zero entries only on the diagonal and anti-diagonal:
 *
 *     | a  0  0  w |        a = <11|rho|11>,  d = <00|rho|00>
 *     | 0  b  z  0 |        b = <10|rho|10>,  c = <01|rho|01>
 *     | 0  z* c  0 |        z = <10|rho|01>,  w = <11|rho|00>
 *     | w* 0  0  d |
 *
 * The closed forms below were re-derived from the kinetic equation and are
 * checked against its RK4 integration in the test suite. Where they differ
 * from commonly quoted printed versions the difference is noted inline.
 */
#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "esdlab/dynamics.hpp"
#include "esdlab/error.hpp"
#include "esdlab/qmatrix.hpp"

namespace esdlab {

struct XState {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    complex w{}, z{};

    double population_sum() const { return a + b + c + d; }

    XState& operator+=(const XState& o) {
        a += o.a; b += o.b; c += o.c; d += o.d;
        w += o.w; z += o.z;
        return *this;
    }
    XState& operator*=(double s) {
        a *= s; b *= s; c *= s; d *= s;
        w *= s; z *= s;
        return *this;
    }
    friend XState operator+(XState x, const XState& y) { return x += y; }
    friend XState operator*(double s, XState x) { return x *= s; }
    friend XState operator*(XState x, double s) { return x *= s; }
    friend bool operator==(const XState&, const XState&) = default;

    /// Largest entrywise difference (complex entries by modulus).
    double max_abs_diff(const XState& o) const {
        double m = std::max({std::abs(a - o.a), std::abs(b - o.b), std::abs(c - o.c), std::abs(d - o.d)});
        return std::max({m, std::abs(w - o.w), std::abs(z - o.z)});
    }

    /// Unit trace, non-negative populations and 2x2-block positivity, each within 1e-9.
    bool is_physical(double tol = 1e-9) const {
        return std::abs(population_sum() - 1.0) <= tol && a >= -tol && b >= -tol && c >= -tol && d >= -tol &&
               std::norm(w) <= a * d + tol && std::norm(z) <= b * c + tol;
    }
};

inline ComplexMatrix4 to_matrix(const XState& x) {
    ComplexMatrix4 m;
    m(0, 0) = x.a;
    m(1, 1) = x.b;
    m(2, 2) = x.c;
    m(3, 3) = x.d;
    m(1, 2) = x.z;
    m(2, 1) = std::conj(x.z);
    m(0, 3) = x.w;
    m(3, 0) = std::conj(x.w);
    return m;
}

/// Reads the X entries of any 4x4 matrix; entries off the X are ignored.
inline XState from_matrix(const ComplexMatrix4& m) {
    return XState{m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real(), m(0, 3), m(1, 2)};
}

/// Largest modulus among the eight entries that vanish for an X state.
inline double off_x_magnitude(const ComplexMatrix4& m) {
    double best = 0.0;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            if (r != c && r + c != 3) best = std::max(best, std::abs(m(r, c)));
    return best;
}

// ---------------------------------------------------------------------------
// Initial-state families
// ---------------------------------------------------------------------------

/// Singlet fidelity f in [1/4, 1].
struct Werner { double f = 1.0; };
/// Yu-Eberly family, alpha in [0, 1]; alpha/3 sits on |11>.
struct YuEberly { double alpha = 1.0; };
/// (1-p)|10><10| + p|01><01|.
struct EgGe { double p = 0.0; };
/// s|11><11| + (1-s)|00><00|.
struct EeGg { double s = 1.0; };

using FamilySpec = std::variant<Werner, YuEberly, EgGe, EeGg>;

enum class FamilyKind { werner, ye, egge, eegg };

inline FamilyKind kind_of(const FamilySpec& spec) { return static_cast<FamilyKind>(spec.index()); }

inline std::string_view family_name(FamilyKind kind) {
    switch (kind) {
    case FamilyKind::werner: return "werner";
    case FamilyKind::ye: return "ye";
    case FamilyKind::egge: return "egge";
    case FamilyKind::eegg: return "eegg";
    }
    return "";
}

inline bool parse_family(std::string_view name, FamilyKind& out) {
    for (FamilyKind k : {FamilyKind::werner, FamilyKind::ye, FamilyKind::egge, FamilyKind::eegg}) {
        if (family_name(k) == name) {
            out = k;
            return true;
        }
    }
    return false;
}

/// Name of the family's parameter as used in configs ("f", "alpha", "p", "s").
inline std::string_view parameter_name(FamilyKind kind) {
    switch (kind) {
    case FamilyKind::werner: return "f";
    case FamilyKind::ye: return "alpha";
    case FamilyKind::egge: return "p";
    case FamilyKind::eegg: return "s";
    }
    return "";
}

struct ParameterRange {
    double min, max;
};

inline ParameterRange parameter_range(FamilyKind kind) {
    return kind == FamilyKind::werner ? ParameterRange{0.25, 1.0} : ParameterRange{0.0, 1.0};
}

inline double parameter_of(const FamilySpec& spec) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Werner>) return s.f;
            else if constexpr (std::is_same_v<T, YuEberly>) return s.alpha;
            else if constexpr (std::is_same_v<T, EgGe>) return s.p;
            else return s.s;
        },
        spec);
}

inline void validate(const FamilySpec& spec) {
    const FamilyKind kind = kind_of(spec);
    const ParameterRange r = parameter_range(kind);
    const double v = parameter_of(spec);
    if (!(v >= r.min && v <= r.max))
        throw Error(ErrorCode::ParameterOutOfRange, std::string(family_name(kind)) + " parameter " +
                                                        std::string(parameter_name(kind)) + "=" + std::to_string(v) +
                                                        " outside [" + std::to_string(r.min) + ", " +
                                                        std::to_string(r.max) + "]");
}

inline FamilySpec make_family(FamilyKind kind, double value) {
    FamilySpec spec;
    switch (kind) {
    case FamilyKind::werner: spec = Werner{value}; break;
    case FamilyKind::ye: spec = YuEberly{value}; break;
    case FamilyKind::egge: spec = EgGe{value}; break;
    case FamilyKind::eegg: spec = EeGg{value}; break;
    }
    validate(spec);
    return spec;
}

inline XState make_initial(const FamilySpec& spec) {
    validate(spec);
    return std::visit(
        [](const auto& s) -> XState {
            using T = std::decay_t<decltype(s)>;
            XState x;
            if constexpr (std::is_same_v<T, Werner>) {
                x.a = x.d = (1.0 - s.f) / 3.0;
                x.b = x.c = (1.0 + 2.0 * s.f) / 6.0;
                x.z = (1.0 - 4.0 * s.f) / 6.0;
            } else if constexpr (std::is_same_v<T, YuEberly>) {
                x.a = s.alpha / 3.0;
                x.d = (1.0 - s.alpha) / 3.0;
                x.b = x.c = 1.0 / 3.0;
                x.z = 1.0 / 3.0;
            } else if constexpr (std::is_same_v<T, EgGe>) {
                x.b = 1.0 - s.p;
                x.c = s.p;
            } else {
                x.a = s.s;
                x.d = 1.0 - s.s;
            }
            return x;
        },
        spec);
}

// ---------------------------------------------------------------------------
// Kinetic equation
// ---------------------------------------------------------------------------

/**
 * Derivative of the X entries under the secular generator.
 *
 * The b/c equations carry 3 i omega_c / 4 (z - z*): that is what the secular
 * Hamiltonian's <10|H|01> = 3 omega_c / 4 element produces, and what the
 * 2 pi / (3 omega_c) oscillation period of one-excitation states requires.
 */
inline XState kinetic_rhs(const XState& x, double gamma, double omega_c) {
    const complex i(0.0, 1.0);
    const double g = gamma;
    const double wc = omega_c;
    XState dx;
    dx.a = 3.0 / 8.0 * g * (x.b + x.c - 2.0 * x.a) + (i * wc / 4.0 * (x.w - std::conj(x.w))).real();
    dx.b = 3.0 / 8.0 * g * (x.a - 2.0 * x.b + x.d) + (3.0 * i * wc / 4.0 * (x.z - std::conj(x.z))).real();
    dx.c = 3.0 / 8.0 * g * (x.a - 2.0 * x.c + x.d) - (3.0 * i * wc / 4.0 * (x.z - std::conj(x.z))).real();
    dx.d = 3.0 / 8.0 * g * (x.b + x.c - 2.0 * x.d) - (i * wc / 4.0 * (x.w - std::conj(x.w))).real();
    dx.z = g / 8.0 * (x.w + std::conj(x.w) - 10.0 * x.z) + 3.0 * i * wc / 4.0 * (x.b - x.c);
    dx.w = g / 8.0 * (x.z + std::conj(x.z) - 10.0 * x.w) + i * wc / 4.0 * (x.a - x.d);
    return dx;
}

using KineticRhsFn = XState (*)(const XState&, double, double);

/// Upper bound of the kinetic generator's norm, same as the full secular one.
inline double kinetic_norm_bound(double gamma, double omega_c) { return 2.0 * std::abs(omega_c) + 4.0 * gamma; }

struct KineticSample {
    double t;
    XState x;
};

/// RK4 on the eight real components; throws InvariantViolation when the
/// population sum drifts by more than 1e-10.
inline std::vector<KineticSample> evolve_kinetic(const XState& x0, double gamma, double omega_c, double t_max,
                                                 double dt, KineticRhsFn rhs_fn = kinetic_rhs) {
    if (!(gamma >= 0.0)) throw Error(ErrorCode::NegativeRate, "gamma must be >= 0");
    const std::size_t n = step_count(t_max, dt);
    const double product = dt * kinetic_norm_bound(gamma, omega_c);
    if (!(product < kStabilityLimit))
        throw Error(ErrorCode::InvalidStep, "dt * |generator| = " + std::to_string(product) + " exceeds stability limit");

    auto rhs = [&](const XState& x) { return rhs_fn(x, gamma, omega_c); };
    const double sum0 = x0.population_sum();
    std::vector<KineticSample> out;
    out.reserve(n + 1);
    out.push_back({0.0, x0});
    XState x = x0;
    for (std::size_t k = 1; k <= n; ++k) {
        x = rk4_step(rhs, x, dt);
        const double t = static_cast<double>(k) * dt;
        const double drift = std::abs(x.population_sum() - sum0);
        if (!(drift < 1e-10)) throw InvariantViolation(t, "population sum drift " + std::to_string(drift));
        out.push_back({t, x});
    }
    return out;
}

inline std::vector<KineticSample> evolve_kinetic(const FamilySpec& spec, double gamma, double omega_c, double t_max,
                                                 double dt) {
    return evolve_kinetic(make_initial(spec), gamma, omega_c, t_max, dt);
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

struct EvenHyperbolic {
    double c;  ///< cosh(k x), or cos(|k| x) when k^2 < 0
    double s;  ///< sinh(k x) / k, or sin(|k| x) / |k|
};

/// Evaluates the pair for k = sqrt(kappa_sq) without choosing a branch of the root.
inline EvenHyperbolic even_hyperbolic(double kappa_sq, double x) {
    if (kappa_sq > 0.0) {
        const double k = std::sqrt(kappa_sq);
        return {std::cosh(k * x), std::sinh(k * x) / k};
    }
    if (kappa_sq < 0.0) {
        const double k = std::sqrt(-kappa_sq);
        return {std::cos(k * x), std::sin(k * x) / k};
    }
    return {1.0, x};
}

namespace detail {

inline void require_time(double t) {
    if (!(t >= 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "time must be >= 0");
}

// zeta^2 and xi^2: the squared rates of the two 2x2 coherent/dissipative blocks.
inline double zeta_sq(double gamma, double omega_c) { return gamma * gamma - 4.0 * omega_c * omega_c; }
inline double xi_sq(double gamma, double omega_c) { return gamma * gamma - 36.0 * omega_c * omega_c; }

} // namespace detail

/// Independent of omega_c.
inline XState werner_solution(double f, double gamma, double t) {
    validate(Werner{f});
    detail::require_time(t);
    const double eta = std::exp(-0.5 * gamma * t);
    const double eta2 = eta * eta, eta3 = eta2 * eta;
    const double k = 4.0 * f - 1.0;
    XState x;
    x.a = x.d = (3.0 - k * eta3) / 12.0;
    x.b = x.c = (3.0 + k * eta3) / 12.0;
    // z keeps the sign of the initial singlet coherence; w decays as eta^2 (1 - eta),
    // not eta^3 (1 - eta), which would break population/coherence consistency.
    x.z = -k / 12.0 * eta2 * (1.0 + eta);
    x.w = -k / 12.0 * eta2 * (1.0 - eta);
    return x;
}

inline XState ye_solution(double alpha, double gamma, double omega_c, double t) {
    validate(YuEberly{alpha});
    detail::require_time(t);
    const double eta = std::exp(-0.5 * gamma * t);
    const double eta2 = eta * eta, eta3 = eta2 * eta;
    const EvenHyperbolic h = even_hyperbolic(detail::zeta_sq(gamma, omega_c), 0.25 * t);
    const double m = 2.0 * alpha - 1.0;
    const double decay = (h.c + gamma * h.s) * eta2;
    XState x;
    x.a = (3.0 - eta3 + 2.0 * m * decay) / 12.0;
    x.d = (3.0 - eta3 - 2.0 * m * decay) / 12.0;
    x.b = x.c = (3.0 + eta3) / 12.0;
    x.z = eta2 * (1.0 + eta) / 6.0;
    // a - d rotates into Im w at rate omega_c/4; both decay as eta^2.
    x.w = complex(eta2 * (1.0 - eta) / 6.0, m / 3.0 * omega_c * h.s * eta2);
    return x;
}

inline XState egge_solution(double p, double gamma, double omega_c, double t) {
    validate(EgGe{p});
    detail::require_time(t);
    const double eta = std::exp(-0.5 * gamma * t);
    const double eta2 = eta * eta, eta3 = eta2 * eta;
    const EvenHyperbolic h = even_hyperbolic(detail::xi_sq(gamma, omega_c), 0.25 * t);
    // b(0) - c(0) = 1 - 2p drives both the population imbalance and Im z.
    const double n = 1.0 - 2.0 * p;
    XState x;
    x.a = x.d = (1.0 - eta3) / 4.0;
    x.b = (1.0 + eta3 + 2.0 * n * (h.c + gamma * h.s) * eta2) / 4.0;
    x.c = (1.0 + eta3 - 2.0 * n * (h.c + gamma * h.s) * eta2) / 4.0;
    x.z = complex(0.0, 3.0 * omega_c * n * h.s * eta2);
    return x;
}

inline XState eegg_solution(double s, double gamma, double omega_c, double t) {
    validate(EeGg{s});
    detail::require_time(t);
    const double eta = std::exp(-0.5 * gamma * t);
    const double eta2 = eta * eta, eta3 = eta2 * eta;
    // a, d and w form the omega_c/2 block, so zeta (not xi) governs all three.
    const EvenHyperbolic h = even_hyperbolic(detail::zeta_sq(gamma, omega_c), 0.25 * t);
    const double m = 2.0 * s - 1.0;
    XState x;
    x.b = x.c = (1.0 - eta3) / 4.0;
    x.a = (1.0 + eta3 + 2.0 * m * (h.c + gamma * h.s) * eta2) / 4.0;
    x.d = (1.0 + eta3 - 2.0 * m * (h.c + gamma * h.s) * eta2) / 4.0;
    x.w = complex(0.0, m * omega_c * h.s * eta2);
    return x;
}

inline XState closed_form(const FamilySpec& spec, double gamma, double omega_c, double t) {
    return std::visit(
        [&](const auto& s) -> XState {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Werner>) return werner_solution(s.f, gamma, t);
            else if constexpr (std::is_same_v<T, YuEberly>) return ye_solution(s.alpha, gamma, omega_c, t);
            else if constexpr (std::is_same_v<T, EgGe>) return egge_solution(s.p, gamma, omega_c, t);
            else return eegg_solution(s.s, gamma, omega_c, t);
        },
        spec);
}

} // namespace esdlab
