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
 * @file entanglement.hpp
 * @brief Concurrence (X-state formula and Wootters' general formula) and
 *        detection of sudden death and sudden birth along a sampled trace.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "esdlab/error.hpp"
#include "esdlab/qmatrix.hpp"
#include "esdlab/xstate.hpp"

namespace esdlab {

inline double f_function(const XState& x) { return std::abs(x.z) - std::sqrt(std::max(0.0, x.a * x.d)); }
inline double g_function(const XState& x) { return std::abs(x.w) - std::sqrt(std::max(0.0, x.b * x.c)); }

/// 2 max(F, G) without the clip at zero. Smooth through sudden death, so
/// crossings are located on this rather than on the concurrence itself.
inline double concurrence_witness_x(const XState& x) { return 2.0 * std::max(f_function(x), g_function(x)); }

/// 2 max(0, F, G), clamped to [0, 1].
inline double concurrence_x(const XState& x) { return std::clamp(concurrence_witness_x(x), 0.0, 1.0); }

/// Wootters lambda1 - lambda2 - lambda3 - lambda4 from the Hermitian form
/// sqrt(rho) rho~ sqrt(rho), rho~ = (sy x sy) rho* (sy x sy). Negative when separable.
inline double concurrence_witness_general(const ComplexMatrix4& rho) {
    static const ComplexMatrix4 yy = tensor(pauli(PauliAxis::y), pauli(PauliAxis::y));
    const ComplexMatrix4 flipped = yy * rho.conj() * yy;
    const ComplexMatrix4 root = psd_sqrt(rho);
    ComplexMatrix4 r = root * flipped * root;
    r = 0.5 * (r + r.adjoint());
    const auto mu = herm_eigvals(r);
    std::array<double, 4> lambda{};
    for (std::size_t k = 0; k < 4; ++k) lambda[k] = std::sqrt(std::max(0.0, mu[k]));
    return lambda[0] - lambda[1] - lambda[2] - lambda[3];
}

inline double concurrence_general(const ComplexMatrix4& rho) {
    return std::max(0.0, concurrence_witness_general(rho));
}

/// Off-X entries below this are treated as exactly X-shaped.
inline constexpr double kXFormTolerance = 1e-14;

/// X-state formula when `rho` is X-shaped, Wootters otherwise.
inline double concurrence(const ComplexMatrix4& rho) {
    if (off_x_magnitude(rho) <= kXFormTolerance) return concurrence_x(from_matrix(rho));
    return concurrence_general(rho);
}

/// Unclipped counterpart of concurrence(): positive exactly when it is.
inline double concurrence_witness(const ComplexMatrix4& rho) {
    if (off_x_magnitude(rho) <= kXFormTolerance) return concurrence_witness_x(from_matrix(rho));
    return concurrence_witness_general(rho);
}

// ---------------------------------------------------------------------------
// Sudden death detection
// ---------------------------------------------------------------------------

/// Default concurrence level below which the state counts as separable.
inline constexpr double kDefaultEpsilon = 1e-6;

struct ConcurrenceSample {
    double t = 0.0;
    double concurrence = 0.0;
    double f = 0.0;
    double g = 0.0;
    /// Unclipped witness; NaN means "use the concurrence".
    double witness = std::numeric_limits<double>::quiet_NaN();

    double smooth() const { return std::isnan(witness) ? concurrence : witness; }
};

struct ConcurrenceTrace {
    std::vector<ConcurrenceSample> samples;  ///< uniform grid starting at t = 0
    double epsilon = kDefaultEpsilon;
};

enum class EsdStatus { ok, never_entangled, positive_at_horizon };

struct Crossing {
    double t;
    bool birth;  ///< true: concurrence rises above epsilon; false: sudden death
};

struct EsdReport {
    /// Time of the final death; 0 if never entangled, +inf if still entangled at the horizon.
    double t_esd = 0.0;
    /// Number of sudden-birth events: rises of the concurrence above epsilon
    /// from a separable state, including the first onset for a separable initial state.
    int revival_count = 0;
    std::vector<Crossing> crossings;
    EsdStatus status = EsdStatus::never_entangled;
    double horizon = 0.0;
};

namespace detail {

// Cubic Lagrange interpolation of the sampled witness through the four
// grid points nearest to t.
inline double cubic_interpolate(const std::vector<ConcurrenceSample>& s, double t) {
    const std::size_t n = s.size();
    if (n < 4) {
        // Linear fallback for very short traces.
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (t <= s[i + 1].t) {
                const double u = (t - s[i].t) / (s[i + 1].t - s[i].t);
                return (1.0 - u) * s[i].smooth() + u * s[i + 1].smooth();
            }
        }
        return s.back().smooth();
    }
    const double dt = s[1].t - s[0].t;
    const auto i = static_cast<std::ptrdiff_t>(std::floor((t - s[0].t) / dt));
    const std::ptrdiff_t first = std::clamp<std::ptrdiff_t>(i - 1, 0, static_cast<std::ptrdiff_t>(n) - 4);
    double value = 0.0;
    for (std::ptrdiff_t j = first; j < first + 4; ++j) {
        double basis = 1.0;
        for (std::ptrdiff_t m = first; m < first + 4; ++m) {
            if (m == j) continue;
            basis *= (t - s[m].t) / (s[j].t - s[m].t);
        }
        value += basis * s[j].smooth();
    }
    return value;
}

} // namespace detail

/**
 * Locates every epsilon crossing of the concurrence by scanning the grid for
 * sign changes of (C - epsilon) and bisecting each bracket down to 1e-9 dt.
 *
 * `evaluate`, when given, returns the witness at an arbitrary time (a
 * closed form); otherwise the sampled witness is interpolated with local
 * cubics. The clipped concurrence has a kink at death and interpolates badly.
 */
inline EsdReport detect_esd(const ConcurrenceTrace& trace, const std::function<double(double)>& evaluate = {}) {
    const auto& s = trace.samples;
    if (s.empty()) throw Error(ErrorCode::EmptyTrace, "concurrence trace has no samples");
    const double eps = trace.epsilon;

    EsdReport report;
    report.horizon = s.back().t;
    const double dt = s.size() > 1 ? s[1].t - s[0].t : 0.0;
    auto value = [&](double t) { return evaluate ? evaluate(t) : detail::cubic_interpolate(s, t); };

    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const bool above = s[i].concurrence > eps;
        if (above == (s[i + 1].concurrence > eps)) continue;
        double lo = s[i].t, hi = s[i + 1].t;
        while (hi - lo > dt * 1e-9) {
            const double mid = 0.5 * (lo + hi);
            if ((value(mid) > eps) == above) lo = mid;
            else hi = mid;
        }
        report.crossings.push_back({0.5 * (lo + hi), !above});
        if (!above) ++report.revival_count;
    }

    const bool ever = std::any_of(s.begin(), s.end(), [&](const auto& x) { return x.concurrence > eps; });
    if (!ever) {
        report.status = EsdStatus::never_entangled;
        report.t_esd = 0.0;
    } else if (s.back().concurrence > eps) {
        report.status = EsdStatus::positive_at_horizon;
        report.t_esd = std::numeric_limits<double>::infinity();
    } else {
        report.status = EsdStatus::ok;
        report.t_esd = report.crossings.back().t;
    }
    return report;
}

/// Times of grid-level local maxima of the concurrence that exceed epsilon.
inline std::vector<double> concurrence_maxima(const ConcurrenceTrace& trace) {
    std::vector<double> out;
    const auto& s = trace.samples;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i].concurrence > trace.epsilon && s[i].concurrence > s[i - 1].concurrence &&
            s[i].concurrence >= s[i + 1].concurrence)
            out.push_back(s[i].t);
    }
    return out;
}

} // namespace esdlab
