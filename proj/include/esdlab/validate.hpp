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
 * @file validate.hpp
 * @brief Self-consistency checks between independent implementations:
 *        closed forms vs RK4 on the kinetic equations, kinetic equations vs
 *        the full secular generator, the X-state concurrence formula vs
 *        Wootters, and the measured RK4 convergence order.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "esdlab/dynamics.hpp"
#include "esdlab/entanglement.hpp"
#include "esdlab/xstate.hpp"

namespace esdlab {

/// Random physical X state: Dirichlet populations, coherences inside the
/// positivity disks |w|^2 <= ad and |z|^2 <= bc.
template <class Rng>
XState random_x_state(Rng& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    XState x;
    x.a = expo(rng);
    x.b = expo(rng);
    x.c = expo(rng);
    x.d = expo(rng);
    const double sum = x.population_sum();
    x.a /= sum;
    x.b /= sum;
    x.c /= sum;
    x.d /= sum;
    const double two_pi = 2.0 * std::acos(-1.0);
    x.w = std::polar(std::sqrt(x.a * x.d) * unit(rng), two_pi * unit(rng));
    x.z = std::polar(std::sqrt(x.b * x.c) * unit(rng), two_pi * unit(rng));
    return x;
}

/// Random member of a family, uniform over its parameter range.
template <class Rng>
FamilySpec random_family(FamilyKind kind, Rng& rng) {
    const ParameterRange r = parameter_range(kind);
    std::uniform_real_distribution<double> dist(r.min, r.max);
    return make_family(kind, dist(rng));
}

struct CheckResult {
    std::string name;
    double deviation = 0.0;  ///< worst observed value
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct ValidationOptions {
    KineticRhsFn kinetic = kinetic_rhs;  ///< replaced by tests to check that mutations are caught
    int draws_per_family = 5;
    int random_states = 200;
    double dt = 1e-3;
    double t_max = 10.0;
    std::uint64_t seed = 20260401;
};

/// Closed forms against RK4 on the kinetic equations, entrywise over [0, t_max].
inline CheckResult check_closed_form_vs_kinetic(const ValidationOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> coupling(0.0, 10.0);
    std::uniform_real_distribution<double> rate(0.2, 2.0);
    CheckResult r{"closed-form vs kinetic", 0.0, 1e-6, false, {}};
    for (FamilyKind kind : {FamilyKind::werner, FamilyKind::ye, FamilyKind::egge, FamilyKind::eegg}) {
        for (int k = 0; k < opt.draws_per_family; ++k) {
            const FamilySpec spec = random_family(kind, rng);
            const double gamma = rate(rng);
            const double wc = coupling(rng);
            const double dt = std::min(opt.dt, default_step(gamma, 0.0, wc));
            const std::string where = std::string(family_name(kind)) + " param=" +
                                      std::to_string(parameter_of(spec)) + " gamma=" + std::to_string(gamma) +
                                      " omega_c=" + std::to_string(wc);
            try {
                for (const auto& s : evolve_kinetic(make_initial(spec), gamma, wc, opt.t_max, dt, opt.kinetic)) {
                    const double dev = s.x.max_abs_diff(closed_form(spec, gamma, wc, s.t));
                    if (dev > r.deviation) {
                        r.deviation = dev;
                        r.detail = where + " t=" + std::to_string(s.t);
                    }
                }
            } catch (const Error& e) {
                // An unphysical trajectory is itself a disagreement.
                r.deviation = std::numeric_limits<double>::infinity();
                r.detail = where + ": " + e.what();
                return r;
            }
        }
    }
    r.passed = r.deviation <= r.tolerance;
    return r;
}

/// Kinetic derivatives against the X entries of the full secular generator;
/// the generator must also leave the off-X entries at zero.
inline CheckResult check_kinetic_vs_secular(const ValidationOptions& opt) {
    std::mt19937_64 rng(opt.seed + 1);
    std::uniform_real_distribution<double> coupling(-10.0, 10.0);
    std::uniform_real_distribution<double> rate(0.0, 3.0);
    CheckResult r{"kinetic vs secular generator", 0.0, 1e-12, false, {}};
    for (int k = 0; k < opt.random_states; ++k) {
        const XState x = random_x_state(rng);
        const SystemParams p = SystemParams::symmetric(rate(rng), 25.0, coupling(rng));
        const ComplexMatrix4 full = SecularGenerator(p)(to_matrix(x));
        const double dev =
            std::max(opt.kinetic(x, p.gamma1, p.omega_c()).max_abs_diff(from_matrix(full)), off_x_magnitude(full));
        r.deviation = std::max(r.deviation, dev);
    }
    r.passed = r.deviation <= r.tolerance;
    return r;
}

/// X-state formula against Wootters' general construction.
inline CheckResult check_concurrence_formula(const ValidationOptions& opt) {
    std::mt19937_64 rng(opt.seed + 2);
    CheckResult r{"X-state concurrence vs Wootters", 0.0, 1e-8, false, {}};
    for (int k = 0; k < opt.random_states; ++k) {
        const XState x = random_x_state(rng);
        r.deviation = std::max(r.deviation, std::abs(concurrence_x(x) - concurrence_general(to_matrix(x))));
    }
    r.passed = r.deviation <= r.tolerance;
    return r;
}

/// Observed order log2(e(dt) / e(dt/2)) of the kinetic integrator against the
/// YE closed form; must be close to 4.
inline CheckResult check_convergence_order(const ValidationOptions& opt) {
    const FamilySpec spec = YuEberly{0.8};
    const double gamma = 1.0, wc = 2.0, t_max = 2.0;
    auto error_at = [&](double dt) {
        double e = 0.0;
        for (const auto& s : evolve_kinetic(make_initial(spec), gamma, wc, t_max, dt, opt.kinetic))
            e = std::max(e, s.x.max_abs_diff(closed_form(spec, gamma, wc, s.t)));
        return e;
    };
    const double coarse = 0.01;
    const double e1 = error_at(coarse), e2 = error_at(coarse / 2.0);
    CheckResult r{"RK4 convergence order", std::log2(e1 / e2), 3.5, false, {}};
    char buf[96];
    std::snprintf(buf, sizeof buf, "err(%g)=%.3e err(%g)=%.3e", coarse, e1, coarse / 2.0, e2);
    r.detail = buf;
    r.passed = r.deviation >= r.tolerance && r.deviation <= 4.5;
    return r;
}

inline std::vector<CheckResult> run_validation(const ValidationOptions& opt = {}) {
    return {check_closed_form_vs_kinetic(opt), check_kinetic_vs_secular(opt), check_concurrence_formula(opt),
            check_convergence_order(opt)};
}

} // namespace esdlab
