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
 * @file scan.hpp
 * @brief Single runs under any of the five evolution models, grid scans of
 *        the sudden-death time over (family parameter, omega_c), and the
 *        rotating-frame vs secular comparison.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "esdlab/dynamics.hpp"
#include "esdlab/entanglement.hpp"
#include "esdlab/error.hpp"
#include "esdlab/xstate.hpp"

namespace esdlab {

enum class Model { kinetic, closed_form, secular_full, rotating_frame, thermal_undriven };

inline std::string_view model_name(Model m) {
    switch (m) {
    case Model::kinetic: return "kinetic";
    case Model::closed_form: return "closed-form";
    case Model::secular_full: return "secular-full";
    case Model::rotating_frame: return "rotating-frame";
    case Model::thermal_undriven: return "thermal-undriven";
    }
    return "";
}

inline bool parse_model(std::string_view name, Model& out) {
    for (Model m : {Model::kinetic, Model::closed_form, Model::secular_full, Model::rotating_frame,
                    Model::thermal_undriven}) {
        if (model_name(m) == name) {
            out = m;
            return true;
        }
    }
    return false;
}

/// Kinetic, closed-form and secular-full all evolve under the secular generator.
inline bool is_secular(Model m) {
    return m == Model::kinetic || m == Model::closed_form || m == Model::secular_full;
}

struct RunSpec {
    Model model = Model::kinetic;
    FamilySpec family = Werner{1.0};
    SystemParams params;
    double t_max = 10.0;
    double dt = 0.0;  ///< <= 0 selects default_step for the model
    double epsilon = kDefaultEpsilon;
};

inline double effective_step(const RunSpec& spec) {
    if (spec.dt > 0.0) return spec.dt;
    const SystemParams& p = spec.params;
    const double gamma = std::max(p.gamma1, p.gamma2);
    const double rabi = spec.model == Model::rotating_frame ? std::max(std::abs(p.rabi1), std::abs(p.rabi2)) : 0.0;
    return default_step(gamma, rabi, p.omega_c());
}

struct Simulation {
    std::vector<double> times;
    std::vector<XState> x;  ///< X entries of the state at each time
    ConcurrenceTrace trace;
    EsdReport report;
    InvariantStats invariants;
    double dt = 0.0;
};

namespace detail {

// Smallest eigenvalue of an X matrix: the two 2x2 blocks diagonalize separately.
inline double x_min_eigenvalue(const XState& x) {
    auto block_min = [](double p, double q, complex off) {
        const double mean = 0.5 * (p + q);
        const double half = 0.5 * (p - q);
        return mean - std::sqrt(half * half + std::norm(off));
    };
    return std::min(block_min(x.a, x.d, x.w), block_min(x.b, x.c, x.z));
}

inline void record(Simulation& sim, double t, const XState& x, double c, double witness, bool keep_states) {
    if (keep_states) {
        sim.times.push_back(t);
        sim.x.push_back(x);
    }
    sim.trace.samples.push_back({t, c, f_function(x), g_function(x), witness});
}

inline void record_x_invariants(Simulation& sim, const XState& x) {
    sim.invariants.max_trace_drift = std::max(sim.invariants.max_trace_drift, std::abs(x.population_sum() - 1.0));
    sim.invariants.min_eigenvalue = std::min(sim.invariants.min_eigenvalue, x_min_eigenvalue(x));
}

} // namespace detail

/**
 * Evolves the family's initial state under `spec.model` on a uniform grid and
 * detects sudden death. `keep_states = false` keeps only the concurrence trace.
 *
 * Throws SecularPreconditionViolated for secular models with asymmetric
 * parameters, InvalidStep for steps beyond the stability limit and
 * InvariantViolation when a sample leaves the physical state space.
 */
inline Simulation simulate(const RunSpec& spec, bool keep_states = true) {
    validate(spec.family);
    spec.params.validate();
    if (!(spec.epsilon >= 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "epsilon must be >= 0");

    Simulation sim;
    sim.dt = effective_step(spec);
    sim.trace.epsilon = spec.epsilon;
    const SystemParams& p = spec.params;
    const XState x0 = make_initial(spec.family);
    std::function<double(double)> evaluator;

    switch (spec.model) {
    case Model::kinetic: {
        SecularGenerator check(p);
        (void)check;
        for (const auto& sample : evolve_kinetic(x0, p.gamma1, p.omega_c(), spec.t_max, sim.dt)) {
            detail::record_x_invariants(sim, sample.x);
            detail::record(sim, sample.t, sample.x, concurrence_x(sample.x), concurrence_witness_x(sample.x),
                           keep_states);
        }
        break;
    }
    case Model::closed_form: {
        SecularGenerator check(p);
        (void)check;
        const std::size_t n = step_count(spec.t_max, sim.dt);
        const FamilySpec family = spec.family;
        const double gamma = p.gamma1, wc = p.omega_c();
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = static_cast<double>(i) * sim.dt;
            const XState x = closed_form(family, gamma, wc, t);
            detail::record_x_invariants(sim, x);
            detail::record(sim, t, x, concurrence_x(x), concurrence_witness_x(x), keep_states);
        }
        evaluator = [family, gamma, wc](double t) {
            return concurrence_witness_x(closed_form(family, gamma, wc, t));
        };
        break;
    }
    case Model::secular_full:
    case Model::rotating_frame:
    case Model::thermal_undriven: {
        auto observe = [&](double t, const ComplexMatrix4& rho) {
            const XState x = from_matrix(rho);
            detail::record(sim, t, x, concurrence(rho), concurrence_witness(rho), keep_states);
        };
        const ComplexMatrix4 rho0 = to_matrix(x0);
        if (spec.model == Model::secular_full)
            integrate_observed(SecularGenerator(p), rho0, spec.t_max, sim.dt, observe, &sim.invariants);
        else if (spec.model == Model::rotating_frame)
            integrate_observed(RotatingFrameGenerator(p), rho0, spec.t_max, sim.dt, observe, &sim.invariants);
        else
            integrate_observed(ThermalUndrivenGenerator(p), rho0, spec.t_max, sim.dt, observe, &sim.invariants);
        break;
    }
    }

    sim.report = detect_esd(sim.trace, evaluator);
    return sim;
}

// ---------------------------------------------------------------------------
// Grid scans
// ---------------------------------------------------------------------------

struct Axis {
    double min = 0.0;
    double max = 1.0;
    int steps = 2;

    double value(int i) const {
        if (i == steps - 1) return max;
        return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
};

struct ScanConfig {
    FamilyKind family = FamilyKind::werner;
    Axis param{0.25, 1.0, 101};
    Axis omega_c{0.0, 20.0, 101};
    Model model = Model::kinetic;
    double t_max = 10.0;
    double dt = 0.0;  ///< <= 0: default_step per cell
    double gamma = 1.0;
    double rabi = 25.0;
    double nbar1 = 0.0;
    double nbar2 = 0.0;
    double epsilon = kDefaultEpsilon;
    unsigned threads = 0;  ///< 0: ESDLAB_THREADS, then hardware concurrency

    void validate() const {
        if (param.steps < 2 || omega_c.steps < 2)
            throw Error(ErrorCode::ParameterOutOfRange, "scan axes need at least 2 steps");
        const ParameterRange r = parameter_range(family);
        if (!(param.min >= r.min && param.max <= r.max && param.min <= param.max))
            throw Error(ErrorCode::ParameterOutOfRange, "parameter axis outside family range");
        if (!(omega_c.min <= omega_c.max)) throw Error(ErrorCode::ParameterOutOfRange, "omega_c axis reversed");
        if (!(t_max > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "t_max must be > 0");
    }
};

enum class CellStatus { ok, never_entangled, positive_at_horizon, numeric_failure };

inline std::string_view status_name(CellStatus s) {
    switch (s) {
    case CellStatus::ok: return "OK";
    case CellStatus::never_entangled: return "NEVER_ENTANGLED";
    case CellStatus::positive_at_horizon: return "POSITIVE_AT_HORIZON";
    case CellStatus::numeric_failure: return "NUMERIC_FAILURE";
    }
    return "";
}

inline bool parse_status(std::string_view name, CellStatus& out) {
    for (CellStatus s : {CellStatus::ok, CellStatus::never_entangled, CellStatus::positive_at_horizon,
                         CellStatus::numeric_failure}) {
        if (status_name(s) == name) {
            out = s;
            return true;
        }
    }
    return false;
}

struct ScanCell {
    double param = 0.0;
    double omega_c = 0.0;
    double t_esd = 0.0;
    int revivals = 0;
    CellStatus status = CellStatus::ok;
    std::string message;  ///< error text for NUMERIC_FAILURE cells

    friend bool operator==(const ScanCell&, const ScanCell&) = default;
};

struct ScanResult {
    ScanConfig config;
    std::vector<ScanCell> cells;  ///< param-major: cells[i * omega_steps + j]
    std::vector<InvariantStats> invariants;  ///< per cell, same order

    InvariantStats merged_invariants() const {
        InvariantStats all;
        for (const auto& s : invariants) all.merge(s);
        return all;
    }

    const ScanCell& at(int param_index, int omega_index) const {
        return cells[static_cast<std::size_t>(param_index * config.omega_c.steps + omega_index)];
    }
};

inline RunSpec cell_spec(const ScanConfig& config, double param, double omega_c) {
    RunSpec spec;
    spec.model = config.model;
    spec.family = make_family(config.family, param);
    spec.params = SystemParams::symmetric(config.gamma, config.rabi, omega_c);
    spec.params.nbar1 = config.nbar1;
    spec.params.nbar2 = config.nbar2;
    spec.t_max = config.t_max;
    spec.dt = config.dt;
    spec.epsilon = config.epsilon;
    return spec;
}

/// One grid cell; library errors are captured in the status, never thrown.
inline ScanCell run_cell(const ScanConfig& config, int param_index, int omega_index,
                         InvariantStats* invariants = nullptr) {
    ScanCell cell;
    cell.param = config.param.value(param_index);
    cell.omega_c = config.omega_c.value(omega_index);
    try {
        const Simulation sim = simulate(cell_spec(config, cell.param, cell.omega_c), false);
        cell.t_esd = sim.report.t_esd;
        cell.revivals = sim.report.revival_count;
        if (invariants) *invariants = sim.invariants;
        switch (sim.report.status) {
        case EsdStatus::ok: cell.status = CellStatus::ok; break;
        case EsdStatus::never_entangled: cell.status = CellStatus::never_entangled; break;
        case EsdStatus::positive_at_horizon: cell.status = CellStatus::positive_at_horizon; break;
        }
    } catch (const Error& e) {
        cell.status = CellStatus::numeric_failure;
        cell.t_esd = std::nan("");
        cell.message = e.what();
    }
    return cell;
}

/// Worker count: explicit value, else ESDLAB_THREADS (0 = auto), else hardware concurrency.
inline unsigned resolve_threads(unsigned requested) {
    unsigned n = requested;
    if (n == 0) {
        if (const char* env = std::getenv("ESDLAB_THREADS")) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    }
    if (n == 0) n = std::thread::hardware_concurrency();
    return std::max(1u, n);
}

/**
 * Runs every (param, omega_c) cell. Cells are independent units of work
 * pulled from a shared counter; each writes only its own slot, so the grid
 * is identical for any thread count or execution order.
 */
inline ScanResult run_scan(const ScanConfig& config) {
    config.validate();
    ScanResult result;
    result.config = config;
    const int rows = config.param.steps, cols = config.omega_c.steps;
    const std::size_t total = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    result.cells.resize(total);
    result.invariants.resize(total);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < total; k = next++) {
            result.cells[k] =
                run_cell(config, static_cast<int>(k / cols), static_cast<int>(k % cols), &result.invariants[k]);
        }
    };
    const unsigned n = std::min<std::size_t>(resolve_threads(config.threads), total);
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Rotating frame vs secular approximation
// ---------------------------------------------------------------------------

/// Comparisons need Omega >= this multiple of the largest decay rate.
inline constexpr double kMinSecularRabiRatio = 10.0;

struct ModelComparison {
    std::vector<double> times;
    std::vector<double> rotating;  ///< concurrence under the rotating-frame equation
    std::vector<double> secular;   ///< closed-form secular concurrence
    double sup_norm = 0.0;
    InvariantStats invariants;  ///< of the rotating-frame integration
};

/// Concurrence is invariant under the local interaction-picture unitary, so
/// the two traces are compared directly.
inline ModelComparison compare_models(const FamilySpec& family, const SystemParams& params, double t_max,
                                      double dt) {
    const double gamma = std::max(params.gamma1, params.gamma2);
    if (!(params.rabi1 > 0.0) || params.rabi1 != params.rabi2 ||
        params.rabi1 < kMinSecularRabiRatio * gamma)
        throw Error(ErrorCode::SecularPreconditionViolated,
                    "secular comparison needs symmetric Rabi frequencies >= " +
                        std::to_string(kMinSecularRabiRatio) + " x gamma");
    SecularGenerator check(params);
    (void)check;

    RunSpec spec;
    spec.model = Model::rotating_frame;
    spec.family = family;
    spec.params = params;
    spec.t_max = t_max;
    spec.dt = dt;
    const Simulation rotating = simulate(spec, false);

    ModelComparison out;
    out.invariants = rotating.invariants;
    for (const auto& s : rotating.trace.samples) {
        const double secular = concurrence_x(closed_form(family, params.gamma1, params.omega_c(), s.t));
        out.times.push_back(s.t);
        out.rotating.push_back(s.concurrence);
        out.secular.push_back(secular);
        out.sup_norm = std::max(out.sup_norm, std::abs(s.concurrence - secular));
    }
    return out;
}

} // namespace esdlab
