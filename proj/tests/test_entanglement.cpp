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

#include <cmath>
#include <limits>
#include <random>

#include "catch_amalgamated.hpp"
#include "esdlab/entanglement.hpp"
#include "esdlab/scan.hpp"
#include "esdlab/validate.hpp"
#include "test_support.hpp"

using namespace esdlab;
using esdlab::testing::basis_projector;
using esdlab::testing::random_density;
using esdlab::testing::random_unitary;
using esdlab::testing::singlet_projector;
using Catch::Matchers::WithinAbs;

namespace {

ConcurrenceTrace trace_of(const std::vector<double>& values, double dt, double eps = kDefaultEpsilon) {
    ConcurrenceTrace trace;
    trace.epsilon = eps;
    for (std::size_t i = 0; i < values.size(); ++i)
        trace.samples.push_back({dt * static_cast<double>(i), values[i], 0.0, 0.0});
    return trace;
}

ConcurrenceTrace sampled(const FamilySpec& spec, double omega_c, double t_max, double dt) {
    RunSpec run;
    run.model = Model::closed_form;
    run.family = spec;
    run.params = SystemParams::symmetric(1.0, 25.0, omega_c);
    run.t_max = t_max;
    run.dt = dt;
    return simulate(run, false).trace;
}

} // namespace

TEST_CASE("F and G functions", "[entanglement]") {
    const XState singlet{0.0, 0.5, 0.5, 0.0, {}, -0.5};
    CHECK(f_function(singlet) == 0.5);
    CHECK(g_function(singlet) == -0.5);

    const XState mixed{0.25, 0.25, 0.25, 0.25, {}, {}};
    CHECK(f_function(mixed) == -0.25);
    CHECK(g_function(mixed) == -0.25);

    for (double f : {0.25, 0.4, 0.5, 0.8, 1.0}) {
        const XState x = make_initial(Werner{f});
        CHECK_THAT(f_function(x), WithinAbs((2.0 * f - 1.0) / 2.0, 1e-15));
        CHECK_THAT(g_function(x), WithinAbs(-(1.0 + 2.0 * f) / 6.0, 1e-15));
    }

    std::mt19937_64 rng(1);
    for (int k = 0; k < 200; ++k) {
        const XState x = random_x_state(rng);
        CHECK(f_function(x) <= 0.5);
        CHECK(g_function(x) <= 0.5);
    }
}

TEST_CASE("X-state concurrence", "[entanglement]") {
    CHECK(concurrence_x(make_initial(Werner{1.0})) == 1.0);
    CHECK_THAT(concurrence_x(make_initial(Werner{0.6})), WithinAbs(0.2, 1e-15));
    CHECK(concurrence_x(XState{0.1, 0.2, 0.3, 0.4, {}, {}}) == 0.0);
    for (double f : {0.25, 0.3, 0.45, 0.5}) CHECK(concurrence_x(make_initial(Werner{f})) == 0.0);

    std::mt19937_64 rng(2);
    for (int k = 0; k < 500; ++k) {
        const double c = concurrence_x(random_x_state(rng));
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
    }
}

TEST_CASE("Wootters concurrence", "[entanglement]") {
    CHECK(concurrence_general(basis_projector(0)) == 0.0);
    CHECK_THAT(concurrence_general(singlet_projector()), WithinAbs(1.0, 1e-12));
    CHECK_THAT(concurrence_general(0.25 * ComplexMatrix4::identity()), WithinAbs(0.0, 1e-12));
}

TEST_CASE("X formula agrees with Wootters on random X states", "[entanglement][oracle]") {
    std::mt19937_64 rng(3);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const XState x = random_x_state(rng);
        worst = std::max(worst, std::abs(concurrence_x(x) - concurrence_general(to_matrix(x))));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("Wootters concurrence is invariant under local unitaries", "[entanglement]") {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 50; ++k) {
        const ComplexMatrix4 rho = k % 2 ? random_density(rng) : to_matrix(make_initial(Werner{0.8}));
        const ComplexMatrix4 u = tensor(random_unitary(rng), random_unitary(rng));
        CHECK_THAT(concurrence_general(u * rho * u.adjoint()), WithinAbs(concurrence_general(rho), 1e-9));
    }
}

TEST_CASE("automatic concurrence picks the X formula only for X states", "[entanglement]") {
    const ComplexMatrix4 x = to_matrix(make_initial(Werner{0.8}));
    CHECK(concurrence(x) == concurrence_x(make_initial(Werner{0.8})));

    std::mt19937_64 rng(5);
    const ComplexMatrix4 rho = random_density(rng);
    CHECK(concurrence(rho) == concurrence_general(rho));
}

TEST_CASE("sudden death detection on synthetic traces", "[entanglement]") {
    const EsdReport zero = detect_esd(trace_of(std::vector<double>(11, 0.0), 0.1));
    CHECK(zero.t_esd == 0.0);
    CHECK(zero.revival_count == 0);
    CHECK(zero.status == EsdStatus::never_entangled);

    const EsdReport alive = detect_esd(trace_of(std::vector<double>(11, 0.3), 0.1));
    CHECK(alive.status == EsdStatus::positive_at_horizon);
    CHECK(std::isinf(alive.t_esd));
    CHECK(alive.horizon == 1.0);

    // Death, birth, death: one revival; the last death is the reported time.
    auto line = [](double t) { return std::max(0.0, std::abs(std::cos(3.0 * t)) - 0.5) * (t < 2.5 ? 1.0 : 0.0); };
    std::vector<double> values;
    for (int i = 0; i <= 400; ++i) values.push_back(line(0.01 * i));
    const EsdReport rep = detect_esd(trace_of(values, 0.01), line);
    REQUIRE(rep.crossings.size() >= 3);
    for (std::size_t k = 1; k < rep.crossings.size(); ++k) CHECK(rep.crossings[k].birth != rep.crossings[k - 1].birth);
    CHECK_FALSE(rep.crossings.front().birth);
    CHECK(rep.status == EsdStatus::ok);
    CHECK(rep.t_esd == rep.crossings.back().t);
    int births = 0;
    for (const auto& c : rep.crossings) births += c.birth;
    CHECK(rep.revival_count == births);
    // First death at cos(3t) = 0.5.
    CHECK_THAT(rep.crossings.front().t, WithinAbs(std::acos(0.5) / 3.0, 0.01 / 1024.0 + 1e-6));

    CHECK_THROWS_AS(detect_esd(ConcurrenceTrace{}), Error);
}

TEST_CASE("Werner singlet dies at 0.84", "[entanglement]") {
    const ConcurrenceTrace trace = sampled(Werner{1.0}, 5.0, 10.0, 1e-3);
    const EsdReport rep = detect_esd(trace);
    CHECK(rep.status == EsdStatus::ok);
    CHECK_THAT(rep.t_esd, WithinAbs(0.84, 0.01));
    CHECK(rep.revival_count == 0);

    // G stays negative along the whole Werner trajectory, so F alone sets C.
    for (const auto& s : trace.samples) {
        CHECK(s.g < 0.0);
        CHECK_THAT(s.concurrence, WithinAbs(2.0 * std::max(0.0, s.f), 1e-12));
    }
}

TEST_CASE("eg-ge maxima are spaced by 2 pi / (3 omega_c)", "[entanglement]") {
    const double wc = 10.0, dt = 1e-3;
    const ConcurrenceTrace trace = sampled(EgGe{0.0}, wc, 3.0, dt);
    const auto maxima = concurrence_maxima(trace);
    REQUIRE(maxima.size() >= 3);
    const double period = 2.0 * std::acos(-1.0) / (3.0 * wc);
    for (std::size_t k = 1; k < maxima.size(); ++k) CHECK_THAT(maxima[k] - maxima[k - 1], WithinAbs(period, dt));
}

TEST_CASE("death time is stable under grid refinement", "[entanglement]") {
    for (const FamilySpec& spec : {FamilySpec{Werner{0.9}}, FamilySpec{EeGg{1.0}}, FamilySpec{EgGe{0.1}}}) {
        const EsdReport coarse = detect_esd(sampled(spec, 7.0, 10.0, 2e-3));
        const EsdReport fine = detect_esd(sampled(spec, 7.0, 10.0, 1e-3));
        REQUIRE(coarse.status == fine.status);
        if (std::isfinite(fine.t_esd)) CHECK_THAT(coarse.t_esd, WithinAbs(fine.t_esd, 3e-3 / 1024.0));
        CHECK(coarse.revival_count == fine.revival_count);
    }
}

TEST_CASE("interpolated bisection agrees with the closed-form evaluator", "[entanglement]") {
    const ConcurrenceTrace trace = sampled(EeGg{1.0}, 13.0, 10.0, 1e-3);
    auto exact = [](double t) { return concurrence_x(closed_form(EeGg{1.0}, 1.0, 13.0, t)); };
    const EsdReport a = detect_esd(trace, exact);
    const EsdReport b = detect_esd(trace);
    REQUIRE(a.crossings.size() == b.crossings.size());
    for (std::size_t k = 0; k < a.crossings.size(); ++k) CHECK_THAT(a.crossings[k].t, WithinAbs(b.crossings[k].t, 1e-5));
}
