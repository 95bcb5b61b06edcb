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
#include <random>

#include "catch_amalgamated.hpp"
#include "esdlab/dynamics.hpp"
#include "esdlab/entanglement.hpp"
#include "esdlab/xstate.hpp"
#include "test_support.hpp"

using namespace esdlab;
using esdlab::testing::basis_projector;
using esdlab::testing::random_density;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SystemParams zero_params() {
    SystemParams p;
    p.gamma1 = p.gamma2 = 0.0;
    return p;
}

} // namespace

TEST_CASE("rotating-frame Hamiltonian", "[dynamics]") {
    CHECK(build_h_rf(zero_params()).max_abs() == 0.0);

    SystemParams p = zero_params();
    p.omega_xx = 1.0;
    const ComplexMatrix4 h = build_h_rf(p);
    CHECK_THAT(h(1, 2).real(), WithinAbs(1.0, 1e-15));  // <10|H|01>
    CHECK(std::abs(h(0, 3)) < 1e-15);                   // <11|H|00>
    CHECK(h.hermiticity_defect() == 0.0);

    SystemParams q = zero_params();
    q.detuning1 = 2.0;
    CHECK(build_h_rf(q) == ComplexMatrix4::diagonal({1.0, 1.0, -1.0, -1.0}));

    // Only the sum omega_xx + omega_yy survives the rotating-wave approximation.
    SystemParams split = zero_params();
    split.omega_xx = 0.3;
    split.omega_yy = 0.7;
    CHECK((build_h_rf(split) - build_h_rf(p)).max_abs() < 1e-15);
}

TEST_CASE("dissipator", "[dynamics]") {
    const auto lower1 = embed_pauli(PauliAxis::minus, Qubit::first);
    std::mt19937_64 rng(1);
    const ComplexMatrix4 rho = random_density(rng);
    CHECK(dissipator(lower1, 0.0, rho).max_abs() == 0.0);

    const ComplexMatrix4 excited = basis_projector(0);
    CHECK_THAT(dissipator(lower1, 1.5, excited)(0, 0).real(), WithinAbs(-1.5, 1e-15));
    CHECK(dissipator(lower1, 1.0, basis_projector(3)).max_abs() == 0.0);

    const ComplexMatrix4 out = dissipator(lower1, 0.8, rho);
    CHECK(std::abs(out.trace()) < 1e-12);
    CHECK(out.hermiticity_defect() < 1e-12);

    try {
        dissipator(lower1, -1.0, rho);
        FAIL("expected NegativeRate");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeRate);
    }
}

TEST_CASE("every generator is trace-annihilating and Hermiticity-preserving", "[dynamics]") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        SystemParams p = SystemParams::symmetric(u(rng), 10.0 * u(rng), 5.0 * u(rng), u(rng));
        p.detuning1 = u(rng) - 1.5;
        p.omega_yy = u(rng);
        const ComplexMatrix4 rho = random_density(rng);

        for (const ComplexMatrix4& out : {rhs_rotating_frame(p, rho), rhs_thermal_undriven(p, rho)}) {
            CHECK(std::abs(out.trace()) < 1e-12);
            CHECK(out.hermiticity_defect() < 1e-12);
        }
        p.detuning1 = 0.0;
        p.nbar1 = p.nbar2 = 0.0;
        const ComplexMatrix4 sec = rhs_secular(p, rho);
        CHECK(std::abs(sec.trace()) < 1e-12);
        CHECK(sec.hermiticity_defect() < 1e-12);
    }
}

TEST_CASE("generators vanish without dynamics", "[dynamics]") {
    std::mt19937_64 rng(3);
    const ComplexMatrix4 rho = random_density(rng);
    CHECK(rhs_rotating_frame(zero_params(), rho).max_abs() == 0.0);
    CHECK(rhs_secular(zero_params(), rho).max_abs() == 0.0);
}

TEST_CASE("secular generator preconditions", "[dynamics]") {
    const ComplexMatrix4 rho = basis_projector(0);
    auto expect_violation = [&](const SystemParams& p) {
        try {
            rhs_secular(p, rho);
            FAIL("expected SecularPreconditionViolated");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::SecularPreconditionViolated);
        }
    };
    SystemParams p = SystemParams::symmetric(1.0, 25.0, 5.0);
    p.gamma2 = 2.0;
    expect_violation(p);
    p = SystemParams::symmetric(1.0, 25.0, 5.0);
    p.rabi2 = 20.0;
    expect_violation(p);
    p = SystemParams::symmetric(1.0, 25.0, 5.0);
    p.detuning2 = 0.1;
    expect_violation(p);
    p = SystemParams::symmetric(1.0, 25.0, 5.0, 0.1);
    expect_violation(p);
}

TEST_CASE("secular generator preserves the X form", "[dynamics]") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const ComplexMatrix4 rho = random_density(rng);
        ComplexMatrix4 x;
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c)
                if (r == c || r + c == 3) x(r, c) = rho(r, c);
        const SystemParams p = SystemParams::symmetric(3.0 * u(rng), 25.0, 20.0 * u(rng) - 10.0);
        CHECK(off_x_magnitude(rhs_secular(p, x)) < 1e-14);
    }
}

TEST_CASE("thermal generator reduces to the undriven rotating frame at zero temperature", "[dynamics]") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        SystemParams p = SystemParams::symmetric(1.3, 0.0, 4.0);
        p.gamma2 = 0.7;
        p.detuning2 = 0.4;
        const ComplexMatrix4 rho = random_density(rng);
        CHECK((rhs_thermal_undriven(p, rho) - rhs_rotating_frame(p, rho)).max_abs() <= 1e-15);
        // Rabi terms are ignored by the thermal model.
        SystemParams driven = p;
        driven.rabi1 = driven.rabi2 = 25.0;
        CHECK((rhs_thermal_undriven(driven, rho) - rhs_rotating_frame(p, rho)).max_abs() <= 1e-15);
    }
}

TEST_CASE("thermal relaxation reaches detailed balance", "[dynamics]") {
    const SystemParams p = SystemParams::symmetric(1.0, 0.0, 0.0, 0.25);
    const ThermalUndrivenGenerator gen(p);
    const Trajectory traj = integrate(gen, DensityMatrix(basis_projector(3)), 30.0, 1e-2);
    const ComplexMatrix4& rho = traj.states.back();
    // Excited population of qubit 1 = <11| + <10| diagonal.
    const double excited = (rho(0, 0) + rho(1, 1)).real();
    CHECK_THAT(excited, WithinAbs(0.25 / 1.5, 1e-9));
}

TEST_CASE("thermal occupation from temperature", "[dynamics]") {
    CHECK(nbar_from_temperature(1.0, 0.0) == 0.0);
    CHECK_THAT(nbar_from_temperature(2.0, 2.0), WithinRel(1.0 / (std::exp(1.0) - 1.0), 1e-14));
    CHECK_THAT(nbar_from_temperature(std::log(2.0), 1.0), WithinAbs(1.0, 1e-14));
    CHECK_THROWS_AS(nbar_from_temperature(0.0, 1.0), Error);
}

TEST_CASE("integrating a zero generator keeps the state", "[dynamics]") {
    std::mt19937_64 rng(6);
    const ComplexMatrix4 rho0 = random_density(rng);
    auto zero = [](const ComplexMatrix4&) { return ComplexMatrix4::zero(); };
    const Trajectory traj = integrate(zero, DensityMatrix(rho0), 1.0, 0.1);
    REQUIRE(traj.states.size() == 11);
    for (const auto& rho : traj.states) CHECK(rho == rho0);
}

TEST_CASE("amplitude damping of the doubly excited state", "[dynamics]") {
    SystemParams p;  // gamma = 1, no drive, no coupling
    const RotatingFrameGenerator gen(p);
    const Trajectory traj = integrate(gen, DensityMatrix(basis_projector(0)), 1.0, 1e-3, "rotating-frame");
    REQUIRE(traj.times.size() == 1001);
    CHECK_THAT(traj.times.back(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(traj.states.back()(0, 0).real(), WithinAbs(std::exp(-2.0), 1e-8));
    for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
}

TEST_CASE("RK4 converges at fourth order on amplitude damping", "[dynamics]") {
    SystemParams p;
    const RotatingFrameGenerator gen(p);
    auto error_at = [&](double dt) {
        const Trajectory traj = integrate(gen, DensityMatrix(basis_projector(0)), 2.0, dt);
        double e = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            e = std::max(e, std::abs(traj.states[i](0, 0).real() - std::exp(-2.0 * traj.times[i])));
        return e;
    };
    const double e1 = error_at(0.02), e2 = error_at(0.01);
    const double ratio = e1 / e2;
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("secular integration of the Werner singlet matches its closed form", "[dynamics]") {
    const SystemParams p = SystemParams::symmetric(1.0, 25.0, 5.0);
    const SecularGenerator gen(p);
    const Trajectory traj = integrate(gen, DensityMatrix(to_matrix(make_initial(Werner{1.0}))), 10.0, 1e-3);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); i += 10)
        worst = std::max(worst, from_matrix(traj.states[i]).max_abs_diff(werner_solution(1.0, 1.0, traj.times[i])));
    CHECK(worst < 1e-6);
}

TEST_CASE("strong driving breaks the X form in the rotating frame", "[dynamics]") {
    const SystemParams p = SystemParams::symmetric(1.0, 25.0, 5.0);
    const RotatingFrameGenerator gen(p);
    const Trajectory traj = integrate(gen, DensityMatrix(to_matrix(make_initial(Werner{0.8}))), 0.1, 4e-4);
    double worst = 0.0;
    for (const auto& rho : traj.states) worst = std::max(worst, off_x_magnitude(rho));
    CHECK(worst > 1e-3);
}

TEST_CASE("integrator guards its step and invariants", "[dynamics]") {
    const SystemParams p = SystemParams::symmetric(1.0, 25.0, 5.0);
    const RotatingFrameGenerator gen(p);
    const DensityMatrix rho0(basis_projector(0));
    CHECK_THROWS_AS(integrate(gen, rho0, 1.0, 0.0), Error);
    CHECK_THROWS_AS(integrate(gen, rho0, 0.001, 0.01), Error);
    try {
        integrate(gen, rho0, 1.0, 0.01);  // dt * |L| well above the stability limit
        FAIL("expected InvalidStep");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidStep);
    }

    // A generator that pumps trace in is caught with the offending time.
    auto leaky = [](const ComplexMatrix4& rho) { return 0.01 * rho; };
    try {
        integrate(leaky, rho0, 1.0, 0.01);
        FAIL("expected InvariantViolation");
    } catch (const InvariantViolation& e) {
        CHECK(e.code() == ErrorCode::InvariantViolated);
        CHECK(e.time() > 0.0);
        CHECK(e.time() <= 0.02);
    }
}

TEST_CASE("density matrix validation", "[dynamics]") {
    CHECK_NOTHROW(DensityMatrix(basis_projector(1)));
    CHECK_THROWS_AS(DensityMatrix(2.0 * basis_projector(1)), Error);
    ComplexMatrix4 negative = ComplexMatrix4::diagonal({1.1, -0.1, 0.0, 0.0});
    CHECK_THROWS_AS(DensityMatrix(negative), Error);
    ComplexMatrix4 skew = basis_projector(0);
    skew(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix(skew), Error);
}

TEST_CASE("interaction-picture transform", "[dynamics]") {
    std::mt19937_64 rng(8);
    const ComplexMatrix4 rho = random_density(rng);
    CHECK((interaction_transform(rho, 0.0, 25.0) - rho).max_abs() < 1e-15);
    const double full_cycle = 2.0 * std::acos(-1.0) / 25.0;
    CHECK((interaction_transform(rho, full_cycle, 25.0) - rho).max_abs() < 1e-13);

    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix4 r = random_density(rng);
        const double t = 0.37 * trial;
        CHECK_THAT(concurrence(interaction_transform(r, t, 25.0)), WithinAbs(concurrence(r), 1e-10));
    }
}

TEST_CASE("default step resolves the fastest scale", "[dynamics]") {
    CHECK(default_step(1.0, 0.0, 0.0) == 1e-3);
    CHECK(default_step(1.0, 25.0, 5.0) == 4e-4);
    CHECK(default_step(1.0, 0.0, 20.0) == 5e-4);
    CHECK(default_step(2.0, 0.0, 0.0) == 5e-4);
}
