// Copyright 2026 The qwave Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "qwave/initcircuit.hpp"

namespace qwave {
namespace {

VectorField radial_field(std::function<double(double)> f, Point c = {}) {
    return [f, c](Point p) {
        double dx = p.x - c.x, dy = p.y - c.y, r = std::hypot(dx, dy);
        return Eigen::VectorXd(Eigen::Vector2d(f(r) * dx / r, f(r) * dy / r));
    };
}

PolarGridSpec spec_for(std::size_t a) {
    PolarGridSpec s;
    s.radial = a;
    s.angular = a;
    return s;
}

TEST(Circuit, SmallestCircuit) {
    auto gc = build_circuit(spec_for(2));
    EXPECT_EQ(gc.count(GateKind::hadamard), 1u);
    EXPECT_EQ(gc.count(GateKind::controlled_rotation), 1u);
    EXPECT_DOUBLE_EQ(gc.min_rotation_angle(), std::numbers::pi / 2);
}

TEST(Circuit, RotationAngles) {
    auto gc = build_circuit(spec_for(8));
    EXPECT_EQ(gc.count(GateKind::hadamard), 3u);
    std::vector<double> angles;
    for (const auto &g : gc.gates)
        if (g.kind == GateKind::controlled_rotation) angles.push_back(g.angle);
    ASSERT_EQ(angles.size(), 3u);
    EXPECT_DOUBLE_EQ(angles[0], std::numbers::pi / 2);
    EXPECT_DOUBLE_EQ(angles[1], std::numbers::pi / 4);
    EXPECT_DOUBLE_EQ(angles[2], std::numbers::pi / 8);
    // cumulative angle for bits b1 b2 b3 = 1 0 1
    EXPECT_DOUBLE_EQ(spec_for(8).angle(5), std::numbers::pi / 2 + std::numbers::pi / 8);
}

TEST(Circuit, RejectsNonPowerOfTwo) {
    EXPECT_THROW(build_circuit(spec_for(3)), Error);
}

TEST(Ray, ConstantOutwardField) {
    auto ray = sample_reference_ray(radial_field([](double) { return 1.0; }), spec_for(4));
    for (std::size_t a = 0; a < 4; ++a) {
        EXPECT_DOUBLE_EQ(ray.values[static_cast<Eigen::Index>(a)].real(), 1.0);
        EXPECT_DOUBLE_EQ(ray.values[static_cast<Eigen::Index>(4 + a)].real(), 0.0);
    }
}

TEST(Ray, LinearProfileAndBudget) {
    auto ray = sample_reference_ray(radial_field([](double r) { return r; }), spec_for(4));
    for (std::size_t a = 0; a < 4; ++a) EXPECT_DOUBLE_EQ(ray.values[static_cast<Eigen::Index>(a)].real(), a + 1.0);
    EXPECT_EQ(ray.evaluations, 4u);
    EXPECT_THROW(sample_reference_ray(radial_field([](double) { return 0.0; }), spec_for(4)), Error);
}

TEST(Simulate, ZeroAngleColumnIsRay) {
    auto spec = spec_for(4);
    auto ray = sample_reference_ray(radial_field([](double r) { return 1.0 / r; }), spec);
    auto psi = simulate_circuit(build_circuit(spec), ray);
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t a = 0; a < 4; ++a)
            EXPECT_NEAR(std::abs(psi.amplitudes[static_cast<Eigen::Index>(spec.index(c, a, 0))] -
                                 ray.values[static_cast<Eigen::Index>(c * 4 + a)] / (ray.norm * 2.0)),
                        0.0, 1e-14);
    EXPECT_NEAR(psi.amplitudes.norm(), 1.0, 1e-14);
}

TEST(Simulate, QuarterTurnSwapsComponents) {
    auto spec = spec_for(4);
    auto ray = sample_reference_ray(radial_field([](double r) { return r; }), spec);
    auto psi = simulate_circuit(build_circuit(spec), ray);
    // index Θ/2 carries angle π/2
    for (std::size_t a = 0; a < 4; ++a) {
        EXPECT_NEAR(std::abs(psi.amplitudes[static_cast<Eigen::Index>(spec.index(0, a, 2))]), 0.0, 1e-14);
        EXPECT_NEAR(psi.amplitudes[static_cast<Eigen::Index>(spec.index(1, a, 2))].real(),
                    (a + 1.0) / (ray.norm * 2.0), 1e-14);
    }
}

TEST(Simulate, FidelityWithDirectConstruction) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t a : {2, 4, 8}) {
        for (int trial = 0; trial < 10; ++trial) {
            double c0 = u(rng), c1 = u(rng), c2 = u(rng);
            auto field = radial_field([=](double r) { return c0 + c1 * r + c2 * std::sin(r); }, {0.3, -0.2});
            auto spec = spec_for(a);
            spec.center = {0.3, -0.2};
            spec.radial_step = 0.25;
            auto ray = sample_reference_ray(field, spec);
            std::size_t calls = 0;
            auto direct = direct_polar_state(field, spec, &calls);
            auto psi = simulate_circuit(build_circuit(spec), ray);
            EXPECT_GE(fidelity(psi, direct), 1.0 - 1e-10);
            EXPECT_EQ(ray.evaluations, a);
            EXPECT_EQ(calls, a * a);
            EXPECT_LE(covariance_defect(field, spec), 1e-12);
            EXPECT_NEAR(psi.scale, direct.scale, 1e-12 * direct.scale);
        }
    }
}

TEST(Simulate, ScalarChannelRidesAlong) {
    PolarGridSpec spec = spec_for(4);
    spec.components = 4;
    VectorField field = [](Point p) {
        double r = std::hypot(p.x, p.y);
        Eigen::VectorXd v(3);
        v << p.x, p.y, std::exp(-r);
        return v;
    };
    auto psi = simulate_circuit(build_circuit(spec), sample_reference_ray(field, spec));
    EXPECT_GE(fidelity(psi, direct_polar_state(field, spec)), 1.0 - 1e-10);
}

TEST(Simulate, NonCovariantFieldIsFlagged) {
    VectorField field = [](Point p) { return Eigen::VectorXd(Eigen::Vector2d(1.0, p.x)); };
    auto spec = spec_for(4);
    EXPECT_GT(covariance_defect(field, spec), 1e-3);
    auto psi = simulate_circuit(build_circuit(spec), sample_reference_ray(field, spec));
    EXPECT_LT(fidelity(psi, direct_polar_state(field, spec)), 1.0 - 1e-6);
}

}  // namespace
}  // namespace qwave
