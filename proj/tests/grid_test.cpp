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

#include <set>

#include "qwave/grid.hpp"

namespace qwave {
namespace {

TEST(Grid, OneDimensionalCounts) {
    auto g = build_grid_1d(0.0, 3.0, 4);
    EXPECT_EQ(g.dimension(), 1u);
    EXPECT_DOUBLE_EQ(g.dx(), 1.0);
    EXPECT_EQ(g.pressure_count(), 4u);
    EXPECT_EQ(g.velocity_count(), 3u);
    EXPECT_EQ(g.dof_count(), 7u);
}

TEST(Grid, TwoDimensionalCounts) {
    auto g = build_grid_2d({0, 1}, {0, 1}, 4, 4);
    EXPECT_EQ(g.pressure_count(), 16u);
    EXPECT_EQ(g.vx_count(), 12u);
    EXPECT_EQ(g.vy_count(), 12u);
}

TEST(Grid, PressureIndexIsXFastest) {
    auto g = build_grid_2d({0, 1}, {0, 2}, 2, 3);
    std::set<std::size_t> seen;
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t i = 0; i < 2; ++i) {
            std::size_t k = g.pressure_index(i, j);
            EXPECT_EQ(k, i + j * 2);
            auto c = g.pressure_cartesian(k);
            EXPECT_EQ(c.i, i);
            EXPECT_EQ(c.j, j);
            seen.insert(k);
        }
    }
    EXPECT_EQ(seen.size(), 6u);
}

TEST(Grid, IndexMapsRoundTrip) {
    auto g = build_grid_2d({-1, 2}, {0, 1}, 5, 3);
    for (std::size_t k = 0; k < g.vx_count(); ++k) {
        auto c = g.vx_cartesian(k);
        EXPECT_EQ(g.vx_index(c.i, c.j), k);
    }
    for (std::size_t k = 0; k < g.vy_count(); ++k) {
        auto c = g.vy_cartesian(k);
        EXPECT_EQ(g.vy_index(c.i, c.j), k);
    }
}

TEST(Grid, VelocityNodesSitAtMidpoints) {
    auto g = build_grid_2d({0, 4}, {0, 2}, 5, 3);
    for (std::size_t k = 0; k < g.vx_count(); ++k) {
        auto c = g.vx_cartesian(k);
        auto a = g.pressure_point(g.pressure_index(c.i, c.j));
        auto b = g.pressure_point(g.pressure_index(c.i + 1, c.j));
        auto v = g.vx_point(k);
        EXPECT_DOUBLE_EQ(v.x, 0.5 * (a.x + b.x));
        EXPECT_DOUBLE_EQ(v.y, a.y);
    }
    for (std::size_t k = 0; k < g.vy_count(); ++k) {
        auto c = g.vy_cartesian(k);
        auto a = g.pressure_point(g.pressure_index(c.i, c.j));
        auto b = g.pressure_point(g.pressure_index(c.i, c.j + 1));
        EXPECT_DOUBLE_EQ(g.vy_point(k).y, 0.5 * (a.y + b.y));
    }
}

TEST(Grid, RejectsDegenerateInput) {
    EXPECT_THROW(build_grid_1d(0.0, 1.0, 1), Error);
    EXPECT_THROW(build_grid_1d(1.0, 1.0, 4), Error);
    EXPECT_THROW(build_grid(3, {{0, 1}, {0, 1}, {0, 1}}, {2, 2, 2}), Error);
    try {
        build_grid_1d(2.0, 1.0, 4);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_grid);
    }
}

}  // namespace
}  // namespace qwave
