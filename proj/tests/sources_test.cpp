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

#include <cmath>
#include <limits>

#include "qwave/sources.hpp"

namespace qwave {
namespace {

OperatorPair line(std::size_t n, double length = 1.0, double c = 1.0) {
    auto g = build_grid_1d(0.0, length, n);
    return assemble_operator_pair(g, constant_acoustic(g, 1.0, c));
}

PointSource centered(const OperatorPair &pair, Wavelet w) {
    PointSource s;
    s.location = pair.grid.nearest_pressure({0.5 * (pair.grid.bounds(0).lo + pair.grid.bounds(0).hi), 0.0});
    s.wavelet = std::move(w);
    return s;
}

TEST(Wavelets, Shapes) {
    auto g = gaussian_wavelet(1.0, 0.1, 2.0);
    EXPECT_DOUBLE_EQ(g(1.0), 2.0);
    EXPECT_EQ(g(2.0), 0.0);
    auto r = ricker_wavelet(10.0);
    EXPECT_DOUBLE_EQ(r.t_start, 0.0);
    EXPECT_NEAR(r(0.5 * (r.t_start + r.t_end)), 1.0, 1e-15);
    auto s = windowed_sine(0.0, 1.0, 3.0);
    EXPECT_EQ(s(0.0), 0.0);
    EXPECT_NEAR(s(1.0), 0.0, 1e-15);
    auto tab = tabulated_wavelet({0.0, 1.0, 3.0}, {0.0, 2.0, 0.0});
    EXPECT_DOUBLE_EQ(tab(0.5), 1.0);
    EXPECT_DOUBLE_EQ(tab(2.0), 1.0);
    EXPECT_THROW(tabulated_wavelet({0.0, 0.0}, {1.0, 1.0}), Error);
}

TEST(Presim, ZeroSourceGivesZeroField) {
    auto pair = line(101);
    auto r = presimulate_pulse(centered(pair, zero_wavelet(0.0, 0.1)), pair);
    EXPECT_EQ(r.field.norm(), 0.0);
    EXPECT_EQ(r.nonzeros, 0u);
}

TEST(Presim, SupportMatchesCausalWidth) {
    auto pair = line(401, 2.0);
    auto src = centered(pair, windowed_sine(0.0, 0.2, 10.0));
    auto r = presimulate_pulse(src, pair, suggested_dt(pair) / 4);
    const double span = src.t_end() - src.t_start();
    double lo = 1e9, hi = -1e9;
    const double cut = 1e-9 * r.field.cwiseAbs().maxCoeff();
    for (std::size_t k = 0; k < pair.size(); ++k) {
        if (std::abs(r.field[static_cast<Eigen::Index>(k)]) <= cut) continue;
        lo = std::min(lo, pair.grid.dof_point(k).x);
        hi = std::max(hi, pair.grid.dof_point(k).x);
    }
    EXPECT_NEAR(hi - lo, 2.0 * span, 6.0 * pair.grid.dx());
    EXPECT_LE(r.truncated_fraction, 1e-8);
}

TEST(Presim, NonzeroCountIsResolutionIndependent) {
    auto coarse = line(201);
    auto fine = line(401);
    auto a = presimulate_pulse(centered(coarse, ricker_wavelet(20.0)), coarse);
    auto b = presimulate_pulse(centered(fine, ricker_wavelet(40.0)), fine);
    const double rel = std::abs(static_cast<double>(b.nonzeros) - static_cast<double>(a.nonzeros)) / a.nonzeros;
    EXPECT_LE(rel, 0.1);
}

TEST(Presim, RefusesBallTooLarge) {
    auto pair = line(101);
    PresimOptions opts;
    opts.max_radius = 0.05;
    try {
        presimulate_pulse(centered(pair, ricker_wavelet(5.0)), pair, 0.0, opts);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::causality);
        EXPECT_NE(std::string(e.what()).find("required radius"), std::string::npos);
    }
}

TEST(Multisource, StackingMatchesEncode) {
    auto pair = line(33);
    auto r = presimulate_pulse(centered(pair, ricker_wavelet(20.0)), pair);
    auto one = assemble_multisource_state({r}, pair.B);
    auto enc = encode(r.field, pair.B);
    EXPECT_EQ(one.amplitudes, enc.amplitudes);
    EXPECT_EQ(one.scale, enc.scale);
    auto two = assemble_multisource_state({r, r}, pair.B);
    EXPECT_EQ(two.block(0), two.block(1));
}

TEST(Multisource, SynchronousSuperposition) {
    auto pair = line(161);
    PointSource a = centered(pair, ricker_wavelet(20.0));
    PointSource b = a;
    b.location = a.location + 10;
    b.wavelet = ricker_wavelet(20.0, std::nullopt, -0.5);
    auto ra = presimulate_pulse(a, pair);
    auto rb = presimulate_pulse(b, pair);
    auto state = assemble_multisource_state({ra, rb}, pair.B);
    Eigen::VectorXd both = point_source_pattern(pair, a);
    Eigen::VectorXd pb = point_source_pattern(pair, b);
    SourceSampler s = [&](double t) -> Eigen::VectorXd { return both * a.wavelet(t) + pb * b.wavelet(t); };
    auto joint = leapfrog_evolve(pair, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pair.size())), s,
                                 suggested_dt(pair), a.t_end())
                     .final_state();
    EXPECT_LE((decode_sum(state, pair.B) - joint).norm(), 1e-12 * joint.norm());
}

TEST(Windows, CenterIsOneForSteepWindows) {
    auto ws = make_windows({0.5}, 1e3, {0.0, 1.0});
    EXPECT_NEAR(ws.values[0][0], 1.0, 1e-12);
}

TEST(Windows, PartitionOfUnityAtDefaultSteepness) {
    std::vector<double> tau{0.0, 0.3, 0.6, 0.9, 1.2, 1.5};
    std::vector<double> t;
    for (int i = 0; i <= 3000; ++i) t.push_back(-0.5 + 2.5 * i / 3000.0);
    auto ws = make_windows(t, default_steepness(tau), tau);
    EXPECT_LT(ws.max_deviation, 1e-3);
}

TEST(Windows, BoxLimitKeepsNonzeroCount) {
    auto f = ricker_wavelet(5.0);
    std::vector<double> t, tau{f.t_start, 0.1, 0.2, 0.33, f.t_end + 1e-9};
    for (int i = 0; i <= 999; ++i) t.push_back(f.t_start + (f.t_end - f.t_start) * i / 999.0);
    auto ws = make_windows(t, std::numeric_limits<double>::infinity(), tau);
    std::size_t plain = 0, windowed = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        plain += f(t[i]) != 0.0;
        for (const auto &w : ws.values) windowed += (w[i] * f(t[i])) != 0.0;
    }
    EXPECT_EQ(plain, windowed);
}

TEST(Windows, ReconstructionImprovesWithSteepness) {
    auto f = ricker_wavelet(4.0);
    std::vector<double> tau{f.t_start, f.t_start + 0.15, f.t_start + 0.3, f.t_end};
    std::vector<double> t;
    for (int i = 0; i <= 500; ++i) t.push_back(f.t_start + (f.t_end - f.t_start) * i / 500.0);
    double last = 1e300;
    for (double z : {20.0, 40.0, 80.0, 160.0}) {
        auto ws = make_windows(t, z, tau);
        double err = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            double sum = 0.0;
            for (const auto &w : ws.values) sum += w[i] * f(t[i]);
            err = std::max(err, std::abs(sum - f(t[i])));
        }
        EXPECT_LT(err, last);
        last = err;
    }
}

TEST(Greens, SingleWindowMatchesPresim) {
    auto pair = line(201);
    auto src = centered(pair, ricker_wavelet(12.0));
    GreensOptions opts;
    opts.windows = 1;
    opts.steepness = 400.0;
    auto dec = greens_decompose(src, 1.0, 1.0, 0.45, pair.grid, opts);
    ASSERT_EQ(dec.slices.size(), 1u);
    auto ref = presimulate_pulse(src, pair, suggested_dt(pair) / 16);
    EXPECT_LE((dec.slices[0].field - ref.field).norm(), 2e-3 * ref.field.norm());
    EXPECT_DOUBLE_EQ(dec.slices[0].t_end, src.t_end());
}

TEST(Greens, SlicesStayInsideTheirBalls) {
    auto pair = line(257);
    auto src = centered(pair, windowed_sine(0.0, 0.6, 8.0));
    auto dec = greens_decompose(src, 1.0, 1.0, 0.2, pair.grid);
    EXPECT_GT(dec.slices.size(), 1u);
    for (const auto &s : dec.slices) {
        EXPECT_LE(s.radius, 0.2 + 1e-12);
        for (std::size_t k = 0; k < pair.size(); ++k) {
            if (s.field[static_cast<Eigen::Index>(k)] != 0.0) {
                EXPECT_LE(std::abs(pair.grid.dof_point(k).x - s.center.x), s.radius + 1e-12);
            }
        }
    }
}

TEST(Greens, RefusesWindowLongerThanBall) {
    auto pair = line(257);
    auto src = centered(pair, windowed_sine(0.0, 0.6, 8.0));
    GreensOptions opts;
    opts.windows = 1;
    opts.steepness = 400.0;
    try {
        greens_decompose(src, 1.0, 1.0, 0.2, pair.grid, opts);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::causality);
    }
}

TEST(Greens, CloseToDAlembert) {
    auto pair = line(401);
    auto src = centered(pair, gaussian_wavelet(0.08, 0.015));
    GreensOptions opts;
    opts.windows = 1;
    opts.steepness = 1e3;
    auto dec = greens_decompose(src, 1.0, 1.0, 0.3, pair.grid, opts);
    auto ref = dalembert_1d(pair.grid, pair.grid.pressure_point(src.location), src.wavelet, 1.0, 1.0, src.t_end());
    EXPECT_LE((dec.slices[0].field - ref).norm(), 2e-2 * ref.norm());
}

}  // namespace
}  // namespace qwave
