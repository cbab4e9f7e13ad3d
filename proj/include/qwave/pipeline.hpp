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

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwave/constraints.hpp"
#include "qwave/evolution.hpp"
#include "qwave/measurement.hpp"
#include "qwave/reference.hpp"
#include "qwave/sources.hpp"

namespace qwave {

/// A physical field that becomes valid at `t_end` (its birth time on the
/// common clock).
struct TimedField {
    Eigen::VectorXd field;
    double t_end = 0.0;
    std::string label;
};

/// Homogeneous region around a source inside which slices are solved.
struct HomogeneousBall {
    double radius = 0.0;
    double density = 1.0;
    double speed = 1.0;
    GreensOptions options;
};

/// Checks that every DOF of `pair` within the ball carries the ball material.
inline void check_ball_homogeneous(const OperatorPair &pair, Point center, const HomogeneousBall &ball) {
    require(pair.family == EquationFamily::acoustic, ErrorKind::validation,
            "homogeneous-ball slicing is implemented for the acoustic family");
    const Eigen::VectorXd b = pair.B.diagonal_values();
    const double bu = 1.0 / (ball.density * ball.speed * ball.speed);
    for (std::size_t k = 0; k < pair.size(); ++k) {
        if (detail::distance(pair.grid.dof_point(pair.full_index[k]), center) > ball.radius) continue;
        const double want = pair.is_primary(k) ? bu : ball.density;
        require(std::abs(b[static_cast<Eigen::Index>(k)] - want) <= 1e-12 * want, ErrorKind::validation,
                "material inside the source ball differs from the declared homogeneous material at DOF " +
                    std::to_string(pair.full_index[k]));
    }
}

/// Full-grid field restricted to the DOFs kept by `pair`.
inline Eigen::VectorXd to_local(const OperatorPair &pair, const Eigen::VectorXd &full) {
    require(static_cast<std::size_t>(full.size()) == pair.grid.dof_count(), ErrorKind::dimension,
            "field does not cover the full grid");
    Eigen::VectorXd w(static_cast<Eigen::Index>(pair.size()));
    for (std::size_t k = 0; k < pair.size(); ++k)
        w[static_cast<Eigen::Index>(k)] = full[static_cast<Eigen::Index>(pair.full_index[k])];
    return w;
}

/// Pre-simulated pieces of one source: windowed slices when a ball is given,
/// otherwise a single leapfrog pre-simulation over the whole support.
inline std::vector<TimedField> source_blocks(const OperatorPair &pair, const PointSource &src,
                                             const std::optional<HomogeneousBall> &ball, double dt = 0.0,
                                             std::vector<PreSimResult> *raw = nullptr) {
    std::vector<TimedField> out;
    if (ball) {
        check_ball_homogeneous(pair, pair.grid.pressure_point(src.location), *ball);
        GreensDecomposition dec =
            greens_decompose(src, ball->speed, ball->density, ball->radius, pair.grid, ball->options);
        for (std::size_t j = 0; j < dec.slices.size(); ++j) {
            const auto &s = dec.slices[j];
            if (s.t_end <= s.t_start) continue;
            out.push_back({to_local(pair, s.field), s.t_end, "slice " + std::to_string(j)});
        }
        if (raw) raw->insert(raw->end(), dec.slices.begin(), dec.slices.end());
    } else {
        PreSimResult r = presimulate_pulse(src, pair, dt);
        out.push_back({r.field, r.t_end, "pulse"});
        if (raw) raw->push_back(std::move(r));
    }
    return out;
}

/// Stacked register brought to a common time by H^sync.
struct SyncedRegister {
    QuantumRegisterState state;
    double t_sync = 0.0;
    std::vector<double> t_ends;
    Hamiltonian mult;
};

inline SyncedRegister synchronize(const Hamiltonian &h, const SparseOperator &B, const std::vector<TimedField> &blocks,
                                  const EvolutionConfig &cfg = {}) {
    require(!blocks.empty(), ErrorKind::validation, "nothing to synchronize");
    SyncedRegister r;
    std::vector<Eigen::VectorXd> fields;
    for (const auto &b : blocks) {
        fields.push_back(b.field);
        r.t_ends.push_back(b.t_end);
    }
    r.t_sync = *std::max_element(r.t_ends.begin(), r.t_ends.end());
    r.state = encode_stacked(fields, B);
    const std::size_t copies = r.state.layout.arity;
    if (copies == 1) {
        r.mult = h;
        r.state = evolve(r.state, h, r.t_sync - r.t_ends.front(), cfg);
        return r;
    }
    r.state = evolve(r.state, build_sync_hamiltonian(h, r.t_ends, r.t_sync, cfg), 1.0, cfg);
    r.mult = build_mult_hamiltonian(h, copies, cfg);
    return r;
}

/// Register at time t ≥ t_sync.
inline QuantumRegisterState advance(const SyncedRegister &r, double t, const EvolutionConfig &cfg = {}) {
    require(t >= r.t_sync - 1e-12, ErrorKind::invalid_schedule,
            "time " + format_double(t) + " precedes the synchronization time " + format_double(r.t_sync));
    return evolve(r.state, r.mult, std::max(t - r.t_sync, 0.0), cfg);
}

/// Piecewise-linear boundary forcing as separable hat-function sources.
inline std::vector<SeparableSource> boundary_sources(const ReducedSystem &red) {
    std::vector<SeparableSource> out;
    const auto &ts = red.source_times;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double lo = k > 0 ? ts[k - 1] : ts[k];
        const double hi = k + 1 < ts.size() ? ts[k + 1] : ts[k];
        const double t = ts[k];
        SeparableSource s;
        s.pattern = red.source_samples.col(static_cast<Eigen::Index>(k));
        s.f = [lo, t, hi](double x) {
            if (x < t) return x <= lo ? 0.0 : (x - lo) / (t - lo);
            return x >= hi ? 0.0 : (hi - x) / (hi - t);
        };
        s.t_start = lo;
        s.t_end = hi;
        if (s.pattern.lpNorm<Eigen::Infinity>() > 0.0 && hi > lo) out.push_back(std::move(s));
    }
    return out;
}

inline SeparableSource separable(const OperatorPair &pair, const PointSource &src) {
    return {point_source_pattern(pair, src), [w = src.wavelet](double t) { return w(t); }, src.t_start(), src.t_end()};
}

/// Exact-in-time forced solution from w0 at t = 0 to t_final.
inline Eigen::VectorXd monolithic_solution(const OperatorPair &pair, const Eigen::VectorXd &w0,
                                           const std::vector<PointSource> &sources,
                                           const std::vector<SeparableSource> &extra, double t_final) {
    std::vector<SeparableSource> all = extra;
    double scale = std::numeric_limits<double>::infinity();
    for (const auto &s : sources) {
        all.push_back(separable(pair, s));
        if (s.wavelet.time_scale > 0.0) scale = std::min(scale, s.wavelet.time_scale);
    }
    for (const auto &s : extra) scale = std::min(scale, 0.25 * (s.t_end - s.t_start));
    return DuhamelSolver(pair).solve(w0, all, 0.0, t_final, std::isfinite(scale) ? scale : 0.0);
}

/// ‖P B^{1/2} w‖² (encoded) or ‖P w‖² (physical) by dense algebra.
inline double subspace_loss(const Eigen::VectorXd &w, const SparseOperator &B, const SubspaceProjector &p,
                            bool physical = false) {
    Eigen::VectorXd v = physical ? w : Eigen::VectorXd(b_sqrt_diagonal(B).cwiseProduct(w));
    return p.apply(v).squaredNorm();
}

}  // namespace qwave
