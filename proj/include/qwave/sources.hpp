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
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwave/encoding.hpp"
#include "qwave/error.hpp"
#include "qwave/format.hpp"
#include "qwave/grid.hpp"
#include "qwave/operators.hpp"
#include "qwave/reference.hpp"

namespace qwave {

/// Source time function, zero outside [t_start, t_end].
struct Wavelet {
    std::string kind;
    std::function<double(double)> shape;
    double t_start = 0.0;
    double t_end = 0.0;
    /// Shortest time scale of the signal, used to size quadrature panels.
    double time_scale = 0.0;

    double operator()(double t) const { return (t < t_start || t > t_end || !shape) ? 0.0 : shape(t); }
    double duration() const { return t_end - t_start; }
};

inline Wavelet zero_wavelet(double t_start = 0.0, double t_end = 0.0) {
    return {"zero", [](double) { return 0.0; }, t_start, t_end, std::max(t_end - t_start, 1.0)};
}

/// A·exp(−(t−t₀)²/(2σ²)), cut at t₀ ± 8σ.
inline Wavelet gaussian_wavelet(double center, double sigma, double amplitude = 1.0) {
    require(sigma > 0.0, ErrorKind::validation, "gaussian width must be positive");
    return {"gaussian",
            [=](double t) {
                double u = (t - center) / sigma;
                return amplitude * std::exp(-0.5 * u * u);
            },
            center - 8.0 * sigma, center + 8.0 * sigma, sigma};
}

/// (1 − 2π²f²τ²)·exp(−π²f²τ²) with τ = t − delay, cut where the envelope
/// drops below ~1e-14. The default delay starts the support at t = 0.
inline Wavelet ricker_wavelet(double peak_frequency, std::optional<double> delay = std::nullopt,
                              double amplitude = 1.0) {
    require(peak_frequency > 0.0, ErrorKind::validation, "ricker peak frequency must be positive");
    const double half = 6.0 / (std::numbers::pi * peak_frequency);
    const double t0 = delay.value_or(half);
    const double a = std::numbers::pi * peak_frequency;
    return {"ricker",
            [=](double t) {
                double s = a * (t - t0);
                return amplitude * (1.0 - 2.0 * s * s) * std::exp(-s * s);
            },
            t0 - half, t0 + half, 1.0 / (a * 4.0)};
}

/// sin(2πf(t−t_s))·sin²(π(t−t_s)/T) on [t_s, t_s + T].
inline Wavelet windowed_sine(double t_start, double duration, double frequency, double amplitude = 1.0) {
    require(duration > 0.0 && frequency > 0.0, ErrorKind::validation, "windowed sine needs positive duration and frequency");
    return {"windowed_sine",
            [=](double t) {
                double u = t - t_start;
                double hann = std::sin(std::numbers::pi * u / duration);
                return amplitude * std::sin(2.0 * std::numbers::pi * frequency * u) * hann * hann;
            },
            t_start, t_start + duration, std::min(duration, 1.0 / frequency) / 4.0};
}

/// Piecewise-linear interpolation of (time, value) samples.
inline Wavelet tabulated_wavelet(std::vector<double> times, std::vector<double> values) {
    require(times.size() == values.size() && times.size() >= 2, ErrorKind::validation,
            "tabulated source needs at least two (time, value) samples");
    double shortest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < times.size(); ++k) {
        require(std::isfinite(times[k]) && std::isfinite(values[k]), ErrorKind::validation, "non-finite source sample");
        if (k > 0) {
            require(times[k] > times[k - 1], ErrorKind::validation, "source sample times must increase");
            shortest = std::min(shortest, times[k] - times[k - 1]);
        }
    }
    const double t0 = times.front(), t1 = times.back();
    return {"tabulated",
            [times = std::move(times), values = std::move(values)](double t) {
                auto it = std::upper_bound(times.begin(), times.end(), t);
                if (it == times.begin()) return values.front();
                if (it == times.end()) return values.back();
                const auto hi = static_cast<std::size_t>(it - times.begin());
                const double a = (t - times[hi - 1]) / (times[hi] - times[hi - 1]);
                return (1.0 - a) * values[hi - 1] + a * values[hi];
            },
            t0, t1, shortest};
}

inline Wavelet wavelet_from_csv(const std::string &path) {
    CsvTable table = read_csv(path);
    require(table.header.size() >= 2, ErrorKind::io, path + ": expected columns time,value");
    std::vector<double> t, v;
    for (const auto &row : table.rows) {
        t.push_back(row[0]);
        v.push_back(row[1]);
    }
    return tabulated_wavelet(std::move(t), std::move(v));
}

/// χ δ(x − x_s) f(t) at a pressure node. Polarization entries address the
/// pressure node, the v_x node to its right and the v_y node above it.
struct PointSource {
    std::size_t location = 0;
    Eigen::VectorXd polarization = Eigen::VectorXd::Ones(1);
    Wavelet wavelet;

    double t_start() const { return wavelet.t_start; }
    double t_end() const { return wavelet.t_end; }
};

/// Spatial part of the forcing: χ / cell volume on the local DOFs of `pair`.
inline Eigen::VectorXd point_source_pattern(const OperatorPair &pair, const PointSource &src) {
    const auto &g = pair.grid;
    require(src.location < g.pressure_count(), ErrorKind::validation,
            "source location " + std::to_string(src.location) + " is not a pressure node");
    require(src.polarization.size() >= 1 && src.polarization.size() <= 3, ErrorKind::validation,
            "polarization needs 1 to 3 components");
    const double vol = g.cell_volume();
    const auto c = g.pressure_cartesian(src.location);
    std::vector<std::pair<std::size_t, double>> full;
    full.emplace_back(src.location, src.polarization[0] / vol);
    if (src.polarization.size() > 1 && src.polarization[1] != 0.0) {
        require(c.i + 1 < g.nx(), ErrorKind::validation, "no v_x node to the right of the source");
        full.emplace_back(g.pressure_count() + g.vx_index(c.i, c.j), src.polarization[1] / vol);
    }
    if (src.polarization.size() > 2 && src.polarization[2] != 0.0) {
        require(g.dimension() == 2 && c.j + 1 < g.ny(), ErrorKind::validation, "no v_y node above the source");
        full.emplace_back(g.pressure_count() + g.vx_count() + g.vy_index(c.i, c.j), src.polarization[2] / vol);
    }
    Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pair.size()));
    for (auto [k, v] : full) {
        const std::size_t local = pair.local_of(k);
        require(local < pair.size(), ErrorKind::validation, "source sits on a constrained DOF");
        s[static_cast<Eigen::Index>(local)] = v;
    }
    return s;
}

struct PreSimResult {
    /// Field over the DOFs of the system it was computed for.
    Eigen::VectorXd field;
    double t_end = 0.0;
    double t_start = 0.0;
    Point center;
    double radius = 0.0;
    std::size_t nonzeros = 0;
    /// B-energy fraction cut away by the ball truncation.
    double truncated_fraction = 0.0;
};

struct PresimOptions {
    /// Largest ball the caller can afford; infinity means unconstrained.
    double max_radius = std::numeric_limits<double>::infinity();
    double margin_cells = 2.0;
    double leak_tolerance = 1e-8;
    /// Entries below threshold·max|w| do not count as nonzero.
    double nonzero_threshold = 0.0;
};

namespace detail {

inline void require_ball_inside(const StaggeredGrid &g, Point c, double r) {
    bool inside = c.x - r >= g.bounds(0).lo - 1e-12 && c.x + r <= g.bounds(0).hi + 1e-12;
    if (g.dimension() == 2) inside = inside && c.y - r >= g.bounds(1).lo - 1e-12 && c.y + r <= g.bounds(1).hi + 1e-12;
    require(inside, ErrorKind::causality,
            "ball of radius " + format_double(r) + " around the source leaves the domain");
}

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Truncation {
    double cut = 0.0;
    double total = 0.0;
    double fraction() const { return total > 0.0 ? cut / total : 0.0; }
};

// Zeroes entries outside the ball and reports the B-energy removed.
inline Truncation truncate_to_ball(const OperatorPair &pair, Eigen::VectorXd &w, Point c, double r) {
    const Eigen::VectorXd b = pair.B.diagonal_values();
    Truncation t;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        const double e = b[k] * w[k] * w[k];
        t.total += e;
        if (distance(pair.grid.dof_point(pair.full_index[static_cast<std::size_t>(k)]), c) > r + 1e-12) {
            t.cut += e;
            w[k] = 0.0;
        }
    }
    return t;
}

inline std::size_t count_nonzeros(const Eigen::VectorXd &w, double threshold) {
    const double cut = threshold * (w.size() ? w.cwiseAbs().maxCoeff() : 0.0);
    std::size_t n = 0;
    for (double v : w)
        if (v != 0.0 && std::abs(v) > cut) ++n;
    return n;
}

}  // namespace detail

/// Forced leapfrog run over the source support starting from rest, cut to
/// the causal ball of radius c_max·ΔT + margin.
inline PreSimResult presimulate_pulse(const PointSource &src, const OperatorPair &pair, double dt = 0.0,
                                      const PresimOptions &opts = {}) {
    const double span = src.t_end() - src.t_start();
    require(span >= 0.0, ErrorKind::validation, "source end precedes its start");
    if (dt <= 0.0) dt = suggested_dt(pair);
    PreSimResult r;
    r.t_start = src.t_start();
    r.t_end = src.t_end();
    r.center = pair.grid.pressure_point(src.location);
    r.radius = pair.max_speed * span + opts.margin_cells * pair.grid.min_spacing();
    if (r.radius > opts.max_radius) {
        fail(ErrorKind::causality, "waves leave the allowed ball of radius " + format_double(opts.max_radius) +
                                       " during the source; required radius is " + format_double(r.radius));
    }
    detail::require_ball_inside(pair.grid, r.center, r.radius);

    const Eigen::VectorXd pattern = point_source_pattern(pair, src);
    const double t0 = src.t_start();
    SourceSampler sampler = [&](double t) -> Eigen::VectorXd { return pattern * src.wavelet(t0 + t); };
    Trajectory tr = leapfrog_evolve(pair, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pair.size())), sampler, dt,
                                    span);
    r.field = tr.final_state();
    r.truncated_fraction = detail::truncate_to_ball(pair, r.field, r.center, r.radius).fraction();
    if (r.truncated_fraction > opts.leak_tolerance) {
        fail(ErrorKind::causality, "field energy fraction " + format_double(r.truncated_fraction) +
                                       " lies outside the causal ball; required radius exceeds " +
                                       format_double(r.radius));
    }
    r.nonzeros = detail::count_nonzeros(r.field, opts.nonzero_threshold);
    return r;
}

/// φ(0) = (I ⊗ B^{1/2})[w₁; …; w_S], zero blocks padding S to a power of two.
inline QuantumRegisterState assemble_multisource_state(const std::vector<PreSimResult> &presims, const SparseOperator &B) {
    require(!presims.empty(), ErrorKind::validation, "no pre-simulated sources");
    std::vector<Eigen::VectorXd> fields;
    for (const auto &p : presims) {
        require(static_cast<std::size_t>(p.field.size()) == B.rows(), ErrorKind::dimension,
                "pre-simulated fields live on different grids");
        fields.push_back(p.field);
    }
    return encode_stacked(fields, B);
}

inline std::vector<double> end_times(const std::vector<PreSimResult> &presims) {
    std::vector<double> t;
    for (const auto &p : presims) t.push_back(p.t_end);
    return t;
}

inline double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

/// σ(z t) − σ(z (t − width)); infinite z gives the box 1 on [0, width).
inline double window_value(double t, double width, double z) {
    if (std::isinf(z)) return (t >= 0.0 && t < width) ? 1.0 : 0.0;
    return sigmoid(z * t) - sigmoid(z * (t - width));
}

struct WindowSpec {
    double z = 0.0;
    /// Breakpoints τ₁ < … < τ_{J+1}.
    std::vector<double> tau;

    std::size_t count() const { return tau.empty() ? 0 : tau.size() - 1; }
    double width(std::size_t j) const { return tau[j + 1] - tau[j]; }
    /// Distance beyond a breakpoint after which a sigmoid edge is below tol.
    double tail(double tol) const { return std::isinf(z) ? 0.0 : std::log(1.0 / tol) / z; }
};

/// z giving partition-of-unity deviation below 1e-3 half a window inside.
inline double default_steepness(const std::vector<double> &tau) {
    double w = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < tau.size(); ++j) w = std::min(w, tau[j + 1] - tau[j]);
    return 16.0 / w;
}

struct WindowSet {
    /// values[j][i] = W_j(t_i − τ_j)
    std::vector<std::vector<double>> values;
    /// max |Σ_j W_j − 1| over the interior [τ₁ + w₁/2, τ_{J+1} − w_J/2].
    double max_deviation = 0.0;
};

inline WindowSet make_windows(const std::vector<double> &t_grid, double z, const std::vector<double> &tau) {
    require(z > 0.0, ErrorKind::validation, "window steepness must be positive");
    require(tau.size() >= 2, ErrorKind::validation, "need at least two breakpoints");
    for (std::size_t j = 1; j < tau.size(); ++j)
        require(tau[j] > tau[j - 1], ErrorKind::validation, "breakpoints must increase strictly");
    WindowSet ws;
    const std::size_t J = tau.size() - 1;
    ws.values.assign(J, std::vector<double>(t_grid.size(), 0.0));
    const double lo = tau[0] + 0.5 * (tau[1] - tau[0]);
    const double hi = tau[J] - 0.5 * (tau[J] - tau[J - 1]);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            ws.values[j][i] = window_value(t_grid[i] - tau[j], tau[j + 1] - tau[j], z);
            sum += ws.values[j][i];
        }
        if (t_grid[i] >= lo && t_grid[i] <= hi) ws.max_deviation = std::max(ws.max_deviation, std::abs(sum - 1.0));
    }
    return ws;
}

struct GreensOptions {
    std::optional<std::size_t> windows;
    std::optional<double> steepness;
    /// Sigmoid tails below this are dropped; sets the slice overlap.
    double tail_tolerance = 1e-12;
    double margin_cells = 4.0;
    double leak_tolerance = 1e-8;
    double nonzero_threshold = 0.0;
};

struct GreensDecomposition {
    WindowSpec windows;
    std::vector<PreSimResult> slices;
    /// T_s / T_hom, the window count estimate without overlap.
    double nominal_windows = 0.0;
    /// Σ_j nonzeros(slice j); grows with the window overlap.
    std::size_t total_nonzeros = 0;
};

namespace detail {

struct LocalBox {
    OperatorPair pair;
    std::vector<std::size_t> to_full;
    std::size_t source = 0;
};

// Homogeneous copy of the grid cut to the index box of half-width `cells`
// around the source.
inline LocalBox homogeneous_box(const StaggeredGrid &g, std::size_t source, std::size_t cells, double rho, double c) {
    const auto sc = g.pressure_cartesian(source);
    const std::size_t i0 = sc.i > cells ? sc.i - cells : 0, i1 = std::min(g.nx() - 1, sc.i + cells);
    std::size_t j0 = 0, j1 = 0;
    if (g.dimension() == 2) j0 = sc.j > cells ? sc.j - cells : 0, j1 = std::min(g.ny() - 1, sc.j + cells);
    std::vector<Interval> bounds{{g.pressure_point(g.pressure_index(i0, 0)).x, g.pressure_point(g.pressure_index(i1, 0)).x}};
    std::vector<std::size_t> counts{i1 - i0 + 1};
    if (g.dimension() == 2) {
        bounds.push_back({g.pressure_point(g.pressure_index(0, j0)).y, g.pressure_point(g.pressure_index(0, j1)).y});
        counts.push_back(j1 - j0 + 1);
    }
    LocalBox box;
    StaggeredGrid lg = build_grid(g.dimension(), bounds, counts);
    box.pair = assemble_operator_pair(lg, constant_acoustic(lg, rho, c));
    box.source = lg.pressure_index(sc.i - i0, g.dimension() == 2 ? sc.j - j0 : 0);
    box.to_full.resize(lg.dof_count());
    for (std::size_t k = 0; k < lg.pressure_count(); ++k) {
        auto lc = lg.pressure_cartesian(k);
        box.to_full[k] = g.pressure_index(lc.i + i0, lc.j + j0);
    }
    for (std::size_t k = 0; k < lg.vx_count(); ++k) {
        auto lc = lg.vx_cartesian(k);
        box.to_full[lg.pressure_count() + k] = g.pressure_count() + g.vx_index(lc.i + i0, lc.j + j0);
    }
    for (std::size_t k = 0; k < lg.vy_count(); ++k) {
        auto lc = lg.vy_cartesian(k);
        box.to_full[lg.pressure_count() + lg.vx_count() + k] =
            g.pressure_count() + g.vx_count() + g.vy_index(lc.i + i0, lc.j + j0);
    }
    return box;
}

}  // namespace detail

/// Splits a long source into smooth windows and solves each windowed piece
/// exactly in time inside the homogeneous ball of radius r_s around the
/// source. The slice fields live on the full acoustic grid `grid`.
inline GreensDecomposition greens_decompose(const PointSource &src, double c_hom, double rho_hom, double r_s,
                                            const StaggeredGrid &grid, const GreensOptions &opts = {}) {
    require(c_hom > 0.0 && rho_hom > 0.0, ErrorKind::positivity, "homogeneous material must be positive");
    require(r_s > 0.0, ErrorKind::validation, "ball radius must be positive");
    require(opts.tail_tolerance > 0.0 && opts.tail_tolerance < 1.0, ErrorKind::validation,
            "tail tolerance must lie in (0, 1)");
    require(src.location < grid.pressure_count(), ErrorKind::validation, "source location is not a pressure node");
    const double span = src.t_end() - src.t_start();
    require(span > 0.0, ErrorKind::validation, "source support is empty");
    const double delta = grid.min_spacing();
    const double t_hom = r_s / c_hom;
    const double t_avail = (r_s - opts.margin_cells * delta) / c_hom;
    require(t_avail > 0.0, ErrorKind::causality, "ball radius is smaller than the stencil margin");
    const Point center = grid.pressure_point(src.location);
    detail::require_ball_inside(grid, center, r_s);

    GreensDecomposition out;
    out.nominal_windows = span / t_hom;
    const double L = std::log(1.0 / opts.tail_tolerance);

    // τ spacing and steepness for J windows; slices run over [τ_j − m, τ_{j+1} + m].
    auto layout = [&](std::size_t J) -> std::optional<std::pair<double, double>> {
        double z, dtau;
        if (opts.steepness) {
            z = *opts.steepness;
            dtau = (span + 2.0 * L / z) / static_cast<double>(J);
        } else {
            double denom = static_cast<double>(J) - L / 8.0;
            if (denom <= 0.0) return std::nullopt;
            dtau = span / denom;
            z = 16.0 / dtau;
        }
        return std::make_pair(z, dtau);
    };
    auto slice_length = [&](double z, double dtau) { return std::min(dtau + 2.0 * L / z, span); };

    std::size_t J = 0;
    double z = 0.0, dtau = 0.0;
    if (opts.windows) {
        J = *opts.windows;
        require(J >= 1, ErrorKind::validation, "need at least one window");
        auto l = layout(J);
        require(l.has_value(), ErrorKind::validation,
                "too few windows for the default steepness; need more than " + format_double(L / 8.0));
        std::tie(z, dtau) = *l;
    } else {
        for (J = 1; J < 100000; ++J) {
            auto l = layout(J);
            if (l && slice_length(l->first, l->second) <= t_avail) {
                std::tie(z, dtau) = *l;
                break;
            }
        }
        require(dtau > 0.0, ErrorKind::causality, "no window layout fits the homogeneous ball");
    }
    require(z > 0.0, ErrorKind::validation, "window steepness must be positive");
    const double m = L / z;
    out.windows.z = z;
    for (std::size_t j = 0; j <= J; ++j) out.windows.tau.push_back(src.t_start() - m + static_cast<double>(j) * dtau);

    const auto cells = static_cast<std::size_t>(std::ceil(r_s / delta)) + 4;
    detail::LocalBox box = detail::homogeneous_box(grid, src.location, cells, rho_hom, c_hom);
    DuhamelSolver solver(box.pair);
    PointSource local_src = src;
    local_src.location = box.source;
    const Eigen::VectorXd pattern = point_source_pattern(box.pair, local_src);

    OperatorPair full_pair = assemble_operator_pair(grid, constant_acoustic(grid, rho_hom, c_hom));
    std::vector<detail::Truncation> cuts(J);
    double largest = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        const double tau = out.windows.tau[j];
        const double width = out.windows.width(j);
        const double a = std::max(tau - m, src.t_start());
        const double b = std::min(tau + width + m, src.t_end());
        PreSimResult r;
        r.t_start = a;
        r.t_end = b;
        r.center = center;
        r.field = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.dof_count()));
        if (b > a) {
            if (b - a > t_avail * (1.0 + 1e-12)) {
                fail(ErrorKind::causality, "window " + std::to_string(j) + " lasts " + format_double(b - a) +
                                               ", longer than the homogeneous travel time " + format_double(t_avail));
            }
            SeparableSource piece{pattern,
                                  [&src, tau, width, z](double t) { return src.wavelet(t) * window_value(t - tau, width, z); },
                                  a, b};
            Eigen::VectorXd local = solver.solve(Eigen::VectorXd::Zero(pattern.size()), {piece}, a, b,
                                                 std::min(1.0 / z, src.wavelet.time_scale));
            for (Eigen::Index k = 0; k < local.size(); ++k) r.field[static_cast<Eigen::Index>(box.to_full[static_cast<std::size_t>(k)])] = local[k];
            r.radius = c_hom * (b - a) + opts.margin_cells * delta;
            cuts[j] = detail::truncate_to_ball(full_pair, r.field, center, r.radius);
            r.truncated_fraction = cuts[j].fraction();
            largest = std::max(largest, cuts[j].total);
        }
        r.nonzeros = detail::count_nonzeros(r.field, opts.nonzero_threshold);
        out.total_nonzeros += r.nonzeros;
        out.slices.push_back(std::move(r));
    }
    // Leakage is judged against the strongest slice: the edge slices carry
    // only sigmoid tails and their own energy is not a meaningful scale.
    for (std::size_t j = 0; j < J; ++j) {
        if (cuts[j].cut > opts.leak_tolerance * largest) {
            fail(ErrorKind::causality, "slice " + std::to_string(j) + " leaks energy fraction " +
                                           format_double(cuts[j].cut / largest) + " outside radius " +
                                           format_double(out.slices[j].radius));
        }
    }
    return out;
}

/// Free-space 1D response to a pressure point source (continuous d'Alembert
/// form): p = (ρc/2)·f(t − |x − x_s|/c), v = sign(x − x_s)·f(t − |x − x_s|/c)/2.
inline Eigen::VectorXd dalembert_1d(const StaggeredGrid &grid, Point source, const Wavelet &f, double rho, double c,
                                    double t) {
    require(grid.dimension() == 1, ErrorKind::validation, "d'Alembert solution is one-dimensional");
    Eigen::VectorXd w(static_cast<Eigen::Index>(grid.dof_count()));
    for (std::size_t k = 0; k < grid.dof_count(); ++k) {
        const double dx = grid.dof_point(k).x - source.x;
        const double value = f(t - std::abs(dx) / c);
        w[static_cast<Eigen::Index>(k)] =
            k < grid.pressure_count() ? 0.5 * rho * c * value : (dx > 0 ? 0.5 : dx < 0 ? -0.5 : 0.0) * value;
    }
    return w;
}

}  // namespace qwave
