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

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qwave/error.hpp"

namespace qwave {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct CartesianIndex {
    std::size_t i = 0;
    std::size_t j = 0;
    friend bool operator==(const CartesianIndex &, const CartesianIndex &) = default;
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Uniform rectangular staggered grid in 1 or 2 dimensions.
///
/// Pressure (or E) nodes sit at x0 + iΔx, y0 + jΔy. The x-velocity (or H) nodes
/// sit halfway between x-neighbours, the y-velocity nodes halfway between
/// y-neighbours. Every family is linearized row-major with x fastest:
/// k = i + j·(nodes along x for that family). In 1D, j is always 0.
class StaggeredGrid {
   public:
    StaggeredGrid() = default;

    std::size_t dimension() const { return dimension_; }
    const Interval &bounds(std::size_t axis) const { return bounds_[axis]; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double min_spacing() const { return dimension_ == 1 ? dx_ : std::min(dx_, dy_); }
    /// Product of spacings, the cell volume a point delta is spread over.
    double cell_volume() const { return dimension_ == 1 ? dx_ : dx_ * dy_; }

    std::size_t pressure_count() const { return nx_ * ny_; }
    std::size_t vx_count() const { return (nx_ - 1) * ny_; }
    std::size_t vy_count() const { return dimension_ == 2 ? nx_ * (ny_ - 1) : 0; }
    std::size_t velocity_count() const { return vx_count() + vy_count(); }
    std::size_t dof_count() const { return pressure_count() + velocity_count(); }

    std::size_t pressure_index(std::size_t i, std::size_t j = 0) const {
        check(i < nx_ && j < ny_, "pressure node");
        return i + j * nx_;
    }
    CartesianIndex pressure_cartesian(std::size_t k) const {
        check(k < pressure_count(), "pressure index");
        return {k % nx_, k / nx_};
    }
    Point pressure_point(std::size_t k) const {
        auto c = pressure_cartesian(k);
        return {x_at(static_cast<double>(c.i)), y_at(static_cast<double>(c.j))};
    }

    /// x-velocity node between pressure nodes (i, j) and (i + 1, j).
    std::size_t vx_index(std::size_t i, std::size_t j = 0) const {
        check(i + 1 < nx_ && j < ny_, "x-velocity node");
        return i + j * (nx_ - 1);
    }
    CartesianIndex vx_cartesian(std::size_t k) const {
        check(k < vx_count(), "x-velocity index");
        return {k % (nx_ - 1), k / (nx_ - 1)};
    }
    Point vx_point(std::size_t k) const {
        auto c = vx_cartesian(k);
        return {x_at(static_cast<double>(c.i) + 0.5), y_at(static_cast<double>(c.j))};
    }

    /// y-velocity node between pressure nodes (i, j) and (i, j + 1).
    std::size_t vy_index(std::size_t i, std::size_t j) const {
        check(dimension_ == 2 && i < nx_ && j + 1 < ny_, "y-velocity node");
        return i + j * nx_;
    }
    CartesianIndex vy_cartesian(std::size_t k) const {
        check(k < vy_count(), "y-velocity index");
        return {k % nx_, k / nx_};
    }
    Point vy_point(std::size_t k) const {
        auto c = vy_cartesian(k);
        return {x_at(static_cast<double>(c.i)), y_at(static_cast<double>(c.j) + 0.5)};
    }

    /// Position of a DOF in the stacked [u; vx; vy] ordering.
    Point dof_point(std::size_t dof) const {
        if (dof < pressure_count()) return pressure_point(dof);
        dof -= pressure_count();
        if (dof < vx_count()) return vx_point(dof);
        dof -= vx_count();
        return vy_point(dof);
    }

    /// Nearest pressure node to a physical position (clamped to the domain).
    std::size_t nearest_pressure(Point p) const {
        auto clamp_index = [](double t, std::size_t n) {
            long r = std::lround(t);
            if (r < 0) r = 0;
            if (r > static_cast<long>(n) - 1) r = static_cast<long>(n) - 1;
            return static_cast<std::size_t>(r);
        };
        std::size_t i = clamp_index((p.x - bounds_[0].lo) / dx_, nx_);
        std::size_t j = dimension_ == 2 ? clamp_index((p.y - bounds_[1].lo) / dy_, ny_) : 0;
        return pressure_index(i, j);
    }

    bool contains(Point p) const {
        const double eps = 1e-12 * (bounds_[0].hi - bounds_[0].lo);
        bool inside = p.x >= bounds_[0].lo - eps && p.x <= bounds_[0].hi + eps;
        if (dimension_ == 2) {
            const double epy = 1e-12 * (bounds_[1].hi - bounds_[1].lo);
            inside = inside && p.y >= bounds_[1].lo - epy && p.y <= bounds_[1].hi + epy;
        }
        return inside;
    }

    friend StaggeredGrid build_grid(std::size_t dimension, const std::vector<Interval> &bounds,
                                    const std::vector<std::size_t> &node_counts);

   private:
    double x_at(double i) const { return bounds_[0].lo + i * dx_; }
    double y_at(double j) const { return dimension_ == 2 ? bounds_[1].lo + j * dy_ : 0.0; }
    static void check(bool ok, const char *what) {
        require(ok, ErrorKind::dimension, std::string(what) + " out of range");
    }

    std::size_t dimension_ = 1;
    std::array<Interval, 2> bounds_{};
    std::size_t nx_ = 2;
    std::size_t ny_ = 1;
    double dx_ = 1.0;
    double dy_ = 1.0;
};

inline StaggeredGrid build_grid(std::size_t dimension, const std::vector<Interval> &bounds,
                                const std::vector<std::size_t> &node_counts) {
    require(dimension == 1 || dimension == 2, ErrorKind::invalid_grid, "dimension must be 1 or 2");
    require(bounds.size() == dimension && node_counts.size() == dimension, ErrorKind::invalid_grid,
            "need one bound and one node count per axis");
    StaggeredGrid g;
    g.dimension_ = dimension;
    for (std::size_t a = 0; a < dimension; ++a) {
        require(node_counts[a] >= 2, ErrorKind::invalid_grid, "node count must be at least 2 on every axis");
        require(std::isfinite(bounds[a].lo) && std::isfinite(bounds[a].hi) && bounds[a].hi > bounds[a].lo,
                ErrorKind::invalid_grid, "degenerate bounds on axis " + std::to_string(a));
        g.bounds_[a] = bounds[a];
    }
    g.nx_ = node_counts[0];
    g.dx_ = (bounds[0].hi - bounds[0].lo) / static_cast<double>(g.nx_ - 1);
    if (dimension == 2) {
        g.ny_ = node_counts[1];
        g.dy_ = (bounds[1].hi - bounds[1].lo) / static_cast<double>(g.ny_ - 1);
    } else {
        g.ny_ = 1;
        g.dy_ = 1.0;
        g.bounds_[1] = {0.0, 0.0};
    }
    return g;
}

inline StaggeredGrid build_grid_1d(double x0, double x1, std::size_t nx) {
    return build_grid(1, {{x0, x1}}, {nx});
}

inline StaggeredGrid build_grid_2d(Interval x, Interval y, std::size_t nx, std::size_t ny) {
    return build_grid(2, {x, y}, {nx, ny});
}

}  // namespace qwave
