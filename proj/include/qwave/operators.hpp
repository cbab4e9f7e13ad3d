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
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwave/error.hpp"
#include "qwave/grid.hpp"
#include "qwave/sparse.hpp"

namespace qwave {

enum class EquationFamily { acoustic, maxwell1d };

inline const char *family_name(EquationFamily f) {
    return f == EquationFamily::acoustic ? "acoustic" : "maxwell1d";
}

/// Per-DOF material coefficients, sampled pointwise at the staggered nodes
/// they multiply (no averaging).
///
/// acoustic:  `primary` holds ρc² at pressure nodes, `secondary` holds ρ at
///            velocity nodes ([vx; vy]).
/// maxwell1d: `primary` holds ε at E nodes, `secondary` holds μ at H nodes.
struct MaterialModel {
    EquationFamily family = EquationFamily::acoustic;
    Eigen::VectorXd primary;
    Eigen::VectorXd secondary;

    /// Upper bound on the local propagation speed.
    double max_speed() const {
        if (family == EquationFamily::acoustic) {
            return std::sqrt(primary.maxCoeff() / secondary.minCoeff());
        }
        return 1.0 / std::sqrt(primary.minCoeff() * secondary.minCoeff());
    }
};

using ScalarField = std::function<double(Point)>;

inline MaterialModel sample_acoustic(const StaggeredGrid &grid, const ScalarField &density,
                                     const ScalarField &speed) {
    MaterialModel m;
    m.family = EquationFamily::acoustic;
    m.primary.resize(static_cast<Eigen::Index>(grid.pressure_count()));
    for (std::size_t k = 0; k < grid.pressure_count(); ++k) {
        Point p = grid.pressure_point(k);
        double c = speed(p);
        m.primary[static_cast<Eigen::Index>(k)] = density(p) * c * c;
    }
    m.secondary.resize(static_cast<Eigen::Index>(grid.velocity_count()));
    for (std::size_t k = 0; k < grid.velocity_count(); ++k) {
        m.secondary[static_cast<Eigen::Index>(k)] = density(grid.dof_point(grid.pressure_count() + k));
    }
    return m;
}

inline MaterialModel constant_acoustic(const StaggeredGrid &grid, double density, double speed) {
    return sample_acoustic(
        grid, [density](Point) { return density; }, [speed](Point) { return speed; });
}

inline MaterialModel sample_maxwell1d(const StaggeredGrid &grid, const ScalarField &permittivity,
                                      const ScalarField &permeability) {
    require(grid.dimension() == 1, ErrorKind::validation, "maxwell1d needs a 1D grid");
    MaterialModel m;
    m.family = EquationFamily::maxwell1d;
    m.primary.resize(static_cast<Eigen::Index>(grid.pressure_count()));
    for (std::size_t k = 0; k < grid.pressure_count(); ++k) {
        m.primary[static_cast<Eigen::Index>(k)] = permittivity(grid.pressure_point(k));
    }
    m.secondary.resize(static_cast<Eigen::Index>(grid.vx_count()));
    for (std::size_t k = 0; k < grid.vx_count(); ++k) {
        m.secondary[static_cast<Eigen::Index>(k)] = permeability(grid.vx_point(k));
    }
    return m;
}

inline MaterialModel constant_maxwell1d(const StaggeredGrid &grid, double permittivity, double permeability) {
    return sample_maxwell1d(
        grid, [permittivity](Point) { return permittivity; }, [permeability](Point) { return permeability; });
}

struct GradientDivergence {
    SparseOperator gradient;    // velocity DOFs x pressure DOFs
    SparseOperator divergence;  // pressure DOFs x velocity DOFs
};

/// First-order central differences on the staggered grid. Both operators are
/// built from their own stencils, so G = -Dᵀ is a checkable property rather
/// than a construction step.
inline GradientDivergence build_gradient_divergence(const StaggeredGrid &grid) {
    const std::size_t nu = grid.pressure_count();
    const std::size_t nvx = grid.vx_count();
    const std::size_t nv = grid.velocity_count();
    const double inv_dx = 1.0 / grid.dx();
    const double inv_dy = 1.0 / grid.dy();

    std::vector<SparseOperator::Entry> g;
    g.reserve(2 * nv);
    for (std::size_t k = 0; k < nvx; ++k) {
        auto c = grid.vx_cartesian(k);
        g.push_back({k, grid.pressure_index(c.i + 1, c.j), inv_dx});
        g.push_back({k, grid.pressure_index(c.i, c.j), -inv_dx});
    }
    for (std::size_t k = 0; k < grid.vy_count(); ++k) {
        auto c = grid.vy_cartesian(k);
        g.push_back({nvx + k, grid.pressure_index(c.i, c.j + 1), inv_dy});
        g.push_back({nvx + k, grid.pressure_index(c.i, c.j), -inv_dy});
    }

    std::vector<SparseOperator::Entry> d;
    d.reserve(2 * nv);
    for (std::size_t l = 0; l < nu; ++l) {
        auto c = grid.pressure_cartesian(l);
        if (c.i + 1 < grid.nx()) d.push_back({l, grid.vx_index(c.i, c.j), inv_dx});
        if (c.i > 0) d.push_back({l, grid.vx_index(c.i - 1, c.j), -inv_dx});
        if (grid.dimension() == 2) {
            if (c.j + 1 < grid.ny()) d.push_back({l, nvx + grid.vy_index(c.i, c.j), inv_dy});
            if (c.j > 0) d.push_back({l, nvx + grid.vy_index(c.i, c.j - 1), -inv_dy});
        }
    }
    return {SparseOperator(nv, nu, std::move(g)), SparseOperator(nu, nv, std::move(d))};
}

struct FieldBlock {
    std::string name;
    std::size_t offset = 0;
    std::size_t size = 0;
};

/// The (B, A) pair of B dw/dt = A w. `full_index[k]` is the full-grid DOF
/// (in [u; vx; vy] or [E; H] order) of local DOF k; it is the identity for an
/// unreduced pair and a subsequence after constraint reduction.
struct OperatorPair {
    SparseOperator A;
    SparseOperator B;
    std::vector<FieldBlock> blocks;
    EquationFamily family = EquationFamily::acoustic;
    StaggeredGrid grid;
    std::vector<std::size_t> full_index;
    double max_speed = 1.0;

    std::size_t size() const { return B.rows(); }

    /// True for DOFs of the first field (pressure or E).
    bool is_primary(std::size_t local) const { return full_index[local] < grid.pressure_count(); }

    /// dt bound Δ_min / (c_max √D).
    double stable_dt() const {
        return grid.min_spacing() / (max_speed * std::sqrt(static_cast<double>(grid.dimension())));
    }

    /// Local index of a full-grid DOF, or size() when it was eliminated.
    std::size_t local_of(std::size_t full) const {
        auto it = std::lower_bound(full_index.begin(), full_index.end(), full);
        if (it != full_index.end() && *it == full) return static_cast<std::size_t>(it - full_index.begin());
        return size();
    }
};

inline OperatorPair assemble_operator_pair(const StaggeredGrid &grid, const MaterialModel &material) {
    const std::size_t nu = grid.pressure_count();
    const std::size_t nv = material.family == EquationFamily::acoustic ? grid.velocity_count() : grid.vx_count();
    const std::size_t n = nu + nv;
    require(material.family == EquationFamily::acoustic || grid.dimension() == 1, ErrorKind::validation,
            "maxwell1d needs a 1D grid");
    require(static_cast<std::size_t>(material.primary.size()) == nu &&
                static_cast<std::size_t>(material.secondary.size()) == nv,
            ErrorKind::dimension, "material does not cover every DOF of the grid");
    for (Eigen::Index k = 0; k < material.primary.size(); ++k) {
        require(std::isfinite(material.primary[k]) && material.primary[k] > 0.0, ErrorKind::positivity,
                "non-positive material coefficient at primary DOF " + std::to_string(k));
    }
    for (Eigen::Index k = 0; k < material.secondary.size(); ++k) {
        require(std::isfinite(material.secondary[k]) && material.secondary[k] > 0.0, ErrorKind::positivity,
                "non-positive material coefficient at secondary DOF " + std::to_string(k));
    }

    auto ops = build_gradient_divergence(grid);
    std::vector<SparseOperator::Entry> a;
    a.reserve(2 * ops.gradient.nonzeros());
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    OperatorPair pair;
    pair.family = material.family;
    pair.grid = grid;

    if (material.family == EquationFamily::acoustic) {
        // A = [[0, -D], [-G, 0]]
        for (const auto &e : ops.divergence.entries()) a.push_back({e.row, nu + e.col, -e.value});
        for (const auto &e : ops.gradient.entries()) a.push_back({nu + e.row, e.col, -e.value});
        b.head(static_cast<Eigen::Index>(nu)) = material.primary.cwiseInverse();
        b.tail(static_cast<Eigen::Index>(nv)) = material.secondary;
        pair.blocks.push_back({"pressure", 0, nu});
        pair.blocks.push_back({"vx", nu, grid.vx_count()});
        if (grid.dimension() == 2) pair.blocks.push_back({"vy", nu + grid.vx_count(), grid.vy_count()});
    } else {
        // A = [[0, D], [-Dᵀ, 0]] over (E, H)
        for (const auto &e : ops.divergence.entries()) {
            a.push_back({e.row, nu + e.col, e.value});
            a.push_back({nu + e.col, e.row, -e.value});
        }
        b.head(static_cast<Eigen::Index>(nu)) = material.primary;
        b.tail(static_cast<Eigen::Index>(nv)) = material.secondary;
        pair.blocks.push_back({"E", 0, nu});
        pair.blocks.push_back({"H", nu, nv});
    }
    pair.A = SparseOperator(n, n, std::move(a));
    pair.B = SparseOperator::diagonal(b);
    pair.full_index.resize(n);
    for (std::size_t k = 0; k < n; ++k) pair.full_index[k] = k;
    pair.max_speed = material.max_speed();

    double defect = antisymmetry_defect(pair.A);
    require(defect == 0.0, ErrorKind::incompatible_constraints,
            "assembled operator is not anti-symmetric (defect " + std::to_string(defect) + ")");
    return pair;
}

/// Block-wise energy (w|w)_B for a diagonal B.
inline double b_energy(const OperatorPair &pair, const Eigen::VectorXd &w) {
    require(static_cast<std::size_t>(w.size()) == pair.size(), ErrorKind::dimension, "field size mismatch");
    return w.dot(pair.B.apply(w));
}

}  // namespace qwave
