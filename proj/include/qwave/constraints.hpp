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
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qwave/error.hpp"
#include "qwave/grid.hpp"
#include "qwave/operators.hpp"
#include "qwave/sparse.hpp"

namespace qwave {

enum class Side { left, right, bottom, top };

/// Linear constraints R_f w_f + R_c w_c = b(t) on the DOFs of an operator pair.
/// `constrained` lists the c-partition; the f-partition is every other DOF in
/// ascending order, which is also the column order of R_f.
struct ConstraintSet {
    std::size_t dof_count = 0;
    std::vector<std::size_t> constrained;
    SparseOperator R_f;
    SparseOperator R_c;
    /// Sample times of b(t); empty means b ≡ 0.
    std::vector<double> times;
    /// N_c x times.size()
    Eigen::MatrixXd b;

    std::size_t size() const { return constrained.size(); }

    std::vector<std::size_t> free_dofs() const {
        std::vector<char> mark(dof_count, 0);
        for (auto c : constrained) mark[c] = 1;
        std::vector<std::size_t> f;
        f.reserve(dof_count - constrained.size());
        for (std::size_t k = 0; k < dof_count; ++k)
            if (!mark[k]) f.push_back(k);
        return f;
    }
};

/// Pressure (or E) nodes on one side of the domain, ascending.
inline std::vector<std::size_t> boundary_pressure_dofs(const StaggeredGrid &grid, Side side) {
    std::vector<std::size_t> out;
    const bool two_d = grid.dimension() == 2;
    require(two_d || side == Side::left || side == Side::right, ErrorKind::validation,
            "1D grids only have left and right boundaries");
    switch (side) {
        case Side::left:
            for (std::size_t j = 0; j < grid.ny(); ++j) out.push_back(grid.pressure_index(0, j));
            break;
        case Side::right:
            for (std::size_t j = 0; j < grid.ny(); ++j) out.push_back(grid.pressure_index(grid.nx() - 1, j));
            break;
        case Side::bottom:
            for (std::size_t i = 0; i < grid.nx(); ++i) out.push_back(grid.pressure_index(i, 0));
            break;
        case Side::top:
            for (std::size_t i = 0; i < grid.nx(); ++i) out.push_back(grid.pressure_index(i, grid.ny() - 1));
            break;
    }
    return out;
}

/// Union of several sides, ascending and without duplicates (corners are shared).
inline std::vector<std::size_t> boundary_pressure_dofs(const StaggeredGrid &grid, const std::vector<Side> &sides) {
    std::vector<std::size_t> all;
    for (auto s : sides) {
        auto part = boundary_pressure_dofs(grid, s);
        all.insert(all.end(), part.begin(), part.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

/// Homogeneous Dirichlet constraints u = 0 on the listed pressure DOFs.
inline ConstraintSet dirichlet_constraints(const StaggeredGrid &grid, std::vector<std::size_t> pressure_dofs) {
    std::sort(pressure_dofs.begin(), pressure_dofs.end());
    pressure_dofs.erase(std::unique(pressure_dofs.begin(), pressure_dofs.end()), pressure_dofs.end());
    for (auto k : pressure_dofs) {
        require(k < grid.pressure_count(), ErrorKind::dimension,
                "constraint index " + std::to_string(k) + " is not a pressure DOF");
    }
    ConstraintSet cs;
    cs.dof_count = grid.dof_count();
    cs.constrained = pressure_dofs;
    const std::size_t nc = pressure_dofs.size();
    cs.R_f = SparseOperator(nc, cs.dof_count - nc, {});
    cs.R_c = SparseOperator::identity(nc);
    return cs;
}

/// Second-order finite-difference derivative of sampled rows on a possibly
/// non-uniform time grid (central inside, one-sided at the ends).
inline Eigen::MatrixXd sample_derivative(const std::vector<double> &t, const Eigen::MatrixXd &f) {
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(f.rows(), n);
    if (n < 2) return d;
    if (n == 2) {
        Eigen::VectorXd slope = (f.col(1) - f.col(0)) / (t[1] - t[0]);
        d.col(0) = slope;
        d.col(1) = slope;
        return d;
    }
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        double hm = t[i] - t[i - 1];
        double hp = t[i + 1] - t[i];
        d.col(i) = (hm * hm * f.col(i + 1) - hp * hp * f.col(i - 1) + (hp * hp - hm * hm) * f.col(i)) /
                   (hm * hp * (hm + hp));
    }
    auto one_sided = [&](Eigen::Index a, Eigen::Index b, Eigen::Index c) {
        // derivative at t[a] from samples a, b, c (Lagrange)
        double ta = t[a], tb = t[b], tc = t[c];
        double wa = (2 * ta - tb - tc) / ((ta - tb) * (ta - tc));
        double wb = (ta - tc) / ((tb - ta) * (tb - tc));
        double wc = (ta - tb) / ((tc - ta) * (tc - tb));
        return Eigen::VectorXd(wa * f.col(a) + wb * f.col(b) + wc * f.col(c));
    };
    d.col(0) = one_sided(0, 1, 2);
    d.col(n - 1) = one_sided(n - 1, n - 2, n - 3);
    return d;
}

/// Result of eliminating constrained DOFs: B̲ dw_f/dt = A̲ w_f + s̲_c(t).
struct ReducedSystem {
    OperatorPair system;
    /// R_c⁻¹ R_f (dense, N_c x N_f); empty when R_f = 0.
    Eigen::MatrixXd coupling;
    /// R_c⁻¹ b at the sample times (N_c x T).
    Eigen::MatrixXd constrained_values;
    std::vector<std::size_t> constrained;
    std::vector<double> source_times;
    /// s̲_c at the sample times (N_f x T).
    Eigen::MatrixXd source_samples;

    std::size_t full_size() const { return system.size() + constrained.size(); }

    /// Induced source at time t, linear in time between samples and held
    /// constant outside them. Zero when b ≡ 0.
    Eigen::VectorXd induced_source(double t) const {
        const auto nf = static_cast<Eigen::Index>(system.size());
        if (source_times.empty()) return Eigen::VectorXd::Zero(nf);
        return interpolate(source_samples, t);
    }

    /// Reconstructs the full field, w_c = R_c⁻¹ (b(t) − R_f w_f).
    Eigen::VectorXd expand(const Eigen::VectorXd &wf, double t = 0.0) const {
        require(static_cast<std::size_t>(wf.size()) == system.size(), ErrorKind::dimension, "free field size");
        Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(full_size()));
        for (std::size_t k = 0; k < system.size(); ++k) w[static_cast<Eigen::Index>(system.full_index[k])] = wf[static_cast<Eigen::Index>(k)];
        Eigen::VectorXd wc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(constrained.size()));
        if (!source_times.empty()) wc += interpolate(constrained_values, t);
        if (coupling.size() > 0) wc -= coupling * wf;
        for (std::size_t k = 0; k < constrained.size(); ++k) w[static_cast<Eigen::Index>(constrained[k])] = wc[static_cast<Eigen::Index>(k)];
        return w;
    }

    /// Restriction of a full field to the free DOFs.
    Eigen::VectorXd restrict(const Eigen::VectorXd &w) const {
        require(static_cast<std::size_t>(w.size()) == full_size(), ErrorKind::dimension, "full field size");
        Eigen::VectorXd wf(static_cast<Eigen::Index>(system.size()));
        for (std::size_t k = 0; k < system.size(); ++k) wf[static_cast<Eigen::Index>(k)] = w[static_cast<Eigen::Index>(system.full_index[k])];
        return wf;
    }

   private:
    Eigen::VectorXd interpolate(const Eigen::MatrixXd &samples, double t) const {
        const auto &ts = source_times;
        if (t <= ts.front()) return samples.col(0);
        if (t >= ts.back()) return samples.col(static_cast<Eigen::Index>(ts.size()) - 1);
        auto it = std::upper_bound(ts.begin(), ts.end(), t);
        auto hi = static_cast<Eigen::Index>(it - ts.begin());
        auto lo = hi - 1;
        double a = (t - ts[static_cast<std::size_t>(lo)]) / (ts[static_cast<std::size_t>(hi)] - ts[static_cast<std::size_t>(lo)]);
        return (1.0 - a) * samples.col(lo) + a * samples.col(hi);
    }
};

namespace detail {

inline SparseOperator submatrix(const RealSparse &m, const std::vector<std::size_t> &rows,
                                const std::vector<std::size_t> &cols, std::size_t full_cols) {
    std::vector<long> col_pos(full_cols, -1);
    for (std::size_t k = 0; k < cols.size(); ++k) col_pos[cols[k]] = static_cast<long>(k);
    std::vector<SparseOperator::Entry> out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (RealSparse::InnerIterator it(m, static_cast<Eigen::Index>(rows[r])); it; ++it) {
            long c = col_pos[static_cast<std::size_t>(it.col())];
            if (c >= 0) out.push_back({r, static_cast<std::size_t>(c), it.value()});
        }
    }
    return SparseOperator(rows.size(), cols.size(), std::move(out));
}

}  // namespace detail

/// Tolerance on max |B̲ − B̲ᵀ| and max |A̲ + A̲ᵀ| after a reduction.
inline constexpr double kSymmetryTolerance = 1e-12;

inline ReducedSystem reduce_system(const OperatorPair &pair, const ConstraintSet &cs) {
    const std::size_t n = pair.size();
    const std::size_t nc = cs.size();
    require(cs.dof_count == n, ErrorKind::dimension,
            "constraint set is for " + std::to_string(cs.dof_count) + " DOFs, system has " + std::to_string(n));
    require(pair.full_index.size() == n && (n == 0 || pair.full_index.back() == n - 1), ErrorKind::reduction,
            "constraints apply to unreduced operator pairs only");
    {
        auto sorted = cs.constrained;
        std::sort(sorted.begin(), sorted.end());
        require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorKind::reduction,
                "constrained DOF listed twice");
        require(sorted.empty() || sorted.back() < n, ErrorKind::dimension, "constrained DOF out of range");
    }
    const auto free = cs.free_dofs();
    const std::size_t nf = free.size();
    require(cs.R_c.rows() == nc && cs.R_c.cols() == nc, ErrorKind::dimension, "R_c must be N_c x N_c");
    require(cs.R_f.rows() == nc && cs.R_f.cols() == nf, ErrorKind::dimension, "R_f must be N_c x (N - N_c)");
    require(cs.times.empty() || (static_cast<std::size_t>(cs.b.rows()) == nc &&
                                 static_cast<std::size_t>(cs.b.cols()) == cs.times.size()),
            ErrorKind::dimension, "b(t) samples must be N_c x T");
    for (std::size_t i = 1; i < cs.times.size(); ++i) {
        require(cs.times[i] > cs.times[i - 1], ErrorKind::validation, "b(t) sample times must increase");
    }
    require(cs.b.allFinite(), ErrorKind::validation, "b(t) samples must be finite");

    // R_c⁻¹ as a dense matrix; a single nonzero per row and column is the
    // scaled-permutation fast path.
    Eigen::MatrixXd rc_inv = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nc), static_cast<Eigen::Index>(nc));
    bool scaled_permutation = cs.R_c.nonzeros() == nc;
    if (scaled_permutation) {
        std::vector<char> col_seen(nc, 0);
        std::size_t last_row = nc;
        for (const auto &e : cs.R_c.entries()) {
            if (e.row == last_row || col_seen[e.col]) {
                scaled_permutation = false;
                break;
            }
            last_row = e.row;
            col_seen[e.col] = 1;
            rc_inv(static_cast<Eigen::Index>(e.col), static_cast<Eigen::Index>(e.row)) = 1.0 / e.value;
        }
    }
    if (!scaled_permutation && nc > 0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(cs.R_c.to_dense());
        require(lu.isInvertible(), ErrorKind::reduction, "R_c is singular");
        rc_inv = lu.inverse();
    }

    const RealSparse A = pair.A.to_eigen();
    const RealSparse B = pair.B.to_eigen();
    auto A_ff = detail::submatrix(A, free, free, n).to_eigen();
    auto B_ff = detail::submatrix(B, free, free, n).to_eigen();
    auto A_fc = detail::submatrix(A, free, cs.constrained, n).to_eigen();
    auto B_fc = detail::submatrix(B, free, cs.constrained, n).to_eigen();

    ReducedSystem out;
    out.constrained = cs.constrained;
    RealSparse A_red = A_ff;
    RealSparse B_red = B_ff;
    if (cs.R_f.nonzeros() > 0) {
        out.coupling = rc_inv * cs.R_f.to_dense();
        RealSparse X = out.coupling.sparseView();
        A_red = RealSparse(A_ff - RealSparse(A_fc * X));
        B_red = RealSparse(B_ff - RealSparse(B_fc * X));
        A_red.prune(0.0);
        B_red.prune(0.0);
    }

    OperatorPair &sys = out.system;
    sys.A = SparseOperator::from_eigen(A_red);
    sys.B = SparseOperator::from_eigen(B_red);
    sys.family = pair.family;
    sys.grid = pair.grid;
    sys.max_speed = pair.max_speed;
    sys.full_index = free;
    for (const auto &blk : pair.blocks) {
        auto lo = std::lower_bound(free.begin(), free.end(), blk.offset);
        auto hi = std::lower_bound(free.begin(), free.end(), blk.offset + blk.size);
        sys.blocks.push_back({blk.name, static_cast<std::size_t>(lo - free.begin()), static_cast<std::size_t>(hi - lo)});
    }

    double b_defect = symmetry_defect(sys.B);
    double a_defect = antisymmetry_defect(sys.A);
    require(b_defect <= kSymmetryTolerance, ErrorKind::incompatible_constraints,
            "reduced B is not symmetric (defect " + std::to_string(b_defect) + ")");
    require(a_defect <= kSymmetryTolerance, ErrorKind::incompatible_constraints,
            "reduced A is not anti-symmetric (defect " + std::to_string(a_defect) + ")");
    if (sys.B.is_diagonal()) {
        require(nf == 0 || sys.B.diagonal_values().minCoeff() > 0.0, ErrorKind::incompatible_constraints,
                "reduced B is not positive definite");
    } else {
        Eigen::LLT<Eigen::MatrixXd> llt(sys.B.to_dense());
        require(llt.info() == Eigen::Success, ErrorKind::incompatible_constraints,
                "reduced B is not positive definite");
    }

    if (!cs.times.empty()) {
        out.source_times = cs.times;
        out.constrained_values = rc_inv * cs.b;
        Eigen::MatrixXd db = sample_derivative(cs.times, cs.b);
        Eigen::MatrixXd Afc = Eigen::MatrixXd(A_fc);
        Eigen::MatrixXd Bfc = Eigen::MatrixXd(B_fc);
        out.source_samples = Afc * out.constrained_values - Bfc * (rc_inv * db);
    }
    return out;
}

}  // namespace qwave
