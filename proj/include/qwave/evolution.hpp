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
#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qwave/encoding.hpp"
#include "qwave/error.hpp"

namespace qwave {

enum class EvolutionMethod { automatic, dense, krylov };

struct EvolutionConfig {
    double tolerance = 1e-10;
    EvolutionMethod method = EvolutionMethod::automatic;
    std::size_t dense_cutoff = 4096;
    std::size_t max_dimension = std::size_t{1} << 24;
    std::size_t krylov_dimension = 40;

    void validate() const {
        require(std::isfinite(tolerance) && tolerance > 0.0, ErrorKind::validation, "evolution tolerance must be > 0");
        require(krylov_dimension >= 2, ErrorKind::validation, "Krylov dimension must be at least 2");
    }
};

inline EvolutionMethod parse_evolution_method(const std::string &name) {
    if (name == "auto") return EvolutionMethod::automatic;
    if (name == "dense") return EvolutionMethod::dense;
    if (name == "krylov") return EvolutionMethod::krylov;
    fail(ErrorKind::validation, "unknown evolution method '" + name + "' (auto, dense, krylov)");
}

namespace detail {

inline Eigen::VectorXcd dense_action(const Hamiltonian &h, const Eigen::VectorXcd &v, double t) {
    const auto &sp = h.spectral();
    Eigen::VectorXcd coeff = sp.eigenvectors.adjoint() * v;
    for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff[k] *= std::polar(1.0, -sp.eigenvalues[k] * t);
    return sp.eigenvectors * coeff;
}

// Lanczos approximation of e^{-iHt}v with adaptive substeps. The local error
// is estimated from the last Krylov coefficient.
inline Eigen::VectorXcd krylov_action(const ComplexSparse &h, const Eigen::VectorXcd &v, double t,
                                      const EvolutionConfig &cfg) {
    const double beta0 = v.norm();
    if (beta0 == 0.0 || t == 0.0) return v;
    const auto n = static_cast<std::size_t>(v.size());
    const std::size_t m_max = std::min(cfg.krylov_dimension, n);

    Eigen::VectorXcd w = v / beta0;
    double remaining = std::abs(t);
    const double sign = t < 0.0 ? -1.0 : 1.0;
    double tau = remaining;

    std::vector<Eigen::VectorXcd> basis;
    while (remaining > 0.0) {
        basis.assign(1, w);
        std::vector<double> alpha, beta;
        std::size_t m = 0;
        double last_beta = 0.0;
        for (; m < m_max; ++m) {
            Eigen::VectorXcd q = h * basis[m];
            if (m > 0) q -= beta[m - 1] * basis[m - 1];
            double a = basis[m].dot(q).real();
            q -= a * basis[m];
            // one full reorthogonalization pass keeps the basis orthonormal
            for (const auto &b : basis) q -= b.dot(q) * b;
            alpha.push_back(a);
            last_beta = q.norm();
            if (last_beta < 1e-14 * std::max(1.0, std::abs(a))) {
                ++m;
                last_beta = 0.0;
                break;
            }
            beta.push_back(last_beta);
            if (m + 1 < m_max) basis.push_back(q / last_beta);
        }
        const auto k = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
        for (Eigen::Index i = 0; i < k; ++i) {
            T(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);

        auto small_exp = [&](double step) {
            Eigen::VectorXcd y(k);
            Eigen::VectorXd first = es.eigenvectors().row(0).transpose();
            for (Eigen::Index i = 0; i < k; ++i) y[i] = std::polar(first[i], -sign * es.eigenvalues()[i] * step);
            return Eigen::VectorXcd(es.eigenvectors().cast<cplx>() * y);
        };

        for (;;) {
            tau = std::min(tau, remaining);
            Eigen::VectorXcd y = small_exp(tau);
            double err = last_beta * std::abs(y[k - 1]);
            double budget = cfg.tolerance * tau / std::abs(t);
            if (err <= budget || tau < 1e-300) {
                Eigen::VectorXcd next = Eigen::VectorXcd::Zero(v.size());
                for (Eigen::Index i = 0; i < k; ++i) next += y[i] * basis[static_cast<std::size_t>(i)];
                w = next / next.norm();
                remaining -= tau;
                if (err < 0.1 * budget) tau *= 1.5;
                break;
            }
            tau *= 0.5;
        }
    }
    return beta0 * w;
}

inline Eigen::VectorXcd apply_plain(const Hamiltonian &h, const Eigen::VectorXcd &v, double t,
                                    const EvolutionConfig &cfg) {
    bool dense = cfg.method == EvolutionMethod::dense ||
                 (cfg.method == EvolutionMethod::automatic && h.dim() <= cfg.dense_cutoff);
    return dense ? dense_action(h, v, t) : krylov_action(h.matrix(), v, t, cfg);
}

inline Eigen::VectorXcd apply(const Hamiltonian &h, const Eigen::VectorXcd &v, double t, const EvolutionConfig &cfg) {
    if (!h.blocks()) return apply_plain(h, v, t, cfg);
    const auto &bs = *h.blocks();
    const auto L = static_cast<Eigen::Index>(bs.base->dim());
    Eigen::VectorXcd out = v;
    for (std::size_t s = 0; s < bs.scales.size(); ++s) {
        if (bs.scales[s] == 0.0) continue;
        const auto off = static_cast<Eigen::Index>(s * bs.block_size);
        out.segment(off, L) = apply_plain(*bs.base, v.segment(off, L), t * bs.scales[s], cfg);
    }
    return out;
}

}  // namespace detail

/// ψ ↦ e^{-iHt}ψ. H may cover the whole register or, for single-block
/// registers, only the physical DOFs (the padding then stays inert).
inline QuantumRegisterState evolve(const QuantumRegisterState &state, const Hamiltonian &h, double t,
                                   const EvolutionConfig &cfg = {}) {
    cfg.validate();
    require(std::isfinite(t), ErrorKind::validation, "evolution time must be finite");
    require(Hamiltonian::hermitian_defect(h.matrix()) <= Hamiltonian::kHermitianTolerance, ErrorKind::non_hermitian,
            "refusing to evolve with a non-Hermitian matrix");
    const auto n = static_cast<std::size_t>(state.amplitudes.size());
    QuantumRegisterState out = state;
    if (t == 0.0 || !state.defined()) return out;
    if (h.dim() == n) {
        out.amplitudes = detail::apply(h, state.amplitudes, t, cfg);
    } else if (state.layout.arity == 1 && h.dim() == state.layout.physical_dofs) {
        const auto L = static_cast<Eigen::Index>(h.dim());
        out.amplitudes.head(L) = detail::apply(h, state.amplitudes.head(L), t, cfg);
    } else {
        fail(ErrorKind::dimension, "Hamiltonian dimension " + std::to_string(h.dim()) +
                                       " does not match register of size " + std::to_string(n));
    }
    const double before = state.amplitudes.norm();
    const double after = out.amplitudes.norm();
    require(std::isfinite(after) && after > 0.0, ErrorKind::non_hermitian, "evolution produced an invalid state");
    if (after != before) out.amplitudes *= before / after;
    return out;
}

/// diag(scales[s] · H) with every block zero-padded to the next power of two.
inline Hamiltonian block_diagonal_hamiltonian(const Hamiltonian &h, const std::vector<double> &scales,
                                              std::size_t max_dimension) {
    require(!h.blocks(), ErrorKind::dimension, "nested block Hamiltonians are not supported");
    require(is_power_of_two(scales.size()), ErrorKind::dimension, "block count must be a power of two");
    const std::size_t block = next_power_of_two(h.dim());
    require(block * scales.size() <= max_dimension, ErrorKind::dimension,
            "stacked dimension " + std::to_string(block * scales.size()) + " exceeds the configured maximum " +
                std::to_string(max_dimension));
    std::vector<Eigen::Triplet<cplx>> trips;
    for (std::size_t s = 0; s < scales.size(); ++s) {
        if (scales[s] == 0.0) continue;
        const auto off = static_cast<int>(s * block);
        for (int r = 0; r < h.matrix().outerSize(); ++r)
            for (ComplexSparse::InnerIterator it(h.matrix(), r); it; ++it)
                trips.emplace_back(off + r, off + static_cast<int>(it.col()), scales[s] * it.value());
    }
    const auto n = static_cast<Eigen::Index>(block * scales.size());
    ComplexSparse m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    return Hamiltonian(std::move(m), BlockStructure{std::make_shared<const Hamiltonian>(h), block, scales});
}

/// H^sync = diag((T_sync − T_s^end)·H); padded blocks are zero.
inline Hamiltonian build_sync_hamiltonian(const Hamiltonian &h, const std::vector<double> &t_ends, double t_sync,
                                          const EvolutionConfig &cfg = {}) {
    require(!t_ends.empty(), ErrorKind::invalid_schedule, "no end times given");
    require(std::isfinite(t_sync), ErrorKind::invalid_schedule, "synchronization time must be finite");
    std::vector<double> scales(next_power_of_two(t_ends.size()), 0.0);
    for (std::size_t s = 0; s < t_ends.size(); ++s) {
        require(std::isfinite(t_ends[s]), ErrorKind::invalid_schedule, "end time must be finite");
        require(t_ends[s] <= t_sync, ErrorKind::invalid_schedule,
                "end time " + std::to_string(t_ends[s]) + " of block " + std::to_string(s) +
                    " lies after the synchronization time " + std::to_string(t_sync));
        scales[s] = t_sync - t_ends[s];
    }
    return block_diagonal_hamiltonian(h, scales, cfg.max_dimension);
}

/// H^mult = I^{⊗log₂S} ⊗ H.
inline Hamiltonian build_mult_hamiltonian(const Hamiltonian &h, std::size_t copies, const EvolutionConfig &cfg = {}) {
    require(is_power_of_two(copies), ErrorKind::dimension, "copy count must be a power of two");
    return block_diagonal_hamiltonian(h, std::vector<double>(copies, 1.0), cfg.max_dimension);
}

}  // namespace qwave
