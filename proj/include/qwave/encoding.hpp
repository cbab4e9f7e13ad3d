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
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qwave/error.hpp"
#include "qwave/operators.hpp"
#include "qwave/sparse.hpp"

namespace qwave {

using cplx = std::complex<double>;
using ComplexSparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

inline std::size_t log2_exact(std::size_t n) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

/// Shape of a register holding `arity` stacked blocks. Each block carries
/// `physical_dofs` entries followed by zero padding up to `block_size`.
struct RegisterLayout {
    std::size_t physical_dofs = 0;
    std::size_t block_size = 1;
    std::size_t arity = 1;

    std::size_t total() const { return block_size * arity; }
    std::size_t qubits() const { return log2_exact(total()); }

    friend bool operator==(const RegisterLayout &, const RegisterLayout &) = default;
};

inline RegisterLayout make_layout(std::size_t physical_dofs, std::size_t arity = 1) {
    require(physical_dofs > 0, ErrorKind::dimension, "empty register");
    require(is_power_of_two(arity), ErrorKind::dimension, "arity must be a power of two");
    return {physical_dofs, next_power_of_two(physical_dofs), arity};
}

/// Normalized amplitudes plus the norm of the unnormalized physical vector.
/// A zero physical vector has scale 0 and all-zero amplitudes.
struct QuantumRegisterState {
    Eigen::VectorXcd amplitudes;
    double scale = 0.0;
    RegisterLayout layout;

    bool defined() const { return scale > 0.0; }

    /// Physical entries of block m, normalized (not multiplied by scale).
    Eigen::VectorXcd block(std::size_t m) const {
        require(m < layout.arity, ErrorKind::dimension, "block index out of range");
        return amplitudes.segment(static_cast<Eigen::Index>(m * layout.block_size),
                                  static_cast<Eigen::Index>(layout.physical_dofs));
    }

    /// True when every padded entry is exactly zero.
    bool padding_is_zero() const {
        for (std::size_t m = 0; m < layout.arity; ++m) {
            for (std::size_t k = layout.physical_dofs; k < layout.block_size; ++k) {
                if (amplitudes[static_cast<Eigen::Index>(m * layout.block_size + k)] != cplx(0.0)) return false;
            }
        }
        return true;
    }
};

/// Stacks already-transformed blocks into a normalized register; the block
/// count is padded with zero blocks to a power of two.
inline QuantumRegisterState stack_register(const std::vector<Eigen::VectorXcd> &blocks) {
    require(!blocks.empty(), ErrorKind::dimension, "no blocks to stack");
    const auto L = static_cast<std::size_t>(blocks.front().size());
    QuantumRegisterState s;
    s.layout = make_layout(L, next_power_of_two(blocks.size()));
    s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(s.layout.total()));
    for (std::size_t m = 0; m < blocks.size(); ++m) {
        require(static_cast<std::size_t>(blocks[m].size()) == L, ErrorKind::dimension, "blocks differ in size");
        require(blocks[m].allFinite(), ErrorKind::validation, "non-finite amplitude");
        s.amplitudes.segment(static_cast<Eigen::Index>(m * s.layout.block_size), static_cast<Eigen::Index>(L)) =
            blocks[m];
    }
    s.scale = s.amplitudes.norm();
    if (s.scale > 0.0) s.amplitudes /= s.scale;
    return s;
}

inline Eigen::VectorXd b_sqrt_diagonal(const SparseOperator &B) {
    require(B.rows() == B.cols(), ErrorKind::dimension, "B must be square");
    require(B.is_diagonal(), ErrorKind::encoding, "only diagonal B can be square-rooted entrywise");
    Eigen::VectorXd d = B.diagonal_values();
    for (Eigen::Index k = 0; k < d.size(); ++k) {
        require(std::isfinite(d[k]) && d[k] > 0.0, ErrorKind::encoding,
                "non-positive B entry at DOF " + std::to_string(k));
    }
    return d.cwiseSqrt();
}

/// w_Q = B^{1/2} w, normalized; scale = ‖B^{1/2} w‖₂.
inline QuantumRegisterState encode(const Eigen::VectorXd &w, const SparseOperator &B) {
    require(static_cast<std::size_t>(w.size()) == B.rows(), ErrorKind::dimension, "field size does not match B");
    require(w.allFinite(), ErrorKind::validation, "field contains non-finite values");
    Eigen::VectorXd wq = b_sqrt_diagonal(B).cwiseProduct(w);
    return stack_register({wq.cast<cplx>()});
}

/// (I^{⊗log₂S} ⊗ B^{1/2}) [w₁; …; w_S], normalized.
inline QuantumRegisterState encode_stacked(const std::vector<Eigen::VectorXd> &ws, const SparseOperator &B) {
    Eigen::VectorXd root = b_sqrt_diagonal(B);
    std::vector<Eigen::VectorXcd> blocks;
    blocks.reserve(ws.size());
    for (const auto &w : ws) {
        require(static_cast<std::size_t>(w.size()) == B.rows(), ErrorKind::dimension, "field size does not match B");
        require(w.allFinite(), ErrorKind::validation, "field contains non-finite values");
        blocks.push_back(root.cwiseProduct(w).cast<cplx>());
    }
    return stack_register(blocks);
}

/// Inverse of encode for block m: w = scale · B^{-1/2} Re(block).
inline Eigen::VectorXd decode(const QuantumRegisterState &state, const SparseOperator &B, std::size_t m = 0) {
    require(state.defined(), ErrorKind::encoding, "cannot decode a state with zero scale");
    require(state.layout.physical_dofs == B.rows(), ErrorKind::dimension, "state layout does not match B");
    Eigen::VectorXd root = b_sqrt_diagonal(B);
    return state.scale * state.block(m).real().cwiseQuotient(root);
}

/// Sum of all decoded blocks (the superposed physical field).
inline Eigen::VectorXd decode_sum(const QuantumRegisterState &state, const SparseOperator &B) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(B.rows()));
    if (!state.defined()) return sum;
    for (std::size_t m = 0; m < state.layout.arity; ++m) sum += decode(state, B, m);
    return sum;
}

/// (w|w)_B = ‖w_Q‖² = scale².
inline double energy(const QuantumRegisterState &state) { return state.scale * state.scale; }

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
};

class Hamiltonian;

/// Block-diagonal structure diag(scale_s · H_base) with each block zero-padded
/// to `block_size`.
struct BlockStructure {
    std::shared_ptr<const Hamiltonian> base;
    std::size_t block_size = 0;
    std::vector<double> scales;
};

/// Sparse Hermitian matrix with its max-norm and row sparsity. Hermiticity is
/// checked on construction. The dense spectral decomposition is computed on
/// first use and shared between copies.
class Hamiltonian {
   public:
    static constexpr double kHermitianTolerance = 1e-12;

    Hamiltonian() : cache_(std::make_shared<Cache>()) {}

    explicit Hamiltonian(ComplexSparse matrix, std::optional<BlockStructure> blocks = std::nullopt)
        : matrix_(std::move(matrix)), blocks_(std::move(blocks)), cache_(std::make_shared<Cache>()) {
        require(matrix_.rows() == matrix_.cols(), ErrorKind::dimension, "Hamiltonian must be square");
        matrix_.makeCompressed();
        double defect = hermitian_defect(matrix_);
        require(defect <= kHermitianTolerance, ErrorKind::non_hermitian,
                "matrix is not Hermitian (defect " + std::to_string(defect) + ")");
        for (int r = 0; r < matrix_.outerSize(); ++r) {
            std::size_t row_nnz = 0;
            for (ComplexSparse::InnerIterator it(matrix_, r); it; ++it) {
                max_norm_ = std::max(max_norm_, std::abs(it.value()));
                if (it.value() != cplx(0.0)) ++row_nnz;
            }
            sparsity_ = std::max(sparsity_, row_nnz);
        }
    }

    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    const ComplexSparse &matrix() const { return matrix_; }
    double max_norm() const { return max_norm_; }
    std::size_t sparsity() const { return sparsity_; }
    const std::optional<BlockStructure> &blocks() const { return blocks_; }

    bool purely_imaginary() const {
        for (int r = 0; r < matrix_.outerSize(); ++r)
            for (ComplexSparse::InnerIterator it(matrix_, r); it; ++it)
                if (it.value().real() != 0.0) return false;
        return true;
    }

    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix_); }

    const SpectralDecomposition &spectral() const {
        std::call_once(cache_->once, [this] {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense());
            require(solver.info() == Eigen::Success, ErrorKind::non_hermitian, "eigensolver failed");
            cache_->value = std::make_unique<SpectralDecomposition>(
                SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()});
        });
        return *cache_->value;
    }

    static double hermitian_defect(const ComplexSparse &m) {
        ComplexSparse adj = m.adjoint();
        ComplexSparse diff = m - adj;
        double worst = 0.0;
        for (int r = 0; r < diff.outerSize(); ++r)
            for (ComplexSparse::InnerIterator it(diff, r); it; ++it) worst = std::max(worst, std::abs(it.value()));
        return worst;
    }

   private:
    struct Cache {
        std::once_flag once;
        std::unique_ptr<SpectralDecomposition> value;
    };

    ComplexSparse matrix_;
    double max_norm_ = 0.0;
    std::size_t sparsity_ = 0;
    std::optional<BlockStructure> blocks_;
    std::shared_ptr<Cache> cache_;
};

/// H = i B^{-1/2} A B^{-1/2} for diagonal positive B.
inline Hamiltonian build_hamiltonian(const SparseOperator &A, const SparseOperator &B) {
    require(A.rows() == A.cols() && A.rows() == B.rows(), ErrorKind::dimension, "A and B shapes differ");
    Eigen::VectorXd inv_root = b_sqrt_diagonal(B).cwiseInverse();
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(A.nonzeros());
    for (const auto &e : A.entries()) {
        double v = e.value * inv_root[static_cast<Eigen::Index>(e.row)] * inv_root[static_cast<Eigen::Index>(e.col)];
        trips.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), cplx(0.0, v));
    }
    ComplexSparse h(static_cast<Eigen::Index>(A.rows()), static_cast<Eigen::Index>(A.cols()));
    h.setFromTriplets(trips.begin(), trips.end());
    return Hamiltonian(std::move(h));
}

inline Hamiltonian build_hamiltonian(const OperatorPair &pair) { return build_hamiltonian(pair.A, pair.B); }

}  // namespace qwave
