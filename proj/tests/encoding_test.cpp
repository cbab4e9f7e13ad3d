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

#include <random>

#include "qwave/encoding.hpp"

namespace qwave {
namespace {

SparseOperator antisym2() { return SparseOperator::from_dense((Eigen::MatrixXd(2, 2) << 0, 1, -1, 0).finished()); }

TEST(Hamiltonian, IdentityMetric) {
    auto h = build_hamiltonian(antisym2(), SparseOperator::identity(2));
    Eigen::MatrixXcd d = h.dense();
    EXPECT_EQ(d(0, 1), cplx(0, 1));
    EXPECT_EQ(d(1, 0), cplx(0, -1));
    EXPECT_EQ(d(0, 0), cplx(0));
    EXPECT_TRUE(h.purely_imaginary());
    EXPECT_EQ(h.sparsity(), 1u);
    EXPECT_DOUBLE_EQ(h.max_norm(), 1.0);
}

TEST(Hamiltonian, ScaledMetric) {
    auto h = build_hamiltonian(antisym2(), SparseOperator::diagonal(Eigen::Vector2d(4, 1)));
    EXPECT_EQ(h.dense()(0, 1), cplx(0, 0.5));
    EXPECT_EQ(h.dense()(1, 0), cplx(0, -0.5));
}

TEST(Hamiltonian, AcousticSpectrumIsSymmetric) {
    auto g = build_grid_1d(0, 1, 8);
    auto h = build_hamiltonian(assemble_operator_pair(g, constant_acoustic(g, 1.3, 0.7)));
    EXPECT_LE(Hamiltonian::hermitian_defect(h.matrix()), 1e-12);
    Eigen::VectorXd ev = h.spectral().eigenvalues;
    const auto n = ev.size();
    for (Eigen::Index k = 0; k < n; ++k) EXPECT_NEAR(ev[k], -ev[n - 1 - k], 1e-12);
}

TEST(Hamiltonian, RejectsNonPositiveB) {
    try {
        build_hamiltonian(antisym2(), SparseOperator::diagonal(Eigen::Vector2d(1, -1)));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::encoding);
    }
}

TEST(Hamiltonian, RejectsNonHermitian) {
    ComplexSparse m(2, 2);
    m.insert(0, 1) = cplx(1, 0);
    try {
        Hamiltonian h(m);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::non_hermitian);
    }
}

TEST(Encoding, Normalization) {
    auto s = encode(Eigen::Vector2d(3, 4), SparseOperator::identity(2));
    EXPECT_DOUBLE_EQ(s.scale, 5.0);
    EXPECT_DOUBLE_EQ(s.amplitudes[0].real(), 0.6);
    EXPECT_DOUBLE_EQ(s.amplitudes[1].real(), 0.8);
    EXPECT_DOUBLE_EQ(energy(s), 25.0);
}

TEST(Encoding, MetricSquareRoot) {
    auto s = encode(Eigen::Vector2d(1, 1), SparseOperator::diagonal(Eigen::Vector2d(9, 1)));
    EXPECT_DOUBLE_EQ(s.scale, std::sqrt(10.0));
    EXPECT_NEAR(s.amplitudes[0].real(), 3.0 / std::sqrt(10.0), 1e-15);
    EXPECT_NEAR(s.amplitudes[1].real(), 1.0 / std::sqrt(10.0), 1e-15);
}

TEST(Encoding, PaddingAndRoundTrip) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    Eigen::VectorXd w(5), b(5);
    for (int k = 0; k < 5; ++k) {
        w[k] = nd(rng);
        b[k] = 0.5 + std::abs(nd(rng));
    }
    auto B = SparseOperator::diagonal(b);
    auto s = encode(w, B);
    EXPECT_EQ(s.amplitudes.size(), 8);
    EXPECT_TRUE(s.padding_is_zero());
    EXPECT_NEAR(s.amplitudes.norm(), 1.0, 1e-15);
    Eigen::VectorXd back = decode(s, B);
    EXPECT_LE((back - w).norm(), 1e-12 * w.norm());
}

TEST(Encoding, EnergyMatchesQuadrature) {
    auto g = build_grid_1d(0, 1, 6);
    auto m = sample_acoustic(
        g, [](Point p) { return 1.0 + p.x; }, [](Point p) { return 2.0 - p.x; });
    auto pair = assemble_operator_pair(g, m);
    Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(pair.size()), -1.0, 2.0);
    double classical = 0.0;
    for (Eigen::Index k = 0; k < 6; ++k) classical += w[k] * w[k] / m.primary[k];
    for (Eigen::Index k = 0; k < 5; ++k) classical += m.secondary[k] * w[6 + k] * w[6 + k];
    EXPECT_NEAR(energy(encode(w, pair.B)), classical, 1e-13 * classical);
}

TEST(Encoding, ZeroFieldHasZeroScale) {
    auto s = encode(Eigen::VectorXd::Zero(3), SparseOperator::identity(3));
    EXPECT_FALSE(s.defined());
    EXPECT_EQ(energy(s), 0.0);
    EXPECT_THROW(decode(s, SparseOperator::identity(3)), Error);
}

TEST(Encoding, StackedBlocks) {
    auto B = SparseOperator::identity(3);
    auto s = encode_stacked({Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 2, 0), Eigen::Vector3d(0, 0, 2)}, B);
    EXPECT_EQ(s.layout.arity, 4u);
    EXPECT_EQ(s.layout.block_size, 4u);
    EXPECT_EQ(s.amplitudes.size(), 16);
    EXPECT_DOUBLE_EQ(s.scale, 3.0);
    EXPECT_TRUE(s.padding_is_zero());
    EXPECT_EQ(s.block(3), Eigen::VectorXcd::Zero(3));
    EXPECT_TRUE(decode(s, B, 1).isApprox(Eigen::Vector3d(0, 2, 0)));
    EXPECT_TRUE(decode_sum(s, B).isApprox(Eigen::Vector3d(1, 2, 2)));
}

}  // namespace
}  // namespace qwave
