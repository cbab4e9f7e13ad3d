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
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwave/encoding.hpp"
#include "qwave/error.hpp"

namespace qwave {

/// 0/1 mask over the physical DOFs of one block. Padding is never inside.
class SubspaceProjector {
   public:
    SubspaceProjector() = default;
    explicit SubspaceProjector(std::vector<std::uint8_t> mask) : mask_(std::move(mask)) {
        for (auto m : mask_) require(m <= 1, ErrorKind::validation, "subspace mask entries must be 0 or 1");
    }

    static SubspaceProjector full(std::size_t n) { return SubspaceProjector(std::vector<std::uint8_t>(n, 1)); }
    static SubspaceProjector empty(std::size_t n) { return SubspaceProjector(std::vector<std::uint8_t>(n, 0)); }

    /// Union of half-open DOF ranges [lo, hi).
    static SubspaceProjector from_ranges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>> &ranges) {
        std::vector<std::uint8_t> mask(n, 0);
        for (auto [lo, hi] : ranges) {
            require(lo <= hi && hi <= n, ErrorKind::validation,
                    "DOF range [" + std::to_string(lo) + ", " + std::to_string(hi) + ") outside 0.." +
                        std::to_string(n));
            for (std::size_t k = lo; k < hi; ++k) mask[k] = 1;
        }
        return SubspaceProjector(std::move(mask));
    }

    std::size_t size() const { return mask_.size(); }
    std::size_t cardinality() const { return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1)); }
    bool contains(std::size_t k) const { return k < mask_.size() && mask_[k] != 0; }
    const std::vector<std::uint8_t> &mask() const { return mask_; }

    bool overlaps(const SubspaceProjector &o) const {
        for (std::size_t k = 0; k < std::min(size(), o.size()); ++k)
            if (mask_[k] && o.mask_[k]) return true;
        return false;
    }

    Eigen::VectorXd apply(const Eigen::VectorXd &w) const {
        require(static_cast<std::size_t>(w.size()) == size(), ErrorKind::dimension, "mask length mismatch");
        Eigen::VectorXd out = w;
        for (std::size_t k = 0; k < size(); ++k)
            if (!mask_[k]) out[static_cast<Eigen::Index>(k)] = 0.0;
        return out;
    }

   private:
    std::vector<std::uint8_t> mask_;
};

/// Letters are listed from qubit 0, the most significant bit of the index.
struct PauliString {
    std::string letters;
    double coefficient = 1.0;

    std::uint64_t x_mask() const { return mask_of('X'); }
    std::uint64_t z_mask() const { return mask_of('Z'); }
    bool is_identity() const { return letters.find_first_not_of('I') == std::string::npos; }

   private:
    std::uint64_t mask_of(char c) const {
        std::uint64_t m = 0;
        const std::size_t n = letters.size();
        for (std::size_t q = 0; q < n; ++q)
            if (letters[q] == c) m |= std::uint64_t{1} << (n - 1 - q);
        return m;
    }
};

struct ObservableDecomposition {
    std::vector<PauliString> strings;
    std::size_t arity = 1;

    /// Pads every string with identities on `data_qubits` trailing qubits.
    ObservableDecomposition on_data_qubits(std::size_t data_qubits) const {
        ObservableDecomposition out = *this;
        for (auto &s : out.strings) s.letters.append(data_qubits, 'I');
        return out;
    }

    std::size_t qubits() const { return strings.empty() ? 0 : strings.front().letters.size(); }

    Eigen::MatrixXd dense() const {
        const std::size_t n = qubits();
        require(n <= 14, ErrorKind::dimension, "dense observable too large");
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
        Eigen::MatrixXd o = Eigen::MatrixXd::Zero(dim, dim);
        for (const auto &s : strings) {
            const auto x = s.x_mask(), z = s.z_mask();
            for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(dim); ++i) {
                double sign = (std::popcount(i & z) % 2) ? -1.0 : 1.0;
                o(static_cast<Eigen::Index>(i ^ x), static_cast<Eigen::Index>(i)) += s.coefficient * sign;
            }
        }
        return o;
    }
};

/// {I…, IX…, ZI…, ZX…} with c = [½, −½, ½, −½]; acts on the auxiliary and
/// block qubits, which are the two most significant.
inline ObservableDecomposition two_state_observable() {
    return {{{"II", 0.5}, {"IX", -0.5}, {"ZI", 0.5}, {"ZX", -0.5}}, 2};
}

/// ½(I⊗Õ_A + Z⊗Õ_A) with Õ_A the sum over {I,X}^{⊗log₂M}: 2M strings.
inline ObservableDecomposition multi_state_observable(std::size_t arity) {
    require(is_power_of_two(arity), ErrorKind::dimension, "arity must be a power of two");
    const std::size_t k = log2_exact(arity);
    ObservableDecomposition out;
    out.arity = arity;
    for (char head : {'I', 'Z'}) {
        for (std::size_t a = 0; a < arity; ++a) {
            std::string letters(1, head);
            for (std::size_t q = 0; q < k; ++q) letters += ((a >> (k - 1 - q)) & 1u) ? 'X' : 'I';
            out.strings.push_back({letters, 0.5});
        }
    }
    return out;
}

namespace detail {

inline std::size_t augmented_partner(std::size_t i, const RegisterLayout &layout, const SubspaceProjector &p) {
    const std::size_t k = i % layout.block_size;
    return p.contains(k) ? i : i + layout.total();
}

}  // namespace detail

/// Prepends one auxiliary qubit (MSB) and moves each block's complement part
/// into the upper half: [P w₁; …; P w_M; (1−P) w₁; …; (1−P) w_M].
inline QuantumRegisterState augment_state(const QuantumRegisterState &phi, const SubspaceProjector &p) {
    require(p.size() == phi.layout.physical_dofs, ErrorKind::dimension,
            "mask length " + std::to_string(p.size()) + " differs from " + std::to_string(phi.layout.physical_dofs) +
                " physical DOFs");
    const std::size_t n = phi.layout.total();
    QuantumRegisterState out;
    out.scale = phi.scale;
    out.layout = {phi.layout.physical_dofs, phi.layout.block_size, 2 * phi.layout.arity};
    out.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(2 * n));
    for (std::size_t i = 0; i < n; ++i)
        out.amplitudes[static_cast<Eigen::Index>(detail::augmented_partner(i, phi.layout, p))] =
            phi.amplitudes[static_cast<Eigen::Index>(i)];
    return out;
}

/// Inverse of augment_state.
inline QuantumRegisterState deaugment_state(const QuantumRegisterState &psi, const SubspaceProjector &p) {
    require(psi.layout.arity % 2 == 0, ErrorKind::dimension, "state carries no auxiliary qubit");
    require(p.size() == psi.layout.physical_dofs, ErrorKind::dimension, "mask length mismatch");
    QuantumRegisterState out;
    out.scale = psi.scale;
    out.layout = {psi.layout.physical_dofs, psi.layout.block_size, psi.layout.arity / 2};
    const std::size_t n = out.layout.total();
    out.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        out.amplitudes[static_cast<Eigen::Index>(i)] =
            psi.amplitudes[static_cast<Eigen::Index>(detail::augmented_partner(i, out.layout, p))];
    return out;
}

/// ⟨ψ|P|ψ⟩ for an X/Z Pauli string.
inline double pauli_expectation(const Eigen::VectorXcd &psi, const PauliString &s) {
    const auto x = s.x_mask(), z = s.z_mask();
    double acc = 0.0;
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(psi.size()); ++i) {
        cplx term = std::conj(psi[static_cast<Eigen::Index>(i ^ x)]) * psi[static_cast<Eigen::Index>(i)];
        acc += (std::popcount(i & z) % 2) ? -term.real() : term.real();
    }
    return acc;
}

enum class EstimatorMode { exact, shots };

struct EstimatorConfig {
    EstimatorMode mode = EstimatorMode::exact;
    std::uint64_t shots = 10000;
    std::optional<std::uint64_t> seed;
    bool report_confidence = false;
};

struct EstimateResult {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t shots = 0;
    std::size_t strings = 0;
    std::optional<double> confidence95;
};

namespace detail {

inline void hadamard(Eigen::VectorXcd &v, std::size_t bit) {
    const std::uint64_t step = std::uint64_t{1} << bit;
    const double r = 1.0 / std::sqrt(2.0);
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(v.size()); ++i) {
        if (i & step) continue;
        const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(i | step);
        cplx lo = v[a], hi = v[b];
        v[a] = r * (lo + hi);
        v[b] = r * (lo - hi);
    }
}

// Mean and variance of the mean of the ±1 outcome of one string.
inline std::pair<double, double> sample_string(const Eigen::VectorXcd &psi, const PauliString &s,
                                               std::uint64_t shots, std::uint64_t seed, std::size_t index) {
    Eigen::VectorXcd v = psi;
    const auto x = s.x_mask();
    for (std::size_t b = 0; b < 64; ++b)
        if (x & (std::uint64_t{1} << b)) hadamard(v, b);
    const auto parity_mask = x | s.z_mask();
    std::vector<double> prob(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) prob[static_cast<std::size_t>(i)] = std::norm(v[i]);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    std::discrete_distribution<std::uint64_t> dist(prob.begin(), prob.end());
    std::uint64_t minus = 0;
    for (std::uint64_t k = 0; k < shots; ++k)
        if (std::popcount(dist(rng) & parity_mask) % 2) ++minus;
    const double n = static_cast<double>(shots);
    const double mean = (n - 2.0 * static_cast<double>(minus)) / n;
    // sample variance of ±1 outcomes: n/(n−1)·(1 − mean²)
    const double var = shots > 1 ? (1.0 - mean * mean) * n / (n - 1.0) : 1.0;
    return {mean, var / n};
}

}  // namespace detail

/// Σ_j c_j⟨ψ|Õ_j|ψ⟩ · scale² on an augmented register. Strings narrower than
/// the register are extended with identities on the data qubits.
inline EstimateResult estimate_observable(const QuantumRegisterState &psi, const ObservableDecomposition &obs,
                                          const EstimatorConfig &cfg) {
    const std::size_t n = log2_exact(static_cast<std::size_t>(psi.amplitudes.size()));
    require(obs.qubits() <= n, ErrorKind::dimension, "observable wider than register");
    const ObservableDecomposition full = obs.on_data_qubits(n - obs.qubits());
    const double s2 = psi.scale * psi.scale;
    EstimateResult r;
    r.strings = full.strings.size();
    if (cfg.mode == EstimatorMode::exact) {
        for (const auto &s : full.strings) r.value += s.coefficient * pauli_expectation(psi.amplitudes, s);
        r.value *= s2;
        return r;
    }
    require(cfg.seed.has_value(), ErrorKind::estimator, "shot mode requires an explicit seed");
    require(cfg.shots >= 1, ErrorKind::estimator, "shot count must be at least 1");
    double var = 0.0;
    for (std::size_t j = 0; j < full.strings.size(); ++j) {
        const auto &s = full.strings[j];
        if (s.is_identity()) {
            r.value += s.coefficient;
            continue;
        }
        auto [mean, v] = detail::sample_string(psi.amplitudes, s, cfg.shots, *cfg.seed, j);
        r.value += s.coefficient * mean;
        var += s.coefficient * s.coefficient * v;
        r.shots += cfg.shots;
    }
    r.value *= s2;
    r.std_error = std::sqrt(var) * s2;
    if (cfg.report_confidence) r.confidence95 = 1.96 * r.std_error;
    return r;
}

/// ‖P_S Σ_m w_m‖² (in the encoded basis) for a register stacking M blocks.
inline EstimateResult estimate(const QuantumRegisterState &phi, const SubspaceProjector &p,
                               const EstimatorConfig &cfg = {}) {
    QuantumRegisterState psi = augment_state(phi, p);
    return estimate_observable(psi, multi_state_observable(phi.layout.arity), cfg);
}

/// ‖P_S(a − b)‖² via the four-string observable on the stacked [a; b].
inline EstimateResult estimate_difference(const QuantumRegisterState &phi, const SubspaceProjector &p,
                                          const EstimatorConfig &cfg = {}) {
    require(phi.layout.arity == 2, ErrorKind::dimension, "two-state estimate needs exactly two blocks");
    return estimate_observable(augment_state(phi, p), two_state_observable(), cfg);
}

struct WeightedPartition {
    SubspaceProjector subspace;
    double weight = 1.0;
};

/// Σ_j v_j · l²_{S_j} over disjoint subspaces.
inline EstimateResult weighted_l2(const QuantumRegisterState &phi, const std::vector<WeightedPartition> &parts,
                                  const EstimatorConfig &cfg = {}, bool difference = false) {
    for (std::size_t a = 0; a < parts.size(); ++a) {
        require(std::isfinite(parts[a].weight) && parts[a].weight > 0.0, ErrorKind::estimator,
                "partition weights must be positive");
        for (std::size_t b = a + 1; b < parts.size(); ++b)
            require(!parts[a].subspace.overlaps(parts[b].subspace), ErrorKind::estimator,
                    "partitions " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
    }
    EstimateResult total;
    double var = 0.0;
    for (std::size_t j = 0; j < parts.size(); ++j) {
        EstimatorConfig c = cfg;
        if (c.seed) c.seed = *c.seed + 0x9E3779B97F4A7C15ull * (j + 1);
        EstimateResult r = difference ? estimate_difference(phi, parts[j].subspace, c)
                                      : estimate(phi, parts[j].subspace, c);
        total.value += parts[j].weight * r.value;
        var += parts[j].weight * parts[j].weight * r.std_error * r.std_error;
        total.shots += r.shots;
        total.strings += r.strings;
    }
    total.std_error = std::sqrt(var);
    if (cfg.report_confidence && cfg.mode == EstimatorMode::shots) total.confidence95 = 1.96 * total.std_error;
    return total;
}

/// Groups the DOFs of `region` by exact value of the diagonal B and weights
/// each group by 1/B_j, so the weighted sum equals the untransformed l2 norm.
inline std::vector<WeightedPartition> unique_weight_partitions(const Eigen::VectorXd &b_diag,
                                                               const SubspaceProjector &region) {
    require(static_cast<std::size_t>(b_diag.size()) == region.size(), ErrorKind::dimension, "mask length mismatch");
    std::map<double, std::vector<std::uint8_t>> groups;
    for (std::size_t k = 0; k < region.size(); ++k) {
        if (!region.contains(k)) continue;
        double bk = b_diag[static_cast<Eigen::Index>(k)];
        require(bk > 0.0, ErrorKind::estimator, "B must be positive");
        auto &mask = groups[bk];
        if (mask.empty()) mask.assign(region.size(), 0);
        mask[k] = 1;
    }
    std::vector<WeightedPartition> parts;
    for (auto &[bk, mask] : groups) parts.push_back({SubspaceProjector(std::move(mask)), 1.0 / bk});
    return parts;
}

struct GateCountReport {
    std::size_t d = 0;
    std::size_t qubits = 0;
    std::size_t mcx_estimate = 0;
    bool efficient = true;
    std::string warning;
};

/// O(d·n) gate estimate for the augmentation permutation. The efficiency
/// premise wants either d or L − d small; neither small only yields a warning.
inline GateCountReport gate_count_report(const SubspaceProjector &p, std::size_t qubits) {
    GateCountReport g;
    g.d = p.cardinality();
    g.qubits = qubits;
    const std::size_t small = std::min(g.d, p.size() - g.d);
    g.mcx_estimate = std::max<std::size_t>(small, 1) * qubits;
    if (small > qubits * qubits) {
        g.efficient = false;
        g.warning = "subspace size d=" + std::to_string(g.d) + " is far from both 0 and L=" + std::to_string(p.size()) +
                    "; the permutation circuit is not efficient";
    }
    return g;
}

}  // namespace qwave
