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

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwave/encoding.hpp"
#include "qwave/error.hpp"
#include "qwave/grid.hpp"

namespace qwave {

/// Polar grid x_{a,θ} = x₀ + r_a (cos φ_θ, sin φ_θ) with r_a = (a+1)·Δr and
/// φ_θ = π·θ/Θ, the cumulative angle Σ_m b_m π/2^m of the angular bits.
struct PolarGridSpec {
    std::size_t components = 2;
    std::size_t radial = 2;
    std::size_t angular = 2;
    Point center;
    double radial_step = 1.0;

    void validate() const {
        require(is_power_of_two(components) && components >= 2, ErrorKind::circuit,
                "component count must be a power of two >= 2");
        require(is_power_of_two(radial), ErrorKind::circuit, "radial divisions must be a power of two");
        require(is_power_of_two(angular), ErrorKind::circuit, "angular divisions must be a power of two");
        require(radial_step > 0.0, ErrorKind::circuit, "radial step must be positive");
    }

    std::size_t points() const { return radial * angular; }
    double radius(std::size_t a) const { return static_cast<double>(a + 1) * radial_step; }
    double angle(std::size_t theta) const {
        return std::numbers::pi * static_cast<double>(theta) / static_cast<double>(angular);
    }
    Point point(std::size_t a, std::size_t theta) const {
        return {center.x + radius(a) * std::cos(angle(theta)), center.y + radius(a) * std::sin(angle(theta))};
    }
    /// |c⟩|a⟩|θ⟩ with the component register most significant.
    std::size_t index(std::size_t c, std::size_t a, std::size_t theta) const {
        return (c * radial + a) * angular + theta;
    }
};

/// Vector field returning at least two components (v_x, v_y, scalars…);
/// missing trailing components are treated as zero.
using VectorField = std::function<Eigen::VectorXd(Point)>;

struct RaySample {
    /// Unnormalized w_c(x₀ + r_a e₁) at index c·A + a.
    Eigen::VectorXcd values;
    double norm = 0.0;
    std::size_t evaluations = 0;
};

namespace detail {

inline Eigen::VectorXd field_components(const VectorField &field, Point p, std::size_t C) {
    Eigen::VectorXd v = field(p);
    require(v.size() >= 2 && static_cast<std::size_t>(v.size()) <= C, ErrorKind::circuit,
            "field must return between 2 and C components");
    require(v.allFinite(), ErrorKind::circuit, "field returned non-finite values");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(C));
    out.head(v.size()) = v;
    return out;
}

inline Eigen::Vector2d rotate(const Eigen::Vector2d &v, double alpha) {
    return {std::cos(alpha) * v[0] - std::sin(alpha) * v[1], std::sin(alpha) * v[0] + std::cos(alpha) * v[1]};
}

}  // namespace detail

/// Evaluates the field on the reference ray only: exactly A calls.
inline RaySample sample_reference_ray(const VectorField &field, const PolarGridSpec &spec) {
    spec.validate();
    RaySample r;
    r.values = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(spec.components * spec.radial));
    for (std::size_t a = 0; a < spec.radial; ++a) {
        Eigen::VectorXd w = detail::field_components(field, {spec.center.x + spec.radius(a), spec.center.y},
                                                     spec.components);
        ++r.evaluations;
        for (std::size_t c = 0; c < spec.components; ++c)
            r.values[static_cast<Eigen::Index>(c * spec.radial + a)] = w[static_cast<Eigen::Index>(c)];
    }
    r.norm = r.values.norm();
    require(r.norm > 0.0, ErrorKind::circuit, "reference ray has zero norm");
    return r;
}

enum class GateKind { state_prep, hadamard, controlled_rotation };

inline const char *gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::state_prep:
            return "state_prep";
        case GateKind::hadamard:
            return "hadamard";
        case GateKind::controlled_rotation:
            return "controlled_rotation";
    }
    return "?";
}

struct Gate {
    GateKind kind = GateKind::hadamard;
    /// Target qubits (qubit 0 is the most significant).
    std::vector<std::size_t> qubits;
    std::size_t control = 0;
    /// Rotated component plane (i, i+1).
    std::size_t plane = 0;
    double angle = 0.0;
};

struct GateCircuit {
    PolarGridSpec spec;
    std::size_t component_qubits = 0;
    std::size_t radial_qubits = 0;
    std::size_t angular_qubits = 0;
    std::vector<Gate> gates;

    std::size_t qubits() const { return component_qubits + radial_qubits + angular_qubits; }

    std::size_t count(GateKind k) const {
        std::size_t n = 0;
        for (const auto &g : gates) n += g.kind == k;
        return n;
    }

    /// Smallest rotation angle, which shrinks as 1/Θ.
    double min_rotation_angle() const {
        double m = 0.0;
        for (const auto &g : gates)
            if (g.kind == GateKind::controlled_rotation && (m == 0.0 || g.angle < m)) m = g.angle;
        return m;
    }
};

/// State preparation on component⊗radial, Hadamards on every angular qubit,
/// then for angular bit m a rotation by π/2^m of the (0, 1) component plane
/// controlled by that bit.
inline GateCircuit build_circuit(const PolarGridSpec &spec) {
    spec.validate();
    GateCircuit gc;
    gc.spec = spec;
    gc.component_qubits = log2_exact(spec.components);
    gc.radial_qubits = log2_exact(spec.radial);
    gc.angular_qubits = log2_exact(spec.angular);
    const std::size_t first_angular = gc.component_qubits + gc.radial_qubits;

    Gate prep;
    prep.kind = GateKind::state_prep;
    for (std::size_t q = 0; q < first_angular; ++q) prep.qubits.push_back(q);
    gc.gates.push_back(prep);
    for (std::size_t m = 0; m < gc.angular_qubits; ++m) gc.gates.push_back({GateKind::hadamard, {first_angular + m}});
    for (std::size_t m = 1; m <= gc.angular_qubits; ++m) {
        Gate g;
        g.kind = GateKind::controlled_rotation;
        for (std::size_t q = 0; q < gc.component_qubits; ++q) g.qubits.push_back(q);
        g.control = first_angular + m - 1;
        g.plane = 0;
        g.angle = std::numbers::pi / std::pow(2.0, static_cast<double>(m));
        gc.gates.push_back(g);
    }
    return gc;
}

/// Unitary whose first column is `target` (unit norm), via a Householder
/// reflection with the phase chosen to avoid cancellation.
inline Eigen::MatrixXcd householder_prep(const Eigen::VectorXcd &target) {
    const auto n = target.size();
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(n);
    e1[0] = 1.0;
    const cplx t0 = target[0];
    const cplx phase = std::abs(t0) > 0.0 ? t0 / std::abs(t0) : cplx(1.0);
    Eigen::VectorXcd u = phase * e1 - target;
    const double un = u.norm();
    if (un < 1e-300) return phase * Eigen::MatrixXcd::Identity(n, n);
    u /= un;
    Eigen::MatrixXcd reflect = Eigen::MatrixXcd::Identity(n, n) - 2.0 * u * u.adjoint();
    // reflect · (phase e1) = target, so reflect · phase maps |0⟩ to target
    return reflect * phase;
}

/// Statevector simulation of the circuit with the ray loaded by state prep.
inline QuantumRegisterState simulate_circuit(const GateCircuit &gc, const RaySample &ray) {
    const auto &spec = gc.spec;
    const std::size_t CA = spec.components * spec.radial;
    require(static_cast<std::size_t>(ray.values.size()) == CA, ErrorKind::circuit,
            "ray does not match the component and radial registers");
    require(ray.norm > 0.0, ErrorKind::circuit, "reference ray has zero norm");
    const std::size_t n = gc.qubits();
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t T = spec.angular;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    psi[0] = 1.0;
    auto bit_of = [n](std::size_t q) { return std::size_t{1} << (n - 1 - q); };

    for (const auto &g : gc.gates) {
        switch (g.kind) {
            case GateKind::state_prep: {
                require(g.qubits.size() == gc.component_qubits + gc.radial_qubits, ErrorKind::circuit,
                        "state preparation must span the component and radial registers");
                Eigen::MatrixXcd U = householder_prep(ray.values / ray.norm);
                Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
                    psi.data(), static_cast<Eigen::Index>(CA), static_cast<Eigen::Index>(T));
                Eigen::MatrixXcd next = U * m;
                m = next;
                break;
            }
            case GateKind::hadamard: {
                require(g.qubits.size() == 1 && g.qubits[0] < n, ErrorKind::circuit, "bad Hadamard target");
                const std::size_t b = bit_of(g.qubits[0]);
                const double r = 1.0 / std::sqrt(2.0);
                for (std::size_t i = 0; i < dim; ++i) {
                    if (i & b) continue;
                    cplx lo = psi[static_cast<Eigen::Index>(i)], hi = psi[static_cast<Eigen::Index>(i | b)];
                    psi[static_cast<Eigen::Index>(i)] = r * (lo + hi);
                    psi[static_cast<Eigen::Index>(i | b)] = r * (lo - hi);
                }
                break;
            }
            case GateKind::controlled_rotation: {
                require(g.control < n && g.plane + 1 < spec.components, ErrorKind::circuit, "bad rotation gate");
                const std::size_t cb = bit_of(g.control);
                const std::size_t stride = spec.radial * T;
                const double c = std::cos(g.angle), s = std::sin(g.angle);
                for (std::size_t rest = 0; rest < stride; ++rest) {
                    if (!(rest & cb)) continue;
                    const auto i0 = static_cast<Eigen::Index>(g.plane * stride + rest);
                    const auto i1 = static_cast<Eigen::Index>((g.plane + 1) * stride + rest);
                    cplx x = psi[i0], y = psi[i1];
                    psi[i0] = c * x - s * y;
                    psi[i1] = s * x + c * y;
                }
                break;
            }
        }
    }
    QuantumRegisterState out;
    out.amplitudes = psi;
    out.layout = {dim, dim, 1};
    out.scale = ray.norm * std::sqrt(static_cast<double>(T));
    return out;
}

/// ψ built by evaluating the field at every polar grid point (A·Θ calls).
inline QuantumRegisterState direct_polar_state(const VectorField &field, const PolarGridSpec &spec,
                                               std::size_t *evaluations = nullptr) {
    spec.validate();
    const std::size_t dim = spec.components * spec.points();
    QuantumRegisterState out;
    out.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    std::size_t calls = 0;
    for (std::size_t a = 0; a < spec.radial; ++a) {
        for (std::size_t t = 0; t < spec.angular; ++t) {
            Eigen::VectorXd w = detail::field_components(field, spec.point(a, t), spec.components);
            ++calls;
            for (std::size_t c = 0; c < spec.components; ++c)
                out.amplitudes[static_cast<Eigen::Index>(spec.index(c, a, t))] = w[static_cast<Eigen::Index>(c)];
        }
    }
    if (evaluations) *evaluations = calls;
    out.layout = {dim, dim, 1};
    out.scale = out.amplitudes.norm();
    require(out.scale > 0.0, ErrorKind::circuit, "field vanishes on the polar grid");
    out.amplitudes /= out.scale;
    return out;
}

/// max over grid points of |w(x_{a,θ}) − R(φ_θ) w(x_{a,0})| relative to the
/// largest ray value; zero for rotationally covariant fields.
inline double covariance_defect(const VectorField &field, const PolarGridSpec &spec) {
    spec.validate();
    double worst = 0.0, scale = 0.0;
    for (std::size_t a = 0; a < spec.radial; ++a) {
        Eigen::VectorXd ref = detail::field_components(field, spec.point(a, 0), spec.components);
        scale = std::max(scale, ref.norm());
        for (std::size_t t = 1; t < spec.angular; ++t) {
            Eigen::VectorXd w = detail::field_components(field, spec.point(a, t), spec.components);
            Eigen::VectorXd expect = ref;
            expect.head<2>() = detail::rotate(ref.head<2>(), spec.angle(t));
            worst = std::max(worst, (w - expect).norm());
        }
    }
    return scale > 0.0 ? worst / scale : worst;
}

inline double fidelity(const QuantumRegisterState &a, const QuantumRegisterState &b) {
    require(a.amplitudes.size() == b.amplitudes.size(), ErrorKind::dimension, "register sizes differ");
    return std::abs(a.amplitudes.dot(b.amplitudes));
}

}  // namespace qwave
