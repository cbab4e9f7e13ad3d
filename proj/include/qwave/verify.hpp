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
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "qwave/constraints.hpp"
#include "qwave/evolution.hpp"
#include "qwave/initcircuit.hpp"
#include "qwave/measurement.hpp"
#include "qwave/pipeline.hpp"
#include "qwave/sources.hpp"

namespace qwave {

/// One row of a verification table: `value` must satisfy `relation` against
/// `tolerance` ("<=", ">=", "==", or "in" for [tolerance, upper]).
struct Check {
    std::string name;
    double value = 0.0;
    std::string relation = "<=";
    double tolerance = 0.0;
    double upper = 0.0;

    bool passed() const {
        if (!std::isfinite(value)) return false;
        if (relation == "<=") return value <= tolerance;
        if (relation == ">=") return value >= tolerance;
        if (relation == "==") return value == tolerance;
        return value >= tolerance && value <= upper;
    }
};

inline Check at_most(std::string name, double value, double tol) { return {std::move(name), value, "<=", tol, 0.0}; }
inline Check at_least(std::string name, double value, double tol) { return {std::move(name), value, ">=", tol, 0.0}; }
inline Check exactly(std::string name, double value, double want) { return {std::move(name), value, "==", want, 0.0}; }
inline Check within(std::string name, double value, double lo, double hi) { return {std::move(name), value, "in", lo, hi}; }

/// Prints the table; returns true when every check passed.
inline bool print_checks(std::ostream &out, const std::string &suite, const std::vector<Check> &checks) {
    bool ok = true;
    out << "suite " << suite << "\n";
    for (const auto &c : checks) {
        char line[256];
        std::string bound = c.relation == "in" ? "in [" + format_double(c.tolerance) + ", " + format_double(c.upper) + "]"
                                                : c.relation + " " + format_double(c.tolerance);
        std::snprintf(line, sizeof line, "  %-4s %-52s %-24s %s\n", c.passed() ? "PASS" : "FAIL", c.name.c_str(),
                      format_double(c.value).c_str(), bound.c_str());
        out << line;
        ok = ok && c.passed();
    }
    return ok;
}

namespace verify {

inline OperatorPair acoustic_line(std::size_t n, double c = 1.0) {
    auto g = build_grid_1d(0.0, 1.0, n);
    return assemble_operator_pair(g, constant_acoustic(g, 1.0, c));
}

inline std::vector<Check> symmetry() {
    std::vector<Check> out;
    auto add = [&](const std::string &label, const OperatorPair &pair) {
        out.push_back(exactly(label + " |A+A^T|_max", antisymmetry_defect(pair.A), 0.0));
        Hamiltonian h = build_hamiltonian(pair);
        out.push_back(at_most(label + " |H-H^dag|_max", Hamiltonian::hermitian_defect(h.matrix()), 1e-12));
    };
    for (std::size_t n : {8, 64, 256}) {
        auto g = build_grid_1d(0.0, 1.0, n);
        add("acoustic 1D N=" + std::to_string(n),
            assemble_operator_pair(g, sample_acoustic(g, [](Point p) { return 1.0 + p.x; }, [](Point p) { return 2.0 - p.x; })));
    }
    for (std::size_t n : {4, 16}) {
        auto g = build_grid_2d({0.0, 1.0}, {0.0, 2.0}, n, n);
        add("acoustic 2D " + std::to_string(n) + "x" + std::to_string(n),
            assemble_operator_pair(g, sample_acoustic(g, [](Point p) { return 1.0 + p.y; }, [](Point p) { return 1.0 + p.x * p.y; })));
    }
    {
        auto g = build_grid_1d(0.0, 1.0, 128);
        add("maxwell1d N=128",
            assemble_operator_pair(g, sample_maxwell1d(g, [](Point p) { return 1.0 + p.x; }, [](Point) { return 1.5; })));
    }
    {
        auto g = build_grid_2d({0.0, 1.0}, {0.0, 1.0}, 16, 16);
        auto pair = assemble_operator_pair(g, constant_acoustic(g, 1.0, 1.0));
        auto red = reduce_system(pair, dirichlet_constraints(g, boundary_pressure_dofs(g, {Side::top, Side::right})));
        add("acoustic 2D 16x16 top+right dirichlet", red.system);
    }
    return out;
}

inline std::vector<Check> conservation() {
    std::vector<Check> out;
    auto pair = acoustic_line(128);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pair.size()));
    for (std::size_t k = 0; k < pair.grid.pressure_count(); ++k)
        w[static_cast<Eigen::Index>(k)] = std::exp(-std::pow((pair.grid.pressure_point(k).x - 0.4) / 0.05, 2));
    Hamiltonian h = build_hamiltonian(pair);
    QuantumRegisterState s0 = encode(w, pair.B);
    const double T = 5.0;  // five crossings of the unit domain at c = 1
    QuantumRegisterState s1 = evolve(s0, h, T);
    out.push_back(at_most("amplitude norm drift", std::abs(s1.amplitudes.norm() - 1.0), 1e-10));
    const double e_decoded = b_energy(pair, decode(s1, pair.B));
    out.push_back(at_most("decoded energy relative drift", std::abs(e_decoded - energy(s0)) / energy(s0), 1e-10));
    QuantumRegisterState split = evolve(evolve(s0, h, 0.37 * T), h, 0.63 * T);
    out.push_back(at_most("group property |U(a)U(b)-U(a+b)|", (split.amplitudes - s1.amplitudes).norm(), 1e-10));
    EvolutionConfig krylov;
    krylov.method = EvolutionMethod::krylov;
    QuantumRegisterState sk = evolve(s0, h, T, krylov);
    out.push_back(at_most("krylov vs dense", (sk.amplitudes - s1.amplitudes).norm(), 1e-8));
    return out;
}

inline std::vector<Check> estimator() {
    std::vector<Check> out;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    const std::size_t L = 24;
    std::vector<Eigen::VectorXcd> blocks(3);
    for (auto &b : blocks) {
        b.resize(static_cast<Eigen::Index>(L));
        for (Eigen::Index k = 0; k < b.size(); ++k) b[k] = nd(rng);
    }
    QuantumRegisterState phi = stack_register(blocks);
    std::vector<std::uint8_t> mask(L, 0);
    for (std::size_t k = 0; k < L; k += 3) mask[k] = 1;
    SubspaceProjector p(mask);
    Eigen::VectorXcd sum = (blocks[0] + blocks[1] + blocks[2]);
    double dense = 0.0;
    for (std::size_t k = 0; k < L; ++k)
        if (mask[k]) dense += std::norm(sum[static_cast<Eigen::Index>(k)]);
    const double exact = estimate(phi, p).value;
    out.push_back(at_most("exact mode vs dense (relative)", std::abs(exact - dense) / dense, 1e-12));
    out.push_back(exactly("M-state strings (M=4 after padding)", static_cast<double>(multi_state_observable(4).strings.size()), 8.0));
    out.push_back(exactly("two-state strings", static_cast<double>(two_state_observable().strings.size()), 4.0));

    auto rms = [&](std::uint64_t shots) {
        double acc = 0.0;
        for (std::uint64_t r = 0; r < 100; ++r) {
            EstimatorConfig cfg{EstimatorMode::shots, shots, 1000 + r, false};
            const double e = estimate(phi, p, cfg).value - exact;
            acc += e * e;
        }
        return std::sqrt(acc / 100.0);
    };
    const double ratio = rms(10000) / rms(40000);
    out.push_back(within("RMS ratio 1e4 -> 4e4 shots", ratio, 1.4, 2.6));
    return out;
}

inline std::vector<Check> initcircuit() {
    std::vector<Check> out;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t A : {2, 4, 8}) {
        double worst = 1.0;
        std::size_t calls = 0;
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> gr(A), gp(A);
            for (std::size_t a = 0; a < A; ++a) gr[a] = u(rng), gp[a] = u(rng);
            PolarGridSpec spec{2, A, 4, {0.0, 0.0}, 0.5};
            VectorField f = [&](Point x) {
                const double r = std::hypot(x.x, x.y);
                const auto a = static_cast<std::size_t>(std::lround(r / 0.5)) - 1;
                Eigen::VectorXd v(2);
                v << (gr[a] * x.x - gp[a] * x.y) / r, (gr[a] * x.y + gp[a] * x.x) / r;
                return v;
            };
            RaySample ray = sample_reference_ray(f, spec);
            calls = std::max(calls, ray.evaluations);
            worst = std::min(worst, fidelity(simulate_circuit(build_circuit(spec), ray), direct_polar_state(f, spec)));
        }
        out.push_back(at_least("fidelity A=" + std::to_string(A), worst, 1.0 - 1e-10));
        out.push_back(exactly("ray evaluations A=" + std::to_string(A), static_cast<double>(calls), static_cast<double>(A)));
    }
    return out;
}

inline std::vector<Check> sources() {
    std::vector<Check> out;
    {
        std::vector<double> tau{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
        std::vector<double> t;
        for (int i = 0; i <= 2000; ++i) t.push_back(-0.2 + 1.4 * i / 2000.0);
        out.push_back(at_most("partition of unity deviation", make_windows(t, default_steepness(tau), tau).max_deviation, 1e-3));
    }
    {
        auto coarse = acoustic_line(201);
        auto fine = acoustic_line(401);
        auto at_mid = [](const OperatorPair &pair, Wavelet w) {
            return PointSource{pair.grid.nearest_pressure({0.5, 0.0}), Eigen::VectorXd::Ones(1), std::move(w)};
        };
        auto a = presimulate_pulse(at_mid(coarse, ricker_wavelet(20.0)), coarse);
        auto b = presimulate_pulse(at_mid(fine, ricker_wavelet(40.0)), fine);
        out.push_back(at_most("pre-sim nonzero change at 2x resolution",
                              std::abs(double(b.nonzeros) - double(a.nonzeros)) / double(a.nonzeros), 0.1));
    }
    {
        auto g = build_grid_1d(0.0, 1.0, 256);
        auto pair = assemble_operator_pair(
            g, sample_acoustic(g, [](Point p) { return p.x < 0.62 ? 1.0 : 1.8; }, [](Point p) { return p.x < 0.62 ? 1.0 : 1.5; }));
        PointSource src{g.nearest_pressure({0.3, 0.0}), Eigen::VectorXd::Ones(1), windowed_sine(0.0, 0.6, 8.0)};
        HomogeneousBall ball{0.25, 1.0, 1.0, {}};
        Hamiltonian h = build_hamiltonian(pair);
        auto synced = synchronize(h, pair.B, source_blocks(pair, src, ball));
        const double T = 1.1;
        auto P = SubspaceProjector::from_ranges(pair.size(), {{g.nearest_pressure({0.7, 0.0}), g.nearest_pressure({0.95, 0.0}) + 1}});
        const double pipeline = estimate(advance(synced, T), P).value;
        const double mono = subspace_loss(monolithic_solution(pair, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pair.size())), {src}, {}, T), pair.B, P);
        out.push_back(at_most("sliced pipeline vs monolithic loss (relative)", std::abs(pipeline - mono) / mono, 1e-6));
    }
    return out;
}

struct Suite {
    const char *name;
    std::vector<Check> (*run)();
};

inline const std::vector<Suite> &suites() {
    static const std::vector<Suite> all{{"symmetry", symmetry},
                                        {"conservation", conservation},
                                        {"estimator", estimator},
                                        {"initcircuit", initcircuit},
                                        {"sources", sources}};
    return all;
}

}  // namespace verify

}  // namespace qwave
