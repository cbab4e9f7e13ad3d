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


// Acceptance criteria. One PASS/FAIL line per criterion, followed by the
// individual measurements. Exit status is non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "qwave/constraints.hpp"
#include "qwave/encoding.hpp"
#include "qwave/evolution.hpp"
#include "qwave/initcircuit.hpp"
#include "qwave/measurement.hpp"
#include "qwave/pipeline.hpp"
#include "qwave/reference.hpp"
#include "qwave/sources.hpp"
#include "qwave/verify.hpp"

namespace {

using namespace qwave;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

OperatorPair line(std::size_t n, double rho = 1.0, double c = 1.0) {
    auto g = build_grid_1d(0.0, 1.0, n);
    return assemble_operator_pair(g, constant_acoustic(g, rho, c));
}

Eigen::VectorXd pressure_gaussian(const OperatorPair &pair, double x0, double width) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pair.size()));
    for (std::size_t k = 0; k < pair.grid.pressure_count(); ++k) {
        const double x = pair.grid.pressure_point(k).x;
        w[static_cast<Eigen::Index>(k)] = std::exp(-std::pow((x - x0) / width, 2));
    }
    return w;
}

// (w|w)_B computed from the diagonal directly.
double b_norm2(const SparseOperator &B, const Eigen::VectorXd &w) {
    double e = 0.0;
    for (const auto &t : B.entries()) e += t.value * w[static_cast<Eigen::Index>(t.row)] * w[static_cast<Eigen::Index>(t.col)];
    return e;
}

// Hermitian defect from a dense copy, entry by entry.
double dense_hermitian_defect(const Hamiltonian &h) {
    Eigen::MatrixXcd m = h.dense();
    double worst = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
    return worst;
}

// max |a_ij + a_ji| over a dense copy.
double dense_antisymmetry(const SparseOperator &A) {
    Eigen::MatrixXd m = A.to_dense();
    return (m + m.transpose()).cwiseAbs().maxCoeff();
}

std::vector<Check> c1_symmetry() {
    const auto t0 = Clock::now();
    std::vector<Check> out;
    auto add = [&](const std::string &label, const OperatorPair &pair) {
        out.push_back(exactly(label + " |A+A^T|_max", dense_antisymmetry(pair.A), 0.0));
        out.push_back(at_most(label + " |H-H^dag|_max", dense_hermitian_defect(build_hamiltonian(pair)), 1e-12));
    };
    auto rho = [](Point p) { return 1.0 + 0.5 * std::sin(3.0 * p.x) + 0.3 * p.y; };
    auto speed = [](Point p) { return 1.5 + 0.4 * std::cos(2.0 * p.x * (1.0 + p.y)); };
    for (std::size_t n : {8, 64, 256}) {
        auto g = build_grid_1d(0.0, 1.0, n);
        add("acoustic1d N=" + std::to_string(n), assemble_operator_pair(g, sample_acoustic(g, rho, speed)));
    }
    for (std::size_t n : {4, 8, 16}) {
        auto g = build_grid_2d({0.0, 1.0}, {0.0, 1.5}, n, n);
        add("acoustic2d " + std::to_string(n) + "x" + std::to_string(n),
            assemble_operator_pair(g, sample_acoustic(g, rho, speed)));
    }
    for (std::size_t n : {16, 128}) {
        auto g = build_grid_1d(0.0, 2.0, n);
        add("maxwell1d N=" + std::to_string(n), assemble_operator_pair(g, sample_maxwell1d(g, rho, speed)));
    }
    out.push_back(at_most("runtime [s]", seconds_since(t0), 10.0));
    return out;
}

std::vector<Check> c2_conservation() {
    std::vector<Check> out;
    auto pair = line(128);
    Eigen::VectorXd w0 = pressure_gaussian(pair, 0.35, 0.05);
    const double e0 = b_norm2(pair.B, w0);
    Hamiltonian h = build_hamiltonian(pair);
    QuantumRegisterState s0 = encode(w0, pair.B);
    double norm_drift = 0.0, energy_drift = 0.0, decoded_drift = 0.0;
    // unit domain, unit speed: t = 5 is five crossings
    for (double t : {1.0, 2.5, 5.0}) {
        QuantumRegisterState s = evolve(s0, h, t);
        norm_drift = std::max(norm_drift, std::abs(s.amplitudes.norm() - 1.0));
        energy_drift = std::max(energy_drift, std::abs(s.scale * s.scale - e0) / e0);
        decoded_drift = std::max(decoded_drift, std::abs(b_norm2(pair.B, decode(s, pair.B)) - e0) / e0);
    }
    out.push_back(at_most("amplitude norm drift", norm_drift, 1e-10));
    out.push_back(at_most("scale^2 relative drift", energy_drift, 1e-10));
    out.push_back(at_most("decoded (w|w)_B relative drift", decoded_drift, 1e-10));
    return out;
}

std::vector<Check> c3_leapfrog_order() {
    std::vector<Check> out;
    auto pair = line(128);
    Eigen::VectorXd w0 = pressure_gaussian(pair, 0.4, 0.08);
    const double T = 1.0;
    Eigen::VectorXd exact = decode(evolve(encode(w0, pair.B), build_hamiltonian(pair), T), pair.B);
    const double dt0 = 0.5 * cfl_limit(pair);
    std::vector<double> dts, errs;
    for (double k : {1.0, 2.0, 4.0}) {
        Trajectory tr = leapfrog_evolve(pair, w0, {}, dt0 / k, T);
        dts.push_back(tr.dt);
        errs.push_back((tr.final_state() - exact).norm() / exact.norm());
    }
    // least-squares slope of log err against log dt
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < 3; ++i) mx += std::log(dts[i]) / 3.0, my += std::log(errs[i]) / 3.0;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        sxy += (std::log(dts[i]) - mx) * (std::log(errs[i]) - my);
        sxx += std::pow(std::log(dts[i]) - mx, 2);
    }
    out.push_back(within("observed order", sxy / sxx, 1.8, 2.2));
    out.push_back(at_most("relative l2 error at finest dt", errs.back(), 1e-3));
    return out;
}

std::vector<Check> c4_measurement_exactness() {
    std::vector<Check> out;
    std::mt19937_64 rng(2026);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.5, 2.0);
    double worst = 0.0;
    std::size_t single = 0, all_but_one = 0;
    const std::size_t arities[] = {1, 2, 4};
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t L = 5 + static_cast<std::size_t>(inst % 27);
        const std::size_t M = arities[inst % 3];
        Eigen::VectorXd bdiag(static_cast<Eigen::Index>(L));
        for (auto &b : bdiag) b = ud(rng);
        SparseOperator B = SparseOperator::diagonal(bdiag);
        std::vector<Eigen::VectorXd> ws(M, Eigen::VectorXd(static_cast<Eigen::Index>(L)));
        for (auto &w : ws)
            for (auto &v : w) v = nd(rng);
        std::vector<std::uint8_t> mask(L, 0);
        if (inst % 4 == 0) {
            mask[static_cast<std::size_t>(inst) % L] = 1;
            ++single;
        } else if (inst % 4 == 1) {
            std::fill(mask.begin(), mask.end(), 1);
            mask[static_cast<std::size_t>(inst) % L] = 0;
            ++all_but_one;
        } else {
            for (auto &m : mask) m = nd(rng) > 0.0;
            mask[0] = 1;
        }
        // dense oracle: ||P Σ B^{1/2} w_i||²
        double dense = 0.0;
        for (std::size_t k = 0; k < L; ++k) {
            if (!mask[k]) continue;
            double s = 0.0;
            for (const auto &w : ws) s += std::sqrt(bdiag[static_cast<Eigen::Index>(k)]) * w[static_cast<Eigen::Index>(k)];
            dense += s * s;
        }
        const double value = estimate(encode_stacked(ws, B), SubspaceProjector(mask)).value;
        worst = std::max(worst, std::abs(value - dense) / dense);
    }
    out.push_back(at_most("exact mode vs dense, 100 instances (relative)", worst, 1e-12));
    out.push_back(at_least("instances with d = 1", static_cast<double>(single), 1.0));
    out.push_back(at_least("instances with d = L-1", static_cast<double>(all_but_one), 1.0));

    auto two = two_state_observable();
    out.push_back(exactly("two-state string count", static_cast<double>(two.strings.size()), 4.0));
    const double want[] = {0.5, -0.5, 0.5, -0.5};
    double coeff_err = 0.0;
    for (std::size_t j = 0; j < two.strings.size() && j < 4; ++j) coeff_err = std::max(coeff_err, std::abs(two.strings[j].coefficient - want[j]));
    out.push_back(exactly("two-state coefficients vs [.5,-.5,.5,-.5]", coeff_err, 0.0));
    for (std::size_t M : {2, 4, 8, 16})
        out.push_back(exactly("M-state string count M=" + std::to_string(M),
                              static_cast<double>(multi_state_observable(M).strings.size()), 2.0 * static_cast<double>(M)));

    // two-state difference against a dense ||P(a-b)||²
    {
        const std::size_t L = 12;
        Eigen::VectorXd a(static_cast<Eigen::Index>(L)), b(static_cast<Eigen::Index>(L));
        for (auto &v : a) v = nd(rng);
        for (auto &v : b) v = nd(rng);
        std::vector<std::uint8_t> mask(L, 0);
        for (std::size_t k = 2; k < 9; ++k) mask[k] = 1;
        double dense = 0.0;
        for (std::size_t k = 0; k < L; ++k)
            if (mask[k]) dense += std::pow(a[static_cast<Eigen::Index>(k)] - b[static_cast<Eigen::Index>(k)], 2);
        const double v = estimate_difference(encode_stacked({a, b}, SparseOperator::identity(L)), SubspaceProjector(mask)).value;
        out.push_back(at_most("two-state difference vs dense (relative)", std::abs(v - dense) / dense, 1e-12));
    }
    return out;
}

std::vector<Check> c5_estimator_convergence() {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> nd;
    const std::size_t L = 20;
    std::vector<Eigen::VectorXd> ws(2, Eigen::VectorXd(static_cast<Eigen::Index>(L)));
    for (auto &w : ws)
        for (auto &v : w) v = nd(rng);
    std::vector<std::uint8_t> mask(L, 0);
    for (std::size_t k = 0; k < L; k += 2) mask[k] = 1;
    SubspaceProjector P(mask);
    QuantumRegisterState phi = encode_stacked(ws, SparseOperator::identity(L));
    const double exact = estimate(phi, P).value;
    auto rms = [&](std::uint64_t shots) {
        double acc = 0.0;
        for (std::uint64_t r = 0; r < 100; ++r) {
            EstimatorConfig cfg{EstimatorMode::shots, shots, 5000 + r, false};
            acc += std::pow(estimate(phi, P, cfg).value - exact, 2);
        }
        return std::sqrt(acc / 100.0);
    };
    const double a = rms(10000), b = rms(40000);
    return {within("RMS(1e4) / RMS(4e4)", a / b, 1.4, 2.6)};
}

std::vector<Check> c6_source_pipeline() {
    const auto t0 = Clock::now();
    std::vector<Check> out;
    auto g = build_grid_1d(0.0, 1.0, 256);
    auto rho = [](Point p) { return p.x < 0.62 ? 1.0 : 1.8; };
    auto speed = [](Point p) { return p.x < 0.62 ? 1.0 : 1.5; };
    auto pair = assemble_operator_pair(g, sample_acoustic(g, rho, speed));
    PointSource src{g.nearest_pressure({0.3, 0.0}), Eigen::VectorXd::Ones(1), windowed_sine(0.0, 0.6, 8.0)};
    HomogeneousBall ball{0.25, 1.0, 1.0, {}};
    const double T = 1.1;
    auto blocks = source_blocks(pair, src, ball);
    out.push_back(at_least("slices", static_cast<double>(blocks.size()), 2.0));
    Hamiltonian h = build_hamiltonian(pair);
    auto synced = synchronize(h, pair.B, blocks);
    const std::size_t lo = g.nearest_pressure({0.7, 0.0}), hi = g.nearest_pressure({0.95, 0.0}) + 1;
    auto P = SubspaceProjector::from_ranges(pair.size(), {{lo, hi}});
    const double pipeline = estimate(advance(synced, T), P).value;

    Eigen::VectorXd w = monolithic_solution(pair, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pair.size())), {src}, {}, T);
    double mono = 0.0;
    for (std::size_t k = lo; k < hi; ++k) mono += pair.B.value_at(k, k) * w[static_cast<Eigen::Index>(k)] * w[static_cast<Eigen::Index>(k)];
    out.push_back(at_most("pipeline vs monolithic subspace loss (relative)", std::abs(pipeline - mono) / mono, 1e-6));
    out.push_back(at_most("runtime [s]", seconds_since(t0), 60.0));
    return out;
}

std::vector<Check> c7_constant_initialization() {
    std::vector<Check> out;
    auto counts = [](std::size_t n, double freq) {
        auto pair = line(n);
        PointSource src{pair.grid.nearest_pressure({0.5, 0.0}), Eigen::VectorXd::Ones(1), ricker_wavelet(freq)};
        return static_cast<double>(presimulate_pulse(src, pair).nonzeros);
    };
    const double a = counts(201, 20.0), b = counts(401, 40.0), c = counts(801, 80.0);
    out.push_back(at_most("nonzero change 201 -> 401 nodes", std::abs(b - a) / a, 0.1));
    out.push_back(at_most("nonzero change 401 -> 801 nodes", std::abs(c - b) / b, 0.1));
    return out;
}

std::vector<Check> c8_partition_of_unity() {
    std::vector<Check> out;
    double worst = 0.0;
    for (std::size_t J : {2, 5, 9}) {
        std::vector<double> tau;
        for (std::size_t j = 0; j <= J; ++j) tau.push_back(0.3 * static_cast<double>(j) + 0.01 * std::sin(double(j)));
        const double z = default_steepness(tau);
        // direct sum of sigmoid windows over the interior
        const double lo = tau.front() + 0.5 * (tau[1] - tau[0]), hi = tau.back() - 0.5 * (tau[J] - tau[J - 1]);
        for (int i = 0; i <= 4000; ++i) {
            const double t = lo + (hi - lo) * i / 4000.0;
            double sum = 0.0;
            for (std::size_t j = 0; j < J; ++j) {
                auto s = [](double x) { return 0.5 * (1.0 + std::tanh(0.5 * x)); };
                sum += s(z * (t - tau[j])) - s(z * (t - tau[j + 1]));
            }
            worst = std::max(worst, std::abs(sum - 1.0));
        }
        std::vector<double> grid;
        for (int i = 0; i <= 4000; ++i) grid.push_back(tau.front() - 0.2 + (tau.back() - tau.front() + 0.4) * i / 4000.0);
        worst = std::max(worst, make_windows(grid, z, tau).max_deviation);
    }
    out.push_back(at_most("max |sum_j W_j - 1| on the interior", worst, 1e-3));

    auto f = ricker_wavelet(6.0);
    std::vector<double> t, tau{f.t_start, f.t_start + 0.07, f.t_start + 0.2, f.t_start + 0.31, f.t_end + 1e-9};
    for (int i = 0; i <= 1999; ++i) t.push_back(f.t_start + (f.t_end - f.t_start) * i / 1999.0);
    auto ws = make_windows(t, std::numeric_limits<double>::infinity(), tau);
    std::size_t plain = 0, windowed = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        plain += f(t[i]) != 0.0;
        for (const auto &w : ws.values) windowed += (w[i] * f(t[i])) != 0.0;
    }
    out.push_back(exactly("box-limit nonzero count difference", std::abs(double(plain) - double(windowed)), 0.0));
    return out;
}

std::vector<Check> c9_initcircuit() {
    std::vector<Check> out;
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t A : {2, 4, 8}) {
        double worst = 1.0;
        std::size_t max_calls = 0;
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> radial(A), swirl(A);
            for (std::size_t a = 0; a < A; ++a) radial[a] = u(rng), swirl[a] = u(rng);
            const double dr = 0.3 + 0.1 * trial;
            PolarGridSpec spec{2, A, 8, {0.2, -0.1}, dr};
            auto profile = [&](double r, const std::vector<double> &g) {
                const auto a = static_cast<std::size_t>(std::lround(r / dr)) - 1;
                return g[std::min(a, A - 1)];
            };
            // rotationally covariant: radial and azimuthal parts depend on r only
            VectorField field = [&](Point x) {
                const double dx = x.x - 0.2, dy = x.y + 0.1, r = std::hypot(dx, dy);
                Eigen::VectorXd v(2);
                v << (profile(r, radial) * dx - profile(r, swirl) * dy) / r, (profile(r, radial) * dy + profile(r, swirl) * dx) / r;
                return v;
            };
            RaySample ray = sample_reference_ray(field, spec);
            max_calls = std::max(max_calls, ray.evaluations);
            QuantumRegisterState circ = simulate_circuit(build_circuit(spec), ray);
            // direct oracle: evaluate on every polar point, |c>|a>|theta> order
            Eigen::VectorXcd direct = Eigen::VectorXcd::Zero(circ.amplitudes.size());
            for (std::size_t a = 0; a < A; ++a)
                for (std::size_t th = 0; th < 8; ++th) {
                    const double phi = std::acos(-1.0) * static_cast<double>(th) / 8.0, r = dr * static_cast<double>(a + 1);
                    Eigen::VectorXd w = field({0.2 + r * std::cos(phi), -0.1 + r * std::sin(phi)});
                    for (std::size_t c = 0; c < 2; ++c) direct[static_cast<Eigen::Index>((c * A + a) * 8 + th)] = w[static_cast<Eigen::Index>(c)];
                }
            direct.normalize();
            worst = std::min(worst, std::abs(direct.dot(circ.amplitudes)));
        }
        out.push_back(at_least("fidelity A=" + std::to_string(A), worst, 1.0 - 1e-10));
        out.push_back(exactly("field evaluations A=" + std::to_string(A), static_cast<double>(max_calls), static_cast<double>(A)));
    }
    return out;
}

// A pulse released at rest near the right wall; returns the signed peak of
// the reflected half and the largest value away from both halves.
std::pair<double, double> reflected_peak(bool dirichlet) {
    auto pair = line(256);
    const double x0 = 0.8, width = 0.03, T = 0.5;
    Eigen::VectorXd w0 = pressure_gaussian(pair, x0, width);
    Eigen::VectorXd w;
    if (dirichlet) {
        auto red = reduce_system(pair, dirichlet_constraints(pair.grid, boundary_pressure_dofs(pair.grid, Side::right)));
        Eigen::VectorXd wf = red.restrict(w0);
        w = red.expand(decode(evolve(encode(wf, red.system.B), build_hamiltonian(red.system), T), red.system.B), T);
    } else {
        w = decode(evolve(encode(w0, pair.B), build_hamiltonian(pair), T), pair.B);
    }
    const double image = 2.0 - x0 - T, direct = x0 - T;
    double peak = 0.0, ripple = 0.0;
    for (std::size_t k = 0; k < pair.grid.pressure_count(); ++k) {
        const double x = pair.grid.pressure_point(k).x, v = w[static_cast<Eigen::Index>(k)];
        if (std::abs(x - image) < 4.0 * width) {
            if (std::abs(v) > std::abs(peak)) peak = v;
        } else if (std::abs(x - direct) >= 4.0 * width) {
            ripple = std::max(ripple, std::abs(v));
        }
    }
    return {peak, ripple};
}

std::vector<Check> c10_boundary_physics() {
    std::vector<Check> out;
    auto [pd, rd] = reflected_peak(true);
    auto [pn, rn] = reflected_peak(false);
    out.push_back(exactly("dirichlet reflected peak sign", pd > 0 ? 1.0 : -1.0, -1.0));
    out.push_back(at_least("dirichlet SNR", std::abs(pd) / std::max(rd, 1e-300), 100.0));
    out.push_back(exactly("neumann reflected peak sign", pn > 0 ? 1.0 : -1.0, 1.0));
    out.push_back(at_least("neumann SNR", std::abs(pn) / std::max(rn, 1e-300), 100.0));
    return out;
}

std::vector<Check> c11_constraints() {
    std::vector<Check> out;
    std::size_t passed = 0, tried = 0;
    double worst = 0.0;
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const bool two_d = trial % 2 == 1;
        auto g = two_d ? build_grid_2d({0.0, 1.0}, {0.0, 1.0}, 6 + trial % 5, 5 + trial % 3) : build_grid_1d(0.0, 1.0, 9 + trial);
        auto pair = assemble_operator_pair(g, sample_acoustic(g, [](Point p) { return 1.0 + p.x; }, [](Point p) { return 2.0 - p.y; }));
        std::vector<std::size_t> dofs;
        for (std::size_t k = 0; k < g.pressure_count(); ++k)
            if (rng() % 4 == 0) dofs.push_back(k);
        if (dofs.empty()) dofs.push_back(0);
        ++tried;
        try {
            auto red = reduce_system(pair, dirichlet_constraints(g, dofs));
            worst = std::max(worst, dense_antisymmetry(red.system.A));
            ++passed;
        } catch (const Error &) {
        }
    }
    out.push_back(exactly("R_f = 0 reductions accepted", static_cast<double>(passed), static_cast<double>(tried)));
    out.push_back(exactly("reduced |A+A^T|_max", worst, 0.0));

    // w_3 tied to w_0 with R_f != 0 breaks the antisymmetry of the reduced A
    OperatorPair pair;
    pair.A = SparseOperator::from_dense((Eigen::MatrixXd(4, 4) << 0, 1, 0, 0, -1, 0, 2, 0, 0, -2, 0, 1, 0, 0, -1, 0).finished());
    pair.B = SparseOperator::identity(4);
    pair.full_index = {0, 1, 2, 3};
    pair.grid = build_grid_1d(0.0, 1.0, 2);
    ConstraintSet cs;
    cs.dof_count = 4;
    cs.constrained = {3};
    cs.R_f = SparseOperator::from_dense((Eigen::MatrixXd(1, 3) << 1, 0, 0).finished());
    cs.R_c = SparseOperator::identity(1);
    double rejected = 0.0;
    try {
        reduce_system(pair, cs);
    } catch (const Error &e) {
        rejected = e.kind() == ErrorKind::incompatible_constraints ? 1.0 : 0.0;
    }
    out.push_back(exactly("incompatible R_f rejected", rejected, 1.0));
    return out;
}

struct Criterion {
    const char *id;
    const char *title;
    std::function<std::vector<Check>()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"C1", "operator symmetry", c1_symmetry},
        {"C2", "norm and energy conservation", c2_conservation},
        {"C3", "leapfrog convergence to exact evolution", c3_leapfrog_order},
        {"C4", "measurement exactness", c4_measurement_exactness},
        {"C5", "shot estimator convergence", c5_estimator_convergence},
        {"C6", "sliced source pipeline vs monolithic", c6_source_pipeline},
        {"C7", "constant initialization count", c7_constant_initialization},
        {"C8", "window partition of unity", c8_partition_of_unity},
        {"C9", "initialization circuit fidelity", c9_initcircuit},
        {"C10", "boundary reflection polarity", c10_boundary_physics},
        {"C11", "constraint compatibility", c11_constraints},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        const auto t0 = Clock::now();
        std::vector<Check> checks;
        std::string error;
        try {
            checks = c.run();
        } catch (const std::exception &e) {
            error = e.what();
        }
        bool ok = error.empty() && !checks.empty();
        for (const auto &k : checks) ok = ok && k.passed();
        failures += ok ? 0 : 1;
        std::printf("%s %-4s %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.id, c.title, seconds_since(t0));
        if (!error.empty()) std::printf("       error: %s\n", error.c_str());
        for (const auto &k : checks) {
            std::string bound = k.relation == "in" ? "in [" + format_double(k.tolerance) + ", " + format_double(k.upper) + "]"
                                                   : k.relation + " " + format_double(k.tolerance);
            std::printf("       %-50s %-24s %s%s\n", k.name.c_str(), format_double(k.value).c_str(), bound.c_str(),
                        k.passed() ? "" : "  <-- violated");
        }
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
