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
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qwave/io.hpp"
#include "qwave/pipeline.hpp"
#include "qwave/scenario.hpp"

namespace qwave {

/// Files and a one-line summary per run. Nothing touches the disk here.
struct RunResult {
    OutputBundle files;
    Json manifest;
    std::vector<std::string> summary;
};

inline Json hamiltonian_json(const Hamiltonian &h) {
    return Json{{"dimension", h.dim()}, {"max_norm", h.max_norm()}, {"sparsity", h.sparsity()}};
}

/// Classical time stepping costs ~ L·steps·d, a sparse-access Hamiltonian
/// simulation ~ d·‖H‖_max·t queries (log factors dropped). Both are estimates.
inline Json scaling_report(const ScenarioSystem &sys, const Hamiltonian &h, double t, std::size_t qubits) {
    const auto &pair = sys.pair();
    const double D = static_cast<double>(sys.grid.dimension());
    const double steps = std::ceil(t / pair.stable_dt());
    const double classical = static_cast<double>(pair.size()) * steps * static_cast<double>(h.sparsity());
    const double quantum = static_cast<double>(h.sparsity()) * h.max_norm() * t;
    Json j{{"dimension", sys.grid.dimension()},
           {"grid_points", sys.grid.pressure_count()},
           {"dofs", pair.size()},
           {"qubits", qubits},
           {"time_steps", steps},
           {"classical_operations", classical},
           {"hamiltonian_queries", quantum},
           {"classical_exponent", (D + 1.0) / D},
           {"quantum_exponent", 1.0 / D}};
    j["speedup"] = quantum > 0.0 ? Json(classical / quantum) : Json(nullptr);
    return j;
}

inline Json manifest_base(const Scenario &sc, const ScenarioSystem &sys, const std::string &command) {
    Json grid{{"dimension", sc.dimension}, {"nodes", sc.nodes}, {"dofs", sys.grid.dof_count()},
              {"free_dofs", sys.pair().size()}};
    Json j{{"command", command}, {"scenario", sc.path}, {"family", family_name(sc.family)}, {"grid", grid}};
    j["seed"] = sc.estimator.seed ? Json(*sc.estimator.seed) : Json(nullptr);
    return j;
}

namespace detail {

struct Pipeline {
    Hamiltonian h;
    std::vector<TimedField> blocks;
    std::vector<PreSimResult> raw;
    std::vector<std::size_t> raw_owner;
    SyncedRegister synced;
};

inline double source_dt(const Scenario &sc, const OperatorPair &pair) { return suggested_dt(pair, sc.reference.cfl_factor); }

inline Pipeline run_pipeline(const Scenario &sc, const ScenarioSystem &sys) {
    const OperatorPair &pair = sys.pair();
    Pipeline p;
    p.h = build_hamiltonian(pair);
    if (sys.w0.lpNorm<Eigen::Infinity>() > 0.0) p.blocks.push_back({sys.w0, 0.0, "initial"});
    std::optional<HomogeneousBall> ball;
    if (sc.ball) ball = HomogeneousBall{sc.ball->radius, sc.ball->density, sc.ball->speed, sc.ball->options};
    for (std::size_t i = 0; i < sys.sources.size(); ++i) {
        const std::size_t before = p.raw.size();
        auto pieces = source_blocks(pair, sys.sources[i], ball, source_dt(sc, pair), &p.raw);
        p.raw_owner.insert(p.raw_owner.end(), p.raw.size() - before, i);
        for (auto &b : pieces) {
            b.label = "source " + std::to_string(i) + " " + b.label;
            p.blocks.push_back(std::move(b));
        }
    }
    if (sys.reduced && !sys.reduced->source_times.empty()) {
        const double tb = sys.reduced->source_times.back();
        Eigen::VectorXd wb = DuhamelSolver(pair).solve(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pair.size())),
                                                       boundary_sources(*sys.reduced), 0.0, tb);
        p.blocks.push_back({wb, tb, "boundary"});
    }
    if (p.blocks.empty()) p.blocks.push_back({Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pair.size())), 0.0, "initial"});
    p.synced = synchronize(p.h, pair.B, p.blocks, sc.evolution);
    return p;
}

inline Eigen::VectorXd leapfrog_reference(const Scenario &sc, const ScenarioSystem &sys, double t,
                                          Trajectory *traj = nullptr) {
    const OperatorPair &pair = sys.pair();
    std::vector<Eigen::VectorXd> patterns;
    for (const auto &s : sys.sources) patterns.push_back(point_source_pattern(pair, s));
    SourceSampler sampler = [&](double tt) -> Eigen::VectorXd {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pair.size()));
        for (std::size_t i = 0; i < patterns.size(); ++i) v += patterns[i] * sys.sources[i].wavelet(tt);
        if (sys.reduced) v += sys.reduced->induced_source(tt);
        return v;
    };
    Trajectory tr = leapfrog_evolve(pair, sys.w0, sampler, source_dt(sc, pair), t);
    Eigen::VectorXd w = tr.final_state();
    if (traj) *traj = std::move(tr);
    return w;
}

inline Eigen::VectorXd monolithic_reference(const ScenarioSystem &sys, double t) {
    std::vector<SeparableSource> extra;
    if (sys.reduced) extra = boundary_sources(*sys.reduced);
    return monolithic_solution(sys.pair(), sys.w0, sys.sources, extra, t);
}

inline Json measure_one(const Scenario &sc, const ScenarioSystem &sys, std::size_t i, const QuantumRegisterState &st,
                        const std::optional<Eigen::VectorXd> &monolithic) {
    const OperatorPair &pair = sys.pair();
    const MeasurementSpec &m = sc.measurements[i];
    const SubspaceProjector &mask = sys.masks[i];
    const Eigen::VectorXd field = decode_sum(st, pair.B);
    EstimateResult r;
    double exact = 0.0;
    std::string kind;
    if (sys.data[i]) {
        kind = m.physical ? "physical_misfit" : "misfit";
        QuantumRegisterState pairwise = encode_stacked({field, *sys.data[i]}, pair.B);
        // the second block enters with a minus sign in the two-state observable
        if (m.physical) {
            // weighted partitions of the difference observable
            r = weighted_l2(pairwise, unique_weight_partitions(pair.B.diagonal_values(), mask), sc.estimator, true);
        } else {
            r = estimate_difference(pairwise, mask, sc.estimator);
        }
        exact = subspace_loss(field - *sys.data[i], pair.B, mask, m.physical);
    } else {
        kind = m.physical ? "physical_l2" : "l2";
        r = m.physical ? weighted_l2(st, unique_weight_partitions(pair.B.diagonal_values(), mask), sc.estimator)
                       : estimate(st, mask, sc.estimator);
        exact = subspace_loss(field, pair.B, mask, m.physical);
    }
    Json j{{"name", m.name}, {"kind", kind}, {"mode", sc.estimator.mode == EstimatorMode::exact ? "exact" : "shots"}};
    j["estimate"] = estimate_json(r);
    j["dense_value"] = exact;
    j["subspace_dofs"] = mask.cardinality();
    GateCountReport g = gate_count_report(mask, st.layout.qubits() + 1);
    j["permutation"] = Json{{"d", g.d}, {"qubits", g.qubits}, {"mcx_estimate", g.mcx_estimate}, {"efficient", g.efficient}};
    if (!g.warning.empty()) j["permutation"]["warning"] = g.warning;
    if (monolithic) {
        const Eigen::VectorXd &w = *monolithic;
        const double ref = sys.data[i] ? subspace_loss(w - *sys.data[i], pair.B, mask, m.physical)
                                       : subspace_loss(w, pair.B, mask, m.physical);
        j["monolithic_value"] = ref;
        j["relative_difference"] = ref != 0.0 ? std::abs(r.value - ref) / std::abs(ref) : std::abs(r.value - ref);
    }
    return j;
}

inline Json blocks_json(const Pipeline &p) {
    Json arr = Json::array();
    for (const auto &b : p.blocks) arr.push_back({{"label", b.label}, {"t_end", b.t_end}});
    return arr;
}

}  // namespace detail

inline RunResult run_simulate(const Scenario &sc, const ScenarioSystem &sys) {
    const OperatorPair &pair = sys.pair();
    RunResult out;
    detail::Pipeline p = detail::run_pipeline(sc, sys);

    auto &snap = out.files.open("snapshots.csv");
    auto &energy = out.files.open("energy.csv");
    snap << "time,dof,x,y,value\n";
    energy << "time,register_energy,field_energy\n";
    QuantumRegisterState last;
    for (double t : sc.snapshots) {
        QuantumRegisterState st = advance(p.synced, t, sc.evolution);
        const Eigen::VectorXd w = decode_sum(st, pair.B);
        write_field_rows(snap, sys.grid, t, sys.expand(w, t));
        energy << format_double(t) << ',' << format_double(qwave::energy(st)) << ',' << format_double(b_energy(pair, w))
               << '\n';
        last = std::move(st);
    }
    write_state_csv(out.files.open("state.csv"), last);
    out.files.put_json("state.json", state_sidecar(last));

    std::optional<Eigen::VectorXd> mono;
    if (sc.reference.monolithic) mono = detail::monolithic_reference(sys, sc.end_time);
    for (std::size_t i = 0; i < sc.measurements.size(); ++i) {
        Json j = detail::measure_one(sc, sys, i, last, mono);
        out.summary.push_back(sc.measurements[i].name + ": " + format_double(j["estimate"]["value"].get<double>()));
        out.files.put_json("measurements/" + sc.measurements[i].name + ".json", j);
    }

    Json refs = Json::object();
    const Eigen::VectorXd final_field = decode_sum(last, pair.B);
    if (sc.reference.leapfrog) {
        Trajectory tr;
        Eigen::VectorXd w = detail::leapfrog_reference(sc, sys, sc.end_time, &tr);
        tr.write_energy_csv(out.files.open("reference_energy.csv"));
        auto &f = out.files.open("reference_final.csv");
        f << "time,dof,x,y,value\n";
        write_field_rows(f, sys.grid, sc.end_time, sys.expand(w, sc.end_time));
        const double denom = w.norm();
        refs["leapfrog"] = Json{{"dt", tr.dt},
                                {"steps", tr.steps},
                                {"relative_l2_difference", denom > 0.0 ? (final_field - w).norm() / denom : (final_field - w).norm()}};
    }
    if (mono) {
        const double denom = mono->norm();
        refs["monolithic"] = Json{
            {"relative_l2_difference", denom > 0.0 ? (final_field - *mono).norm() / denom : (final_field - *mono).norm()}};
    }

    out.manifest = manifest_base(sc, sys, "simulate");
    out.manifest["hamiltonian"] = hamiltonian_json(p.h);
    out.manifest["register"] = state_sidecar(last);
    out.manifest["t_sync"] = p.synced.t_sync;
    out.manifest["blocks"] = detail::blocks_json(p);
    out.manifest["snapshots"] = sc.snapshots;
    out.manifest["references"] = refs;
    out.manifest["scaling"] = scaling_report(sys, p.h, sc.end_time, last.layout.qubits());
    out.summary.insert(out.summary.begin(), "simulated " + std::to_string(sc.snapshots.size()) + " snapshots on " +
                                                std::to_string(last.layout.qubits()) + " qubits");
    return out;
}

/// Measures either a stored register or the register the scenario produces at its end time.
inline RunResult run_measure(const Scenario &sc, const ScenarioSystem &sys,
                             const std::optional<QuantumRegisterState> &stored = std::nullopt) {
    const OperatorPair &pair = sys.pair();
    require(!sc.measurements.empty(), ErrorKind::validation, sc.path + ": no measurements requested");
    RunResult out;
    QuantumRegisterState st;
    Hamiltonian h;
    if (stored) {
        require(stored->layout.physical_dofs == pair.size(), ErrorKind::validation,
                "stored register holds " + std::to_string(stored->layout.physical_dofs) + " DOFs, scenario has " +
                    std::to_string(pair.size()));
        st = *stored;
        h = build_hamiltonian(pair);
    } else {
        detail::Pipeline p = detail::run_pipeline(sc, sys);
        st = advance(p.synced, sc.end_time, sc.evolution);
        h = p.h;
    }
    std::optional<Eigen::VectorXd> mono;
    if (sc.reference.monolithic && !stored) mono = detail::monolithic_reference(sys, sc.end_time);
    for (std::size_t i = 0; i < sc.measurements.size(); ++i) {
        Json j = detail::measure_one(sc, sys, i, st, mono);
        out.summary.push_back(sc.measurements[i].name + ": " + format_double(j["estimate"]["value"].get<double>()) +
                              " +- " + format_double(j["estimate"]["stderr"].get<double>()));
        out.files.put_json("measurements/" + sc.measurements[i].name + ".json", j);
    }
    out.manifest = manifest_base(sc, sys, "measure");
    out.manifest["hamiltonian"] = hamiltonian_json(h);
    out.manifest["register"] = state_sidecar(st);
    out.manifest["observable"] = observable_json(multi_state_observable(st.layout.arity));
    out.manifest["scaling"] = scaling_report(sys, h, sc.end_time, st.layout.qubits());
    return out;
}

inline RunResult run_presim(const Scenario &sc, const ScenarioSystem &sys) {
    const OperatorPair &pair = sys.pair();
    require(!sys.sources.empty(), ErrorKind::validation, sc.path + ": no sources to pre-simulate");
    RunResult out;
    Json report = Json::array();
    std::optional<HomogeneousBall> ball;
    if (sc.ball) ball = HomogeneousBall{sc.ball->radius, sc.ball->density, sc.ball->speed, sc.ball->options};
    auto &csv = out.files.open("presim.csv");
    csv << "source,piece,dof,x,y,value\n";
    std::size_t total = 0;
    for (std::size_t i = 0; i < sys.sources.size(); ++i) {
        const auto &src = sys.sources[i];
        Json entry{{"source", i}, {"location", sys.grid.pressure_point(src.location).x},
                   {"t_start", src.t_start()}, {"t_end", src.t_end()}};
        if (sys.grid.dimension() == 2)
            entry["location"] = Json::array({sys.grid.pressure_point(src.location).x, sys.grid.pressure_point(src.location).y});
        std::vector<PreSimResult> pieces;
        std::vector<Eigen::VectorXd> fields;
        if (ball) {
            check_ball_homogeneous(pair, sys.grid.pressure_point(src.location), *ball);
            GreensDecomposition dec = greens_decompose(src, ball->speed, ball->density, ball->radius, sys.grid, ball->options);
            entry["windows"] = Json{{"count", dec.windows.count()}, {"steepness", dec.windows.z},
                                    {"breakpoints", dec.windows.tau}, {"nominal_count", dec.nominal_windows}};
            for (auto &s : dec.slices) fields.push_back(s.field);
            pieces = std::move(dec.slices);
        } else {
            PreSimResult r = presimulate_pulse(src, pair, detail::source_dt(sc, pair));
            fields.push_back(sys.expand(r.field, r.t_end));
            pieces.push_back(std::move(r));
        }
        Json arr = Json::array();
        for (std::size_t j = 0; j < pieces.size(); ++j) {
            const auto &r = pieces[j];
            arr.push_back({{"t_start", r.t_start}, {"t_end", r.t_end}, {"radius", r.radius}, {"nonzeros", r.nonzeros},
                           {"truncated_fraction", r.truncated_fraction}});
            total += r.nonzeros;
            for (Eigen::Index k = 0; k < fields[j].size(); ++k) {
                if (fields[j][k] == 0.0) continue;
                Point p = sys.grid.dof_point(static_cast<std::size_t>(k));
                csv << i << ',' << j << ',' << k << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
                    << format_double(fields[j][k]) << '\n';
            }
        }
        entry["pieces"] = arr;
        report.push_back(entry);
    }
    out.files.put_json("presim.json", Json{{"sources", report}, {"total_nonzeros", total}});
    out.manifest = manifest_base(sc, sys, "presim");
    out.manifest["total_nonzeros"] = total;
    out.summary.push_back("pre-simulated " + std::to_string(sys.sources.size()) + " sources, " +
                          std::to_string(total) + " nonzero entries");
    return out;
}

/// Covariant test fields: g(r)·r̂ (radial), g(r)·φ̂ (azimuthal) or a
/// tabulated pair (g_r, g_φ); extra components carry g(r) as scalars.
inline VectorField initcircuit_field(const InitCircuitSpec &ic) {
    auto interp = [](const std::vector<double> &xs, const std::vector<double> &ys, double x) {
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const auto hi = static_cast<std::size_t>(it - xs.begin());
        const double a = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
        return (1.0 - a) * ys[hi - 1] + a * ys[hi];
    };
    const Point c = ic.grid.center;
    const std::size_t C = ic.grid.components;
    return [=](Point p) {
        const double dx = p.x - c.x, dy = p.y - c.y, r = std::hypot(dx, dy);
        double gr = 0.0, gphi = 0.0, g = 0.0;
        if (ic.field == "tabulated") {
            gr = interp(ic.profile_r, ic.profile_radial, r);
            gphi = interp(ic.profile_r, ic.profile_azimuthal, r);
            g = std::hypot(gr, gphi);
        } else {
            g = ic.amplitude * std::exp(-0.5 * std::pow((r - ic.ring_radius) / ic.ring_width, 2));
            (ic.field == "radial" ? gr : gphi) = g;
        }
        Eigen::VectorXd v = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(C), g);
        const double ux = r > 0.0 ? dx / r : 1.0, uy = r > 0.0 ? dy / r : 0.0;
        v[0] = gr * ux - gphi * uy;
        v[1] = gr * uy + gphi * ux;
        return v;
    };
}

inline RunResult run_initcircuit(const Scenario &sc) {
    require(sc.initcircuit.has_value(), ErrorKind::validation, sc.path + ": no 'initcircuit' section");
    const InitCircuitSpec &ic = *sc.initcircuit;
    RunResult out;
    VectorField field = initcircuit_field(ic);
    const double defect = covariance_defect(field, ic.grid);
    RaySample ray = sample_reference_ray(field, ic.grid);
    GateCircuit gc = build_circuit(ic.grid);
    QuantumRegisterState psi = simulate_circuit(gc, ray);
    std::size_t direct_calls = 0;
    QuantumRegisterState direct = direct_polar_state(field, ic.grid, &direct_calls);
    const double f = fidelity(psi, direct);

    out.files.put_json("circuit.json", circuit_json(gc));
    write_state_csv(out.files.open("state.csv"), psi);
    out.files.put_json("state.json", state_sidecar(psi));
    Json report{{"fidelity", f},
                {"ray_evaluations", ray.evaluations},
                {"direct_evaluations", direct_calls},
                {"covariance_defect", defect},
                {"covariant", defect <= 1e-10},
                {"qubits", gc.qubits()},
                {"state_prep_gates", gc.count(GateKind::state_prep)},
                {"hadamard_gates", gc.count(GateKind::hadamard)},
                {"controlled_rotations", gc.count(GateKind::controlled_rotation)},
                {"min_rotation_angle", gc.min_rotation_angle()},
                {"scale", psi.scale}};
    out.files.put_json("initcircuit.json", report);
    out.manifest = Json{{"command", "initcircuit"}, {"scenario", sc.path}, {"qubits", gc.qubits()}};
    out.summary.push_back("circuit on " + std::to_string(gc.qubits()) + " qubits, fidelity " + format_double(f) + ", " +
                          std::to_string(ray.evaluations) + " field evaluations");
    if (defect > 1e-10)
        out.summary.push_back("warning: field is not rotationally covariant (defect " + format_double(defect) +
                              "); the circuit state differs from the field");
    return out;
}

}  // namespace qwave
