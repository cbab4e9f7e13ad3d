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

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "qwave/encoding.hpp"
#include "qwave/error.hpp"
#include "qwave/format.hpp"
#include "qwave/grid.hpp"
#include "qwave/initcircuit.hpp"
#include "qwave/measurement.hpp"

namespace qwave {

using Json = nlohmann::ordered_json;

/// Files produced by a run, held in memory and written in one go so that a
/// failed run leaves nothing behind.
class OutputBundle {
   public:
    std::ostringstream &open(const std::string &name) { return files_[name]; }
    void put(const std::string &name, const std::string &text) { files_[name].str(text); }
    void put_json(const std::string &name, const Json &j) { put(name, j.dump(2) + "\n"); }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto &[k, v] : files_) out.push_back(k);
        return out;
    }
    std::string text(const std::string &name) const {
        auto it = files_.find(name);
        require(it != files_.end(), ErrorKind::io, "no output named " + name);
        return it->second.str();
    }

    void write(const std::filesystem::path &dir) const {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        require(!ec, ErrorKind::io, "cannot create output directory " + dir.string() + ": " + ec.message());
        for (const auto &[name, body] : files_) {
            const auto path = dir / name;
            std::filesystem::create_directories(path.parent_path(), ec);
            std::ofstream out(path, std::ios::binary);
            require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path.string());
            out << body.str();
        }
    }

   private:
    std::map<std::string, std::ostringstream> files_;
};

/// `index,real,imag` per amplitude.
inline void write_state_csv(std::ostream &out, const QuantumRegisterState &s) {
    out << "index,real,imag\n";
    for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i)
        out << i << ',' << format_double(s.amplitudes[i].real()) << ',' << format_double(s.amplitudes[i].imag())
            << '\n';
}

inline Json state_sidecar(const QuantumRegisterState &s) {
    return Json{{"scale", s.scale},
                {"physical_dofs", s.layout.physical_dofs},
                {"block_size", s.layout.block_size},
                {"arity", s.layout.arity},
                {"qubits", s.layout.qubits()}};
}

inline Json read_json(const std::string &path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception &e) {
        fail(ErrorKind::validation, path + ": " + e.what());
    }
}

/// Reads a register written by write_state_csv and its JSON sidecar.
inline QuantumRegisterState read_state(const std::string &csv_path, const std::string &sidecar_path) {
    Json meta = read_json(sidecar_path);
    QuantumRegisterState s;
    try {
        s.scale = meta.at("scale").get<double>();
        s.layout.physical_dofs = meta.at("physical_dofs").get<std::size_t>();
        s.layout.block_size = meta.at("block_size").get<std::size_t>();
        s.layout.arity = meta.at("arity").get<std::size_t>();
    } catch (const Json::exception &e) {
        fail(ErrorKind::validation, sidecar_path + ": " + e.what());
    }
    require(s.layout == make_layout(s.layout.physical_dofs, s.layout.arity), ErrorKind::validation,
            sidecar_path + ": inconsistent register layout");
    CsvTable t = read_csv(csv_path);
    require(t.header == std::vector<std::string>{"index", "real", "imag"}, ErrorKind::validation,
            csv_path + ": expected header index,real,imag");
    require(t.rows.size() == s.layout.total(), ErrorKind::validation,
            csv_path + ": expected " + std::to_string(s.layout.total()) + " amplitudes");
    s.amplitudes.resize(static_cast<Eigen::Index>(t.rows.size()));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        require(t.rows[i][0] == static_cast<double>(i), ErrorKind::validation, csv_path + ": indices out of order");
        s.amplitudes[static_cast<Eigen::Index>(i)] = {t.rows[i][1], t.rows[i][2]};
    }
    require(s.padding_is_zero(), ErrorKind::validation, csv_path + ": padding amplitudes must be zero");
    return s;
}

/// `time,dof,x,y,value` rows for one field snapshot.
inline void write_field_rows(std::ostream &out, const StaggeredGrid &grid, double t, const Eigen::VectorXd &w) {
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        Point p = grid.dof_point(static_cast<std::size_t>(k));
        out << format_double(t) << ',' << k << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
            << format_double(w[k]) << '\n';
    }
}

inline Json estimate_json(const EstimateResult &r) {
    Json j{{"value", r.value}, {"stderr", r.std_error}, {"shots", r.shots}, {"strings", r.strings}};
    if (r.confidence95) j["confidence95"] = *r.confidence95;
    return j;
}

inline Json observable_json(const ObservableDecomposition &obs) {
    Json strings = Json::array();
    for (const auto &s : obs.strings) strings.push_back({{"pauli", s.letters}, {"coefficient", s.coefficient}});
    return Json{{"arity", obs.arity}, {"strings", strings}};
}

inline Json circuit_json(const GateCircuit &gc) {
    Json gates = Json::array();
    for (const auto &g : gc.gates) {
        Json j{{"kind", gate_kind_name(g.kind)}, {"qubits", g.qubits}};
        if (g.kind == GateKind::controlled_rotation) {
            j["control"] = g.control;
            j["plane"] = Json::array({g.plane, g.plane + 1});
            j["angle"] = g.angle;
        }
        gates.push_back(std::move(j));
    }
    return Json{{"qubits", gc.qubits()},
                {"component_qubits", gc.component_qubits},
                {"radial_qubits", gc.radial_qubits},
                {"angular_qubits", gc.angular_qubits},
                {"gates", gates}};
}

}  // namespace qwave
