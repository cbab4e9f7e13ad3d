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

// Command-line front end: qwave {simulate|measure|presim|initcircuit|verify}.
//
// Exit codes: 0 success, 1 invalid input (scenario, flags, files), 2 numerical
// failure during the run.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qwave/runner.hpp"
#include "qwave/scenario.hpp"
#include "qwave/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNumerical = 2;

struct Flags {
    std::string scenario;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    std::string state;
    std::string suite;
};

std::filesystem::path output_dir(const Flags &f, const qwave::Scenario &sc) {
    if (!f.out.empty()) return f.out;
    if (!sc.output.empty()) return sc.output;
    if (const char *env = std::getenv("QWAVE_OUT_DIR"); env && *env) return env;
    return "qwave_out";
}

int report(const qwave::Error &e, int code) {
    std::cerr << "qwave: " << e.what() << "\n";
    return code;
}

int run_scenario_command(const std::string &command, const Flags &f) {
    using namespace qwave;
    Scenario sc;
    ScenarioSystem sys;
    std::optional<QuantumRegisterState> stored;
    try {
        sc = load_scenario(f.scenario);
        if (f.seed) sc.estimator.seed = *f.seed;
        if (f.shots) {
            sc.estimator.mode = EstimatorMode::shots;
            sc.estimator.shots = *f.shots;
        }
        require(sc.estimator.mode == EstimatorMode::exact || sc.estimator.seed.has_value(), ErrorKind::validation,
                sc.path + ": /estimator: shot mode needs a seed (scenario or --seed)");
        require(sc.estimator.mode == EstimatorMode::exact || sc.estimator.shots >= 1, ErrorKind::validation,
                sc.path + ": /estimator: shot count must be at least 1");
        if (command != "initcircuit") sys = build_system(sc);
        if (!f.state.empty()) {
            std::filesystem::path csv(f.state);
            std::filesystem::path side = csv;
            side.replace_extension(".json");
            stored = read_state(csv.string(), side.string());
        }
    } catch (const Error &e) {
        return report(e, kInvalid);
    }

    RunResult r;
    try {
        if (command == "simulate") r = run_simulate(sc, sys);
        else if (command == "measure") r = run_measure(sc, sys, stored);
        else if (command == "presim") r = run_presim(sc, sys);
        else r = run_initcircuit(sc);
    } catch (const Error &e) {
        return report(e, e.kind() == ErrorKind::validation ? kInvalid : kNumerical);
    }

    const auto dir = output_dir(f, sc);
    r.manifest["files"] = r.files.names();
    r.files.put_json("manifest.json", r.manifest);
    try {
        r.files.write(dir);
    } catch (const Error &e) {
        return report(e, kInvalid);
    }
    for (const auto &line : r.summary) std::cout << line << "\n";
    std::cout << "wrote " << r.files.names().size() << " files to " << dir.string() << "\n";
    return kOk;
}

int run_verify(const std::string &suite) {
    for (const auto &s : qwave::verify::suites()) {
        if (suite != s.name) continue;
        try {
            return qwave::print_checks(std::cout, s.name, s.run()) ? kOk : kNumerical;
        } catch (const qwave::Error &e) {
            return report(e, kNumerical);
        }
    }
    std::cerr << "qwave: unknown suite '" << suite << "' (symmetry, conservation, estimator, initcircuit, sources)\n";
    return kInvalid;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Wave simulation on an emulated quantum register"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&f](CLI::App *sub) {
        sub->add_option("--scenario", f.scenario, "scenario JSON file")->required();
        sub->add_option("--out", f.out, "output directory (default: scenario 'output', $QWAVE_OUT_DIR, ./qwave_out)");
        sub->add_option("--seed", f.seed, "estimator seed");
        sub->add_option("--shots", f.shots, "shots per Pauli string; switches the estimator to shot mode");
    };
    auto *simulate = app.add_subcommand("simulate", "evolve the scenario and write snapshots, energies and measurements");
    auto *measure = app.add_subcommand("measure", "evaluate the scenario's measurements at its end time");
    auto *presim = app.add_subcommand("presim", "pre-simulate the scenario's sources");
    auto *init = app.add_subcommand("initcircuit", "build and check the polar initialization circuit");
    for (auto *s : {simulate, measure, presim, init}) add_common(s);
    measure->add_option("--state", f.state, "measure a stored register (state.csv with a state.json sidecar)");
    auto *verify = app.add_subcommand("verify", "run a property suite");
    verify->add_option("suite", f.suite, "symmetry | conservation | estimator | initcircuit | sources")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    if (*verify) return run_verify(f.suite);
    for (auto *s : {simulate, measure, presim, init})
        if (*s) return run_scenario_command(s->get_name(), f);
    return kInvalid;
}
