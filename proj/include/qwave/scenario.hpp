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
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwave/constraints.hpp"
#include "qwave/evolution.hpp"
#include "qwave/initcircuit.hpp"
#include "qwave/io.hpp"
#include "qwave/measurement.hpp"
#include "qwave/operators.hpp"
#include "qwave/pipeline.hpp"
#include "qwave/sources.hpp"

namespace qwave {

// Scenario files are JSON. Unknown keys are rejected so that typos surface
// as validation errors instead of silently falling back to defaults. The
// schema is documented in README.md.

struct MaterialRegion {
    Interval x{-INFINITY, INFINITY};
    Interval y{-INFINITY, INFINITY};
    double a = 1.0;  // density or permittivity
    double b = 1.0;  // speed or permeability
};

struct MaterialSpec {
    std::string kind = "constant";  // constant | piecewise | tabulated
    double a = 1.0;
    double b = 1.0;
    std::vector<MaterialRegion> regions;
    // tabulated: coordinates and the two coefficient columns
    std::vector<Point> sample_points;
    std::vector<double> sample_a;
    std::vector<double> sample_b;
};

struct BoundarySpec {
    Side side = Side::left;
    bool dirichlet = false;
    std::vector<double> times;
    /// One row per time sample; one column, or one per boundary DOF.
    std::vector<std::vector<double>> values;
};

struct InitialSpec {
    std::string kind = "zero";  // zero | gaussian
    Point center;
    double width = 0.05;
    double amplitude = 1.0;
    /// 1D only: +1 right-going, −1 left-going, 0 standing.
    double direction = 0.0;
};

struct SourceSpec {
    Point location;
    std::vector<double> polarization{1.0};
    Wavelet wavelet;
    Json wavelet_json;
};

struct BallSpec {
    double radius = 0.0;
    double density = 1.0;
    double speed = 1.0;
    GreensOptions options;
};

struct RegionSpec {
    std::optional<Interval> x;
    std::optional<Interval> y;
    std::string fields = "all";  // all | primary | secondary
};

struct MeasurementSpec {
    std::string name;
    RegionSpec region;
    bool physical = false;
    /// Optional observed field (full-grid DOF order) for an l2 misfit.
    std::optional<Eigen::VectorXd> data;
};

struct ReferenceSpec {
    bool leapfrog = false;
    bool monolithic = false;
    double cfl_factor = 0.9;
};

struct InitCircuitSpec {
    PolarGridSpec grid;
    std::string field = "radial";  // radial | azimuthal | tabulated
    double ring_radius = 0.0;
    double ring_width = 1.0;
    double amplitude = 1.0;
    std::vector<double> profile_r;
    std::vector<double> profile_radial;
    std::vector<double> profile_azimuthal;
};

struct Scenario {
    std::string path;
    EquationFamily family = EquationFamily::acoustic;
    std::size_t dimension = 1;
    std::vector<Interval> bounds;
    std::vector<std::size_t> nodes;
    MaterialSpec material;
    std::vector<BoundarySpec> boundaries;
    InitialSpec initial;
    std::vector<SourceSpec> sources;
    std::optional<BallSpec> ball;
    double end_time = 0.0;
    std::vector<double> snapshots;
    EvolutionConfig evolution;
    std::vector<MeasurementSpec> measurements;
    EstimatorConfig estimator;
    ReferenceSpec reference;
    std::optional<InitCircuitSpec> initcircuit;
    std::string output;
};

namespace detail {

/// JSON node plus its pointer path for error messages.
class Node {
   public:
    Node(const Json &j, std::string path, std::string file) : j_(&j), path_(std::move(path)), file_(std::move(file)) {}

    [[noreturn]] void error(const std::string &msg) const {
        fail(ErrorKind::validation, file_ + ": " + (path_.empty() ? "/" : path_) + ": " + msg);
    }
    void check(bool ok, const std::string &msg) const {
        if (!ok) error(msg);
    }
    const std::string &path() const { return path_; }
    const std::string &file() const { return file_; }
    const Json &raw() const { return *j_; }

    bool has(const std::string &key) const { return j_->is_object() && j_->contains(key); }

    Node at(const std::string &key) const {
        check(j_->is_object(), "expected an object");
        check(j_->contains(key), "missing key '" + key + "'");
        return Node(j_->at(key), path_ + "/" + key, file_);
    }
    Node at(std::size_t i) const {
        check(j_->is_array() && i < j_->size(), "index " + std::to_string(i) + " out of range");
        return Node(j_->at(i), path_ + "/" + std::to_string(i), file_);
    }
    std::size_t size() const {
        check(j_->is_array(), "expected an array");
        return j_->size();
    }

    void allow(std::initializer_list<const char *> keys) const {
        check(j_->is_object(), "expected an object");
        std::set<std::string> ok(keys.begin(), keys.end());
        for (const auto &[k, v] : j_->items()) {
            if (!ok.count(k)) Node(v, path_ + "/" + k, file_).error("unknown key");
        }
    }

    double number() const {
        check(j_->is_number(), "expected a number");
        double v = j_->get<double>();
        check(std::isfinite(v), "expected a finite number");
        return v;
    }
    double positive() const {
        double v = number();
        check(v > 0.0, "must be positive");
        return v;
    }
    std::size_t count() const {
        check(j_->is_number_integer() && j_->get<long long>() >= 0, "expected a non-negative integer");
        return j_->get<std::size_t>();
    }
    std::string text() const {
        check(j_->is_string(), "expected a string");
        return j_->get<std::string>();
    }
    bool flag() const {
        check(j_->is_boolean(), "expected true or false");
        return j_->get<bool>();
    }
    std::vector<double> numbers() const {
        std::vector<double> v;
        for (std::size_t i = 0; i < size(); ++i) v.push_back(at(i).number());
        return v;
    }
    Interval interval() const {
        auto v = numbers();
        check(v.size() == 2 && v[1] > v[0], "expected [lo, hi] with lo < hi");
        return {v[0], v[1]};
    }
    Point point(std::size_t dimension) const {
        auto v = numbers();
        check(v.size() == dimension, "expected " + std::to_string(dimension) + " coordinates");
        return {v[0], dimension == 2 ? v[1] : 0.0};
    }

    template <class T>
    T number_or(const std::string &key, T fallback) const {
        return has(key) ? static_cast<T>(at(key).number()) : fallback;
    }

    std::string resolve(const std::string &relative) const {
        std::filesystem::path p(relative);
        if (p.is_relative()) p = std::filesystem::path(file_).parent_path() / p;
        return p.lexically_normal().string();
    }

   private:
    const Json *j_;
    std::string path_;
    std::string file_;
};

inline CsvTable csv_at(const Node &n) {
    const std::string path = n.resolve(n.text());
    if (!std::filesystem::exists(path)) n.error("file not found: " + path);
    try {
        return read_csv(path);
    } catch (const Error &e) {
        n.error(e.message());
    }
}

inline std::size_t column(const Node &n, const CsvTable &t, const std::string &name) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == name) return i;
    n.error("CSV lacks column '" + name + "'");
}

inline Side parse_side(const Node &n) {
    const std::string s = n.text();
    if (s == "left") return Side::left;
    if (s == "right") return Side::right;
    if (s == "bottom") return Side::bottom;
    if (s == "top") return Side::top;
    n.error("unknown side '" + s + "' (left, right, bottom, top)");
}

inline MaterialSpec parse_material(const Node &n, const Scenario &sc) {
    const bool acoustic = sc.family == EquationFamily::acoustic;
    const char *ka = acoustic ? "density" : "permittivity";
    const char *kb = acoustic ? "speed" : "permeability";
    MaterialSpec m;
    m.kind = n.at("kind").text();
    if (m.kind == "constant") {
        n.allow({"kind", ka, kb});
        m.a = n.at(ka).positive();
        m.b = n.at(kb).positive();
    } else if (m.kind == "piecewise") {
        n.allow({"kind", ka, kb, "regions"});
        m.a = n.at(ka).positive();
        m.b = n.at(kb).positive();
        Node regions = n.at("regions");
        for (std::size_t i = 0; i < regions.size(); ++i) {
            Node r = regions.at(i);
            r.allow({"x", "y", ka, kb});
            MaterialRegion reg;
            if (r.has("x")) reg.x = r.at("x").interval();
            if (r.has("y")) {
                r.check(sc.dimension == 2, "'y' needs a 2D grid");
                reg.y = r.at("y").interval();
            }
            reg.a = r.at(ka).positive();
            reg.b = r.at(kb).positive();
            m.regions.push_back(reg);
        }
    } else if (m.kind == "tabulated") {
        n.allow({"kind", "file"});
        Node f = n.at("file");
        CsvTable t = csv_at(f);
        const std::size_t cx = column(f, t, "x");
        const std::size_t cy = sc.dimension == 2 ? column(f, t, "y") : 0;
        const std::size_t ca = column(f, t, ka), cb = column(f, t, kb);
        f.check(!t.rows.empty(), "material table is empty");
        for (const auto &row : t.rows) {
            m.sample_points.push_back({row[cx], sc.dimension == 2 ? row[cy] : 0.0});
            f.check(row[ca] > 0.0 && row[cb] > 0.0, "material coefficients must be positive");
            m.sample_a.push_back(row[ca]);
            m.sample_b.push_back(row[cb]);
        }
    } else {
        n.at("kind").error("unknown material kind '" + m.kind + "' (constant, piecewise, tabulated)");
    }
    return m;
}

inline Wavelet parse_wavelet(const Node &n) {
    const std::string kind = n.at("kind").text();
    if (kind == "ricker") {
        n.allow({"kind", "peak_frequency", "delay", "amplitude"});
        std::optional<double> delay;
        if (n.has("delay")) delay = n.at("delay").number();
        return ricker_wavelet(n.at("peak_frequency").positive(), delay, n.number_or("amplitude", 1.0));
    }
    if (kind == "gaussian") {
        n.allow({"kind", "center", "sigma", "amplitude"});
        return gaussian_wavelet(n.at("center").number(), n.at("sigma").positive(), n.number_or("amplitude", 1.0));
    }
    if (kind == "windowed_sine") {
        n.allow({"kind", "start", "duration", "frequency", "amplitude"});
        return windowed_sine(n.number_or("start", 0.0), n.at("duration").positive(), n.at("frequency").positive(),
                             n.number_or("amplitude", 1.0));
    }
    if (kind == "csv") {
        n.allow({"kind", "file"});
        Node f = n.at("file");
        CsvTable t = csv_at(f);
        const std::size_t ct = column(f, t, "time"), cv = column(f, t, "value");
        std::vector<double> times, values;
        for (const auto &row : t.rows) {
            times.push_back(row[ct]);
            values.push_back(row[cv]);
        }
        try {
            return tabulated_wavelet(std::move(times), std::move(values));
        } catch (const Error &e) {
            f.error(e.message());
        }
    }
    n.at("kind").error("unknown wavelet kind '" + kind + "' (ricker, gaussian, windowed_sine, csv)");
}

inline RegionSpec parse_region(const Node &n, const Scenario &sc) {
    n.allow({"x", "y", "fields"});
    RegionSpec r;
    if (n.has("x")) r.x = n.at("x").interval();
    if (n.has("y")) {
        n.check(sc.dimension == 2, "'y' needs a 2D grid");
        r.y = n.at("y").interval();
    }
    if (n.has("fields")) {
        r.fields = n.at("fields").text();
        n.check(r.fields == "all" || r.fields == "primary" || r.fields == "secondary",
                "fields must be all, primary or secondary");
    }
    return r;
}

}  // namespace detail

inline Scenario parse_scenario(const Json &root, const std::string &file) {
    using detail::Node;
    Node n(root, "", file);
    n.allow({"family", "grid", "material", "boundaries", "initial", "sources", "ball", "times", "evolution",
             "measurements", "estimator", "reference", "initcircuit", "output", "description"});
    Scenario sc;
    sc.path = file;

    if (n.has("family")) {
        const std::string f = n.at("family").text();
        if (f == "acoustic") sc.family = EquationFamily::acoustic;
        else if (f == "maxwell1d") sc.family = EquationFamily::maxwell1d;
        else n.at("family").error("unknown family '" + f + "' (acoustic, maxwell1d)");
    }

    Node g = n.at("grid");
    g.allow({"dimension", "bounds", "nodes"});
    sc.dimension = g.at("dimension").count();
    g.at("dimension").check(sc.dimension == 1 || sc.dimension == 2, "dimension must be 1 or 2");
    g.check(sc.family == EquationFamily::acoustic || sc.dimension == 1, "maxwell1d needs a 1D grid");
    Node gb = g.at("bounds"), gn = g.at("nodes");
    gb.check(gb.size() == sc.dimension, "need one [lo, hi] per axis");
    gn.check(gn.size() == sc.dimension, "need one node count per axis");
    for (std::size_t a = 0; a < sc.dimension; ++a) {
        sc.bounds.push_back(gb.at(a).interval());
        sc.nodes.push_back(gn.at(a).count());
        gn.at(a).check(sc.nodes.back() >= 2, "node count must be at least 2");
    }

    sc.material = detail::parse_material(n.at("material"), sc);

    if (n.has("boundaries")) {
        Node bs = n.at("boundaries");
        std::set<int> seen;
        for (std::size_t i = 0; i < bs.size(); ++i) {
            Node b = bs.at(i);
            b.allow({"side", "kind", "values"});
            BoundarySpec spec;
            spec.side = detail::parse_side(b.at("side"));
            b.at("side").check(sc.dimension == 2 || spec.side == Side::left || spec.side == Side::right,
                               "1D grids only have left and right sides");
            b.check(seen.insert(static_cast<int>(spec.side)).second, "side listed twice");
            const std::string kind = b.at("kind").text();
            b.at("kind").check(kind == "dirichlet" || kind == "neumann", "kind must be dirichlet or neumann");
            spec.dirichlet = kind == "dirichlet";
            if (b.has("values")) {
                b.check(spec.dirichlet, "boundary values are supported for dirichlet sides only");
                Node f = b.at("values");
                CsvTable t = detail::csv_at(f);
                f.check(t.header.size() >= 2 && t.header[0] == "time", "expected columns time,value...");
                f.check(t.rows.size() >= 2, "need at least two time samples");
                for (const auto &row : t.rows) {
                    spec.times.push_back(row[0]);
                    spec.values.emplace_back(row.begin() + 1, row.end());
                }
            }
            sc.boundaries.push_back(std::move(spec));
        }
    }

    if (n.has("initial")) {
        Node i = n.at("initial");
        i.allow({"kind", "center", "width", "amplitude", "direction"});
        sc.initial.kind = i.at("kind").text();
        i.at("kind").check(sc.initial.kind == "zero" || sc.initial.kind == "gaussian", "kind must be zero or gaussian");
        if (sc.initial.kind == "gaussian") {
            sc.initial.center = i.at("center").point(sc.dimension);
            sc.initial.width = i.at("width").positive();
            sc.initial.amplitude = i.number_or("amplitude", 1.0);
            if (i.has("direction")) {
                i.check(sc.dimension == 1, "direction needs a 1D grid");
                sc.initial.direction = i.at("direction").number();
                i.at("direction").check(sc.initial.direction == 1.0 || sc.initial.direction == -1.0 ||
                                            sc.initial.direction == 0.0,
                                        "direction must be -1, 0 or 1");
            }
        }
    }

    if (n.has("sources")) {
        Node ss = n.at("sources");
        for (std::size_t i = 0; i < ss.size(); ++i) {
            Node s = ss.at(i);
            s.allow({"location", "polarization", "wavelet"});
            SourceSpec spec;
            spec.location = s.at("location").point(sc.dimension);
            if (s.has("polarization")) {
                spec.polarization = s.at("polarization").numbers();
                s.at("polarization").check(!spec.polarization.empty() && spec.polarization.size() <= 3,
                                           "polarization needs 1 to 3 components");
            }
            spec.wavelet = detail::parse_wavelet(s.at("wavelet"));
            spec.wavelet_json = s.at("wavelet").raw();
            s.at("wavelet").check(spec.wavelet.t_start >= 0.0, "source starts before t = 0");
            sc.sources.push_back(std::move(spec));
        }
    }

    if (n.has("ball")) {
        Node b = n.at("ball");
        b.allow({"radius", "density", "speed", "windows", "steepness", "margin_cells", "tail_tolerance",
                 "leak_tolerance"});
        b.check(sc.family == EquationFamily::acoustic, "source balls need the acoustic family");
        BallSpec ball;
        ball.radius = b.at("radius").positive();
        ball.density = b.at("density").positive();
        ball.speed = b.at("speed").positive();
        if (b.has("windows")) ball.options.windows = b.at("windows").count();
        if (b.has("steepness")) ball.options.steepness = b.at("steepness").positive();
        ball.options.margin_cells = b.number_or("margin_cells", ball.options.margin_cells);
        ball.options.tail_tolerance = b.number_or("tail_tolerance", ball.options.tail_tolerance);
        ball.options.leak_tolerance = b.number_or("leak_tolerance", ball.options.leak_tolerance);
        sc.ball = ball;
    }

    Node t = n.at("times");
    t.allow({"end", "snapshots"});
    sc.end_time = t.at("end").number();
    t.at("end").check(sc.end_time >= 0.0, "end time must be non-negative");
    if (t.has("snapshots")) {
        sc.snapshots = t.at("snapshots").numbers();
        for (std::size_t i = 0; i < sc.snapshots.size(); ++i) {
            t.at("snapshots").at(i).check(sc.snapshots[i] >= 0.0 && sc.snapshots[i] <= sc.end_time,
                                          "snapshot time outside [0, end]");
            if (i > 0) t.at("snapshots").at(i).check(sc.snapshots[i] > sc.snapshots[i - 1], "snapshot times must increase");
        }
    }
    if (sc.snapshots.empty() || sc.snapshots.back() != sc.end_time) sc.snapshots.push_back(sc.end_time);

    if (n.has("evolution")) {
        Node e = n.at("evolution");
        e.allow({"method", "tolerance", "dense_cutoff", "krylov_dimension"});
        if (e.has("method")) {
            try {
                sc.evolution.method = parse_evolution_method(e.at("method").text());
            } catch (const Error &err) {
                e.at("method").error(err.message());
            }
        }
        sc.evolution.tolerance = e.number_or("tolerance", sc.evolution.tolerance);
        if (e.has("dense_cutoff")) sc.evolution.dense_cutoff = e.at("dense_cutoff").count();
        if (e.has("krylov_dimension")) sc.evolution.krylov_dimension = e.at("krylov_dimension").count();
        try {
            sc.evolution.validate();
        } catch (const Error &err) {
            e.error(err.message());
        }
    }

    if (n.has("measurements")) {
        Node ms = n.at("measurements");
        std::set<std::string> names;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            Node m = ms.at(i);
            m.allow({"name", "region", "weighting", "data"});
            MeasurementSpec spec;
            spec.name = m.at("name").text();
            m.at("name").check(!spec.name.empty() && spec.name.find_first_of("/\\") == std::string::npos,
                               "name must be non-empty and free of path separators");
            m.at("name").check(names.insert(spec.name).second, "duplicate measurement name");
            spec.region = detail::parse_region(m.at("region"), sc);
            if (m.has("weighting")) {
                const std::string w = m.at("weighting").text();
                m.at("weighting").check(w == "encoded" || w == "physical", "weighting must be encoded or physical");
                spec.physical = w == "physical";
            }
            if (m.has("data")) {
                Node f = m.at("data");
                CsvTable tab = detail::csv_at(f);
                const std::size_t cd = detail::column(f, tab, "dof"), cv = detail::column(f, tab, "value");
                // the DOF range is checked once the grid exists
                std::vector<std::pair<std::size_t, double>> entries;
                for (const auto &row : tab.rows) {
                    f.check(row[cd] >= 0.0 && row[cd] == std::floor(row[cd]), "dof must be a non-negative integer");
                    entries.emplace_back(static_cast<std::size_t>(row[cd]), row[cv]);
                }
                std::size_t hi = 0;
                for (auto [k, v] : entries) hi = std::max(hi, k + 1);
                Eigen::VectorXd data = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(hi));
                for (auto [k, v] : entries) data[static_cast<Eigen::Index>(k)] = v;
                spec.data = data;
            }
            sc.measurements.push_back(std::move(spec));
        }
    }

    if (n.has("estimator")) {
        Node e = n.at("estimator");
        e.allow({"mode", "shots", "seed", "confidence"});
        if (e.has("mode")) {
            const std::string mode = e.at("mode").text();
            e.at("mode").check(mode == "exact" || mode == "shots", "mode must be exact or shots");
            sc.estimator.mode = mode == "shots" ? EstimatorMode::shots : EstimatorMode::exact;
        }
        if (e.has("shots")) sc.estimator.shots = e.at("shots").count();
        if (e.has("seed")) sc.estimator.seed = e.at("seed").count();
        if (e.has("confidence")) sc.estimator.report_confidence = e.at("confidence").flag();
    }

    if (n.has("reference")) {
        Node r = n.at("reference");
        r.allow({"leapfrog", "monolithic", "cfl_factor"});
        if (r.has("leapfrog")) sc.reference.leapfrog = r.at("leapfrog").flag();
        if (r.has("monolithic")) sc.reference.monolithic = r.at("monolithic").flag();
        sc.reference.cfl_factor = r.number_or("cfl_factor", sc.reference.cfl_factor);
        r.check(sc.reference.cfl_factor > 0.0 && sc.reference.cfl_factor <= 1.0, "cfl_factor must lie in (0, 1]");
    }

    if (n.has("initcircuit")) {
        Node c = n.at("initcircuit");
        c.allow({"components", "radial", "angular", "center", "radial_step", "field", "ring_radius", "ring_width",
                 "amplitude", "profile"});
        InitCircuitSpec ic;
        if (c.has("components")) ic.grid.components = c.at("components").count();
        ic.grid.radial = c.at("radial").count();
        ic.grid.angular = c.at("angular").count();
        ic.grid.center = c.has("center") ? c.at("center").point(2) : Point{};
        ic.grid.radial_step = c.at("radial_step").positive();
        try {
            ic.grid.validate();
        } catch (const Error &err) {
            c.error(err.message());
        }
        if (c.has("field")) ic.field = c.at("field").text();
        c.check(ic.field == "radial" || ic.field == "azimuthal" || ic.field == "tabulated",
                "field must be radial, azimuthal or tabulated");
        if (ic.field == "tabulated") {
            Node f = c.at("profile");
            CsvTable tab = detail::csv_at(f);
            const std::size_t cr = detail::column(f, tab, "r"), ca = detail::column(f, tab, "radial"),
                              cz = detail::column(f, tab, "azimuthal");
            for (const auto &row : tab.rows) {
                if (!ic.profile_r.empty()) f.check(row[cr] > ic.profile_r.back(), "radii must increase");
                ic.profile_r.push_back(row[cr]);
                ic.profile_radial.push_back(row[ca]);
                ic.profile_azimuthal.push_back(row[cz]);
            }
            f.check(ic.profile_r.size() >= 2, "profile needs at least two samples");
        } else {
            ic.ring_radius = c.number_or("ring_radius", 0.5 * ic.grid.radius(ic.grid.radial - 1));
            ic.ring_width = c.has("ring_width") ? c.at("ring_width").positive() : ic.grid.radius(ic.grid.radial - 1) / 4;
            ic.amplitude = c.number_or("amplitude", 1.0);
        }
        sc.initcircuit = ic;
    }

    if (n.has("output")) sc.output = n.at("output").text();
    return sc;
}

inline Scenario load_scenario(const std::string &file) {
    require(std::filesystem::exists(file), ErrorKind::validation, "scenario file not found: " + file);
    return parse_scenario(read_json(file), file);
}

// ---------------------------------------------------------------------------
// Building the numerical objects

inline MaterialModel build_material(const Scenario &sc, const StaggeredGrid &grid) {
    const MaterialSpec &m = sc.material;
    std::function<std::pair<double, double>(Point)> at;
    if (m.kind == "constant") {
        at = [&m](Point) { return std::make_pair(m.a, m.b); };
    } else if (m.kind == "piecewise") {
        at = [&m](Point p) {
            auto v = std::make_pair(m.a, m.b);
            for (const auto &r : m.regions)
                if (p.x >= r.x.lo && p.x <= r.x.hi && p.y >= r.y.lo && p.y <= r.y.hi) v = {r.a, r.b};
            return v;
        };
    } else {
        // nearest tabulated sample
        at = [&m](Point p) {
            std::size_t best = 0;
            double d = INFINITY;
            for (std::size_t k = 0; k < m.sample_points.size(); ++k) {
                double dk = std::hypot(m.sample_points[k].x - p.x, m.sample_points[k].y - p.y);
                if (dk < d) d = dk, best = k;
            }
            return std::make_pair(m.sample_a[best], m.sample_b[best]);
        };
    }
    auto first = [at](Point p) { return at(p).first; };
    auto second = [at](Point p) { return at(p).second; };
    return sc.family == EquationFamily::acoustic ? sample_acoustic(grid, first, second)
                                                 : sample_maxwell1d(grid, first, second);
}

/// Everything a run needs, assembled and validated without time stepping.
struct ScenarioSystem {
    StaggeredGrid grid;
    OperatorPair full;
    std::optional<ReducedSystem> reduced;
    std::vector<PointSource> sources;
    Eigen::VectorXd w0;
    std::vector<SubspaceProjector> masks;
    std::vector<std::optional<Eigen::VectorXd>> data;
    double t_sync = 0.0;

    const OperatorPair &pair() const { return reduced ? reduced->system : full; }

    Eigen::VectorXd expand(const Eigen::VectorXd &local, double t) const {
        return reduced ? reduced->expand(local, t) : local;
    }
};

inline SubspaceProjector region_mask(const OperatorPair &pair, const RegionSpec &r) {
    std::vector<std::uint8_t> mask(pair.size(), 0);
    for (std::size_t k = 0; k < pair.size(); ++k) {
        const bool primary = pair.is_primary(k);
        if (r.fields == "primary" && !primary) continue;
        if (r.fields == "secondary" && primary) continue;
        Point p = pair.grid.dof_point(pair.full_index[k]);
        if (r.x && (p.x < r.x->lo || p.x > r.x->hi)) continue;
        if (r.y && (p.y < r.y->lo || p.y > r.y->hi)) continue;
        mask[k] = 1;
    }
    return SubspaceProjector(std::move(mask));
}

inline ScenarioSystem build_system(const Scenario &sc) {
    auto ctx = [&sc](const std::string &where, const Error &e) {
        return Error(e.kind(), sc.path + ": " + where + ": " + e.message());
    };
    ScenarioSystem sys;
    try {
        sys.grid = build_grid(sc.dimension, sc.bounds, sc.nodes);
        sys.full = assemble_operator_pair(sys.grid, build_material(sc, sys.grid));
    } catch (const Error &e) {
        throw ctx("/grid", e);
    }
    const StaggeredGrid &g = sys.grid;

    std::vector<std::size_t> constrained;
    std::vector<double> times;
    std::vector<std::pair<std::vector<std::size_t>, const BoundarySpec *>> sides;
    for (const auto &b : sc.boundaries) {
        if (!b.dirichlet) continue;
        auto dofs = boundary_pressure_dofs(g, b.side);
        sides.emplace_back(dofs, &b);
        constrained.insert(constrained.end(), dofs.begin(), dofs.end());
        if (!b.times.empty()) {
            require(times.empty() || times == b.times, ErrorKind::validation,
                    sc.path + ": /boundaries: all boundary value files must share the same time samples");
            times = b.times;
        }
    }
    if (!constrained.empty()) {
        ConstraintSet cs = dirichlet_constraints(g, constrained);
        if (!times.empty()) {
            cs.times = times;
            cs.b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cs.size()), static_cast<Eigen::Index>(times.size()));
            for (const auto &[dofs, spec] : sides) {
                if (spec->times.empty()) continue;
                for (std::size_t s = 0; s < times.size(); ++s) {
                    const auto &row = spec->values[s];
                    require(row.size() == 1 || row.size() == dofs.size(), ErrorKind::validation,
                            sc.path + ": /boundaries: expected 1 or " + std::to_string(dofs.size()) +
                                " value columns");
                    for (std::size_t q = 0; q < dofs.size(); ++q) {
                        auto it = std::lower_bound(cs.constrained.begin(), cs.constrained.end(), dofs[q]);
                        cs.b(it - cs.constrained.begin(), static_cast<Eigen::Index>(s)) = row[row.size() == 1 ? 0 : q];
                    }
                }
            }
        }
        try {
            sys.reduced = reduce_system(sys.full, cs);
        } catch (const Error &e) {
            throw ctx("/boundaries", e);
        }
    }
    const OperatorPair &pair = sys.pair();

    // initial field
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.dof_count()));
    if (sc.initial.kind == "gaussian") {
        require(g.contains(sc.initial.center), ErrorKind::validation, sc.path + ": /initial/center lies outside the grid");
        for (std::size_t k = 0; k < g.pressure_count(); ++k) {
            Point p = g.pressure_point(k);
            const double r2 = std::pow(p.x - sc.initial.center.x, 2) + std::pow(p.y - sc.initial.center.y, 2);
            w[static_cast<Eigen::Index>(k)] = sc.initial.amplitude * std::exp(-0.5 * r2 / std::pow(sc.initial.width, 2));
        }
        if (sc.initial.direction != 0.0) {
            // right-going wave: v = p/(ρc) (acoustic), H = −E·√(ε/μ) (maxwell)
            const auto &mat_b = sys.full.B.diagonal_values();
            for (std::size_t k = 0; k < g.vx_count(); ++k) {
                Point p = g.vx_point(k);
                const double r2 = std::pow(p.x - sc.initial.center.x, 2);
                const double amp = sc.initial.amplitude * std::exp(-0.5 * r2 / std::pow(sc.initial.width, 2));
                const auto kv = static_cast<Eigen::Index>(g.pressure_count() + k);
                const auto ku = static_cast<Eigen::Index>(std::min(k, g.pressure_count() - 1));
                // impedance from the neighbouring coefficients
                const double bu = mat_b[ku], bv = mat_b[kv];
                w[kv] = (sc.family == EquationFamily::acoustic ? 1.0 : -1.0) * sc.initial.direction * amp *
                        std::sqrt(bu / bv);
            }
        }
    }
    sys.w0 = sys.reduced ? sys.reduced->restrict(w) : w;

    for (std::size_t i = 0; i < sc.sources.size(); ++i) {
        const auto &s = sc.sources[i];
        const std::string where = "/sources/" + std::to_string(i);
        require(g.contains(s.location), ErrorKind::validation, sc.path + ": " + where + ": location lies outside the grid");
        PointSource ps;
        ps.location = g.nearest_pressure(s.location);
        ps.polarization = Eigen::Map<const Eigen::VectorXd>(s.polarization.data(), static_cast<Eigen::Index>(s.polarization.size()));
        ps.wavelet = s.wavelet;
        try {
            (void)point_source_pattern(pair, ps);
            if (sc.ball) {
                HomogeneousBall ball{sc.ball->radius, sc.ball->density, sc.ball->speed, sc.ball->options};
                check_ball_homogeneous(pair, g.pressure_point(ps.location), ball);
                detail::require_ball_inside(g, g.pressure_point(ps.location), ball.radius);
                require(!sys.reduced, ErrorKind::validation, "source balls need unconstrained boundaries");
            } else {
                const double radius = pair.max_speed * ps.wavelet.duration() + 2.0 * g.min_spacing();
                detail::require_ball_inside(g, g.pressure_point(ps.location), radius);
            }
        } catch (const Error &e) {
            throw ctx(where, e);
        }
        sys.t_sync = std::max(sys.t_sync, ps.t_end());
        sys.sources.push_back(std::move(ps));
    }
    if (sys.reduced && !sys.reduced->source_times.empty())
        sys.t_sync = std::max(sys.t_sync, sys.reduced->source_times.back());
    if (sys.t_sync > 0.0) {
        require(sc.snapshots.front() >= sys.t_sync, ErrorKind::validation,
                sc.path + ": /times: with sources, snapshots must not precede the last source end time " +
                    format_double(sys.t_sync));
    }

    for (std::size_t i = 0; i < sc.measurements.size(); ++i) {
        const auto &m = sc.measurements[i];
        SubspaceProjector mask = region_mask(pair, m.region);
        require(mask.cardinality() > 0, ErrorKind::validation,
                sc.path + ": /measurements/" + std::to_string(i) + "/region selects no DOFs");
        if (m.data) {
            require(static_cast<std::size_t>(m.data->size()) <= g.dof_count(), ErrorKind::validation,
                    sc.path + ": /measurements/" + std::to_string(i) + "/data: DOF index beyond the grid");
            Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.dof_count()));
            full.head(m.data->size()) = *m.data;
            sys.data.push_back(to_local(pair, full));
        } else {
            sys.data.push_back(std::nullopt);
        }
        sys.masks.push_back(std::move(mask));
    }
    return sys;
}

}  // namespace qwave
