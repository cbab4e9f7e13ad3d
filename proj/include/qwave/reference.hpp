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
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwave/encoding.hpp"
#include "qwave/error.hpp"
#include "qwave/format.hpp"
#include "qwave/operators.hpp"

namespace qwave {

/// s(t) in B dw/dt = A w + s(t); an empty function means no forcing.
using SourceSampler = std::function<Eigen::VectorXd(double)>;

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> snapshots;
    /// (w|w)_B at each recorded time.
    std::vector<double> energy;
    /// Staggered energy conserved exactly by the scheme when unforced.
    std::vector<double> shadow_energy;
    double dt = 0.0;
    std::size_t steps = 0;

    const Eigen::VectorXd &final_state() const { return snapshots.back(); }

    double relative_shadow_drift() const {
        double e0 = shadow_energy.front(), worst = 0.0;
        if (e0 == 0.0) return 0.0;
        for (double e : shadow_energy) worst = std::max(worst, std::abs(e - e0) / e0);
        return worst;
    }

    void write_csv(std::ostream &out) const {
        out << "time,dof,value\n";
        for (std::size_t s = 0; s < times.size(); ++s)
            for (Eigen::Index k = 0; k < snapshots[s].size(); ++k)
                out << format_double(times[s]) << ',' << k << ',' << format_double(snapshots[s][k]) << '\n';
    }

    void write_energy_csv(std::ostream &out) const {
        out << "time,energy,shadow_energy\n";
        for (std::size_t s = 0; s < times.size(); ++s)
            out << format_double(times[s]) << ',' << format_double(energy[s]) << ','
                << format_double(shadow_energy[s]) << '\n';
    }
};

struct LeapfrogOptions {
    double cfl_factor = 0.9;
    /// Record every n-th step (the first and last steps are always recorded).
    std::size_t record_every = 0;
};

/// Largest admissible step Δ_min / (c_max √D).
inline double cfl_limit(const OperatorPair &pair) { return pair.stable_dt(); }

inline double suggested_dt(const OperatorPair &pair, double factor = 0.9) { return factor * cfl_limit(pair); }

/// Kick-drift-kick leapfrog: the secondary block (velocity or H) is kicked
/// at half steps, the primary block (pressure or E) drifts at full steps.
inline Trajectory leapfrog_evolve(const OperatorPair &pair, const Eigen::VectorXd &w0, const SourceSampler &source,
                                  double dt, double T, const LeapfrogOptions &opts = {}) {
    const auto n = static_cast<Eigen::Index>(pair.size());
    require(w0.size() == n, ErrorKind::dimension, "initial field size does not match the system");
    require(w0.allFinite(), ErrorKind::validation, "initial field contains non-finite values");
    require(std::isfinite(dt) && dt > 0.0, ErrorKind::validation, "time step must be positive");
    require(std::isfinite(T) && T >= 0.0, ErrorKind::validation, "end time must be non-negative");
    require(pair.B.is_diagonal(), ErrorKind::validation, "leapfrog needs a diagonal B");
    const double limit = cfl_limit(pair);
    if (dt > limit * (1.0 + 1e-12)) {
        fail(ErrorKind::cfl, "time step " + format_double(dt) + " exceeds the stability limit " + format_double(limit) +
                                 "; use dt <= " + format_double(opts.cfl_factor * limit));
    }

    std::vector<char> primary(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) primary[static_cast<std::size_t>(k)] = pair.is_primary(static_cast<std::size_t>(k));
    std::vector<Eigen::Triplet<double>> to_primary, to_secondary;
    for (const auto &e : pair.A.entries()) {
        const bool pr = primary[e.row], pc = primary[e.col];
        require(pr != pc, ErrorKind::validation, "leapfrog needs A to couple primary and secondary blocks only");
        (pr ? to_primary : to_secondary).emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), e.value);
    }
    RealSparse Ap(n, n), As(n, n);
    Ap.setFromTriplets(to_primary.begin(), to_primary.end());
    As.setFromTriplets(to_secondary.begin(), to_secondary.end());
    const Eigen::VectorXd binv = pair.B.diagonal_values().cwiseInverse();
    Eigen::VectorXd mask_p(n), mask_s(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        mask_p[k] = primary[static_cast<std::size_t>(k)] ? 1.0 : 0.0;
        mask_s[k] = 1.0 - mask_p[k];
    }
    const Eigen::VectorXd bdiag = pair.B.diagonal_values();

    Trajectory tr;
    tr.steps = T == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    tr.dt = tr.steps == 0 ? 0.0 : T / static_cast<double>(tr.steps);
    const double h = tr.dt;

    auto forcing = [&](double t, const Eigen::VectorXd &mask) -> Eigen::VectorXd {
        if (!source) return Eigen::VectorXd::Zero(n);
        Eigen::VectorXd s = source(t);
        require(s.size() == n, ErrorKind::dimension, "source sampler returned the wrong size");
        return s.cwiseProduct(mask);
    };
    auto record = [&](double t, const Eigen::VectorXd &w) {
        Eigen::VectorXd kick = binv.cwiseProduct(As * w);
        double e = w.dot(bdiag.cwiseProduct(w));
        tr.times.push_back(t);
        tr.snapshots.push_back(w);
        tr.energy.push_back(e);
        tr.shadow_energy.push_back(e - 0.25 * h * h * kick.dot(bdiag.cwiseProduct(kick)));
    };

    Eigen::VectorXd w = w0;
    record(0.0, w);
    for (std::size_t s = 0; s < tr.steps; ++s) {
        const double t = static_cast<double>(s) * h;
        w += 0.5 * h * binv.cwiseProduct(As * w + forcing(t, mask_s));
        w += h * binv.cwiseProduct(Ap * w + forcing(t + 0.5 * h, mask_p));
        w += 0.5 * h * binv.cwiseProduct(As * w + forcing(t + h, mask_s));
        require(w.allFinite(), ErrorKind::cfl, "leapfrog diverged");
        const bool last = s + 1 == tr.steps;
        if (last || (opts.record_every > 0 && (s + 1) % opts.record_every == 0))
            record(last ? T : static_cast<double>(s + 1) * h, w);
    }
    return tr;
}

/// Forcing term pattern · f(t) with f supported on [t_start, t_end].
struct SeparableSource {
    Eigen::VectorXd pattern;
    std::function<double(double)> f;
    double t_start = 0.0;
    double t_end = 0.0;
};

/// n-point Gauss–Legendre nodes and weights on [−1, 1] (Golub–Welsch).
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Eigen::VectorXd w = 2.0 * es.eigenvectors().row(0).transpose().array().square();
    return {es.eigenvalues(), w};
}

/// Exact-in-time solver for B dw/dt = A w + Σ pattern_j f_j(t) in the
/// eigenbasis of H. Time integrals use composite Gauss quadrature with panels
/// fine enough for both the spectrum and `time_scale`.
class DuhamelSolver {
   public:
    explicit DuhamelSolver(const OperatorPair &pair)
        : n_(static_cast<Eigen::Index>(pair.size())),
          h_(build_hamiltonian(pair)),
          root_(b_sqrt_diagonal(pair.B)) {}

    Eigen::VectorXd solve(const Eigen::VectorXd &w0, const std::vector<SeparableSource> &sources, double t0, double t1,
                          double time_scale = 0.0) const {
        require(w0.size() == n_, ErrorKind::dimension, "initial field size does not match the system");
        require(t1 >= t0, ErrorKind::validation, "end time precedes start time");
        const auto &sp = h_.spectral();
        const Eigen::VectorXd &lam = sp.eigenvalues;
        const double lam_max = lam.size() ? lam.cwiseAbs().maxCoeff() : 0.0;

        Eigen::VectorXcd c = sp.eigenvectors.adjoint() * root_.cwiseProduct(w0).cast<cplx>();
        for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -lam[k] * (t1 - t0));

        const auto [xg, wg] = gauss_legendre(8);
        for (const auto &src : sources) {
            require(src.pattern.size() == n_, ErrorKind::dimension, "source pattern size does not match the system");
            const double a = std::max(t0, src.t_start), b = std::min(t1, src.t_end);
            if (b <= a) continue;
            const Eigen::VectorXcd g = sp.eigenvectors.adjoint() * src.pattern.cwiseQuotient(root_).cast<cplx>();
            double per = 0.5 / std::max(lam_max, 1e-300);
            if (time_scale > 0.0) per = std::min(per, 0.25 * time_scale);
            const auto panels = static_cast<std::size_t>(std::ceil((b - a) / per)) + 1;
            const double hp = (b - a) / static_cast<double>(panels);
            Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(c.size());
            for (std::size_t p = 0; p < panels; ++p) {
                const double lo = a + static_cast<double>(p) * hp;
                for (Eigen::Index q = 0; q < xg.size(); ++q) {
                    const double tau = lo + 0.5 * hp * (xg[q] + 1.0);
                    const double weight = 0.5 * hp * wg[q] * src.f(tau);
                    if (weight == 0.0) continue;
                    for (Eigen::Index k = 0; k < c.size(); ++k)
                        acc[k] += weight * std::polar(1.0, -lam[k] * (t1 - tau));
                }
            }
            c += acc.cwiseProduct(g);
        }
        Eigen::VectorXcd wq = sp.eigenvectors * c;
        return wq.real().cwiseQuotient(root_);
    }

    const Hamiltonian &hamiltonian() const { return h_; }

   private:
    Eigen::Index n_;
    Hamiltonian h_;
    Eigen::VectorXd root_;
};

inline Eigen::VectorXd duhamel_evolve(const OperatorPair &pair, const Eigen::VectorXd &w0,
                                      const std::vector<SeparableSource> &sources, double t0, double t1,
                                      double time_scale = 0.0) {
    return DuhamelSolver(pair).solve(w0, sources, t0, t1, time_scale);
}

}  // namespace qwave
