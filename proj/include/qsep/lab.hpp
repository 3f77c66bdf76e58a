// Copyright 2026 The qsep Authors
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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsep/channel.hpp"
#include "qsep/lattice.hpp"
#include "qsep/state.hpp"

namespace qsep {

/// Outcome of comparing a marginal with and without a remote disturbance.
struct NoSignalReport {
    std::string state_id;
    std::string disturbance_id;
    SiteSet measured;
    SiteSet disturbed;
    /// max |rho_A(disturbed) - rho_A(undisturbed)|
    double delta = 0.0;
    bool passed = false;
};

/// Applies `disturbance` and compares the reduced state on `measured` against the undisturbed one.
/// Throws PartitionError if the disturbance touches a measured site.
NoSignalReport no_signaling_check(const DensityOperator& rho, const Channel& disturbance, const SiteSet& measured,
                                  std::string state_id = "state", const Tolerances& tol = {});

/// Seeded batch of random (state, CPTP channel, bipartition) triples.
struct NoSignalSweep {
    std::uint64_t seed = 0;
    std::vector<NoSignalReport> trials;
    double max_delta = 0.0;
    bool all_passed = true;
};

/// Runs `trials` independent checks on min_qubits..max_qubits qubits. Results are identical
/// for any `threads` value.
NoSignalSweep nosignal_sweep(std::size_t trials, std::uint64_t seed, std::size_t min_qubits = 2,
                             std::size_t max_qubits = 4, unsigned threads = 1, const Tolerances& tol = {});

/// Per-site marginal change after each circuit layer.
struct LightconeMap {
    std::size_t n_sites = 0;
    std::size_t layers = 0;
    std::size_t disturb_site = 0;
    /// delta[l][s] for l = 0..layers.
    std::vector<std::vector<double>> delta;
    /// in_cone[l][s] from causal_cone(disturb_site, l).
    std::vector<std::vector<bool>> in_cone;

    double max_out_of_cone() const;
};

/// Compares disturbed-then-evolved against evolved-only runs through the brickwork circuit of h.
LightconeMap lightcone_sweep(const LatticeHamiltonian& h, double dt, std::size_t layers, std::size_t disturb_site,
                             const Channel& disturbance, const DensityOperator& initial);

struct ChshAngles {
    double a0 = 0.0;
    double a1 = 0.0;
    double b0 = 0.0;
    double b1 = 0.0;
};

/// Angles that reach 2 sqrt(2) on Phi+.
inline constexpr ChshAngles kOptimalChshAngles{0.0, 1.5707963267948966, 0.7853981633974483, -0.7853981633974483};

/// Slack on the classical (2) and Tsirelson (2 sqrt 2) bounds.
inline constexpr double kChshTol = 1e-9;

struct ChshResult {
    ChshAngles angles;
    /// correlator[i][j] = E(a_i, b_j)
    std::array<std::array<double, 2>, 2> correlator{};
    double S = 0.0;

    bool correlators_bounded(double tol) const;
    bool within_tsirelson(double tol) const;
    bool within_classical(double tol) const;
};

/// cos(theta) Z + sin(theta) X.
ComplexMatrix spin_observable(double theta);

/// Exact correlators Tr[rho A(a) (x) B(b)] on a two-qubit state. Throws ShapeError otherwise.
ChshResult chsh_experiment(const DensityOperator& rho, const ChshAngles& angles);

struct SignalingVerdict {
    std::string map_id;
    bool signals = false;
    double max_delta = 0.0;
    std::size_t trials = 0;
    std::size_t witness_trial = 0;
    std::optional<DensityOperator> witness;
};

/// Signaling threshold used by detect_signaling: 10 tau_eq.
inline double signaling_threshold(const Tolerances& tol = {}) { return 10.0 * tol.eq; }

/// Searches random two-qubit pure states for a change in the marginal opposite the map's site.
/// Requires a single-site support in {0, 1}.
SignalingVerdict detect_signaling(const Channel& map_under_test, std::size_t trials, std::uint64_t seed,
                                  unsigned threads = 1, const Tolerances& tol = {});

/// Deterministic per-trial seed derived from a run seed and trial index.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace qsep
