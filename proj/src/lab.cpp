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

#include "qsep/lab.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

namespace qsep {

namespace {

// Evaluates fn(i) for i in [0, n) on up to `threads` workers; results are stored by index.
template <typename Fn>
auto run_trials(std::size_t n, unsigned threads, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using Result = decltype(fn(std::size_t{}));
    std::vector<std::optional<Result>> slots(n);
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            slots[i].emplace(fn(i));
        }
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) {
                        slots[i].emplace(fn(i));
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    std::vector<Result> out;
    out.reserve(n);
    for (auto& s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

std::string site_list(const SiteSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += (i ? "," : "") + std::to_string(s[i]);
    }
    return out + "}";
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

NoSignalReport no_signaling_check(const DensityOperator& rho, const Channel& disturbance, const SiteSet& measured,
                                  std::string state_id, const Tolerances& tol) {
    rho.shape().check_sites(measured);
    for (std::size_t s : disturbance.support()) {
        if (std::find(measured.begin(), measured.end(), s) != measured.end()) {
            throw PartitionError("disturbance support " + site_list(disturbance.support()) +
                                 " overlaps measured sites " + site_list(measured));
        }
    }
    const DensityOperator disturbed = apply_channel(disturbance, rho, tol);
    const ComplexMatrix before = partial_trace(rho.matrix(), rho.shape(), measured);
    const ComplexMatrix after = partial_trace(disturbed.matrix(), disturbed.shape(), measured);

    NoSignalReport r;
    r.state_id = std::move(state_id);
    r.disturbance_id = disturbance.name();
    r.measured = measured;
    r.disturbed = disturbance.support();
    r.delta = max_abs_diff(after, before);
    r.passed = r.delta <= tol.eq;
    return r;
}

NoSignalSweep nosignal_sweep(std::size_t trials, std::uint64_t seed, std::size_t min_qubits, std::size_t max_qubits,
                             unsigned threads, const Tolerances& tol) {
    if (min_qubits < 2 || max_qubits < min_qubits) {
        throw DomainError("nosignal_sweep: need 2 <= min_qubits <= max_qubits");
    }
    const auto cptp_ids = builtin_cptp_ids();
    auto one = [&](std::size_t index) {
        Rng rng(trial_seed(seed, index));
        const std::size_t n = std::uniform_int_distribution<std::size_t>(min_qubits, max_qubits)(rng);
        const SystemShape shape = SystemShape::qubits(n);
        const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, shape.total_dim())(rng);

        SiteSet sites(n);
        for (std::size_t i = 0; i < n; ++i) sites[i] = i;
        std::shuffle(sites.begin(), sites.end(), rng);
        const std::size_t n_b = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
        const std::size_t n_a = std::uniform_int_distribution<std::size_t>(1, n - n_b)(rng);
        SiteSet disturbed(sites.begin(), sites.begin() + static_cast<std::ptrdiff_t>(n_b));
        SiteSet measured(sites.begin() + static_cast<std::ptrdiff_t>(n_b),
                         sites.begin() + static_cast<std::ptrdiff_t>(n_b + n_a));
        std::sort(measured.begin(), measured.end());

        const DensityOperator rho = random_density(shape, rank, rng);
        const bool use_builtin = std::uniform_int_distribution<int>(0, 3)(rng) == 0;
        const Channel ch =
            use_builtin ? builtin_channel(cptp_ids[std::uniform_int_distribution<std::size_t>(0, cptp_ids.size() - 1)(rng)],
                                          disturbed.front())
                        : random_cptp_channel(shape, disturbed, rng);
        return no_signaling_check(rho, ch, measured,
                                  "random:n=" + std::to_string(n) + ",rank=" + std::to_string(rank), tol);
    };

    NoSignalSweep out;
    out.seed = seed;
    out.trials = run_trials(trials, threads, one);
    for (const auto& r : out.trials) {
        out.max_delta = std::max(out.max_delta, r.delta);
        out.all_passed = out.all_passed && r.passed;
    }
    return out;
}

double LightconeMap::max_out_of_cone() const {
    double m = 0.0;
    for (std::size_t l = 0; l < delta.size(); ++l) {
        for (std::size_t s = 0; s < delta[l].size(); ++s) {
            if (!in_cone[l][s]) {
                m = std::max(m, delta[l][s]);
            }
        }
    }
    return m;
}

LightconeMap lightcone_sweep(const LatticeHamiltonian& h, double dt, std::size_t layers, std::size_t disturb_site,
                             const Channel& disturbance, const DensityOperator& initial) {
    if (disturbance.support() != SiteSet{disturb_site}) {
        throw DomainError("lightcone_sweep: disturbance must act on site " + std::to_string(disturb_site) + " only");
    }
    const TrotterCircuit circuit = build_trotter(h, dt, layers);
    const CausalCone cone = causal_cone(circuit, disturb_site, layers);

    LightconeMap map;
    map.n_sites = h.n_sites();
    map.layers = layers;
    map.disturb_site = disturb_site;

    DensityOperator plain = initial;
    DensityOperator kicked = apply_channel(disturbance, initial);
    for (std::size_t l = 0; l <= layers; ++l) {
        if (l > 0) {
            plain = circuit.evolve(plain, l - 1, l);
            kicked = circuit.evolve(kicked, l - 1, l);
        }
        std::vector<double> row(map.n_sites);
        std::vector<bool> inside(map.n_sites);
        for (std::size_t s = 0; s < map.n_sites; ++s) {
            const SiteSet keep{s};
            row[s] = max_abs_diff(partial_trace(kicked.matrix(), kicked.shape(), keep),
                                  partial_trace(plain.matrix(), plain.shape(), keep));
            inside[s] = cone.contains(s, l);
        }
        map.delta.push_back(std::move(row));
        map.in_cone.push_back(std::move(inside));
    }
    return map;
}

bool ChshResult::correlators_bounded(double tol) const {
    for (const auto& row : correlator) {
        for (double e : row) {
            if (std::abs(e) > 1.0 + tol) return false;
        }
    }
    return true;
}

bool ChshResult::within_tsirelson(double tol) const { return std::abs(S) <= 2.0 * std::sqrt(2.0) + tol; }

bool ChshResult::within_classical(double tol) const { return std::abs(S) <= 2.0 + tol; }

ComplexMatrix spin_observable(double theta) { return std::cos(theta) * pauli::Z() + std::sin(theta) * pauli::X(); }

ChshResult chsh_experiment(const DensityOperator& rho, const ChshAngles& angles) {
    if (rho.shape() != SystemShape::qubits(2)) {
        throw ShapeError("chsh_experiment needs a two-qubit state");
    }
    const std::array<double, 2> a{angles.a0, angles.a1};
    const std::array<double, 2> b{angles.b0, angles.b1};
    ChshResult r;
    r.angles = angles;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const ComplexMatrix ab = tensor_product(spin_observable(a[i]), spin_observable(b[j]));
            r.correlator[i][j] = rho.expectation(ab).real();
        }
    }
    r.S = r.correlator[0][0] + r.correlator[0][1] + r.correlator[1][0] - r.correlator[1][1];
    return r;
}

SignalingVerdict detect_signaling(const Channel& map_under_test, std::size_t trials, std::uint64_t seed,
                                  unsigned threads, const Tolerances& tol) {
    if (map_under_test.support().size() != 1 || map_under_test.support().front() > 1) {
        throw DomainError("detect_signaling: map must act on a single site of a two-qubit system");
    }
    const SystemShape shape = SystemShape::qubits(2);
    const SiteSet measured{1 - map_under_test.support().front()};

    struct Trial {
        double delta;
        DensityOperator state;
    };
    auto one = [&](std::size_t index) {
        Rng rng(trial_seed(seed, index));
        DensityOperator rho = pure_to_density(random_pure(shape, rng));
        const double d = no_signaling_check(rho, map_under_test, measured, "random-pure", tol).delta;
        return Trial{d, std::move(rho)};
    };
    const auto results = run_trials(trials, threads, one);

    SignalingVerdict v;
    v.map_id = map_under_test.name();
    v.trials = trials;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!v.witness || results[i].delta > v.max_delta) {
            v.max_delta = results[i].delta;
            v.witness_trial = i;
            v.witness = results[i].state;
        }
    }
    v.signals = v.max_delta > signaling_threshold(tol);
    return v;
}

}  // namespace qsep
