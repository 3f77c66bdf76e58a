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

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qsep/cli.hpp"

namespace qsep::cli {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

Eigen::VectorXd spectrum(const ComplexMatrix& m) {
    const ComplexMatrix hs = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hs, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

struct Outcome {
    Json results;
    std::vector<std::string> failures;
    std::optional<LightconeMap> lightcone;
};

Outcome run_nosignal(const ExperimentConfig& c) {
    Outcome o;
    if (!c.state.empty()) {
        const std::size_t n = c.qubits.value_or(2);
        const DensityOperator rho = resolve_state(c.state, n, c.seed);
        const Channel ch = resolve_channel(c.channel.empty() ? "x" : c.channel, c.disturb);
        const SiteSet measured = rho.shape().complement(ch.support());
        const NoSignalReport r = no_signaling_check(rho, ch, measured, c.state, c.tol);
        o.results = Json{{"mode", "single"}, {"check", to_json(r)}};
        if (ch.is_physical() && !r.passed) {
            o.failures.push_back("marginal changed by " + fmt_double(r.delta) + " under " + ch.name());
        }
        return o;
    }
    const std::size_t lo = c.qubits.value_or(2);
    const std::size_t hi = c.qubits.value_or(4);
    const NoSignalSweep sweep = nosignal_sweep(c.trials.value_or(500), c.seed, lo, hi, c.threads, c.tol);
    o.results = to_json(sweep);
    o.results["mode"] = "sweep";
    for (std::size_t i = 0; i < sweep.trials.size(); ++i) {
        if (!sweep.trials[i].passed) {
            o.failures.push_back("trial " + std::to_string(i) + ": delta " + fmt_double(sweep.trials[i].delta));
        }
    }
    return o;
}

Outcome run_lightcone(const ExperimentConfig& c) {
    Outcome o;
    const LatticeHamiltonian h = resolve_model(c.model, c.sites);
    const DensityOperator initial = resolve_state(c.state.empty() ? "ghz" : c.state, h.n_sites(), c.seed);
    const Channel ch = resolve_channel(c.channel.empty() ? "x" : c.channel, c.disturb);
    LightconeMap map = lightcone_sweep(h, c.dt, c.layers, c.disturb, ch, initial);
    o.results = to_json(map);
    for (std::size_t l = 0; l < map.delta.size(); ++l) {
        for (std::size_t s = 0; s < map.n_sites; ++s) {
            if (!map.in_cone[l][s] && map.delta[l][s] > c.tol.eq) {
                o.failures.push_back("site " + std::to_string(s) + " layer " + std::to_string(l) +
                                     " outside the cone changed by " + fmt_double(map.delta[l][s]));
            }
        }
    }
    o.lightcone = std::move(map);
    return o;
}

Outcome run_chsh(const ExperimentConfig& c) {
    Outcome o;
    const DensityOperator rho = resolve_state(c.state.empty() ? "bell:phi+" : c.state, 2, c.seed);
    const ChshResult r = chsh_experiment(rho, {c.angles[0], c.angles[1], c.angles[2], c.angles[3]});
    o.results = to_json(r);
    o.results["tsirelson_bound"] = 2.0 * std::sqrt(2.0);
    o.results["exceeds_classical"] = !r.within_classical(kChshTol);
    if (!r.correlators_bounded(kChshTol)) {
        o.failures.push_back("a correlator exceeds 1 in magnitude");
    }
    if (!r.within_tsirelson(kChshTol)) {
        o.failures.push_back("|S| = " + fmt_double(std::abs(r.S)) + " exceeds 2 sqrt 2");
    }
    return o;
}

Outcome run_detect(const ExperimentConfig& c) {
    Outcome o;
    std::vector<std::string> ids;
    if (c.channel.empty()) {
        ids = builtin_cptp_ids();
        ids.emplace_back("toy-collapse");
    } else {
        ids.push_back(c.channel);
    }
    const std::size_t site = c.disturb <= 1 ? c.disturb : 1;
    o.results = Json::array();
    for (const auto& id : ids) {
        const Channel ch = resolve_channel(id, site);
        const SignalingVerdict v = detect_signaling(ch, c.trials.value_or(200), c.seed, c.threads, c.tol);
        Json entry = to_json(v);
        entry["expected"] = ch.is_physical() ? "no signal" : "signals";
        o.results.push_back(entry);
        if (ch.is_physical() && (v.signals || v.max_delta > c.tol.eq)) {
            o.failures.push_back(id + " changed the remote marginal by " + fmt_double(v.max_delta));
        }
        if (!ch.is_physical() && !v.signals) {
            o.failures.push_back(id + " was expected to signal but max delta is " + fmt_double(v.max_delta));
        }
    }
    return o;
}

Outcome run_evolve(const ExperimentConfig& c) {
    Outcome o;
    const LatticeHamiltonian h = resolve_model(c.model, c.sites);
    const DensityOperator rho = resolve_state(c.state.empty() ? "ghz" : c.state, h.n_sites(), c.seed);
    const double t = trotter_time(c.dt, c.layers);

    const ComplexMatrix u = herm_expm(h.total(), t, c.tol.herm);
    const DensityOperator exact = evolve_von_neumann(rho, h, t);
    const TrotterCircuit circuit = build_trotter(h, c.dt, c.layers);
    const DensityOperator trotter = circuit.evolve(rho, 0, circuit.depth());

    const UnitarityCheck u_exact = is_unitary(u, c.tol.unit);
    const UnitarityCheck u_circuit = is_unitary(circuit.unitary(), c.tol.unit);
    const double trace_defect = std::abs(exact.matrix().trace() - rho.matrix().trace());
    const double herm_defect = hermiticity_defect(exact.matrix());
    const double purity_change = std::abs(exact.purity() - rho.purity());
    const double spectrum_change = (spectrum(exact.matrix()) - spectrum(rho.matrix())).cwiseAbs().maxCoeff();

    o.results = Json{{"time", t},
                     {"layers", c.layers},
                     {"unitarity_defect_exact", u_exact.deviation},
                     {"unitarity_defect_circuit", u_circuit.deviation},
                     {"trace_defect", trace_defect},
                     {"hermiticity_defect", herm_defect},
                     {"purity_change", purity_change},
                     {"spectrum_change", spectrum_change},
                     {"trotter_max_deviation", max_abs_diff(exact.matrix(), trotter.matrix())},
                     {"trotter_overlap", (exact.matrix() * trotter.matrix()).trace().real()}};
    if (!u_exact.ok) o.failures.push_back("exact propagator is not unitary");
    if (!u_circuit.ok) o.failures.push_back("circuit product is not unitary");
    if (trace_defect > c.tol.eq) o.failures.push_back("trace not conserved");
    if (herm_defect > c.tol.eq) o.failures.push_back("hermiticity not conserved");
    if (purity_change > c.tol.eq) o.failures.push_back("purity not conserved");
    if (spectrum_change > c.tol.eq) o.failures.push_back("spectrum not conserved");
    return o;
}

Outcome run_validate(const ExperimentConfig& c) {
    Outcome o;
    if (c.state.empty() && c.channel.empty()) {
        throw FormatError("validate needs --state or --channel");
    }
    o.results = Json::object();
    if (!c.state.empty()) {
        const DensityOperator rho = state_from_json(read_json_file(c.state));
        const StateReport r = validate_state(rho, c.tol);
        o.results["state"] = Json{{"path", c.state},
                                  {"dims", rho.shape().dims()},
                                  {"hermiticity_defect", r.hermiticity_defect},
                                  {"trace_defect", r.trace_defect},
                                  {"min_eigenvalue", r.min_eigenvalue},
                                  {"verdict", r.passed ? "pass" : "fail"}};
        if (!r.passed) o.failures.push_back("state " + c.state + " is not a valid density operator");
    }
    if (!c.channel.empty()) {
        const Channel ch = resolve_channel(c.channel, c.disturb);
        const ChannelReport r = validate_channel(ch, c.tol);
        o.results["channel"] = Json{{"source", c.channel},
                                    {"kind", std::string(to_string(ch.kind()))},
                                    {"defect", r.defect},
                                    {"message", r.message},
                                    {"verdict", r.passed ? "pass" : "fail"}};
        if (!r.passed) o.failures.push_back("channel " + c.channel + ": " + r.message);
    }
    return o;
}

}  // namespace

DensityOperator resolve_state(std::string_view spec, std::size_t n_sites, std::uint64_t seed) {
    if (ends_with(spec, ".json")) {
        return state_from_json(read_json_file(std::string(spec)));
    }
    std::string_view head = spec;
    std::string_view arg;
    if (const auto colon = spec.find(':'); colon != std::string_view::npos) {
        head = spec.substr(0, colon);
        arg = spec.substr(colon + 1);
    }
    auto to_count = [](std::string_view text) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
            throw FormatError("cannot parse '" + std::string(text) + "' as a count");
        }
        return v;
    };
    if (head == "bell") {
        return pure_to_density(bell_state(parse_bell_variant(arg)));
    }
    if (head == "ghz") {
        return pure_to_density(ghz_state(arg.empty() ? n_sites : to_count(arg)));
    }
    if (head == "basis") {
        std::vector<std::size_t> labels;
        for (char ch : arg) {
            if (ch < '0' || ch > '1') {
                throw FormatError("basis labels must be 0 or 1");
            }
            labels.push_back(static_cast<std::size_t>(ch - '0'));
        }
        return pure_to_density(basis_state(SystemShape::qubits(labels.size()), labels));
    }
    if (head == "mixed") {
        return DensityOperator::maximally_mixed(SystemShape::qubits(n_sites));
    }
    if (head == "random") {
        std::size_t rank = 1;
        if (!arg.empty()) {
            if (arg.substr(0, 5) == "rank=") arg.remove_prefix(5);
            rank = to_count(arg);
        }
        return random_density(SystemShape::qubits(n_sites), rank, seed);
    }
    throw FormatError("unknown state spec '" + std::string(spec) + "'");
}

Channel resolve_channel(std::string_view spec, std::size_t site) {
    if (ends_with(spec, ".json")) {
        return channel_from_json(read_json_file(std::string(spec)));
    }
    return builtin_channel(spec, site);
}

LatticeHamiltonian resolve_model(std::string_view spec, std::size_t n_sites) {
    if (ends_with(spec, ".json")) {
        return hamiltonian_from_json(read_json_file(std::string(spec)));
    }
    return parse_model(spec, n_sites);
}

RunResult run(const ExperimentConfig& config) {
    check_config(config);
    Outcome o;
    switch (config.kind) {
        case ExperimentKind::NoSignal:
            o = run_nosignal(config);
            break;
        case ExperimentKind::Lightcone:
            o = run_lightcone(config);
            break;
        case ExperimentKind::Chsh:
            o = run_chsh(config);
            break;
        case ExperimentKind::Detect:
            o = run_detect(config);
            break;
        case ExperimentKind::Evolve:
            o = run_evolve(config);
            break;
        case ExperimentKind::Validate:
            o = run_validate(config);
            break;
    }

    RunResult r;
    r.failures = std::move(o.failures);
    r.exit_code = r.failures.empty() ? kPass : kViolation;
    r.lightcone = std::move(o.lightcone);
    r.report = Json{{"tool", "qsep"},
                    {"version", std::string(kVersion)},
                    {"experiment", std::string(to_string(config.kind))},
                    {"seed", config.seed},
                    {"config", config_to_json(config)},
                    {"timestamp", utc_timestamp()},
                    {"passed", r.failures.empty()},
                    {"failures", r.failures},
                    {"results", std::move(o.results)}};
    return r;
}

void emit_report(const RunResult& result, OutputFormat format, const std::string& path) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (path != "-") {
        file.open(path);
        if (!file) {
            throw FormatError("cannot write report to '" + path + "'");
        }
        out = &file;
    }
    if (format == OutputFormat::Csv) {
        if (!result.lightcone) {
            throw FormatError("CSV output is only available for lightcone runs");
        }
        write_lightcone_csv(*out, *result.lightcone);
    } else {
        *out << result.report.dump(2) << '\n';
    }
    out->flush();
    if (!*out) {
        throw FormatError("failed writing report to '" + path + "'");
    }
}

std::string canonical_report(const Json& report) {
    Json copy = report;
    copy.erase("timestamp");
    return copy.dump();
}

}  // namespace qsep::cli
