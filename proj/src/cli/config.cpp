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

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "qsep/cli.hpp"

namespace qsep::cli {

namespace {

std::array<double, 4> parse_angles(std::string_view text) {
    std::array<double, 4> out{};
    std::size_t count = 0;
    while (true) {
        const auto comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        if (count == 4) {
            throw FormatError("--angles takes exactly four comma-separated values");
        }
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), out[count]);
        if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty()) {
            throw FormatError("cannot parse angle '" + std::string(item) + "'");
        }
        ++count;
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    if (count != 4) {
        throw FormatError("--angles takes exactly four comma-separated values");
    }
    return out;
}

OutputFormat parse_format(std::string_view f) {
    if (f == "json") return OutputFormat::Json;
    if (f == "csv") return OutputFormat::Csv;
    throw FormatError("unknown format '" + std::string(f) + "' (expected json or csv)");
}

std::string default_extension(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

}  // namespace

std::string_view to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::NoSignal:
            return "nosignal";
        case ExperimentKind::Lightcone:
            return "lightcone";
        case ExperimentKind::Chsh:
            return "chsh";
        case ExperimentKind::Detect:
            return "detect";
        case ExperimentKind::Evolve:
            return "evolve";
        case ExperimentKind::Validate:
            return "validate";
    }
    return "unknown";
}

ExperimentKind parse_experiment(std::string_view name) {
    for (auto k : {ExperimentKind::NoSignal, ExperimentKind::Lightcone, ExperimentKind::Chsh, ExperimentKind::Detect,
                   ExperimentKind::Evolve, ExperimentKind::Validate}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw FormatError("unknown experiment '" + std::string(name) + "'");
}

void check_config(const ExperimentConfig& c) {
    for (double t : {c.tol.herm, c.tol.unit, c.tol.eq, c.tol.psd}) {
        if (!(t > 0.0)) {
            throw FormatError("tolerance overrides must be positive");
        }
    }
    if (!(c.dt > 0.0)) {
        throw FormatError("--dt must be positive");
    }
    if (c.qubits && *c.qubits < 2) {
        throw FormatError("--qubits must be at least 2");
    }
    if (c.sites < 2) {
        throw FormatError("--sites must be at least 2");
    }
    if (c.disturb >= c.sites && (c.kind == ExperimentKind::Lightcone)) {
        throw FormatError("--disturb must name a site of the chain");
    }
    if (c.format == OutputFormat::Csv && c.kind != ExperimentKind::Lightcone) {
        throw FormatError("CSV output is only available for lightcone runs");
    }
}

Json config_to_json(const ExperimentConfig& c) {
    Json j;
    j["experiment"] = std::string(to_string(c.kind));
    j["seed"] = c.seed;
    j["seed_defaulted"] = c.seed_defaulted;
    j["trials"] = c.trials ? Json(*c.trials) : Json(nullptr);
    j["qubits"] = c.qubits ? Json(*c.qubits) : Json(nullptr);
    j["sites"] = c.sites;
    j["layers"] = c.layers;
    j["dt"] = c.dt;
    j["disturb"] = c.disturb;
    j["model"] = c.model;
    j["state"] = c.state;
    j["channel"] = c.channel;
    j["angles"] = c.angles;
    j["tolerances"] = Json{{"herm", c.tol.herm}, {"unit", c.tol.unit}, {"eq", c.tol.eq}, {"psd", c.tol.psd}};
    j["format"] = default_extension(c.format);
    return j;
}

void apply_config_json(ExperimentConfig& c, const Json& doc) {
    if (!doc.is_object()) {
        throw FormatError("config document must be a JSON object");
    }
    try {
        for (const auto& [key, v] : doc.items()) {
            if (key == "experiment") {
                c.kind = parse_experiment(v.get<std::string>());
            } else if (key == "seed") {
                c.seed = v.get<std::uint64_t>();
                c.seed_defaulted = false;
            } else if (key == "trials") {
                c.trials = v.get<std::size_t>();
            } else if (key == "qubits") {
                c.qubits = v.get<std::size_t>();
            } else if (key == "sites") {
                c.sites = v.get<std::size_t>();
            } else if (key == "layers") {
                c.layers = v.get<std::size_t>();
            } else if (key == "dt") {
                c.dt = v.get<double>();
            } else if (key == "disturb") {
                c.disturb = v.get<std::size_t>();
            } else if (key == "model") {
                c.model = v.get<std::string>();
            } else if (key == "state") {
                c.state = v.get<std::string>();
            } else if (key == "channel") {
                c.channel = v.get<std::string>();
            } else if (key == "angles") {
                c.angles = v.get<std::array<double, 4>>();
            } else if (key == "out") {
                c.out = v.get<std::string>();
            } else if (key == "format") {
                c.format = parse_format(v.get<std::string>());
            } else if (key == "tolerances") {
                c.tol.herm = v.value("herm", c.tol.herm);
                c.tol.unit = v.value("unit", c.tol.unit);
                c.tol.eq = v.value("eq", c.tol.eq);
                c.tol.psd = v.value("psd", c.tol.psd);
            } else {
                throw FormatError("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad config value: ") + e.what());
    }
}

int main(int argc, char** argv) {
    CLI::App app{"Numerical no-signaling laboratory: marginals, light cones, Bell correlations"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    struct Flags {
        std::string config_file;
        std::uint64_t seed = 0;
        std::size_t trials = 0;
        std::size_t qubits = 0;
        std::size_t sites = 0;
        std::size_t layers = 0;
        double dt = 0.0;
        std::size_t disturb = 0;
        std::string model;
        std::string state;
        std::string channel;
        std::string angles;
        std::string out;
        std::string format;
        unsigned threads = 1;
        double tol_eq = 0.0;
        double tol_unit = 0.0;
        double tol_herm = 0.0;
        double tol_psd = 0.0;
    } f;

    struct Bound {
        CLI::App* sub;
        ExperimentKind kind;
        std::map<std::string, CLI::Option*> opts;
    };
    std::vector<Bound> subs;
    const std::vector<std::pair<ExperimentKind, std::string>> descriptions{
        {ExperimentKind::NoSignal, "Random (state, channel, bipartition) no-signaling sweep"},
        {ExperimentKind::Lightcone, "Per-site marginal change after a local kick on a Trotterized chain"},
        {ExperimentKind::Chsh, "Exact CHSH correlators of a two-qubit state"},
        {ExperimentKind::Detect, "Search for signaling by a single-site map"},
        {ExperimentKind::Evolve, "Exact and Trotterized evolution with conservation checks"},
        {ExperimentKind::Validate, "Lint a state (--state) or channel (--channel) JSON file"},
    };
    for (const auto& [kind, desc] : descriptions) {
        Bound b{app.add_subcommand(std::string(to_string(kind)), desc), kind, {}};
        auto* s = b.sub;
        b.opts["config"] = s->add_option("--config", f.config_file, "JSON config file; flags override it");
        b.opts["seed"] = s->add_option("--seed", f.seed, "RNG seed (default 7)");
        b.opts["trials"] = s->add_option("--trials", f.trials, "Number of random trials");
        b.opts["qubits"] = s->add_option("--qubits", f.qubits, "Fix the qubit count of nosignal trials");
        b.opts["sites"] = s->add_option("--sites", f.sites, "Chain length");
        b.opts["layers"] = s->add_option("--layers", f.layers, "Brickwork layers");
        b.opts["dt"] = s->add_option("--dt", f.dt, "Trotter step");
        b.opts["disturb"] = s->add_option("--disturb", f.disturb, "Site of the local disturbance");
        b.opts["model"] = s->add_option("--model", f.model, "Hamiltonian: ising:J=..,g=.. | heisenberg:J=..,delta=.. | zero | file.json");
        b.opts["state"] = s->add_option("--state", f.state, "bell:phi+ | ghz | ghz:n | basis:0101 | mixed | random:rank=r | file.json");
        b.opts["channel"] = s->add_option("--channel", f.channel, "Built-in channel id or channel JSON file");
        b.opts["angles"] = s->add_option("--angles", f.angles, "CHSH angles a0,a1,b0,b1 in radians");
        b.opts["out"] = s->add_option("--out", f.out, "Output path ('-' for stdout)");
        b.opts["format"] = s->add_option("--format", f.format, "json | csv");
        b.opts["threads"] = s->add_option("--threads", f.threads, "Worker threads for trial fan-out");
        b.opts["tol-eq"] = s->add_option("--tol-eq", f.tol_eq, "State-equality tolerance override");
        b.opts["tol-unit"] = s->add_option("--tol-unit", f.tol_unit, "Unitarity tolerance override");
        b.opts["tol-herm"] = s->add_option("--tol-herm", f.tol_herm, "Hermiticity tolerance override");
        b.opts["tol-psd"] = s->add_option("--tol-psd", f.tol_psd, "Positivity tolerance override");
        subs.push_back(std::move(b));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    const Bound* active = nullptr;
    for (const auto& b : subs) {
        if (b.sub->parsed()) active = &b;
    }
    auto given = [&](const char* name) { return active->opts.at(name)->count() > 0; };

    ExperimentConfig config;
    config.kind = active->kind;
    try {
        if (given("config")) {
            apply_config_json(config, read_json_file(f.config_file));
            config.kind = active->kind;
        }
        if (given("seed")) {
            config.seed = f.seed;
            config.seed_defaulted = false;
        }
        if (given("trials")) config.trials = f.trials;
        if (given("qubits")) config.qubits = f.qubits;
        if (given("sites")) config.sites = f.sites;
        if (given("layers")) config.layers = f.layers;
        if (given("dt")) config.dt = f.dt;
        if (given("disturb")) config.disturb = f.disturb;
        if (given("model")) config.model = f.model;
        if (given("state")) config.state = f.state;
        if (given("channel")) config.channel = f.channel;
        if (given("angles")) config.angles = parse_angles(f.angles);
        if (given("out")) config.out = f.out;
        if (given("format")) config.format = parse_format(f.format);
        if (given("threads")) config.threads = f.threads;
        if (given("tol-eq")) config.tol.eq = f.tol_eq;
        if (given("tol-unit")) config.tol.unit = f.tol_unit;
        if (given("tol-herm")) config.tol.herm = f.tol_herm;
        if (given("tol-psd")) config.tol.psd = f.tol_psd;
        check_config(config);

        RunResult result = run(config);

        std::string path = config.out;
        if (path.empty()) {
            if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
                path = std::string(dir) + "/" + std::string(to_string(config.kind)) + "." +
                       default_extension(config.format);
            } else {
                path = "-";
            }
        }
        emit_report(result, config.format, path);
        if (result.exit_code != kPass) {
            Json summary{{"experiment", std::string(to_string(config.kind))},
                         {"exit_code", result.exit_code},
                         {"failures", result.failures}};
            std::cerr << summary.dump() << '\n';
        }
        return result.exit_code;
    } catch (const CapacityError& e) {
        std::cerr << Json{{"error", "capacity"}, {"message", e.what()}}.dump() << '\n';
        return kCapacity;
    } catch (const Error& e) {
        std::cerr << Json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
        return kUsage;
    }
}

}  // namespace qsep::cli
