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
#include <string_view>
#include <vector>

#include "qsep/serialize.hpp"
#include "qsep/tensor.hpp"

namespace qsep::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Environment variable naming the directory reports go to when --out is absent.
inline constexpr const char* kOutDirEnv = "QSEP_OUT_DIR";

enum ExitCode : int {
    kPass = 0,
    kViolation = 1,
    kUsage = 2,
    kCapacity = 3,
};

enum class ExperimentKind { NoSignal, Lightcone, Chsh, Detect, Evolve, Validate };
enum class OutputFormat { Json, Csv };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment(std::string_view name);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::NoSignal;
    std::uint64_t seed = 7;
    bool seed_defaulted = true;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> qubits;
    std::size_t sites = 6;
    std::size_t layers = 3;
    double dt = 0.1;
    std::size_t disturb = 0;
    std::string model = "ising:J=1,g=1";
    std::string state;
    std::string channel;
    std::array<double, 4> angles{0.0, 1.5707963267948966, 0.7853981633974483, -0.7853981633974483};
    Tolerances tol;
    std::string out;
    OutputFormat format = OutputFormat::Json;
    /// Worker threads for trial fan-out; not part of the echoed config since results do not depend on it.
    unsigned threads = 1;
};

/// Throws FormatError if a tolerance is not positive or a count is out of range.
void check_config(const ExperimentConfig& config);

/// Config echo as stored in reports.
Json config_to_json(const ExperimentConfig& config);

/// Overlays keys of a JSON config document ("seed", "trials", "tolerances": {...}, ...) onto `config`.
void apply_config_json(ExperimentConfig& config, const Json& doc);

struct RunResult {
    int exit_code = kPass;
    Json report;
    /// Only set for lightcone runs.
    std::optional<LightconeMap> lightcone;
    std::vector<std::string> failures;
};

/// State from a descriptor: "bell:phi+", "ghz", "ghz:n", "basis:0101", "mixed", "random:rank=r"
/// (seeded) or a path to a state JSON file. `n_sites` sizes ghz, mixed and random states.
DensityOperator resolve_state(std::string_view spec, std::size_t n_sites, std::uint64_t seed);

/// Built-in channel id placed on `site`, or a path to a channel JSON file.
Channel resolve_channel(std::string_view spec, std::size_t site);

/// Model string ("ising:J=1,g=1", ...) on n_sites, or a path to a Hamiltonian JSON file.
LatticeHamiltonian resolve_model(std::string_view spec, std::size_t n_sites);

/// Runs one experiment. Library errors propagate as exceptions.
RunResult run(const ExperimentConfig& config);

/// Writes the report in `format` to `path` ("-" for stdout). Throws FormatError if the path is not writable
/// or CSV is requested for a run without a lightcone map.
void emit_report(const RunResult& result, OutputFormat format, const std::string& path);

/// Serialized report with the timestamp removed, for reproducibility comparisons.
std::string canonical_report(const Json& report);

/// Full command-line entry point; returns the process exit code.
int main(int argc, char** argv);

}  // namespace qsep::cli
