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

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "qsep/channel.hpp"
#include "qsep/lab.hpp"
#include "qsep/lattice.hpp"
#include "qsep/state.hpp"

namespace qsep {

using Json = nlohmann::ordered_json;

/// Row-major list of [re, im] pairs.
Json matrix_to_json(const ComplexMatrix& m);

/// Square matrix from a row-major [re, im] pair list; dimension inferred from its length.
ComplexMatrix square_matrix_from_json(const Json& entries);

/// {"kind": "density", "dims": [...], "entries": [[re, im], ...]}
Json state_to_json(const DensityOperator& rho);

/// {"kind": "pure", "dims": [...], "amplitudes": [[re, im], ...]}
Json state_to_json(const PureState& psi);

/// Accepts either document kind; pure states are returned as |psi><psi|.
DensityOperator state_from_json(const Json& doc);

/// {"kind": ..., "support": [...], "operators": [[[re, im], ...], ...]}
/// or {"builtin": "depolarizing:0.5", "support": [s]}.
Json channel_to_json(const Channel& ch);
Channel channel_from_json(const Json& doc);

/// {"n_sites": n, "local_dim": d, "model": "ising"|"heisenberg"|"zero"|"custom",
///  "params": {...}, "bonds": [{"site": i, "matrix": [...]}], "onsite": [...]}
LatticeHamiltonian hamiltonian_from_json(const Json& doc);

Json to_json(const NoSignalReport& r);
Json to_json(const NoSignalSweep& s);
Json to_json(const LightconeMap& m);
Json to_json(const ChshResult& r);
Json to_json(const SignalingVerdict& v);

/// Header "site,layer,delta,in_cone" followed by one row per (site, layer >= 1).
void write_lightcone_csv(std::ostream& out, const LightconeMap& m);

Json read_json_file(const std::string& path);

}  // namespace qsep
