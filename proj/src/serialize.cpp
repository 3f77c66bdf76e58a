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

#include "qsep/serialize.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

namespace qsep {

namespace {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw FormatError("complex entry must be a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

const Json& require(const Json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) {
        throw FormatError(std::string("missing field '") + key + "'");
    }
    return doc.at(key);
}

std::vector<std::size_t> size_list(const Json& j, const char* what) {
    if (!j.is_array()) {
        throw FormatError(std::string(what) + " must be an array of non-negative integers");
    }
    std::vector<std::size_t> out;
    for (const auto& v : j) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw FormatError(std::string(what) + " must be an array of non-negative integers");
        }
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

Json sites_to_json(const SiteSet& s) {
    Json j = Json::array();
    for (std::size_t v : s) j.push_back(v);
    return j;
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
    Json j = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            j.push_back(complex_to_json(m(r, c)));
        }
    }
    return j;
}

ComplexMatrix square_matrix_from_json(const Json& entries) {
    if (!entries.is_array()) {
        throw FormatError("matrix entries must be an array");
    }
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
    if (static_cast<std::size_t>(n * n) != entries.size() || n == 0) {
        throw FormatError("matrix entry count " + std::to_string(entries.size()) + " is not a non-zero square");
    }
    ComplexMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            m(r, c) = complex_from_json(entries[static_cast<std::size_t>(r * n + c)]);
        }
    }
    return m;
}

Json state_to_json(const DensityOperator& rho) {
    return Json{{"kind", "density"}, {"dims", rho.shape().dims()}, {"entries", matrix_to_json(rho.matrix())}};
}

Json state_to_json(const PureState& psi) {
    Json amps = Json::array();
    for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) {
        amps.push_back(complex_to_json(psi.amplitudes()(i)));
    }
    return Json{{"kind", "pure"}, {"dims", psi.shape().dims()}, {"amplitudes", amps}};
}

DensityOperator state_from_json(const Json& doc) {
    const SystemShape shape(size_list(require(doc, "dims"), "dims"));
    const std::string kind = doc.value("kind", std::string("density"));
    if (kind == "pure") {
        const Json& amps = require(doc, "amplitudes");
        if (!amps.is_array() || amps.size() != shape.total_dim()) {
            throw FormatError("expected " + std::to_string(shape.total_dim()) + " amplitudes");
        }
        ComplexVector a(static_cast<Eigen::Index>(amps.size()));
        for (std::size_t i = 0; i < amps.size(); ++i) {
            a(static_cast<Eigen::Index>(i)) = complex_from_json(amps[i]);
        }
        return pure_to_density(PureState(std::move(a), shape));
    }
    if (kind != "density") {
        throw FormatError("unknown state kind '" + kind + "'");
    }
    ComplexMatrix m = square_matrix_from_json(require(doc, "entries"));
    if (static_cast<std::size_t>(m.rows()) != shape.total_dim()) {
        throw FormatError("entries describe a " + std::to_string(m.rows()) + "-dimensional matrix, dims give " +
                          std::to_string(shape.total_dim()));
    }
    return DensityOperator(std::move(m), shape);
}

Json channel_to_json(const Channel& ch) {
    Json ops = Json::array();
    for (const auto& op : ch.operators()) {
        ops.push_back(matrix_to_json(op));
    }
    return Json{{"kind", std::string(to_string(ch.kind()))},
                {"name", ch.name()},
                {"support", sites_to_json(ch.support())},
                {"operators", ops}};
}

Channel channel_from_json(const Json& doc) {
    const SiteSet support = size_list(require(doc, "support"), "support");
    if (doc.contains("builtin")) {
        if (support.size() != 1) {
            throw FormatError("built-in channels act on exactly one site");
        }
        return builtin_channel(doc.at("builtin").get<std::string>(), support.front());
    }
    const std::string kind = require(doc, "kind").get<std::string>();
    const std::string name = doc.value("name", kind);
    if (kind == "nonlinear-toy") {
        if (support.size() != 1) {
            throw FormatError("toy-collapse acts on exactly one site");
        }
        return Channel::toy_collapse(support.front());
    }
    std::vector<ComplexMatrix> ops;
    for (const auto& op : require(doc, "operators")) {
        ops.push_back(square_matrix_from_json(op));
    }
    if (kind == "unitary") {
        return Channel::unchecked(ChannelKind::Unitary, std::move(ops), support, name);
    }
    if (kind == "kraus") {
        return Channel::unchecked(ChannelKind::Kraus, std::move(ops), support, name);
    }
    throw FormatError("unknown channel kind '" + kind + "'");
}

LatticeHamiltonian hamiltonian_from_json(const Json& doc) {
    const auto n = require(doc, "n_sites").get<std::size_t>();
    const auto d = doc.value("local_dim", std::size_t{2});
    const std::string model = doc.value("model", std::string("custom"));
    const Json params = doc.value("params", Json::object());
    if (model == "ising" || model == "heisenberg" || model == "zero") {
        if (d != 2) {
            throw FormatError("model '" + model + "' is defined for local_dim 2 only");
        }
        auto param = [&](const char* key, double fallback) { return params.value(key, fallback); };
        for (const auto& [k, v] : params.items()) {
            const bool known = (model == "ising" && (k == "J" || k == "g")) ||
                               (model == "heisenberg" && (k == "J" || k == "delta"));
            if (!known || !v.is_number()) {
                throw FormatError("model '" + model + "' has no numeric parameter '" + k + "'");
            }
        }
        if (model == "ising") {
            return LatticeHamiltonian::ising(n, param("J", 1.0), param("g", 1.0));
        }
        if (model == "heisenberg") {
            return LatticeHamiltonian::heisenberg(n, param("J", 1.0), param("delta", 1.0));
        }
        return LatticeHamiltonian::zero(n);
    }
    if (model != "custom") {
        throw FormatError("unknown model '" + model + "'");
    }
    std::vector<BondTerm> bonds;
    for (const auto& b : doc.value("bonds", Json::array())) {
        bonds.push_back({require(b, "site").get<std::size_t>(), square_matrix_from_json(require(b, "matrix"))});
    }
    std::vector<SiteTerm> onsite;
    for (const auto& s : doc.value("onsite", Json::array())) {
        onsite.push_back({require(s, "site").get<std::size_t>(), square_matrix_from_json(require(s, "matrix"))});
    }
    return LatticeHamiltonian(n, d, std::move(bonds), std::move(onsite));
}

Json to_json(const NoSignalReport& r) {
    return Json{{"state", r.state_id},
                {"disturbance", r.disturbance_id},
                {"measured", sites_to_json(r.measured)},
                {"disturbed", sites_to_json(r.disturbed)},
                {"delta", r.delta},
                {"verdict", r.passed ? "pass" : "fail"}};
}

Json to_json(const NoSignalSweep& s) {
    Json trials = Json::array();
    for (const auto& t : s.trials) {
        trials.push_back(to_json(t));
    }
    return Json{{"seed", s.seed},
                {"trial_count", s.trials.size()},
                {"max_delta", s.max_delta},
                {"all_passed", s.all_passed},
                {"trials", trials}};
}

Json to_json(const LightconeMap& m) {
    Json rows = Json::array();
    for (std::size_t l = 0; l < m.delta.size(); ++l) {
        for (std::size_t s = 0; s < m.n_sites; ++s) {
            rows.push_back(Json{{"site", s}, {"layer", l}, {"delta", m.delta[l][s]}, {"in_cone", m.in_cone[l][s]}});
        }
    }
    return Json{{"n_sites", m.n_sites},
                {"layers", m.layers},
                {"disturb_site", m.disturb_site},
                {"max_out_of_cone_delta", m.max_out_of_cone()},
                {"cells", rows}};
}

Json to_json(const ChshResult& r) {
    return Json{{"angles", {r.angles.a0, r.angles.a1, r.angles.b0, r.angles.b1}},
                {"E00", r.correlator[0][0]},
                {"E01", r.correlator[0][1]},
                {"E10", r.correlator[1][0]},
                {"E11", r.correlator[1][1]},
                {"S", r.S}};
}

Json to_json(const SignalingVerdict& v) {
    Json j{{"map", v.map_id},
           {"verdict", v.signals ? "signals" : "no signal"},
           {"max_delta", v.max_delta},
           {"trials", v.trials},
           {"witness_trial", v.witness_trial}};
    if (v.witness) {
        j["witness"] = state_to_json(*v.witness);
    }
    return j;
}

void write_lightcone_csv(std::ostream& out, const LightconeMap& m) {
    out << "site,layer,delta,in_cone\n";
    out.precision(17);
    for (std::size_t s = 0; s < m.n_sites; ++s) {
        for (std::size_t l = 1; l < m.delta.size(); ++l) {
            out << s << ',' << l << ',' << m.delta[l][s] << ',' << (m.in_cone[l][s] ? 1 : 0) << '\n';
        }
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("'" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace qsep
