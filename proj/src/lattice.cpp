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

#include "qsep/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <string>

namespace qsep {

namespace {

bool intersects(const SiteSet& a, const SiteSet& b) {
    return std::any_of(a.begin(), a.end(), [&](std::size_t s) { return std::find(b.begin(), b.end(), s) != b.end(); });
}

bool subset_of(const SiteSet& a, const SiteSet& b) {
    return std::all_of(a.begin(), a.end(), [&](std::size_t s) { return std::find(b.begin(), b.end(), s) != b.end(); });
}

std::map<std::string, double, std::less<>> parse_params(std::string_view text) {
    std::map<std::string, double, std::less<>> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw FormatError("model parameter '" + std::string(item) + "' is not of the form name=value");
        }
        const std::string_view value = item.substr(eq + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
            throw FormatError("cannot parse model parameter '" + std::string(item) + "'");
        }
        out[std::string(item.substr(0, eq))] = v;
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

LatticeHamiltonian::LatticeHamiltonian(std::size_t n_sites, std::size_t local_dim, std::vector<BondTerm> bonds,
                                       std::vector<SiteTerm> onsite, double herm_tol)
    : n_sites_(n_sites), local_dim_(local_dim), bonds_(std::move(bonds)), onsite_(std::move(onsite)) {
    if (n_sites_ < 2) {
        throw DomainError("a chain needs at least 2 sites, got " + std::to_string(n_sites_));
    }
    // Validates local_dim and the dense cap.
    (void)shape();
    const auto d = static_cast<Eigen::Index>(local_dim_);
    for (const auto& b : bonds_) {
        if (b.left + 1 >= n_sites_) {
            throw ShapeError("bond (" + std::to_string(b.left) + "," + std::to_string(b.left + 1) +
                             ") is not on the chain");
        }
        if (b.matrix.rows() != d * d || b.matrix.cols() != d * d) {
            throw ShapeError("bond term must be " + std::to_string(d * d) + "x" + std::to_string(d * d));
        }
        if (hermiticity_defect(b.matrix) > herm_tol) {
            throw DomainError("bond term on bond " + std::to_string(b.left) + " is not Hermitian");
        }
    }
    for (const auto& s : onsite_) {
        if (s.site >= n_sites_) {
            throw ShapeError("on-site term at site " + std::to_string(s.site) + " is not on the chain");
        }
        if (s.matrix.rows() != d || s.matrix.cols() != d) {
            throw ShapeError("on-site term must be " + std::to_string(d) + "x" + std::to_string(d));
        }
        if (hermiticity_defect(s.matrix) > herm_tol) {
            throw DomainError("on-site term at site " + std::to_string(s.site) + " is not Hermitian");
        }
    }
}

LatticeHamiltonian LatticeHamiltonian::ising(std::size_t n_sites, double J, double g) {
    std::vector<BondTerm> bonds;
    std::vector<SiteTerm> onsite;
    const ComplexMatrix zz = tensor_product(pauli::Z(), pauli::Z());
    for (std::size_t i = 0; i + 1 < n_sites; ++i) {
        bonds.push_back({i, -J * zz});
    }
    for (std::size_t i = 0; i < n_sites; ++i) {
        onsite.push_back({i, -g * pauli::X()});
    }
    return LatticeHamiltonian(n_sites, 2, std::move(bonds), std::move(onsite));
}

LatticeHamiltonian LatticeHamiltonian::heisenberg(std::size_t n_sites, double J, double delta) {
    const ComplexMatrix term = J * (tensor_product(pauli::X(), pauli::X()) + tensor_product(pauli::Y(), pauli::Y()) +
                                    delta * tensor_product(pauli::Z(), pauli::Z()));
    std::vector<BondTerm> bonds;
    for (std::size_t i = 0; i + 1 < n_sites; ++i) {
        bonds.push_back({i, term});
    }
    return LatticeHamiltonian(n_sites, 2, std::move(bonds));
}

LatticeHamiltonian LatticeHamiltonian::zero(std::size_t n_sites, std::size_t local_dim) {
    return LatticeHamiltonian(n_sites, local_dim, {});
}

SystemShape LatticeHamiltonian::shape() const { return SystemShape(std::vector<std::size_t>(n_sites_, local_dim_)); }

ComplexMatrix LatticeHamiltonian::total() const {
    const SystemShape sh = shape();
    const auto n = static_cast<Eigen::Index>(sh.total_dim());
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (const auto& b : bonds_) {
        const SiteSet support{b.left, b.left + 1};
        h += embed_local(b.matrix, support, sh);
    }
    for (const auto& s : onsite_) {
        const SiteSet support{s.site};
        h += embed_local(s.matrix, support, sh);
    }
    return h;
}

std::vector<ComplexMatrix> LatticeHamiltonian::bond_hamiltonians() const {
    const auto d = static_cast<Eigen::Index>(local_dim_);
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    std::vector<ComplexMatrix> out(n_sites_ - 1, ComplexMatrix::Zero(d * d, d * d));
    for (const auto& b : bonds_) {
        out[b.left] += b.matrix;
    }
    for (const auto& s : onsite_) {
        const bool has_left = s.site >= 1;
        const bool has_right = s.site + 1 < n_sites_;
        const double share = (has_left && has_right) ? 0.5 : 1.0;
        if (has_left) {
            out[s.site - 1] += share * tensor_product(id, s.matrix);
        }
        if (has_right) {
            out[s.site] += share * tensor_product(s.matrix, id);
        }
    }
    return out;
}

LatticeHamiltonian parse_model(std::string_view spec, std::size_t n_sites) {
    std::string_view name = spec;
    std::string_view params;
    if (const auto colon = spec.find(':'); colon != std::string_view::npos) {
        name = spec.substr(0, colon);
        params = spec.substr(colon + 1);
    }
    const auto p = parse_params(params);
    auto get = [&](std::string_view key, double fallback) {
        const auto it = p.find(key);
        return it == p.end() ? fallback : it->second;
    };
    auto allow = [&](std::initializer_list<std::string_view> keys) {
        for (const auto& [k, v] : p) {
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
                throw FormatError("model '" + std::string(name) + "' has no parameter '" + k + "'");
            }
        }
    };
    if (name == "ising") {
        allow({"J", "g"});
        return LatticeHamiltonian::ising(n_sites, get("J", 1.0), get("g", 1.0));
    }
    if (name == "heisenberg") {
        allow({"J", "delta"});
        return LatticeHamiltonian::heisenberg(n_sites, get("J", 1.0), get("delta", 1.0));
    }
    if (name == "zero") {
        allow({});
        return LatticeHamiltonian::zero(n_sites);
    }
    throw FormatError("unknown model '" + std::string(name) + "'");
}

TrotterCircuit::TrotterCircuit(SystemShape shape, std::vector<Layer> layers, const Tolerances& tol)
    : shape_(std::move(shape)), layers_(std::move(layers)), tol_(tol) {
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        std::vector<bool> used(shape_.num_sites(), false);
        for (const Gate& g : layers_[l]) {
            shape_.check_sites(g.support);
            if (g.support.empty()) {
                throw ShapeError("gate with empty support in layer " + std::to_string(l));
            }
            if (static_cast<std::size_t>(g.unitary.rows()) != shape_.sub_dim(g.support) ||
                g.unitary.rows() != g.unitary.cols()) {
                throw ShapeError("gate dimension does not match its support in layer " + std::to_string(l));
            }
            for (std::size_t s : g.support) {
                if (used[s]) {
                    throw ShapeError("gates overlap on site " + std::to_string(s) + " in layer " +
                                     std::to_string(l));
                }
                used[s] = true;
            }
            const UnitarityCheck u = is_unitary(g.unitary, tol_.unit);
            if (!u.ok) {
                throw ChannelError("gate in layer " + std::to_string(l) + " is not unitary (defect " +
                                   std::to_string(u.deviation) + ")");
            }
        }
    }
}

ComplexMatrix TrotterCircuit::unitary(std::size_t n_layers) const {
    if (n_layers > depth()) {
        throw ShapeError("circuit has only " + std::to_string(depth()) + " layers");
    }
    const auto n = static_cast<Eigen::Index>(shape_.total_dim());
    ComplexMatrix u = ComplexMatrix::Identity(n, n);
    for (std::size_t l = 0; l < n_layers; ++l) {
        for (const Gate& g : layers_[l]) {
            u = embed_local(g.unitary, g.support, shape_) * u;
        }
    }
    return u;
}

DensityOperator TrotterCircuit::evolve(const DensityOperator& rho, std::size_t first, std::size_t last) const {
    if (first > last || last > depth()) {
        throw ShapeError("layer range out of bounds");
    }
    if (rho.shape() != shape_) {
        throw ShapeError("state shape does not match circuit");
    }
    ComplexMatrix m = rho.matrix();
    for (std::size_t l = first; l < last; ++l) {
        for (const Gate& g : layers_[l]) {
            conjugate_local(m, g.unitary, g.support, shape_);
        }
    }
    return DensityOperator(std::move(m), shape_);
}

TrotterCircuit TrotterCircuit::with_gate(std::size_t layer, Gate gate) const {
    std::vector<Layer> layers = layers_;
    if (layer >= layers.size()) {
        layers.resize(layer + 1);
    }
    layers[layer].push_back(std::move(gate));
    return TrotterCircuit(shape_, std::move(layers), tol_);
}

TrotterCircuit build_trotter(const LatticeHamiltonian& h, double dt, std::size_t n_layers) {
    if (!(dt > 0.0)) {
        throw DomainError("Trotter step must be positive");
    }
    const auto bond_h = h.bond_hamiltonians();
    std::vector<ComplexMatrix> gates;
    gates.reserve(bond_h.size());
    for (const auto& hb : bond_h) {
        gates.push_back(herm_expm(hb, dt));
    }
    std::vector<Layer> layers(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        for (std::size_t b = l % 2; b < gates.size(); b += 2) {
            layers[l].push_back(Gate{SiteSet{b, b + 1}, gates[b]});
        }
    }
    return TrotterCircuit(h.shape(), std::move(layers));
}

double trotter_time(double dt, std::size_t n_layers) { return dt * static_cast<double>(n_layers) / 2.0; }

DensityOperator evolve_von_neumann(const DensityOperator& rho, const LatticeHamiltonian& h, double t) {
    if (rho.shape() != h.shape()) {
        throw ShapeError("evolve_von_neumann: state shape does not match the Hamiltonian");
    }
    const ComplexMatrix u = herm_expm(h.total(), t);
    return DensityOperator(u * rho.matrix() * u.adjoint(), rho.shape());
}

bool CausalCone::contains(std::size_t site, std::size_t layer) const {
    const SiteSet& f = frontier.at(layer);
    return std::binary_search(f.begin(), f.end(), site);
}

CausalCone causal_cone(const TrotterCircuit& circuit, std::size_t origin, std::size_t layers_elapsed) {
    if (origin >= circuit.shape().num_sites()) {
        throw ShapeError("cone origin " + std::to_string(origin) + " is not a site");
    }
    if (layers_elapsed > circuit.depth()) {
        throw ShapeError("cone requested for " + std::to_string(layers_elapsed) + " layers of a depth-" +
                         std::to_string(circuit.depth()) + " circuit");
    }
    CausalCone cone;
    cone.origin = origin;
    cone.frontier.push_back(SiteSet{origin});
    for (std::size_t l = 0; l < layers_elapsed; ++l) {
        SiteSet next = cone.frontier.back();
        for (const Gate& g : circuit.layers()[l]) {
            if (intersects(g.support, cone.frontier.back())) {
                next.insert(next.end(), g.support.begin(), g.support.end());
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        cone.frontier.push_back(std::move(next));
    }
    return cone;
}

Channel restricted_unitary(const TrotterCircuit& circuit, std::size_t layers, const CausalCone& cone) {
    if (cone.frontier.empty() || layers > cone.layers()) {
        throw StructuralError("cone does not cover " + std::to_string(layers) + " layers");
    }
    if (layers > circuit.depth()) {
        throw ShapeError("circuit has only " + std::to_string(circuit.depth()) + " layers");
    }
    const SiteSet& sites = cone.frontier[layers];
    const SystemShape sub = circuit.shape().restrict_to(sites);
    auto local_index = [&](std::size_t s) {
        return static_cast<std::size_t>(std::lower_bound(sites.begin(), sites.end(), s) - sites.begin());
    };
    const auto n = static_cast<Eigen::Index>(sub.total_dim());
    ComplexMatrix u = ComplexMatrix::Identity(n, n);
    for (std::size_t l = 0; l < layers; ++l) {
        for (const Gate& g : circuit.layers()[l]) {
            if (!intersects(g.support, cone.frontier[l])) {
                continue;
            }
            if (!subset_of(g.support, sites)) {
                throw StructuralError("gate in layer " + std::to_string(l) + " reaches outside the declared cone");
            }
            SiteSet local;
            for (std::size_t s : g.support) {
                local.push_back(local_index(s));
            }
            u = embed_local(g.unitary, local, sub) * u;
        }
    }
    return Channel::unitary(std::move(u), sites, "restricted-circuit");
}

SurfaceState SurfaceState::flat(DensityOperator rho) {
    std::vector<std::size_t> clock(rho.shape().num_sites(), 0);
    return SurfaceState{std::move(rho), std::move(clock)};
}

bool is_valid_cut(const TrotterCircuit& circuit, std::span<const std::size_t> clock) {
    if (clock.size() != circuit.shape().num_sites()) {
        return false;
    }
    for (std::size_t c : clock) {
        if (c > circuit.depth()) {
            return false;
        }
    }
    for (std::size_t l = 0; l < circuit.depth(); ++l) {
        for (const Gate& g : circuit.layers()[l]) {
            std::size_t inside = 0;
            for (std::size_t s : g.support) {
                inside += clock[s] > l ? 1 : 0;
            }
            if (inside != 0 && inside != g.support.size()) {
                return false;
            }
        }
    }
    return true;
}

std::vector<GateRef> absorbed_gates(const TrotterCircuit& circuit, std::span<const std::size_t> clock) {
    if (clock.size() != circuit.shape().num_sites()) {
        throw SurfaceError("clock has the wrong number of sites");
    }
    std::vector<GateRef> out;
    for (std::size_t l = 0; l < circuit.depth(); ++l) {
        const Layer& layer = circuit.layers()[l];
        for (std::size_t i = 0; i < layer.size(); ++i) {
            const bool absorbed =
                std::all_of(layer[i].support.begin(), layer[i].support.end(), [&](std::size_t s) { return clock[s] > l; });
            if (absorbed) {
                out.push_back({l, i});
            }
        }
    }
    return out;
}

DensityOperator apply_gates(const DensityOperator& rho, const TrotterCircuit& circuit, std::span<const GateRef> order) {
    if (rho.shape() != circuit.shape()) {
        throw ShapeError("state shape does not match circuit");
    }
    ComplexMatrix m = rho.matrix();
    for (const GateRef& ref : order) {
        const Gate& g = circuit.gate(ref);
        conjugate_local(m, g.unitary, g.support, circuit.shape());
    }
    return DensityOperator(std::move(m), rho.shape());
}

SurfaceState advance_surface(const SurfaceState& s, const TrotterCircuit& circuit,
                             std::span<const std::size_t> site_advances) {
    if (site_advances.size() != s.clock.size()) {
        throw SurfaceError("advance vector has the wrong number of sites");
    }
    if (!is_valid_cut(circuit, s.clock)) {
        throw SurfaceError("starting clock is not a valid cut");
    }
    std::vector<std::size_t> clock = s.clock;
    for (std::size_t i = 0; i < clock.size(); ++i) {
        clock[i] += site_advances[i];
    }
    if (!is_valid_cut(circuit, clock)) {
        throw SurfaceError("advanced clock leaves a gate half-absorbed or runs past the circuit depth");
    }
    const auto before = absorbed_gates(circuit, s.clock);
    std::vector<GateRef> fresh;
    for (const GateRef& ref : absorbed_gates(circuit, clock)) {
        if (std::find(before.begin(), before.end(), ref) == before.end()) {
            fresh.push_back(ref);
        }
    }
    return SurfaceState{apply_gates(s.rho, circuit, fresh), std::move(clock)};
}

}  // namespace qsep
