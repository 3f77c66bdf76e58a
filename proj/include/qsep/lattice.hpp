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

#include <span>
#include <string_view>
#include <vector>

#include "qsep/channel.hpp"
#include "qsep/state.hpp"
#include "qsep/tensor.hpp"

namespace qsep {

/// Two-site term on the bond (left, left + 1).
struct BondTerm {
    std::size_t left = 0;
    ComplexMatrix matrix;
};

struct SiteTerm {
    std::size_t site = 0;
    ComplexMatrix matrix;
};

/// Nearest-neighbour Hamiltonian on an open chain of identical sites.
class LatticeHamiltonian {
  public:
    /// Throws ShapeError for misplaced or mis-sized terms and DomainError for non-Hermitian ones.
    LatticeHamiltonian(std::size_t n_sites, std::size_t local_dim, std::vector<BondTerm> bonds,
                       std::vector<SiteTerm> onsite = {}, double herm_tol = kDefaultTolerances.herm);

    /// H = -J sum Z_i Z_{i+1} - g sum X_i.
    static LatticeHamiltonian ising(std::size_t n_sites, double J, double g);

    /// H = J sum (X_i X_{i+1} + Y_i Y_{i+1} + delta Z_i Z_{i+1}).
    static LatticeHamiltonian heisenberg(std::size_t n_sites, double J, double delta = 1.0);

    static LatticeHamiltonian zero(std::size_t n_sites, std::size_t local_dim = 2);

    std::size_t n_sites() const { return n_sites_; }
    std::size_t local_dim() const { return local_dim_; }
    SystemShape shape() const;
    const std::vector<BondTerm>& bonds() const { return bonds_; }
    const std::vector<SiteTerm>& onsite() const { return onsite_; }

    /// Sum of every term embedded in the full space.
    ComplexMatrix total() const;

    /// One d^2 x d^2 Hermitian per bond, with on-site terms split evenly over the adjacent bonds.
    /// The embedded bond Hamiltonians sum to total().
    std::vector<ComplexMatrix> bond_hamiltonians() const;

  private:
    std::size_t n_sites_;
    std::size_t local_dim_;
    std::vector<BondTerm> bonds_;
    std::vector<SiteTerm> onsite_;
};

/// Parses "ising:J=1,g=1", "heisenberg:J=1,delta=0.5" or "zero". Throws FormatError.
LatticeHamiltonian parse_model(std::string_view spec, std::size_t n_sites);

struct Gate {
    SiteSet support;
    ComplexMatrix unitary;
};

using Layer = std::vector<Gate>;

/// Position of a gate inside a circuit.
struct GateRef {
    std::size_t layer = 0;
    std::size_t index = 0;
    bool operator==(const GateRef&) const = default;
};

/// Layered circuit whose layers consist of gates with pairwise disjoint supports.
class TrotterCircuit {
  public:
    /// Throws ShapeError for overlapping or out-of-range supports and ChannelError for non-unitary gates.
    TrotterCircuit(SystemShape shape, std::vector<Layer> layers, const Tolerances& tol = {});

    const SystemShape& shape() const { return shape_; }
    std::size_t depth() const { return layers_.size(); }
    const std::vector<Layer>& layers() const { return layers_; }
    const Gate& gate(GateRef ref) const { return layers_.at(ref.layer).at(ref.index); }

    /// Product of the first `n_layers` layers (later layers to the left).
    ComplexMatrix unitary(std::size_t n_layers) const;
    ComplexMatrix unitary() const { return unitary(depth()); }

    /// rho evolved through layers [first, last).
    DensityOperator evolve(const DensityOperator& rho, std::size_t first, std::size_t last) const;

    /// Copy with one more gate in `layer`; validation applies as in the constructor.
    TrotterCircuit with_gate(std::size_t layer, Gate gate) const;

  private:
    SystemShape shape_;
    std::vector<Layer> layers_;
    Tolerances tol_;
};

/// First-order brickwork: layer l applies exp(-i h_b dt) on every bond b with b = l (mod 2).
///
/// Two consecutive layers form one Trotter step of duration dt, so a circuit of
/// 2m layers approximates exp(-i H m dt).
TrotterCircuit build_trotter(const LatticeHamiltonian& h, double dt, std::size_t n_layers);

/// Time approximated by the first n_layers layers of build_trotter(h, dt, ...): dt * n_layers / 2.
double trotter_time(double dt, std::size_t n_layers);

/// rho -> U rho U^dagger with U = exp(-i H t) computed exactly.
DensityOperator evolve_von_neumann(const DensityOperator& rho, const LatticeHamiltonian& h, double t);

/// Forward light cone of a single site.
struct CausalCone {
    std::size_t origin = 0;
    /// frontier[l] is the set of influenced sites after l layers, ascending; frontier[0] = {origin}.
    std::vector<SiteSet> frontier;

    const SiteSet& sites() const { return frontier.back(); }
    std::size_t layers() const { return frontier.size() - 1; }
    bool contains(std::size_t site, std::size_t layer) const;
};

/// Sites reachable from `origin` through gate supports in the first `layers_elapsed` layers.
CausalCone causal_cone(const TrotterCircuit& circuit, std::size_t origin, std::size_t layers_elapsed);

/// Product of the gates in the first `layers` layers that touch the cone's frontier, as a
/// unitary channel supported on cone.sites().
///
/// Conjugating any operator on the origin by the full circuit equals conjugating it by this
/// restricted unitary. Throws StructuralError if a collected gate reaches outside the cone.
Channel restricted_unitary(const TrotterCircuit& circuit, std::size_t layers, const CausalCone& cone);

/// Density operator on a staircase cut through a circuit.
///
/// clock[s] counts the layers absorbed at site s; a gate in layer l is absorbed
/// iff every site of its support has clock > l.
struct SurfaceState {
    DensityOperator rho;
    std::vector<std::size_t> clock;

    static SurfaceState flat(DensityOperator rho);
};

/// True iff every clock is within the circuit depth and no gate is half-absorbed.
bool is_valid_cut(const TrotterCircuit& circuit, std::span<const std::size_t> clock);

/// Gates absorbed by `clock`, in layer order.
std::vector<GateRef> absorbed_gates(const TrotterCircuit& circuit, std::span<const std::size_t> clock);

/// Applies the listed gates one after another.
DensityOperator apply_gates(const DensityOperator& rho, const TrotterCircuit& circuit, std::span<const GateRef> order);

/// Advances each site's clock by site_advances[s] and absorbs the newly covered gates.
/// Throws SurfaceError if the new clock is not a valid cut.
SurfaceState advance_surface(const SurfaceState& s, const TrotterCircuit& circuit,
                             std::span<const std::size_t> site_advances);

}  // namespace qsep
