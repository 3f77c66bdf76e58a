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

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include "qsep/tensor.hpp"

namespace qsep {

/// Normalized state vector on a tensor-product space.
class PureState {
  public:
    /// Throws ShapeError on a size mismatch and DomainError if the norm is off by more than `norm_tol`.
    PureState(ComplexVector amplitudes, SystemShape shape, double norm_tol = kDefaultTolerances.eq);

    const ComplexVector& amplitudes() const { return amps_; }
    const SystemShape& shape() const { return shape_; }

  private:
    ComplexVector amps_;
    SystemShape shape_;
};

/// Density matrix together with its site factorization.
///
/// Construction only checks dimensions; physical validity is reported by
/// validate_state() so that deliberately invalid operators can be inspected.
class DensityOperator {
  public:
    DensityOperator(ComplexMatrix matrix, SystemShape shape);

    /// As the constructor, but throws DomainError unless validate_state passes.
    static DensityOperator checked(ComplexMatrix matrix, SystemShape shape, const Tolerances& tol = {});

    /// I / d.
    static DensityOperator maximally_mixed(SystemShape shape);

    const ComplexMatrix& matrix() const { return m_; }
    const SystemShape& shape() const { return shape_; }
    std::size_t dim() const { return shape_.total_dim(); }

    double purity() const;
    Complex expectation(const ComplexMatrix& observable) const;

  private:
    ComplexMatrix m_;
    SystemShape shape_;
};

/// Marginal of a DensityOperator on a subset of its sites.
struct ReducedState {
    ComplexMatrix matrix;
    SiteSet kept_sites;
    SystemShape parent_shape;

    /// The marginal as a standalone state; requires a non-empty kept set.
    DensityOperator as_density() const;
};

ReducedState reduce(const DensityOperator& rho, std::span<const std::size_t> keep);

DensityOperator pure_to_density(const PureState& psi);

/// Product |l_0 l_1 ...> of computational basis labels.
PureState basis_state(const SystemShape& shape, std::span<const std::size_t> labels);

enum class BellVariant { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

PureState bell_state(BellVariant variant);

/// Parses "phi+", "phi-", "psi+", "psi-". Throws FormatError otherwise.
BellVariant parse_bell_variant(std::string_view name);

/// (|0...0> + |1...1>)/sqrt(2) on n qubits. Throws DomainError for n < 2.
PureState ghz_state(std::size_t n);

using Rng = std::mt19937_64;

/// Normalized complex-Gaussian vector.
PureState random_pure(const SystemShape& shape, Rng& rng);

/// Mixture of `rank` random pure states with flat-Dirichlet weights.
DensityOperator random_density(const SystemShape& shape, std::size_t rank, Rng& rng);
DensityOperator random_density(const SystemShape& shape, std::size_t rank, std::uint64_t seed);

/// Tensor product of independent random single-site states (rank per site as given).
DensityOperator random_product_density(const SystemShape& shape, std::size_t rank, Rng& rng);

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);

struct StateReport {
    double hermiticity_defect = 0.0;
    double trace_defect = 0.0;
    double min_eigenvalue = 0.0;
    bool finite = true;
    bool passed = false;
};

StateReport validate_state(const DensityOperator& rho, const Tolerances& tol = {});
StateReport validate_state(const ComplexMatrix& rho, const Tolerances& tol = {});

}  // namespace qsep
