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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qsep/errors.hpp"

namespace qsep {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Ordered list of distinct site indices.
using SiteSet = std::vector<std::size_t>;

/// Numerical tolerances, all in max norm.
struct Tolerances {
    double herm = 1e-10;
    double unit = 1e-10;
    double eq = 1e-10;
    double psd = 1e-10;
};

inline constexpr Tolerances kDefaultTolerances{};

/// Largest total dimension any dense operand may have.
inline constexpr std::size_t kMaxTotalDim = 4096;

/// Tensor factorization of a Hilbert space into sites.
///
/// Site 0 is the most significant factor: basis labels (n_0, ..., n_{k-1})
/// map to the composite index sum_i n_i * prod_{j>i} d_j.
class SystemShape {
  public:
    SystemShape() = default;
    explicit SystemShape(std::vector<std::size_t> dims);
    SystemShape(std::initializer_list<std::size_t> dims) : SystemShape(std::vector<std::size_t>(dims)) {}

    static SystemShape qubits(std::size_t n);

    std::size_t num_sites() const { return dims_.size(); }
    std::size_t total_dim() const { return total_; }
    std::size_t dim(std::size_t site) const;
    const std::vector<std::size_t>& dims() const { return dims_; }

    /// Place value of each site in the composite index.
    const std::vector<std::size_t>& strides() const { return strides_; }

    /// Product of local dimensions over `sites`; 1 for the empty set.
    std::size_t sub_dim(std::span<const std::size_t> sites) const;

    /// Sub-shape made of `sites`, in the given order.
    SystemShape restrict_to(std::span<const std::size_t> sites) const;

    /// Sites not in `sites`, ascending.
    SiteSet complement(std::span<const std::size_t> sites) const;

    /// Throws ShapeError unless `sites` are distinct and in range.
    void check_sites(std::span<const std::size_t> sites) const;

    std::vector<std::size_t> labels_of(std::size_t index) const;
    std::size_t index_of(std::span<const std::size_t> labels) const;

    bool operator==(const SystemShape&) const = default;

  private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 1;
};

/// Offsets in the composite index contributed by each joint basis label of `sites`.
///
/// Entry k corresponds to the k-th basis state of the sub-system formed by
/// `sites` in the listed order (first listed site most significant).
std::vector<std::size_t> site_offsets(const SystemShape& shape, std::span<const std::size_t> sites);

/// Kronecker product; a's factor is the more significant one.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b);

/// Reduced matrix on `keep` after summing the diagonal of every other site.
///
/// The result's factors follow the order of `keep`. An empty `keep` yields the
/// 1x1 matrix [Tr(rho)].
ComplexMatrix partial_trace(const ComplexMatrix& rho, const SystemShape& shape, std::span<const std::size_t> keep);

/// Full-space operator acting as `op` on `support` and as identity elsewhere.
///
/// op's tensor factors follow the order of `support`, which need not be
/// contiguous or sorted.
ComplexMatrix embed_local(const ComplexMatrix& op, std::span<const std::size_t> support, const SystemShape& shape);

/// In-place rho <- U rho U^dagger with U = embed_local(op, support, shape), without forming U.
void conjugate_local(ComplexMatrix& rho, const ComplexMatrix& op, std::span<const std::size_t> support,
                     const SystemShape& shape);

/// Returns E rho F^dagger with both operators acting on `support`.
ComplexMatrix sandwich_local(const ComplexMatrix& rho, const ComplexMatrix& left, const ComplexMatrix& right,
                             std::span<const std::size_t> support, const SystemShape& shape);

/// exp(-i h t) for Hermitian h via eigendecomposition. Throws DomainError if h is not Hermitian.
ComplexMatrix herm_expm(const ComplexMatrix& h, double t, double herm_tol = kDefaultTolerances.herm);

struct UnitarityCheck {
    bool ok = false;
    double deviation = 0.0;  // max |U^dagger U - I|
};

UnitarityCheck is_unitary(const ComplexMatrix& u, double tol = kDefaultTolerances.unit);

double max_abs(const ComplexMatrix& m);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double hermiticity_defect(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);

/// Pauli and identity matrices.
namespace pauli {
ComplexMatrix I();
ComplexMatrix X();
ComplexMatrix Y();
ComplexMatrix Z();
}  // namespace pauli

}  // namespace qsep
