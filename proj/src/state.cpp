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

#include "qsep/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qsep {

PureState::PureState(ComplexVector amplitudes, SystemShape shape, double norm_tol)
    : amps_(std::move(amplitudes)), shape_(std::move(shape)) {
    if (static_cast<std::size_t>(amps_.size()) != shape_.total_dim()) {
        throw ShapeError("PureState: " + std::to_string(amps_.size()) + " amplitudes for dimension " +
                         std::to_string(shape_.total_dim()));
    }
    const double norm = amps_.norm();
    if (!(std::abs(norm - 1.0) <= norm_tol)) {
        throw DomainError("PureState: norm " + std::to_string(norm) + " is not 1");
    }
}

DensityOperator::DensityOperator(ComplexMatrix matrix, SystemShape shape)
    : m_(std::move(matrix)), shape_(std::move(shape)) {
    if (m_.rows() != m_.cols() || static_cast<std::size_t>(m_.rows()) != shape_.total_dim()) {
        throw ShapeError("DensityOperator: " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                         " matrix for dimension " + std::to_string(shape_.total_dim()));
    }
}

DensityOperator DensityOperator::checked(ComplexMatrix matrix, SystemShape shape, const Tolerances& tol) {
    DensityOperator rho(std::move(matrix), std::move(shape));
    const StateReport r = validate_state(rho, tol);
    if (!r.passed) {
        throw DomainError("not a density operator: hermiticity defect " + std::to_string(r.hermiticity_defect) +
                          ", trace defect " + std::to_string(r.trace_defect) + ", min eigenvalue " +
                          std::to_string(r.min_eigenvalue));
    }
    return rho;
}

DensityOperator DensityOperator::maximally_mixed(SystemShape shape) {
    const auto n = static_cast<Eigen::Index>(shape.total_dim());
    return DensityOperator(ComplexMatrix::Identity(n, n) / static_cast<double>(n), std::move(shape));
}

double DensityOperator::purity() const { return (m_ * m_).trace().real(); }

Complex DensityOperator::expectation(const ComplexMatrix& observable) const {
    if (observable.rows() != m_.rows() || observable.cols() != m_.cols()) {
        throw ShapeError("expectation: observable dimension does not match state");
    }
    // Tr(rho O) without forming the product.
    return (m_.transpose().cwiseProduct(observable)).sum();
}

DensityOperator ReducedState::as_density() const {
    if (kept_sites.empty()) {
        throw ShapeError("ReducedState: no sites kept");
    }
    return DensityOperator(matrix, parent_shape.restrict_to(kept_sites));
}

ReducedState reduce(const DensityOperator& rho, std::span<const std::size_t> keep) {
    return ReducedState{partial_trace(rho.matrix(), rho.shape(), keep), SiteSet(keep.begin(), keep.end()),
                        rho.shape()};
}

DensityOperator pure_to_density(const PureState& psi) {
    const ComplexVector& a = psi.amplitudes();
    return DensityOperator(a * a.adjoint(), psi.shape());
}

PureState basis_state(const SystemShape& shape, std::span<const std::size_t> labels) {
    ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
    amps(static_cast<Eigen::Index>(shape.index_of(labels))) = 1.0;
    return PureState(std::move(amps), shape);
}

PureState bell_state(BellVariant variant) {
    const double h = 1.0 / std::sqrt(2.0);
    ComplexVector a = ComplexVector::Zero(4);
    switch (variant) {
        case BellVariant::PhiPlus:
            a(0) = h;
            a(3) = h;
            break;
        case BellVariant::PhiMinus:
            a(0) = h;
            a(3) = -h;
            break;
        case BellVariant::PsiPlus:
            a(1) = h;
            a(2) = h;
            break;
        case BellVariant::PsiMinus:
            a(1) = h;
            a(2) = -h;
            break;
    }
    return PureState(std::move(a), SystemShape::qubits(2));
}

BellVariant parse_bell_variant(std::string_view name) {
    if (name == "phi+") return BellVariant::PhiPlus;
    if (name == "phi-") return BellVariant::PhiMinus;
    if (name == "psi+") return BellVariant::PsiPlus;
    if (name == "psi-") return BellVariant::PsiMinus;
    throw FormatError("unknown Bell variant '" + std::string(name) + "'");
}

PureState ghz_state(std::size_t n) {
    if (n < 2) {
        throw DomainError("ghz_state: need at least 2 sites, got " + std::to_string(n));
    }
    SystemShape shape = SystemShape::qubits(n);
    ComplexVector a = ComplexVector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
    a(0) = 1.0 / std::sqrt(2.0);
    a(a.size() - 1) = 1.0 / std::sqrt(2.0);
    return PureState(std::move(a), std::move(shape));
}

PureState random_pure(const SystemShape& shape, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVector a(static_cast<Eigen::Index>(shape.total_dim()));
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        a(i) = Complex(re, im);
    }
    a /= a.norm();
    return PureState(std::move(a), shape);
}

DensityOperator random_density(const SystemShape& shape, std::size_t rank, Rng& rng) {
    if (rank < 1 || rank > shape.total_dim()) {
        throw DomainError("random_density: rank " + std::to_string(rank) + " outside [1, " +
                          std::to_string(shape.total_dim()) + "]");
    }
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> weights(rank);
    for (double& w : weights) {
        w = expo(rng);
    }
    double total = 0.0;
    for (double w : weights) total += w;

    const auto n = static_cast<Eigen::Index>(shape.total_dim());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < rank; ++k) {
        const PureState psi = random_pure(shape, rng);
        m.noalias() += (weights[k] / total) * psi.amplitudes() * psi.amplitudes().adjoint();
    }
    return DensityOperator(std::move(m), shape);
}

DensityOperator random_density(const SystemShape& shape, std::size_t rank, std::uint64_t seed) {
    Rng rng(seed);
    return random_density(shape, rank, rng);
}

DensityOperator random_product_density(const SystemShape& shape, std::size_t rank, Rng& rng) {
    if (shape.num_sites() == 0) {
        throw ShapeError("random_product_density: empty shape");
    }
    ComplexMatrix m = ComplexMatrix::Identity(1, 1);
    for (std::size_t d : shape.dims()) {
        const SystemShape local{d};
        m = tensor_product(m, random_density(local, std::min(rank, d), rng).matrix());
    }
    return DensityOperator(std::move(m), shape);
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
    std::vector<std::size_t> dims = a.shape().dims();
    dims.insert(dims.end(), b.shape().dims().begin(), b.shape().dims().end());
    return DensityOperator(tensor_product(a.matrix(), b.matrix()), SystemShape(std::move(dims)));
}

StateReport validate_state(const ComplexMatrix& rho, const Tolerances& tol) {
    StateReport r;
    if (rho.rows() != rho.cols() || rho.rows() == 0) {
        r.hermiticity_defect = std::numeric_limits<double>::infinity();
        r.trace_defect = std::numeric_limits<double>::infinity();
        r.min_eigenvalue = -std::numeric_limits<double>::infinity();
        r.passed = false;
        return r;
    }
    r.finite = all_finite(rho);
    if (!r.finite) {
        r.hermiticity_defect = std::numeric_limits<double>::infinity();
        r.trace_defect = std::numeric_limits<double>::infinity();
        r.min_eigenvalue = -std::numeric_limits<double>::infinity();
        return r;
    }
    r.hermiticity_defect = hermiticity_defect(rho);
    r.trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
    const ComplexMatrix hs = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hs, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.passed = r.hermiticity_defect <= tol.herm && r.trace_defect <= tol.eq && r.min_eigenvalue >= -tol.psd;
    return r;
}

StateReport validate_state(const DensityOperator& rho, const Tolerances& tol) {
    return validate_state(rho.matrix(), tol);
}

}  // namespace qsep
