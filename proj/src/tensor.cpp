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

#include "qsep/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qsep {

namespace {

void check_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw ShapeError(std::string(what) + ": expected a square matrix, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
    }
}

std::size_t checked_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > kMaxTotalDim / a) {
        throw CapacityError("dimension " + std::to_string(a) + "x" + std::to_string(b) +
                            " exceeds the dense cap of " + std::to_string(kMaxTotalDim));
    }
    return a * b;
}

// M <- op~ M, op~ the embedding of op on the sites behind `sup`.
void left_apply(ComplexMatrix& m, const ComplexMatrix& op, const std::vector<std::size_t>& sup,
                const std::vector<std::size_t>& rest) {
    const auto ds = static_cast<Eigen::Index>(sup.size());
    ComplexVector x(ds);
    ComplexVector y(ds);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (std::size_t r : rest) {
            for (Eigen::Index a = 0; a < ds; ++a) {
                x(a) = m(static_cast<Eigen::Index>(sup[a] + r), c);
            }
            y.noalias() = op * x;
            for (Eigen::Index a = 0; a < ds; ++a) {
                m(static_cast<Eigen::Index>(sup[a] + r), c) = y(a);
            }
        }
    }
}

// M <- M op~^dagger.
void right_apply_adjoint(ComplexMatrix& m, const ComplexMatrix& op, const std::vector<std::size_t>& sup,
                         const std::vector<std::size_t>& rest) {
    const auto ds = static_cast<Eigen::Index>(sup.size());
    const ComplexMatrix op_conj = op.conjugate();
    ComplexVector x(ds);
    ComplexVector y(ds);
    for (std::size_t r : rest) {
        for (Eigen::Index row = 0; row < m.rows(); ++row) {
            for (Eigen::Index b = 0; b < ds; ++b) {
                x(b) = m(row, static_cast<Eigen::Index>(sup[b] + r));
            }
            y.noalias() = op_conj * x;
            for (Eigen::Index a = 0; a < ds; ++a) {
                m(row, static_cast<Eigen::Index>(sup[a] + r)) = y(a);
            }
        }
    }
}

void check_local_op(const ComplexMatrix& op, std::span<const std::size_t> support, const SystemShape& shape,
                    const char* what) {
    shape.check_sites(support);
    check_square(op, what);
    if (static_cast<std::size_t>(op.rows()) != shape.sub_dim(support)) {
        throw ShapeError(std::string(what) + ": operator dimension " + std::to_string(op.rows()) +
                         " does not match support dimension " + std::to_string(shape.sub_dim(support)));
    }
}

}  // namespace

SystemShape::SystemShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    strides_.assign(dims_.size(), 1);
    total_ = 1;
    for (std::size_t d : dims_) {
        if (d < 2) {
            throw ShapeError("local dimension must be at least 2, got " + std::to_string(d));
        }
        total_ = checked_mul(total_, d);
    }
    for (std::size_t i = dims_.size(); i-- > 1;) {
        strides_[i - 1] = strides_[i] * dims_[i];
    }
}

SystemShape SystemShape::qubits(std::size_t n) { return SystemShape(std::vector<std::size_t>(n, 2)); }

std::size_t SystemShape::dim(std::size_t site) const {
    if (site >= dims_.size()) {
        throw ShapeError("site " + std::to_string(site) + " out of range for " + std::to_string(dims_.size()) +
                         " sites");
    }
    return dims_[site];
}

std::size_t SystemShape::sub_dim(std::span<const std::size_t> sites) const {
    std::size_t d = 1;
    for (std::size_t s : sites) {
        d *= dim(s);
    }
    return d;
}

SystemShape SystemShape::restrict_to(std::span<const std::size_t> sites) const {
    check_sites(sites);
    std::vector<std::size_t> dims;
    dims.reserve(sites.size());
    for (std::size_t s : sites) {
        dims.push_back(dims_[s]);
    }
    return SystemShape(std::move(dims));
}

SiteSet SystemShape::complement(std::span<const std::size_t> sites) const {
    SiteSet out;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (std::find(sites.begin(), sites.end(), i) == sites.end()) {
            out.push_back(i);
        }
    }
    return out;
}

void SystemShape::check_sites(std::span<const std::size_t> sites) const {
    std::vector<bool> seen(dims_.size(), false);
    for (std::size_t s : sites) {
        if (s >= dims_.size()) {
            throw ShapeError("site " + std::to_string(s) + " out of range for " + std::to_string(dims_.size()) +
                             " sites");
        }
        if (seen[s]) {
            throw ShapeError("site " + std::to_string(s) + " listed twice");
        }
        seen[s] = true;
    }
}

std::vector<std::size_t> SystemShape::labels_of(std::size_t index) const {
    if (index >= total_) {
        throw ShapeError("basis index out of range");
    }
    std::vector<std::size_t> labels(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        labels[i] = (index / strides_[i]) % dims_[i];
    }
    return labels;
}

std::size_t SystemShape::index_of(std::span<const std::size_t> labels) const {
    if (labels.size() != dims_.size()) {
        throw ShapeError("label count does not match site count");
    }
    std::size_t index = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (labels[i] >= dims_[i]) {
            throw ShapeError("basis label out of range at site " + std::to_string(i));
        }
        index += labels[i] * strides_[i];
    }
    return index;
}

std::vector<std::size_t> site_offsets(const SystemShape& shape, std::span<const std::size_t> sites) {
    shape.check_sites(sites);
    std::vector<std::size_t> offsets{0};
    for (std::size_t s : sites) {
        const std::size_t d = shape.dims()[s];
        const std::size_t stride = shape.strides()[s];
        std::vector<std::size_t> next;
        next.reserve(offsets.size() * d);
        for (std::size_t base : offsets) {
            for (std::size_t n = 0; n < d; ++n) {
                next.push_back(base + n * stride);
            }
        }
        offsets = std::move(next);
    }
    return offsets;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    const auto rows = static_cast<Eigen::Index>(
        checked_mul(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(b.rows())));
    const auto cols = static_cast<Eigen::Index>(
        checked_mul(static_cast<std::size_t>(a.cols()), static_cast<std::size_t>(b.cols())));
    ComplexMatrix out(rows, cols);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b) {
    const auto n = static_cast<Eigen::Index>(
        checked_mul(static_cast<std::size_t>(a.size()), static_cast<std::size_t>(b.size())));
    ComplexVector out(n);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const SystemShape& shape, std::span<const std::size_t> keep) {
    check_square(rho, "partial_trace");
    if (static_cast<std::size_t>(rho.rows()) != shape.total_dim()) {
        throw ShapeError("partial_trace: matrix dimension " + std::to_string(rho.rows()) +
                         " does not match shape dimension " + std::to_string(shape.total_dim()));
    }
    const auto kept = site_offsets(shape, keep);
    const SiteSet traced_sites = shape.complement(keep);
    const auto traced = site_offsets(shape, traced_sites);

    const auto dk = static_cast<Eigen::Index>(kept.size());
    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    for (Eigen::Index j = 0; j < dk; ++j) {
        for (Eigen::Index i = 0; i < dk; ++i) {
            Complex acc{0.0, 0.0};
            for (std::size_t t : traced) {
                acc += rho(static_cast<Eigen::Index>(kept[i] + t), static_cast<Eigen::Index>(kept[j] + t));
            }
            out(i, j) = acc;
        }
    }
    return out;
}

ComplexMatrix embed_local(const ComplexMatrix& op, std::span<const std::size_t> support, const SystemShape& shape) {
    check_local_op(op, support, shape, "embed_local");
    const auto sup = site_offsets(shape, support);
    const auto rest = site_offsets(shape, shape.complement(support));
    const auto n = static_cast<Eigen::Index>(shape.total_dim());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (std::size_t r : rest) {
        for (std::size_t b = 0; b < sup.size(); ++b) {
            for (std::size_t a = 0; a < sup.size(); ++a) {
                out(static_cast<Eigen::Index>(sup[a] + r), static_cast<Eigen::Index>(sup[b] + r)) =
                    op(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            }
        }
    }
    return out;
}

void conjugate_local(ComplexMatrix& rho, const ComplexMatrix& op, std::span<const std::size_t> support,
                     const SystemShape& shape) {
    check_local_op(op, support, shape, "conjugate_local");
    if (static_cast<std::size_t>(rho.rows()) != shape.total_dim() || rho.rows() != rho.cols()) {
        throw ShapeError("conjugate_local: state dimension does not match shape");
    }
    const auto sup = site_offsets(shape, support);
    const auto rest = site_offsets(shape, shape.complement(support));
    left_apply(rho, op, sup, rest);
    right_apply_adjoint(rho, op, sup, rest);
}

ComplexMatrix sandwich_local(const ComplexMatrix& rho, const ComplexMatrix& left, const ComplexMatrix& right,
                             std::span<const std::size_t> support, const SystemShape& shape) {
    check_local_op(left, support, shape, "sandwich_local");
    check_local_op(right, support, shape, "sandwich_local");
    if (static_cast<std::size_t>(rho.rows()) != shape.total_dim() || rho.rows() != rho.cols()) {
        throw ShapeError("sandwich_local: state dimension does not match shape");
    }
    const auto sup = site_offsets(shape, support);
    const auto rest = site_offsets(shape, shape.complement(support));
    ComplexMatrix out = rho;
    left_apply(out, left, sup, rest);
    right_apply_adjoint(out, right, sup, rest);
    return out;
}

ComplexMatrix herm_expm(const ComplexMatrix& h, double t, double herm_tol) {
    check_square(h, "herm_expm");
    const double defect = hermiticity_defect(h);
    if (!(defect <= herm_tol)) {
        throw DomainError("herm_expm: generator is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    if (h.rows() == 0) {
        return h;
    }
    // Symmetrize so roundoff-level asymmetry does not leak into the eigenbasis.
    const ComplexMatrix hs = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hs);
    if (es.info() != Eigen::Success) {
        throw DomainError("herm_expm: eigendecomposition failed");
    }
    const Eigen::VectorXd& w = es.eigenvalues();
    ComplexVector phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        phases(k) = std::polar(1.0, -w(k) * t);
    }
    const ComplexMatrix& v = es.eigenvectors();
    return v * phases.asDiagonal() * v.adjoint();
}

UnitarityCheck is_unitary(const ComplexMatrix& u, double tol) {
    if (u.rows() != u.cols()) {
        return {false, std::numeric_limits<double>::infinity()};
    }
    const ComplexMatrix gram = u.adjoint() * u;
    const double dev = max_abs_diff(gram, ComplexMatrix::Identity(u.rows(), u.cols()));
    return {dev <= tol, dev};
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("max_abs_diff: operand shapes differ");
    }
    return max_abs(a - b);
}

double hermiticity_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return max_abs(m - m.adjoint());
}

bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
                return false;
            }
        }
    }
    return true;
}

namespace pauli {

ComplexMatrix I() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix X() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix Y() {
    ComplexMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

ComplexMatrix Z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

}  // namespace pauli

}  // namespace qsep
