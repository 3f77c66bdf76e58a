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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qsep/state.hpp"
#include "qsep/tensor.hpp"

using namespace qsep;

namespace {

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
    const ComplexMatrix a = random_matrix(dim, dim, rng);
    return (a + a.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("SystemShape basics") {
    const SystemShape s{2, 3, 2};
    CHECK(s.total_dim() == 12);
    CHECK(s.strides() == std::vector<std::size_t>{6, 2, 1});
    CHECK(s.index_of(std::vector<std::size_t>{1, 2, 1}) == 11);
    CHECK(s.labels_of(7) == std::vector<std::size_t>{1, 0, 1});
    CHECK(s.complement(std::vector<std::size_t>{1}) == SiteSet{0, 2});
    CHECK_THROWS_AS(SystemShape({2, 1}), ShapeError);
    CHECK_THROWS_AS(SystemShape::qubits(13), CapacityError);
    CHECK_NOTHROW(SystemShape::qubits(12));
    CHECK_THROWS_AS(s.check_sites(std::vector<std::size_t>{0, 0}), ShapeError);
    CHECK_THROWS_AS(s.check_sites(std::vector<std::size_t>{3}), ShapeError);
}

TEST_CASE("tensor_product examples") {
    CHECK(max_abs_diff(tensor_product(pauli::I(), pauli::I()), ComplexMatrix::Identity(4, 4)) == 0.0);

    ComplexVector ket10 = ComplexVector::Zero(4);
    ket10(2) = 1.0;
    const ComplexVector out = tensor_product(pauli::X(), pauli::I()) * ket10;
    CHECK(std::abs(out(0) - 1.0) == 0.0);
    CHECK(out.norm() == doctest::Approx(1.0));

    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = random_matrix(2, 2, rng);
        const ComplexMatrix b = random_matrix(2, 2, rng);
        const ComplexVector u = random_matrix(2, 1, rng);
        const ComplexVector v = random_matrix(2, 1, rng);
        const ComplexVector lhs = tensor_product(a, b) * tensor_product(u, v);
        const ComplexVector au = a * u;
        const ComplexVector bv = b * v;
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) CHECK(std::abs(lhs(2 * i + k) - au(i) * bv(k)) < 1e-12);
    }
    const ComplexMatrix rect = tensor_product(random_matrix(3, 2, rng), random_matrix(2, 5, rng));
    CHECK(rect.rows() == 6);
    CHECK(rect.cols() == 10);
}

TEST_CASE("tensor_product capacity") {
    const ComplexMatrix big = ComplexMatrix::Identity(128, 128);
    CHECK_THROWS_AS(tensor_product(big, ComplexMatrix::Identity(64, 64)), CapacityError);
}

TEST_CASE("partial_trace examples and errors") {
    const DensityOperator bell = pure_to_density(bell_state(BellVariant::PhiPlus));
    CHECK(max_abs_diff(partial_trace(bell.matrix(), bell.shape(), std::vector<std::size_t>{0}),
                       ComplexMatrix::Identity(2, 2) / 2.0) < 1e-15);

    Rng rng(2);
    const SystemShape one = SystemShape::qubits(1);
    const DensityOperator a = random_density(one, 2, rng);
    const DensityOperator b = random_density(SystemShape{3}, 2, rng);
    const DensityOperator ab = tensor_product(a, b);
    CHECK(max_abs_diff(partial_trace(ab.matrix(), ab.shape(), std::vector<std::size_t>{0}), a.matrix()) < 1e-12);
    CHECK(max_abs_diff(partial_trace(ab.matrix(), ab.shape(), std::vector<std::size_t>{1}), b.matrix()) < 1e-12);

    const DensityOperator r3 = random_density(SystemShape::qubits(3), 4, rng);
    const std::vector<std::size_t> keep{0, 2};
    CHECK(max_abs_diff(partial_trace(r3.matrix(), r3.shape(), keep),
                       oracle::partial_trace(r3.matrix(), r3.shape().dims(), keep)) <= 1e-12);

    const ComplexMatrix empty = partial_trace(r3.matrix(), r3.shape(), std::vector<std::size_t>{});
    CHECK(empty.rows() == 1);
    CHECK(std::abs(empty(0, 0) - r3.matrix().trace()) < 1e-12);

    CHECK_THROWS_AS(partial_trace(ComplexMatrix::Identity(3, 3), SystemShape::qubits(2), keep), ShapeError);
    CHECK_THROWS_AS(partial_trace(r3.matrix(), r3.shape(), std::vector<std::size_t>{4}), ShapeError);
}

TEST_CASE("partial_trace properties") {
    Rng rng(3);
    const SystemShape shape{2, 3, 2};
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix m1 = random_matrix(12, 12, rng);
        const ComplexMatrix m2 = random_matrix(12, 12, rng);
        const Complex alpha(0.3, -1.2);
        const std::vector<std::size_t> keep{2, 0};
        const ComplexMatrix lhs = partial_trace(m1 + alpha * m2, shape, keep);
        const ComplexMatrix rhs = partial_trace(m1, shape, keep) + alpha * partial_trace(m2, shape, keep);
        CHECK(max_abs_diff(lhs, rhs) < 1e-12);
        CHECK(std::abs(partial_trace(m1, shape, keep).trace() - m1.trace()) < 1e-12);
        const ComplexMatrix all = partial_trace(m1, shape, std::vector<std::size_t>{0, 1, 2});
        CHECK(max_abs_diff(all, m1) == 0.0);
        CHECK(max_abs_diff(lhs, oracle::partial_trace(m1 + alpha * m2, shape.dims(), keep)) < 1e-12);
    }
    // Unnormalized product: Tr_B(A (x) B) = A Tr(B).
    const ComplexMatrix a = random_matrix(2, 2, rng);
    const ComplexMatrix b = random_matrix(3, 3, rng);
    CHECK(max_abs_diff(partial_trace(tensor_product(a, b), SystemShape{2, 3}, std::vector<std::size_t>{0}),
                       a * b.trace()) < 1e-12);
}

TEST_CASE("embed_local examples") {
    const SystemShape q2 = SystemShape::qubits(2);
    const SystemShape q3 = SystemShape::qubits(3);
    CHECK(max_abs_diff(embed_local(ComplexMatrix::Identity(4, 4), std::vector<std::size_t>{2, 0}, q3),
                       ComplexMatrix::Identity(8, 8)) == 0.0);
    CHECK(max_abs_diff(embed_local(pauli::X(), std::vector<std::size_t>{0}, q2),
                       tensor_product(pauli::X(), pauli::I())) == 0.0);

    Rng rng(4);
    const ComplexMatrix u = herm_expm(random_hermitian(4, rng), 0.7);
    const std::vector<std::size_t> support{0, 2};
    CHECK(max_abs_diff(embed_local(u, support, q3), oracle::embed(u, support, q3.dims())) < 1e-12);
    const std::vector<std::size_t> reversed{2, 0};
    CHECK(max_abs_diff(embed_local(u, reversed, q3), oracle::embed(u, reversed, q3.dims())) < 1e-12);

    CHECK_THROWS_AS(embed_local(u, std::vector<std::size_t>{0}, q3), ShapeError);
    CHECK_THROWS_AS(embed_local(u, std::vector<std::size_t>{0, 3}, q3), ShapeError);
}

TEST_CASE("embed_local properties") {
    Rng rng(5);
    const SystemShape shape{2, 3, 2};
    const std::vector<std::size_t> s1{1, 2};
    const std::vector<std::size_t> s0{0};
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix u = random_matrix(6, 6, rng);
        const ComplexMatrix v = random_matrix(6, 6, rng);
        CHECK(max_abs_diff(embed_local(u, s1, shape) * embed_local(v, s1, shape), embed_local(u * v, s1, shape)) <
              1e-12);
        const ComplexMatrix w = random_matrix(2, 2, rng);
        const ComplexMatrix eu = embed_local(u, s1, shape);
        const ComplexMatrix ew = embed_local(w, s0, shape);
        CHECK(max_abs_diff(eu * ew, ew * eu) <= 1e-12);
    }
}

TEST_CASE("conjugate_local and sandwich_local agree with full embedding") {
    Rng rng(6);
    const SystemShape shape{3, 2, 2};
    const ComplexMatrix rho = random_matrix(12, 12, rng);
    const ComplexMatrix e = random_matrix(4, 4, rng);
    const ComplexMatrix f = random_matrix(4, 4, rng);
    const std::vector<std::size_t> support{2, 1};
    const ComplexMatrix full_e = oracle::embed(e, support, shape.dims());
    const ComplexMatrix full_f = oracle::embed(f, support, shape.dims());
    CHECK(max_abs_diff(sandwich_local(rho, e, f, support, shape), full_e * rho * full_f.adjoint()) < 1e-12);
    ComplexMatrix conj = rho;
    conjugate_local(conj, e, support, shape);
    CHECK(max_abs_diff(conj, full_e * rho * full_e.adjoint()) < 1e-12);
}

TEST_CASE("herm_expm examples") {
    CHECK(max_abs_diff(herm_expm(ComplexMatrix::Zero(3, 3), 2.0), ComplexMatrix::Identity(3, 3)) == 0.0);

    const ComplexMatrix u = herm_expm(pauli::Z(), std::numbers::pi);
    CHECK(std::abs(u(0, 0) - std::exp(Complex(0, -std::numbers::pi))) < 1e-12);
    CHECK(std::abs(u(1, 1) - std::exp(Complex(0, std::numbers::pi))) < 1e-12);
    CHECK(max_abs_diff(u, -ComplexMatrix::Identity(2, 2)) < 1e-12);

    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix h = random_hermitian(5, rng);
        CHECK(max_abs_diff(herm_expm(h, 1.3) * herm_expm(h, -1.3), ComplexMatrix::Identity(5, 5)) <= 1e-10);
        CHECK(is_unitary(herm_expm(h, 3.0)).ok);
        CHECK(max_abs_diff(herm_expm(h, 0.4), oracle::expm(h, 0.4)) < 1e-10);
    }

    ComplexMatrix bad = pauli::X();
    bad(0, 1) += 1e-3;
    CHECK_THROWS_AS(herm_expm(bad, 1.0), DomainError);
}

TEST_CASE("herm_expm group property") {
    Rng rng(8);
    std::uniform_real_distribution<double> time(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        const ComplexMatrix h = random_hermitian(4, rng);
        const double t = time(rng);
        const double s = time(rng);
        CHECK(max_abs_diff(herm_expm(h, t) * herm_expm(h, s), herm_expm(h, t + s)) <= 1e-10);
    }
}

TEST_CASE("is_unitary examples") {
    const UnitarityCheck id = is_unitary(ComplexMatrix::Identity(4, 4));
    CHECK(id.ok);
    CHECK(id.deviation == 0.0);

    ComplexMatrix perturbed = ComplexMatrix::Identity(4, 4);
    perturbed(1, 2) = 1e-3;
    const UnitarityCheck bad = is_unitary(perturbed, 1e-6);
    CHECK_FALSE(bad.ok);
    CHECK(bad.deviation == doctest::Approx(1e-3));
    CHECK_FALSE(is_unitary(ComplexMatrix::Identity(2, 3)).ok);
}

TEST_CASE("numeric predicates") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = Complex(0, 2);
    CHECK(max_abs(m) == 2.0);
    CHECK(hermiticity_defect(m) == 2.0);
    CHECK(all_finite(m));
    m(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(all_finite(m));
}

TEST_CASE("fast kernels agree with naive oracles up to dimension 16") {
    Rng rng(9);
    const std::vector<std::vector<std::size_t>> shapes{{2, 2}, {2, 3}, {3, 2}, {2, 2, 2}, {2, 2, 2, 2}, {4, 4}, {2, 8}};
    for (const auto& dims : shapes) {
        const SystemShape shape(dims);
        const std::size_t d = shape.total_dim();
        const ComplexMatrix rho = random_matrix(d, d, rng);
        for (std::size_t s = 0; s < dims.size(); ++s) {
            const std::vector<std::size_t> keep{s};
            CHECK(max_abs_diff(partial_trace(rho, shape, keep), oracle::partial_trace(rho, dims, keep)) < 1e-12);
            const ComplexMatrix op = random_matrix(dims[s], dims[s], rng);
            CHECK(max_abs_diff(embed_local(op, keep, shape), oracle::embed(op, keep, dims)) < 1e-12);
        }
        const ComplexMatrix a = random_matrix(dims[0], dims[0], rng);
        const ComplexMatrix b = random_matrix(d / dims[0], d / dims[0], rng);
        CHECK(max_abs_diff(tensor_product(a, b), oracle::kron(a, b)) == 0.0);
    }
}
