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

#include "oracles.hpp"
#include "qsep/state.hpp"

using namespace qsep;

namespace {

const ComplexMatrix kHalfI = ComplexMatrix::Identity(2, 2) / 2.0;

}  // namespace

TEST_CASE("pure_to_density examples") {
    const SystemShape q1 = SystemShape::qubits(1);
    const DensityOperator zero = pure_to_density(basis_state(q1, std::vector<std::size_t>{0}));
    ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
    expect(0, 0) = 1.0;
    CHECK(max_abs_diff(zero.matrix(), expect) == 0.0);

    ComplexVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const DensityOperator p = pure_to_density(PureState(plus, q1));
    CHECK(max_abs_diff(p.matrix(), ComplexMatrix::Constant(2, 2, 0.5)) < 1e-15);

    Rng rng(10);
    for (int trial = 0; trial < 10; ++trial) {
        const DensityOperator r = pure_to_density(random_pure(SystemShape::qubits(3), rng));
        CHECK(std::abs(r.purity() - 1.0) <= 1e-12);
        CHECK(validate_state(r).passed);
    }
}

TEST_CASE("PureState validation") {
    ComplexVector v(2);
    v << 1.0, 1.0;
    CHECK_THROWS_AS(PureState(v, SystemShape::qubits(1)), DomainError);
    CHECK_THROWS_AS(PureState(ComplexVector::Zero(3), SystemShape::qubits(1)), ShapeError);
}

TEST_CASE("bell_state examples") {
    const double r = 1.0 / std::sqrt(2.0);
    const ComplexVector phi = bell_state(BellVariant::PhiPlus).amplitudes();
    CHECK(std::abs(phi(0) - r) == 0.0);
    CHECK(std::abs(phi(1)) == 0.0);
    CHECK(std::abs(phi(2)) == 0.0);
    CHECK(std::abs(phi(3) - r) == 0.0);

    const ComplexVector psi = bell_state(BellVariant::PsiMinus).amplitudes();
    CHECK(std::abs(psi(1) - r) == 0.0);
    CHECK(std::abs(psi(2) + r) == 0.0);

    for (auto v : {BellVariant::PhiPlus, BellVariant::PhiMinus, BellVariant::PsiPlus, BellVariant::PsiMinus}) {
        const DensityOperator rho = pure_to_density(bell_state(v));
        CHECK(validate_state(rho).passed);
        for (std::size_t s : {0u, 1u})
            CHECK(max_abs_diff(reduce(rho, std::vector<std::size_t>{s}).matrix, kHalfI) <= 1e-10);
    }
    CHECK(parse_bell_variant("psi-") == BellVariant::PsiMinus);
    CHECK_THROWS_AS(parse_bell_variant("phi"), FormatError);
}

TEST_CASE("ghz_state examples") {
    CHECK((ghz_state(2).amplitudes() - bell_state(BellVariant::PhiPlus).amplitudes()).norm() == 0.0);
    const DensityOperator g3 = pure_to_density(ghz_state(3));
    CHECK(max_abs_diff(reduce(g3, std::vector<std::size_t>{0}).matrix, kHalfI) <= 1e-10);

    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect(0, 0) = 0.5;
    expect(3, 3) = 0.5;
    const std::vector<std::size_t> keep{0, 1};
    const ComplexMatrix oracle_marginal = oracle::partial_trace(g3.matrix(), g3.shape().dims(), keep);
    CHECK(max_abs_diff(oracle_marginal, expect) < 1e-15);
    CHECK(max_abs_diff(reduce(g3, keep).matrix, oracle_marginal) < 1e-15);

    for (std::size_t n = 2; n <= 6; ++n) {
        const DensityOperator g = pure_to_density(ghz_state(n));
        CHECK(validate_state(g).passed);
        for (std::size_t s = 0; s < n; ++s)
            CHECK(max_abs_diff(reduce(g, std::vector<std::size_t>{s}).matrix, kHalfI) <= 1e-10);
    }
    CHECK_THROWS_AS(ghz_state(1), DomainError);
}

TEST_CASE("random_density examples") {
    const SystemShape shape{2, 3};
    CHECK(std::abs(random_density(shape, 1, 11).purity() - 1.0) <= 1e-10);
    CHECK(max_abs_diff(random_density(shape, 3, 12).matrix(), random_density(shape, 3, 12).matrix()) == 0.0);
    CHECK(max_abs_diff(random_density(shape, 3, 12).matrix(), random_density(shape, 3, 13).matrix()) > 0.0);

    double floor = 1.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const DensityOperator r = random_density(SystemShape::qubits(3), 1 + seed % 8, seed);
        const StateReport rep = validate_state(r);
        CHECK(rep.passed);
        floor = std::min(floor, rep.min_eigenvalue);
    }
    CHECK(floor >= -1e-12);
}

TEST_CASE("random_product_density is a product") {
    Rng rng(14);
    const SystemShape shape{2, 3};
    const DensityOperator r = random_product_density(shape, 2, rng);
    CHECK(validate_state(r).passed);
    const DensityOperator a = reduce(r, std::vector<std::size_t>{0}).as_density();
    const DensityOperator b = reduce(r, std::vector<std::size_t>{1}).as_density();
    CHECK(max_abs_diff(tensor_product(a, b).matrix(), r.matrix()) < 1e-12);
}

TEST_CASE("validate_state examples") {
    const StateReport mixed = validate_state(DensityOperator::maximally_mixed(SystemShape::qubits(2)));
    CHECK(mixed.passed);
    CHECK(mixed.hermiticity_defect == 0.0);
    CHECK(mixed.trace_defect == 0.0);

    ComplexMatrix bad = ComplexMatrix::Identity(4, 4) / 4.0;
    bad(0, 1) = 1e-3;
    const StateReport rep = validate_state(bad);
    CHECK_FALSE(rep.passed);
    CHECK(rep.hermiticity_defect == doctest::Approx(1e-3));

    CHECK(validate_state(pure_to_density(bell_state(BellVariant::PhiPlus))).passed);

    ComplexMatrix negative = ComplexMatrix::Zero(2, 2);
    negative(0, 0) = 1.1;
    negative(1, 1) = -0.1;
    const StateReport neg = validate_state(negative);
    CHECK_FALSE(neg.passed);
    CHECK(neg.min_eigenvalue == doctest::Approx(-0.1));

    CHECK_THROWS_AS(DensityOperator::checked(negative, SystemShape::qubits(1)), DomainError);
    CHECK_THROWS_AS(DensityOperator(ComplexMatrix::Identity(3, 3), SystemShape::qubits(1)), ShapeError);
}

TEST_CASE("reduced states of random states are valid and follow keep order") {
    Rng rng(15);
    const SystemShape shape{2, 3, 2};
    const DensityOperator r = random_density(shape, 3, rng);
    const ReducedState red = reduce(r, std::vector<std::size_t>{2, 1});
    CHECK(red.kept_sites == SiteSet{2, 1});
    const DensityOperator d = red.as_density();
    CHECK(d.shape() == SystemShape{2, 3});
    CHECK(validate_state(d).passed);
    CHECK(max_abs_diff(red.matrix, oracle::partial_trace(r.matrix(), shape.dims(), {2, 1})) < 1e-12);
}
