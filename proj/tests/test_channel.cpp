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
#include "qsep/channel.hpp"
#include "qsep/state.hpp"

using namespace qsep;

namespace {

DensityOperator ket(const SystemShape& shape, std::vector<std::size_t> labels) {
    return pure_to_density(basis_state(shape, labels));
}

DensityOperator plus_state() {
    return DensityOperator(ComplexMatrix::Constant(2, 2, 0.5), SystemShape::qubits(1));
}

}  // namespace

TEST_CASE("factories validate") {
    CHECK_THROWS_AS(Channel::unitary(2.0 * pauli::X(), {0}), ChannelError);
    CHECK_THROWS_AS(Channel::kraus({pauli::I() * 0.5}, {0}), ChannelError);
    CHECK_THROWS_AS(Channel::unitary(pauli::X(), {0, 0}), ChannelError);
    CHECK_NOTHROW(Channel::kraus({pauli::I()}, {1}));
    CHECK(to_string(ChannelKind::NonlinearToy) == "nonlinear-toy");
}

TEST_CASE("apply_channel examples") {
    Rng rng(20);
    const DensityOperator r = random_density(SystemShape{2, 3}, 3, rng);
    CHECK(max_abs_diff(apply_channel(Channel::unitary(ComplexMatrix::Identity(3, 3), {1}), r).matrix(), r.matrix()) ==
          0.0);

    const SystemShape q2 = SystemShape::qubits(2);
    const DensityOperator flipped = apply_channel(Channel::unitary(pauli::X(), {1}), ket(q2, {0, 0}));
    CHECK(max_abs_diff(flipped.matrix(), ket(q2, {0, 1}).matrix()) == 0.0);

    const Channel dep = builtin_channel("depolarizing:1", 0);
    for (int trial = 0; trial < 10; ++trial) {
        const DensityOperator q = random_density(SystemShape::qubits(1), 2, rng);
        ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
        for (const ComplexMatrix& p : {pauli::I(), pauli::X(), pauli::Y(), pauli::Z()})
            sum += 0.25 * p * q.matrix() * p.adjoint();
        const DensityOperator out = apply_channel(dep, q);
        CHECK(max_abs_diff(out.matrix(), sum) < 1e-12);
        CHECK(max_abs_diff(out.matrix(), ComplexMatrix::Identity(2, 2) / 2.0) < 1e-12);
    }

    CHECK_THROWS_AS(apply_channel(Channel::unitary(pauli::X(), {2}), ket(q2, {0, 0})), ShapeError);
    const Channel broken = Channel::unchecked(ChannelKind::Kraus, {0.5 * pauli::I()}, {0}, "broken");
    CHECK_THROWS_AS(apply_channel(broken, ket(q2, {0, 0})), ChannelError);
}

TEST_CASE("measurement_channel examples") {
    const Channel zm = z_measurement(0);
    CHECK(max_abs_diff(apply_channel(zm, plus_state()).matrix(), ComplexMatrix::Identity(2, 2) / 2.0) < 1e-15);
    const DensityOperator zero = ket(SystemShape::qubits(1), {0});
    CHECK(max_abs_diff(apply_channel(zm, zero).matrix(), zero.matrix()) == 0.0);

    const DensityOperator bell = pure_to_density(bell_state(BellVariant::PhiPlus));
    ComplexMatrix classical = ComplexMatrix::Zero(4, 4);
    classical(0, 0) = 0.5;
    classical(3, 3) = 0.5;
    CHECK(max_abs_diff(apply_channel(z_measurement(1), bell).matrix(), classical) < 1e-15);

    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    CHECK_THROWS_AS(measurement_channel({p0}, {0}), ChannelError);
    CHECK_THROWS_AS(measurement_channel({p0, p0}, {0}), ChannelError);
    const ComplexMatrix plus = ComplexMatrix::Constant(2, 2, 0.5);
    CHECK_THROWS_AS(measurement_channel({p0, plus}, {0}), ChannelError);
    CHECK_NOTHROW(measurement_channel({plus, ComplexMatrix::Identity(2, 2) - plus}, {0}));
    CHECK(z_measurement(0, 3).operators().size() == 3);
}

TEST_CASE("signaling_toy_map examples") {
    const SiteSet s0{0};
    const DensityOperator zero = ket(SystemShape::qubits(1), {0});
    CHECK(max_abs_diff(signaling_toy_map(zero, s0).matrix(), zero.matrix()) == 0.0);

    // Marginal diag(0.3, 0.7) with coherences, on the first site of two.
    Rng rng(21);
    const DensityOperator other = random_density(SystemShape::qubits(1), 2, rng);
    ComplexMatrix a(2, 2);
    a << 0.3, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.7;
    const DensityOperator rho = tensor_product(DensityOperator(a, SystemShape::qubits(1)), other);
    ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    const ComplexMatrix proj = oracle::embed(p1, {0}, {2, 2});
    ComplexMatrix expect = proj * rho.matrix() * proj;
    expect /= expect.trace();
    CHECK(max_abs_diff(signaling_toy_map(rho, s0).matrix(), expect) < 1e-15);

    const DensityOperator bell = pure_to_density(bell_state(BellVariant::PhiPlus));
    const DensityOperator collapsed = signaling_toy_map(bell, {1});
    CHECK(max_abs_diff(collapsed.matrix(), ket(SystemShape::qubits(2), {0, 0}).matrix()) < 1e-15);
    CHECK(max_abs_diff(reduce(collapsed, std::vector<std::size_t>{0}).matrix,
                       ket(SystemShape::qubits(1), {0}).matrix()) < 1e-15);
}

TEST_CASE("validate_channel examples") {
    Rng rng(22);
    ComplexMatrix g = ComplexMatrix::Random(4, 4);
    const ComplexMatrix h = (g + g.adjoint()) / 2.0;
    CHECK(validate_channel(Channel::unitary(herm_expm(h, 0.9), {0, 1})).passed);

    const Channel ad = builtin_channel("amplitude-damping:0.3", 0);
    CHECK(validate_channel(ad).passed);
    ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
    for (const ComplexMatrix& e : ad.operators()) sum += e.adjoint() * e;
    CHECK(max_abs_diff(sum, ComplexMatrix::Identity(2, 2)) < 1e-15);

    std::vector<ComplexMatrix> missing = builtin_channel("depolarizing:0.8", 0).operators();
    const double weight = (missing.back().adjoint() * missing.back())(0, 0).real();
    missing.pop_back();
    const ChannelReport rep = validate_channel(Channel::unchecked(ChannelKind::Kraus, missing, {0}, "missing"));
    CHECK_FALSE(rep.passed);
    CHECK(rep.defect == doctest::Approx(weight));

    CHECK(validate_channel(Channel::toy_collapse(0)).passed);
}

TEST_CASE("builtin ids") {
    CHECK(builtin_channel("depolarizing:p=0.25", 3).support() == SiteSet{3});
    CHECK(builtin_channel("phase-damping:lambda=0.4", 0).kind() == ChannelKind::Kraus);
    CHECK(builtin_channel("hadamard", 0).kind() == ChannelKind::Unitary);
    CHECK(builtin_channel("toy-collapse", 1).kind() == ChannelKind::NonlinearToy);
    CHECK_THROWS_AS(builtin_channel("depolarizing:1.5", 0), FormatError);
    CHECK_THROWS_AS(builtin_channel("teleport", 0), FormatError);
    for (const std::string& id : builtin_cptp_ids()) CHECK(validate_channel(builtin_channel(id, 0)).passed);
}

TEST_CASE("physical channels preserve validity and are linear") {
    Rng rng(23);
    const SystemShape shape{2, 2, 3};
    for (int trial = 0; trial < 30; ++trial) {
        const SiteSet support = trial % 2 ? SiteSet{2, 0} : SiteSet{1};
        const Channel ch = random_cptp_channel(shape, support, rng);
        CHECK(validate_channel(ch).passed);
        const DensityOperator r1 = random_density(shape, 2, rng);
        const DensityOperator r2 = random_density(shape, 5, rng);
        const DensityOperator out1 = apply_channel(ch, r1);
        const DensityOperator out2 = apply_channel(ch, r2);
        CHECK(validate_state(out1).passed);
        CHECK(std::abs(out1.matrix().trace() - 1.0) <= 1e-10);
        const double alpha = 0.37;
        const DensityOperator mix(alpha * r1.matrix() + (1 - alpha) * r2.matrix(), shape);
        CHECK(max_abs_diff(apply_channel(ch, mix).matrix(), alpha * out1.matrix() + (1 - alpha) * out2.matrix()) <=
              1e-10);
    }
}

TEST_CASE("toy map violates linearity on a witness triple") {
    const SystemShape q1 = SystemShape::qubits(1);
    const DensityOperator r1 = ket(q1, {0});
    const DensityOperator r2 = ket(q1, {1});
    const double alpha = 0.4;
    const DensityOperator mix(alpha * r1.matrix() + (1 - alpha) * r2.matrix(), q1);
    const ComplexMatrix lhs = signaling_toy_map(mix, {0}).matrix();
    const ComplexMatrix rhs = alpha * signaling_toy_map(r1, {0}).matrix() +
                              (1 - alpha) * signaling_toy_map(r2, {0}).matrix();
    CHECK(max_abs_diff(lhs, rhs) == doctest::Approx(0.4));
}

TEST_CASE("channels on disjoint supports commute") {
    Rng rng(24);
    const SystemShape shape = SystemShape::qubits(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Channel a = random_cptp_channel(shape, {0, 2}, rng);
        const Channel b = random_cptp_channel(shape, {1}, rng);
        const DensityOperator r = random_density(shape, 3, rng);
        CHECK(max_abs_diff(apply_channel(a, apply_channel(b, r)).matrix(),
                           apply_channel(b, apply_channel(a, r)).matrix()) <= 1e-12);
    }
}

TEST_CASE("random_unitary is unitary") {
    Rng rng(25);
    for (std::size_t d : {2u, 3u, 4u, 8u}) CHECK(is_unitary(random_unitary(d, rng)).ok);
}
