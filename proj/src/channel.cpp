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

#include "qsep/channel.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>

namespace qsep {

namespace {

std::size_t common_dim(const std::vector<ComplexMatrix>& ops) {
    if (ops.empty()) {
        throw ChannelError("channel has no operators");
    }
    const Eigen::Index d = ops.front().rows();
    for (const auto& op : ops) {
        if (op.rows() != d || op.cols() != d) {
            throw ChannelError("channel operators must be square and of equal dimension");
        }
    }
    return static_cast<std::size_t>(d);
}

void check_distinct(const SiteSet& support) {
    for (std::size_t i = 0; i < support.size(); ++i) {
        for (std::size_t j = i + 1; j < support.size(); ++j) {
            if (support[i] == support[j]) {
                throw ChannelError("channel support lists site " + std::to_string(support[i]) + " twice");
            }
        }
    }
}

double parse_param(std::string_view text, std::string_view name) {
    if (const auto eq = text.find('='); eq != std::string_view::npos) {
        if (text.substr(0, eq) != name) {
            throw FormatError("expected parameter '" + std::string(name) + "', got '" + std::string(text) + "'");
        }
        text.remove_prefix(eq + 1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw FormatError("cannot parse '" + std::string(text) + "' as a number");
    }
    return value;
}

void check_unit_interval(double v, std::string_view what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw FormatError(std::string(what) + " must lie in [0, 1]");
    }
}

ComplexMatrix hadamard() {
    ComplexMatrix h(2, 2);
    h << 1.0, 1.0, 1.0, -1.0;
    return h / std::sqrt(2.0);
}

ComplexMatrix projector(std::size_t dim, std::size_t k) {
    ComplexMatrix p = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    return p;
}

}  // namespace

std::string_view to_string(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::Unitary:
            return "unitary";
        case ChannelKind::Kraus:
            return "kraus";
        case ChannelKind::NonlinearToy:
            return "nonlinear-toy";
    }
    return "unknown";
}

Channel Channel::unitary(ComplexMatrix u, SiteSet support, std::string name, const Tolerances& tol) {
    Channel ch(ChannelKind::Unitary, {std::move(u)}, std::move(support), std::move(name));
    const ChannelReport r = validate_channel(ch, tol);
    if (!r.passed) {
        throw ChannelError(r.message);
    }
    return ch;
}

Channel Channel::kraus(std::vector<ComplexMatrix> ops, SiteSet support, std::string name, const Tolerances& tol) {
    Channel ch(ChannelKind::Kraus, std::move(ops), std::move(support), std::move(name));
    const ChannelReport r = validate_channel(ch, tol);
    if (!r.passed) {
        throw ChannelError(r.message);
    }
    return ch;
}

Channel Channel::toy_collapse(std::size_t site) {
    return Channel(ChannelKind::NonlinearToy, {}, SiteSet{site}, "toy-collapse");
}

Channel Channel::unchecked(ChannelKind kind, std::vector<ComplexMatrix> ops, SiteSet support, std::string name) {
    return Channel(kind, std::move(ops), std::move(support), std::move(name));
}

Channel Channel::on(SiteSet support) const {
    if (support.size() != support_.size()) {
        throw ChannelError("relocated support must have the same number of sites");
    }
    check_distinct(support);
    return Channel(kind_, ops_, std::move(support), name_);
}

ChannelReport validate_channel(const Channel& ch, const Tolerances& tol) {
    ChannelReport r;
    try {
        check_distinct(ch.support());
        if (ch.support().empty()) {
            throw ChannelError("channel support is empty");
        }
        switch (ch.kind()) {
            case ChannelKind::Unitary: {
                if (ch.operators().size() != 1) {
                    throw ChannelError("unitary channel must carry exactly one operator");
                }
                common_dim(ch.operators());
                const UnitarityCheck u = is_unitary(ch.operators().front(), tol.unit);
                r.defect = u.deviation;
                r.passed = u.ok;
                r.message = u.ok ? "unitary" : "operator is not unitary (defect " + std::to_string(u.deviation) + ")";
                return r;
            }
            case ChannelKind::Kraus: {
                const auto d = static_cast<Eigen::Index>(common_dim(ch.operators()));
                ComplexMatrix sum = ComplexMatrix::Zero(d, d);
                for (const auto& e : ch.operators()) {
                    sum.noalias() += e.adjoint() * e;
                }
                r.defect = max_abs_diff(sum, ComplexMatrix::Identity(d, d));
                r.passed = r.defect <= tol.eq;
                r.message = r.passed ? "complete"
                                     : "Kraus set is not complete (defect " + std::to_string(r.defect) + ")";
                return r;
            }
            case ChannelKind::NonlinearToy:
                if (ch.support().size() != 1) {
                    throw ChannelError("toy-collapse acts on exactly one site");
                }
                r.defect = 0.0;
                r.passed = true;
                r.message = "nonlinear toy (exempt from CPTP checks)";
                return r;
        }
    } catch (const ChannelError& e) {
        r.defect = std::numeric_limits<double>::infinity();
        r.passed = false;
        r.message = e.what();
    }
    return r;
}

DensityOperator apply_channel(const Channel& ch, const DensityOperator& rho, const Tolerances& tol) {
    const ChannelReport r = validate_channel(ch, tol);
    if (!r.passed) {
        throw ChannelError("apply_channel: " + r.message);
    }
    const SystemShape& shape = rho.shape();
    shape.check_sites(ch.support());
    switch (ch.kind()) {
        case ChannelKind::Unitary: {
            ComplexMatrix m = rho.matrix();
            conjugate_local(m, ch.operators().front(), ch.support(), shape);
            return DensityOperator(std::move(m), shape);
        }
        case ChannelKind::Kraus: {
            const auto n = static_cast<Eigen::Index>(shape.total_dim());
            ComplexMatrix acc = ComplexMatrix::Zero(n, n);
            for (const auto& e : ch.operators()) {
                acc += sandwich_local(rho.matrix(), e, e, ch.support(), shape);
            }
            return DensityOperator(std::move(acc), shape);
        }
        case ChannelKind::NonlinearToy:
            return signaling_toy_map(rho, ch.support());
    }
    throw ChannelError("apply_channel: unknown channel kind");
}

Channel measurement_channel(std::vector<ComplexMatrix> projectors, SiteSet support, const Tolerances& tol) {
    const auto d = static_cast<Eigen::Index>(common_dim(projectors));
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        const ComplexMatrix& p = projectors[i];
        if (hermiticity_defect(p) > tol.herm) {
            throw ChannelError("projector " + std::to_string(i) + " is not Hermitian");
        }
        if (max_abs_diff(p * p, p) > tol.eq) {
            throw ChannelError("projector " + std::to_string(i) + " is not idempotent");
        }
        for (std::size_t j = i + 1; j < projectors.size(); ++j) {
            if (max_abs(p * projectors[j]) > tol.eq) {
                throw ChannelError("projectors " + std::to_string(i) + " and " + std::to_string(j) +
                                   " are not orthogonal");
            }
        }
        sum += p;
    }
    if (max_abs_diff(sum, ComplexMatrix::Identity(d, d)) > tol.eq) {
        throw ChannelError("projectors do not sum to the identity");
    }
    return Channel::kraus(std::move(projectors), std::move(support), "z-measurement", tol);
}

Channel z_measurement(std::size_t site, std::size_t local_dim) {
    std::vector<ComplexMatrix> ps;
    for (std::size_t k = 0; k < local_dim; ++k) {
        ps.push_back(projector(local_dim, k));
    }
    return measurement_channel(std::move(ps), SiteSet{site});
}

DensityOperator signaling_toy_map(const DensityOperator& rho, const SiteSet& support) {
    if (support.size() != 1) {
        throw ChannelError("toy-collapse acts on exactly one site");
    }
    const SystemShape& shape = rho.shape();
    shape.check_sites(support);
    const ComplexMatrix marginal = partial_trace(rho.matrix(), shape, support);

    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < marginal.rows(); ++k) {
        if (marginal(k, k).real() > marginal(best, best).real()) {
            best = k;
        }
    }
    const double p = marginal(best, best).real();
    const std::size_t d = shape.dim(support.front());
    const ComplexMatrix proj = projector(d, static_cast<std::size_t>(best));
    ComplexMatrix out = sandwich_local(rho.matrix(), proj, proj, support, shape);
    out /= p;
    return DensityOperator(std::move(out), shape);
}

Channel builtin_channel(std::string_view id, std::size_t site) {
    std::string_view head = id;
    std::string_view param;
    if (const auto colon = id.find(':'); colon != std::string_view::npos) {
        head = id.substr(0, colon);
        param = id.substr(colon + 1);
    }
    const std::string name(id);
    const SiteSet support{site};
    auto no_param = [&] {
        if (!param.empty()) {
            throw FormatError("built-in '" + std::string(head) + "' takes no parameter");
        }
    };
    auto need_param = [&](std::string_view pname) {
        if (param.empty()) {
            throw FormatError("built-in '" + std::string(head) + "' needs a parameter " + std::string(pname));
        }
        const double v = parse_param(param, pname);
        check_unit_interval(v, pname);
        return v;
    };

    if (head == "identity") {
        no_param();
        return Channel::unitary(pauli::I(), support, name);
    }
    if (head == "x") {
        no_param();
        return Channel::unitary(pauli::X(), support, name);
    }
    if (head == "y") {
        no_param();
        return Channel::unitary(pauli::Y(), support, name);
    }
    if (head == "z") {
        no_param();
        return Channel::unitary(pauli::Z(), support, name);
    }
    if (head == "hadamard") {
        no_param();
        return Channel::unitary(hadamard(), support, name);
    }
    if (head == "depolarizing") {
        const double p = need_param("p");
        return Channel::kraus({std::sqrt(1.0 - 0.75 * p) * pauli::I(), std::sqrt(p / 4.0) * pauli::X(),
                               std::sqrt(p / 4.0) * pauli::Y(), std::sqrt(p / 4.0) * pauli::Z()},
                              support, name);
    }
    if (head == "amplitude-damping") {
        const double g = need_param("gamma");
        ComplexMatrix e0 = ComplexMatrix::Zero(2, 2);
        ComplexMatrix e1 = ComplexMatrix::Zero(2, 2);
        e0(0, 0) = 1.0;
        e0(1, 1) = std::sqrt(1.0 - g);
        e1(0, 1) = std::sqrt(g);
        return Channel::kraus({e0, e1}, support, name);
    }
    if (head == "phase-damping") {
        const double l = need_param("lambda");
        ComplexMatrix e0 = ComplexMatrix::Zero(2, 2);
        ComplexMatrix e1 = ComplexMatrix::Zero(2, 2);
        e0(0, 0) = 1.0;
        e0(1, 1) = std::sqrt(1.0 - l);
        e1(1, 1) = std::sqrt(l);
        return Channel::kraus({e0, e1}, support, name);
    }
    if (head == "z-measurement") {
        no_param();
        return z_measurement(site);
    }
    if (head == "toy-collapse") {
        no_param();
        return Channel::toy_collapse(site);
    }
    throw FormatError("unknown built-in channel '" + name + "'");
}

std::vector<std::string> builtin_cptp_ids() {
    return {"identity",          "x",
            "y",                 "z",
            "hadamard",          "depolarizing:0.5",
            "depolarizing:1",    "amplitude-damping:0.3",
            "amplitude-damping:0.5", "phase-damping:0.4",
            "z-measurement"};
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(dim);
    ComplexMatrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix column phases so the distribution is Haar rather than QR-biased.
    for (Eigen::Index k = 0; k < n; ++k) {
        const double mag = std::abs(r(k, k));
        if (mag > 0.0) {
            q.col(k) *= r(k, k) / mag;
        }
    }
    return q;
}

Channel random_cptp_channel(const SystemShape& shape, const SiteSet& support, Rng& rng) {
    const std::size_t d = shape.sub_dim(support);
    std::uniform_int_distribution<int> pick(0, 3);
    const int n_kraus = pick(rng) + 1;
    if (n_kraus == 1) {
        return Channel::unitary(random_unitary(d, rng), support, "random-unitary");
    }
    // Columns of a random unitary on C^{K d} give an isometry V; E_k are its d x d blocks.
    const ComplexMatrix v = random_unitary(static_cast<std::size_t>(n_kraus) * d, rng);
    const auto di = static_cast<Eigen::Index>(d);
    std::vector<ComplexMatrix> ops;
    for (int k = 0; k < n_kraus; ++k) {
        ops.push_back(v.block(k * di, 0, di, di));
    }
    return Channel::kraus(std::move(ops), support, "random-kraus-" + std::to_string(n_kraus));
}

}  // namespace qsep
