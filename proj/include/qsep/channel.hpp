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

#include <string>
#include <string_view>
#include <vector>

#include "qsep/state.hpp"
#include "qsep/tensor.hpp"

namespace qsep {

enum class ChannelKind { Unitary, Kraus, NonlinearToy };

std::string_view to_string(ChannelKind kind);

/// A map on density operators acting on an explicit set of sites.
///
/// Unitary channels carry one operator, Kraus channels carry E_1..E_K with
/// sum_k E_k^dagger E_k = I, and the nonlinear toy carries none (its rule is
/// fixed). Operators act on the support in the listed site order.
class Channel {
  public:
    /// Validating factories; throw ChannelError on failure.
    static Channel unitary(ComplexMatrix u, SiteSet support, std::string name = "unitary",
                           const Tolerances& tol = {});
    static Channel kraus(std::vector<ComplexMatrix> ops, SiteSet support, std::string name = "kraus",
                         const Tolerances& tol = {});
    static Channel toy_collapse(std::size_t site);

    /// No validation; for inspecting malformed channels with validate_channel().
    static Channel unchecked(ChannelKind kind, std::vector<ComplexMatrix> ops, SiteSet support,
                             std::string name);

    ChannelKind kind() const { return kind_; }
    const SiteSet& support() const { return support_; }
    const std::vector<ComplexMatrix>& operators() const { return ops_; }
    const std::string& name() const { return name_; }

    bool is_physical() const { return kind_ != ChannelKind::NonlinearToy; }

    /// Same operators relocated to another support of equal size.
    Channel on(SiteSet support) const;

  private:
    Channel(ChannelKind kind, std::vector<ComplexMatrix> ops, SiteSet support, std::string name)
        : kind_(kind), ops_(std::move(ops)), support_(std::move(support)), name_(std::move(name)) {}

    ChannelKind kind_;
    std::vector<ComplexMatrix> ops_;
    SiteSet support_;
    std::string name_;
};

struct ChannelReport {
    /// Max-norm defect of U^dagger U = I (unitary) or sum E^dagger E = I (Kraus); 0 for the toy.
    double defect = 0.0;
    bool passed = false;
    std::string message;
};

ChannelReport validate_channel(const Channel& ch, const Tolerances& tol = {});

/// Applies ch to rho. Throws ChannelError for an invalid channel and ShapeError if the support does not fit.
DensityOperator apply_channel(const Channel& ch, const DensityOperator& rho, const Tolerances& tol = {});

/// Non-selective projective measurement; throws ChannelError unless the projectors are
/// Hermitian, idempotent, mutually orthogonal and complete.
Channel measurement_channel(std::vector<ComplexMatrix> projectors, SiteSet support, const Tolerances& tol = {});

/// Computational-basis measurement of one site of local dimension d.
Channel z_measurement(std::size_t site, std::size_t local_dim = 2);

/// Deterministic collapse onto the likeliest computational-basis outcome of one site.
///
/// Ties go to the lowest outcome. Trace preserving but neither linear nor CPTP.
DensityOperator signaling_toy_map(const DensityOperator& rho, const SiteSet& support);

/// Single-qubit built-ins: "identity", "x", "y", "z", "hadamard", "depolarizing:p",
/// "amplitude-damping:gamma", "phase-damping:lambda", "z-measurement", "toy-collapse".
/// Parameters may be written bare ("depolarizing:0.5") or named ("depolarizing:p=0.5").
Channel builtin_channel(std::string_view id, std::size_t site);

/// Representative ids of every physical built-in, with parameters filled in.
std::vector<std::string> builtin_cptp_ids();

ComplexMatrix random_unitary(std::size_t dim, Rng& rng);

/// Random unitary or Kraus channel on `support`; Kraus sets come from a random isometry.
Channel random_cptp_channel(const SystemShape& shape, const SiteSet& support, Rng& rng);

}  // namespace qsep
