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

#include <stdexcept>
#include <string>

namespace qsep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Dimension or site-index mismatch between an operand and its declared shape.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// A requested dimension exceeds the dense-storage cap.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Input outside the mathematical domain of an operation (e.g. non-Hermitian generator).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A channel failed unitarity, completeness or projector checks.
class ChannelError : public Error {
  public:
    using Error::Error;
};

/// Measured and disturbed site sets overlap.
class PartitionError : public Error {
  public:
    using Error::Error;
};

/// A clock advance would leave a gate half-absorbed.
class SurfaceError : public Error {
  public:
    using Error::Error;
};

/// A restricted unitary touches sites outside its declared cone.
class StructuralError : public Error {
  public:
    using Error::Error;
};

/// Malformed JSON document or unknown identifier.
class FormatError : public Error {
  public:
    using Error::Error;
};

}  // namespace qsep
