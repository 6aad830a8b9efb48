// Copyright 2026 The gcensus Authors
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

#ifndef GCENSUS_ERRORS_HPP
#define GCENSUS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gcensus {

/// Base of every error raised by the library. Errors marked "sample-level"
/// reject a single Monte Carlo draw and are tallied by the census drivers.
class CensusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sample-level: standard form I discriminant is negative beyond tolerance.
class ComplexRootError : public CensusError {
 public:
  using CensusError::CensusError;
};

/// Sample-level: the standard form II solver found no root.
class NoConvergenceError : public CensusError {
 public:
  using CensusError::CensusError;
};

/// Sample-level: momentum block of the inverse covariance is singular.
class SingularBlockError : public CensusError {
 public:
  using CensusError::CensusError;
};

/// Sample-level: a discretized kernel has a nonpositive eigenvalue.
class NonPositiveSpectrumError : public CensusError {
 public:
  using CensusError::CensusError;
};

/// Sample-level: some random grid of a robust volume estimate was rejected.
class SampleDiscarded : public CensusError {
 public:
  using CensusError::CensusError;
};

/// Input outside the domain of a closed-form expression.
class DomainError : public CensusError {
 public:
  using CensusError::CensusError;
};

/// Matrix is not of the required (thermal diagonal) shape.
class ShapeError : public CensusError {
 public:
  using CensusError::CensusError;
};

/// Finite-difference metric failed its step-halving consistency check.
class StepError : public CensusError {
 public:
  using CensusError::CensusError;
};

/// Probabilities requested from a census that accepted nothing.
class EmptyCensusError : public CensusError {
 public:
  using CensusError::CensusError;
};

}  // namespace gcensus

#endif  // GCENSUS_ERRORS_HPP
