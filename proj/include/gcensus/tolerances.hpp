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

#ifndef GCENSUS_TOLERANCES_HPP
#define GCENSUS_TOLERANCES_HPP

namespace gcensus {

/// Every numerical threshold used by the census in one place. Functions that
/// need a threshold take a `const Tolerances&` defaulting to `kDefaultTolerances`.
struct Tolerances {
  /// Minimum eigenvalue of M + iΩ (and of the mirrored matrix) accepted as >= 0.
  double uncertainty_psd = 1e-10;
  /// Relative slack on the discriminant S^2 - 4 det(C)^2 of standard form I.
  double complex_root = 1e-9;
  /// Newton convergence on the scaled standard-form-II residuals.
  double newton_residual = 1e-12;
  int newton_max_iterations = 200;
  /// Residual accepted from the bracketing fallback of the form-II solver.
  double bracket_residual = 1e-10;
  /// n - 1 or m1 - 1 below this is treated as the vacuum-like 0/0 limit of a0.
  double degenerate_a0 = 1e-12;
  /// Slack on "total variance exceeds bound" comparisons.
  double variance_bound = 1e-12;
  /// Minimum eigenvalue of M - I for a strictly positive P-representation.
  double classical_strict = 1e-12;
  /// Verdict margins inside this band may disagree between the two criteria.
  double oracle_band = 1e-9;
  /// A discretized kernel is rejected when some eigenvalue is <= floor * max.
  double kernel_eigen_floor = 0.0;
  /// Relative conditioning guard for the momentum block of the inverse covariance.
  double singular_block = 1e-14;
  /// Random grid coordinates closer than this are redrawn.
  double grid_coincidence = 1e-9;
  /// Allowed Richardson disagreement of the finite-difference metric.
  double richardson = 1e-3;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace gcensus

#endif  // GCENSUS_TOLERANCES_HPP
