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

#ifndef GCENSUS_FIDELITY_HPP
#define GCENSUS_FIDELITY_HPP

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gcensus/states.hpp"
#include "gcensus/tolerances.hpp"

namespace gcensus {

/// One-mode covariance matrix (vacuum = identity).
struct OneModeState {
  Mat2 a = Mat2::Identity();

  /// Symmetrizes and checks positive definiteness.
  static OneModeState from_matrix(const Mat2 &a);
};

/// Closed-form one-mode Gaussian fidelity,
///   F = 2 / (sqrt(det(A1 + A2) + P) - sqrt(P)),  P = (det A1 - 1)(det A2 - 1).
/// This is the squared (Uhlmann) convention: F(vacuum, thermal nu = 3) = 1/2.
double fidelity_one_mode(const OneModeState &s1, const OneModeState &s2);
double fidelity_one_mode(const Mat2 &a1, const Mat2 &a2);

/// Fidelity of two-mode thermal states with diagonal covariances
/// diag(a, a, b, b), evaluated as sqrt(det(2 [(D1 D2 + I) - sqrt((D1^2 - I)(D2^2 - I))]^-1)).
double fidelity_two_mode_diagonal(const Mat4 &d1, const Mat4 &d2);

/// 2 (1 - F).
double bures_distance_sq(double fidelity);

/// The two factors of the squeezed-thermal Bures volume element f(r) g(beta).
struct MarginalDensity {
  static double f(double r) { return std::sinh(2.0 * r); }
  static double g(double beta);
};

enum class Marginal { f, g };

/// Integral of the chosen marginal over [1e-6, upper] by adaptive Gauss-Kronrod quadrature.
double improperness_probe(Marginal which, double upper);

/// Bures metric on the squeezed-thermal manifold in coordinates (beta, r, theta),
/// from central second differences of 2 (1 - F) with relative step h and a
/// Richardson check against h/2. Returns the extrapolated estimate.
Eigen::Matrix3d metric_by_finite_difference(const SqueezedThermalParams &p, double h = 1e-4,
                                            const Tolerances &tol = kDefaultTolerances);

struct VolumeCheckPoint {
  double beta = 0.0;
  double r = 0.0;
  double sqrt_det = 0.0;
  /// f(r) g(beta)
  double reference = 0.0;
  double ratio = 0.0;
};

struct VolumeCheck {
  std::vector<VolumeCheckPoint> points;
  /// (max ratio - min ratio) / mean ratio.
  double relative_spread = 0.0;
};

/// Compares sqrt(det g) of the finite-difference metric at theta = 0 with
/// f(r) g(beta) on the Cartesian product of the given coordinates.
VolumeCheck volume_element_check(std::span<const double> betas, std::span<const double> rs, double h = 1e-4);

}  // namespace gcensus

#endif  // GCENSUS_FIDELITY_HPP
