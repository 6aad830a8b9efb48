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

#ifndef GCENSUS_STATES_HPP
#define GCENSUS_STATES_HPP

#include <utility>

#include <Eigen/Dense>

#include "gcensus/tolerances.hpp"

namespace gcensus {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Vec2 = Eigen::Vector2d;

/// Two-mode covariance matrix in (x1, p1, x2, p2) ordering, normalized so the
/// vacuum is the identity (quadrature commutator [x, p] = 2i).
///
/// The stored matrix is symmetric bit-for-bit: every factory mirrors the upper
/// triangle onto the lower one.
class CovarianceMatrix {
 public:
  CovarianceMatrix() : m_(Mat4::Identity()) {}

  static CovarianceMatrix from_upper(const Mat4 &entries);
  static CovarianceMatrix from_blocks(const Mat2 &mode1, const Mat2 &mode2, const Mat2 &cross);
  static CovarianceMatrix identity() { return CovarianceMatrix(); }
  static CovarianceMatrix scaled_identity(double v) { return from_upper(v * Mat4::Identity()); }
  /// Pure two-mode squeezed vacuum; x's correlate, p's anticorrelate.
  static CovarianceMatrix two_mode_squeezed_vacuum(double r);

  const Mat4 &matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  Mat2 mode1() const { return m_.block<2, 2>(0, 0); }
  Mat2 mode2() const { return m_.block<2, 2>(2, 2); }
  Mat2 cross() const { return m_.block<2, 2>(0, 2); }
  double determinant() const { return m_.determinant(); }

  /// S M S^T, re-symmetrized.
  CovarianceMatrix transformed(const Mat4 &s) const;
  /// Exchanges the roles of the two modes.
  CovarianceMatrix swapped_modes() const;
  /// Momentum reversal of mode 2 (the phase-space image of partial transposition).
  CovarianceMatrix mirrored() const;

  friend bool operator==(const CovarianceMatrix &a, const CovarianceMatrix &b) { return a.m_ == b.m_; }

 private:
  explicit CovarianceMatrix(const Mat4 &m) : m_(m) {}
  Mat4 m_;
};

/// Block-diagonal symplectic form with J = [[0, 1], [-1, 0]] per mode.
const Mat4 &symplectic_form();

/// Standard form I: A = n I, B = m I, C = diag(c, cp), with c >= 0 and |c| >= |cp|.
struct StandardFormI {
  double n = 1.0;
  double m = 1.0;
  double c = 0.0;
  double cp = 0.0;
};

/// Standard form II reached from form I by the local squeezes r1 (mode 1) and r2 (mode 2).
struct StandardFormII {
  double n1 = 1.0, n2 = 1.0;
  double m1 = 1.0, m2 = 1.0;
  double c1 = 0.0, c2 = 0.0;
  double a0 = 1.0;
  double r1 = 1.0, r2 = 1.0;
  /// Set when a0 took its vacuum-like limit value 1 (n1 = 1 or m1 = 1).
  bool degenerate = false;
  int iterations = 0;
  /// True when the damped Newton iteration failed and the bracketing route produced the root.
  bool used_fallback = false;
};

/// Scaled residuals of the two defining equations of form II at squeezes (r1, r2).
std::pair<double, double> standard_form_two_residuals(const StandardFormI &f1, double r1, double r2);

struct SqueezedThermalParams {
  double beta = 1.0;
  double r = 0.0;
  double theta = 0.0;
};

bool is_positive_definite(const CovarianceMatrix &m);
bool is_physical(const CovarianceMatrix &m, const Tolerances &tol = kDefaultTolerances);
/// Smallest eigenvalue of the Hermitian matrix M + iΩ.
double uncertainty_margin(const CovarianceMatrix &m);

StandardFormI to_standard_form_one(const CovarianceMatrix &m, const Tolerances &tol = kDefaultTolerances);
StandardFormII to_standard_form_two(const StandardFormI &f1, const Tolerances &tol = kDefaultTolerances);

/// (nu1, nu2) with nu1 >= nu2 > 0.
std::pair<double, double> symplectic_eigenvalues(const CovarianceMatrix &m);
/// Symplectic eigenvalue of a single-mode covariance, sqrt(det A).
double symplectic_eigenvalue(const Mat2 &a);

/// Von Neumann entropy (nats) carried by one symplectic eigenvalue.
double entropy_term(double nu);
double entropy(const CovarianceMatrix &m);
double entropy(const Mat2 &mode);

/// Tr(rho^2) = det(M)^(-1/2).
double purity(const CovarianceMatrix &m);
double participation_ratio(const CovarianceMatrix &m);

/// coth(beta/4) R(theta/2) diag(e^{2r}, e^{-2r}) R(theta/2)^T. beta may be +infinity.
Mat2 squeezed_thermal_covariance(const SqueezedThermalParams &p);

}  // namespace gcensus

#endif  // GCENSUS_STATES_HPP
