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


#include <array>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gcensus/errors.hpp"
#include "gcensus/fidelity.hpp"
#include "oracles.hpp"

namespace gcensus {
namespace {

template <class Rng>
Mat2 random_one_mode(Rng &rng, double nu_max = 3.0, double squeeze = 0.5) {
  std::uniform_real_distribution<double> nu(1.0, nu_max);
  const Mat2 s = oracle::random_local_symplectic(rng, squeeze);
  return nu(rng) * s * s.transpose();
}

TEST(FidelityOneMode, Examples) {
  const Mat2 i = Mat2::Identity();
  EXPECT_DOUBLE_EQ(fidelity_one_mode(i, i), 1.0);
  EXPECT_DOUBLE_EQ(fidelity_one_mode(i, 3 * i), 0.5);
  const Mat2 a = squeezed_thermal_covariance({2.0, 0.4, 0.3});
  EXPECT_NEAR(fidelity_one_mode(a, a), 1.0, 1e-14);
}

TEST(FidelityOneMode, VacuumAgainstThermalMatchesDiscretizedKernels) {
  const Mat2 i = Mat2::Identity();
  EXPECT_NEAR(oracle::discretized_fidelity(i, 3 * i), 0.5, 0.005);
}

TEST(FidelityOneMode, SymmetricAndBounded) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 1000; ++t) {
    const Mat2 a = random_one_mode(rng), b = random_one_mode(rng);
    const double f = fidelity_one_mode(a, b);
    EXPECT_NEAR(f, fidelity_one_mode(b, a), 1e-12);
    EXPECT_GT(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-12);
  }
}

TEST(FidelityOneMode, OneOnlyForEqualStates) {
  const Mat2 a = squeezed_thermal_covariance({3.0, 0.2, 0.1});
  const Mat2 b = squeezed_thermal_covariance({3.0, 0.2, 0.1 + 1e-3});
  EXPECT_LT(fidelity_one_mode(a, b), 1.0);
}

TEST(FidelityOneMode, MatchesDiscretizedKernels) {
  std::mt19937_64 rng(67);
  for (int t = 0; t < 8; ++t) {
    const Mat2 a = random_one_mode(rng, 2.5, 0.3), b = random_one_mode(rng, 2.5, 0.3);
    const double f = fidelity_one_mode(a, b);
    EXPECT_NEAR(oracle::discretized_fidelity(a, b, 21), f, 0.01 * f) << a << "\n" << b;
  }
}

TEST(FidelityOneMode, RejectsUnphysicalInput) {
  EXPECT_THROW(fidelity_one_mode(Mat2(0.2 * Mat2::Identity()), Mat2(3.0 * Mat2::Identity())), DomainError);
}

TEST(FidelityTwoMode, ProductOfModes) {
  const Mat4 a = Eigen::Vector4d(1, 1, 3, 3).asDiagonal();
  const Mat4 b = Eigen::Vector4d(1, 1, 1, 1).asDiagonal();
  const Mat4 c = Eigen::Vector4d(3, 3, 3, 3).asDiagonal();
  EXPECT_NEAR(fidelity_two_mode_diagonal(a, a), 1.0, 1e-14);
  EXPECT_NEAR(fidelity_two_mode_diagonal(a, b), 0.5, 1e-14);
  EXPECT_NEAR(fidelity_two_mode_diagonal(c, b), 0.25, 1e-14);
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> nu(1.0, 6.0);
  for (int t = 0; t < 500; ++t) {
    const double a1 = nu(rng), b1 = nu(rng), a2 = nu(rng), b2 = nu(rng);
    const double want = fidelity_one_mode(Mat2(a1 * Mat2::Identity()), Mat2(a2 * Mat2::Identity())) *
                        fidelity_one_mode(Mat2(b1 * Mat2::Identity()), Mat2(b2 * Mat2::Identity()));
    EXPECT_NEAR(fidelity_two_mode_diagonal(Eigen::Vector4d(a1, a1, b1, b1).asDiagonal(),
                                           Eigen::Vector4d(a2, a2, b2, b2).asDiagonal()),
                want, 1e-12);
  }
}

TEST(FidelityTwoMode, RejectsNonThermalShape) {
  const Mat4 ok = Mat4::Identity();
  EXPECT_THROW(fidelity_two_mode_diagonal(Eigen::Vector4d(1, 2, 1, 1).asDiagonal(), ok), ShapeError);
  Mat4 off = Mat4::Identity();
  off(0, 2) = off(2, 0) = 0.1;
  EXPECT_THROW(fidelity_two_mode_diagonal(ok, off), ShapeError);
}

TEST(BuresDistance, Examples) {
  EXPECT_EQ(bures_distance_sq(1.0), 0.0);
  EXPECT_EQ(bures_distance_sq(0.5), 1.0);
  EXPECT_NEAR(bures_distance_sq(0.99), 0.02, 1e-15);
}

TEST(Marginals, Values) {
  EXPECT_EQ(MarginalDensity::f(0.0), 0.0);
  EXPECT_NEAR(MarginalDensity::g(4.0), std::cosh(1.0) / std::tanh(1.0) / std::cosh(2.0) / 8.0, 1e-15);
  for (double b : {1e-3, 0.5, 10.0, 400.0, 2000.0}) {
    EXPECT_GT(MarginalDensity::g(b), 0.0) << b;
    EXPECT_TRUE(std::isfinite(MarginalDensity::g(b)));
  }
}

TEST(Improperness, ClosedFormAndGrowth) {
  for (double r : {1.0, 10.0, 20.0, 30.0}) {
    const double want = 0.5 * (std::cosh(2 * r) - 1.0) - 0.5 * (std::cosh(2e-6) - 1.0);
    EXPECT_NEAR(improperness_probe(Marginal::f, r), want, 1e-8 * want);
  }
  EXPECT_LT(improperness_probe(Marginal::f, 10), improperness_probe(Marginal::f, 20));
  EXPECT_LT(improperness_probe(Marginal::f, 20), improperness_probe(Marginal::f, 30));
  EXPECT_LT(improperness_probe(Marginal::g, 1.0), improperness_probe(Marginal::g, 2.0));
}

TEST(Metric, SymmetricPositiveDefiniteWithBlockStructure) {
  const Eigen::Matrix3d g = metric_by_finite_difference({4.0, 0.5, 0.0});
  EXPECT_TRUE(g.isApprox(g.transpose(), 1e-12));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  EXPECT_LT(std::abs(g(0, 1)), 1e-6 * std::sqrt(g(0, 0) * g(1, 1)));
}

TEST(Metric, ThermalAndSqueezeComponents) {
  // Closed forms derived from the one-mode fidelity: g_bb = csch^2(b/4)/32 at
  // r = 0, and the squeeze component 2 nu^2/(nu^2 + 1) at fixed nu.
  const double beta = 3.0;
  const double nu = 1.0 / std::tanh(beta / 4);
  const Eigen::Matrix3d g = metric_by_finite_difference({beta, 0.3, 0.0});
  EXPECT_NEAR(g(0, 0), 1.0 / (32.0 * std::pow(std::sinh(beta / 4), 2)), 1e-5 * g(0, 0));
  EXPECT_NEAR(g(1, 1), 2 * nu * nu / (nu * nu + 1), 1e-5 * g(1, 1));
}

TEST(Metric, VolumeElementMatchesMarginals) {
  constexpr std::array<double, 5> betas{2, 3, 4, 5, 6};
  constexpr std::array<double, 5> rs{0.1, 0.3, 0.5, 0.7, 0.9};
  EXPECT_LT(volume_element_check(betas, rs).relative_spread, 1e-3);
}

TEST(Metric, RejectsBadStep) {
  EXPECT_THROW(metric_by_finite_difference({4.0, 0.5, 0.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(metric_by_finite_difference({4.0, 0.5, 0.0}, 0.5), StepError);
}

}  // namespace
}  // namespace gcensus
