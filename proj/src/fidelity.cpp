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

#include "gcensus/fidelity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gcensus/errors.hpp"

namespace gcensus {

namespace {

constexpr double kDomainSlack = 1e-12;

}  // namespace

OneModeState OneModeState::from_matrix(const Mat2 &a) {
  OneModeState s;
  s.a = a;
  s.a(1, 0) = s.a(0, 1);
  if (!(s.a(0, 0) > 0.0) || !(s.a.determinant() > 0.0)) {
    throw DomainError("one-mode covariance must be positive definite");
  }
  return s;
}

double fidelity_one_mode(const Mat2 &a1, const Mat2 &a2) {
  const double p = (a1.determinant() - 1.0) * (a2.determinant() - 1.0);
  const double sum = (a1 + a2).determinant() + p;
  if (sum < -kDomainSlack || p < -kDomainSlack) {
    throw DomainError("one-mode fidelity: unphysical input");
  }
  const double denom = std::sqrt(std::max(sum, 0.0)) - std::sqrt(std::max(p, 0.0));
  if (!(denom > 0.0)) {
    throw DomainError("one-mode fidelity: nonpositive denominator");
  }
  return 2.0 / denom;
}

double fidelity_one_mode(const OneModeState &s1, const OneModeState &s2) { return fidelity_one_mode(s1.a, s2.a); }

double fidelity_two_mode_diagonal(const Mat4 &d1, const Mat4 &d2) {
  for (const Mat4 *d : {&d1, &d2}) {
    const Mat4 off = *d - Mat4(d->diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() != 0.0 || (*d)(0, 0) != (*d)(1, 1) || (*d)(2, 2) != (*d)(3, 3)) {
      throw ShapeError("two-mode fidelity expects diag(a, a, b, b) covariances");
    }
  }
  const Eigen::Array4d a1 = d1.diagonal().array();
  const Eigen::Array4d a2 = d2.diagonal().array();
  const Eigen::Array4d radicand = (a1.square() - 1.0) * (a2.square() - 1.0);
  if ((radicand < -kDomainSlack).any()) {
    throw DomainError("two-mode fidelity: sub-vacuum variance");
  }
  const Eigen::Array4d x = (a1 * a2 + 1.0) - radicand.max(0.0).sqrt();
  if (!(x > 0.0).all()) {
    throw DomainError("two-mode fidelity: singular matrix");
  }
  // det of the diagonal matrix 2 X^-1
  return std::sqrt((2.0 / x).prod());
}

double bures_distance_sq(double fidelity) { return 2.0 * (1.0 - fidelity); }

double MarginalDensity::g(double beta) {
  const double x = 0.25 * beta;
  // cosh(x) / cosh(2x) without overflow
  const double ratio = std::exp(-x) * (1.0 + std::exp(-2.0 * x)) / (1.0 + std::exp(-4.0 * x));
  return ratio / std::tanh(x) / 8.0;
}

double improperness_probe(Marginal which, double upper) {
  constexpr double kLower = 1e-6;
  if (!(upper > kLower)) {
    throw std::invalid_argument("improperness probe needs upper > 1e-6");
  }
  const auto integrand = [which](double t) { return which == Marginal::f ? MarginalDensity::f(t) : MarginalDensity::g(t); };
  // Log-spaced panels keep the 1/beta growth of g near the origin resolvable.
  constexpr int kPanels = 24;
  const double ratio = std::pow(upper / kLower, 1.0 / kPanels);
  double total = 0.0;
  double a = kLower;
  for (int i = 0; i < kPanels; ++i) {
    const double b = i + 1 == kPanels ? upper : a * ratio;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, b, 15, 1e-14);
    a = b;
  }
  return total;
}

namespace {

using Params = std::array<double, 3>;

Mat2 covariance_at(const Params &p) { return squeezed_thermal_covariance({p[0], p[1], p[2]}); }

Eigen::Matrix3d central_metric(const Params &p, const Params &h) {
  const Mat2 base = covariance_at(p);
  const auto d2 = [&](const Params &delta) {
    Params q = p;
    for (int i = 0; i < 3; ++i) {
      q[static_cast<std::size_t>(i)] += delta[static_cast<std::size_t>(i)];
    }
    return bures_distance_sq(fidelity_one_mode(base, covariance_at(q)));
  };
  Eigen::Matrix3d g;
  for (std::size_t a = 0; a < 3; ++a) {
    Params plus{}, minus{};
    plus[a] = h[a];
    minus[a] = -h[a];
    g(static_cast<int>(a), static_cast<int>(a)) = (d2(plus) + d2(minus)) / (2.0 * h[a] * h[a]);
    for (std::size_t b = a + 1; b < 3; ++b) {
      Params pp{}, mm{}, pm{}, mp{};
      pp[a] = h[a], pp[b] = h[b];
      mm[a] = -h[a], mm[b] = -h[b];
      pm[a] = h[a], pm[b] = -h[b];
      mp[a] = -h[a], mp[b] = h[b];
      const double gab = (d2(pp) + d2(mm) - d2(pm) - d2(mp)) / (8.0 * h[a] * h[b]);
      g(static_cast<int>(a), static_cast<int>(b)) = gab;
      g(static_cast<int>(b), static_cast<int>(a)) = gab;
    }
  }
  return g;
}

}  // namespace

Eigen::Matrix3d metric_by_finite_difference(const SqueezedThermalParams &p, double h, const Tolerances &tol) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("finite-difference step must be positive");
  }
  squeezed_thermal_covariance(p);  // range check
  const Params point{p.beta, p.r, p.theta};
  Params step{};
  Params half{};
  for (std::size_t i = 0; i < 3; ++i) {
    step[i] = h * std::max(std::abs(point[i]), 1.0);
    half[i] = 0.5 * step[i];
  }
  const Eigen::Matrix3d coarse = central_metric(point, step);
  const Eigen::Matrix3d fine = central_metric(point, half);
  const double scale = fine.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || (coarse - fine).cwiseAbs().maxCoeff() > tol.richardson * scale) {
    throw StepError("finite-difference metric: step halving disagrees beyond tolerance");
  }
  return (4.0 * fine - coarse) / 3.0;
}

VolumeCheck volume_element_check(std::span<const double> betas, std::span<const double> rs, double h) {
  VolumeCheck check;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  for (double beta : betas) {
    for (double r : rs) {
      VolumeCheckPoint pt;
      pt.beta = beta;
      pt.r = r;
      pt.sqrt_det = std::sqrt(metric_by_finite_difference({beta, r, 0.0}, h).determinant());
      pt.reference = MarginalDensity::f(r) * MarginalDensity::g(beta);
      pt.ratio = pt.sqrt_det / pt.reference;
      lo = std::min(lo, pt.ratio);
      hi = std::max(hi, pt.ratio);
      sum += pt.ratio;
      check.points.push_back(pt);
    }
  }
  if (check.points.empty()) {
    throw std::invalid_argument("volume check needs at least one point");
  }
  check.relative_spread = (hi - lo) / (sum / static_cast<double>(check.points.size()));
  return check;
}

}  // namespace gcensus
