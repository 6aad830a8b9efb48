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

#include "gcensus/states.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "gcensus/errors.hpp"

namespace gcensus {

namespace {

Mat4 mirror_upper(const Mat4 &entries) {
  Mat4 out = entries;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      out(i, j) = out(j, i);
    }
  }
  return out;
}

}  // namespace

CovarianceMatrix CovarianceMatrix::from_upper(const Mat4 &entries) {
  return CovarianceMatrix(mirror_upper(entries));
}

CovarianceMatrix CovarianceMatrix::from_blocks(const Mat2 &mode1, const Mat2 &mode2, const Mat2 &cross) {
  Mat4 m = Mat4::Zero();
  m.block<2, 2>(0, 0) = mode1;
  m.block<2, 2>(2, 2) = mode2;
  m.block<2, 2>(0, 2) = cross;
  return from_upper(m);
}

CovarianceMatrix CovarianceMatrix::two_mode_squeezed_vacuum(double r) {
  const double ch = std::cosh(2 * r);
  const double sh = std::sinh(2 * r);
  Mat2 cross;
  cross << sh, 0, 0, -sh;
  return from_blocks(ch * Mat2::Identity(), ch * Mat2::Identity(), cross);
}

CovarianceMatrix CovarianceMatrix::transformed(const Mat4 &s) const {
  return from_upper(s * m_ * s.transpose());
}

CovarianceMatrix CovarianceMatrix::swapped_modes() const {
  Mat4 p = Mat4::Zero();
  p(0, 2) = p(1, 3) = p(2, 0) = p(3, 1) = 1.0;
  return from_upper(p * m_ * p.transpose());
}

CovarianceMatrix CovarianceMatrix::mirrored() const {
  Mat4 out = m_;
  for (int i = 0; i < 3; ++i) {
    out(i, 3) = -out(i, 3);
    out(3, i) = -out(3, i);
  }
  return CovarianceMatrix(out);
}

const Mat4 &symplectic_form() {
  static const Mat4 omega = [] {
    Mat4 o = Mat4::Zero();
    o(0, 1) = 1.0;
    o(1, 0) = -1.0;
    o(2, 3) = 1.0;
    o(3, 2) = -1.0;
    return o;
  }();
  return omega;
}

bool is_positive_definite(const CovarianceMatrix &m) {
  // Cholesky succeeds exactly when all eigenvalues are positive.
  Eigen::LLT<Mat4> llt(m.matrix());
  return llt.info() == Eigen::Success;
}

double uncertainty_margin(const CovarianceMatrix &m) {
  const Eigen::Matrix4cd h =
      m.matrix().cast<std::complex<double>>() + std::complex<double>(0.0, 1.0) * symplectic_form();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_physical(const CovarianceMatrix &m, const Tolerances &tol) {
  return uncertainty_margin(m) >= -tol.uncertainty_psd;
}

StandardFormI to_standard_form_one(const CovarianceMatrix &m, const Tolerances &tol) {
  const double det_a = m.mode1().determinant();
  const double det_b = m.mode2().determinant();
  const double det_c = m.cross().determinant();
  const double det_m = m.determinant();
  if (!(det_a > 0.0) || !(det_b > 0.0)) {
    throw DomainError("standard form I needs positive definite diagonal blocks");
  }
  StandardFormI f;
  f.n = std::sqrt(det_a);
  f.m = std::sqrt(det_b);
  const double nm = f.n * f.m;
  // c^2 + cp^2 = S and c^2 cp^2 = det(C)^2.
  const double s = (nm * nm + det_c * det_c - det_m) / nm;
  double disc = s * s - 4.0 * det_c * det_c;
  const double scale = s * s + 4.0 * det_c * det_c;
  if (disc < 0.0) {
    if (disc < -tol.complex_root * std::max(scale, 1.0)) {
      throw ComplexRootError("standard form I: c^2, cp^2 are complex (discriminant " + std::to_string(disc) + ")");
    }
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  const double big = 0.5 * (s + root);
  if (big < 0.0) {
    throw ComplexRootError("standard form I: negative c^2");
  }
  // Small root via the product to avoid cancellation.
  const double small = big > 0.0 ? std::max(det_c * det_c / big, 0.0) : 0.0;
  f.c = std::sqrt(big);
  f.cp = std::copysign(std::sqrt(small), det_c);
  return f;
}

namespace {

struct FormTwoTerms {
  double p, q, r, t;  // r1 n - 1, r2 m - 1, n / r1 - 1, m / r2 - 1
  double s;           // sqrt(r1 r2)
  double sqrt_pq, sqrt_rt;
};

FormTwoTerms form_two_terms(const StandardFormI &f, double x, double y) {
  FormTwoTerms t{};
  t.p = x * f.n - 1.0;
  t.q = y * f.m - 1.0;
  t.r = f.n / x - 1.0;
  t.t = f.m / y - 1.0;
  t.s = std::sqrt(x * y);
  t.sqrt_pq = std::sqrt(std::max(t.p * t.q, 0.0));
  t.sqrt_rt = std::sqrt(std::max(t.r * t.t, 0.0));
  return t;
}

struct Residual {
  double e1, e2;          // raw
  double scaled1, scaled2;
};

Residual form_two_residual(const StandardFormI &f, double x, double y) {
  const FormTwoTerms t = form_two_terms(f, x, y);
  const double ac = std::abs(f.c);
  const double acp = std::abs(f.cp);
  Residual res{};
  res.e1 = t.p * t.t - t.r * t.q;
  res.e2 = ac * t.s - acp / t.s - t.sqrt_pq + t.sqrt_rt;
  res.scaled1 = res.e1 / (1.0 + std::abs(t.p * t.t) + std::abs(t.r * t.q));
  res.scaled2 = res.e2 / (1.0 + ac * t.s + acp / t.s + t.sqrt_pq + t.sqrt_rt);
  return res;
}

bool converged(const Residual &r, double tol) {
  return std::abs(r.scaled1) < tol && std::abs(r.scaled2) < tol;
}

// Jacobian of (e1, e2) with respect to (log r1, log r2).
Eigen::Matrix2d form_two_jacobian(const StandardFormI &f, double x, double y) {
  const FormTwoTerms t = form_two_terms(f, x, y);
  const double ac = std::abs(f.c);
  const double acp = std::abs(f.cp);
  const double dp = x * f.n;   // dP/du
  const double dq = y * f.m;   // dQ/dv
  const double dr = -f.n / x;  // dR/du
  const double dt = -f.m / y;  // dT/dv
  Eigen::Matrix2d j;
  j(0, 0) = dp * t.t - dr * t.q;
  j(0, 1) = t.p * dt - t.r * dq;
  const double ds = 0.5 * ac * t.s + 0.5 * acp / t.s;
  j(1, 0) = ds - 0.5 * dp * t.q / t.sqrt_pq + 0.5 * dr * t.t / t.sqrt_rt;
  j(1, 1) = ds - 0.5 * t.p * dq / t.sqrt_pq + 0.5 * t.r * dt / t.sqrt_rt;
  return j;
}

bool inside_box(const StandardFormI &f, double u, double v) {
  return std::abs(u) <= std::log(f.n) && std::abs(v) <= std::log(f.m);
}

// Damped Newton on (log r1, log r2) from the origin.
bool newton_form_two(const StandardFormI &f, const Tolerances &tol, double &x, double &y, int &iterations) {
  double u = 0.0;
  double v = 0.0;
  Residual res = form_two_residual(f, 1.0, 1.0);
  iterations = 0;
  if (converged(res, tol.newton_residual)) {
    x = y = 1.0;
    return true;
  }
  for (int it = 1; it <= tol.newton_max_iterations; ++it) {
    iterations = it;
    const Eigen::Matrix2d jac = form_two_jacobian(f, std::exp(u), std::exp(v));
    if (!jac.allFinite()) {
      return false;
    }
    const double det = jac.determinant();
    if (!std::isfinite(det) || det == 0.0) {
      return false;
    }
    const Eigen::Vector2d step = jac.inverse() * Eigen::Vector2d(-res.e1, -res.e2);
    const double merit = res.e1 * res.e1 + res.e2 * res.e2;
    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, lambda *= 0.5) {
      const double un = u + lambda * step(0);
      const double vn = v + lambda * step(1);
      if (!inside_box(f, un, vn)) {
        continue;
      }
      const Residual trial = form_two_residual(f, std::exp(un), std::exp(vn));
      if (trial.e1 * trial.e1 + trial.e2 * trial.e2 < merit || converged(trial, tol.newton_residual)) {
        u = un;
        v = vn;
        res = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      return false;
    }
    if (converged(res, tol.newton_residual)) {
      // The scaled test can pass while r is still ~1e-8 off when the residual
      // is flat; a few undamped steps that keep lowering the merit finish it.
      for (int polish = 0; polish < 3; ++polish) {
        const Eigen::Matrix2d j = form_two_jacobian(f, std::exp(u), std::exp(v));
        const Eigen::Vector2d d = j.inverse() * Eigen::Vector2d(-res.e1, -res.e2);
        if (!d.allFinite() || !inside_box(f, u + d(0), v + d(1))) {
          break;
        }
        const Residual trial = form_two_residual(f, std::exp(u + d(0)), std::exp(v + d(1)));
        if (!(trial.e1 * trial.e1 + trial.e2 * trial.e2 < res.e1 * res.e1 + res.e2 * res.e2)) {
          break;
        }
        u += d(0);
        v += d(1);
        res = trial;
      }
      x = std::exp(u);
      y = std::exp(v);
      return true;
    }
  }
  return false;
}

// Positive root r2 of the proportionality equation for a given r1 inside [1/n, n].
double proportional_r2(const StandardFormI &f, double x) {
  const double a = (f.n / x - 1.0) * f.m;
  const double b = (x * f.n - 1.0) - (f.n / x - 1.0);
  const double c0 = -(x * f.n - 1.0) * f.m;
  if (a <= 0.0) {
    return f.m;  // r1 = n
  }
  if (c0 >= 0.0) {
    return 1.0 / f.m;  // r1 = 1/n
  }
  const double disc = std::sqrt(b * b - 4.0 * a * c0);
  const double q = -0.5 * (b + std::copysign(disc, b));
  const double y1 = q / a;
  const double y2 = c0 / q;
  return y1 > 0.0 ? y1 : y2;
}

// Reduces the system to one dimension along the proportionality curve and brackets.
bool bracket_form_two(const StandardFormI &f, const Tolerances &tol, double &x, double &y) {
  const auto g = [&f](double xx) {
    const double yy = proportional_r2(f, xx);
    return form_two_residual(f, xx, yy).e2;
  };
  const double lo = 1.0 / f.n;
  const double hi = f.n;
  const double glo = g(lo);
  const double ghi = g(hi);
  if (!std::isfinite(glo) || !std::isfinite(ghi)) {
    return false;
  }
  double root;
  if (glo == 0.0) {
    root = lo;
  } else if (ghi == 0.0) {
    root = hi;
  } else if ((glo < 0.0) == (ghi < 0.0)) {
    return false;
  } else {
    boost::uintmax_t max_iter = 400;
    const auto bounds = boost::math::tools::toms748_solve(
        g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 1),
        max_iter);
    root = 0.5 * (bounds.first + bounds.second);
  }
  x = root;
  y = proportional_r2(f, root);
  return converged(form_two_residual(f, x, y), tol.bracket_residual);
}

}  // namespace

std::pair<double, double> standard_form_two_residuals(const StandardFormI &f1, double r1, double r2) {
  const Residual r = form_two_residual(f1, r1, r2);
  return {r.scaled1, r.scaled2};
}

StandardFormII to_standard_form_two(const StandardFormI &f1, const Tolerances &tol) {
  if (!(f1.n >= 1.0) || !(f1.m >= 1.0)) {
    throw DomainError("standard form II requires n >= 1 and m >= 1");
  }
  StandardFormII f2;
  double x = 1.0;
  double y = 1.0;
  const bool vacuum_mode = f1.n - 1.0 <= tol.degenerate_a0 || f1.m - 1.0 <= tol.degenerate_a0;
  if (!vacuum_mode) {
    if (!newton_form_two(f1, tol, x, y, f2.iterations)) {
      if (!bracket_form_two(f1, tol, x, y)) {
        throw NoConvergenceError("standard form II: no root for r1, r2");
      }
      f2.used_fallback = true;
    }
  }
  f2.r1 = x;
  f2.r2 = y;
  f2.n1 = x * f1.n;
  f2.n2 = f1.n / x;
  f2.m1 = y * f1.m;
  f2.m2 = f1.m / y;
  const double s = std::sqrt(x * y);
  f2.c1 = f1.c * s;
  f2.c2 = f1.cp / s;

  // a0^4 = (m1 - 1)/(n1 - 1) = (m2 - 1)/(n2 - 1); use the better-conditioned pair.
  const double dn1 = f2.n1 - 1.0;
  const double dn2 = f2.n2 - 1.0;
  const double dn = dn1 >= dn2 ? dn1 : dn2;
  const double dm = dn1 >= dn2 ? f2.m1 - 1.0 : f2.m2 - 1.0;
  if (vacuum_mode || dn <= tol.degenerate_a0 || dm <= tol.degenerate_a0) {
    f2.a0 = 1.0;
    f2.degenerate = true;
  } else {
    f2.a0 = std::pow(dm / dn, 0.25);
  }
  return f2;
}

std::pair<double, double> symplectic_eigenvalues(const CovarianceMatrix &m) {
  const double det_m = m.determinant();
  const double delta = m.mode1().determinant() + m.mode2().determinant() + 2.0 * m.cross().determinant();
  const double disc = std::max(delta * delta - 4.0 * det_m, 0.0);
  const double nu1 = std::sqrt(0.5 * (delta + std::sqrt(disc)));
  const double nu2 = std::sqrt(std::max(det_m, 0.0)) / nu1;
  return {nu1, nu2};
}

double symplectic_eigenvalue(const Mat2 &a) { return std::sqrt(std::max(a.determinant(), 0.0)); }

double entropy_term(double nu) {
  if (nu <= 1.0) {
    return 0.0;
  }
  const double plus = 0.5 * (nu + 1.0);
  const double minus = 0.5 * (nu - 1.0);
  return plus * std::log(plus) - minus * std::log(minus);
}

double entropy(const CovarianceMatrix &m) {
  const auto [nu1, nu2] = symplectic_eigenvalues(m);
  return entropy_term(nu1) + entropy_term(nu2);
}

double entropy(const Mat2 &mode) { return entropy_term(symplectic_eigenvalue(mode)); }

double purity(const CovarianceMatrix &m) { return 1.0 / std::sqrt(m.determinant()); }

double participation_ratio(const CovarianceMatrix &m) { return std::sqrt(m.determinant()); }

Mat2 squeezed_thermal_covariance(const SqueezedThermalParams &p) {
  if (!(p.beta > 0.0) || !(p.r >= 0.0) || !(p.theta > -M_PI && p.theta <= M_PI)) {
    throw std::invalid_argument("squeezed thermal parameters out of range");
  }
  const double scale = std::isinf(p.beta) ? 1.0 : 1.0 / std::tanh(0.25 * p.beta);
  const double half = 0.5 * p.theta;
  Mat2 rot;
  rot << std::cos(half), -std::sin(half), std::sin(half), std::cos(half);
  const Mat2 squeeze = Eigen::Vector2d(std::exp(2 * p.r), std::exp(-2 * p.r)).asDiagonal();
  Mat2 a = scale * rot * squeeze * rot.transpose();
  a(1, 0) = a(0, 1);
  return a;
}

}  // namespace gcensus
