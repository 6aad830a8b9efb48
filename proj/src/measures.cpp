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

#include "gcensus/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gcensus/errors.hpp"

namespace gcensus {

double jeffreys_log_weight(double determinant, int dimension) {
  return -0.5 * (dimension + 1) * std::log(determinant);
}

double jeffreys_log_weight(const CovarianceMatrix &m) { return jeffreys_log_weight(m.determinant(), 4); }

double jeffreys_log_weight(const Mat2 &a) { return jeffreys_log_weight(a.determinant(), 2); }

GaussianKernel::GaussianKernel(const CovarianceMatrix &m, const Tolerances &tol) {
  // (x1, p1, x2, p2) -> (x1, x2, p1, p2)
  static constexpr int kOrder[4] = {0, 2, 1, 3};
  Mat4 sigma;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      sigma(i, j) = m(kOrder[i], kOrder[j]);
    }
  }
  Eigen::LLT<Mat4> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw DomainError("kernel requires a positive definite covariance");
  }
  Mat4 inv = llt.solve(Mat4::Identity());
  inv = 0.5 * (inv + inv.transpose()).eval();
  const Mat2 k_qq = inv.block<2, 2>(0, 0);
  const Mat2 k_qp = inv.block<2, 2>(0, 2);
  const Mat2 k_pp = inv.block<2, 2>(2, 2);

  Eigen::SelfAdjointEigenSolver<Mat2> es(k_pp, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(1);
  if (!(lo > tol.singular_block * hi)) {
    throw SingularBlockError("momentum block of the inverse covariance is singular");
  }
  coherence_ = k_pp.inverse();
  coherence_(1, 0) = coherence_(0, 1);
  phase_ = k_qp * coherence_;
  position_quadratic_ = k_qq - phase_ * k_qp.transpose();
  position_quadratic_(1, 0) = position_quadratic_(0, 1);
}

std::complex<double> GaussianKernel::log_value(const Vec2 &x, const Vec2 &xp) const {
  const Vec2 q = 0.5 * (x + xp);
  const Vec2 v = x - xp;
  const double re = -0.5 * q.dot(position_quadratic_ * q) - 0.125 * v.dot(coherence_ * v);
  const double im = -0.5 * q.dot(phase_ * v);
  return {re, im};
}

std::complex<double> GaussianKernel::operator()(const Vec2 &x, const Vec2 &xp) const {
  return std::exp(log_value(x, xp));
}

std::complex<double> schroedinger_kernel(const CovarianceMatrix &m, const Vec2 &x, const Vec2 &xp) {
  return GaussianKernel(m)(x, xp);
}

GridSpec GridSpec::regular(int m) {
  if (m < 1 || m % 2 == 0) {
    throw std::invalid_argument("regular grid size must be odd and positive");
  }
  GridSpec g;
  g.kind = GridKind::regular;
  g.coords.resize(static_cast<std::size_t>(m));
  const int half = (m - 1) / 2;
  for (int i = 0; i < m; ++i) {
    g.coords[static_cast<std::size_t>(i)] = static_cast<double>(i - half);
  }
  return g;
}

GridSpec GridSpec::random(int m, double lo, double hi, SampleStream &stream, const Tolerances &tol) {
  if (m < 1 || !(hi > lo)) {
    throw std::invalid_argument("random grid needs m >= 1 and lo < hi");
  }
  GridSpec g;
  g.kind = GridKind::random;
  while (static_cast<int>(g.coords.size()) < m) {
    const double u = stream.uniform(lo, hi);
    const bool coincident = std::any_of(g.coords.begin(), g.coords.end(),
                                        [&](double c) { return std::abs(c - u) < tol.grid_coincidence; });
    if (!coincident) {
      g.coords.push_back(u);
    }
  }
  std::sort(g.coords.begin(), g.coords.end());
  return g;
}

GridSpec GridSpec::from_coords(std::vector<double> coords, GridKind kind) {
  if (coords.empty()) {
    throw std::invalid_argument("grid needs at least one coordinate");
  }
  for (std::size_t i = 1; i < coords.size(); ++i) {
    if (!(coords[i] > coords[i - 1])) {
      throw std::invalid_argument("grid coordinates must be strictly increasing");
    }
  }
  GridSpec g;
  g.coords = std::move(coords);
  g.kind = kind;
  return g;
}

Eigen::MatrixXcd kernel_on_grid(const GaussianKernel &kernel, const GridSpec &grid) {
  const int m = grid.size();
  const int n = m * m;
  Eigen::MatrixXcd gamma(n, n);
  for (int a = 0; a < n; ++a) {
    const Vec2 xa(grid.coords[static_cast<std::size_t>(a / m)], grid.coords[static_cast<std::size_t>(a % m)]);
    gamma(a, a) = std::exp(kernel.log_value(xa, xa).real());
    for (int b = a + 1; b < n; ++b) {
      const Vec2 xb(grid.coords[static_cast<std::size_t>(b / m)], grid.coords[static_cast<std::size_t>(b % m)]);
      const std::complex<double> value = kernel(xa, xb);
      gamma(a, b) = value;
      gamma(b, a) = std::conj(value);
    }
  }
  return gamma;
}

KernelMatrix discretize(const CovarianceMatrix &m, const GridSpec &grid, const Tolerances &tol) {
  KernelMatrix k;
  k.gamma = kernel_on_grid(GaussianKernel(m, tol), grid);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k.gamma, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NonPositiveSpectrumError("kernel eigendecomposition failed");
  }
  const Eigen::VectorXd &lambda = es.eigenvalues();
  const double lmax = lambda.maxCoeff();
  const double lmin = lambda.minCoeff();
  if (!(lmax > 0.0) || !(lmin > tol.kernel_eigen_floor * lmax)) {
    throw NonPositiveSpectrumError("discretized kernel has a nonpositive eigenvalue (" + std::to_string(lmin) + ")");
  }
  k.eigenvalues = lambda / lambda.sum();
  k.log_det = k.eigenvalues.array().log().sum();
  return k;
}

std::string_view to_string(MetricKind k) {
  switch (k) {
    case MetricKind::bures:
      return "bures";
    case MetricKind::kubo_mori:
      return "kubo-mori";
    case MetricKind::maximal:
      return "maximal";
  }
  return "unknown";
}

namespace {

// ln of (a - b)/(ln a - ln b), the logarithmic mean, with its a = b limit.
double log_logarithmic_mean(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  if (lo == hi) {
    return std::log(hi);
  }
  const double ratio = lo / hi;
  if (ratio < 0.5) {
    return std::log(hi - lo) - std::log(std::log(hi) - std::log(lo));
  }
  const double d = ratio - 1.0;  // in (-0.5, 0)
  double factor;                 // d / ln(1 + d)
  if (std::abs(d) < 1e-4) {
    factor = 1.0 + d * (0.5 + d * (-1.0 / 12.0 + d * (1.0 / 24.0 - d * 19.0 / 720.0)));
  } else {
    factor = d / std::log1p(d);
  }
  return std::log(hi) + std::log(factor);
}

}  // namespace

// All three means carry the factor 2 of the Bures sum a + b, so the three
// volume elements coincide on a flat spectrum.
constexpr double kLn2 = std::numbers::ln2;

double log_pair_mean(double a, double b, MetricKind kind) {
  switch (kind) {
    case MetricKind::bures:
      return std::log(a + b);
    case MetricKind::kubo_mori:
      return kLn2 + log_logarithmic_mean(a, b);
    case MetricKind::maximal:
      return 2.0 * kLn2 + std::log(a) + std::log(b) - std::log(a + b);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double log_volume_element(std::span<const double> eigenvalues, MetricKind kind) {
  double diag = 0.0;
  for (double l : eigenvalues) {
    diag += std::log(l);
  }
  double pairs = 0.0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    for (std::size_t j = i + 1; j < eigenvalues.size(); ++j) {
      pairs += log_pair_mean(eigenvalues[i], eigenvalues[j], kind);
    }
  }
  return -0.5 * diag - pairs;
}

double log_volume_element(const KernelMatrix &kernel, MetricKind kind) {
  return log_volume_element(
      std::span<const double>(kernel.eigenvalues.data(), static_cast<std::size_t>(kernel.eigenvalues.size())), kind);
}

VolumeEstimate summarize_volumes(std::vector<double> log_volumes, MetricKind kind) {
  if (log_volumes.empty()) {
    throw std::invalid_argument("no volumes to summarize");
  }
  VolumeEstimate est;
  est.metric = kind;
  std::vector<double> sorted = log_volumes;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  est.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  const std::size_t first = n >= 3 ? 1 : 0;
  const std::size_t last = n >= 3 ? n - 1 : n;
  double sum = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    sum += sorted[i];
  }
  est.trimmed_mean = sum / static_cast<double>(last - first);
  est.log_volumes = std::move(log_volumes);
  return est;
}

std::vector<VolumeEstimate> robust_volumes(const CovarianceMatrix &m, const RobustVolumeOptions &opts,
                                           SampleStream &stream, std::span<const MetricKind> metrics,
                                           const Tolerances &tol) {
  if (opts.n_grids < 1) {
    throw std::invalid_argument("robust volume needs at least one grid");
  }
  const int n_grids = opts.kind == GridKind::regular ? 1 : opts.n_grids;
  std::vector<std::vector<double>> logs(metrics.size());
  for (int g = 0; g < n_grids; ++g) {
    const GridSpec grid = opts.kind == GridKind::regular
                              ? GridSpec::regular(opts.grid_size)
                              : GridSpec::random(opts.grid_size, opts.lo, opts.hi, stream, tol);
    KernelMatrix kernel;
    try {
      kernel = discretize(m, grid, tol);
    } catch (const NonPositiveSpectrumError &e) {
      throw SampleDiscarded(std::string("grid ") + std::to_string(g) + ": " + e.what());
    }
    for (std::size_t i = 0; i < metrics.size(); ++i) {
      logs[i].push_back(log_volume_element(kernel, metrics[i]));
    }
  }
  std::vector<VolumeEstimate> out;
  out.reserve(metrics.size());
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    out.push_back(summarize_volumes(std::move(logs[i]), metrics[i]));
  }
  return out;
}

VolumeEstimate robust_volume(const CovarianceMatrix &m, const RobustVolumeOptions &opts, SampleStream &stream,
                             MetricKind metric, const Tolerances &tol) {
  const MetricKind metrics[1] = {metric};
  return robust_volumes(m, opts, stream, metrics, tol).front();
}

}  // namespace gcensus
