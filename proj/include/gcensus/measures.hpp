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

#ifndef GCENSUS_MEASURES_HPP
#define GCENSUS_MEASURES_HPP

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gcensus/random.hpp"
#include "gcensus/states.hpp"
#include "gcensus/tolerances.hpp"

namespace gcensus {

// ---------------------------------------------------------------------------
// Jeffreys' prior
// ---------------------------------------------------------------------------

/// -(d + 1)/2 ln det for a d-variate zero-mean Gaussian; normalization dropped.
double jeffreys_log_weight(double determinant, int dimension);
/// Two-mode case, exponent -5/2.
double jeffreys_log_weight(const CovarianceMatrix &m);
/// One-mode case, exponent -3/2.
double jeffreys_log_weight(const Mat2 &a);

// ---------------------------------------------------------------------------
// Position-space kernel of the Gaussian state and its discretization
// ---------------------------------------------------------------------------

/// Density-matrix kernel <x|rho|x'> of the Gaussian state with covariance M,
/// obtained as the partial Fourier transform of the Wigner function with
/// hbar = 2, scaled so that the value at x = x' = 0 is 1.
class GaussianKernel {
 public:
  explicit GaussianKernel(const CovarianceMatrix &m, const Tolerances &tol = kDefaultTolerances);

  std::complex<double> operator()(const Vec2 &x, const Vec2 &xp) const;
  /// Exponent of the kernel (its logarithm).
  std::complex<double> log_value(const Vec2 &x, const Vec2 &xp) const;

 private:
  Mat2 position_quadratic_;  // K_qq - K_qp K_pp^-1 K_qp^T
  Mat2 coherence_;           // K_pp^-1
  Mat2 phase_;               // K_qp K_pp^-1
};

std::complex<double> schroedinger_kernel(const CovarianceMatrix &m, const Vec2 &x, const Vec2 &xp);

enum class GridKind { regular, random };

/// Coordinates shared by both axes of an m x m lattice.
struct GridSpec {
  std::vector<double> coords;
  GridKind kind = GridKind::regular;

  /// Unit spacing, centered at the origin; m must be odd.
  static GridSpec regular(int m);
  /// m sorted uniform variates on [lo, hi]; draws closer than the coincidence
  /// tolerance to an earlier coordinate are redrawn.
  static GridSpec random(int m, double lo, double hi, SampleStream &stream,
                         const Tolerances &tol = kDefaultTolerances);
  /// Validates strict monotonicity.
  static GridSpec from_coords(std::vector<double> coords, GridKind kind);

  int size() const { return static_cast<int>(coords.size()); }
};

struct KernelMatrix {
  /// m^2 x m^2, row-major point ordering (i, j) -> i * m + j.
  Eigen::MatrixXcd gamma;
  /// Ascending, normalized to sum to 1.
  Eigen::VectorXd eigenvalues;
  /// Sum of logs of the normalized eigenvalues.
  double log_det = 0.0;
};

/// Kernel evaluated on the grid's Cartesian product; no eigendecomposition.
Eigen::MatrixXcd kernel_on_grid(const GaussianKernel &kernel, const GridSpec &grid);

/// Throws NonPositiveSpectrumError if some eigenvalue is <= floor * max.
KernelMatrix discretize(const CovarianceMatrix &m, const GridSpec &grid, const Tolerances &tol = kDefaultTolerances);

// ---------------------------------------------------------------------------
// Monotone-metric volume elements
// ---------------------------------------------------------------------------

enum class MetricKind { bures, kubo_mori, maximal };

std::string_view to_string(MetricKind k);

/// Log of twice the pairwise mean used by each metric: a + b (Bures),
/// 2 (a - b)/(ln a - ln b) (Kubo-Mori), 4ab/(a + b) (maximal). The common
/// factor makes all three agree when a = b.
double log_pair_mean(double a, double b, MetricKind kind);

/// ln V = -1/2 sum ln(l_i) - sum_{i<j} ln mean(l_i, l_j); constants dropped.
double log_volume_element(std::span<const double> eigenvalues, MetricKind kind);
double log_volume_element(const KernelMatrix &kernel, MetricKind kind);

struct VolumeEstimate {
  std::vector<double> log_volumes;
  double median = 0.0;
  double trimmed_mean = 0.0;
  MetricKind metric = MetricKind::bures;
};

/// Median and trimmed mean (drop the smallest and largest, average the rest) of the logs.
VolumeEstimate summarize_volumes(std::vector<double> log_volumes, MetricKind kind);

struct RobustVolumeOptions {
  int n_grids = 5;
  int grid_size = 5;
  double lo = -2.0;
  double hi = 2.0;
  GridKind kind = GridKind::random;
};

/// Volume estimates over n_grids independent grids, one per requested metric,
/// all from the same discretized kernels. Throws SampleDiscarded if any grid
/// yields a rejected kernel.
std::vector<VolumeEstimate> robust_volumes(const CovarianceMatrix &m, const RobustVolumeOptions &opts,
                                           SampleStream &stream, std::span<const MetricKind> metrics,
                                           const Tolerances &tol = kDefaultTolerances);

VolumeEstimate robust_volume(const CovarianceMatrix &m, const RobustVolumeOptions &opts, SampleStream &stream,
                             MetricKind metric = MetricKind::bures, const Tolerances &tol = kDefaultTolerances);

}  // namespace gcensus

#endif  // GCENSUS_MEASURES_HPP
