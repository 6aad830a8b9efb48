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

#ifndef GCENSUS_MONTECARLO_HPP
#define GCENSUS_MONTECARLO_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gcensus/criteria.hpp"
#include "gcensus/measures.hpp"
#include "gcensus/random.hpp"
#include "gcensus/states.hpp"
#include "gcensus/tolerances.hpp"

namespace gcensus {

/// Box sampler: diagonal entries uniform on [0, k], off-diagonal entries uniform on [-l, l].
struct SamplerConfig {
  double k = 15.0;
  double l = 15.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  int mode_count = 2;

  void validate() const;
};

/// Draws the four diagonal entries, then the six upper off-diagonal entries in
/// row-major order.
CovarianceMatrix sample_matrix(const SamplerConfig &cfg, SampleStream &stream);
/// Two diagonal entries, then the off-diagonal entry.
Mat2 sample_one_mode(const SamplerConfig &cfg, SampleStream &stream);

/// Running log(sum exp(x_i)) kept as (shift, scaled sum).
class LogSumExp {
 public:
  void add(double x);
  void merge(const LogSumExp &other);
  /// -inf when empty.
  double value() const;
  bool empty() const { return sum_ == 0.0; }

 private:
  double shift_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

struct CensusCounts {
  std::uint64_t generated = 0;
  std::uint64_t positive_definite = 0;
  /// Passed the full filter chain (and strict physicality when requested).
  std::uint64_t accepted = 0;
  /// Accepted samples that entered the weighted tallies (accepted minus discarded grids).
  std::uint64_t surviving = 0;
  std::uint64_t separable = 0;
  std::uint64_t classical = 0;
  std::uint64_t physical = 0;
  std::uint64_t complex_roots = 0;
  std::uint64_t solver_failures = 0;
  std::uint64_t solver_fallbacks = 0;
  std::uint64_t discarded_grids = 0;
  std::uint64_t oracle_checked = 0;
  /// Verdict differences inside the boundary band (permitted, counted).
  std::uint64_t boundary_disagreements = 0;
  /// Accepted spectra violating ln V_bures <= ln V_kubo_mori <= ln V_maximal.
  std::uint64_t volume_order_violations = 0;
  /// Non-finite log volumes.
  std::uint64_t numerical_faults = 0;

  void merge(const CensusCounts &o);
};

struct MeasureTally {
  std::string name;
  LogSumExp accepted;
  LogSumExp separable;
  LogSumExp classical;
};

/// Mergeable per-worker state of a census.
class CensusAccumulator {
 public:
  explicit CensusAccumulator(std::vector<std::string> measure_names = {"fisher"});

  CensusCounts counts;
  std::vector<MeasureTally> tallies;

  /// One accepted, surviving sample with one log weight per measure.
  void record(bool separable, bool classical, std::span<const double> log_weights);
  void merge(const CensusAccumulator &other);
};

struct MeasureProbabilities {
  std::string name;
  double log_weight_accepted = -std::numeric_limits<double>::infinity();
  double log_weight_separable = -std::numeric_limits<double>::infinity();
  double log_weight_classical = -std::numeric_limits<double>::infinity();

  /// W_sep / W_acc; throws EmptyCensusError when nothing was accepted.
  double prob_sep() const;
  double prob_classical() const;
};

struct CensusResult {
  SamplerConfig config;
  CensusCounts counts;
  std::vector<MeasureProbabilities> measures;
  double wall_seconds = 0.0;

  const MeasureProbabilities &measure(std::string_view name) const;
};

CensusResult to_result(const CensusAccumulator &acc, const SamplerConfig &cfg, double wall_seconds);

struct ExecutionOptions {
  int workers = 1;
  /// Samples per work unit; part of the determinism contract, independent of workers.
  std::uint64_t chunk_size = 4096;
  /// Additionally require M + iΩ >= 0 for acceptance.
  bool strict_physical = false;
  Tolerances tol = kDefaultTolerances;
  /// Called after each finished chunk (serialized).
  std::function<void(std::uint64_t done, std::uint64_t total)> progress;
};

/// Jeffreys-weighted separability and classicality census. The mirror-reflection
/// oracle runs on every accepted physical sample; a disagreement outside the
/// boundary band raises OracleDisagreementError.
CensusResult run_classical_census(const SamplerConfig &cfg, const ExecutionOptions &exec = {});

struct BuresOptions {
  RobustVolumeOptions grid;
  std::vector<MetricKind> metrics{MetricKind::bures};
  /// Also tally Jeffreys weights over the surviving population.
  bool shadow_fisher = true;
};

/// Measure names used by run_bures_census: "fisher", then "<metric>/median" and
/// "<metric>/trimmed-mean" for random grids, or "<metric>/raw" for a regular grid.
std::vector<std::string> bures_measure_names(const BuresOptions &opts);

CensusResult run_bures_census(const SamplerConfig &cfg, const BuresOptions &opts, const ExecutionOptions &exec = {});

struct OneModePoint {
  double k = 0.0;
  double l = 0.0;
  std::uint64_t generated = 0;
  std::uint64_t accepted = 0;
  std::uint64_t classical = 0;
  double prob_classical = 0.0;
  /// Delta-method standard error of the weighted ratio.
  double std_error = 0.0;
};

/// Jeffreys-weighted (exponent -3/2) probability that a physical one-mode
/// covariance has A - I positive definite, for each k in the schedule with
/// l = l_over_k * k.
std::vector<OneModePoint> run_one_mode_classicality(const SamplerConfig &base, std::span<const double> k_schedule,
                                                    double l_over_k, const ExecutionOptions &exec = {});

struct EntropyReport {
  std::uint64_t generated = 0;
  std::uint64_t accepted = 0;
  std::uint64_t physical_separable = 0;
  /// Separable samples with S(rho12) < max(S(rho1), S(rho2)).
  std::uint64_t violations = 0;
  /// First (by sample index) violating matrices, at most three.
  std::vector<CovarianceMatrix> examples;
};

struct EntropyBalance {
  double joint = 0.0;
  double mode1 = 0.0;
  double mode2 = 0.0;
  bool violates() const { return joint < std::max(mode1, mode2); }
};

EntropyBalance entropy_balance(const CovarianceMatrix &m);

EntropyReport run_entropy_probe(const SamplerConfig &cfg, const ExecutionOptions &exec = {});

}  // namespace gcensus

#endif  // GCENSUS_MONTECARLO_HPP
