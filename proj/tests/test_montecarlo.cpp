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


#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "gcensus/errors.hpp"
#include "gcensus/montecarlo.hpp"

namespace gcensus {
namespace {

void expect_same(const CensusResult &a, const CensusResult &b) {
  EXPECT_EQ(a.counts.generated, b.counts.generated);
  EXPECT_EQ(a.counts.accepted, b.counts.accepted);
  EXPECT_EQ(a.counts.separable, b.counts.separable);
  EXPECT_EQ(a.counts.classical, b.counts.classical);
  EXPECT_EQ(a.counts.discarded_grids, b.counts.discarded_grids);
  ASSERT_EQ(a.measures.size(), b.measures.size());
  for (std::size_t i = 0; i < a.measures.size(); ++i) {
    EXPECT_EQ(a.measures[i].log_weight_accepted, b.measures[i].log_weight_accepted);
    EXPECT_EQ(a.measures[i].log_weight_separable, b.measures[i].log_weight_separable);
    EXPECT_EQ(a.measures[i].log_weight_classical, b.measures[i].log_weight_classical);
  }
}

void expect_count_order(const CensusCounts &c) {
  EXPECT_LE(c.classical, c.separable);
  EXPECT_LE(c.separable, c.accepted);
  EXPECT_LE(c.accepted, c.generated);
  EXPECT_LE(c.surviving, c.accepted);
}

TEST(Sampler, RangesAndDeterminism) {
  const SamplerConfig cfg{10.0, 5.0, 1, 3, 2};
  for (std::uint64_t i = 0; i < 1000; ++i) {
    SampleStream s(cfg.seed, i), t(cfg.seed, i);
    const auto m = sample_matrix(cfg, s);
    EXPECT_EQ(m, sample_matrix(cfg, t));
    for (int r = 0; r < 4; ++r) {
      EXPECT_GE(m(r, r), 0.0);
      EXPECT_LT(m(r, r), 10.0);
      for (int c = r + 1; c < 4; ++c) {
        EXPECT_GE(m(r, c), -5.0);
        EXPECT_LT(m(r, c), 5.0);
        EXPECT_EQ(m(r, c), m(c, r));
      }
    }
  }
  SampleStream a(1, 0), b(1, 1), c(2, 0);
  EXPECT_NE(a(), b());
  EXPECT_NE(SampleStream(1, 0)(), c());
}

TEST(Sampler, RejectsBadConfig) {
  EXPECT_THROW((SamplerConfig{0.0, 1.0, 1, 0, 2}.validate()), std::invalid_argument);
  EXPECT_THROW((SamplerConfig{1.0, -1.0, 1, 0, 2}.validate()), std::invalid_argument);
  EXPECT_THROW((SamplerConfig{1.0, 1.0, 1, 0, 3}.validate()), std::invalid_argument);
}

TEST(LogSumExp, MatchesTwoPass) {
  std::mt19937_64 rng(73);
  std::normal_distribution<double> n(0.0, 30.0);
  std::vector<double> xs(10000);
  for (auto &x : xs) {
    x = n(rng);
  }
  LogSumExp stream;
  for (double x : xs) {
    stream.add(x);
  }
  const double mx = *std::max_element(xs.begin(), xs.end());
  double s = 0.0;
  for (double x : xs) {
    s += std::exp(x - mx);
  }
  const double exact = mx + std::log(s);
  EXPECT_NEAR(stream.value(), exact, 1e-12 * std::abs(exact));

  LogSumExp left, right;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    (i < 3000 ? left : right).add(xs[i]);
  }
  left.merge(right);
  EXPECT_NEAR(left.value(), exact, 1e-12 * std::abs(exact));
  EXPECT_EQ(LogSumExp().value(), -std::numeric_limits<double>::infinity());
}

TEST(CensusAccumulator, ProbabilitiesInvariantUnderWeightShift) {
  std::mt19937_64 rng(79);
  std::normal_distribution<double> n(0.0, 5.0);
  std::bernoulli_distribution coin(0.7);
  CensusAccumulator a, b;
  for (int i = 0; i < 5000; ++i) {
    const double w = n(rng);
    const bool sep = coin(rng);
    const bool cls = sep && coin(rng);
    const double w1 = w, w2 = w + 123.456;
    a.record(sep, cls, std::span<const double>(&w1, 1));
    b.record(sep, cls, std::span<const double>(&w2, 1));
  }
  const SamplerConfig cfg;
  const auto ra = to_result(a, cfg, 0.0).measure("fisher");
  const auto rb = to_result(b, cfg, 0.0).measure("fisher");
  EXPECT_NEAR(ra.prob_sep(), rb.prob_sep(), 1e-12);
  EXPECT_NEAR(ra.prob_classical(), rb.prob_classical(), 1e-12);
}

TEST(ClassicalCensus, DeterministicAcrossWorkers) {
  const SamplerConfig cfg{10.0, 5.0, 50000, 5, 2};
  ExecutionOptions one;
  one.chunk_size = 1000;
  ExecutionOptions many = one;
  many.workers = 4;
  const auto a = run_classical_census(cfg, one);
  const auto b = run_classical_census(cfg, many);
  expect_same(a, b);
  expect_count_order(a.counts);
  EXPECT_EQ(a.counts.generated, 50000u);
  EXPECT_GT(a.counts.accepted, 0u);
  EXPECT_EQ(a.counts.oracle_checked, a.counts.physical);
}

TEST(ClassicalCensus, EmptyCensus) {
  const auto r = run_classical_census({10.0, 5.0, 0, 1, 2});
  EXPECT_EQ(r.counts.generated, 0u);
  EXPECT_EQ(r.counts.accepted, 0u);
  EXPECT_THROW(r.measure("fisher").prob_sep(), EmptyCensusError);
  EXPECT_THROW(r.measure("fisher").prob_classical(), EmptyCensusError);
}

TEST(ClassicalCensus, ProbabilitiesAreOrdered) {
  const auto r = run_classical_census({20.0, 10.0, 40000, 8, 2});
  const auto &f = r.measure("fisher");
  EXPECT_GE(f.prob_sep(), f.prob_classical());
  EXPECT_LE(f.prob_sep(), 1.0);
  EXPECT_GE(f.prob_classical(), 0.0);
}

TEST(ClassicalCensus, StrictPhysicalAcceptsOnlyPhysical) {
  ExecutionOptions exec;
  exec.strict_physical = true;
  const auto r = run_classical_census({10.0, 5.0, 30000, 2, 2}, exec);
  EXPECT_EQ(r.counts.accepted, r.counts.physical);
}

TEST(BuresCensus, MeasureNamesAndDeterminism) {
  BuresOptions opts;
  opts.metrics = {MetricKind::bures, MetricKind::kubo_mori};
  const auto names = bures_measure_names(opts);
  EXPECT_EQ(names, (std::vector<std::string>{"fisher", "bures/median", "bures/trimmed-mean", "kubo-mori/median",
                                             "kubo-mori/trimmed-mean"}));
  const SamplerConfig cfg{15.0, 15.0, 40000, 4, 2};
  ExecutionOptions one;
  one.chunk_size = 2000;
  ExecutionOptions many = one;
  many.workers = 3;
  const auto a = run_bures_census(cfg, opts, one);
  const auto b = run_bures_census(cfg, opts, many);
  expect_same(a, b);
  expect_count_order(a.counts);
  EXPECT_EQ(a.counts.surviving + a.counts.discarded_grids + a.counts.numerical_faults, a.counts.accepted);
  EXPECT_EQ(a.counts.volume_order_violations, 0u);
}

TEST(BuresCensus, RegularGridNames) {
  BuresOptions opts;
  opts.grid.kind = GridKind::regular;
  opts.grid.grid_size = 7;
  opts.metrics = {MetricKind::maximal};
  opts.shadow_fisher = false;
  EXPECT_EQ(bures_measure_names(opts), (std::vector<std::string>{"maximal/raw"}));
  opts.grid.grid_size = 6;
  EXPECT_THROW(run_bures_census({15, 15, 10, 1, 2}, opts), std::invalid_argument);
}

TEST(OneMode, BelowUnitBoxHasNoClassicalStates) {
  const std::vector<double> ks{0.9};
  const auto p = run_one_mode_classicality({1.0, 1.0, 20000, 3, 1}, ks, 0.5);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].accepted, 0u);
  EXPECT_EQ(p[0].prob_classical, 0.0);
}

TEST(OneMode, PositiveAndDeterministic) {
  const std::vector<double> ks{10.0, 100.0};
  ExecutionOptions many;
  many.workers = 4;
  many.chunk_size = 5000;
  ExecutionOptions one = many;
  one.workers = 1;
  const auto a = run_one_mode_classicality({1.0, 1.0, 50000, 3, 1}, ks, 0.5, one);
  const auto b = run_one_mode_classicality({1.0, 1.0, 50000, 3, 1}, ks, 0.5, many);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_GT(a[i].prob_classical, 0.0);
    EXPECT_GT(a[i].std_error, 0.0);
    EXPECT_EQ(a[i].prob_classical, b[i].prob_classical);
    EXPECT_EQ(a[i].classical, b[i].classical);
    EXPECT_DOUBLE_EQ(a[i].l, 0.5 * a[i].k);
  }
}

TEST(Entropy, ProductStateIsNotAViolation) {
  const auto m = CovarianceMatrix::from_blocks(2 * Mat2::Identity(), 3 * Mat2::Identity(), Mat2::Zero());
  const auto b = entropy_balance(m);
  EXPECT_NEAR(b.joint, b.mode1 + b.mode2, 1e-12);
  EXPECT_FALSE(b.violates());
}

TEST(Entropy, SqueezedVacuumViolatesButIsEntangled) {
  const auto m = CovarianceMatrix::two_mode_squeezed_vacuum(0.6);
  const auto b = entropy_balance(m);
  EXPECT_NEAR(b.joint, 0.0, 1e-6);
  EXPECT_GT(b.mode1, 0.0);
  EXPECT_TRUE(b.violates());
  EXPECT_FALSE(classify(m).separable);
}

TEST(Entropy, ProbeIsReproducible) {
  const SamplerConfig cfg{10.0, 5.0, 40000, 12, 2};
  ExecutionOptions many;
  many.workers = 4;
  many.chunk_size = 3000;
  const auto a = run_entropy_probe(cfg);
  const auto b = run_entropy_probe(cfg, many);
  EXPECT_EQ(a.generated, b.generated);
  EXPECT_EQ(a.physical_separable, b.physical_separable);
  EXPECT_EQ(a.violations, b.violations);
  ASSERT_EQ(a.examples.size(), b.examples.size());
  for (std::size_t i = 0; i < a.examples.size(); ++i) {
    EXPECT_EQ(a.examples[i], b.examples[i]);
  }
  EXPECT_LE(a.examples.size(), 3u);
  EXPECT_GT(a.physical_separable, 0u);
}

}  // namespace
}  // namespace gcensus
