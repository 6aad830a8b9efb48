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

#include "gcensus/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>

#include "gcensus/errors.hpp"

namespace gcensus {

void SamplerConfig::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("k must be positive and finite");
  }
  if (!(l > 0.0) || !std::isfinite(l)) {
    throw std::invalid_argument("l must be positive and finite");
  }
  if (mode_count != 1 && mode_count != 2) {
    throw std::invalid_argument("mode_count must be 1 or 2");
  }
}

CovarianceMatrix sample_matrix(const SamplerConfig &cfg, SampleStream &stream) {
  Mat4 m = Mat4::Zero();
  for (int i = 0; i < 4; ++i) {
    m(i, i) = stream.uniform(0.0, cfg.k);
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      m(i, j) = stream.uniform(-cfg.l, cfg.l);
    }
  }
  return CovarianceMatrix::from_upper(m);
}

Mat2 sample_one_mode(const SamplerConfig &cfg, SampleStream &stream) {
  Mat2 a;
  a(0, 0) = stream.uniform(0.0, cfg.k);
  a(1, 1) = stream.uniform(0.0, cfg.k);
  a(0, 1) = stream.uniform(-cfg.l, cfg.l);
  a(1, 0) = a(0, 1);
  return a;
}

// ---------------------------------------------------------------------------

void LogSumExp::add(double x) {
  if (x == -std::numeric_limits<double>::infinity()) {
    return;
  }
  if (x > shift_) {
    sum_ = sum_ * std::exp(shift_ - x) + 1.0;
    shift_ = x;
  } else {
    sum_ += std::exp(x - shift_);
  }
}

void LogSumExp::merge(const LogSumExp &other) {
  if (other.empty()) {
    return;
  }
  if (empty()) {
    *this = other;
    return;
  }
  if (other.shift_ > shift_) {
    sum_ = sum_ * std::exp(shift_ - other.shift_) + other.sum_;
    shift_ = other.shift_;
  } else {
    sum_ += other.sum_ * std::exp(other.shift_ - shift_);
  }
}

double LogSumExp::value() const {
  if (empty()) {
    return -std::numeric_limits<double>::infinity();
  }
  return shift_ + std::log(sum_);
}

void CensusCounts::merge(const CensusCounts &o) {
  generated += o.generated;
  positive_definite += o.positive_definite;
  accepted += o.accepted;
  surviving += o.surviving;
  separable += o.separable;
  classical += o.classical;
  physical += o.physical;
  complex_roots += o.complex_roots;
  solver_failures += o.solver_failures;
  solver_fallbacks += o.solver_fallbacks;
  discarded_grids += o.discarded_grids;
  oracle_checked += o.oracle_checked;
  boundary_disagreements += o.boundary_disagreements;
  volume_order_violations += o.volume_order_violations;
  numerical_faults += o.numerical_faults;
}

CensusAccumulator::CensusAccumulator(std::vector<std::string> measure_names) {
  tallies.reserve(measure_names.size());
  for (auto &name : measure_names) {
    tallies.push_back(MeasureTally{std::move(name), {}, {}, {}});
  }
}

void CensusAccumulator::record(bool separable, bool classical, std::span<const double> log_weights) {
  if (log_weights.size() != tallies.size()) {
    throw std::invalid_argument("one log weight per measure expected");
  }
  ++counts.surviving;
  for (std::size_t i = 0; i < tallies.size(); ++i) {
    tallies[i].accepted.add(log_weights[i]);
    if (separable) {
      tallies[i].separable.add(log_weights[i]);
      if (classical) {
        tallies[i].classical.add(log_weights[i]);
      }
    }
  }
}

void CensusAccumulator::merge(const CensusAccumulator &other) {
  counts.merge(other.counts);
  for (std::size_t i = 0; i < tallies.size(); ++i) {
    tallies[i].accepted.merge(other.tallies[i].accepted);
    tallies[i].separable.merge(other.tallies[i].separable);
    tallies[i].classical.merge(other.tallies[i].classical);
  }
}

namespace {

double weighted_ratio(double log_num, double log_den) {
  if (log_den == -std::numeric_limits<double>::infinity()) {
    throw EmptyCensusError("no accepted samples: probabilities are undefined");
  }
  if (log_num == -std::numeric_limits<double>::infinity()) {
    return 0.0;
  }
  return std::min(1.0, std::exp(log_num - log_den));
}

}  // namespace

double MeasureProbabilities::prob_sep() const { return weighted_ratio(log_weight_separable, log_weight_accepted); }

double MeasureProbabilities::prob_classical() const {
  return weighted_ratio(log_weight_classical, log_weight_accepted);
}

const MeasureProbabilities &CensusResult::measure(std::string_view name) const {
  for (const auto &m : measures) {
    if (m.name == name) {
      return m;
    }
  }
  throw std::out_of_range("no measure named " + std::string(name));
}

CensusResult to_result(const CensusAccumulator &acc, const SamplerConfig &cfg, double wall_seconds) {
  CensusResult r;
  r.config = cfg;
  r.counts = acc.counts;
  r.wall_seconds = wall_seconds;
  for (const auto &t : acc.tallies) {
    r.measures.push_back({t.name, t.accepted.value(), t.separable.value(), t.classical.value()});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Chunked execution. Each chunk of consecutive sample indices is processed
// sequentially into its own accumulator; accumulators are merged in chunk
// order after all workers finish, so the result depends only on chunk_size.

namespace {

template <class Acc, class MakeAcc, class Process>
Acc run_chunked(std::uint64_t total, const ExecutionOptions &exec, MakeAcc make_acc, Process process) {
  if (exec.chunk_size == 0) {
    throw std::invalid_argument("chunk size must be positive");
  }
  const std::uint64_t n_chunks = (total + exec.chunk_size - 1) / exec.chunk_size;
  std::vector<std::optional<Acc>> partials(n_chunks);
  std::vector<std::exception_ptr> errors(n_chunks);
  std::atomic<std::uint64_t> next{0};
  // Lowest failing chunk so far; later chunks are skipped, earlier ones still run.
  std::atomic<std::uint64_t> first_failure{n_chunks};
  std::mutex progress_mutex;
  std::uint64_t done = 0;

  const auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) {
        return;
      }
      if (c > first_failure.load()) {
        continue;
      }
      const std::uint64_t begin = c * exec.chunk_size;
      const std::uint64_t end = std::min(total, begin + exec.chunk_size);
      try {
        Acc acc = make_acc();
        for (std::uint64_t i = begin; i < end; ++i) {
          process(acc, i);
        }
        partials[c].emplace(std::move(acc));
      } catch (...) {
        errors[c] = std::current_exception();
        std::uint64_t cur = first_failure.load();
        while (c < cur && !first_failure.compare_exchange_weak(cur, c)) {
        }
        continue;
      }
      if (exec.progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        done += end - begin;
        exec.progress(done, total);
      }
    }
  };

  const int workers = std::max(1, exec.workers);
  if (workers == 1 || n_chunks <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const auto spawn = static_cast<std::uint64_t>(workers) < n_chunks ? workers : static_cast<int>(n_chunks);
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int w = 0; w < spawn; ++w) {
      pool.emplace_back(worker);
    }
    for (auto &t : pool) {
      t.join();
    }
  }

  for (std::uint64_t c = 0; c < n_chunks; ++c) {
    if (errors[c]) {
      std::rethrow_exception(errors[c]);
    }
  }

  Acc result = make_acc();
  for (auto &p : partials) {
    if (p) {
      result.merge(*p);
    } else {
      throw std::logic_error("census chunk missing after successful run");
    }
  }
  return result;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Shared screening for the two-mode censuses. Returns the verdict when the
// sample is accepted (and should be weighted), std::nullopt otherwise.
std::optional<Verdict> screen(const CovarianceMatrix &m, CensusCounts &counts, const ExecutionOptions &exec) {
  ++counts.generated;
  const Verdict v = classify(m, exec.tol);
  if (v.screening != Screening::not_positive_definite) {
    ++counts.positive_definite;
  }
  if (v.screening == Screening::complex_root) {
    ++counts.complex_roots;
  }
  if (v.screening == Screening::solver_failure) {
    ++counts.solver_failures;
  }
  if (v.screening != Screening::accepted) {
    return std::nullopt;
  }
  if (v.physical) {
    ++counts.physical;
  }
  if (exec.strict_physical && !v.physical) {
    return std::nullopt;
  }
  if (v.margin_ppt) {
    ++counts.oracle_checked;
    if (oracle_disagrees(v, exec.tol)) {
      throw OracleDisagreementError(m, v.margin_sep, *v.margin_ppt);
    }
    if (v.separable != (*v.margin_ppt >= -exec.tol.uncertainty_psd)) {
      ++counts.boundary_disagreements;
    }
  }
  ++counts.accepted;
  if (v.separable) {
    ++counts.separable;
    if (v.classical) {
      ++counts.classical;
    }
  }
  return v;
}

}  // namespace

CensusResult run_classical_census(const SamplerConfig &cfg, const ExecutionOptions &exec) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto acc = run_chunked<CensusAccumulator>(
      cfg.samples, exec, [] { return CensusAccumulator({"fisher"}); },
      [&](CensusAccumulator &a, std::uint64_t index) {
        SampleStream stream(cfg.seed, index);
        const CovarianceMatrix m = sample_matrix(cfg, stream);
        const auto v = screen(m, a.counts, exec);
        if (!v) {
          return;
        }
        const double w = jeffreys_log_weight(m);
        a.record(v->separable, v->classical, std::span<const double>(&w, 1));
      });
  return to_result(acc, cfg, seconds_since(t0));
}

std::vector<std::string> bures_measure_names(const BuresOptions &opts) {
  std::vector<std::string> names;
  if (opts.shadow_fisher) {
    names.emplace_back("fisher");
  }
  for (MetricKind k : opts.metrics) {
    const std::string base(to_string(k));
    if (opts.grid.kind == GridKind::regular) {
      names.push_back(base + "/raw");
    } else {
      names.push_back(base + "/median");
      names.push_back(base + "/trimmed-mean");
    }
  }
  return names;
}

namespace {

int metric_rank(MetricKind k) {
  switch (k) {
    case MetricKind::bures:
      return 0;
    case MetricKind::kubo_mori:
      return 1;
    case MetricKind::maximal:
      return 2;
  }
  return 0;
}

}  // namespace

CensusResult run_bures_census(const SamplerConfig &cfg, const BuresOptions &opts, const ExecutionOptions &exec) {
  cfg.validate();
  if (opts.metrics.empty()) {
    throw std::invalid_argument("at least one metric is required");
  }
  if (opts.grid.kind == GridKind::regular && opts.grid.grid_size % 2 == 0) {
    throw std::invalid_argument("regular grids need an odd size");
  }
  const auto names = bures_measure_names(opts);
  const auto t0 = std::chrono::steady_clock::now();
  const auto acc = run_chunked<CensusAccumulator>(
      cfg.samples, exec, [&] { return CensusAccumulator(names); },
      [&](CensusAccumulator &a, std::uint64_t index) {
        SampleStream stream(cfg.seed, index);
        const CovarianceMatrix m = sample_matrix(cfg, stream);
        const auto v = screen(m, a.counts, exec);
        if (!v) {
          return;
        }
        std::vector<VolumeEstimate> est;
        try {
          est = robust_volumes(m, opts.grid, stream, opts.metrics, exec.tol);
        } catch (const SampleDiscarded &) {
          ++a.counts.discarded_grids;
          return;
        } catch (const SingularBlockError &) {
          ++a.counts.discarded_grids;
          return;
        }
        bool finite = true;
        for (const auto &e : est) {
          for (double x : e.log_volumes) {
            finite = finite && std::isfinite(x);
          }
        }
        if (!finite) {
          ++a.counts.numerical_faults;
          return;
        }
        // ln V_bures <= ln V_kubo_mori <= ln V_maximal on each grid
        bool ordered = true;
        for (std::size_t i = 0; i < est.size(); ++i) {
          for (std::size_t j = 0; j < est.size(); ++j) {
            if (metric_rank(opts.metrics[i]) >= metric_rank(opts.metrics[j])) {
              continue;
            }
            for (std::size_t g = 0; g < est[i].log_volumes.size(); ++g) {
              const double lo = est[i].log_volumes[g];
              const double hi = est[j].log_volumes[g];
              ordered = ordered && lo <= hi + 1e-12 * std::max(1.0, std::abs(hi));
            }
          }
        }
        if (!ordered) {
          ++a.counts.volume_order_violations;
        }
        std::vector<double> weights;
        weights.reserve(names.size());
        if (opts.shadow_fisher) {
          weights.push_back(jeffreys_log_weight(m));
        }
        for (const auto &e : est) {
          if (opts.grid.kind == GridKind::regular) {
            weights.push_back(e.median);
          } else {
            weights.push_back(e.median);
            weights.push_back(e.trimmed_mean);
          }
        }
        a.record(v->separable, v->classical, weights);
      });
  return to_result(acc, cfg, seconds_since(t0));
}

// ---------------------------------------------------------------------------

namespace {

struct OneModeAccumulator {
  std::uint64_t generated = 0;
  std::uint64_t accepted = 0;
  std::uint64_t classical = 0;
  LogSumExp w_all, w_cls, w2_all, w2_cls;

  void merge(const OneModeAccumulator &o) {
    generated += o.generated;
    accepted += o.accepted;
    classical += o.classical;
    w_all.merge(o.w_all);
    w_cls.merge(o.w_cls);
    w2_all.merge(o.w2_all);
    w2_cls.merge(o.w2_cls);
  }
};

std::uint64_t one_mode_seed(std::uint64_t seed, std::size_t k_index) {
  return seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(k_index) + 1);
}

}  // namespace

std::vector<OneModePoint> run_one_mode_classicality(const SamplerConfig &base, std::span<const double> k_schedule,
                                                    double l_over_k, const ExecutionOptions &exec) {
  if (!(l_over_k > 0.0)) {
    throw std::invalid_argument("l/k ratio must be positive");
  }
  std::vector<OneModePoint> out;
  for (std::size_t ki = 0; ki < k_schedule.size(); ++ki) {
    SamplerConfig cfg = base;
    cfg.mode_count = 1;
    cfg.k = k_schedule[ki];
    cfg.l = l_over_k * cfg.k;
    cfg.validate();
    const std::uint64_t seed = one_mode_seed(base.seed, ki);
    const auto acc = run_chunked<OneModeAccumulator>(
        cfg.samples, exec, [] { return OneModeAccumulator{}; },
        [&](OneModeAccumulator &a, std::uint64_t index) {
          SampleStream stream(seed, index);
          const Mat2 m = sample_one_mode(cfg, stream);
          ++a.generated;
          const double det = m.determinant();
          if (!(m(0, 0) > 0.0) || !(det >= 1.0)) {
            return;
          }
          ++a.accepted;
          const double w = jeffreys_log_weight(m);
          a.w_all.add(w);
          a.w2_all.add(2.0 * w);
          const Mat2 shifted = m - Mat2::Identity();
          if (shifted(0, 0) > exec.tol.classical_strict && shifted.determinant() > exec.tol.classical_strict) {
            ++a.classical;
            a.w_cls.add(w);
            a.w2_cls.add(2.0 * w);
          }
        });
    OneModePoint p;
    p.k = cfg.k;
    p.l = cfg.l;
    p.generated = acc.generated;
    p.accepted = acc.accepted;
    p.classical = acc.classical;
    if (acc.accepted > 0) {
      const double lw = acc.w_all.value();
      p.prob_classical = weighted_ratio(acc.w_cls.value(), lw);
      // Var(R) ~ sum w^2 (c - R)^2 / (sum w)^2 with c in {0, 1}.
      const double r = p.prob_classical;
      const double s2_all = std::exp(acc.w2_all.value() - 2.0 * lw);
      const double s2_cls = std::exp(acc.w2_cls.value() - 2.0 * lw);
      p.std_error = std::sqrt(std::max(0.0, s2_cls * (1.0 - 2.0 * r) + r * r * s2_all));
    }
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------

EntropyBalance entropy_balance(const CovarianceMatrix &m) {
  return {entropy(m), entropy(m.mode1()), entropy(m.mode2())};
}

namespace {

struct EntropyAccumulator {
  EntropyReport report;

  void merge(const EntropyAccumulator &o) {
    report.generated += o.report.generated;
    report.accepted += o.report.accepted;
    report.physical_separable += o.report.physical_separable;
    report.violations += o.report.violations;
    for (const auto &e : o.report.examples) {
      if (report.examples.size() < 3) {
        report.examples.push_back(e);
      }
    }
  }
};

}  // namespace

EntropyReport run_entropy_probe(const SamplerConfig &cfg, const ExecutionOptions &exec) {
  cfg.validate();
  const auto acc = run_chunked<EntropyAccumulator>(
      cfg.samples, exec, [] { return EntropyAccumulator{}; },
      [&](EntropyAccumulator &a, std::uint64_t index) {
        SampleStream stream(cfg.seed, index);
        const CovarianceMatrix m = sample_matrix(cfg, stream);
        ++a.report.generated;
        const Verdict v = classify(m, exec.tol);
        if (v.screening != Screening::accepted) {
          return;
        }
        ++a.report.accepted;
        if (!v.physical || !v.separable) {
          return;
        }
        ++a.report.physical_separable;
        if (entropy_balance(m).violates()) {
          ++a.report.violations;
          if (a.report.examples.size() < 3) {
            a.report.examples.push_back(m);
          }
        }
      });
  return acc.report;
}

}  // namespace gcensus
