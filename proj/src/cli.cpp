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

#include "gcensus/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcensus/criteria.hpp"
#include "gcensus/errors.hpp"
#include "gcensus/fidelity.hpp"
#include "gcensus/format.hpp"
#include "gcensus/montecarlo.hpp"

namespace gcensus {

namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::optional<double> k;
  std::optional<double> l;
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 1;
  int grid_size = 5;
  int n_grids = 5;
  std::vector<double> grid_range{-2.0, 2.0};
  std::string grid = "random";
  std::vector<std::string> metrics;
  std::string robust = "both";
  int workers = 1;
  std::uint64_t chunk_size = 4096;
  std::string out;
  std::string format = "csv";
  double scale = 1.0;
  bool strict_physical = false;
  bool progress = false;
  std::vector<double> k_schedule{10.0, 100.0, 1000.0};
  double l_over_k = 0.5;
  std::string dump = "gcensus-disagreement.txt";
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rows of scalar cells; rendered as CSV, a JSON array of objects, or an aligned table.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Json>> rows;
};

std::string cell_text(const Json &v) {
  if (v.is_null()) {
    return "nan";
  }
  if (v.is_number_float()) {
    return format_17g(v.get<double>());
  }
  if (v.is_number_unsigned()) {
    return std::to_string(v.get<std::uint64_t>());
  }
  if (v.is_number_integer()) {
    return std::to_string(v.get<std::int64_t>());
  }
  if (v.is_boolean()) {
    return v.get<bool>() ? "true" : "false";
  }
  return v.get<std::string>();
}

Json number_or_null(double x) {
  if (!std::isfinite(x)) {
    return nullptr;
  }
  return x;
}

void render(const Table &t, const std::string &format, std::ostream &out) {
  if (format == "json") {
    Json arr = Json::array();
    for (const auto &row : t.rows) {
      Json obj = Json::object();
      for (std::size_t i = 0; i < t.header.size(); ++i) {
        obj[t.header[i]] = row[i];
      }
      arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << '\n';
    return;
  }
  std::vector<std::vector<std::string>> text;
  for (const auto &row : t.rows) {
    std::vector<std::string> line;
    for (const auto &c : row) {
      line.push_back(cell_text(c));
    }
    text.push_back(std::move(line));
  }
  if (format == "csv") {
    const auto emit = [&out](const std::vector<std::string> &cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        out << (i ? "," : "") << cells[i];
      }
      out << '\n';
    };
    emit(t.header);
    for (const auto &line : text) {
      emit(line);
    }
    return;
  }
  std::vector<std::size_t> width(t.header.size());
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    width[i] = t.header[i].size();
    for (const auto &line : text) {
      width[i] = std::max(width[i], line[i].size());
    }
  }
  const auto emit = [&](const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << cells[i];
    }
    out << '\n';
  };
  emit(t.header);
  for (const auto &line : text) {
    emit(line);
  }
}

ExecutionOptions execution(const RunConfig &rc, std::ostream &err) {
  ExecutionOptions exec;
  exec.workers = rc.workers;
  exec.chunk_size = rc.chunk_size;
  exec.strict_physical = rc.strict_physical;
  if (rc.progress) {
    exec.progress = [&err, last = std::uint64_t{0}](std::uint64_t done, std::uint64_t total) mutable {
      if (done == total || done - last >= total / 20 + 1) {
        last = done;
        err << "progress " << done << "/" << total << '\n';
      }
    };
  }
  return exec;
}

SamplerConfig sampler(const RunConfig &rc, double k, double l, std::uint64_t samples) {
  SamplerConfig cfg;
  cfg.k = rc.k.value_or(k);
  cfg.l = rc.l.value_or(l);
  cfg.samples = rc.samples.value_or(samples);
  cfg.seed = rc.seed;
  try {
    cfg.validate();
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void log_summary(std::ostream &err, const char *what, const CensusResult &r) {
  const double rate = r.wall_seconds > 0.0 ? static_cast<double>(r.counts.generated) / r.wall_seconds : 0.0;
  const double acc =
      r.counts.generated ? static_cast<double>(r.counts.accepted) / static_cast<double>(r.counts.generated) : 0.0;
  err << what << ": k=" << r.config.k << " l=" << r.config.l << " generated=" << r.counts.generated
      << " accepted=" << r.counts.accepted << " acceptance=" << acc << " samples/s=" << std::llround(rate)
      << " solver_failures=" << r.counts.solver_failures << " complex_roots=" << r.counts.complex_roots
      << " oracle_checked=" << r.counts.oracle_checked << '\n';
}

double safe_prob(double (MeasureProbabilities::*fn)() const, const MeasureProbabilities &m) {
  try {
    return (m.*fn)();
  } catch (const EmptyCensusError &) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::vector<Json> census_row(const CensusResult &r) {
  const auto &f = r.measure("fisher");
  return {r.config.k,
          r.config.l,
          r.config.samples,
          r.counts.accepted,
          r.counts.separable,
          r.counts.classical,
          number_or_null(safe_prob(&MeasureProbabilities::prob_sep, f)),
          number_or_null(safe_prob(&MeasureProbabilities::prob_classical, f)),
          r.config.seed};
}

Table census_table() {
  Table t;
  std::stringstream header(kCensusCsvHeader);
  for (std::string col; std::getline(header, col, ',');) {
    t.header.push_back(col);
  }
  return t;
}

void require_fisher_only(const RunConfig &rc) {
  for (const auto &m : rc.metrics) {
    if (m != "fisher") {
      throw UsageError("this command only supports --metric fisher");
    }
  }
}

Table cmd_census(const RunConfig &rc, std::ostream &err) {
  require_fisher_only(rc);
  const auto cfg = sampler(rc, 15.0, 15.0, 100000);
  const auto r = run_classical_census(cfg, execution(rc, err));
  log_summary(err, "census", r);
  Table t = census_table();
  t.rows.push_back(census_row(r));
  return t;
}

struct TableRow {
  double k;
  double l;
  std::uint64_t samples;
};

constexpr std::array<TableRow, 5> kTableOne{{
    {10.0, 5.0, 500000},
    {500.0, 250.0, 1900000},
    {20.0, 10.0, 5200000},
    {30.0, 20.0, 8100000},
    {15.0, 15.0, 10000000},
}};

Table cmd_table1(const RunConfig &rc, std::ostream &err) {
  require_fisher_only(rc);
  if (rc.k || rc.l || rc.samples) {
    throw UsageError("table1 takes --scale, not --k/--l/--samples");
  }
  if (!(rc.scale > 0.0)) {
    throw UsageError("--scale must be positive");
  }
  Table t = census_table();
  for (const auto &row : kTableOne) {
    const auto n = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(rc.scale * row.samples)));
    const auto cfg = sampler(rc, row.k, row.l, n);
    const auto r = run_classical_census(cfg, execution(rc, err));
    log_summary(err, "table1", r);
    t.rows.push_back(census_row(r));
  }
  return t;
}

Table cmd_bures(const RunConfig &rc, std::ostream &err) {
  BuresOptions opts;
  opts.shadow_fisher = true;
  opts.metrics.clear();
  for (const auto &m : rc.metrics) {
    if (m == "bures") {
      opts.metrics.push_back(MetricKind::bures);
    } else if (m == "kubo-mori") {
      opts.metrics.push_back(MetricKind::kubo_mori);
    } else if (m == "maximal") {
      opts.metrics.push_back(MetricKind::maximal);
    }
  }
  if (opts.metrics.empty()) {
    opts.metrics.push_back(MetricKind::bures);
  }
  opts.grid.grid_size = rc.grid_size;
  opts.grid.n_grids = rc.n_grids;
  opts.grid.lo = rc.grid_range[0];
  opts.grid.hi = rc.grid_range[1];
  opts.grid.kind = rc.grid == "regular" || rc.robust == "none" ? GridKind::regular : GridKind::random;
  if (opts.grid.kind == GridKind::regular && rc.grid_size % 2 == 0) {
    throw UsageError("--grid-size must be odd for regular grids");
  }
  if (rc.grid_size < 1 || rc.n_grids < 1 || !(rc.grid_range[1] > rc.grid_range[0])) {
    throw UsageError("invalid grid options");
  }
  const auto cfg = sampler(rc, 15.0, 15.0, 10000);
  const auto r = run_bures_census(cfg, opts, execution(rc, err));
  log_summary(err, "bures", r);
  err << "bures: surviving=" << r.counts.surviving << " discarded_grids=" << r.counts.discarded_grids
      << " numerical_faults=" << r.counts.numerical_faults
      << " volume_order_violations=" << r.counts.volume_order_violations << '\n';

  Table t;
  t.header = {"k",         "l",         "samples", "accepted", "surviving", "discarded", "measure", "prob_sep",
              "prob_classical", "seed"};
  for (const auto &m : r.measures) {
    const auto slash = m.name.find('/');
    if (slash != std::string::npos && rc.robust != "both" && rc.robust != "none" &&
        m.name.substr(slash + 1) != rc.robust) {
      continue;
    }
    t.rows.push_back({cfg.k, cfg.l, cfg.samples, r.counts.accepted, r.counts.surviving, r.counts.discarded_grids,
                      m.name, number_or_null(safe_prob(&MeasureProbabilities::prob_sep, m)),
                      number_or_null(safe_prob(&MeasureProbabilities::prob_classical, m)), cfg.seed});
  }
  return t;
}

Table cmd_one_mode(const RunConfig &rc, std::ostream &err) {
  require_fisher_only(rc);
  if (rc.k || rc.l) {
    throw UsageError("one-mode takes --k-schedule and --l-ratio, not --k/--l");
  }
  SamplerConfig base;
  base.samples = rc.samples.value_or(1000000);
  base.seed = rc.seed;
  base.mode_count = 1;
  std::vector<OneModePoint> points;
  try {
    points = run_one_mode_classicality(base, rc.k_schedule, rc.l_over_k, execution(rc, err));
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  Table t;
  t.header = {"k", "l", "samples", "accepted", "classical", "prob_classical", "std_error", "seed"};
  for (const auto &p : points) {
    err << "one-mode: k=" << p.k << " accepted=" << p.accepted << " classical=" << p.classical << '\n';
    t.rows.push_back({p.k, p.l, p.generated, p.accepted, p.classical, number_or_null(p.prob_classical),
                      number_or_null(p.std_error), rc.seed});
  }
  return t;
}

Table cmd_entropy(const RunConfig &rc, std::ostream &err) {
  require_fisher_only(rc);
  const auto cfg = sampler(rc, 15.0, 15.0, 100000);
  const auto rep = run_entropy_probe(cfg, execution(rc, err));
  err << "entropy: physical_separable=" << rep.physical_separable << " violations=" << rep.violations << '\n';
  for (std::size_t i = 0; i < rep.examples.size(); ++i) {
    const auto &m = rep.examples[i];
    const auto bal = entropy_balance(m);
    err << "example " << i << ": S12=" << format_17g(bal.joint) << " S1=" << format_17g(bal.mode1)
        << " S2=" << format_17g(bal.mode2) << " purity=" << format_17g(purity(m)) << '\n';
    for (int r = 0; r < 4; ++r) {
      err << "  ";
      for (int c = 0; c < 4; ++c) {
        err << (c ? " " : "") << format_17g(m(r, c));
      }
      err << '\n';
    }
  }
  Table t;
  t.header = {"k", "l", "samples", "accepted", "physical_separable", "violations", "seed"};
  t.rows.push_back({cfg.k, cfg.l, cfg.samples, rep.accepted, rep.physical_separable, rep.violations, cfg.seed});
  return t;
}

Table cmd_fidelity_check(const RunConfig &, std::ostream &err) {
  constexpr std::array<double, 5> betas{2.0, 3.0, 4.0, 5.0, 6.0};
  constexpr std::array<double, 5> rs{0.1, 0.3, 0.5, 0.7, 0.9};
  const auto check = volume_element_check(betas, rs);
  for (const auto &p : check.points) {
    err << "beta=" << p.beta << " r=" << p.r << " ratio=" << format_17g(p.ratio) << '\n';
  }
  double lo = check.points.front().ratio;
  double hi = lo;
  for (const auto &p : check.points) {
    lo = std::min(lo, p.ratio);
    hi = std::max(hi, p.ratio);
  }
  Table t;
  t.header = {"points", "min_ratio", "max_ratio", "relative_spread"};
  t.rows.push_back({static_cast<std::uint64_t>(check.points.size()), lo, hi, check.relative_spread});
  return t;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Monte Carlo census of separability and classicality for two-mode Gaussian states", "gcensus"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  RunConfig rc;

  app.add_option("--k", rc.k, "upper bound of the diagonal entries");
  app.add_option("--l", rc.l, "half-range of the off-diagonal entries");
  app.add_option("--samples", rc.samples, "number of random matrices");
  app.add_option("--seed", rc.seed, "64-bit seed")->capture_default_str();
  app.add_option("--grid-size", rc.grid_size, "points per grid axis")->capture_default_str();
  app.add_option("--n-grids", rc.n_grids, "random grids per sample")->capture_default_str();
  app.add_option("--grid-range", rc.grid_range, "random grid interval")->expected(2)->capture_default_str();
  app.add_option("--grid", rc.grid, "grid kind")->check(CLI::IsMember({"regular", "random"}))->capture_default_str();
  app.add_option("--metric", rc.metrics, "measure (repeatable)")
      ->check(CLI::IsMember({"fisher", "bures", "kubo-mori", "maximal"}));
  app.add_option("--robust", rc.robust, "robust estimator rows to report")
      ->check(CLI::IsMember({"both", "none", "median", "trimmed-mean"}))
      ->capture_default_str();
  app.add_option("--workers", rc.workers, "worker threads")
      ->envname("GCENSUS_WORKERS")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();
  app.add_option("--chunk-size", rc.chunk_size, "samples per work unit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", rc.out, "output file (default: standard output)");
  app.add_option("--format", rc.format, "output format")
      ->check(CLI::IsMember({"csv", "json", "table"}))
      ->capture_default_str();
  app.add_option("--scale", rc.scale, "sample-count factor for table1")->capture_default_str();
  app.add_flag("--strict-physical", rc.strict_physical, "also require M + i Omega >= 0");
  app.add_flag("--progress", rc.progress, "report progress on standard error");
  app.add_option("--k-schedule", rc.k_schedule, "k values for one-mode")->capture_default_str();
  app.add_option("--l-ratio", rc.l_over_k, "l / k for one-mode")->capture_default_str();
  app.add_option("--dump", rc.dump, "file for the matrix of an oracle disagreement")->capture_default_str();

  std::map<std::string, Table (*)(const RunConfig &, std::ostream &)> commands{
      {"table1", cmd_table1},     {"census", cmd_census},   {"bures", cmd_bures},
      {"one-mode", cmd_one_mode}, {"entropy", cmd_entropy}, {"fidelity-check", cmd_fidelity_check},
  };
  const std::map<std::string, std::string> help{
      {"table1", "rerun the five Fisher-measure census rows"},
      {"census", "Fisher-measure census"},
      {"bures", "monotone-metric census on discretized kernels"},
      {"one-mode", "one-mode classicality probability along a k schedule"},
      {"entropy", "entropic test on separable samples"},
      {"fidelity-check", "finite-difference metric against the closed-form volume element"},
  };
  for (const auto &[name, text] : help) {
    app.add_subcommand(name, text)->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  if (rc.grid_range.size() != 2) {
    err << "error: --grid-range takes two values\n\n" << app.help();
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Table table;
  try {
    table = commands.at(command)(rc, err);
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const OracleDisagreementError &e) {
    err << "error: " << e.what() << '\n';
    try {
      write_disagreement_dump(rc.dump, e.matrix(), e.margin_sep(), e.margin_ppt());
      err << "matrix written to " << rc.dump << '\n';
    } catch (const std::exception &io) {
      err << "error: " << io.what() << '\n';
    }
    return kExitOracle;
  }

  if (rc.out.empty()) {
    render(table, rc.format, out);
    out.flush();
    return out ? kExitOk : kExitIo;
  }
  std::ofstream file(rc.out);
  if (!file) {
    err << "error: cannot open " << rc.out << " for writing\n";
    return kExitIo;
  }
  render(table, rc.format, file);
  file.close();
  if (!file) {
    err << "error: failed writing " << rc.out << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace gcensus
