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

#include "gcensus/criteria.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <ostream>

#include "gcensus/format.hpp"

namespace gcensus {

VarianceReport total_variance(const StandardFormII &f2) {
  VarianceReport v;
  v.a0 = f2.a0;
  const double a2 = f2.a0 * f2.a0;
  v.total_variance = 0.5 * (a2 * (f2.n1 + f2.n2) + (f2.m1 + f2.m2) / a2) - std::abs(f2.c1) - std::abs(f2.c2);
  v.uncertainty_bound = std::abs(a2 - 1.0 / a2);
  v.separability_bound = a2 + 1.0 / a2;
  return v;
}

bool passes_uncertainty_filter(const VarianceReport &v, const StandardFormI &f1, const Tolerances &tol) {
  return f1.n >= 1.0 && f1.m >= 1.0 && v.total_variance >= v.uncertainty_bound - tol.variance_bound;
}

bool is_separable_duan(const VarianceReport &v, const Tolerances &tol) {
  return v.total_variance >= v.separability_bound - tol.variance_bound;
}

PptResult is_separable_ppt(const CovarianceMatrix &m, const Tolerances &tol) {
  PptResult r;
  r.margin = uncertainty_margin(m.mirrored());
  r.separable = r.margin >= -tol.uncertainty_psd;
  return r;
}

bool is_classical(const CovarianceMatrix &m, const Tolerances &tol) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(m.matrix() - Mat4::Identity(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > tol.classical_strict;
}

std::string_view to_string(Screening s) {
  switch (s) {
    case Screening::not_positive_definite:
      return "not_positive_definite";
    case Screening::below_vacuum:
      return "below_vacuum";
    case Screening::complex_root:
      return "complex_root";
    case Screening::solver_failure:
      return "solver_failure";
    case Screening::uncertainty_violation:
      return "uncertainty_violation";
    case Screening::accepted:
      return "accepted";
  }
  return "unknown";
}

Verdict classify(const CovarianceMatrix &m, const Tolerances &tol) {
  Verdict v;
  if (!is_positive_definite(m)) {
    v.screening = Screening::not_positive_definite;
    return v;
  }
  StandardFormI f1;
  try {
    f1 = to_standard_form_one(m, tol);
  } catch (const ComplexRootError &) {
    v.screening = Screening::complex_root;
    return v;
  }
  if (f1.n < 1.0 || f1.m < 1.0) {
    v.screening = Screening::below_vacuum;
    return v;
  }
  StandardFormII f2;
  try {
    f2 = to_standard_form_two(f1, tol);
  } catch (const NoConvergenceError &) {
    v.screening = Screening::solver_failure;
    return v;
  }
  v.variance = total_variance(f2);
  if (!passes_uncertainty_filter(v.variance, f1, tol)) {
    v.screening = Screening::uncertainty_violation;
    return v;
  }
  v.screening = Screening::accepted;
  v.physical_proxy = true;
  v.separable = is_separable_duan(v.variance, tol);
  v.margin_sep = v.variance.total_variance - v.variance.separability_bound;
  v.classical = is_classical(m, tol);
  v.physical = is_physical(m, tol);
  if (v.physical) {
    v.margin_ppt = is_separable_ppt(m, tol).margin;
  }
  return v;
}

bool oracle_disagrees(const Verdict &v, const Tolerances &tol) {
  if (v.screening != Screening::accepted || !v.margin_ppt) {
    return false;
  }
  const double ppt = *v.margin_ppt;
  if (std::abs(v.margin_sep) <= tol.oracle_band || std::abs(ppt) <= tol.oracle_band) {
    return false;
  }
  return v.separable != (ppt >= -tol.uncertainty_psd);
}

OracleDisagreementError::OracleDisagreementError(const CovarianceMatrix &m, double margin_sep, double margin_ppt)
    : CensusError("separability criteria disagree outside the boundary band (margin_sep " + format_17g(margin_sep) +
                  ", margin_ppt " + format_17g(margin_ppt) + ")"),
      matrix_(m),
      margin_sep_(margin_sep),
      margin_ppt_(margin_ppt) {}

void write_disagreement_dump(std::ostream &out, const CovarianceMatrix &m, double margin_sep, double margin_ppt) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out << (j ? " " : "") << format_17g(m(i, j));
    }
    out << '\n';
  }
  out << "margin_sep " << format_17g(margin_sep) << '\n';
  out << "margin_ppt " << format_17g(margin_ppt) << '\n';
}

void write_disagreement_dump(const std::filesystem::path &path, const CovarianceMatrix &m, double margin_sep,
                             double margin_ppt) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open dump file " + path.string());
  }
  write_disagreement_dump(out, m, margin_sep, margin_ppt);
  if (!out) {
    throw std::runtime_error("failed writing dump file " + path.string());
  }
}

}  // namespace gcensus
