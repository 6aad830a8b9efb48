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

#ifndef GCENSUS_CRITERIA_HPP
#define GCENSUS_CRITERIA_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "gcensus/errors.hpp"
#include "gcensus/states.hpp"
#include "gcensus/tolerances.hpp"

namespace gcensus {

/// Total variance of the EPR-type pair u = (a0 x1 -+ x2/a0)/sqrt2, v = (a0 p1 -+ p2/a0)/sqrt2
/// together with the bound every state obeys and the bound every separable state obeys.
struct VarianceReport {
  double total_variance = 0.0;
  double uncertainty_bound = 0.0;   // |a0^2 - 1/a0^2|
  double separability_bound = 2.0;  // a0^2 + 1/a0^2
  double a0 = 1.0;
};

VarianceReport total_variance(const StandardFormII &f2);

bool passes_uncertainty_filter(const VarianceReport &v, const StandardFormI &f1,
                               const Tolerances &tol = kDefaultTolerances);
bool is_separable_duan(const VarianceReport &v, const Tolerances &tol = kDefaultTolerances);

struct PptResult {
  bool separable = false;
  /// Smallest eigenvalue of the mirrored matrix plus iΩ.
  double margin = 0.0;
};

/// Mirror-reflection test; exact for two-mode Gaussian states.
PptResult is_separable_ppt(const CovarianceMatrix &m, const Tolerances &tol = kDefaultTolerances);

/// M - I positive definite (strictly), i.e. a positive P-representation.
bool is_classical(const CovarianceMatrix &m, const Tolerances &tol = kDefaultTolerances);

/// Where a sample left the filter chain.
enum class Screening {
  not_positive_definite,
  below_vacuum,  // n < 1 or m < 1
  complex_root,
  solver_failure,
  uncertainty_violation,
  accepted,
};

std::string_view to_string(Screening s);

struct Verdict {
  Screening screening = Screening::not_positive_definite;
  /// Passed positive definiteness, n, m >= 1 and the uncertainty-bound test.
  bool physical_proxy = false;
  bool separable = false;
  bool classical = false;
  /// total_variance - separability_bound.
  double margin_sep = 0.0;
  /// Only evaluated when the sample is strictly physical.
  std::optional<double> margin_ppt;
  bool physical = false;
  VarianceReport variance;
};

/// Runs the full chain: positive definiteness, standard form I, n, m >= 1,
/// standard form II, uncertainty filter, separability, classicality. For
/// accepted samples the strict physicality test and, when physical, the
/// mirror-reflection oracle run alongside.
Verdict classify(const CovarianceMatrix &m, const Tolerances &tol = kDefaultTolerances);

/// True when both criteria were evaluated, both margins lie outside the
/// boundary band, and the verdicts differ.
bool oracle_disagrees(const Verdict &v, const Tolerances &tol = kDefaultTolerances);

/// Raised by census runs when the two separability criteria disagree away from the boundary.
class OracleDisagreementError : public CensusError {
 public:
  OracleDisagreementError(const CovarianceMatrix &m, double margin_sep, double margin_ppt);
  const CovarianceMatrix &matrix() const { return matrix_; }
  double margin_sep() const { return margin_sep_; }
  double margin_ppt() const { return margin_ppt_; }

 private:
  CovarianceMatrix matrix_;
  double margin_sep_;
  double margin_ppt_;
};

/// Plain-text dump: four rows of the matrix then both margins, 17 significant digits.
void write_disagreement_dump(std::ostream &out, const CovarianceMatrix &m, double margin_sep, double margin_ppt);
void write_disagreement_dump(const std::filesystem::path &path, const CovarianceMatrix &m, double margin_sep,
                             double margin_ppt);

}  // namespace gcensus

#endif  // GCENSUS_CRITERIA_HPP
