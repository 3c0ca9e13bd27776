#pragma once

// Least-squares extraction of the expansion coefficients from exact
// free-energy samples.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hexdimer/asymptotics.hpp"
#include "hexdimer/partition.hpp"
#include "hexdimer/scenario.hpp"

namespace hexdimer::fitting {

enum class BasisTerm { kOne, kEps, kEps2LogEps, kEps2, kEps3, kEps4 };

std::string to_string(BasisTerm term);
double evaluate(BasisTerm term, double eps);

struct FitBasis {
  std::vector<BasisTerm> terms{BasisTerm::kOne,  BasisTerm::kEps,  BasisTerm::kEps2LogEps,
                               BasisTerm::kEps2, BasisTerm::kEps3, BasisTerm::kEps4};
};

struct FitResult {
  FitBasis basis;
  std::vector<double> coefficients;  // aligned with basis.terms
  double residual_rms = 0.0;
  /// 1-norm condition number of R for the column-normalised design matrix.
  double condition_estimate = 0.0;
  /// Log-log slope of |f - (f0 + f1 eps + f2 eps^2 ln eps + f3 eps^2)| with
  /// the fitted coefficients, when enough samples with 1/eps >= 20 exist.
  std::optional<double> residual_slope;

  /// Coefficient of `term`, 0 when the basis lacks it.
  [[nodiscard]] double coefficient(BasisTerm term) const;
  /// The four leading coefficients, provenance fitted.
  [[nodiscard]] asymptotics::ExpansionCoefficients expansion(ScenarioKind scenario) const;
};

/// Every integer 1/eps in [min, max]. Throws DomainError unless 2 <= min < max.
std::vector<std::int64_t> sample_grid(std::int64_t inv_eps_min, std::int64_t inv_eps_max);

/// Exact free energies on sample_grid(min, max), in grid order.
std::vector<exact::FreeEnergySample> generate_samples(const Scenario& scenario, std::int64_t inv_eps_min,
                                                      std::int64_t inv_eps_max, unsigned threads = 1);

/*!
  Unweighted linear least squares by Householder QR.

  Samples are ordered by 1/eps first, so the result does not depend on the
  input order. Needs at least |basis| + 4 samples with distinct eps. Throws
  NumericalError when the condition estimate exceeds 1e12.
*/
FitResult fit(std::span<const exact::FreeEnergySample> samples, const FitBasis& basis = {});

/// Least-squares slope of ln|f - predict_free_energy(c, eps)| against ln eps
/// over samples with 1/eps in [min_inv_eps, max_inv_eps]. Needs 10 such
/// samples; zero residuals are skipped and at least 5 must remain.
double residual_slope(std::span<const exact::FreeEnergySample> samples,
                      const asymptotics::ExpansionCoefficients& c, std::int64_t min_inv_eps = 20,
                      std::int64_t max_inv_eps = INT64_MAX);

}  // namespace hexdimer::fitting
