#pragma once

// Coefficients of the finite-size expansion
//
//   f(eps) ~ f0 + f1 eps + f2 eps^2 ln(eps) + f3 eps^2
//
// for the three scenarios, in the sign conventions of scenario.hpp.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hexdimer/scenario.hpp"
#include "hexdimer/special_functions.hpp"
#include "hexdimer/weights.hpp"

namespace hexdimer::asymptotics {

enum class Provenance { kAnalytic, kFitted };

std::string to_string(Provenance p);

/*!
  Pieces of the sliced-box coefficients.

  The sliced free energy is split as f = f_corner + D, where f_corner is the
  infinite-height box with the constant weight p0 = phi(b - a) of the corner
  slice, i.e. sides (a p0, b p0) at mesh eps p0. The remainder D(eps) is
  regular: D = d0 + d2 eps^2 + O(eps^3).
*/
struct SlicedBreakdown {
  double p0 = 0.0;
  double corner_f0 = 0.0;
  double corner_f3 = 0.0;  // includes the ln(p0) / (12 ab) shift
  double d0 = 0.0;
  double d2 = 0.0;
  double d2_noise = 0.0;  // |E_p - E_{p-1}| of the Richardson table
};

struct ExpansionCoefficients {
  double f0 = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
  ScenarioKind scenario = ScenarioKind::kFinite;
  Provenance provenance = Provenance::kAnalytic;
  std::optional<SlicedBreakdown> sliced;
};

struct SlicedDerivativeSettings {
  /// Meshes used for the eps -> 0 extrapolation of (D(eps) - d0) / eps^2,
  /// given as 1/eps (so eps strictly decreasing). a/eps and b/eps must be
  /// integers.
  std::vector<std::int64_t> inv_eps_steps{64, 96, 128, 192};
  /// Polynomial degree in eps eliminated by the extrapolation.
  int richardson_order = 2;
  /// Relative tolerance of the 2-D quadrature for d0.
  double quad_rel_tol = 1e-12;
  unsigned threads = 1;
  special::QuadratureSettings constant{};

  /// >= 3 steps, strictly increasing 1/eps, 1 <= order < steps.
  void validate() const;
};

/// sum over x in `plus` of ln(1 - e^{-x}) minus the same over `minus`.
double log_combination(std::span<const double> plus, std::span<const double> minus);

/// ln[(e^a-1)(e^b-1)(e^c-1)(e^{a+b+c}-1) / ((e^{a+b}-1)(e^{b+c}-1)(e^{a+c}-1))]
double log_combination(double a, double b, double c);
/// ln[(e^a-1)(e^b-1) / (e^{a+b}-1)]
double log_combination(double a, double b);

/// sum_{n>=1} (H_n - 1) / n with H_n = prod_x (1 - e^{-n x}), summed directly.
/// Equals log_combination of the same sides.
double log_combination_series(std::span<const double> sides);

ExpansionCoefficients coeffs_finite(double a, double b, double c, const special::QuadratureSettings& quad = {});
ExpansionCoefficients coeffs_infinite(double a, double b, const special::QuadratureSettings& quad = {});
/// Throws NumericalError when the Richardson noise exceeds 1e-3 |f3|.
ExpansionCoefficients coeffs_sliced(double a, double b, const SliceFunction& phi,
                                    const SlicedDerivativeSettings& settings = {});
ExpansionCoefficients coeffs(const Scenario& scenario, const SlicedDerivativeSettings& settings = {});

/// The d0 term of SlicedBreakdown:
///   -(1/ab) int_0^b dy int_0^a dz [ln(1 - e^{-S}) - ln(1 - e^{-p0 (y+z)})],
///   S(y, z) = int_{t0-y}^{t0+z} phi,  t0 = b - a.
double sliced_corner_difference(double a, double b, const SliceFunction& phi, double rel_tol = 1e-12);

/// f0 of the sliced box straight from -(1/ab) int int ln(1 - e^{-S}), with the
/// singular corner square [0, delta]^2 integrated separately.
double sliced_f0_direct(double a, double b, const SliceFunction& phi, double rel_tol = 1e-11);

/// f0 + f1 eps + f2 eps^2 ln(eps) + f3 eps^2.
double predict_free_energy(const ExpansionCoefficients& c, double eps);

}  // namespace hexdimer::asymptotics
