#pragma once

// Special functions behind the finite-size expansion:
//
//   chi(z) = e^{-z} (z / (1 - e^{-z}))^2          (even, chi(0) = 1)
//   xi(z)  = e^{z} chi''(z)
//   Q(z)   = (xi(z) - xi(0)) / z
//
// plus polylogarithms Li_s on [0, 1], integer zeta values and the universal
// constant  int_0^inf e^{-z} Q(z) dz.

namespace hexdimer::special {

/// Below this |z| the Taylor branches are used. The closed forms lose
/// ~1e-16 / z^4 to cancellation, so the switch sits well away from 0.
inline constexpr double kDefaultTaylorSwitch = 0.5;

struct QuadratureSettings {
  double rel_tol = 1e-10;
  double z_cut = 60.0;
  double taylor_switch = kDefaultTaylorSwitch;

  /// Throws DomainError unless rel_tol > 0, z_cut >= 10 with
  /// e^{-z_cut} < rel_tol, and 0 < taylor_switch <= 2.
  void validate() const;
};

double chi(double z, double taylor_switch = kDefaultTaylorSwitch);
double chi_dd(double z, double taylor_switch = kDefaultTaylorSwitch);
double xi(double z, double taylor_switch = kDefaultTaylorSwitch);
/// Requires z >= 0.
double q_func(double z, double taylor_switch = kDefaultTaylorSwitch);

/// The two evaluation branches, exposed so they can be compared.
namespace branch {
double chi_series(double z);
double chi_closed(double z);
double chi_dd_series(double z);
double chi_dd_closed(double z);
double xi_series(double z);
double xi_closed(double z);
double q_series(double z);
double q_closed(double z);
}  // namespace branch

struct UniversalConstant {
  double value = 0.0;
  double error = 0.0;       // quadrature estimate plus tail bound
  double tail_bound = 0.0;  // bound on |int_{z_cut}^inf e^{-z} Q(z) dz|
};

/// int_0^inf e^{-z} Q(z) dz. Throws NumericalError if the quadrature misses
/// the requested tolerance.
UniversalConstant universal_constant(const QuadratureSettings& settings = {});

/// int_0^inf e^{-z} g(z) dz with the same engine: adaptive quadrature on
/// [0, z_cut]; the tail beyond z_cut is dropped.
double integrate_exponential_weight(double (*g)(double), const QuadratureSettings& settings = {});

/// Riemann zeta at an integer n != 1. Positive n use direct summation with an
/// Euler-Maclaurin tail; n <= 0 use the Bernoulli-number values.
double zeta(int n);

/// zeta(3), computed as Li_3(1).
double zeta3();

/// Polylogarithm Li_s(z) = sum_{n>=1} z^n / n^s for integer s >= 1 and
/// z in [0, 1]. Li_1(1) diverges and throws DomainError.
double li(int s, double z);

/// ln(1 - e^{-x}) for x > 0, accurate at both ends.
double log1mexp(double x);

}  // namespace hexdimer::special
