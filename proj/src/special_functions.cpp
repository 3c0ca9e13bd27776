#include "hexdimer/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hexdimer/error.hpp"
#include "hexdimer/kahan.hpp"
#include "hexdimer/quadrature.hpp"

namespace hexdimer::special {

namespace {

constexpr double kXi0 = -1.0 / 6.0;

// Euler-Maclaurin cutoff for zeta(n), n >= 2.
constexpr int kZetaCutoff = 20;

// B_{2k} for k = 1..6; exact rationals.
constexpr std::array<double, 6> kBernoulli = {1.0 / 6.0,   -1.0 / 30.0, 1.0 / 42.0,
                                              -1.0 / 30.0, 5.0 / 66.0,  -691.0 / 2730.0};

// Taylor coefficients about z = 0, built once from Bernoulli numbers:
//   chi(z)   = sum_n (1 - n) B_n z^n / n!        (only even n survive)
//   chi''(z) = sum_l d_l z^{2l}
//   xi(z)    = e^z chi''(z) = sum_m p_m z^m
struct TaylorTables {
  static constexpr std::size_t kChiTerms = 24;
  static constexpr std::size_t kXiTerms = 41;

  std::array<double, kChiTerms> chi{};       // coefficient of z^{2k}
  std::array<double, kChiTerms - 1> chi_dd{};  // coefficient of z^{2l}
  std::array<double, kXiTerms> xi{};         // coefficient of z^m

  TaylorTables() {
    chi[0] = 1.0;
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t k = 1; k < kChiTerms; ++k) {
      // B_{2k} / (2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      const double b_over_fact =
          sign * 2.0 * zeta(static_cast<int>(2 * k)) / std::pow(two_pi, static_cast<double>(2 * k));
      chi[k] = (1.0 - 2.0 * static_cast<double>(k)) * b_over_fact;
    }
    for (std::size_t l = 0; l + 1 < kChiTerms; ++l) {
      const double n = static_cast<double>(2 * l + 2);
      chi_dd[l] = chi[l + 1] * n * (n - 1.0);
    }
    for (std::size_t m = 0; m < kXiTerms; ++m) {
      double acc = 0.0;
      for (std::size_t l = 0; 2 * l <= m && l < chi_dd.size(); ++l) {
        acc += chi_dd[l] / std::tgamma(static_cast<double>(m - 2 * l + 1));
      }
      xi[m] = acc;
    }
  }
};

const TaylorTables& tables() {
  static const TaylorTables t;
  return t;
}

template <std::size_t N>
double horner(const std::array<double, N>& coeffs, double x, std::size_t first = 0) {
  double acc = 0.0;
  for (std::size_t i = N; i-- > first;) acc = acc * x + coeffs[i];
  return acc;
}

// Numerator of chi'' after pulling out e^{-x} / (1 - e^{-x})^4, x >= 0.
double chi_dd_numerator(double x, double u) {
  const double x2 = x * x;
  return (x2 - 4.0 * x + 2.0) + 4.0 * u * (x2 - 1.0) + u * u * (x2 + 4.0 * x + 2.0);
}

}  // namespace

void QuadratureSettings::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
  if (!(z_cut >= 10.0) || !(std::exp(-z_cut) < rel_tol)) {
    throw DomainError("z_cut must be >= 10 with exp(-z_cut) < rel_tol");
  }
  if (!(taylor_switch > 0.0 && taylor_switch <= 2.0)) {
    throw DomainError("taylor_switch must lie in (0, 2]");
  }
}

namespace branch {

double chi_series(double z) { return horner(tables().chi, z * z); }

double chi_closed(double z) {
  const double x = std::fabs(z);
  const double one_minus_u = -std::expm1(-x);
  return x * x * std::exp(-x) / (one_minus_u * one_minus_u);
}

double chi_dd_series(double z) { return horner(tables().chi_dd, z * z); }

double chi_dd_closed(double z) {
  const double x = std::fabs(z);
  const double u = std::exp(-x);
  const double om = -std::expm1(-x);
  const double om2 = om * om;
  return u * chi_dd_numerator(x, u) / (om2 * om2);
}

double xi_series(double z) { return horner(tables().xi, z); }

double xi_closed(double z) {
  const double x = std::fabs(z);
  const double u = std::exp(-x);
  const double om = -std::expm1(-x);
  const double om2 = om * om;
  const double core = chi_dd_numerator(x, u) / (om2 * om2);
  return z >= 0.0 ? core : u * u * core;
}

double q_series(double z) { return horner(tables().xi, z, 1); }

double q_closed(double z) { return (xi_closed(z) - kXi0) / z; }

}  // namespace branch

double chi(double z, double taylor_switch) {
  return std::fabs(z) < taylor_switch ? branch::chi_series(z) : branch::chi_closed(z);
}

double chi_dd(double z, double taylor_switch) {
  return std::fabs(z) < taylor_switch ? branch::chi_dd_series(z) : branch::chi_dd_closed(z);
}

double xi(double z, double taylor_switch) {
  return std::fabs(z) < taylor_switch ? branch::xi_series(z) : branch::xi_closed(z);
}

double q_func(double z, double taylor_switch) {
  if (!(z >= 0.0)) throw DomainError("Q(z) is defined here for z >= 0");
  return z < taylor_switch ? branch::q_series(z) : branch::q_closed(z);
}

UniversalConstant universal_constant(const QuadratureSettings& settings) {
  settings.validate();
  const double sw = settings.taylor_switch;
  const auto integrand = [sw](double z) { return std::exp(-z) * q_func(z, sw); };
  const QuadratureResult r = integrate_adaptive(integrand, 0.0, settings.z_cut, 0.0, settings.rel_tol);

  // For z >= 10, |Q(z)| <= 1.01 z + 5, so the tail is at most
  // e^{-z_cut} (1.01 (z_cut + 1) + 5).
  const double zc = settings.z_cut;
  const double tail = std::exp(-zc) * (1.01 * (zc + 1.0) + 5.0);

  UniversalConstant out{r.value, r.error + tail, tail};
  if (out.error > settings.rel_tol * std::fabs(out.value)) {
    std::ostringstream os;
    os << "universal constant: achieved error " << out.error << " exceeds rel_tol " << settings.rel_tol;
    throw NumericalError(os.str());
  }
  return out;
}

double integrate_exponential_weight(double (*g)(double), const QuadratureSettings& settings) {
  settings.validate();
  const auto integrand = [g](double z) { return std::exp(-z) * g(z); };
  return integrate_adaptive(integrand, 0.0, settings.z_cut, 0.0, settings.rel_tol).value;
}

double zeta(int n) {
  if (n == 1) throw DomainError("zeta(1) diverges");
  if (n == 0) return -0.5;
  if (n < 0) {
    if (n % 2 == 0) return 0.0;
    // zeta(1 - 2m) = -B_{2m} / (2m) = (-1)^m 2 (2m-1)! zeta(2m) / (2 pi)^{2m}
    const int m = (1 - n) / 2;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return sign * 2.0 * std::tgamma(2.0 * m) * zeta(2 * m) /
           std::pow(2.0 * std::numbers::pi, 2.0 * m);
  }
  const double s = n;
  CompensatedSum sum;
  for (int k = kZetaCutoff - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);

  // Euler-Maclaurin tail for sum_{k >= N} k^{-s}.
  const double big_n = kZetaCutoff;
  double tail = std::pow(big_n, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(big_n, -s);
  double rising = s;                 // s (s+1) ... (s + 2j - 2)
  double factorial = 2.0;            // (2j)!
  double power = std::pow(big_n, -s - 1.0);
  for (std::size_t j = 0; j < kBernoulli.size(); ++j) {
    tail += kBernoulli[j] / factorial * rising * power;
    const double a = static_cast<double>(2 * j + 3);
    factorial *= a * (a + 1.0);
    rising *= (s + 2.0 * static_cast<double>(j) + 1.0) * (s + 2.0 * static_cast<double>(j) + 2.0);
    power /= big_n * big_n;
  }
  sum += tail;
  return sum.value();
}

double zeta3() { return li(3, 1.0); }

double li(int s, double z) {
  if (s < 1) throw DomainError("li: order s must be >= 1");
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("li: argument must lie in [0, 1]");
  if (z == 0.0) return 0.0;
  if (z == 1.0) {
    if (s == 1) throw DomainError("li(1, 1) diverges");
    return zeta(s);
  }
  if (z <= 0.75) {
    CompensatedSum sum;
    double zn = 1.0;
    for (int n = 1; n < 1'000'000; ++n) {
      zn *= z;
      const double term = zn / std::pow(static_cast<double>(n), s);
      sum += term;
      if (term < 1e-17 * std::fabs(sum.value())) return sum.value();
    }
    throw NumericalError("li: series did not converge");
  }
  if (s == 1) return -std::log1p(-z);

  // Expansion about z = 1 in mu = ln z:
  //   Li_s(e^mu) = mu^{s-1}/(s-1)! (H_{s-1} - ln(-mu)) + sum_{k != s-1} zeta(s-k) mu^k / k!
  const double mu = std::log(z);
  double harmonic = 0.0;
  for (int k = 1; k < s; ++k) harmonic += 1.0 / k;
  CompensatedSum sum;
  sum += std::pow(mu, s - 1) / std::tgamma(static_cast<double>(s)) * (harmonic - std::log(-mu));
  double mu_pow = 1.0;  // mu^k / k!
  for (int k = 0; k < 64; ++k) {
    if (k != s - 1) sum += zeta(s - k) * mu_pow;
    mu_pow *= mu / (k + 1);
  }
  return sum.value();
}

double log1mexp(double x) {
  return x <= std::numbers::ln2 ? std::log(-std::expm1(-x)) : std::log1p(-std::exp(-x));
}

}  // namespace hexdimer::special
