#include "hexdimer/asymptotics.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "hexdimer/error.hpp"
#include "hexdimer/kahan.hpp"
#include "hexdimer/parallel.hpp"
#include "hexdimer/partition.hpp"
#include "hexdimer/quadrature.hpp"

namespace hexdimer::asymptotics {

namespace {

void require_positive_sides(std::initializer_list<double> sides) {
  for (double x : sides) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("scaled sides must be positive and finite");
  }
}

double li3_exp(double x) { return special::li(3, std::exp(-x)); }

// Value at 0 of the polynomial through (x[i], y[i]), Neville's scheme.
double extrapolate_to_zero(std::span<const double> x, std::span<const double> y) {
  std::vector<double> p(y.begin(), y.end());
  const std::size_t n = p.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      p[i] = (x[i + level] * p[i] - x[i] * p[i + 1]) / (x[i + level] - x[i]);
    }
  }
  return p[0];
}

double nested_integral(const std::function<double(double, double)>& f, std::span<const double> y_breaks,
                       std::span<const double> z_breaks, double rel_tol) {
  const auto inner = [&](double y) {
    CompensatedSum s;
    for (std::size_t k = 0; k + 1 < z_breaks.size(); ++k) {
      s += integrate_adaptive([&](double z) { return f(y, z); }, z_breaks[k], z_breaks[k + 1], 1e-16,
                              rel_tol, 20000)
               .value;
    }
    return s.value();
  };
  CompensatedSum total;
  for (std::size_t k = 0; k + 1 < y_breaks.size(); ++k) {
    total += integrate_adaptive(inner, y_breaks[k], y_breaks[k + 1], 1e-16, rel_tol, 20000).value;
  }
  return total.value();
}

}  // namespace

std::string to_string(Provenance p) { return p == Provenance::kAnalytic ? "analytic" : "fitted"; }

void SlicedDerivativeSettings::validate() const {
  if (inv_eps_steps.size() < 3) throw DomainError("at least 3 finite-difference steps are required");
  for (std::size_t i = 0; i < inv_eps_steps.size(); ++i) {
    if (inv_eps_steps[i] < 1) throw DomainError("finite-difference steps must be positive");
    if (i > 0 && inv_eps_steps[i] <= inv_eps_steps[i - 1]) {
      throw DomainError("finite-difference steps must have strictly decreasing eps");
    }
  }
  if (richardson_order < 1 || static_cast<std::size_t>(richardson_order) >= inv_eps_steps.size()) {
    throw DomainError("richardson_order must lie in [1, number of steps - 1]");
  }
  if (!(quad_rel_tol > 0.0)) throw DomainError("quad_rel_tol must be positive");
}

double log_combination(std::span<const double> plus, std::span<const double> minus) {
  CompensatedSum s;
  for (double x : plus) s += special::log1mexp(x);
  for (double x : minus) s -= special::log1mexp(x);
  return s.value();
}

// The linear parts of ln(e^x - 1) = x + ln(1 - e^{-x}) cancel in both
// combinations, leaving only the ln(1 - e^{-x}) terms.
double log_combination(double a, double b, double c) {
  const std::array<double, 4> plus{a, b, c, a + b + c};
  const std::array<double, 3> minus{a + b, b + c, a + c};
  return log_combination(plus, minus);
}

double log_combination(double a, double b) {
  const std::array<double, 2> plus{a, b};
  const std::array<double, 1> minus{a + b};
  return log_combination(plus, minus);
}

double log_combination_series(std::span<const double> sides) {
  double smallest = sides.empty() ? 1.0 : sides[0];
  for (double x : sides) smallest = std::min(smallest, x);
  if (!(smallest > 0.0)) throw DomainError("sides must be positive");
  CompensatedSum s;
  for (std::int64_t n = 1; n < 100'000'000; ++n) {
    const double nd = static_cast<double>(n);
    double h = 1.0;
    for (double x : sides) h *= -std::expm1(-nd * x);
    s += (h - 1.0) / nd;
    // |H_m - 1| <= |sides| e^{-m x_min}; geometric tail.
    const double tail = static_cast<double>(sides.size()) * std::exp(-(nd + 1.0) * smallest) /
                        ((nd + 1.0) * -std::expm1(-smallest));
    if (tail < 1e-17) return s.value();
  }
  throw NumericalError("log_combination_series did not converge");
}

ExpansionCoefficients coeffs_finite(double a, double b, double c, const special::QuadratureSettings& quad) {
  require_positive_sides({a, b, c});
  const double s = a * b + b * c + a * c;
  CompensatedSum li;
  li += li3_exp(a);
  li += li3_exp(b);
  li += li3_exp(c);
  li -= li3_exp(a + b);
  li -= li3_exp(b + c);
  li -= li3_exp(a + c);
  li += li3_exp(a + b + c);
  li -= special::zeta3();

  const double big_i = special::universal_constant(quad).value;
  ExpansionCoefficients out;
  out.scenario = ScenarioKind::kFinite;
  out.f0 = li.value() / (2.0 * s);
  out.f1 = 0.0;
  out.f2 = -1.0 / (24.0 * s);
  out.f3 = -(big_i / 2.0 - log_combination(a, b, c) / 12.0 - 0.125) / (2.0 * s);
  return out;
}

ExpansionCoefficients coeffs_infinite(double a, double b, const special::QuadratureSettings& quad) {
  require_positive_sides({a, b});
  CompensatedSum li;
  li += li3_exp(a);
  li += li3_exp(b);
  li -= li3_exp(a + b);
  li -= special::zeta3();

  const double big_i = special::universal_constant(quad).value;
  ExpansionCoefficients out;
  out.scenario = ScenarioKind::kInfinite;
  out.f0 = -li.value() / (a * b);
  out.f1 = 0.0;
  out.f2 = 1.0 / (12.0 * a * b);
  out.f3 = (big_i / 2.0 - log_combination(a, b) / 12.0 - 0.125) / (a * b);
  return out;
}

double sliced_corner_difference(double a, double b, const SliceFunction& phi, double rel_tol) {
  require_positive_sides({a, b});
  const double t0 = b - a;
  const double p0 = phi.value(t0);
  const auto f = [&](double y, double z) {
    const double s0 = p0 * (y + z);
    if (!(s0 > 0.0)) return 0.0;
    const double s = phi.integral(t0 - y, t0 + z);
    return special::log1mexp(s) - special::log1mexp(s0);
  };
  const std::array<double, 2> ys{0.0, b};
  const std::array<double, 2> zs{0.0, a};
  return -nested_integral(f, ys, zs, rel_tol) / (a * b);
}

double sliced_f0_direct(double a, double b, const SliceFunction& phi, double rel_tol) {
  require_positive_sides({a, b});
  const double t0 = b - a;
  const double delta = std::min({1e-3, a / 2.0, b / 2.0});
  const auto f = [&](double y, double z) {
    if (!(y + z > 0.0)) return 0.0;
    return special::log1mexp(phi.integral(t0 - y, t0 + z));
  };
  const std::array<double, 3> ys{0.0, delta, b};
  const std::array<double, 3> zs{0.0, delta, a};
  return -nested_integral(f, ys, zs, rel_tol) / (a * b);
}

ExpansionCoefficients coeffs_sliced(double a, double b, const SliceFunction& phi,
                                    const SlicedDerivativeSettings& settings) {
  require_positive_sides({a, b});
  settings.validate();
  require_positive(phi, -a, b);

  const double p0 = phi.value(b - a);
  const ConstantSlice corner_phi{p0};
  ExpansionCoefficients corner = coeffs_infinite(a * p0, b * p0, settings.constant);
  const double corner_f3 = corner.f3 * p0 * p0 + std::log(p0) / (12.0 * a * b);
  const double d0 = sliced_corner_difference(a, b, phi, settings.quad_rel_tol);

  const auto& steps = settings.inv_eps_steps;
  const auto g = parallel_map(steps.size(), settings.threads, [&](std::size_t i) {
    const std::int64_t inv = steps[i];
    ScaledShape scaled{a, b, std::nullopt, 1.0 / static_cast<double>(inv)};
    const BoxShape box = scaled.to_box();
    const double mn = static_cast<double>(box.m) * static_cast<double>(box.n);
    const double diff = (exact::log_z_sliced(box.m, box.n, phi, scaled.eps) -
                         exact::log_z_sliced(box.m, box.n, corner_phi, scaled.eps)) /
                        mn;
    return (diff - d0) / (scaled.eps * scaled.eps);
  });

  // E_p uses the p + 1 smallest meshes.
  const auto order = static_cast<std::size_t>(settings.richardson_order);
  std::vector<double> eps(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) eps[i] = 1.0 / static_cast<double>(steps[i]);
  const auto tail = [&](std::size_t count) {
    const std::size_t first = steps.size() - count;
    return extrapolate_to_zero(std::span{eps}.subspan(first), std::span{g}.subspan(first));
  };
  const double d2 = tail(order + 1);
  const double noise = std::fabs(d2 - tail(order));

  ExpansionCoefficients out;
  out.scenario = ScenarioKind::kSliced;
  out.f0 = corner.f0 + d0;
  out.f1 = 0.0;
  out.f2 = 1.0 / (12.0 * a * b);
  out.f3 = corner_f3 + d2;
  out.sliced = SlicedBreakdown{p0, corner.f0, corner_f3, d0, d2, noise};
  if (noise > 1e-3 * std::fabs(out.f3)) {
    std::ostringstream os;
    os << "sliced f3: finite-difference noise " << noise << " exceeds 1e-3 |f3| = " << 1e-3 * std::fabs(out.f3)
       << "; use smaller eps steps";
    throw NumericalError(os.str());
  }
  return out;
}

ExpansionCoefficients coeffs(const Scenario& scenario, const SlicedDerivativeSettings& settings) {
  if (const auto* f = std::get_if<FiniteBox>(&scenario)) return coeffs_finite(f->a, f->b, f->c, settings.constant);
  if (const auto* i = std::get_if<InfiniteBox>(&scenario)) return coeffs_infinite(i->a, i->b, settings.constant);
  const auto& sl = std::get<SlicedBox>(scenario);
  if (!sl.phi) throw DomainError("sliced scenario needs a phi profile");
  return coeffs_sliced(sl.a, sl.b, *sl.phi, settings);
}

double predict_free_energy(const ExpansionCoefficients& c, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("eps must lie in (0, 1]");
  return c.f0 + c.f1 * eps + c.f2 * eps * eps * std::log(eps) + c.f3 * eps * eps;
}

}  // namespace hexdimer::asymptotics
