#include <doctest.h>

#include <array>
#include <cmath>
#include <memory>

#include "hexdimer/asymptotics.hpp"
#include "hexdimer/error.hpp"
#include "hexdimer/partition.hpp"

using namespace hexdimer;
using namespace hexdimer::asymptotics;

namespace {
constexpr double kZeta3 = 1.2020569031595942;

double li3_direct(double z) {
  double s = 0.0;
  double zn = 1.0;
  for (int n = 1; n < 2000; ++n) {
    zn *= z;
    s += zn / (static_cast<double>(n) * n * n);
  }
  return s;
}

double residual(const ExpansionCoefficients& c, const Scenario& s, std::int64_t t) {
  const auto smp = exact::free_energy(s, t);
  return std::fabs(smp.f - predict_free_energy(c, smp.eps));
}
}  // namespace

TEST_CASE("finite box coefficients") {
  const auto c = coeffs_finite(1, 1, 1);
  const double e = std::exp(1.0);
  const double f0 = (3.0 * li3_direct(1.0 / e) - 3.0 * li3_direct(1.0 / (e * e)) + li3_direct(1.0 / (e * e * e)) - kZeta3) / 6.0;
  CHECK(c.f0 == doctest::Approx(f0).epsilon(1e-13));
  CHECK(c.f1 == 0.0);
  CHECK(c.f2 == doctest::Approx(-1.0 / 72.0).epsilon(1e-15));
  CHECK(c.scenario == ScenarioKind::kFinite);
  CHECK(c.provenance == Provenance::kAnalytic);
  CHECK(coeffs_finite(3, 2, 1).f1 == 0.0);
}

TEST_CASE("finite box coefficients are symmetric") {
  std::array<double, 3> s{0.7, 1.9, 3.2};
  const auto ref = coeffs_finite(s[0], s[1], s[2]);
  std::sort(s.begin(), s.end());
  do {
    const auto c = coeffs_finite(s[0], s[1], s[2]);
    CHECK(std::fabs(c.f0 - ref.f0) < 1e-12);
    CHECK(std::fabs(c.f3 - ref.f3) < 1e-12);
  } while (std::next_permutation(s.begin(), s.end()));
}

TEST_CASE("tall finite box tends to the infinite-height numerator") {
  for (const auto& [a, b] : std::array<std::array<double, 2>, 3>{{{1, 1}, {2, 1}, {1, 3}}}) {
    const double c = 40.0;
    const double s = a * b + b * c + a * c;
    const double finite_numerator = 2.0 * s * coeffs_finite(a, b, c).f0;
    const double infinite_numerator = -a * b * coeffs_infinite(a, b).f0;
    CHECK(std::fabs(finite_numerator - infinite_numerator) < 1e-15 * std::max(1.0, std::fabs(infinite_numerator)) + 1e-15);
  }
}

TEST_CASE("infinite-height coefficients") {
  const auto c = coeffs_infinite(1, 1);
  const double e = std::exp(1.0);
  CHECK(c.f0 == doctest::Approx(-(2.0 * li3_direct(1.0 / e) - li3_direct(1.0 / (e * e)) - kZeta3)).epsilon(1e-13));
  CHECK(c.f1 == 0.0);
  for (const auto& [a, b] : std::array<std::array<double, 2>, 3>{{{1, 1}, {2, 1}, {1, 3}}}) {
    CHECK(12.0 * a * b * coeffs_infinite(a, b).f2 == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("logarithm combinations") {
  const std::array<double, 3> sides{1, 2, 3};
  CHECK(std::fabs(log_combination_series(sides) - log_combination(1, 2, 3)) < 1e-10);
  const std::array<double, 2> two{0.4, 2.5};
  CHECK(std::fabs(log_combination_series(two) - log_combination(0.4, 2.5)) < 1e-10);
  const double e = std::exp(1.0);
  const double direct = std::log((e - 1) * (e * e - 1) * (std::pow(e, 3) - 1) * (std::pow(e, 6) - 1) /
                                 ((std::pow(e, 3) - 1) * (std::pow(e, 5) - 1) * (std::pow(e, 4) - 1)));
  CHECK(log_combination(1, 2, 3) == doctest::Approx(direct).epsilon(1e-13));
  CHECK(std::isfinite(log_combination(800.0, 900.0, 1000.0)));
}

TEST_CASE("prediction") {
  ExpansionCoefficients unit;
  unit.f0 = 1.0;
  CHECK(predict_free_energy(unit, 0.5) == 1.0);
  const auto c = coeffs_finite(1, 1, 1);
  CHECK(std::fabs(predict_free_energy(c, 1e-9) - c.f0) < 1e-15);
  CHECK_THROWS_AS(predict_free_energy(c, 0.0), DomainError);
  CHECK_THROWS_AS(predict_free_energy(c, 1.5), DomainError);
}

TEST_CASE("finite box prediction error scales like eps^4") {
  const Scenario s = FiniteBox{1, 1, 1};
  const auto c = coeffs_finite(1, 1, 1);
  const double r20 = residual(c, s, 20);
  const double r50 = residual(c, s, 50);
  const double r100 = residual(c, s, 100);
  CHECK(r100 < 10.0 * std::pow(0.01, 4));
  CHECK(r20 > r50);
  CHECK(r50 > r100);
  CHECK(std::log(r20 / r50) / std::log(50.0 / 20.0) == doctest::Approx(4.0).epsilon(0.05));
  CHECK(std::log(r50 / r100) / std::log(2.0) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("constant profile reduces to the infinite-height box") {
  const ConstantSlice one{1.0};
  for (const auto& [a, b] : std::array<std::array<double, 2>, 3>{{{2, 1}, {1, 3}, {2, 3}}}) {
    const auto s = coeffs_sliced(a, b, one);
    const auto i = coeffs_infinite(a, b);
    CHECK(std::fabs(s.f0 - i.f0) < 1e-10);
    CHECK(s.f1 == i.f1);
    CHECK(std::fabs(s.f2 - i.f2) < 1e-12);
    CHECK(std::fabs(s.f3 - i.f3) < 5e-4);
    CHECK(s.scenario == ScenarioKind::kSliced);
  }
  const ConstantSlice c{1.6};
  const auto s = coeffs_sliced(1, 2, c);
  const auto scaled = coeffs_infinite(1.6, 3.2);
  CHECK(std::fabs(s.f0 - scaled.f0) < 1e-10);
}

TEST_CASE("sliced coefficients for the reference profiles") {
  const CosineSlice cosine;
  const auto c13 = coeffs_sliced(1, 3, cosine);
  CHECK(std::fabs(c13.f0 - 0.472206688) < 1e-8);
  CHECK(std::fabs(c13.f3 - (-0.043883000)) < 1e-7);
  CHECK(c13.f1 == 0.0);
  CHECK(12.0 * 3.0 * c13.f2 == doctest::Approx(1.0));
  REQUIRE(c13.sliced.has_value());
  CHECK(c13.sliced->d2_noise < 1e-6);

  const LinearSlice lin{2.0, 0.5};
  const auto l23 = coeffs_sliced(2, 3, lin);
  CHECK(std::fabs(l23.f0 - 0.032804447) < 1e-8);
  CHECK(std::fabs(l23.f3 - (-0.015094000)) < 1e-7);
}

TEST_CASE("corner subtraction agrees with the direct double integral") {
  const CosineSlice cosine;
  const auto c = coeffs_sliced(2, 3, cosine);
  CHECK(std::fabs(sliced_f0_direct(2, 3, cosine) - c.f0) < 1e-9);
  const LinearSlice lin{1.0, 0.5};
  CHECK(std::fabs(sliced_f0_direct(1, 3, lin) - coeffs_sliced(1, 3, lin).f0) < 1e-9);
}

TEST_CASE("sliced settings validation") {
  SlicedDerivativeSettings s;
  s.inv_eps_steps = {64, 128};
  CHECK_THROWS_AS(s.validate(), DomainError);
  s.inv_eps_steps = {128, 96, 64};
  CHECK_THROWS_AS(s.validate(), DomainError);
  s.inv_eps_steps = {64, 96, 128};
  s.richardson_order = 3;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s.richardson_order = 2;
  CHECK_NOTHROW(s.validate());
  const LinearSlice negative{-1.0, 0.1};
  CHECK_THROWS_AS(coeffs_sliced(1, 3, negative), DomainError);
}

TEST_CASE("parallel Richardson evaluations are deterministic") {
  const CosineSlice cosine;
  SlicedDerivativeSettings one;
  SlicedDerivativeSettings four;
  four.threads = 4;
  CHECK(coeffs_sliced(1, 3, cosine, one).f3 == coeffs_sliced(1, 3, cosine, four).f3);
}
