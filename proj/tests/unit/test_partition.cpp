#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

#include "hexdimer/error.hpp"
#include "hexdimer/kahan.hpp"
#include "hexdimer/model_core.hpp"
#include "hexdimer/partition.hpp"
#include "hexdimer/special_functions.hpp"

using namespace hexdimer;
using namespace hexdimer::exact;

namespace {
BoxShape box(std::int64_t m, std::int64_t n, std::int64_t k) { return BoxShape::make(m, n, Height::finite(k)); }
BoxShape tall(std::int64_t m, std::int64_t n) { return BoxShape::make(m, n, Height::unbounded()); }

// Unoptimised evaluation of the slice-weighted sum: each partial sum is rebuilt
// from scratch in the same order as the running sums.
double naive_sliced(std::int64_t m, std::int64_t n, const SliceFunction& phi, double eps) {
  CompensatedSum sum;
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < m; ++j) {
      double left = 0.0;
      for (std::int64_t k = 0; k <= i; ++k) left += eps * phi.value(static_cast<double>(n - m - k) * eps);
      double right = 0.0;
      for (std::int64_t l = 1; l <= j; ++l) right += eps * phi.value(static_cast<double>(n - m + l) * eps);
      sum -= special::log1mexp(left + right);
    }
  }
  return sum.value();
}

// Direct triple product, no grouping.
double triple_product_log(std::int64_t m, std::int64_t n, std::int64_t k, double q) {
  double s = 0.0;
  for (std::int64_t i = 1; i <= m; ++i)
    for (std::int64_t j = 1; j <= n; ++j)
      for (std::int64_t l = 1; l <= k; ++l) {
        const auto e = static_cast<double>(i + j + l);
        s += std::log1p(-std::pow(q, e - 1.0)) - std::log1p(-std::pow(q, e - 2.0));
      }
  return s;
}
}  // namespace

TEST_CASE("MacMahon product on small boxes") {
  CHECK(log_z_macmahon(box(1, 1, 1), 0.5) == doctest::Approx(std::log(1.5)).epsilon(1e-15));
  CHECK(log_z_macmahon(box(1, 1, 2), 0.5) == doctest::Approx(std::log(1.75)).epsilon(1e-15));
  CHECK(std::fabs(log_z_macmahon(box(3, 3, 3), 0.7) - std::log(oracle_partition(box(3, 3, 3), 0.7))) < 1e-10);
  for (std::int64_t m = 1; m <= 4; ++m)
    for (std::int64_t n = 1; n <= 4; ++n)
      for (std::int64_t k = 1; k <= 4; ++k)
        CHECK(log_z_macmahon(box(m, n, k), 0.83) == doctest::Approx(triple_product_log(m, n, k, 0.83)).epsilon(1e-12));
  CHECK_THROWS_AS(log_z_macmahon(box(1, 1, 1), 1.0), DomainError);
  CHECK_THROWS_AS(log_z_macmahon(box(1, 1, 1), 0.0), DomainError);
  CHECK_THROWS_AS(log_z_macmahon(tall(1, 1), 0.5), DomainError);
}

TEST_CASE("MacMahon product is symmetric in the three sides") {
  std::array<std::int64_t, 3> s{7, 4, 11};
  const double ref = log_z_macmahon(box(s[0], s[1], s[2]), 0.95);
  std::sort(s.begin(), s.end());
  do {
    CHECK(log_z_macmahon(box(s[0], s[1], s[2]), 0.95) == doctest::Approx(ref).epsilon(1e-12));
  } while (std::next_permutation(s.begin(), s.end()));
}

TEST_CASE("infinite-height product") {
  CHECK(log_z_infinite(tall(1, 1), 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(log_z_infinite(tall(1, 2), 0.3) ==
        doctest::Approx(-std::log(1.0 - 0.3) - std::log(1.0 - 0.09)).epsilon(1e-15));
  CHECK(std::fabs(log_z_infinite(tall(2, 2), 0.5) - log_z_macmahon(box(2, 2, 200), 0.5)) < 1e-12);
  CHECK_THROWS_AS(log_z_infinite(tall(2, 2), 1.0), DomainError);
  CHECK_THROWS_AS(log_z_infinite(box(2, 2, 2), 0.5), DomainError);
}

TEST_CASE("finite height converges monotonically to infinite height") {
  const double q = 0.8;
  const double limit = log_z_infinite(tall(3, 4), q);
  double prev = 0.0;
  for (std::int64_t k = 1; k <= 60; ++k) {
    const double v = log_z_macmahon(box(3, 4, k), q);
    CHECK(v > prev);
    CHECK(limit - v >= -1e-13);
    CHECK(limit - v <= 20.0 * std::pow(q, static_cast<double>(k)));
    prev = v;
  }
}

TEST_CASE("slice weights") {
  const ConstantSlice one{1.0};
  for (const auto& [m, n] : std::array<std::array<std::int64_t, 2>, 2>{{{2, 3}, {4, 4}}}) {
    CHECK(std::fabs(log_z_sliced(m, n, one, 0.25) - log_z_infinite(tall(m, n), std::exp(-0.25))) < 1e-12);
  }
  const ConstantSlice c{1.7};
  CHECK(log_z_sliced(5, 9, c, 0.1) == doctest::Approx(log_z_infinite_beta(5, 9, 0.17)).epsilon(1e-12));

  const CosineSlice cosine;
  const double eps = 1.0 / 20.0;
  CHECK(log_z_sliced(20, 60, cosine, eps) == naive_sliced(20, 60, cosine, eps));

  const LinearSlice lin{2.0, 0.5};
  CHECK(log_z_sliced(1, 1, lin, 0.3) == doctest::Approx(-special::log1mexp(0.3 * lin.value(0.0))).epsilon(1e-15));
  CHECK(log_z_sliced(1, 1, cosine, 0.1) == doctest::Approx(-std::log(1.0 - std::exp(-0.1 * cosine.value(0.0)))).epsilon(1e-14));

  const LinearSlice negative{-1.0, 0.0};
  CHECK_THROWS_AS(log_z_sliced(2, 2, negative, 0.1), DomainError);
}

TEST_CASE("lattice free energy") {
  const double q = std::exp(-1.0);
  CHECK(free_energy(box(1, 1, 1), q) == doctest::Approx(-std::log(1.0 + q) / 6.0).epsilon(1e-15));
  CHECK(free_energy(tall(2, 3), 0.5) == doctest::Approx(log_z_infinite(tall(2, 3), 0.5) / 6.0).epsilon(1e-15));
}

TEST_CASE("scenario free energy") {
  const auto s = free_energy(FiniteBox{1, 1, 1}, 10);
  CHECK(s.inv_eps == 10);
  CHECK(s.eps == 0.1);
  CHECK(s.f == doctest::Approx(-log_z_macmahon(box(10, 10, 10), std::exp(-0.1)) / 600.0).epsilon(1e-13));
  const auto i = free_energy(InfiniteBox{2, 1}, 5);
  CHECK(i.f == doctest::Approx(log_z_infinite_beta(10, 5, 0.2) / 50.0).epsilon(1e-15));
  const auto sl = free_energy(SlicedBox{1, 3, std::make_shared<CosineSlice>()}, 4);
  CHECK(sl.f == doctest::Approx(log_z_sliced(4, 12, CosineSlice{}, 0.25) / 48.0).epsilon(1e-15));
  CHECK_THROWS_AS(free_energy(FiniteBox{1.5, 1, 1}, 3), DomainError);
  CHECK_THROWS_AS(free_energy(SlicedBox{1, 1, nullptr}, 3), DomainError);
}

TEST_CASE("grid evaluation is ordered and thread independent") {
  std::vector<std::int64_t> grid{2, 9, 3, 40, 17};
  const auto one = free_energy_grid(InfiniteBox{2, 1}, grid, 1);
  const auto many = free_energy_grid(InfiniteBox{2, 1}, grid, 4);
  REQUIRE(one.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(one[i].inv_eps == grid[i]);
    CHECK(one[i].f == many[i].f);
  }
}

TEST_CASE("series evaluator matches the lattice free energy") {
  for (const auto& [a, b, c] : std::array<std::array<double, 3>, 3>{{{1, 1, 1}, {3, 2, 1}, {0.5, 1.5, 2}}}) {
    for (std::int64_t t : {10, 50, 100}) {
      const double lattice = free_energy(FiniteBox{a, b, c}, t).f;
      CHECK(std::fabs(series_free_energy(ScaledShape{a, b, c, 1.0 / static_cast<double>(t)}) - lattice) < 1e-11);
    }
  }
  for (const auto& [a, b] : std::array<std::array<double, 2>, 2>{{{1, 1}, {2, 1}}}) {
    for (std::int64_t t : {10, 50, 100}) {
      const double lattice = free_energy(InfiniteBox{a, b}, t).f;
      CHECK(std::fabs(series_free_energy(ScaledShape{a, b, std::nullopt, 1.0 / static_cast<double>(t)}) - lattice) <
            1e-11);
    }
  }
}

TEST_CASE("series terms are positive with growing partial sums") {
  const auto terms = series_terms(ScaledShape{1, 1, 1, 0.1}, 400);
  double partial = 0.0;
  for (double t : terms) {
    CHECK(t < 0.0);
    CHECK(std::fabs(partial + t) >= std::fabs(partial));
    partial += t;
  }
  const auto inf_terms = series_terms(ScaledShape{1, 1, std::nullopt, 0.1}, 50);
  for (double t : inf_terms) CHECK(t > 0.0);
}

TEST_CASE("series settings") {
  SeriesSettings s;
  s.n_max_cap = 5;
  CHECK_THROWS_AS(series_free_energy(ScaledShape{1, 1, 1, 0.01}, s), NumericalError);
  s = {};
  s.term_tol = 0.0;
  CHECK_THROWS_AS(series_free_energy(ScaledShape{1, 1, 1, 0.01}, s), DomainError);
  CHECK_THROWS_AS(series_free_energy(ScaledShape{-1, 1, 1, 0.01}), DomainError);
}
