#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hexdimer/error.hpp"
#include "hexdimer/weights.hpp"

using namespace hexdimer;

TEST_CASE("catalog profiles") {
  const CosineSlice cosine;
  CHECK(cosine.value(0.0) == doctest::Approx(1.0));
  CHECK(cosine.integral(-1.0, 2.0) == doctest::Approx((6.0 + std::sin(2.0) + std::sin(1.0)) / 3.0));
  const LinearSlice lin{2.0, 0.5};
  CHECK(lin.value(-2.0) == 1.0);
  CHECK(lin.integral(0.0, 2.0) == doctest::Approx(5.0));
  CHECK(lin.describe() == "linear:2,0.5");
  const ConstantSlice c{0.25};
  CHECK(c.integral(1.0, 3.0) == 0.5);
  CHECK(c.describe() == "const:0.25");
}

TEST_CASE("tabulated spline") {
  std::vector<double> t;
  std::vector<double> y;
  for (int i = 0; i <= 10; ++i) {
    t.push_back(-1.0 + 0.4 * i);
    y.push_back(1.0 + 0.3 * t.back());
  }
  const TabulatedSlice line{t, y};
  for (double x : {-0.93, 0.0, 1.7, 2.95}) CHECK(line.value(x) == doctest::Approx(1.0 + 0.3 * x).epsilon(1e-14));
  CHECK(line.integral(-0.5, 2.5) == doctest::Approx(3.0 + 0.15 * (6.25 - 0.25)).epsilon(1e-13));

  std::vector<double> ty;
  for (double x : t) ty.push_back((2.0 + std::cos(x)) / 3.0);
  const TabulatedSlice cosine{t, ty};
  CHECK(cosine.value(0.5) == doctest::Approx((2.0 + std::cos(0.5)) / 3.0).epsilon(1e-3));
  CHECK(cosine.integral(t.front(), t.back()) == doctest::Approx(CosineSlice{}.integral(t.front(), t.back())).epsilon(1e-4));

  CHECK_THROWS_AS(TabulatedSlice({0.0, 1.0}, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(TabulatedSlice({0.0, 1.0, 0.5}, {1.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("tabulated file loading") {
  const auto path = std::filesystem::temp_directory_path() / "hexdimer_phi_test.csv";
  {
    std::ofstream out{path};
    out << "# profile\n"
        << "t,phi\n"
        << "-1,2\n"
        << "0,2\n"
        << "1,2\n"
        << "3,2\n";
  }
  const auto phi = load_tabulated_slice(path.string());
  CHECK(phi->value(0.3) == doctest::Approx(2.0));
  CHECK(phi->integral(-1.0, 3.0) == doctest::Approx(8.0));
  {
    std::ofstream out{path};
    out << "0,1\n1,x\n2,1\n";
  }
  CHECK_THROWS_AS(load_tabulated_slice(path.string()), DomainError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_tabulated_slice(path.string()), DomainError);
}

TEST_CASE("positivity check") {
  CHECK_NOTHROW(require_positive(CosineSlice{}, -3.0, 3.0));
  CHECK_NOTHROW(require_positive(LinearSlice{1.0, 0.5}, -1.0, 3.0));
  CHECK_THROWS_AS(require_positive(LinearSlice{1.0, 0.5}, -2.0, 3.0), DomainError);
  CHECK_THROWS_AS(require_positive(ConstantSlice{0.0}, 0.0, 1.0), DomainError);
}
