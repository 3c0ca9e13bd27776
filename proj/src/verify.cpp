#include "hexdimer/verify.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <sstream>

#include "hexdimer/asymptotics.hpp"
#include "hexdimer/kasteleyn.hpp"
#include "hexdimer/model_core.hpp"
#include "hexdimer/partition.hpp"

namespace hexdimer::verify {

namespace {

constexpr std::array<double, 3> kSweepQ{0.3, 0.5, 0.9};

CheckResult check(std::string suite, std::string name, double measured, double tolerance) {
  return {std::move(suite), std::move(name), measured, tolerance, std::isfinite(measured) && measured <= tolerance};
}

double rel_diff(double x, double y) { return std::fabs(x - y) / std::fabs(y); }

std::string label(const BoxShape& b, double q) {
  std::ostringstream os;
  os << b.to_string() << " q=" << q;
  return os.str();
}

template <typename Fn>
void for_small_boxes(Fn fn) {
  for (std::int64_t m = 1; m <= 3; ++m) {
    for (std::int64_t n = 1; n <= 3; ++n) {
      for (std::int64_t k = 1; k <= 3; ++k) fn(BoxShape::make(m, n, Height::finite(k)));
    }
  }
}

}  // namespace

std::vector<CheckResult> enumeration_vs_macmahon() {
  std::vector<CheckResult> out;
  for_small_boxes([&](const BoxShape& b) {
    for (double q : kSweepQ) {
      const double z = std::exp(exact::log_z_macmahon(b, q));
      out.push_back(check("enumeration", label(b, q), rel_diff(oracle_partition(b, q), z), 1e-9));
    }
  });
  return out;
}

std::vector<CheckResult> kasteleyn_vs_macmahon() {
  std::vector<CheckResult> out;
  for_small_boxes([&](const BoxShape& b) {
    for (double q : kSweepQ) {
      const double z = std::exp(exact::log_z_macmahon(b, q));
      out.push_back(check("kasteleyn", label(b, q), rel_diff(kasteleyn::kasteleyn_partition(b, q), z), 1e-9));
    }
    const double count = oracle_partition(b, 1.0);
    out.push_back(check("kasteleyn", label(b, 1.0), std::fabs(kasteleyn::kasteleyn_partition(b, 1.0) - count), 1e-6));
  });
  return out;
}

std::vector<CheckResult> dual_evaluators() {
  std::vector<CheckResult> out;
  const std::array<std::int64_t, 3> grid{10, 50, 100};
  for (const auto& [a, b, c] : std::array<std::array<double, 3>, 2>{{{1, 1, 1}, {3, 2, 1}}}) {
    for (std::int64_t t : grid) {
      const double lattice = exact::free_energy(FiniteBox{a, b, c}, t).f;
      const double series = exact::series_free_energy(ScaledShape{a, b, c, 1.0 / static_cast<double>(t)});
      out.push_back(check("dual", describe(FiniteBox{a, b, c}) + " 1/eps=" + std::to_string(t),
                          std::fabs(lattice - series), 1e-11));
    }
  }
  for (const auto& [a, b] : std::array<std::array<double, 2>, 2>{{{1, 1}, {2, 1}}}) {
    for (std::int64_t t : grid) {
      const double lattice = exact::free_energy(InfiniteBox{a, b}, t).f;
      const double series =
          exact::series_free_energy(ScaledShape{a, b, std::nullopt, 1.0 / static_cast<double>(t)});
      out.push_back(check("dual", describe(InfiniteBox{a, b}) + " 1/eps=" + std::to_string(t),
                          std::fabs(lattice - series), 1e-11));
    }
  }
  return out;
}

std::vector<CheckResult> constant_phi_reduction() {
  std::vector<CheckResult> out;
  for (double c : {1.0, 0.7, 2.5}) {
    const ConstantSlice phi{c};
    for (const auto& [m, n] : std::array<std::array<std::int64_t, 2>, 3>{{{2, 3}, {4, 4}, {20, 60}}}) {
      const double eps = 0.25;
      const double sliced = exact::log_z_sliced(m, n, phi, eps);
      const double uniform = exact::log_z_infinite_beta(m, n, eps * c);
      std::ostringstream name;
      name << "lnZ phi=" << c << " " << m << "x" << n;
      out.push_back(check("constant-phi", name.str(), rel_diff(sliced, uniform), 1e-12));
    }
  }
  const auto one = std::make_shared<ConstantSlice>(1.0);
  for (const auto& [a, b] : std::array<std::array<double, 2>, 2>{{{1, 3}, {2, 3}}}) {
    const auto sliced = asymptotics::coeffs_sliced(a, b, *one);
    const auto inf = asymptotics::coeffs_infinite(a, b);
    const std::string tag = "a=" + std::to_string(static_cast<int>(a)) + " b=" + std::to_string(static_cast<int>(b));
    out.push_back(check("constant-phi", "f0 " + tag, std::fabs(sliced.f0 - inf.f0), 1e-10));
    out.push_back(check("constant-phi", "f1 " + tag, std::fabs(sliced.f1 - inf.f1), 0.0));
    out.push_back(check("constant-phi", "f2 " + tag, std::fabs(sliced.f2 - inf.f2), 1e-12));
    out.push_back(check("constant-phi", "f3 " + tag, std::fabs(sliced.f3 - inf.f3), 5e-4));
  }
  return out;
}

}  // namespace hexdimer::verify
