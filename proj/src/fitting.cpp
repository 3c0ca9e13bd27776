#include "hexdimer/fitting.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <sstream>

#include "hexdimer/error.hpp"
#include "hexdimer/kahan.hpp"

namespace hexdimer::fitting {

namespace {

constexpr double kMaxCondition = 1e12;

// Dense column-major matrix, just enough for a small QR.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix(std::size_t r, std::size_t c) : rows{r}, cols{c}, data(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[j * rows + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data[j * rows + i]; }
};

double one_norm_upper(const Matrix& r, std::size_t n) {
  double best = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i <= j; ++i) col += std::fabs(r(i, j));
    best = std::max(best, col);
  }
  return best;
}

// Inverse of the leading n x n upper-triangular block.
Matrix invert_upper(const Matrix& r, std::size_t n) {
  Matrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    inv(j, j) = 1.0 / r(j, j);
    for (std::size_t i = j; i-- > 0;) {
      double s = 0.0;
      for (std::size_t k = i + 1; k <= j; ++k) s += r(i, k) * inv(k, j);
      inv(i, j) = -s / r(i, i);
    }
  }
  return inv;
}

}  // namespace

std::string to_string(BasisTerm term) {
  switch (term) {
    case BasisTerm::kOne:
      return "1";
    case BasisTerm::kEps:
      return "eps";
    case BasisTerm::kEps2LogEps:
      return "eps^2*ln(eps)";
    case BasisTerm::kEps2:
      return "eps^2";
    case BasisTerm::kEps3:
      return "eps^3";
    case BasisTerm::kEps4:
      return "eps^4";
  }
  return "?";
}

double evaluate(BasisTerm term, double eps) {
  switch (term) {
    case BasisTerm::kOne:
      return 1.0;
    case BasisTerm::kEps:
      return eps;
    case BasisTerm::kEps2LogEps:
      return eps * eps * std::log(eps);
    case BasisTerm::kEps2:
      return eps * eps;
    case BasisTerm::kEps3:
      return eps * eps * eps;
    case BasisTerm::kEps4:
      return eps * eps * eps * eps;
  }
  return 0.0;
}

double FitResult::coefficient(BasisTerm term) const {
  for (std::size_t i = 0; i < basis.terms.size(); ++i) {
    if (basis.terms[i] == term) return coefficients[i];
  }
  return 0.0;
}

asymptotics::ExpansionCoefficients FitResult::expansion(ScenarioKind scenario) const {
  asymptotics::ExpansionCoefficients c;
  c.f0 = coefficient(BasisTerm::kOne);
  c.f1 = coefficient(BasisTerm::kEps);
  c.f2 = coefficient(BasisTerm::kEps2LogEps);
  c.f3 = coefficient(BasisTerm::kEps2);
  c.scenario = scenario;
  c.provenance = asymptotics::Provenance::kFitted;
  return c;
}

std::vector<std::int64_t> sample_grid(std::int64_t inv_eps_min, std::int64_t inv_eps_max) {
  if (inv_eps_min < 2 || inv_eps_min >= inv_eps_max) {
    std::ostringstream os;
    os << "empty sample range [" << inv_eps_min << ", " << inv_eps_max << "]; need 2 <= min < max";
    throw DomainError(os.str());
  }
  std::vector<std::int64_t> grid;
  for (std::int64_t t = inv_eps_min; t <= inv_eps_max; ++t) grid.push_back(t);
  return grid;
}

std::vector<exact::FreeEnergySample> generate_samples(const Scenario& scenario, std::int64_t inv_eps_min,
                                                      std::int64_t inv_eps_max, unsigned threads) {
  const auto grid = sample_grid(inv_eps_min, inv_eps_max);
  return exact::free_energy_grid(scenario, grid, threads);
}

FitResult fit(std::span<const exact::FreeEnergySample> samples, const FitBasis& basis) {
  const std::size_t p = basis.terms.size();
  if (p == 0) throw DomainError("fit basis is empty");
  if (samples.size() < p + 4) {
    std::ostringstream os;
    os << "fit needs at least " << p + 4 << " samples, got " << samples.size();
    throw DomainError(os.str());
  }
  std::vector<exact::FreeEnergySample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
    return x.inv_eps != y.inv_eps ? x.inv_eps < y.inv_eps : x.eps > y.eps;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].eps == sorted[i - 1].eps) throw DomainError("duplicate eps in fit samples");
  }

  const std::size_t n = sorted.size();
  Matrix a(n, p);
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) a(i, j) = evaluate(basis.terms[j], sorted[i].eps);
    rhs[i] = sorted[i].f;
  }
  std::vector<double> scale(p);
  for (std::size_t j = 0; j < p; ++j) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm = std::hypot(norm, a(i, j));
    if (norm == 0.0) throw NumericalError("fit basis column " + to_string(basis.terms[j]) + " vanishes");
    scale[j] = norm;
    for (std::size_t i = 0; i < n; ++i) a(i, j) /= norm;
  }

  // Householder QR; R overwrites the upper triangle, Q^T is applied to rhs.
  for (std::size_t k = 0; k < p; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm = std::hypot(norm, a(i, k));
    if (norm == 0.0) throw NumericalError("fit basis is rank deficient on the sample grid");
    const double alpha = a(k, k) > 0.0 ? -norm : norm;
    std::vector<double> v(n - k);
    for (std::size_t i = k; i < n; ++i) v[i - k] = a(i, k);
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (double x : v) vnorm2 += x * x;
    if (vnorm2 == 0.0) continue;
    for (std::size_t j = k; j < p; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += v[i - k] * a(i, j);
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = k; i < n; ++i) a(i, j) -= f * v[i - k];
    }
    double dot = 0.0;
    for (std::size_t i = k; i < n; ++i) dot += v[i - k] * rhs[i];
    const double f = 2.0 * dot / vnorm2;
    for (std::size_t i = k; i < n; ++i) rhs[i] -= f * v[i - k];
  }

  const Matrix r_inv = invert_upper(a, p);
  FitResult out;
  out.basis = basis;
  out.condition_estimate = one_norm_upper(a, p) * one_norm_upper(r_inv, p);
  if (!(out.condition_estimate <= kMaxCondition)) {
    std::ostringstream os;
    os << "ill-conditioned fit basis: condition estimate " << out.condition_estimate << " > " << kMaxCondition;
    throw NumericalError(os.str());
  }

  std::vector<double> y(p);
  for (std::size_t i = p; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t k = i + 1; k < p; ++k) s -= a(i, k) * y[k];
    y[i] = s / a(i, i);
  }
  out.coefficients.resize(p);
  for (std::size_t j = 0; j < p; ++j) out.coefficients[j] = y[j] / scale[j];

  CompensatedSum ss;
  for (const auto& s : sorted) {
    double model = 0.0;
    for (std::size_t j = 0; j < p; ++j) model += out.coefficients[j] * evaluate(basis.terms[j], s.eps);
    ss += (s.f - model) * (s.f - model);
  }
  out.residual_rms = std::sqrt(ss.value() / static_cast<double>(n));

  try {
    out.residual_slope = residual_slope(sorted, out.expansion(ScenarioKind::kFinite));
  } catch (const DomainError&) {
    out.residual_slope.reset();
  }
  return out;
}

double residual_slope(std::span<const exact::FreeEnergySample> samples, const asymptotics::ExpansionCoefficients& c,
                      std::int64_t min_inv_eps, std::int64_t max_inv_eps) {
  std::vector<std::pair<double, double>> points;
  std::size_t eligible = 0;
  std::vector<exact::FreeEnergySample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.inv_eps < y.inv_eps; });
  for (const auto& s : sorted) {
    if (s.inv_eps < min_inv_eps || s.inv_eps > max_inv_eps) continue;
    ++eligible;
    const double r = std::fabs(s.f - asymptotics::predict_free_energy(c, s.eps));
    if (r == 0.0) continue;
    points.emplace_back(std::log(s.eps), std::log(r));
  }
  if (eligible < 10) throw DomainError("residual slope needs at least 10 samples in range");
  if (points.size() < 5) throw DomainError("residual slope needs at least 5 nonzero residuals");

  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [x, y] : points) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

}  // namespace hexdimer::fitting
