#include "hexdimer/partition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hexdimer/error.hpp"
#include "hexdimer/kahan.hpp"
#include "hexdimer/parallel.hpp"
#include "hexdimer/special_functions.hpp"

namespace hexdimer::exact {

namespace {

void require_q_open(double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("q must lie in (0, 1)");
}

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("-ln q must be positive and finite");
}

// pairs[t] = #{(i, j) : 1 <= i <= m, 1 <= j <= n, i + j = t}
std::vector<std::int64_t> pair_counts(std::int64_t m, std::int64_t n) {
  std::vector<std::int64_t> pairs(static_cast<std::size_t>(m + n + 1), 0);
  for (std::int64_t t = 2; t <= m + n; ++t) {
    pairs[static_cast<std::size_t>(t)] = std::max<std::int64_t>(0, std::min({t - 1, m, n, m + n + 1 - t}));
  }
  return pairs;
}

ScaledShape scaled_for(const Scenario& scenario, std::int64_t inv_eps) {
  ScaledShape s;
  s.eps = 1.0 / static_cast<double>(inv_eps);
  if (const auto* f = std::get_if<FiniteBox>(&scenario)) {
    s.a = f->a;
    s.b = f->b;
    s.c = f->c;
  } else if (const auto* i = std::get_if<InfiniteBox>(&scenario)) {
    s.a = i->a;
    s.b = i->b;
    s.c = std::nullopt;
  } else {
    const auto& sl = std::get<SlicedBox>(scenario);
    s.a = sl.a;
    s.b = sl.b;
    s.c = std::nullopt;
  }
  return s;
}

}  // namespace

void SeriesSettings::validate() const {
  if (!(term_tol > 0.0)) throw DomainError("term_tol must be positive");
  if (n_max_cap < 1) throw DomainError("n_max_cap must be positive");
}

double log_z_macmahon_beta(const BoxShape& shape, double beta) {
  if (shape.k.is_unbounded()) throw DomainError("MacMahon product needs a finite height");
  require_beta(beta);
  const std::int64_t m = shape.m;
  const std::int64_t n = shape.n;
  const std::int64_t k = shape.k.value();
  const std::int64_t top = m + n + k;

  // mult[s] = number of triples with i + j + k = s, a sliding window over pairs.
  const auto pairs = pair_counts(m, n);
  std::vector<std::int64_t> mult(static_cast<std::size_t>(top + 3), 0);
  std::int64_t window = 0;
  for (std::int64_t s = 3; s <= top; ++s) {
    const std::int64_t enter = s - 1;
    const std::int64_t leave = s - k - 1;
    if (enter <= m + n) window += pairs[static_cast<std::size_t>(enter)];
    if (leave >= 2) window -= pairs[static_cast<std::size_t>(leave)];
    mult[static_cast<std::size_t>(s)] = window;
  }

  // prod_s [(1 - q^{s-1}) / (1 - q^{s-2})]^{mult[s]} telescopes to
  // prod_x (1 - q^x)^{mult[x+1] - mult[x+2]}.
  CompensatedSum sum;
  for (std::int64_t x = 1; x < top; ++x) {
    const std::int64_t w = mult[static_cast<std::size_t>(x + 1)] - mult[static_cast<std::size_t>(x + 2)];
    if (w != 0) sum += static_cast<double>(w) * special::log1mexp(beta * static_cast<double>(x));
  }
  return sum.value();
}

double log_z_macmahon(const BoxShape& shape, double q) {
  require_q_open(q);
  return log_z_macmahon_beta(shape, -std::log(q));
}

double log_z_infinite_beta(std::int64_t m, std::int64_t n, double beta) {
  if (m < 1 || n < 1) throw DomainError("box sides must be positive");
  require_beta(beta);
  const auto pairs = pair_counts(m, n);
  CompensatedSum sum;
  for (std::int64_t t = 2; t <= m + n; ++t) {
    sum -= static_cast<double>(pairs[static_cast<std::size_t>(t)]) *
           special::log1mexp(beta * static_cast<double>(t - 1));
  }
  return sum.value();
}

double log_z_infinite(const BoxShape& shape, double q) {
  if (!shape.k.is_unbounded()) throw DomainError("log_z_infinite needs k = inf");
  if (q >= 1.0) throw DomainError("infinite-height partition function diverges for q >= 1");
  require_q_open(q);
  return log_z_infinite_beta(shape.m, shape.n, -std::log(q));
}

double log_z_sliced(std::int64_t m, std::int64_t n, const SliceFunction& phi, double eps) {
  if (m < 1 || n < 1) throw DomainError("box sides must be positive");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");

  std::vector<double> left(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    acc += eps * phi.value(static_cast<double>(n - m - i) * eps);
    left[static_cast<std::size_t>(i)] = acc;
  }
  std::vector<double> right(static_cast<std::size_t>(m));
  acc = 0.0;
  for (std::int64_t j = 0; j < m; ++j) {
    if (j > 0) acc += eps * phi.value(static_cast<double>(n - m + j) * eps);
    right[static_cast<std::size_t>(j)] = acc;
  }

  CompensatedSum sum;
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < m; ++j) {
      const double s = left[static_cast<std::size_t>(i)] + right[static_cast<std::size_t>(j)];
      if (!(s > 0.0) || !std::isfinite(s)) {
        std::ostringstream os;
        os << "slice weight product is not in (0, 1) at i=" << i << " j=" << j << " (phi <= 0 somewhere?)";
        throw DomainError(os.str());
      }
      sum -= special::log1mexp(s);
    }
  }
  return sum.value();
}

double free_energy(const BoxShape& shape, double q) {
  if (shape.k.is_unbounded()) {
    return log_z_infinite(shape, q) / volume(shape);
  }
  return -log_z_macmahon(shape, q) / volume(shape);
}

FreeEnergySample free_energy(const Scenario& scenario, std::int64_t inv_eps) {
  if (inv_eps < 1) throw DomainError("1/eps must be a positive integer");
  const ScaledShape scaled = scaled_for(scenario, inv_eps);
  const BoxShape box = scaled.to_box();
  FreeEnergySample out{inv_eps, scaled.eps, 0.0};
  const double mn = static_cast<double>(box.m) * static_cast<double>(box.n);
  if (std::holds_alternative<FiniteBox>(scenario)) {
    out.f = -log_z_macmahon_beta(box, scaled.eps) / volume(box);
  } else if (std::holds_alternative<InfiniteBox>(scenario)) {
    out.f = log_z_infinite_beta(box.m, box.n, scaled.eps) / mn;
  } else {
    const auto& sl = std::get<SlicedBox>(scenario);
    if (!sl.phi) throw DomainError("sliced scenario needs a phi profile");
    out.f = log_z_sliced(box.m, box.n, *sl.phi, scaled.eps) / mn;
  }
  return out;
}

std::vector<FreeEnergySample> free_energy_grid(const Scenario& scenario,
                                               std::span<const std::int64_t> inv_eps, unsigned threads) {
  return parallel_map(inv_eps.size(), threads, [&](std::size_t i) { return free_energy(scenario, inv_eps[i]); });
}

namespace {

struct SeriesShape {
  double prefactor;
  std::vector<double> sides;
  double eps;
};

SeriesShape series_shape(const ScaledShape& s) {
  if (!(s.a > 0.0 && s.b > 0.0 && s.eps > 0.0) || (s.c && !(*s.c > 0.0))) {
    throw DomainError("a, b, c and eps must be positive");
  }
  if (s.c) {
    const double c = *s.c;
    return {-1.0 / (2.0 * (s.a * s.b + s.b * c + s.a * c)), {s.a, s.b, c}, s.eps};
  }
  return {1.0 / (s.a * s.b), {s.a, s.b}, s.eps};
}

double series_term(const SeriesShape& sh, std::int64_t n) {
  const double nd = static_cast<double>(n);
  double h = 1.0;
  for (double x : sh.sides) h *= -std::expm1(-nd * x);
  return special::chi(nd * sh.eps) * h / (nd * nd * nd);
}

}  // namespace

double series_free_energy(const ScaledShape& scaled, const SeriesSettings& settings) {
  settings.validate();
  const SeriesShape sh = series_shape(scaled);
  const double scale = std::fabs(sh.prefactor);
  CompensatedSum sum;
  for (std::int64_t n = 1; n <= settings.n_max_cap; ++n) {
    sum += series_term(sh, n);
    const double nd = static_cast<double>(n);
    const double tail = scale * special::chi(nd * sh.eps) / (2.0 * nd * nd);
    if (tail < settings.term_tol) return sh.prefactor * sum.value();
  }
  std::ostringstream os;
  os.precision(17);
  os << "series did not converge within " << settings.n_max_cap << " terms; partial sum "
     << sh.prefactor * sum.value();
  throw NumericalError(os.str());
}

std::vector<double> series_terms(const ScaledShape& scaled, std::int64_t count) {
  const SeriesShape sh = series_shape(scaled);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (std::int64_t n = 1; n <= count; ++n) out.push_back(sh.prefactor * series_term(sh, n));
  return out;
}

}  // namespace hexdimer::exact
