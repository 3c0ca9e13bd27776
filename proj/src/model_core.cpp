#include "hexdimer/model_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hexdimer/error.hpp"
#include "hexdimer/kahan.hpp"

namespace hexdimer {

Height Height::finite(std::int64_t k) {
  if (k < 1) {
    throw DomainError("box height must be >= 1, got " + std::to_string(k));
  }
  return Height{k};
}

std::int64_t Height::value() const {
  if (is_unbounded()) {
    throw DomainError("height is unbounded");
  }
  return std::get<std::int64_t>(value_);
}

std::string Height::to_string() const {
  return is_unbounded() ? std::string{"inf"} : std::to_string(value());
}

BoxShape BoxShape::make(std::int64_t m, std::int64_t n, Height k) {
  if (m < 1 || n < 1) {
    throw DomainError("box sides must be >= 1, got M=" + std::to_string(m) +
                      " N=" + std::to_string(n));
  }
  return BoxShape{m, n, k};
}

std::string BoxShape::to_string() const {
  std::ostringstream os;
  os << "(" << m << "," << n << "," << k.to_string() << ")";
  return os.str();
}

double volume(const BoxShape& shape) {
  if (shape.k.is_unbounded()) {
    return static_cast<double>(shape.m * shape.n);
  }
  const std::int64_t k = shape.k.value();
  return 2.0 * static_cast<double>(shape.m * shape.n + shape.n * k + shape.m * k);
}

ScaledShape ScaledShape::from_box(const BoxShape& shape, std::int64_t inv_eps) {
  if (inv_eps < 1) {
    throw DomainError("1/eps must be a positive integer");
  }
  const double t = static_cast<double>(inv_eps);
  ScaledShape s;
  s.a = static_cast<double>(shape.m) / t;
  s.b = static_cast<double>(shape.n) / t;
  s.c = shape.k.is_unbounded() ? std::nullopt
                               : std::optional<double>{static_cast<double>(shape.k.value()) / t};
  s.eps = 1.0 / t;
  return s;
}

namespace {

std::int64_t lattice_side(double ratio, double eps, const char* name) {
  const double sides = ratio / eps;
  const double rounded = std::round(sides);
  if (!(ratio > 0.0) || std::fabs(sides - rounded) > 1e-9 || rounded < 1.0) {
    std::ostringstream os;
    os << name << "/eps = " << sides << " is not a positive integer";
    throw DomainError(os.str());
  }
  return static_cast<std::int64_t>(rounded);
}

}  // namespace

BoxShape ScaledShape::to_box() const {
  if (!(eps > 0.0)) {
    throw DomainError("eps must be positive");
  }
  const auto m = lattice_side(a, eps, "a");
  const auto n = lattice_side(b, eps, "b");
  const Height k = c ? Height::finite(lattice_side(*c, eps, "c")) : Height::unbounded();
  return BoxShape::make(m, n, k);
}

HeightConfig::HeightConfig(std::int64_t rows, std::int64_t cols, std::vector<std::int64_t> heights)
    : rows_{rows}, cols_{cols}, heights_{std::move(heights)} {
  if (rows < 1 || cols < 1 || heights_.size() != static_cast<std::size_t>(rows * cols)) {
    throw DomainError("height array does not match its M x N shape");
  }
}

bool HeightConfig::is_valid(std::int64_t k) const {
  for (std::int64_t i = 0; i < rows_; ++i) {
    for (std::int64_t j = 0; j < cols_; ++j) {
      const auto h = at(i, j);
      if (h < 0 || h > k) return false;
      if (i > 0 && h > at(i - 1, j)) return false;
      if (j > 0 && h > at(i, j - 1)) return false;
    }
  }
  return true;
}

namespace {

void check_guard(const BoxShape& shape, const EnumerationLimits& limits) {
  if (shape.k.is_unbounded()) {
    throw OracleTooLarge("oracle too large: enumeration needs a finite height");
  }
  if (shape.m * shape.n > limits.max_cells || shape.k.value() > limits.max_height) {
    std::ostringstream os;
    os << "oracle too large: box " << shape.to_string() << " exceeds m*n <= " << limits.max_cells
       << ", k <= " << limits.max_height;
    throw OracleTooLarge(os.str());
  }
}

}  // namespace

ConfigEnumerator::ConfigEnumerator(const BoxShape& shape, EnumerationLimits limits)
    : k_{(check_guard(shape, limits), shape.k.value())},
      config_{shape.m, shape.n, std::vector<std::int64_t>(static_cast<std::size_t>(shape.m * shape.n), 0)} {}

std::int64_t ConfigEnumerator::upper_bound(std::size_t cell) const {
  const auto cols = static_cast<std::size_t>(config_.cols_);
  const auto& h = config_.heights_;
  std::int64_t bound = k_;
  if (cell >= cols) bound = std::min(bound, h[cell - cols]);
  if (cell % cols != 0) bound = std::min(bound, h[cell - 1]);
  return bound;
}

bool ConfigEnumerator::next() {
  auto& h = config_.heights_;
  for (std::size_t cell = h.size(); cell-- > 0;) {
    if (h[cell] < upper_bound(cell)) {
      ++h[cell];
      std::fill(h.begin() + static_cast<std::ptrdiff_t>(cell) + 1, h.end(), 0);
      return true;
    }
  }
  return false;
}

std::vector<HeightConfig> enumerate_configs(const BoxShape& shape, EnumerationLimits limits) {
  std::vector<HeightConfig> out;
  ConfigEnumerator e{shape, limits};
  do {
    out.push_back(e.current());
  } while (e.next());
  return out;
}

std::int64_t config_energy(const HeightConfig& config) {
  std::int64_t total = 0;
  for (auto h : config.heights()) total += h;
  return total;
}

std::vector<std::uint64_t> energy_histogram(const BoxShape& shape, EnumerationLimits limits) {
  ConfigEnumerator e{shape, limits};
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(shape.m * shape.n * shape.k.value() + 1), 0);
  do {
    ++counts[static_cast<std::size_t>(config_energy(e.current()))];
  } while (e.next());
  return counts;
}

double oracle_partition(const BoxShape& shape, double q, EnumerationLimits limits) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw DomainError("oracle_partition needs 0 < q <= 1");
  }
  ConfigEnumerator e{shape, limits};
  CompensatedSum z;
  do {
    z += std::pow(q, static_cast<double>(config_energy(e.current())));
  } while (e.next());
  return z.value();
}

}  // namespace hexdimer
