#pragma once

// Domain types of the "cubes in a box" dimer model and the brute-force
// partition-function oracle for small boxes.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hexdimer {

/// Marker for the box of infinite height.
struct Unbounded {
  friend bool operator==(Unbounded, Unbounded) = default;
};

/// Height side K of the box: a positive integer or unbounded.
class Height {
 public:
  static Height finite(std::int64_t k);
  static Height unbounded() { return Height{Unbounded{}}; }

  [[nodiscard]] bool is_unbounded() const { return std::holds_alternative<Unbounded>(value_); }
  /// Throws DomainError for the unbounded height.
  [[nodiscard]] std::int64_t value() const;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Height&, const Height&) = default;

 private:
  explicit Height(std::variant<std::int64_t, Unbounded> v) : value_{v} {}
  std::variant<std::int64_t, Unbounded> value_;
};

/// Lattice sides M, N, K of the hexagonal domain.
struct BoxShape {
  std::int64_t m = 1;
  std::int64_t n = 1;
  Height k = Height::finite(1);

  /// Throws DomainError unless m, n >= 1.
  static BoxShape make(std::int64_t m, std::int64_t n, Height k);
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const BoxShape&, const BoxShape&) = default;
};

/// Number of sites V used to normalise the free energy: 2(MN+NK+MK) for a
/// finite box (number of hexagon vertices), MN for the infinite-height box.
double volume(const BoxShape& shape);

/// Continuum parametrisation M = a/eps, N = b/eps, K = c/eps. `c` is empty for
/// the infinite-height box.
struct ScaledShape {
  double a = 1.0;
  double b = 1.0;
  std::optional<double> c = 1.0;
  double eps = 1.0;

  static ScaledShape from_box(const BoxShape& shape, std::int64_t inv_eps);
  /// Lattice sides for this mesh; throws DomainError if a/eps etc. are not
  /// integers to within 1e-9.
  [[nodiscard]] BoxShape to_box() const;
};

/// Column heights h_ij of an M x N pile of cubes, row-major.
class HeightConfig {
 public:
  HeightConfig(std::int64_t rows, std::int64_t cols, std::vector<std::int64_t> heights);

  [[nodiscard]] std::int64_t rows() const { return rows_; }
  [[nodiscard]] std::int64_t cols() const { return cols_; }
  [[nodiscard]] std::int64_t at(std::int64_t i, std::int64_t j) const {
    return heights_[static_cast<std::size_t>(i * cols_ + j)];
  }
  [[nodiscard]] const std::vector<std::int64_t>& heights() const { return heights_; }

  /// 0 <= h_ij <= k and heights weakly decrease along rows and columns.
  [[nodiscard]] bool is_valid(std::int64_t k) const;

  friend bool operator==(const HeightConfig&, const HeightConfig&) = default;

 private:
  friend class ConfigEnumerator;

  std::int64_t rows_;
  std::int64_t cols_;
  std::vector<std::int64_t> heights_;
};

/// Size guard of the brute-force oracle.
struct EnumerationLimits {
  std::int64_t max_cells = 16;  // m * n
  std::int64_t max_height = 8;  // k
};

/*!
  Streams every monotone height array of a finite box exactly once.

  Cells are visited row by row; each cell ranges over 0..min(up, left, K).
  The order is lexicographic in the row-major height vector, starting from the
  empty pile.

    ConfigEnumerator e{shape};
    do { use(e.current()); } while (e.next());
*/
class ConfigEnumerator {
 public:
  explicit ConfigEnumerator(const BoxShape& shape, EnumerationLimits limits = {});

  [[nodiscard]] const HeightConfig& current() const { return config_; }
  /// Advances to the next configuration; returns false when exhausted.
  bool next();

 private:
  [[nodiscard]] std::int64_t upper_bound(std::size_t cell) const;

  std::int64_t k_;
  HeightConfig config_;
};

/// All configurations in enumeration order.
std::vector<HeightConfig> enumerate_configs(const BoxShape& shape, EnumerationLimits limits = {});

/// Energy of a configuration: the number of cubes.
std::int64_t config_energy(const HeightConfig& config);

/// Number of configurations of each volume: entry v counts piles of v cubes.
/// These are the coefficients of Z as a polynomial in q.
std::vector<std::uint64_t> energy_histogram(const BoxShape& shape, EnumerationLimits limits = {});

/// Z = sum over configurations of q^volume, by direct enumeration.
double oracle_partition(const BoxShape& shape, double q, EnumerationLimits limits = {});

}  // namespace hexdimer
