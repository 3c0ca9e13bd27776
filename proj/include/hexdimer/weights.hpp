#pragma once

// Boltzmann weights: a uniform q, or slice weights q_t = exp(-eps * phi(t * eps))
// driven by a profile phi on [-a, b].

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace hexdimer {

/// Weight profile phi(t) of the diagonal slices.
class SliceFunction {
 public:
  virtual ~SliceFunction() = default;

  [[nodiscard]] virtual double value(double t) const = 0;
  /// Integral of phi over [lo, hi].
  [[nodiscard]] virtual double integral(double lo, double hi) const = 0;
  /// Short identifier used in output metadata, e.g. "cosine" or "linear:1,0.5".
  [[nodiscard]] virtual std::string describe() const = 0;
};

/// phi(t) = c.
class ConstantSlice final : public SliceFunction {
 public:
  explicit ConstantSlice(double c) : c_{c} {}
  [[nodiscard]] double value(double) const override { return c_; }
  [[nodiscard]] double integral(double lo, double hi) const override { return c_ * (hi - lo); }
  [[nodiscard]] std::string describe() const override;

 private:
  double c_;
};

/// phi(t) = alpha + beta * t.
class LinearSlice final : public SliceFunction {
 public:
  LinearSlice(double alpha, double beta) : alpha_{alpha}, beta_{beta} {}
  [[nodiscard]] double value(double t) const override { return alpha_ + beta_ * t; }
  [[nodiscard]] double integral(double lo, double hi) const override;
  [[nodiscard]] std::string describe() const override;

 private:
  double alpha_;
  double beta_;
};

/// phi(t) = (2 + cos t) / 3.
class CosineSlice final : public SliceFunction {
 public:
  [[nodiscard]] double value(double t) const override;
  [[nodiscard]] double integral(double lo, double hi) const override;
  [[nodiscard]] std::string describe() const override { return "cosine"; }
};

/// Natural cubic spline through tabulated (t, phi) samples. Integrals are exact
/// for the spline. Evaluation outside the table extrapolates the end cubic.
class TabulatedSlice final : public SliceFunction {
 public:
  TabulatedSlice(std::vector<double> t, std::vector<double> phi, std::string source = "table");

  [[nodiscard]] double value(double t) const override;
  [[nodiscard]] double integral(double lo, double hi) const override;
  [[nodiscard]] std::string describe() const override { return "tabulated:" + source_; }

 private:
  [[nodiscard]] std::size_t segment(double t) const;
  /// Integral from t_[0] to x.
  [[nodiscard]] double primitive(double x) const;

  std::vector<double> t_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
  std::vector<double> cumulative_;
  std::string source_;
};

/// Reads a two-column CSV (t, phi); '#' comment lines and a non-numeric header
/// row are skipped.
std::shared_ptr<const SliceFunction> load_tabulated_slice(const std::string& path);

/// Throws DomainError unless phi is finite and strictly positive on a
/// 2001-point grid of [lo, hi].
void require_positive(const SliceFunction& phi, double lo, double hi);

struct UniformWeight {
  double q = 0.5;
};

struct SlicedWeight {
  std::shared_ptr<const SliceFunction> phi;
};

using WeightSpec = std::variant<UniformWeight, SlicedWeight>;

}  // namespace hexdimer
