#include "hexdimer/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hexdimer/error.hpp"

namespace hexdimer {

namespace {

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::string ConstantSlice::describe() const { return "const:" + format_number(c_); }

double LinearSlice::integral(double lo, double hi) const {
  return alpha_ * (hi - lo) + 0.5 * beta_ * (hi * hi - lo * lo);
}

std::string LinearSlice::describe() const {
  return "linear:" + format_number(alpha_) + "," + format_number(beta_);
}

double CosineSlice::value(double t) const { return (2.0 + std::cos(t)) / 3.0; }

double CosineSlice::integral(double lo, double hi) const {
  return (2.0 * (hi - lo) + std::sin(hi) - std::sin(lo)) / 3.0;
}

TabulatedSlice::TabulatedSlice(std::vector<double> t, std::vector<double> phi, std::string source)
    : t_{std::move(t)}, y_{std::move(phi)}, source_{std::move(source)} {
  const std::size_t n = t_.size();
  if (n < 3 || y_.size() != n) {
    throw DomainError("tabulated phi needs at least 3 (t, phi) rows");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(t_[i] > t_[i - 1])) {
      throw DomainError("tabulated phi: t must be strictly increasing");
    }
  }
  // Natural spline: tridiagonal system for the interior second derivatives.
  m_.assign(n, 0.0);
  std::vector<double> diag(n, 0.0);
  std::vector<double> rhs(n, 0.0);
  std::vector<double> upper(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = t_[i] - t_[i - 1];
    const double h1 = t_[i + 1] - t_[i];
    diag[i] = (h0 + h1) / 3.0;
    upper[i] = h1 / 6.0;
    rhs[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
  }
  // Thomas algorithm on rows 1..n-2 (m_0 = m_{n-1} = 0).
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double lower = (t_[i] - t_[i - 1]) / 6.0;
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
    if (i == 1) break;
  }
  cumulative_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = t_[i + 1] - t_[i];
    cumulative_[i + 1] =
        cumulative_[i] + 0.5 * h * (y_[i] + y_[i + 1]) - h * h * h * (m_[i] + m_[i + 1]) / 24.0;
  }
}

std::size_t TabulatedSlice::segment(double t) const {
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const auto idx = static_cast<std::size_t>(std::distance(t_.begin(), it));
  return std::clamp<std::size_t>(idx == 0 ? 0 : idx - 1, 0, t_.size() - 2);
}

double TabulatedSlice::value(double t) const {
  const std::size_t i = segment(t);
  const double h = t_[i + 1] - t_[i];
  const double a = t_[i + 1] - t;
  const double b = t - t_[i];
  return m_[i] * a * a * a / (6.0 * h) + m_[i + 1] * b * b * b / (6.0 * h) +
         (y_[i] / h - m_[i] * h / 6.0) * a + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b;
}

double TabulatedSlice::primitive(double x) const {
  const std::size_t i = segment(x);
  const double h = t_[i + 1] - t_[i];
  const double a = t_[i + 1] - x;
  const double b = x - t_[i];
  const double partial = m_[i] * (h * h * h * h - a * a * a * a) / (24.0 * h) +
                         m_[i + 1] * b * b * b * b / (24.0 * h) +
                         (y_[i] / h - m_[i] * h / 6.0) * (h * h - a * a) / 2.0 +
                         (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b * b / 2.0;
  return cumulative_[i] + partial;
}

double TabulatedSlice::integral(double lo, double hi) const { return primitive(hi) - primitive(lo); }

std::shared_ptr<const SliceFunction> load_tabulated_slice(const std::string& path) {
  std::ifstream in{path};
  if (!in) {
    throw DomainError("cannot open tabulated phi file: " + path);
  }
  std::vector<double> t;
  std::vector<double> phi;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row{line};
    double x = 0.0;
    double y = 0.0;
    if (!(row >> x >> y)) {
      if (t.empty()) continue;  // header
      throw DomainError("malformed row in " + path + ": " + line);
    }
    t.push_back(x);
    phi.push_back(y);
  }
  return std::make_shared<TabulatedSlice>(std::move(t), std::move(phi), path);
}

void require_positive(const SliceFunction& phi, double lo, double hi) {
  constexpr int kPoints = 2000;
  for (int i = 0; i <= kPoints; ++i) {
    const double t = lo + (hi - lo) * i / kPoints;
    const double v = phi.value(t);
    if (!std::isfinite(v) || !(v > 0.0)) {
      std::ostringstream os;
      os << "phi must be positive on [" << lo << ", " << hi << "]; phi(" << t << ") = " << v;
      throw DomainError(os.str());
    }
  }
}

}  // namespace hexdimer
