#pragma once

#include <cmath>

namespace hexdimer {

/*!
  Compensated (Neumaier) accumulator.

  Tracks the low-order bits lost by each addition and folds them back in when
  the value is read. Unlike plain Kahan summation it stays accurate when an
  addend is larger in magnitude than the running sum, which happens in the
  alternating logarithm sums of the MacMahon product.
*/
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_{initial} {}

  CompensatedSum& operator+=(double value) {
    const double t = sum_ + value;
    if (std::fabs(sum_) >= std::fabs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  CompensatedSum& operator-=(double value) { return *this += -value; }

  [[nodiscard]] double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace hexdimer
