#pragma once

#include <functional>

namespace hexdimer {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int intervals = 0;
};

/*!
  Globally adaptive 15-point Gauss-Kronrod quadrature.

  The interval with the largest error estimate |K15 - G7| is bisected until the
  summed estimate drops below max(abs_tol, rel_tol * |integral|). Throws
  NumericalError, reporting the tolerance reached, when `max_intervals` is hit.
*/
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double abs_tol, double rel_tol, int max_intervals = 4000);

}  // namespace hexdimer
