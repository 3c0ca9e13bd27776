#pragma once

// The three geometries whose free energy is expanded in the mesh eps.

#include <memory>
#include <string>
#include <variant>

#include "hexdimer/weights.hpp"

namespace hexdimer {

/// M x N x K box with a = M eps, b = N eps, c = K eps and q = e^{-eps}.
struct FiniteBox {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
};

/// M x N box of infinite height, q = e^{-eps}.
struct InfiniteBox {
  double a = 1.0;
  double b = 1.0;
};

/// Infinite-height M x N box with slice weights q_t = e^{-eps phi(t eps)},
/// phi given on [-a, b].
struct SlicedBox {
  double a = 1.0;
  double b = 1.0;
  std::shared_ptr<const SliceFunction> phi;
};

using Scenario = std::variant<FiniteBox, InfiniteBox, SlicedBox>;

enum class ScenarioKind { kFinite, kInfinite, kSliced };

ScenarioKind kind_of(const Scenario& s);
std::string to_string(ScenarioKind kind);
/// e.g. "finite a=3 b=2 c=1" or "sliced a=1 b=3 phi=cosine".
std::string describe(const Scenario& s);

/*!
  Sign of the free energy in each scenario.

  The finite box uses f = -ln Z / V with V = 2(MN + NK + MK). The
  infinite-height and sliced boxes use f = +ln Z / (MN), which makes f0 and f2
  positive. Returns -1 or +1 respectively.
*/
double free_energy_sign(ScenarioKind kind);

/// One-line statement of the conventions above, recorded in output metadata.
std::string sign_convention_note();

}  // namespace hexdimer
