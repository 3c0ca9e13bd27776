#pragma once

// Oracle suites behind `hexdimer verify`.

#include <string>
#include <vector>

namespace hexdimer::verify {

struct CheckResult {
  std::string suite;
  std::string name;
  double measured = 0.0;  // observed discrepancy
  double tolerance = 0.0;
  bool pass = false;
};

/// Enumeration oracle against the MacMahon product, m, n, k <= 3 and
/// q in {0.3, 0.5, 0.9}; relative tolerance 1e-9.
std::vector<CheckResult> enumeration_vs_macmahon();

/// Normalised Kasteleyn determinant against the MacMahon product on the same
/// sweep, plus the matching count at q = 1 against the enumeration count.
std::vector<CheckResult> kasteleyn_vs_macmahon();

/// Lattice free energy against the resummed series, finite and infinite
/// height; absolute tolerance 1e-11.
std::vector<CheckResult> dual_evaluators();

/// Constant phi against the uniform infinite-height box, both for ln Z and
/// for the expansion coefficients.
std::vector<CheckResult> constant_phi_reduction();

}  // namespace hexdimer::verify
