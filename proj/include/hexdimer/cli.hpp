#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "hexdimer/error.hpp"
#include "hexdimer/weights.hpp"

namespace hexdimer::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitVerification = 3 };

/// Bad or inconsistent command-line configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

/*!
  Slice profile from its catalog id:
    const:c         phi = c
    linear:al,be    phi = al + be t
    cosine          phi = (2 + cos t) / 3
    tabulated:path  two-column CSV, natural cubic spline
*/
std::shared_ptr<const SliceFunction> parse_phi(const std::string& spec);

/// One configuration of the sliced-box reference table: "cosine:a,b" is
/// phi = (2 + cos t) / 3, "linear:a,b" is phi = a + t / 2.
struct Table1Row {
  std::string id;
  double a = 1.0;
  double b = 1.0;
  std::shared_ptr<const SliceFunction> phi;
};
Table1Row parse_table1_row(const std::string& spec);

/// Entry point of the `hexdimer` tool. Results go to `out` (or --out), errors
/// to `err`; returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hexdimer::cli
