#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace aplab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Error categories mirrored by the C API status codes.
enum class ErrorCode {
  InvalidArgument = 1,
  EvalError = 2,
  SchemaError = 3,
  NumericalError = 4,   // near-integer validation failed, degenerate input, ...
  IoError = 5,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Relative difference with a unit floor, used by convergence checks on
/// quantities that may legitimately sit at roundoff level.
inline double rel_diff(double a, double b) {
  double m = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) / m;
}

}  // namespace aplab
