#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace caloric {

using cplx = std::complex<double>;
// Extended precision for coefficient sequences: 1/n! for n in the hundreds
// must stay representable.
using xreal = long double;
using xcplx = std::complex<long double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Base class for all numerical failures (non-convergence, truncation, ...).
/// The CLI maps these to exit code 1.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class truncation_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class convergence_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class singular_time_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class overflow_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

inline xcplx widen(cplx z) { return {z.real(), z.imag()}; }
inline cplx narrow(xcplx z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

}  // namespace caloric
