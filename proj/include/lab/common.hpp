#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace lab {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;

// Validation failures (bad windows, bad configs).
struct InvalidArgumentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grid/matrix size caps exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver non-convergence, quadrature residual too large, etc.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double sq(double x) { return x * x; }

}  // namespace lab
