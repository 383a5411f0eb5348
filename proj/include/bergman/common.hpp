#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bergman {

using Complex = std::complex<double>;

/// A point of the open unit disk. Validity is enforced where points enter
/// the library (PointSet construction, file parsing), not on every use.
using Point = Complex;

/// A function on the disk that can be evaluated anywhere it is needed.
/// Quadrature, stencils and solvers all work with these.
using Field = std::function<Complex(Point)>;
using RealField = std::function<double(Point)>;

inline constexpr double kPi = std::numbers::pi;

/// Points this close to the unit circle are rejected.
inline constexpr double kBoundaryGuard = 1e-12;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition or parameter range.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A numerical procedure failed (ill-conditioning, non-convergence,
/// coverage hole).
class NumericError : public Error {
public:
  using Error::Error;
};

inline double one_minus_abs2(Point z) { return 1.0 - std::norm(z); }

} // namespace bergman
