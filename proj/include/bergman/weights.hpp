#pragma once

// The weight k_Z, the regularized product Psi_Z and its modulus factor
// sigma_Z, with |Psi_Z| = sigma_Z exp(k_Z).
//
// Laplacian convention: lap = d/dz d/dzbar (a quarter of the standard
// Laplacian). Under it lap k_Z(z) = 1/2 sum (1-|a|^2)^2 / |1 - conj(a) z|^4.

#include "bergman/common.hpp"
#include "bergman/geometry.hpp"

#include <span>
#include <vector>

namespace bergman {

/// Evaluator for a fixed finite sequence. Products are accumulated as sums
/// of logarithms, so sequences of a few thousand points neither overflow nor
/// underflow.
class WeightEval {
public:
  WeightEval() = default;
  explicit WeightEval(PointSet z);

  const PointSet& points() const { return z_; }

  double k(Point z) const;
  /// lap k_Z under the d dbar convention.
  double lap_k(Point z) const;

  /// log|Psi_Z(z)|; -inf exactly on Z.
  double log_abs_psi(Point z) const;
  /// A branch of log Psi_Z(z). The real part is -inf on Z.
  Complex log_psi(Point z) const;
  /// Psi_Z(z), exactly 0 on Z.
  Complex psi_value(Point z) const;

  double log_sigma(Point z) const;
  double sigma(Point z) const;

private:
  PointSet z_;
  std::vector<double> re_, im_, coef_;
};

double k_Z(const PointSet& z, Point at);
double lap_kZ(const PointSet& z, Point at);
double log_abs_Psi(const PointSet& z, Point at);
double sigma_Z(const PointSet& z, Point at);

/// Single factor E_a(z) of Psi_Z (the a = 0 factor is z e^{1/2}).
Complex E_a(Point a, Point z);

/// |exp(log|Psi_Z|) - sigma_Z e^{k_Z}| / (sigma_Z e^{k_Z}). Throws when z is in Z.
double check_Psi_identity(const PointSet& z, Point at);

struct SigmaLowerBound {
  double bound = 1.0; ///< exp(-C_eta S / 2)
  double sup_sum = 0.0; ///< S = sup over samples of sum (1 - psi(z,a)^2)^2
  double c_eta = 0.0;
};

/// Constant in log(1/x) <= 1 - x + C (1-x)^2 valid for x >= eta^2, i.e. for
/// psi(z,a) >= eta: C = sum_k (1-eta^2)^k / (k+2).
double sigma_bound_constant(double eta);

/// Lower bound for sigma_Z over points at pseudo-hyperbolic distance at
/// least eta from every point of Z. Throws DomainError if a sample is
/// closer than eta to Z.
SigmaLowerBound sigma_lower_bound(const PointSet& z, double eta, std::span<const Point> samples);

/// k_Z(z) - lambda k_{Z'}(z) - u(z), where Z' is the preimage of Z under
/// p_lambda (so Z is the outward-perturbed sequence) and u is the harmonic
/// correction sum. u(0) = 0.
/// Throws DomainError if 0 is in Z, Z has a repeated point, or a preimage
/// leaves the disk.
double perturbation_defect(const PointSet& z, double lambda, Point at);

/// The harmonic correction u alone, for the same data.
double perturbation_harmonic(const PointSet& z, double lambda, Point at);

} // namespace bergman
