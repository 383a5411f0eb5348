#pragma once

// One-dimensional rules used by the disk quadratures.

#include <functional>
#include <vector>

namespace bergman {

struct GaussRule {
  std::vector<double> x; ///< nodes on [-1, 1]
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
const GaussRule& gauss_legendre(int n);

/// Fixed tanh-sinh rule on (0, 1) with step h; nodes whose weight falls
/// below 1e-18 are dropped. Handles log endpoint singularities.
const GaussRule& tanh_sinh_unit(double h = 1.0 / 16.0);

/// Adaptive double-exponential quadrature on [a, b]; tolerates integrable
/// endpoint singularities.
double integrate_de(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

/// Trapezoid rule on [0, 2 pi) for a periodic function of the angle,
/// with n equally spaced nodes. Returns the integral (not the mean).
double periodic_trapezoid(const std::function<double(double)>& f, int n);

/// Number of trapezoid nodes that resolves |1 - q e^{i theta}|^{-s} style
/// integrands to double precision: the Fourier tail decays like q^n.
int trapezoid_nodes_for(double q, int min_nodes = 32, int max_nodes = 200000);

} // namespace bergman
