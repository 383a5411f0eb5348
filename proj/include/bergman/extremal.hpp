#pragma once

// Extremal functions: maximize |f(0)| subject to ||f||_p <= 1 with a
// prescribed zero set W, the stationarity identity
//   int |f|^p u dA = u(0)  for harmonic u,
// growth bounds and the g_a family.

#include "bergman/common.hpp"
#include "bergman/geometry.hpp"
#include "bergman/quad.hpp"
#include "bergman/weights.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bergman {

enum class ZeroFactor { Psi, Blaschke };

/// f(z) = Z_W(z) P(z) exp(q(z)), Z_W = Psi_W (default) or the Blaschke
/// product prod (conj(a)/|a|) M_a(z). P is empty for the exp-polynomial
/// family (P = 1).
struct AnalyticModel {
  PointSet zeros;
  std::vector<Complex> expcoeffs{Complex{}};
  std::vector<Complex> polycoeffs;
  ZeroFactor factor = ZeroFactor::Psi;
};

class ModelEval {
public:
  explicit ModelEval(const AnalyticModel& m);
  /// log|f(z)|, -inf on the zeros.
  double log_abs(Point z) const;
  Complex value(Point z) const;

private:
  AnalyticModel m_;
  WeightEval we_;
};

Field model_field(const AnalyticModel& m);

/// (integral over the grid of |f|^p)^{1/p}, computed in log space.
double model_norm(const AnalyticModel& m, double p, const DiskGrid& grid);

struct ExtremalSolution {
  AnalyticModel model;
  double value = 0.0; ///< |f(0)|
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  std::vector<std::string> warnings;
};

/// p = 2 over f = G_W g with g a polynomial of degree <= d, by the Gram
/// matrix of the monomials under |G_W|^2 dA. Warns when g has a root in
/// |z| <= grid rmax. Throws DomainError if 0 is in W and NumericError if the
/// Gram matrix has condition number above 1e12.
ExtremalSolution solve_extremal_p2(const PointSet& w, int degree, const DiskGrid& grid);

struct ExtremalOptions {
  int max_iterations = 5000;
  double tolerance = 1e-10; ///< on the objective decrease per step
  Complex initial_q0{};
};

/// Maximizes log|f(0)| over f = Psi_W exp(q), deg q <= d, ||f||_p = 1. The
/// objective  Re q(0) - (1/p) log int |f|^p  is concave and invariant under
/// q -> q + c, so it is maximized by damped Newton steps on the
/// coefficients of degree >= 1; q_0 then fixes the norm.
/// Throws DomainError if 0 is in W or p <= 0.
ExtremalSolution solve_extremal_general(const PointSet& w, double p, int degree, const DiskGrid& grid,
                                        const ExtremalOptions& opt = {});

/// |int |f|^p u_k dA - u_k(0)| for u in {1, Re z, Im z, ..., Re z^kmax, Im z^kmax}.
std::vector<double> harm_eval_check(const AnalyticModel& f, double p, int kmax, const DiskGrid& grid);

struct GrowthReport {
  double c = 0.0; ///< sup |f|^p (1-|z|^2)
  double c_prime = 0.0; ///< sup |f / Psi_Z|^p e^{p k_Z} (1-|z|^2)
  std::vector<double> rmax;
  std::vector<double> c_by_rmax, c_prime_by_rmax;
  bool stable = false; ///< both change by less than 5% between the radii
};

/// Suprema over boundary-refined polar samples at rmax in {0.99, 0.995}.
GrowthReport growth_check(const AnalyticModel& f, const PointSet& z, double p);

/// Removes `drop` from the zeros (multiplicities count). Throws DomainError
/// unless drop is contained in f.zeros.
AnalyticModel divide_out_zeros(const AnalyticModel& f, const PointSet& drop);

struct GaCenter {
  Point a{};
  bool ok = false;
  std::string error;
  PointSet dropped;
  std::vector<Complex> q; ///< extremal exponent for the shifted set
  std::vector<Complex> h; ///< harmonic correction, Re h ~ k_{M_a Z} - k_Z o M_a
  double fit_residual = 0.0; ///< max |Re h - (k_{M_a Z} - k_Z o M_a)| on the fit disk
  double delta = 0.0; ///< min |g_a e^{k_Z}| on D(a, eta)
  double c = 0.0; ///< sup |g_a e^{k_Z}|^p (1 - |M_a z|^2)^{1-eps}
  int iterations = 0;
};

struct GaOptions {
  double lambda = 0.9;
  int degree = 8;
  int h_degree = 10;
  double h_fit_radius = 0.9;
  int n_radial = 48;
  double rmax = 0.99;
  /// When set, centers whose D(a, eta) misses this disk are skipped
  /// (recorded as not built).
  std::optional<EuclideanDisk> region;
};

/// g_a(z) = exp(q(M_a z) + h(M_a z)) for each net center a.
struct GaFamily {
  PointSet z;
  double p = 0.0;
  double eps = 0.0;
  double eta = 0.0;
  double delta = 0.0; ///< min over successful centers
  double c = 0.0; ///< max over successful centers
  std::vector<GaCenter> centers;

  Complex log_g(std::size_t j, Point at) const;
  Complex g(std::size_t j, Point at) const { return std::exp(log_g(j, at)); }
};

/// eta is net.eta. For each center a: Z_a = M_a(Z), drop the points of Z_a in D(0, r_drop),
/// solve the extremal problem with exponent p/lambda on the rest, fit the
/// harmonic correction and measure delta and C. Failures are recorded per
/// center.
GaFamily build_ga_family(const PointSet& z, double p, const CoveringNet& net, double r_drop,
                         const GaOptions& opt = {});

} // namespace bergman
