#pragma once

// Densities of a sequence and the subharmonic-weight criteria.
//
// Laplacian convention: lap = d dbar, so lap log 1/(1-|z|^2) = 1/(1-|z|^2)^2
// and, by Green's formula, for u(0) = 0
//   (1/2pi) int u(r e^{it}) dt = (1/pi) int_{|z|<r} lap u log(r^2/|z|^2) dA.

#include "bergman/common.hpp"
#include "bergman/geometry.hpp"
#include "bergman/quad.hpp"
#include "bergman/weights.hpp"

#include <functional>
#include <string>
#include <vector>

namespace bergman {

/// max over centers b of sum_{a in M_b(Z), |a| < r} (1-|a|^2)/2, divided by
/// log 1/(1-r^2). Throws DomainError unless 0 < r < 1.
double dplus(const PointSet& z, double r, const PointSet& centers);

/// Same with the numerator sum_{a in M_b(Z), 1/2 < |a| < r} log 1/|a|.
double dplus_log_count(const PointSet& z, double r, const PointSet& centers);

/// (1/2pi) int k_Z(r e^{it}) dt = (r^2/2) sum (1-|a|^2)^2 / (1 - |a|^2 r^2).
double splus_circle_mean(const PointSet& z, double r);

/// The same mean by the n-point trapezoid rule.
double splus_circle_quadrature(const PointSet& z, double r, int n = 4096);

/// 1 - p max_w S(M_w Z, r) / log 1/(1-r^2); positive when the criterion holds.
double seip_criterion_means(const PointSet& z, double p, double r, const PointSet& centers);

struct LaplaceMeans {
  double lhs = 0.0; ///< p (1/pi) int_{D(w,r)} lap k_Z log(r^2/|M_w z|^2) dA, max over w
  double rhs = 0.0; ///< (1/pi) int_{D(w,r)} (1-|z|^2)^{-2} log(r^2/|M_w z|^2) dA
  double margin = 0.0; ///< 1 - lhs / rhs
};

/// Both sides by quadrature in the pseudo-hyperbolic disks D(w, rstar).
LaplaceMeans seip_criterion_laplace(const PointSet& z, double p, double rstar, const PointSet& centers);

struct DensityRow {
  double r = 0.0;
  std::size_t center_id = 0;
  double numerator = 0.0; ///< sum (1-|a|^2)/2 over M_b(Z) in D(0, r)
  double denominator = 0.0; ///< log 1/(1-r^2)
  double value = 0.0;
  double margin = 0.0; ///< means criterion at this center
};

struct DensityReport {
  double p = 2.0;
  std::vector<double> r;
  std::vector<DensityRow> rows;
  std::vector<double> dplus_by_r; ///< max over centers
  std::vector<double> margin_by_r; ///< min over centers
  double density = 0.0; ///< dplus at the largest r
};

DensityReport density_report(const PointSet& z, double p, const std::vector<double>& r, const PointSet& centers);

std::string density_csv_header();
std::string density_csv_rows(const DensityReport& rep);

/// (1/(pi log 1/(1-r*^2))) int_{D(w,r*)} g log(r*^2/|M_w z|^2) dlambda; equals g
/// for constant g.
double invariant_average(const std::function<double(Point)>& g, Point w, double rstar);

/// phi = log 1/(1-|z|^2) - p k_Z and its invariant convolution
///   phi*(w) = (1/(pi log 1/(1-r*^2))) int_{D(w,r*)} phi log(r*^2/|M_w z|^2) dlambda,
/// dlambda = dA/(1-|z|^2)^2.
class PhiField {
public:
  PhiField(PointSet z, double p, double rstar);

  const PointSet& points() const { return weights_.points(); }
  double p() const { return p_; }
  double rstar() const { return rstar_; }

  double phi(Point z) const;
  /// (1-|z|^2)^2 lap phi = 1 - p (1-|z|^2)^2 lap k_Z.
  double invariant_laplacian(Point z) const;
  /// No coverage check.
  double star(Point w) const;

private:
  WeightEval weights_;
  double p_;
  double rstar_;
};

/// phi*(w); throws DomainError if D(w, r*) leaves the grid disk.
double phi_star(const PhiField& field, Point w, const DiskGrid& grid);

struct LaplacianCheck {
  double min_val = 0.0;
  double max_val = 0.0;
  double min_refined = 0.0; ///< with half the stencil step
  double max_refined = 0.0;
  std::size_t nodes = 0;
  bool noisy = false; ///< extremes moved by more than 10% under refinement
};

/// (1-|w|^2)^2 lap phi* by the 5-point stencil divided by 4, step
/// h = 0.02 (1-|w|^2), over the grid nodes w with D(w, r*) and the stencil
/// inside the grid disk and |w| <= inner (all nodes when inner <= 0).
LaplacianCheck phi_star_laplacian_check(const PhiField& field, const DiskGrid& grid, double inner = 0.0);

/// sup over the same nodes of |phi*(w) - phi(w)|.
double phi_star_deviation(const PhiField& field, const DiskGrid& grid, double inner = 0.0);

/// min over centers b of int_{D(b, r*)} lap phi dA. Throws DomainError if a
/// disk leaves the grid disk.
double ortega_condition(const PhiField& field, double rstar, const PointSet& centers, const DiskGrid& grid);

} // namespace bergman
