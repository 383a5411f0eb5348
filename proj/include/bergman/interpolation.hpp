#pragma once

// Interpolation on a separated sequence: the bump interpolant
//   g = sum_a c_a beta_a,
// the correction f = g - u Psi_Z with (1-|z|^2) dbar u = (1-|z|^2) dbar g / Psi_Z,
// and the construction that adds one point to an interpolating sequence.

#include "bergman/common.hpp"
#include "bergman/dbar.hpp"
#include "bergman/geometry.hpp"
#include "bergman/quad.hpp"
#include "bergman/weights.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bergman {

/// Values c_a aligned with the points of z (multiplicities must be 1).
struct TargetValues {
  PointSet z;
  std::vector<Complex> values;
};

/// Builds targets from parallel lists; PointSet orders its points
/// canonically, so the values are permuted along.
TargetValues make_targets(const std::vector<Point>& points, const std::vector<Complex>& values);

/// Throws DomainError on misalignment or repeated points.
void validate_targets(const TargetValues& c);

/// (sum |c_a|^p (1-|a|^2)^2)^{1/p}. Throws DomainError if p <= 0.
double lp_seq_norm(const TargetValues& c, double p);

/// |c_a| = 1 with uniform random phases.
TargetValues random_unit_targets(const PointSet& z, std::uint64_t seed);

/// beta_a = 1 on D(a, eta), 0 off D(a, 2 eta), quintic ramp in psi(a, .).
class BumpInterpolant {
public:
  /// Throws DomainError unless the separation of c.z exceeds 2 eta.
  BumpInterpolant(TargetValues c, double eta);

  const TargetValues& targets() const { return c_; }
  double eta() const { return eta_; }
  std::size_t size() const { return c_.values.size(); }

  /// Euclidean disk carrying D(a_i, 2 eta).
  const EuclideanDisk& support(std::size_t i) const { return disks_[i]; }
  double bump(std::size_t i, Point z) const;
  /// dbar beta_i, closed form.
  Complex bump_dbar(std::size_t i, Point z) const;

  Complex value(Point z) const;
  Complex dbar(Point z) const;

private:
  TargetValues c_;
  double eta_;
  std::vector<EuclideanDisk> disks_;
};

struct BumpReport {
  double g_norm = 0.0; ///< ||g||_p over the grid
  double c_norm = 0.0; ///< ||c||_{p,Z}
  double ratio = 0.0;
};

BumpReport bump_interpolant(const BumpInterpolant& g, double p, const DiskGrid& grid);

/// Largest ||g||_p / ||c||_{p,Z} over `count` random unit target vectors.
double bump_ensemble_max(const PointSet& z, double eta, double p, const DiskGrid& grid, int count,
                         std::uint64_t seed);

enum class SolverKind { Plain, Patched };

struct InterpolationOptions {
  double eta = 0.0; ///< bump radius; 0 picks 0.4 times the separation
  SolverKind solver = SolverKind::Plain;
  int m = 2;
  double tolerance = 5e-3;
  // patched solver: net radius and the family's drop radius (0: separation)
  double net_eta = 0.5;
  double r_drop = 0.0;
};

struct InterpolationReport {
  double p = 2.0;
  std::size_t z_count = 0;
  double eta = 0.0;
  int grid_depth = 0;
  double node_err_max = 0.0; ///< max |f(a) - c_a| / (1 + |c_a|)
  double f_norm = 0.0; ///< ||f||_p over the grid
  double c_norm = 0.0; ///< ||c||_{p,Z}
  double norm_ratio = 0.0;
  double residual = 0.0; ///< ||(1-|z|^2) dbar f|| / ||(1-|z|^2) d f||
  double correction_norm = 0.0; ///< ||u Psi_Z||_p
  double u_weighted_norm = 0.0; ///< ||u||_{p,Z}
  SolverReport solver;
  bool success = false;
  std::string message;
};

/// The dbar data (1-|z|^2) dbar beta_a / Psi_Z per point, for unit targets.
std::vector<SupportedField> correction_pieces(const BumpInterpolant& g, const WeightEval& psi);

/// Precomputes the solution of the correction equation for each unit
/// target, so that any number of target vectors is cheap.
class Interpolator {
public:
  /// Throws DomainError on a separation violation, NumericError when the
  /// patched family fails on a needed center.
  Interpolator(const PointSet& z, double p, const DiskGrid& grid, const InterpolationOptions& opt = {});

  double eta() const { return eta_; }

  struct Result {
    Field f;
    Samples values; ///< f at the grid nodes
    InterpolationReport report;
  };
  Result run(const TargetValues& c) const;

private:
  PointSet z_;
  double p_;
  const DiskGrid* grid_;
  InterpolationOptions opt_;
  double eta_;
  WeightEval psi_;
  std::vector<Field> basis_; // u for the unit target at each point
  std::vector<std::size_t> interior_; // nodes where the stencil fits
  std::vector<Complex> psi_at_;    // Psi_Z at node and stencil points, 5 per interior node
  std::vector<std::vector<Complex>> u_at_; // [point][5 * interior + s]
  std::vector<std::vector<Complex>> u_node_; // [point][node]
};

/// One-shot wrapper around Interpolator.
Interpolator::Result interpolate(const TargetValues& c, double p, const DiskGrid& grid,
                                 const InterpolationOptions& opt = {});

struct AddPointReport {
  double f0_error = 0.0; ///< |f(0) - c0|
  double node_err_max = 0.0;
  double norm_ratio = 0.0; ///< ||f||_p / ||(c, c0)||_{p, Z + 0}
  double min_distance = 0.0; ///< min psi(a0, a)
};

/// With a0 moved to 0 by M_{a0}: interpolates (c_a - c0)/a on the moved set
/// and returns f(z) = z g(z) + c0 there. Throws DomainError if some a has
/// psi(a0, a) <= eta.
AddPointReport add_point(const TargetValues& c, Point a0, Complex c0, double eta, double p, const DiskGrid& grid,
                         const InterpolationOptions& opt = {});

std::string interpolation_csv_header();
std::string interpolation_csv_row(const InterpolationReport& r);

} // namespace bergman
