#pragma once

// (1-|z|^2) dbar u = f with dbar = (d/dx + i d/dy)/2: the plain Cauchy-type
// solver, the patched operator
//   u(z) = sum_j g_j(z) (1/pi) int beta_j f / g_j (1-|w|^2)^{m-1} / ((z-w)(1-conj(w) z)^m) dA(w)
// and the finite-difference residual.

#include "bergman/common.hpp"
#include "bergman/extremal.hpp"
#include "bergman/geometry.hpp"
#include "bergman/quad.hpp"

#include <memory>
#include <string>
#include <vector>

namespace bergman {

/// C^2 ramp: 1 for t <= 0, 0 for t >= 1, quintic in between.
double quintic_ramp(double t);

class PartitionOfUnity {
public:
  PartitionOfUnity() = default;
  PartitionOfUnity(CoveringNet net, double eta);

  const CoveringNet& net() const { return net_; }
  double eta() const { return eta_; }
  std::size_t size() const { return net_.centers.size(); }
  /// Euclidean disk carrying D(a_j, eta).
  const EuclideanDisk& support(std::size_t j) const { return disks_[j]; }

  /// Raw bump: 1 on D(a_j, eta/2), 0 off D(a_j, eta), ramp in psi.
  double raw(std::size_t j, Point z) const;
  double sum_raw(Point z) const;
  /// beta_j = b_j / sum_k b_k; 0 where no bump reaches.
  double beta(std::size_t j, Point z) const;

  double max_sum_error = 0.0; ///< max |sum beta_j - 1| on the grid
  double gradient_constant = 0.0; ///< max |grad beta_j| (1-|a_j|) by central differences

private:
  CoveringNet net_;
  double eta_ = 0.0;
  std::vector<EuclideanDisk> disks_;
  std::vector<std::vector<std::size_t>> neighbours_; // bumps overlapping bump j, j included
};

/// Bumps of radius eta = net.eta (so the eta/2 cores cover). Throws
/// NumericError if some grid node is reached by no bump.
PartitionOfUnity build_partition(const CoveringNet& net, const DiskGrid& grid);

struct SolverReport {
  double p = 2.0;
  std::size_t z_count = 0;
  int m = 2;
  int grid_depth = 0;
  int n_radial = 0;
  double rmax = 0.0;
  double residual_norm = 0.0;
  double input_norm = 0.0; ///< ||f||_{p,Z}
  double solution_norm = 0.0; ///< ||u||_{p,Z}
  double residual_ratio = 0.0;
  double bound_ratio = 0.0;
  double tolerance = 5e-3;
  bool success = false;
  std::string message;
};

struct DbarSolution {
  Field u;
  Samples values; ///< u at the grid nodes
  SolverReport report;
};

/// f with compact support in the Euclidean disk `support`.
struct SupportedField {
  Field f;
  EuclideanDisk support;
};

/// ||(1-|z|^2) dbar u - f||_2 / ||f||_2 over grid nodes at least 2h inside
/// the grid disk, dbar by central differences with step h. Returns the
/// absolute residual norm when ||f|| = 0.
double residual(const Field& u, const Field& f, const DiskGrid& grid, double h = 1e-3);

/// The solution operators as fields, for data given as a sum of pieces with
/// their own supports. No residual or norm evaluation.
Field plain_transform(const std::vector<SupportedField>& pieces, int m, const DiskGrid& grid);
Field patched_transform(const std::vector<SupportedField>& pieces, const GaFamily& family,
                        const PartitionOfUnity& partition, int m, const DiskGrid& grid);

/// Sum of the pieces, each evaluated only inside its support.
Field sum_of_pieces(const std::vector<SupportedField>& pieces);

/// u = cauchy transform of f / (1-|w|^2) with kernel power m.
DbarSolution solve_plain(const SupportedField& f, int m, const PointSet& z, double p, const DiskGrid& grid,
                         double tolerance = 5e-3);

/// Patched solution; the family must be built on the partition's net.
/// Centers whose bump misses the support of f are skipped; a flagged
/// center that is needed makes the solve fail with NumericError.
DbarSolution solve_patched(const SupportedField& f, const PointSet& z, double p, const GaFamily& family,
                           const PartitionOfUnity& partition, int m, const DiskGrid& grid, double tolerance = 5e-3);

DbarSolution solve_plain(const std::vector<SupportedField>& pieces, int m, const PointSet& z, double p,
                         const DiskGrid& grid, double tolerance = 5e-3);
DbarSolution solve_patched(const std::vector<SupportedField>& pieces, const PointSet& z, double p,
                           const GaFamily& family, const PartitionOfUnity& partition, int m, const DiskGrid& grid,
                           double tolerance = 5e-3);

std::string solver_csv_header();
std::string solver_csv_row(const SolverReport& r);

} // namespace bergman
