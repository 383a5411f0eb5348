#pragma once

// Quadrature over (truncated) disks, weighted L^p norms, the Cauchy-type
// solution transform, Forelli-Rudin growth fits and local means.
//
// Grids are polar: midpoint rule in s = r^2 (so every ring has the same
// area) and uniform in the angle. Integrands with a point singularity are
// handled by a smooth cutoff split: chi (a C-infinity bump of radius
// rho_L around the singular point) times the integrand is integrated on
// graded rings centred at the singularity, and (1 - chi) times the integrand,
// which is smooth, on the global grid.
//
// dbar convention: d/dzbar = (d/dx + i d/dy) / 2.

#include "bergman/common.hpp"
#include "bergman/geometry.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bergman {

/// Values of a function at the nodes of a grid, in node order.
using Samples = std::vector<Complex>;

/// Nodes and weights of the local rule around a singular point. Offsets
/// are relative to the singular point; weights already contain the polar
/// Jacobian and the cutoff chi.
struct LocalRule {
  std::vector<Complex> offsets;
  std::vector<double> weights;
  double cutoff = 0.0; ///< rho_L
};

class DiskGrid {
public:
  DiskGrid() = default;

  /// Polar grid on {|z| < rmax}, 0 < rmax <= 1. n_angular = 0 picks an
  /// angular count that makes outer cells roughly square.
  static DiskGrid polar(double rmax, int n_radial, int n_angular = 0);
  /// Arbitrary node set (used when a grid is restored from a dump).
  static DiskGrid from_nodes(std::vector<Point> nodes, std::vector<double> weights, double rmax);

  std::size_t size() const { return re_.size(); }
  Point node(std::size_t i) const { return {re_[i], im_[i]}; }
  double weight(std::size_t i) const { return w_[i]; }
  std::span<const double> re() const { return re_; }
  std::span<const double> im() const { return im_; }
  std::span<const double> weights() const { return w_; }
  double rmax() const { return rmax_; }
  bool is_polar() const { return n_radial_ > 0; }
  int n_radial() const { return n_radial_; }
  int n_angular() const { return n_angular_; }
  double total_weight() const;

  /// Representative node spacing near z.
  double cell_size_at(Point z) const;

  /// Calls fn(i) for every node with |node - z| < radius.
  template <class Fn>
  void visit_near(Point z, double radius, Fn&& fn) const;

  // Singular refinement metadata.
  std::vector<Point> singular_points;
  int refinement_depth = 2;
  double cutoff_cells = 8.0; ///< rho_L in units of the local cell size

  double cutoff_radius(Point z) const;
  LocalRule local_rule(Point z) const;
  LocalRule local_rule(Point z, double cutoff) const;

  bool operator==(const DiskGrid& o) const {
    return re_ == o.re_ && im_ == o.im_ && w_ == o.w_ && rmax_ == o.rmax_;
  }

private:
  friend DiskGrid read_grid(std::istream& is);
  std::vector<double> re_, im_, w_;
  double rmax_ = 0.0;
  int n_radial_ = 0;
  int n_angular_ = 0;
};

/// Polar grid plus graded refinement rings around each singular point.
/// Throws DomainError if n_radial < 4 or rmax is not in (0, 1].
DiskGrid build_grid(double rmax, int n_radial, std::vector<Point> singular_points = {}, int depth = 2);

/// Smooth cutoff: 1 near 0, 0 for rho >= cutoff, C-infinity in between.
double smooth_cutoff(double rho, double cutoff);

Samples sample(const DiskGrid& grid, const Field& f);

/// Integral of a smooth integrand. When the grid carries singular points,
/// the cutoff split is applied around each of them.
Complex integrate(const DiskGrid& grid, const Field& f);
double integrate_real(const DiskGrid& grid, const RealField& f);
/// Integral of an integrand with a point singularity at s.
Complex integrate_singular(const DiskGrid& grid, const Field& f, Point s);

/// Two-point extrapolation to the full disk in t = 1 - r^2 assuming
/// I(t) = I_inf + c t^order.
double richardson_full_disk(double r1, double i1, double r2, double i2, double order = 1.0);

/// (integral of |f e^{k_Z}|^p dA)^{1/p} over the grid. Throws DomainError
/// on non-finite samples or p <= 0.
double lp_norm(std::span<const Complex> f, const PointSet& z, double p, const DiskGrid& grid);

/// Rule for integrals over `disk` of functions with a 1/|w - pole|
/// singularity: rays from the pole when it is inside or near the disk,
/// otherwise a disk-centred product rule. Offsets are relative to the pole.
/// Orders grow with depth.
LocalRule pole_rule(Point pole, const EuclideanDisk& disk, int depth);

/// v(z) = (1/pi) integral phi(w) (1-|w|^2)^m / ((z-w)(1-conj(w) z)^m) dA(w),
/// which satisfies dbar v = phi for compactly supported phi.
///
/// Grid form: phi must vanish outside the grid disk; node values are sampled
/// once and compressed to the nonzero ones, and the cutoff split handles the
/// neighbourhood of z.
///
/// Support form: phi vanishes outside the Euclidean disk `support`. Points
/// far from the support use a fixed product rule on the disk (sampled once);
/// nearby points use polar rules centred at z, whose orders grow with the
/// grid's refinement depth. This form is far more accurate for smooth phi.
class CauchyTransform {
public:
  CauchyTransform(const DiskGrid& grid, Field phi, int m);
  CauchyTransform(const DiskGrid& grid, Field phi, int m, const EuclideanDisk& support);
  /// Throws DomainError if |z| > grid rmax.
  Complex operator()(Point z) const;
  std::size_t active_nodes() const { return re_.size(); }

private:
  Complex eval_grid(Point z) const;
  Complex eval_support(Point z) const;

  const DiskGrid* grid_;
  Field phi_;
  int m_;
  bool use_support_ = false;
  EuclideanDisk support_{};
  std::vector<std::size_t> idx_;
  std::vector<double> re_, im_, cre_, cim_;
  double bbox_[4] = {0, 0, 0, 0}; // xmin xmax ymin ymax of active nodes
};

Complex cauchy_transform(const Field& phi, int m, Point z, const DiskGrid& grid);

enum class FrVariant { Plain, Singular };

/// I(z) = integral (1-|w|^2)^beta / (|1-conj(w) z|^{M+2}) dA(w)        (plain)
/// I(z) = integral (1-|w|^2)^beta / (|z-w| |1-conj(w) z|^{M+1}) dA(w)  (singular)
/// over the full disk, computed after the substitution w = M_z(zeta), which
/// is exact and removes the point singularity.
double forelli_rudin_integral(double beta, double M, FrVariant variant, double radius);

struct FrFit {
  double slope = 0.0;
  std::vector<double> radii;
  std::vector<double> values;
};

/// Least-squares slope of log I(z) against log(1-|z|^2) for
/// |z| in {0.9, 0.95, 0.99, 0.995}. Expected to approach beta - M.
/// Throws DomainError unless -1 < beta < M.
FrFit forelli_rudin_check(double beta, double M, FrVariant variant);

struct LocalMeanSpec {
  double q = 1.0; ///< q >= 1
  double radius = 0.5; ///< pseudo-hyperbolic radius in (0,1)
};

/// m_q with an explicit polar product rule on the Euclidean disk D(z, R);
/// no coverage check.
double local_mean_rule(const Field& f, const LocalMeanSpec& spec, Point z, int n_rad, int n_ang);

/// m_q(f, z) = ((1/|D|) integral_D |f|^q dA)^{1/q}, D = D(z, R).
/// Throws DomainError if D(z,R) leaves the grid disk or spec is invalid.
double local_mean(const Field& f, const LocalMeanSpec& spec, Point z, const DiskGrid& grid);

/// sum_k (1-|z_k|^2)^2 m_q(f, z_k)^p over the net centers. The net must be
/// built with eta = R/2.
double discrete_norm(const Field& f, const LocalMeanSpec& spec, double p, const CoveringNet& net,
                     const DiskGrid& grid);

/// integral of m_q(f)^p dA over the grid.
double continuous_local_mean_norm(const Field& f, const LocalMeanSpec& spec, double p, const DiskGrid& grid);

/// Grid dump: "# grid rmax n_radial n_angular" header, then "re im weight"
/// per line, with round-trip precision.
void write_grid(std::ostream& os, const DiskGrid& grid);
DiskGrid read_grid(std::istream& is);

// ---------------------------------------------------------------------------

template <class Fn>
void DiskGrid::visit_near(Point z, double radius, Fn&& fn) const {
  if (!is_polar()) {
    const double r2 = radius * radius;
    for (std::size_t i = 0; i < size(); ++i) {
      if (std::norm(node(i) - z) < r2) fn(i);
    }
    return;
  }
  const double ds = rmax_ * rmax_ / n_radial_;
  const double rz = std::abs(z);
  const double lo = std::max(0.0, rz - radius), hi = rz + radius;
  int k0 = static_cast<int>(std::floor(lo * lo / ds)) - 1;
  int k1 = static_cast<int>(std::ceil(hi * hi / ds)) + 1;
  k0 = std::max(k0, 0);
  k1 = std::min(k1, n_radial_ - 1);
  const double dth = 2.0 * kPi / n_angular_;
  const double r2 = radius * radius;
  for (int k = k0; k <= k1; ++k) {
    const double rk = std::sqrt((k + 0.5) * ds);
    const std::size_t base = static_cast<std::size_t>(k) * n_angular_;
    if (rk <= radius || rz == 0.0) {
      for (int j = 0; j < n_angular_; ++j) {
        if (std::norm(node(base + j) - z) < r2) fn(base + j);
      }
      continue;
    }
    const double ratio = radius / rk;
    const double half = ratio >= 1.0 ? kPi : std::asin(ratio) * 1.6 + dth;
    if (half >= kPi) {
      for (int j = 0; j < n_angular_; ++j) {
        if (std::norm(node(base + j) - z) < r2) fn(base + j);
      }
      continue;
    }
    const double th = std::arg(z);
    // angular nodes sit at (j + 0.5) dth
    const int j0 = static_cast<int>(std::floor((th - half) / dth - 0.5));
    const int j1 = static_cast<int>(std::ceil((th + half) / dth - 0.5));
    for (int jj = j0; jj <= j1; ++jj) {
      int j = jj % n_angular_;
      if (j < 0) j += n_angular_;
      if (std::norm(node(base + j) - z) < r2) fn(base + j);
    }
  }
}

} // namespace bergman
