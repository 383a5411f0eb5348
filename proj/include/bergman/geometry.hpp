#pragma once

// Pseudo-hyperbolic geometry of the unit disk.

#include "bergman/common.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace bergman {

/// Pseudo-hyperbolic distance |z - w| / |1 - conj(w) z|.
double psi(Point z, Point w);

/// The involutive disk automorphism z -> (a - z) / (1 - conj(a) z).
Point moebius(Point a, Point z);

/// True when |z| < 1 - kBoundaryGuard and both parts are finite.
bool inside_disk(Point z);

/// Finite sequence of disk points with multiplicities, kept in canonical
/// order (modulus, then argument) so every downstream sum is reproducible.
class PointSet {
public:
  PointSet() = default;
  /// Throws DomainError for points outside the disk or zero multiplicity.
  explicit PointSet(std::vector<Point> points, std::vector<int> multiplicities = {});

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::span<const Point> points() const { return points_; }
  std::span<const int> multiplicities() const { return mult_; }
  Point operator[](std::size_t i) const { return points_[i]; }
  int multiplicity(std::size_t i) const { return mult_[i]; }
  bool all_simple() const;
  /// Number of points counted with multiplicity.
  std::size_t total_count() const;

  bool contains(Point z) const;

  /// Image of every point under M_b (multiplicities carried along).
  PointSet moebius_image(Point b) const;
  /// Points with psi(center, a) >= radius are kept; the rest are returned
  /// in `dropped` when it is non-null.
  PointSet without_disk(Point center, double radius, PointSet* dropped = nullptr) const;
  PointSet with_point(Point a) const;

  bool operator==(const PointSet&) const = default;

private:
  std::vector<Point> points_;
  std::vector<int> mult_;
};

/// Pseudo-hyperbolic disk D(z, r).
struct PseudoDisk {
  Point center;
  double radius;
};

struct EuclideanDisk {
  Point center;
  double radius;
};

/// Euclidean center z(1-r^2)/(1-r^2|z|^2) and radius r(1-|z|^2)/(1-r^2|z|^2).
EuclideanDisk euclidean_params(const PseudoDisk& d);

/// Minimum pairwise psi; 0 when a point repeats (or has multiplicity > 1).
/// Throws DomainError when fewer than two points are given.
double separation_constant(const PointSet& z);

/// Same argument as a, with 1 - |p|^2 = lambda (1 - |a|^2).
Point p_lambda(Point a, double lambda);
/// Inverse of p_lambda; throws DomainError if the preimage leaves the disk.
Point p_lambda_inverse(Point a, double lambda);

struct CoveringNet {
  PointSet centers;
  double eta = 0.0;
  double rmax = 0.0;
  double resolution = 0.0; ///< candidate grid spacing, pseudo-hyperbolic
};

/// Greedy maximal eta/2-separated subset of a candidate grid on {|z| <= rmax}.
/// The candidate grid is polar with spacing `resolution` in the
/// pseudo-hyperbolic metric (defaults to eta/8), so candidates are uniformly
/// dense in the hyperbolic sense.
CoveringNet build_net(double eta, double rmax, double resolution = 0.0);

/// Greedy maximal sep-separated subset of the same kind of candidate grid
/// (resolution min(sep/8, 0.05)); sep may approach 1, giving sparse sets.
PointSet separated_lattice(double sep, double rmax);

/// Nearest center in psi and its distance.
struct Nearest {
  std::size_t index;
  double distance;
};
Nearest nearest_center(const PointSet& centers, Point z);

} // namespace bergman
