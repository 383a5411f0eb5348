#include "bergman/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace bergman {

double psi(Point z, Point w) {
  const Complex den = 1.0 - std::conj(w) * z;
  return std::abs(z - w) / std::abs(den);
}

Point moebius(Point a, Point z) { return (a - z) / (1.0 - std::conj(a) * z); }

bool inside_disk(Point z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag()) && std::abs(z) < 1.0 - kBoundaryGuard;
}

namespace {

bool canonical_less(Point a, Point b) {
  const double ma = std::norm(a), mb = std::norm(b);
  if (ma != mb) return ma < mb;
  return std::arg(a) < std::arg(b);
}

} // namespace

PointSet::PointSet(std::vector<Point> points, std::vector<int> multiplicities) {
  if (multiplicities.empty()) multiplicities.assign(points.size(), 1);
  if (multiplicities.size() != points.size()) {
    throw DomainError("PointSet: multiplicity list length does not match point list");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!inside_disk(points[i])) throw DomainError("PointSet: point outside the open unit disk");
    if (multiplicities[i] < 1) throw DomainError("PointSet: multiplicities must be positive");
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return canonical_less(points[i], points[j]); });
  points_.reserve(points.size());
  mult_.reserve(points.size());
  for (auto i : order) {
    points_.push_back(points[i]);
    mult_.push_back(multiplicities[i]);
  }
}

bool PointSet::all_simple() const {
  return std::all_of(mult_.begin(), mult_.end(), [](int m) { return m == 1; });
}

std::size_t PointSet::total_count() const {
  return std::accumulate(mult_.begin(), mult_.end(), std::size_t{0});
}

bool PointSet::contains(Point z) const {
  return std::find(points_.begin(), points_.end(), z) != points_.end();
}

PointSet PointSet::moebius_image(Point b) const {
  std::vector<Point> img;
  img.reserve(points_.size());
  for (auto a : points_) img.push_back(moebius(b, a));
  return PointSet(std::move(img), mult_);
}

PointSet PointSet::without_disk(Point center, double radius, PointSet* dropped) const {
  std::vector<Point> kept, gone;
  std::vector<int> kept_m, gone_m;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (psi(center, points_[i]) < radius) {
      gone.push_back(points_[i]);
      gone_m.push_back(mult_[i]);
    } else {
      kept.push_back(points_[i]);
      kept_m.push_back(mult_[i]);
    }
  }
  if (dropped) *dropped = PointSet(std::move(gone), std::move(gone_m));
  return PointSet(std::move(kept), std::move(kept_m));
}

PointSet PointSet::with_point(Point a) const {
  std::vector<Point> pts(points_.begin(), points_.end());
  std::vector<int> m(mult_.begin(), mult_.end());
  pts.push_back(a);
  m.push_back(1);
  return PointSet(std::move(pts), std::move(m));
}

EuclideanDisk euclidean_params(const PseudoDisk& d) {
  const double r2 = d.radius * d.radius;
  const double z2 = std::norm(d.center);
  const double den = 1.0 - r2 * z2;
  return {d.center * ((1.0 - r2) / den), d.radius * (1.0 - z2) / den};
}

double separation_constant(const PointSet& z) {
  if (z.total_count() < 2) throw DomainError("separation_constant: need at least two points");
  if (!z.all_simple()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) best = std::min(best, psi(z[i], z[j]));
  }
  return best;
}

Point p_lambda(Point a, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("p_lambda: lambda must lie in (0,1)");
  if (a == Complex{}) return a;
  const double mod = std::sqrt(1.0 - lambda * one_minus_abs2(a));
  return std::polar(mod, std::arg(a));
}

Point p_lambda_inverse(Point a, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("p_lambda_inverse: lambda must lie in (0,1)");
  if (a == Complex{}) return a;
  const double t = one_minus_abs2(a) / lambda;
  if (t >= 1.0) throw DomainError("p_lambda_inverse: preimage leaves the disk");
  return std::polar(std::sqrt(1.0 - t), std::arg(a));
}

namespace {

// Euclidean bucket grid for neighbour queries. psi(z,w) >= |z-w|/2, so every
// center within psi < r of z lies within Euclidean distance 2r.
class BucketGrid {
public:
  explicit BucketGrid(double cell) : cell_(cell) {}

  void insert(Point z, std::size_t id) { buckets_[key(cell_of(z.real()), cell_of(z.imag()))].push_back(id); }

  template <class Fn>
  void visit(Point z, double radius, Fn&& fn) const {
    const long span = static_cast<long>(std::ceil(radius / cell_));
    const long cx = cell_of(z.real()), cy = cell_of(z.imag());
    for (long dx = -span; dx <= span; ++dx) {
      for (long dy = -span; dy <= span; ++dy) {
        auto it = buckets_.find(key(cx + dx, cy + dy));
        if (it == buckets_.end()) continue;
        for (auto id : it->second) fn(id);
      }
    }
  }

private:
  long cell_of(double x) const { return static_cast<long>(std::floor(x / cell_)); }
  static long long key(long x, long y) { return (static_cast<long long>(x) << 32) ^ (y & 0xffffffffLL); }

  double cell_;
  std::unordered_map<long long, std::vector<std::size_t>> buckets_;
};

} // namespace

namespace {

// Polar candidates: radial step h(1-r^2) and angular count 2 pi r / (h (1-r^2))
// give spacing ~h in psi everywhere.
std::vector<Point> hyperbolic_candidates(double resolution, double rmax) {
  std::vector<Point> candidates{Complex{}};
  double r = 0.0;
  while (true) {
    r += resolution * (1.0 - r * r);
    if (r > rmax) break;
    const int n_ang = std::max(6, static_cast<int>(std::ceil(2.0 * kPi * r / (resolution * (1.0 - r * r)))));
    for (int k = 0; k < n_ang; ++k) candidates.push_back(std::polar(r, 2.0 * kPi * k / n_ang));
  }
  std::stable_sort(candidates.begin(), candidates.end(), canonical_less);
  return candidates;
}

// psi >= sep implies nothing, but |z - w| >= 2 sep implies psi >= sep
std::vector<Point> greedy_separated(const std::vector<Point>& candidates, double sep) {
  std::vector<Point> accepted;
  BucketGrid buckets(2.0 * sep);
  for (auto c : candidates) {
    bool ok = true;
    buckets.visit(c, 2.0 * sep, [&](std::size_t id) {
      if (ok && psi(c, accepted[id]) < sep) ok = false;
    });
    if (!ok) continue;
    buckets.insert(c, accepted.size());
    accepted.push_back(c);
  }
  return accepted;
}

} // namespace

CoveringNet build_net(double eta, double rmax, double resolution) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("build_net: eta must lie in (0,1)");
  if (!(rmax > 0.0 && rmax < 1.0)) throw DomainError("build_net: rmax must lie in (0,1)");
  if (resolution == 0.0) resolution = eta / 8.0;
  if (!(resolution > 0.0) || eta / 2.0 < resolution) {
    throw DomainError("build_net: eta/2 is below the candidate grid resolution");
  }
  auto accepted = greedy_separated(hyperbolic_candidates(resolution, rmax), eta / 2.0);
  return {PointSet(std::move(accepted)), eta, rmax, resolution};
}

PointSet separated_lattice(double sep, double rmax) {
  if (!(sep > 0.0 && sep < 1.0)) throw DomainError("separated_lattice: sep must lie in (0,1)");
  if (!(rmax > 0.0 && rmax < 1.0)) throw DomainError("separated_lattice: rmax must lie in (0,1)");
  return PointSet(greedy_separated(hyperbolic_candidates(std::min(sep / 8.0, 0.05), rmax), sep));
}

Nearest nearest_center(const PointSet& centers, Point z) {
  if (centers.empty()) throw DomainError("nearest_center: empty center set");
  Nearest best{0, psi(centers[0], z)};
  for (std::size_t i = 1; i < centers.size(); ++i) {
    const double d = psi(centers[i], z);
    if (d < best.distance) best = {i, d};
  }
  return best;
}

} // namespace bergman
