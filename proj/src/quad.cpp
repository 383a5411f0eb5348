#include "bergman/quad.hpp"

#include "bergman/quadrature_rules.hpp"
#include "bergman/simd/kernels.hpp"
#include "bergman/weights.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace bergman {

namespace {

int round_up4(double x) { return std::max(4, 4 * static_cast<int>(std::ceil(x / 4.0))); }

// e^{-1/t}, 0 for t <= 0
double flat(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

} // namespace

DiskGrid DiskGrid::polar(double rmax, int n_radial, int n_angular) {
  if (n_radial < 4) throw DomainError("build_grid: n_radial must be at least 4");
  if (!(rmax > 0.0 && rmax <= 1.0)) throw DomainError("build_grid: rmax must lie in (0, 1]");
  if (n_angular <= 0) n_angular = round_up4(kPi * n_radial);
  if (n_angular < 4) throw DomainError("build_grid: n_angular must be at least 4");

  DiskGrid g;
  g.rmax_ = rmax;
  g.n_radial_ = n_radial;
  g.n_angular_ = n_angular;
  const double ds = rmax * rmax / n_radial;
  const double dth = 2.0 * kPi / n_angular;
  const double w = 0.5 * ds * dth;
  const std::size_t n = static_cast<std::size_t>(n_radial) * n_angular;
  g.re_.resize(n);
  g.im_.resize(n);
  g.w_.assign(n, w);
  std::vector<double> c(n_angular), s(n_angular);
  for (int j = 0; j < n_angular; ++j) {
    c[j] = std::cos((j + 0.5) * dth);
    s[j] = std::sin((j + 0.5) * dth);
  }
  for (int k = 0; k < n_radial; ++k) {
    const double r = std::sqrt((k + 0.5) * ds);
    for (int j = 0; j < n_angular; ++j) {
      const std::size_t i = static_cast<std::size_t>(k) * n_angular + j;
      g.re_[i] = r * c[j];
      g.im_[i] = r * s[j];
    }
  }
  return g;
}

DiskGrid DiskGrid::from_nodes(std::vector<Point> nodes, std::vector<double> weights, double rmax) {
  if (nodes.size() != weights.size()) throw DomainError("grid: node/weight count mismatch");
  if (!(rmax > 0.0 && rmax <= 1.0)) throw DomainError("grid: rmax must lie in (0, 1]");
  DiskGrid g;
  g.rmax_ = rmax;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(std::abs(nodes[i]) < 1.0) || !(weights[i] > 0.0)) throw DomainError("grid: invalid node or weight");
    g.re_.push_back(nodes[i].real());
    g.im_.push_back(nodes[i].imag());
  }
  g.w_ = std::move(weights);
  return g;
}

double DiskGrid::total_weight() const {
  double acc = 0.0;
  for (double w : w_) acc += w;
  return acc;
}

double DiskGrid::cell_size_at(Point z) const {
  if (!is_polar()) return std::sqrt(kPi * rmax_ * rmax_ / std::max<std::size_t>(size(), 1));
  const double ds = rmax_ * rmax_ / n_radial_;
  const double dth = 2.0 * kPi / n_angular_;
  // smooth in z: the radial spacing ds/(2r) is regularized at the origin
  const double r = std::sqrt(std::norm(z) + ds);
  const double dr = ds / (2.0 * r);
  const double da = r * dth;
  return std::sqrt(dr * dr + da * da);
}

double DiskGrid::cutoff_radius(Point z) const {
  const double rho = cutoff_cells * cell_size_at(z);
  return std::min(rho, 0.5);
}

double smooth_cutoff(double rho, double cutoff) {
  if (rho <= 0.0) return 1.0;
  if (rho >= cutoff) return 0.0;
  const double t = rho / cutoff;
  const double a = flat(t), b = flat(1.0 - t);
  return b / (a + b);
}

LocalRule DiskGrid::local_rule(Point z) const { return local_rule(z, cutoff_radius(z)); }

LocalRule DiskGrid::local_rule(Point z, double cutoff) const {
  LocalRule rule;
  rule.cutoff = cutoff;
  const int depth = std::max(1, refinement_depth);
  const GaussRule& gl = gauss_legendre(2 + depth);
  const int n_ang = 8 << depth;
  const double dth = 2.0 * kPi / n_ang;
  const double inner = std::min(1e-6 * one_minus_abs2(z), 0.5 * cutoff);

  std::vector<double> edges{0.0, inner};
  while (edges.back() * 2.0 < cutoff) edges.push_back(edges.back() * 2.0);
  if (edges.back() < cutoff) edges.push_back(cutoff);

  std::vector<Complex> dirs(n_ang);
  for (int j = 0; j < n_ang; ++j) dirs[j] = std::polar(1.0, (j + 0.5) * dth);

  const double lim2 = rmax_ * rmax_;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e], b = edges[e + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t g = 0; g < gl.x.size(); ++g) {
      const double rho = mid + half * gl.x[g];
      const double w = half * gl.w[g] * rho * dth * smooth_cutoff(rho, cutoff);
      if (w == 0.0) continue;
      for (int j = 0; j < n_ang; ++j) {
        const Complex o = rho * dirs[j];
        if (std::norm(z + o) >= lim2) continue;
        rule.offsets.push_back(o);
        rule.weights.push_back(w);
      }
    }
  }
  return rule;
}

DiskGrid build_grid(double rmax, int n_radial, std::vector<Point> singular_points, int depth) {
  if (depth < 1) throw DomainError("build_grid: refinement depth must be at least 1");
  DiskGrid g = DiskGrid::polar(rmax, n_radial);
  for (auto s : singular_points) {
    if (!(std::abs(s) < rmax)) throw DomainError("build_grid: singular point outside the grid");
  }
  g.singular_points = std::move(singular_points);
  g.refinement_depth = depth;
  return g;
}

Samples sample(const DiskGrid& grid, const Field& f) {
  Samples out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = f(grid.node(i));
  return out;
}

namespace {

// Split radius around each singular point, shrunk so the cutoff disks of
// distinct points are disjoint.
std::vector<double> split_radii(const DiskGrid& grid, std::span<const Point> sing) {
  std::vector<double> out;
  for (std::size_t i = 0; i < sing.size(); ++i) {
    double r = grid.cutoff_radius(sing[i]);
    for (std::size_t j = 0; j < sing.size(); ++j) {
      if (j != i) r = std::min(r, 0.45 * std::abs(sing[i] - sing[j]));
    }
    if (!(r > 0.0)) throw DomainError("integrate: repeated singular point");
    out.push_back(r);
  }
  return out;
}

Complex integrate_split(const DiskGrid& grid, const Field& f, std::span<const Point> sing) {
  const auto radii = split_radii(grid, sing);
  std::vector<double> scale(grid.size(), 1.0);
  for (std::size_t s = 0; s < sing.size(); ++s) {
    grid.visit_near(sing[s], radii[s], [&](std::size_t i) {
      scale[i] = 1.0 - smooth_cutoff(std::abs(grid.node(i) - sing[s]), radii[s]);
    });
  }
  Complex acc{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (scale[i] == 0.0) continue;
    acc += grid.weight(i) * scale[i] * f(grid.node(i));
  }
  for (std::size_t s = 0; s < sing.size(); ++s) {
    const LocalRule rule = grid.local_rule(sing[s], radii[s]);
    Complex loc{};
    for (std::size_t l = 0; l < rule.offsets.size(); ++l) loc += rule.weights[l] * f(sing[s] + rule.offsets[l]);
    acc += loc;
  }
  return acc;
}

} // namespace

Complex integrate(const DiskGrid& grid, const Field& f) { return integrate_split(grid, f, grid.singular_points); }

double integrate_real(const DiskGrid& grid, const RealField& f) {
  return integrate(grid, [&](Point z) { return Complex{f(z), 0.0}; }).real();
}

Complex integrate_singular(const DiskGrid& grid, const Field& f, Point s) {
  if (!(std::abs(s) < grid.rmax())) throw DomainError("integrate_singular: singular point outside the grid");
  const Point one[] = {s};
  return integrate_split(grid, f, one);
}

double richardson_full_disk(double r1, double i1, double r2, double i2, double order) {
  const double t1 = std::pow(1.0 - r1 * r1, order), t2 = std::pow(1.0 - r2 * r2, order);
  if (t1 == t2) throw DomainError("richardson_full_disk: radii must differ");
  return (t1 * i2 - t2 * i1) / (t1 - t2);
}

double lp_norm(std::span<const Complex> f, const PointSet& z, double p, const DiskGrid& grid) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("lp_norm: p must be positive");
  if (f.size() != grid.size()) throw DomainError("lp_norm: sample count does not match the grid");
  const WeightEval w(z);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i].real()) || !std::isfinite(f[i].imag())) throw DomainError("lp_norm: non-finite sample");
    const double a = std::abs(f[i]);
    if (a == 0.0) continue;
    const double k = z.empty() ? 0.0 : w.k(grid.node(i));
    acc += grid.weight(i) * std::exp(p * (std::log(a) + k));
  }
  if (!std::isfinite(acc)) throw NumericError("lp_norm: overflow");
  return std::pow(acc, 1.0 / p);
}

CauchyTransform::CauchyTransform(const DiskGrid& grid, Field phi, int m) : grid_(&grid), phi_(std::move(phi)), m_(m) {
  if (m < 0) throw DomainError("cauchy_transform: m must be non-negative");
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point w = grid.node(i);
    const Complex v = phi_(w);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("cauchy_transform: non-finite density");
    if (v == Complex{}) continue;
    const Complex c = grid.weight(i) * v * std::pow(one_minus_abs2(w), m);
    idx_.push_back(i);
    re_.push_back(w.real());
    im_.push_back(w.imag());
    cre_.push_back(c.real());
    cim_.push_back(c.imag());
    xmin = std::min(xmin, w.real());
    xmax = std::max(xmax, w.real());
    ymin = std::min(ymin, w.imag());
    ymax = std::max(ymax, w.imag());
  }
  bbox_[0] = xmin;
  bbox_[1] = xmax;
  bbox_[2] = ymin;
  bbox_[3] = ymax;
  if (idx_.empty()) return;

  // A density whose support sits well inside the grid is handed to the
  // support form, with a margin of two cells around the sampled support.
  const Point c{0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
  double r = 0.0, cell = 0.0;
  for (std::size_t k = 0; k < idx_.size(); ++k) {
    const Point w{re_[k], im_[k]};
    r = std::max(r, std::abs(w - c));
    cell = std::max(cell, grid.cell_size_at(w));
  }
  r += 2.0 * cell;
  if (std::abs(c) + r < grid.rmax()) *this = CauchyTransform(grid, phi_, m, EuclideanDisk{c, r});
}

Complex CauchyTransform::operator()(Point z) const {
  if (!(std::abs(z) <= grid_->rmax())) throw DomainError("cauchy_transform: evaluation point outside the grid");
  if (re_.empty() && !use_support_) return {};
  return use_support_ ? eval_support(z) : eval_grid(z);
}

Complex CauchyTransform::eval_grid(Point z) const {
  const DiskGrid& g = *grid_;
  const double rho = g.cutoff_radius(z);

  simd::CauchyArgs args{{re_, im_}, cre_, cim_, m_, rho * rho};
  Complex acc = simd::cauchy_sum(z, args);

  auto kernel = [&](Point w) {
    Complex d = 1.0;
    const Complex q = 1.0 - std::conj(w) * z;
    for (int k = 0; k < m_; ++k) d *= q;
    return 1.0 / ((z - w) * d);
  };

  // near nodes: weight (1 - chi), ordered by grid index
  g.visit_near(z, rho, [&](std::size_t i) {
    auto it = std::lower_bound(idx_.begin(), idx_.end(), i);
    if (it == idx_.end() || *it != i) return;
    const std::size_t k = static_cast<std::size_t>(it - idx_.begin());
    const Point w{re_[k], im_[k]};
    if (w == z) return;
    const double s = 1.0 - smooth_cutoff(std::abs(z - w), rho);
    if (s == 0.0) return;
    acc += s * Complex{cre_[k], cim_[k]} * kernel(w);
  });

  // local rule, skipped when the cutoff disk misses the support
  const double dx = std::max({bbox_[0] - z.real(), z.real() - bbox_[1], 0.0});
  const double dy = std::max({bbox_[2] - z.imag(), z.imag() - bbox_[3], 0.0});
  const double cell = g.cell_size_at(z);
  if (dx * dx + dy * dy < (rho + 2.0 * cell) * (rho + 2.0 * cell)) {
    const LocalRule rule = g.local_rule(z, rho);
    Complex loc{};
    for (std::size_t l = 0; l < rule.offsets.size(); ++l) {
      const Point w = z + rule.offsets[l];
      const Complex v = phi_(w);
      if (v == Complex{}) continue;
      loc += rule.weights[l] * v * std::pow(one_minus_abs2(w), m_) * kernel(w);
    }
    acc += loc;
  }
  return acc / kPi;
}

namespace {

// Rule orders for the support form at refinement depth d.
struct SupportOrders {
  int radial, inside_angles, cone_angles, far_radial, far_angles;
};

SupportOrders support_orders(int depth) {
  const int d = std::max(1, depth);
  return {16 + 8 * d, 48 * (d + 1), 24 + 8 * d, 16 + 8 * d, 96 + 32 * d};
}

constexpr double kFarFactor = 1.5;

struct NodeBuffer {
  std::vector<double> re, im, cre, cim;
  void push(Point w, Complex c) {
    re.push_back(w.real());
    im.push_back(w.imag());
    cre.push_back(c.real());
    cim.push_back(c.imag());
  }
};

} // namespace

CauchyTransform::CauchyTransform(const DiskGrid& grid, Field phi, int m, const EuclideanDisk& support)
    : grid_(&grid), phi_(std::move(phi)), m_(m), use_support_(true), support_(support) {
  if (m < 0) throw DomainError("cauchy_transform: m must be non-negative");
  if (!(support.radius > 0.0) || !(std::abs(support.center) + support.radius <= 1.0)) {
    throw DomainError("cauchy_transform: support disk must lie in the unit disk");
  }
  // far rule, sampled once: a pole far outside gives the disk-centred branch
  const Point far_pole = support.center + 2.0 * kFarFactor * support.radius;
  const LocalRule rule = pole_rule(far_pole, support, grid.refinement_depth);
  for (std::size_t l = 0; l < rule.offsets.size(); ++l) {
    const Point w = far_pole + rule.offsets[l];
    const Complex v = phi_(w);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("cauchy_transform: non-finite density");
    if (v == Complex{}) continue;
    const Complex c = rule.weights[l] * v * std::pow(one_minus_abs2(w), m);
    re_.push_back(w.real());
    im_.push_back(w.imag());
    cre_.push_back(c.real());
    cim_.push_back(c.imag());
  }
}

LocalRule pole_rule(Point pole, const EuclideanDisk& disk, int depth) {
  const auto ord = support_orders(depth);
  const Point q = pole - disk.center;
  const double d = std::abs(q);
  const double rs = disk.radius;
  LocalRule rule;
  rule.cutoff = rs;

  if (d >= kFarFactor * rs) {
    const GaussRule& gl = gauss_legendre(ord.far_radial);
    const double dth = 2.0 * kPi / ord.far_angles;
    for (int k = 0; k < ord.far_radial; ++k) {
      const double r = 0.5 * rs * (1.0 + gl.x[k]);
      const double wr = 0.5 * rs * gl.w[k] * r * dth;
      for (int j = 0; j < ord.far_angles; ++j) {
        rule.offsets.push_back(std::polar(r, (j + 0.5) * dth) - q);
        rule.weights.push_back(wr);
      }
    }
    return rule;
  }

  const GaussRule& gr = gauss_legendre(ord.radial);
  auto ray = [&](Complex e, double r1, double r2, double wang) {
    const double half = 0.5 * (r2 - r1), mid = 0.5 * (r1 + r2);
    if (!(half > 0.0)) return;
    for (int k = 0; k < ord.radial; ++k) {
      const double rho = mid + half * gr.x[k];
      rule.offsets.push_back(rho * e);
      rule.weights.push_back(wang * half * gr.w[k] * rho);
    }
  };
  if (d < rs) {
    // pole inside: full circle of rays, each ending on the disk edge
    const double dth = 2.0 * kPi / ord.inside_angles;
    const double c0 = d * d - rs * rs;
    for (int j = 0; j < ord.inside_angles; ++j) {
      const Complex e = std::polar(1.0, (j + 0.5) * dth);
      const double b = (q * std::conj(e)).real();
      ray(e, 0.0, -b + std::sqrt(b * b - c0), dth);
    }
  } else {
    // pole outside: the cone of rays through the disk, parametrized by
    // u = d sin(angle offset) / rs in [-1, 1]
    const GaussRule& gu = gauss_legendre(ord.cone_angles);
    const double th0 = std::arg(-q);
    const double s = rs / d;
    for (int j = 0; j < ord.cone_angles; ++j) {
      const double u = gu.x[j];
      const double su = s * u;
      const double delta = std::asin(su);
      const double jac = s / std::sqrt((1.0 - su) * (1.0 + su));
      const double b = d * std::cos(delta);
      const double h = rs * std::sqrt((1.0 - u) * (1.0 + u));
      ray(std::polar(1.0, th0 + delta), std::max(0.0, b - h), b + h, gu.w[j] * jac);
    }
  }
  return rule;
}

Complex CauchyTransform::eval_support(Point z) const {
  const double d = std::abs(z - support_.center);
  if (d >= kFarFactor * support_.radius) {
    if (re_.empty()) return {};
    simd::CauchyArgs args{{re_, im_}, cre_, cim_, m_, 0.0};
    return simd::cauchy_sum(z, args) / kPi;
  }
  const LocalRule rule = pole_rule(z, support_, grid_->refinement_depth);
  NodeBuffer buf;
  for (std::size_t l = 0; l < rule.offsets.size(); ++l) {
    const Point w = z + rule.offsets[l];
    const Complex v = phi_(w);
    if (v == Complex{}) continue;
    buf.push(w, rule.weights[l] * v * std::pow(one_minus_abs2(w), m_));
  }
  if (buf.re.empty()) return {};
  simd::CauchyArgs args{{buf.re, buf.im}, buf.cre, buf.cim, m_, 0.0};
  return simd::cauchy_sum(z, args) / kPi;
}

Complex cauchy_transform(const Field& phi, int m, Point z, const DiskGrid& grid) {
  return CauchyTransform(grid, phi, m)(z);
}

double forelli_rudin_integral(double beta, double M, FrVariant variant, double radius) {
  if (!(beta > -1.0 && beta < M)) throw DomainError("forelli_rudin: need -1 < beta < M");
  if (!(radius >= 0.0 && radius < 1.0)) throw DomainError("forelli_rudin: radius must lie in [0, 1)");
  const double expo = M - 2.0 * beta - 2.0;
  const double q = radius;
  auto radial = [&](double rho) {
    const int n = trapezoid_nodes_for(q * rho, 64);
    const double ang = periodic_trapezoid(
        [&](double th) { return std::pow(std::norm(1.0 - q * rho * std::polar(1.0, th)), 0.5 * expo); }, n);
    const double jac = variant == FrVariant::Plain ? rho : 1.0;
    return std::pow((1.0 - rho) * (1.0 + rho), beta) * jac * ang;
  };
  const double j = integrate_de(radial, 0.0, 1.0, 1e-11);
  return std::pow(1.0 - q * q, beta - M) * j;
}

FrFit forelli_rudin_check(double beta, double M, FrVariant variant) {
  if (!(beta > -1.0 && beta < M)) throw DomainError("forelli_rudin_check: need -1 < beta < M");
  FrFit fit;
  fit.radii = {0.9, 0.95, 0.99, 0.995};
  std::vector<double> xs, ys;
  for (double r : fit.radii) {
    const double v = forelli_rudin_integral(beta, M, variant, r);
    if (!(v > 0.0) || !std::isfinite(v)) throw NumericError("forelli_rudin_check: integral not positive");
    fit.values.push_back(v);
    xs.push_back(std::log(1.0 - r * r));
    ys.push_back(std::log(v));
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

namespace {

void check_spec(const LocalMeanSpec& spec) {
  if (!(spec.q >= 1.0) || !std::isfinite(spec.q)) throw DomainError("local_mean: q must be at least 1");
  if (!(spec.radius > 0.0 && spec.radius < 1.0)) throw DomainError("local_mean: R must lie in (0, 1)");
}

// mean of |f|^q over the Euclidean disk D(z, R); polar Gauss x trapezoid rule
double mean_power(const Field& f, const LocalMeanSpec& spec, Point z, int n_rad, int n_ang) {
  const EuclideanDisk d = euclidean_params({z, spec.radius});
  const GaussRule& gl = gauss_legendre(n_rad);
  const double dth = 2.0 * kPi / n_ang;
  double acc = 0.0, area = 0.0;
  for (int k = 0; k < n_rad; ++k) {
    const double r = 0.5 * d.radius * (1.0 + gl.x[k]);
    const double wr = 0.5 * d.radius * gl.w[k] * r * dth;
    for (int j = 0; j < n_ang; ++j) {
      const Point w = d.center + std::polar(r, (j + 0.5) * dth);
      acc += wr * std::pow(std::abs(f(w)), spec.q);
      area += wr;
    }
  }
  return acc / area;
}

} // namespace

double local_mean_rule(const Field& f, const LocalMeanSpec& spec, Point z, int n_rad, int n_ang) {
  check_spec(spec);
  if (n_rad < 1 || n_ang < 1) throw DomainError("local_mean_rule: orders must be positive");
  return std::pow(mean_power(f, spec, z, n_rad, n_ang), 1.0 / spec.q);
}

double local_mean(const Field& f, const LocalMeanSpec& spec, Point z, const DiskGrid& grid) {
  check_spec(spec);
  const EuclideanDisk d = euclidean_params({z, spec.radius});
  if (!(std::abs(d.center) + d.radius <= grid.rmax() + 1e-15)) {
    throw DomainError("local_mean: D(z, R) leaves the grid disk");
  }
  return std::pow(mean_power(f, spec, z, 16, 64), 1.0 / spec.q);
}

double discrete_norm(const Field& f, const LocalMeanSpec& spec, double p, const CoveringNet& net,
                     const DiskGrid& grid) {
  check_spec(spec);
  if (!(p > 0.0)) throw DomainError("discrete_norm: p must be positive");
  if (std::abs(net.eta - 0.5 * spec.radius) > 1e-12) throw DomainError("discrete_norm: net eta must equal R/2");
  double acc = 0.0;
  for (auto c : net.centers.points()) {
    const double t = one_minus_abs2(c);
    acc += t * t * std::pow(local_mean(f, spec, c, grid), p);
  }
  return acc;
}

double continuous_local_mean_norm(const Field& f, const LocalMeanSpec& spec, double p, const DiskGrid& grid) {
  check_spec(spec);
  if (!(p > 0.0)) throw DomainError("continuous_local_mean_norm: p must be positive");
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double m = std::pow(mean_power(f, spec, grid.node(i), 8, 24), 1.0 / spec.q);
    acc += grid.weight(i) * std::pow(m, p);
  }
  return acc;
}

void write_grid(std::ostream& os, const DiskGrid& grid) {
  const auto old = os.precision(17);
  os << "# grid " << grid.rmax() << ' ' << grid.n_radial() << ' ' << grid.n_angular() << ' '
     << grid.refinement_depth << ' ' << grid.cutoff_cells << '\n';
  for (auto s : grid.singular_points) os << "# singular " << s.real() << ' ' << s.imag() << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << grid.node(i).real() << ' ' << grid.node(i).imag() << ' ' << grid.weight(i) << '\n';
  }
  os.precision(old);
}

DiskGrid read_grid(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DomainError("read_grid: empty input");
  std::istringstream head(line);
  std::string hash, tag;
  DiskGrid g;
  head >> hash >> tag >> g.rmax_ >> g.n_radial_ >> g.n_angular_ >> g.refinement_depth >> g.cutoff_cells;
  if (!head || hash != "#" || tag != "grid") throw DomainError("read_grid: bad header");
  if (!(g.rmax_ > 0.0 && g.rmax_ <= 1.0)) throw DomainError("read_grid: bad rmax");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      double x, y;
      ls >> hash >> tag >> x >> y;
      if (!ls || tag != "singular") throw DomainError("read_grid: bad comment line");
      g.singular_points.emplace_back(x, y);
      continue;
    }
    double x, y, w;
    ls >> x >> y >> w;
    if (!ls || !(std::norm(Complex{x, y}) < 1.0) || !(w > 0.0)) throw DomainError("read_grid: bad node line");
    g.re_.push_back(x);
    g.im_.push_back(y);
    g.w_.push_back(w);
  }
  const std::size_t expect = static_cast<std::size_t>(g.n_radial_) * g.n_angular_;
  if (g.n_radial_ > 0 && g.re_.size() != expect) throw DomainError("read_grid: node count does not match header");
  return g;
}

} // namespace bergman
