#include "bergman/density.hpp"

#include "bergman/quadrature_rules.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bergman {

namespace {

void check_radius(double r, const char* who) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError(std::string(who) + ": radius must lie in (0,1)");
}

double log_denominator(double r) { return -std::log1p(-r * r); }

// (1/pi) int_{|z|<r} g(z) log(r^2/|z|^2) dA: tanh-sinh in the radius, trapezoid in the angle
template <class G>
double log_weighted_disk(G&& g, double r, int n_theta) {
  const GaussRule& rule = tanh_sinh_unit();
  const double dth = 2.0 * kPi / n_theta;
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const double x = rule.x[i];
    const double rho = r * x;
    double ring = 0.0;
    for (int k = 0; k < n_theta; ++k) ring += g(std::polar(rho, (k + 0.5) * dth));
    acc += rule.w[i] * r * rho * (-2.0 * std::log(x)) * ring * dth;
  }
  return acc / kPi;
}

int angles_for(double r) { return trapezoid_nodes_for(r, 64, 20000); }

bool disk_fits(Point w, double r, double margin, const DiskGrid& grid) {
  const EuclideanDisk d = euclidean_params({w, r});
  return std::abs(d.center) + d.radius + margin <= grid.rmax();
}

} // namespace

double dplus(const PointSet& z, double r, const PointSet& centers) {
  check_radius(r, "dplus");
  double best = 0.0;
  for (auto b : centers.points()) {
    const PointSet w = z.moebius_image(b);
    double num = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (std::abs(w[i]) < r) num += w.multiplicity(i) * 0.5 * one_minus_abs2(w[i]);
    }
    best = std::max(best, num);
  }
  return best / log_denominator(r);
}

double dplus_log_count(const PointSet& z, double r, const PointSet& centers) {
  check_radius(r, "dplus");
  double best = 0.0;
  for (auto b : centers.points()) {
    const PointSet w = z.moebius_image(b);
    double num = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double m = std::abs(w[i]);
      if (m > 0.5 && m < r) num -= w.multiplicity(i) * std::log(m);
    }
    best = std::max(best, num);
  }
  return best / log_denominator(r);
}

double splus_circle_mean(const PointSet& z, double r) {
  check_radius(r, "splus_circle_mean");
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double t = one_minus_abs2(z[i]);
    s += z.multiplicity(i) * t * t / (1.0 - std::norm(z[i]) * r * r);
  }
  return 0.5 * r * r * s;
}

double splus_circle_quadrature(const PointSet& z, double r, int n) {
  check_radius(r, "splus_circle_quadrature");
  const WeightEval w(z);
  return periodic_trapezoid([&](double t) { return w.k(std::polar(r, t)); }, n) / (2.0 * kPi);
}

double seip_criterion_means(const PointSet& z, double p, double r, const PointSet& centers) {
  check_radius(r, "seip_criterion_means");
  if (centers.empty()) throw DomainError("seip_criterion_means: no centers");
  double best = 0.0;
  for (auto b : centers.points()) best = std::max(best, splus_circle_mean(z.moebius_image(b), r));
  return 1.0 - p * best / log_denominator(r);
}

LaplaceMeans seip_criterion_laplace(const PointSet& z, double p, double rstar, const PointSet& centers) {
  check_radius(rstar, "seip_criterion_laplace");
  if (centers.empty()) throw DomainError("seip_criterion_laplace: no centers");
  const int n = angles_for(rstar);
  LaplaceMeans out;
  out.rhs = log_weighted_disk([](Point x) { const double t = one_minus_abs2(x); return 1.0 / (t * t); }, rstar, n);
  for (auto b : centers.points()) {
    // lap and dA are carried to D(0, r*) by M_b
    const WeightEval w(z.moebius_image(b));
    out.lhs = std::max(out.lhs, p * log_weighted_disk([&](Point x) { return w.lap_k(x); }, rstar, n));
  }
  out.margin = 1.0 - out.lhs / out.rhs;
  return out;
}

DensityReport density_report(const PointSet& z, double p, const std::vector<double>& r, const PointSet& centers) {
  if (centers.empty()) throw DomainError("density_report: no centers");
  DensityReport rep;
  rep.p = p;
  rep.r = r;
  std::sort(rep.r.begin(), rep.r.end());
  std::vector<PointSet> moved;
  for (auto b : centers.points()) moved.push_back(z.moebius_image(b));
  for (double rr : rep.r) {
    check_radius(rr, "density_report");
    const double den = log_denominator(rr);
    double top = 0.0, low = 1.0;
    for (std::size_t c = 0; c < moved.size(); ++c) {
      DensityRow row;
      row.r = rr;
      row.center_id = c;
      for (std::size_t i = 0; i < moved[c].size(); ++i) {
        if (std::abs(moved[c][i]) < rr) row.numerator += moved[c].multiplicity(i) * 0.5 * one_minus_abs2(moved[c][i]);
      }
      row.denominator = den;
      row.value = row.numerator / den;
      row.margin = 1.0 - p * splus_circle_mean(moved[c], rr) / den;
      top = std::max(top, row.value);
      low = std::min(low, row.margin);
      rep.rows.push_back(row);
    }
    rep.dplus_by_r.push_back(top);
    rep.margin_by_r.push_back(low);
  }
  rep.density = rep.dplus_by_r.empty() ? 0.0 : rep.dplus_by_r.back();
  return rep;
}

std::string density_csv_header() { return "r,center_id,numerator,denominator,value,margin"; }

std::string density_csv_rows(const DensityReport& rep) {
  std::ostringstream os;
  os.precision(10);
  for (const auto& row : rep.rows) {
    os << row.r << ',' << row.center_id << ',' << row.numerator << ',' << row.denominator << ',' << row.value << ','
       << row.margin << '\n';
  }
  return os.str();
}

PhiField::PhiField(PointSet z, double p, double rstar) : weights_(std::move(z)), p_(p), rstar_(rstar) {
  check_radius(rstar, "PhiField");
  if (!(p > 0.0)) throw DomainError("PhiField: p must be positive");
}

double PhiField::phi(Point z) const { return -std::log1p(-std::norm(z)) - p_ * weights_.k(z); }

double PhiField::invariant_laplacian(Point z) const {
  const double t = one_minus_abs2(z);
  return 1.0 - p_ * t * t * weights_.lap_k(z);
}

double invariant_average(const std::function<double(Point)>& g, Point w, double rstar) {
  check_radius(rstar, "invariant_average");
  // z = M_w(x) maps D(0, r*) onto D(w, r*); dlambda is invariant
  const double v = log_weighted_disk(
      [&](Point x) {
        const double t = one_minus_abs2(x);
        return g(moebius(w, x)) / (t * t);
      },
      rstar, 64);
  return v / log_denominator(rstar);
}

double PhiField::star(Point w) const {
  return invariant_average([this](Point z) { return phi(z); }, w, rstar_);
}

double phi_star(const PhiField& field, Point w, const DiskGrid& grid) {
  if (!disk_fits(w, field.rstar(), 0.0, grid)) throw DomainError("phi_star: D(w, r*) leaves the grid disk");
  return field.star(w);
}

namespace {

std::vector<Point> check_nodes(const PhiField& field, const DiskGrid& grid, double inner) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point w = grid.node(i);
    if (inner > 0.0 && std::abs(w) > inner) continue;
    const double h = 0.02 * one_minus_abs2(w);
    if (disk_fits(w, field.rstar(), 2.0 * h, grid)) out.push_back(w);
  }
  return out;
}

double invariant_stencil(const PhiField& field, Point w, double h) {
  const double c = field.star(w);
  const double s = field.star(w + h) + field.star(w - h) + field.star(w + Complex{0, h}) +
                   field.star(w - Complex{0, h});
  const double t = one_minus_abs2(w);
  return t * t * (s - 4.0 * c) / (4.0 * h * h);
}

} // namespace

LaplacianCheck phi_star_laplacian_check(const PhiField& field, const DiskGrid& grid, double inner) {
  const auto nodes = check_nodes(field, grid, inner);
  if (nodes.empty()) throw DomainError("phi_star_laplacian_check: no interior nodes");
  LaplacianCheck out;
  out.nodes = nodes.size();
  out.min_val = out.min_refined = HUGE_VAL;
  out.max_val = out.max_refined = -HUGE_VAL;
  for (auto w : nodes) {
    const double h = 0.02 * one_minus_abs2(w);
    const double a = invariant_stencil(field, w, h);
    const double b = invariant_stencil(field, w, 0.5 * h);
    out.min_val = std::min(out.min_val, a);
    out.max_val = std::max(out.max_val, a);
    out.min_refined = std::min(out.min_refined, b);
    out.max_refined = std::max(out.max_refined, b);
  }
  const double scale = std::max(std::abs(out.min_val), std::abs(out.max_val));
  out.noisy = std::abs(out.min_refined - out.min_val) > 0.1 * scale ||
              std::abs(out.max_refined - out.max_val) > 0.1 * scale;
  return out;
}

double phi_star_deviation(const PhiField& field, const DiskGrid& grid, double inner) {
  const auto nodes = check_nodes(field, grid, inner);
  if (nodes.empty()) throw DomainError("phi_star_deviation: no interior nodes");
  double sup = 0.0;
  for (auto w : nodes) sup = std::max(sup, std::abs(field.star(w) - field.phi(w)));
  return sup;
}

double ortega_condition(const PhiField& field, double rstar, const PointSet& centers, const DiskGrid& grid) {
  check_radius(rstar, "ortega_condition");
  if (centers.empty()) throw DomainError("ortega_condition: no centers");
  const GaussRule& gl = gauss_legendre(48);
  const int n = angles_for(rstar);
  const double dth = 2.0 * kPi / n;
  double best = HUGE_VAL;
  for (auto b : centers.points()) {
    if (!disk_fits(b, rstar, 0.0, grid)) throw DomainError("ortega_condition: D(b, r*) leaves the grid disk");
    const double jb = one_minus_abs2(b) * one_minus_abs2(b);
    double mass = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      const double rho = 0.5 * rstar * (gl.x[i] + 1.0);
      double ring = 0.0;
      for (int k = 0; k < n; ++k) {
        const Point x = std::polar(rho, (k + 0.5) * dth);
        const Point z = moebius(b, x);
        const double t = one_minus_abs2(z);
        const double jac = jb / std::pow(std::norm(1.0 - std::conj(b) * x), 2);
        ring += (field.invariant_laplacian(z) / (t * t)) * jac;
      }
      mass += 0.5 * rstar * gl.w[i] * rho * ring * dth;
    }
    best = std::min(best, mass);
  }
  return best;
}

} // namespace bergman
