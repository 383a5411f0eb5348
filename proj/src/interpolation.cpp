#include "bergman/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

namespace bergman {

namespace {

constexpr double kStep = 2.5e-4; // the bump ramps are thin

double ramp_slope(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return -30.0 * t * t * (1.0 - t) * (1.0 - t);
}

} // namespace

TargetValues make_targets(const std::vector<Point>& points, const std::vector<Complex>& values) {
  if (points.size() != values.size()) throw DomainError("targets: values and points differ in length");
  TargetValues c{PointSet(points), {}};
  std::vector<bool> used(points.size(), false);
  for (auto a : c.z.points()) {
    std::size_t k = 0;
    while (used[k] || points[k] != a) ++k;
    used[k] = true;
    c.values.push_back(values[k]);
  }
  return c;
}

void validate_targets(const TargetValues& c) {
  if (c.values.size() != c.z.size()) throw DomainError("targets: values and points differ in length");
  for (std::size_t i = 0; i < c.z.size(); ++i) {
    if (c.z.multiplicity(i) != 1) throw DomainError("targets: repeated points cannot be interpolated");
  }
}

double lp_seq_norm(const TargetValues& c, double p) {
  if (!(p > 0.0)) throw DomainError("lp_seq_norm: p must be positive");
  validate_targets(c);
  double s = 0.0;
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    const double w = one_minus_abs2(c.z[i]);
    s += std::pow(std::abs(c.values[i]), p) * w * w;
  }
  return std::pow(s, 1.0 / p);
}

TargetValues random_unit_targets(const PointSet& z, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  TargetValues c{z, {}};
  for (std::size_t i = 0; i < z.size(); ++i) c.values.push_back(std::polar(1.0, phase(rng)));
  return c;
}

BumpInterpolant::BumpInterpolant(TargetValues c, double eta) : c_(std::move(c)), eta_(eta) {
  validate_targets(c_);
  if (!(eta > 0.0 && 2.0 * eta < 1.0)) throw DomainError("bump interpolant: eta must lie in (0, 1/2)");
  if (c_.z.size() > 1 && !(separation_constant(c_.z) > 2.0 * eta)) {
    throw DomainError("bump interpolant: separation must exceed 2 eta");
  }
  for (auto a : c_.z.points()) disks_.push_back(euclidean_params({a, 2.0 * eta_}));
}

double BumpInterpolant::bump(std::size_t i, Point z) const {
  const EuclideanDisk& d = disks_[i];
  if (std::norm(z - d.center) >= d.radius * d.radius) return 0.0;
  return quintic_ramp((psi(c_.z[i], z) - eta_) / eta_);
}

Complex BumpInterpolant::bump_dbar(std::size_t i, Point z) const {
  const EuclideanDisk& d = disks_[i];
  if (std::norm(z - d.center) >= d.radius * d.radius) return {};
  const Point a = c_.z[i];
  const Complex den = 1.0 - std::conj(a) * z;
  const Complex mz = (a - z) / den;
  const double r = std::abs(mz);
  const double slope = ramp_slope((r - eta_) / eta_);
  if (slope == 0.0) return {};
  const Complex dm = (std::norm(a) - 1.0) / (den * den);
  // dbar |M| = M conj(M') / (2 |M|)
  return (slope / eta_) * mz * std::conj(dm) / (2.0 * r);
}

Complex BumpInterpolant::value(Point z) const {
  Complex acc{};
  for (std::size_t i = 0; i < size(); ++i) {
    const double b = bump(i, z);
    if (b != 0.0) acc += c_.values[i] * b;
  }
  return acc;
}

Complex BumpInterpolant::dbar(Point z) const {
  Complex acc{};
  for (std::size_t i = 0; i < size(); ++i) {
    const Complex b = bump_dbar(i, z);
    if (b != Complex{}) acc += c_.values[i] * b;
  }
  return acc;
}

BumpReport bump_interpolant(const BumpInterpolant& g, double p, const DiskGrid& grid) {
  BumpReport r;
  r.g_norm = lp_norm(sample(grid, [&](Point z) { return g.value(z); }), {}, p, grid);
  r.c_norm = lp_seq_norm(g.targets(), p);
  r.ratio = r.c_norm > 0.0 ? r.g_norm / r.c_norm : 0.0;
  return r;
}

double bump_ensemble_max(const PointSet& z, double eta, double p, const DiskGrid& grid, int count,
                         std::uint64_t seed) {
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    const BumpInterpolant g(random_unit_targets(z, seed + static_cast<std::uint64_t>(k)), eta);
    worst = std::max(worst, bump_interpolant(g, p, grid).ratio);
  }
  return worst;
}

std::vector<SupportedField> correction_pieces(const BumpInterpolant& g, const WeightEval& psi) {
  TargetValues unit = g.targets();
  std::fill(unit.values.begin(), unit.values.end(), Complex{1.0, 0.0});
  const auto gs = std::make_shared<const BumpInterpolant>(unit, g.eta());
  const auto ps = std::make_shared<const WeightEval>(psi);
  std::vector<SupportedField> out;
  for (std::size_t i = 0; i < gs->size(); ++i) {
    out.push_back({[gs, ps, i](Point w) -> Complex {
                     const Complex d = gs->bump_dbar(i, w);
                     if (d == Complex{}) return {};
                     return one_minus_abs2(w) * d / ps->psi_value(w);
                   },
                   gs->support(i)});
  }
  return out;
}

Interpolator::Interpolator(const PointSet& z, double p, const DiskGrid& grid, const InterpolationOptions& opt)
    : z_(z), p_(p), grid_(&grid), opt_(opt), psi_(z) {
  if (!(p > 0.0)) throw DomainError("interpolate: p must be positive");
  if (z.empty()) throw DomainError("interpolate: empty point set");
  eta_ = opt.eta > 0.0 ? opt.eta : (z.size() > 1 ? 0.4 * separation_constant(z) : 0.2);
  const BumpInterpolant shape(TargetValues{z, std::vector<Complex>(z.size(), Complex{1.0, 0.0})}, eta_);
  const auto pieces = correction_pieces(shape, psi_);
  double reach = 0.0;
  for (const auto& pc : pieces) reach = std::max(reach, std::abs(pc.support.center) + pc.support.radius);
  if (reach >= grid.rmax()) throw DomainError("interpolate: bump supports leave the grid disk");

  GaFamily family;
  PartitionOfUnity partition;
  if (opt.solver == SolverKind::Patched) {
    const CoveringNet net = build_net(opt.net_eta, grid.rmax());
    partition = build_partition(net, grid);
    GaOptions go;
    go.region = EuclideanDisk{0.0, reach};
    const double r_drop = opt.r_drop > 0.0 ? opt.r_drop : separation_constant(z);
    family = build_ga_family(z, p, net, r_drop, go);
  }
  for (const auto& pc : pieces) {
    const std::vector<SupportedField> one{pc};
    basis_.push_back(opt.solver == SolverKind::Patched ? patched_transform(one, family, partition, opt.m, grid)
                                                       : plain_transform(one, opt.m, grid));
  }

  const double lim = grid.rmax() - 2.0 * kStep;
  std::vector<Point> stencil_points;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.node(i);
    if (std::abs(x) > lim) continue;
    interior_.push_back(i);
    for (Complex d : {Complex{kStep, 0}, Complex{-kStep, 0}, Complex{0, kStep}, Complex{0, -kStep}}) {
      stencil_points.push_back(x + d);
    }
  }
  psi_at_.reserve(stencil_points.size());
  for (auto x : stencil_points) psi_at_.push_back(psi_.psi_value(x));
  u_at_.resize(basis_.size());
  u_node_.resize(basis_.size());
  for (std::size_t a = 0; a < basis_.size(); ++a) {
    u_node_[a].reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) u_node_[a].push_back(basis_[a](grid.node(i)));
    u_at_[a].reserve(stencil_points.size());
    for (auto x : stencil_points) u_at_[a].push_back(basis_[a](x));
  }
}

Interpolator::Result Interpolator::run(const TargetValues& c) const {
  validate_targets(c);
  if (!(c.z == z_)) throw DomainError("interpolate: targets are not aligned with the prepared point set");
  const DiskGrid& grid = *grid_;
  const auto g = std::make_shared<const BumpInterpolant>(c, eta_);
  auto basis = std::make_shared<const std::vector<Field>>(basis_);
  auto psi = std::make_shared<const WeightEval>(psi_);
  const std::vector<Complex> coef = c.values;

  Result res;
  res.f = [g, basis, psi, coef](Point x) {
    const Complex ps = psi->psi_value(x);
    Complex u{};
    if (ps != Complex{}) {
      for (std::size_t a = 0; a < coef.size(); ++a) u += coef[a] * (*basis)[a](x);
    }
    return g->value(x) - u * ps;
  };

  InterpolationReport& r = res.report;
  r.p = p_;
  r.z_count = z_.size();
  r.eta = eta_;
  r.grid_depth = grid.refinement_depth;

  const auto combine = [&](const std::vector<std::vector<Complex>>& tab, std::size_t k) {
    Complex u{};
    for (std::size_t a = 0; a < coef.size(); ++a) u += coef[a] * tab[a][k];
    return u;
  };

  Samples u_nodes(grid.size()), uf(grid.size()), rhs(grid.size());
  res.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.node(i);
    const Complex ps = psi_.psi_value(x);
    u_nodes[i] = combine(u_node_, i);
    uf[i] = u_nodes[i] * ps;
    res.values[i] = g->value(x) - uf[i];
    const Complex dg = one_minus_abs2(x) * g->dbar(x);
    rhs[i] = dg == Complex{} ? Complex{} : dg / ps;
  }

  // stencils: analyticity of f and the equation for u
  double ff = 0.0, gg = 0.0, uu = 0.0, rr = 0.0;
  for (std::size_t k = 0; k < interior_.size(); ++k) {
    const std::size_t i = interior_[k];
    const Point x = grid.node(i);
    const double w = grid.weight(i);
    Complex uv[4], fv[4];
    for (int s = 0; s < 4; ++s) {
      const std::size_t idx = 4 * k + static_cast<std::size_t>(s);
      const Point xs = x + (s == 0 ? Complex{kStep, 0} : s == 1 ? Complex{-kStep, 0} : s == 2 ? Complex{0, kStep} : Complex{0, -kStep});
      uv[s] = combine(u_at_, idx);
      fv[s] = g->value(xs) - uv[s] * psi_at_[idx];
    }
    const double t = one_minus_abs2(x);
    const Complex dbar_f = ((fv[0] - fv[1]) + Complex{0, 1} * (fv[2] - fv[3])) / (4.0 * kStep);
    const Complex d_f = ((fv[0] - fv[1]) - Complex{0, 1} * (fv[2] - fv[3])) / (4.0 * kStep);
    const Complex dbar_u = ((uv[0] - uv[1]) + Complex{0, 1} * (uv[2] - uv[3])) / (4.0 * kStep);
    ff += w * std::norm(t * dbar_f);
    gg += w * std::norm(t * d_f);
    uu += w * std::norm(t * dbar_u - rhs[i]);
    rr += w * std::norm(rhs[i]);
  }
  r.residual = gg > 0.0 ? std::sqrt(ff / gg) : std::sqrt(ff);

  SolverReport& sr = r.solver;
  sr.p = p_;
  sr.z_count = z_.total_count();
  sr.m = opt_.m;
  sr.grid_depth = grid.refinement_depth;
  sr.n_radial = grid.n_radial();
  sr.rmax = grid.rmax();
  sr.tolerance = opt_.tolerance;
  sr.input_norm = lp_norm(rhs, z_, p_, grid);
  sr.solution_norm = lp_norm(u_nodes, z_, p_, grid);
  sr.bound_ratio = sr.input_norm > 0.0 ? sr.solution_norm / sr.input_norm : 0.0;
  sr.residual_ratio = rr > 0.0 ? std::sqrt(uu / rr) : std::sqrt(uu);
  sr.residual_norm = std::sqrt(uu);
  sr.success = std::isfinite(sr.bound_ratio) && sr.residual_ratio <= opt_.tolerance;
  sr.message = sr.success ? "ok" : "residual above tolerance";

  for (std::size_t a = 0; a < z_.size(); ++a) {
    const Complex fa = res.f(z_[a]);
    r.node_err_max = std::max(r.node_err_max, std::abs(fa - c.values[a]) / (1.0 + std::abs(c.values[a])));
  }
  r.f_norm = lp_norm(res.values, {}, p_, grid);
  r.c_norm = lp_seq_norm(c, p_);
  r.norm_ratio = r.c_norm > 0.0 ? r.f_norm / r.c_norm : 0.0;
  r.correction_norm = lp_norm(uf, {}, p_, grid);
  r.u_weighted_norm = sr.solution_norm;
  r.success = sr.success && std::isfinite(r.norm_ratio) && r.residual <= opt_.tolerance;
  r.message = r.success ? "ok" : (sr.success ? "f not analytic to tolerance" : sr.message);
  return res;
}

Interpolator::Result interpolate(const TargetValues& c, double p, const DiskGrid& grid,
                                 const InterpolationOptions& opt) {
  validate_targets(c);
  return Interpolator(c.z, p, grid, opt).run(c);
}

AddPointReport add_point(const TargetValues& c, Point a0, Complex c0, double eta, double p, const DiskGrid& grid,
                         const InterpolationOptions& opt) {
  validate_targets(c);
  AddPointReport r;
  r.min_distance = 1.0;
  std::vector<Point> moved;
  std::vector<Complex> vals;
  for (std::size_t i = 0; i < c.z.size(); ++i) {
    const Point w = moebius(a0, c.z[i]);
    r.min_distance = std::min(r.min_distance, std::abs(w));
    moved.push_back(w);
    vals.push_back((c.values[i] - c0) / w);
  }
  if (!moved.empty() && !(r.min_distance > eta)) throw DomainError("add_point: a point lies within eta of a0");

  const double c0w = std::pow(std::abs(c0), p);
  if (moved.empty()) {
    // f = c0
    const Samples f(grid.size(), c0);
    r.norm_ratio = c0 == Complex{} ? 0.0 : lp_norm(f, {}, p, grid) / std::pow(c0w, 1.0 / p);
    return r;
  }

  const TargetValues shifted = make_targets(moved, vals);
  const auto g = interpolate(shifted, p, grid, opt);
  const Field f = [gf = g.f, c0](Point w) { return w * gf(w) + c0; };
  r.f0_error = std::abs(f(0.0) - c0);
  for (std::size_t i = 0; i < moved.size(); ++i) {
    r.node_err_max = std::max(r.node_err_max, std::abs(f(moved[i]) - c.values[i]) / (1.0 + std::abs(c.values[i])));
  }
  Samples fv(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) fv[i] = grid.node(i) * g.values[i] + c0;
  const TargetValues moved_c = make_targets(moved, c.values);
  const double cn = std::pow(std::pow(lp_seq_norm(moved_c, p), p) + c0w, 1.0 / p);
  r.norm_ratio = cn > 0.0 ? lp_norm(fv, {}, p, grid) / cn : 0.0;
  return r;
}

std::string interpolation_csv_header() { return "p,Z_count,node_err_max,norm_ratio,residual"; }

std::string interpolation_csv_row(const InterpolationReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << r.p << ',' << r.z_count << ',' << r.node_err_max << ',' << r.norm_ratio << ',' << r.residual;
  return os.str();
}

} // namespace bergman
