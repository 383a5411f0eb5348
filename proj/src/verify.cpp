#include "bergman/verify.hpp"

#include "bergman/dbar.hpp"
#include "bergman/density.hpp"
#include "bergman/extremal.hpp"
#include "bergman/interpolation.hpp"
#include "bergman/io.hpp"
#include "bergman/kernel_ops.hpp"
#include "bergman/quad.hpp"
#include "bergman/weights.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bergman {

bool SuiteResult::pass() const { return first_failure() == nullptr; }

const Measurement* SuiteResult::first_failure() const {
  for (const auto& m : rows) {
    if (!m.pass) return &m;
  }
  return nullptr;
}

void SuiteResult::append(const SuiteResult& other) { rows.insert(rows.end(), other.rows.begin(), other.rows.end()); }

namespace {

class Recorder {
public:
  explicit Recorder(std::string suite) { r_.suite = std::move(suite); }

  void check(const std::string& name, double value, const std::string& rel, double limit) {
    bool ok = false;
    if (rel == "<=") ok = value <= limit;
    if (rel == ">=") ok = value >= limit;
    if (rel == "<") ok = value < limit;
    if (rel == ">") ok = value > limit;
    r_.rows.push_back({r_.suite, name, value, rel, limit, ok});
  }
  void flag(const std::string& name, bool ok) { check(name, ok ? 1.0 : 0.0, ">=", 1.0); }
  void report(const std::string& name, double value) { r_.rows.push_back({r_.suite, name, value, "report", 0.0, true}); }

  SuiteResult done() { return std::move(r_); }

private:
  SuiteResult r_;
};

Point random_point(std::mt19937_64& rng, double rmax) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = rmax * std::sqrt(u(rng));
  return std::polar(r, 2.0 * kPi * u(rng));
}

PointSet random_set(std::mt19937_64& rng, std::size_t n, double rmax) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(random_point(rng, rmax));
  return PointSet(std::move(pts));
}

double rel_change(double a, double b) { return std::abs(b - a) / std::max(std::abs(a), 1e-300); }

SupportedField smooth_bump(Point c, double r) {
  return {[c, r](Point w) {
            const double t = 1.0 - std::norm(w - c) / (r * r);
            if (t <= 0.0) return Complex{};
            return (1.0 + w) * (t * t * t * t);
          },
          {c, r}};
}

PointSet default_lattice(const VerifyConfig& cfg) {
  return cfg.lattice ? *cfg.lattice : build_net(0.3, 0.55).centers;
}

} // namespace

SuiteResult check_psi_identity(const VerifyConfig& cfg) {
  Recorder rec("identities");
  std::mt19937_64 rng(cfg.seed);
  const std::size_t sizes[] = {1, 10, 10, 100, 100};
  for (std::size_t s = 0; s < 5; ++s) {
    const PointSet z = random_set(rng, sizes[s], 0.95);
    const WeightEval w(z);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Point x = random_point(rng, 0.99);
      const double e = std::abs(std::expm1(w.log_abs_psi(x) - w.log_sigma(x) - cfg.kz_scale * w.k(x)));
      worst = std::max(worst, e);
    }
    rec.check("psi_identity_relerr_set" + std::to_string(s) + "_n" + std::to_string(sizes[s]), worst, "<=", 1e-10);
  }
  return rec.done();
}

SuiteResult check_covariance(const VerifyConfig& cfg) {
  Recorder rec("identities");
  std::mt19937_64 rng(cfg.seed + 1);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const PointSet z = random_set(rng, 12, 0.95);
    for (int i = 0; i < 50; ++i) {
      const Point b = random_point(rng, 0.9), x = random_point(rng, 0.9);
      const Point mx = moebius(b, x);
      const double lhs = std::pow(one_minus_abs2(x), 2) * lap_kZ(z, x);
      const double rhs = std::pow(one_minus_abs2(mx), 2) * lap_kZ(z.moebius_image(b), mx);
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
  }
  rec.check("moebius_covariance_relerr", worst, "<=", 1e-10);

  // fitted constant c in (5-point Laplacian)/4 = c lap_kZ
  const PointSet z = random_set(rng, 12, 0.9);
  const WeightEval w(z);
  const double h = 1e-4;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Point x = random_point(rng, 0.7);
    const double fd = (w.k(x + h) + w.k(x - h) + w.k(x + Complex{0, h}) + w.k(x - Complex{0, h}) - 4.0 * w.k(x)) /
                      (4.0 * h * h);
    const double lk = w.lap_k(x);
    num += fd * lk;
    den += lk * lk;
  }
  rec.check("laplacian_fitted_constant_deviation", std::abs(num / den - 1.0), "<=", 1e-3);
  return rec.done();
}

SuiteResult check_forelli_rudin(const VerifyConfig&) {
  Recorder rec("kernels");
  const double params[4][2] = {{0.0, 1.0}, {0.5, 2.0}, {1.0, 2.5}, {-0.5, 1.0}};
  for (auto v : {FrVariant::Plain, FrVariant::Singular}) {
    const std::string tag = v == FrVariant::Plain ? "fr_plain" : "fr_singular";
    for (const auto& bm : params) {
      const FrFit f = forelli_rudin_check(bm[0], bm[1], v);
      rec.check(tag + "_slope_err_beta" + fmt(bm[0]) + "_M" + fmt(bm[1]), std::abs(f.slope - (bm[0] - bm[1])), "<=",
                0.05);
    }
  }
  return rec.done();
}

SuiteResult check_schur_window(const VerifyConfig& cfg) {
  Recorder rec("kernels");
  for (auto v : {KernelVariant::K, KernelVariant::B}) {
    const std::string tag = v == KernelVariant::K ? "schur_K" : "schur_B";
    const KernelSpec spec{0.0, 0.0, v};
    for (double al : {0.1, 0.25, 0.4}) rec.flag(tag + "_succeeds_alpha" + fmt(al), schur_certificate(spec, al).success);
    for (double al : {-0.1, 0.6}) rec.flag(tag + "_fails_alpha" + fmt(al), !schur_certificate(spec, al).success);
  }
  const KernelSpec spec{0.0, 0.0, KernelVariant::K};
  const SchurResult s = schur_certificate(spec, 0.25);
  rec.report("schur_K_bound_alpha0.25", s.bound);
  const NormEstimate e = empirical_norm(spec, test_ensemble(32, cfg.seed), DiskGrid::polar(0.99, 40));
  rec.check("schur_K_empirical_norm", e.max_ratio, "<=", s.bound);
  return rec.done();
}

SuiteResult check_extremal(const VerifyConfig&) {
  Recorder rec("extremal");
  const DiskGrid g = DiskGrid::polar(0.99, 64);
  const PointSet one(std::vector<Point>{{0.5, 0.0}});
  const PointSet five(std::vector<Point>{{0.5, 0}, {-0.3, 0.4}, {0.1, -0.6}, {0.7, 0.2}, {-0.5, -0.5}});
  for (double p : {1.0, 2.0, 4.0}) {
    const std::string tag = "p" + fmt(p);
    const ExtremalSolution s = solve_extremal_general(five, p, 8, g);
    rec.flag(tag + "_converged", s.converged);
    rec.check(tag + "_norm_err", std::abs(model_norm(s.model, p, g) - 1.0), "<=", 1e-8);
    const auto r = harm_eval_check(s.model, p, 4, g);
    for (std::size_t k = 0; k < r.size(); ++k) rec.check(tag + "_harm_residual_" + std::to_string(k), r[k], "<=", 1e-5);
  }
  int idx = 0;
  for (const PointSet* w : {&one, &five}) {
    const double a = solve_extremal_general(*w, 2.0, 8, g).value;
    const double b = solve_extremal_p2(*w, 8, g).value;
    rec.report("p2_closed_form_value_set" + std::to_string(idx), b);
    rec.check("p2_closed_vs_general_set" + std::to_string(idx), std::abs(a - b), "<=", 1e-3);
    ++idx;
  }
  // negative control: 1 + z is not extremal
  AnalyticModel f;
  f.polycoeffs = {1.0, 1.0};
  f.expcoeffs[0] -= std::log(model_norm(f, 2.0, g));
  rec.check("non_extremal_harm_residual_re_z", harm_eval_check(f, 2.0, 1, g)[1], ">", 1e-2);
  return rec.done();
}

SuiteResult check_dbar(const VerifyConfig& cfg) {
  Recorder rec("dbar");
  const PointSet z = default_lattice(cfg);
  const SupportedField f = smooth_bump({0.0, 0.0}, 0.3);
  const CoveringNet net = build_net(0.5, 0.7);
  GaOptions go;
  go.region = f.support;
  const GaFamily fam = build_ga_family(z, 2.0, net, separation_constant(z), go);
  std::vector<SolverReport> plain, patched;
  // one refinement step: twice the radial nodes and one more pole-rule level
  for (int level : {1, 2}) {
    const DiskGrid g = build_grid(0.7, 8 * level, {}, level);
    plain.push_back(solve_plain(f, 2, z, 2.0, g).report);
    patched.push_back(solve_patched(f, z, 2.0, fam, build_partition(net, g), 2, g).report);
  }
  for (auto [tag, reps] : {std::pair{"plain", &plain}, std::pair{"patched", &patched}}) {
    for (std::size_t d = 0; d < 2; ++d) {
      const std::string t = std::string(tag) + "_level" + std::to_string(d + 1);
      rec.check(t + "_residual_ratio", (*reps)[d].residual_ratio, "<=", 5e-3);
      rec.report(t + "_bound_ratio", (*reps)[d].bound_ratio);
    }
    rec.check(std::string(tag) + "_bound_ratio_refinement_change",
              rel_change((*reps)[0].bound_ratio, (*reps)[1].bound_ratio), "<", 0.3);
  }
  return rec.done();
}

SuiteResult check_interpolation(const VerifyConfig& cfg) {
  Recorder rec("interpolate");
  const PointSet z = default_lattice(cfg);
  rec.report("lattice_size", static_cast<double>(z.size()));
  rec.report("lattice_separation", separation_constant(z));
  std::vector<std::vector<double>> ratios;
  const int nr[2] = {cfg.interp_n_radial_lo, cfg.interp_n_radial_hi};
  for (int n : nr) {
    const DiskGrid grid = build_grid(0.7, n, {}, cfg.interp_depth);
    const Interpolator it(z, 2.0, grid);
    std::vector<double> rs;
    double node_err = 0.0, resid = 0.0;
    for (int k = 0; k < cfg.interp_targets; ++k) {
      const auto r = it.run(random_unit_targets(z, cfg.seed + k));
      node_err = std::max(node_err, r.report.node_err_max);
      resid = std::max(resid, r.report.solver.residual_ratio);
      rs.push_back(r.report.norm_ratio);
    }
    const std::string t = "nradial" + std::to_string(n);
    rec.check(t + "_node_err_max", node_err, "<=", 1e-6);
    rec.check(t + "_solver_residual_max", resid, "<=", 5e-3);
    const double mx = *std::max_element(rs.begin(), rs.end());
    rec.check(t + "_norm_ratio_max_finite", std::isfinite(mx) ? 1.0 : 0.0, ">=", 1.0);
    rec.report(t + "_norm_ratio_max", mx);
    ratios.push_back(rs);
  }
  double var = 0.0, limit = 0.0;
  for (std::size_t k = 0; k < ratios[0].size(); ++k) {
    var = std::max(var, rel_change(ratios[0][k], ratios[1][k]));
    // first-order extrapolation in 1/n_radial
    const double e = (nr[1] * ratios[1][k] - nr[0] * ratios[0][k]) / (nr[1] - nr[0]);
    limit = std::max(limit, e);
  }
  rec.check("norm_ratio_refinement_variation", var, "<", 0.2);
  rec.report("norm_ratio_max_extrapolated", limit);
  return rec.done();
}

SuiteResult check_density_forms(const VerifyConfig& cfg) {
  Recorder rec("density");
  std::mt19937_64 rng(cfg.seed + 2);
  double worst = 0.0;
  for (std::size_t n : {1u, 10u, 100u}) {
    const PointSet z = random_set(rng, n, 0.95);
    for (double r : {0.3, 0.7, 0.95}) {
      worst = std::max(worst, rel_change(splus_circle_mean(z, r), splus_circle_quadrature(z, r)));
    }
  }
  rec.check("circle_mean_closed_vs_quadrature", worst, "<=", 1e-8);

  const PointSet centers = build_net(0.6, 0.5).centers;
  const double r = 0.9;
  int agree = 0, total = 0;
  for (double eta : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    const PointSet z = build_net(eta, 0.8).centers;
    for (double p : {1.0, 2.0, 4.0}) {
      const double a = seip_criterion_means(z, p, r, centers);
      const double b = seip_criterion_laplace(z, p, r, centers).margin;
      const std::string t = "eta" + fmt(eta) + "_p" + fmt(p);
      rec.report(t + "_means_margin", a);
      rec.report(t + "_laplace_margin", b);
      agree += (a > 0.0) == (b > 0.0);
      ++total;
    }
  }
  rec.check("sweep_sign_agreement", agree, ">=", total);

  // sparse lattice: positive margin in both forms
  const PointSet sparse = separated_lattice(0.98, 0.995);
  rec.check("sparse_means_margin_p2", seip_criterion_means(sparse, 2.0, 0.99, centers), ">", 0.0);
  rec.check("sparse_laplace_margin_p2", seip_criterion_laplace(sparse, 2.0, 0.99, centers).margin, ">", 0.0);
  rec.check("empty_means_margin", seip_criterion_means(PointSet{}, 2.0, r, centers), ">=", 1.0);
  return rec.done();
}

SuiteResult check_phi_star(const VerifyConfig&) {
  Recorder rec("density");
  double worst = 0.0;
  for (double rs : {0.3, 0.5, 0.8}) {
    for (Point w : {Point{}, Point{0.4, -0.3}, Point{-0.9, 0.1}}) {
      worst = std::max(worst, std::abs(invariant_average([](Point) { return 2.5; }, w, rs) - 2.5));
    }
  }
  rec.check("constant_smoothing_err", worst, "<=", 1e-10);

  const double rs = 0.5, inner = 0.3;
  const DiskGrid grid = build_grid(0.9, 12, {}, 1);
  std::vector<double> dev;
  for (double rmax : {0.99, 0.995}) {
    dev.push_back(phi_star_deviation(PhiField(separated_lattice(0.98, rmax), 2.0, rs), grid, inner));
    rec.report("sparse_sup_phistar_minus_phi_rmax" + fmt(rmax), dev.back());
  }
  rec.check("sparse_sup_phistar_minus_phi_finite", std::isfinite(dev[0]) && std::isfinite(dev[1]) ? 1 : 0, ">=", 1);
  rec.check("sparse_sup_phistar_minus_phi_rmax_change", rel_change(dev[0], dev[1]), "<", 0.1);

  const LaplacianCheck s = phi_star_laplacian_check(PhiField(separated_lattice(0.98, 0.995), 2.0, rs), grid, inner);
  rec.check("sparse_inv_laplacian_min", std::min(s.min_val, s.min_refined), ">", 0.0);
  rec.check("sparse_inv_laplacian_max", std::max(s.max_val, s.max_refined), "<=", 1.02);
  rec.check("sparse_inv_laplacian_refinement_stable", s.noisy ? 0 : 1, ">=", 1);
  const LaplacianCheck d = phi_star_laplacian_check(PhiField(build_net(0.3, 0.55).centers, 2.0, rs), grid, inner);
  rec.check("dense_inv_laplacian_min", d.min_val, "<=", 0.0);

  const PointSet c = build_net(0.6, 0.3).centers;
  const double sm = ortega_condition(PhiField(separated_lattice(0.98, 0.995), 2.0, rs), rs, c, grid);
  const double dm = ortega_condition(PhiField(build_net(0.3, 0.55).centers, 2.0, rs), rs, c, grid);
  rec.report("sparse_min_mass", sm);
  rec.report("dense_min_mass", dm);
  rec.check("sparse_min_mass", sm, ">", 0.0);
  rec.check("dense_min_mass", dm, "<", 0.0);
  return rec.done();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "kernels", "extremal", "dbar", "interpolate", "density"};
  return names;
}

SuiteResult run_suite(const std::string& name, const VerifyConfig& cfg) {
  SuiteResult out;
  out.suite = name;
  if (name == "identities") {
    out.append(check_psi_identity(cfg));
    out.append(check_covariance(cfg));
  } else if (name == "kernels") {
    out.append(check_forelli_rudin(cfg));
    out.append(check_schur_window(cfg));
  } else if (name == "extremal") {
    out.append(check_extremal(cfg));
  } else if (name == "dbar") {
    out.append(check_dbar(cfg));
  } else if (name == "interpolate") {
    out.append(check_interpolation(cfg));
  } else if (name == "density") {
    out.append(check_density_forms(cfg));
    out.append(check_phi_star(cfg));
  } else {
    throw DomainError("unknown suite: " + name);
  }
  return out;
}

std::string verify_csv(const SuiteResult& r) {
  std::string s = csv_conventions() + "\nsuite,name,value,relation,limit,pass\n";
  for (const auto& m : r.rows) {
    s += m.suite + "," + m.name + "," + fmt(m.value) + "," + m.relation + "," + fmt(m.limit) + "," +
         (m.pass ? "1" : "0") + "\n";
  }
  return s;
}

} // namespace bergman
