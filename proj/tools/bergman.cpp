#include "bergman/dbar.hpp"
#include "bergman/density.hpp"
#include "bergman/extremal.hpp"
#include "bergman/geometry.hpp"
#include "bergman/interpolation.hpp"
#include "bergman/io.hpp"
#include "bergman/verify.hpp"
#include "bergman/weights.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>

using namespace bergman;

namespace {

constexpr int kOk = 0;
constexpr int kAssertion = 1;
constexpr int kUsage = 2;
constexpr int kNumeric = 3;

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text(out, text);
  }
}

Point parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw DomainError("expected re,im: " + s);
  const double re = std::stod(s.substr(0, comma));
  const double im = std::stod(s.substr(comma + 1));
  if (!std::isfinite(re) || !std::isfinite(im)) throw DomainError("non-finite point: " + s);
  return {re, im};
}

PointSet load_or_empty(const std::string& path) { return path.empty() ? PointSet{} : load_point_set(path); }

struct GridOpts {
  double rmax = 0.7;
  int n_radial = 16;
  int depth = 2;

  void add(CLI::App* app) {
    app->add_option("--rmax", rmax, "grid disk radius")->check(CLI::Range(0.05, 1.0));
    app->add_option("--n-radial", n_radial, "radial rings of the grid")->check(CLI::Range(4, 4096));
    app->add_option("--depth", depth, "pole-rule refinement depth")->check(CLI::Range(1, 12));
  }
  DiskGrid build() const { return build_grid(rmax, n_radial, {}, depth); }
};

// gen-lattice
struct GenLattice {
  double eta = 0.3, rmax = 0.55, sep = 0.0;
  std::string out;
  void add(CLI::App& app) {
    auto* c = app.add_subcommand("gen-lattice", "write a separated net as a point-set file");
    c->add_option("--eta", eta, "net radius (separation eta/2)")->check(CLI::Range(1e-3, 0.999));
    c->add_option("--rmax", rmax, "truncation radius")->check(CLI::Range(1e-6, 0.9999));
    c->add_option("--sep", sep, "if set: greedy lattice with this separation instead of the net")
        ->check(CLI::Range(0.0, 0.999));
    c->add_option("-o,--out", out, "point-set file (stdout if omitted)");
    c->callback([this] { run(); });
  }
  void run() const {
    const PointSet z = sep > 0.0 ? separated_lattice(sep, rmax) : build_net(eta, rmax).centers;
    emit(out, format_point_set(z));
    std::cerr << "points " << z.size() << " separation " << fmt(z.size() > 1 ? separation_constant(z) : 1.0) << '\n';
  }
};

// eval-weight
struct EvalWeight {
  std::string points, out;
  std::vector<std::string> at;
  int n = 0;
  double scan_rmax = 0.9;
  void add(CLI::App& app) {
    auto* c = app.add_subcommand("eval-weight", "k_Z, lap k_Z, log|Psi_Z| and log sigma_Z at points");
    c->add_option("-z,--points", points, "point-set file (empty set if omitted)");
    c->add_option("--at", at, "evaluation point re,im (repeatable)");
    c->add_option("--scan", n, "also evaluate on an n x n square scan of |z| < scan-rmax")->check(CLI::Range(0, 2000));
    c->add_option("--scan-rmax", scan_rmax)->check(CLI::Range(0.0, 0.9999));
    c->add_option("-o,--out", out, "CSV file");
    c->callback([this] { run(); });
  }
  void run() const {
    const WeightEval w(load_or_empty(points));
    std::vector<Point> xs;
    for (const auto& s : at) xs.push_back(parse_point(s));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Point x{-scan_rmax + 2.0 * scan_rmax * (i + 0.5) / n, -scan_rmax + 2.0 * scan_rmax * (j + 0.5) / n};
        if (std::abs(x) < scan_rmax) xs.push_back(x);
      }
    }
    std::string s = csv_conventions() + "\nre,im,k_Z,lap_k_Z,log_abs_Psi_Z,log_sigma_Z\n";
    for (auto x : xs) {
      if (!inside_disk(x)) throw DomainError("evaluation point outside the disk");
      s += fmt(x.real()) + "," + fmt(x.imag()) + "," + fmt(w.k(x)) + "," + fmt(w.lap_k(x)) + "," +
           fmt(w.log_abs_psi(x)) + "," + fmt(w.log_sigma(x)) + "\n";
    }
    emit(out, s);
  }
};

// extremal
struct Extremal {
  std::string zeros, out, model_out;
  double p = 2.0;
  int degree = 8, kmax = 4;
  bool gram = false;
  GridOpts grid{0.99, 64, 1};
  void add(CLI::App& app) {
    auto* c = app.add_subcommand("extremal", "maximize |f(0)| over ||f||_p <= 1 with prescribed zeros");
    c->add_option("-z,--points", zeros, "zero set W (empty if omitted)");
    c->add_option("-p,--p", p)->check(CLI::Range(0.1, 64.0));
    c->add_option("--degree", degree)->check(CLI::Range(0, 64));
    c->add_option("--kmax", kmax, "harmonic test degree")->check(CLI::Range(0, 32));
    c->add_flag("--gram", gram, "p = 2 Gram-matrix solution over G_W times polynomials");
    c->add_option("--model-out", model_out, "model file for the extremal function");
    c->add_option("-o,--out", out, "CSV file");
    grid.add(c);
    c->callback([this] { run(); });
  }
  void run() const {
    const PointSet w = load_or_empty(zeros);
    const DiskGrid g = DiskGrid::polar(grid.rmax, grid.n_radial);
    if (gram && p != 2.0) throw DomainError("--gram needs p = 2");
    const ExtremalSolution s = gram ? solve_extremal_p2(w, degree, g) : solve_extremal_general(w, p, degree, g);
    for (const auto& m : s.warnings) std::cerr << "warning: " << m << '\n';
    const auto r = harm_eval_check(s.model, p, kmax, g);
    const double hmax = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
    std::string csv = csv_conventions() + "\np,degree,W_count,value,norm,iterations,converged,harm_residual_max\n";
    csv += fmt(p) + "," + std::to_string(degree) + "," + std::to_string(w.size()) + "," + fmt(s.value) + "," +
           fmt(model_norm(s.model, p, g)) + "," + std::to_string(s.iterations) + "," +
           (s.converged ? "1" : "0") + "," + fmt(hmax) + "\n";
    emit(out, csv);
    if (!model_out.empty()) write_text(model_out, format_model(s.model));
    if (!gram && !s.converged) throw NumericError("extremal: optimizer did not converge");
  }
};

// solve-dbar
struct SolveDbar {
  std::string points, out, series;
  double p = 2.0;
  int m = 2;
  std::string solver = "plain", data = "bump";
  std::string center = "0,0";
  double radius = 0.3, net_eta = 0.5;
  std::vector<int> levels{1, 2};
  GridOpts grid{0.7, 8, 1};
  void add(CLI::App& app) {
    auto* c = app.add_subcommand("solve-dbar", "solve (1-|z|^2) dbar u = f");
    c->add_option("-z,--points", points, "point set Z for the weighted norms (empty if omitted)");
    c->add_option("-p,--p", p)->check(CLI::Range(1.0, 64.0));
    c->add_option("-m,--m", m, "kernel power")->check(CLI::Range(0, 8));
    c->add_option("--solver", solver)->check(CLI::IsMember({"plain", "patched"}));
    c->add_option("--data", data, "bump: (1+w)(1-|w-c|^2/r^2)^4; zero: f = 0")->check(CLI::IsMember({"bump", "zero"}));
    c->add_option("--center", center, "bump center re,im");
    c->add_option("--radius", radius, "bump radius")->check(CLI::Range(1e-3, 1.0));
    c->add_option("--net-eta", net_eta, "covering net of the patched solver")->check(CLI::Range(0.05, 0.95));
    c->add_option("--levels", levels, "refinement levels: level k uses k n-radial rings and depth k+depth-1")
        ->check(CLI::Range(1, 8));
    c->add_option("--series", series, "residual-vs-level series file");
    c->add_option("-o,--out", out, "CSV file");
    grid.add(c);
    c->callback([this] { run(); });
  }
  void run() const {
    const PointSet z = load_or_empty(points);
    const Point c = parse_point(center);
    SupportedField f;
    if (data == "zero") {
      f = {[](Point) { return Complex{}; }, {c, radius}};
    } else {
      const double r = radius;
      f = {[c, r](Point w) {
             const double t = 1.0 - std::norm(w - c) / (r * r);
             return t <= 0.0 ? Complex{} : (1.0 + w) * (t * t * t * t);
           },
           {c, r}};
    }
    std::optional<CoveringNet> net;
    std::optional<GaFamily> fam;
    if (solver == "patched") {
      net = build_net(net_eta, grid.rmax);
      GaOptions go;
      go.region = f.support;
      fam = build_ga_family(z, p, *net, z.size() > 1 ? separation_constant(z) : 0.0, go);
    }
    std::string csv = csv_conventions() + "\n" + solver_csv_header() + "\n";
    std::vector<double> xs, ys;
    bool ok = true;
    for (int level : levels) {
      const DiskGrid g = build_grid(grid.rmax, grid.n_radial * level, {}, grid.depth + level - 1);
      const DbarSolution s = solver == "plain" ? solve_plain(f, m, z, p, g)
                                               : solve_patched(f, z, p, *fam, build_partition(*net, g), m, g);
      csv += solver_csv_row(s.report) + "\n";
      xs.push_back(level);
      ys.push_back(s.report.residual_ratio);
      ok = ok && s.report.success;
      if (!s.report.success) std::cerr << "level " << level << ": " << s.report.message << '\n';
    }
    emit(out, csv);
    if (!series.empty()) write_text(series, format_series("level", "residual_ratio", xs, ys));
    if (!ok) throw NumericError("solve-dbar: residual above tolerance");
  }
};

// interpolate
struct Interpolate {
  std::string points, targets, out, values_out;
  double p = 2.0;
  std::uint64_t seed = 1;
  int count = 1;
  double eta = 0.0;
  GridOpts grid;
  void add(CLI::App& app) {
    auto* c = app.add_subcommand("interpolate", "bump interpolant plus dbar correction");
    auto* zp = c->add_option("-z,--points", points, "point set; random unit targets from --seed");
    auto* tp = c->add_option("-t,--targets", targets, "target-values file");
    zp->excludes(tp);
    c->add_option("-p,--p", p)->check(CLI::Range(1.0, 64.0));
    c->add_option("--seed", seed);
    c->add_option("--count", count, "random target vectors (with --points)")->check(CLI::Range(1, 1000));
    c->add_option("--eta", eta, "bump radius (default 0.4 times the separation)")->check(CLI::Range(0.0, 0.5));
    c->add_option("--values-out", values_out, "f at the targets, as a target-values file (first run)");
    c->add_option("-o,--out", out, "CSV file");
    grid.add(c);
    c->callback([this] { run(); });
  }
  void run() const {
    if (points.empty() == targets.empty()) throw DomainError("interpolate: give exactly one of --points, --targets");
    std::vector<TargetValues> runs;
    if (!targets.empty()) {
      runs.push_back(load_targets(targets));
    } else {
      const PointSet z = load_point_set(points);
      std::cerr << "seed " << seed << '\n';
      for (int k = 0; k < count; ++k) runs.push_back(random_unit_targets(z, seed + k));
    }
    InterpolationOptions opt;
    opt.eta = eta;
    const DiskGrid g = grid.build();
    const Interpolator it(runs.front().z, p, g, opt);
    std::string csv = csv_conventions() + "\n" + interpolation_csv_header() + "\n";
    bool ok = true;
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const auto r = it.run(runs[k]);
      csv += interpolation_csv_row(r.report) + "\n";
      ok = ok && r.report.success;
      if (k == 0 && !values_out.empty()) {
        TargetValues v{runs[k].z, {}};
        for (auto a : v.z.points()) v.values.push_back(r.f(a));
        write_text(values_out, format_targets(v));
      }
    }
    emit(out, csv);
    if (!ok) throw NumericError("interpolate: correction solve above tolerance");
  }
};

// density
struct Density {
  std::string points, out, series;
  double p = 2.0;
  std::vector<double> r{0.5, 0.7, 0.9, 0.95, 0.99};
  double centers_eta = 0.6, centers_rmax = 0.5;
  void add(CLI::App& app) {
    auto* c = app.add_subcommand("density", "upper density and the circle-mean criterion");
    c->add_option("-z,--points", points, "point set (empty if omitted)");
    c->add_option("-p,--p", p)->check(CLI::Range(0.01, 64.0));
    c->add_option("-r,--r", r, "radii")->check(CLI::Range(1e-6, 0.999999));
    c->add_option("--centers-eta", centers_eta, "net of centers")->check(CLI::Range(0.05, 0.95));
    c->add_option("--centers-rmax", centers_rmax)->check(CLI::Range(0.0, 0.99));
    c->add_option("--series", series, "margin-vs-r series file");
    c->add_option("-o,--out", out, "CSV file");
    c->callback([this] { run(); });
  }
  void run() const {
    const PointSet z = load_or_empty(points);
    const DensityReport rep = density_report(z, p, r, build_net(centers_eta, centers_rmax).centers);
    emit(out, csv_conventions() + "\n" + density_csv_header() + "\n" + density_csv_rows(rep));
    if (!series.empty()) write_text(series, format_series("r", "margin", rep.r, rep.margin_by_r));
    std::cerr << "density " << fmt(rep.density) << " margin " << fmt(rep.margin_by_r.back()) << '\n';
  }
};

// verify
struct Verify {
  std::string suite = "identities", out, lattice;
  std::uint64_t seed = 1;
  double kz_scale = 1.0;
  void add(CLI::App& app) {
    auto* c = app.add_subcommand("verify", "run a property suite; exit 1 on a failed assertion");
    c->add_option("--suite", suite)->check(CLI::IsMember(suite_names()));
    c->add_option("--seed", seed);
    c->add_option("--kz-scale", kz_scale, "scale k_Z in the identity checks (negative control)");
    c->add_option("--lattice", lattice, "interpolation lattice point-set file");
    c->add_option("-o,--out", out, "CSV file");
    c->callback([this] { run(); });
  }
  int status = kOk;
  void run() {
    VerifyConfig cfg;
    cfg.seed = seed;
    cfg.kz_scale = kz_scale;
    if (!lattice.empty()) cfg.lattice = load_point_set(lattice);
    std::cerr << "seed " << seed << '\n';
    const SuiteResult r = run_suite(suite, cfg);
    emit(out, verify_csv(r));
    if (const Measurement* m = r.first_failure()) {
      std::cerr << "FAIL " << m->suite << "/" << m->name << ": " << fmt(m->value) << " " << m->relation << " "
                << fmt(m->limit) << '\n';
      status = kAssertion;
    }
  }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Bergman-space toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value file; sections name subcommands");
  GenLattice gen;
  EvalWeight ew;
  Extremal ex;
  SolveDbar sd;
  Interpolate ip;
  Density de;
  Verify ve;
  gen.add(app);
  ew.add(app);
  ex.add(app);
  sd.add(app);
  ip.add(app);
  de.add(app);
  ve.add(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return ve.status;
}
