#include "bergman/extremal.hpp"

#include "bergman/weights.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace bergman {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kGradientTolerance = 1e-13;

Complex horner(const std::vector<Complex>& c, Point z) {
  Complex v{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

// log of the zero factor as a complex number (a branch; real part exact)
Complex log_zero_factor(const AnalyticModel& m, const WeightEval* we, Point z) {
  if (m.factor == ZeroFactor::Psi) return we->log_psi(z);
  Complex acc{};
  for (std::size_t i = 0; i < m.zeros.size(); ++i) {
    const Point a = m.zeros[i];
    const Complex t = a == Complex{} ? z : std::conj(a) / std::abs(a) * moebius(a, z);
    acc += static_cast<double>(m.zeros.multiplicity(i)) * std::log(t);
  }
  return acc;
}

double log_sum_exp(const std::vector<double>& v) {
  double mx = kNegInf;
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - mx);
  return mx + std::log(acc);
}

} // namespace

ModelEval::ModelEval(const AnalyticModel& m) : m_(m) {
  if (m_.expcoeffs.empty()) m_.expcoeffs.push_back(Complex{});
  we_ = WeightEval(m_.zeros);
}

double ModelEval::log_abs(Point z) const {
  double l = m_.factor == ZeroFactor::Psi ? we_.log_abs_psi(z) : log_zero_factor(m_, &we_, z).real();
  l += horner(m_.expcoeffs, z).real();
  if (!m_.polycoeffs.empty()) l += std::log(std::abs(horner(m_.polycoeffs, z)));
  return l;
}

Complex ModelEval::value(Point z) const {
  Complex v = std::exp(log_zero_factor(m_, &we_, z) + horner(m_.expcoeffs, z));
  if (!m_.polycoeffs.empty()) v *= horner(m_.polycoeffs, z);
  return v;
}

Field model_field(const AnalyticModel& m) {
  auto ev = std::make_shared<ModelEval>(m);
  return [ev](Point z) { return ev->value(z); };
}

double model_norm(const AnalyticModel& m, double p, const DiskGrid& grid) {
  if (!(p > 0.0)) throw DomainError("model_norm: p must be positive");
  const ModelEval ev(m);
  std::vector<double> l(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) l[i] = p * ev.log_abs(grid.node(i)) + std::log(grid.weight(i));
  return std::exp(log_sum_exp(l) / p);
}

namespace {

void require_no_origin(const PointSet& w, const char* who) {
  for (auto a : w.points()) {
    if (a == Complex{}) throw DomainError(std::string(who) + ": 0 must not be a prescribed zero");
  }
}

std::vector<Complex> polynomial_roots(std::vector<Complex> c) {
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * std::abs(c.front())) c.pop_back();
  const int d = static_cast<int>(c.size()) - 1;
  if (d < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<Complex> roots(d);
  for (int i = 0; i < d; ++i) roots[i] = es.eigenvalues()(i);
  return roots;
}

} // namespace

ExtremalSolution solve_extremal_p2(const PointSet& w, int degree, const DiskGrid& grid) {
  require_no_origin(w, "solve_extremal_p2");
  if (degree < 0) throw DomainError("solve_extremal_p2: degree must be non-negative");
  AnalyticModel m;
  m.zeros = w;
  m.factor = ZeroFactor::Blaschke;
  const ModelEval blaschke(m);
  const int n = degree + 1;
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd pw(n);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point z = grid.node(i);
    const double g2 = std::exp(2.0 * blaschke.log_abs(z)) * grid.weight(i);
    pw(0) = 1.0;
    for (int k = 1; k < n; ++k) pw(k) = pw(k - 1) * z;
    gram.noalias() += g2 * pw.conjugate() * pw.transpose();
  }
  gram = 0.5 * (gram + gram.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(n - 1);
  if (!(lo > 0.0) || hi / lo > 1e12) throw NumericError("solve_extremal_p2: Gram matrix is ill-conditioned");
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(n);
  e0(0) = 1.0;
  const Eigen::VectorXcd x = gram.llt().solve(e0);
  const double x0 = x(0).real();
  ExtremalSolution sol;
  m.polycoeffs.resize(n);
  for (int k = 0; k < n; ++k) m.polycoeffs[k] = x(k) / std::sqrt(x0);
  m.expcoeffs = {Complex{}};
  sol.value = std::exp(blaschke.log_abs(0.0)) * std::sqrt(x0);
  sol.model = std::move(m);
  sol.converged = true;
  for (auto r : polynomial_roots(sol.model.polycoeffs)) {
    if (std::abs(r) <= grid.rmax()) {
      sol.warnings.push_back("polynomial factor has a root inside the truncated disk");
      break;
    }
  }
  return sol;
}

ExtremalSolution solve_extremal_general(const PointSet& w, double p, int degree, const DiskGrid& grid,
                                        const ExtremalOptions& opt) {
  require_no_origin(w, "solve_extremal_general");
  if (!(p > 0.0)) throw DomainError("solve_extremal_general: p must be positive");
  if (degree < 0) throw DomainError("solve_extremal_general: degree must be non-negative");
  const WeightEval we(w);
  const int nb = 2 * degree;
  std::vector<double> base;
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double l = p * (we.log_abs_psi(grid.node(i)) + opt.initial_q0.real()) + std::log(grid.weight(i));
    if (std::isfinite(l)) {
      base.push_back(l);
      nodes.push_back(i);
    }
  }
  const std::size_t n = nodes.size();
  Eigen::MatrixXd phi(n, nb);
  for (std::size_t r = 0; r < n; ++r) {
    const Point z = grid.node(nodes[r]);
    Complex zk = 1.0;
    for (int k = 1; k <= degree; ++k) {
      zk *= z;
      phi(r, 2 * k - 2) = zk.real();
      phi(r, 2 * k - 1) = -zk.imag();
    }
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nb);
  std::vector<double> l(n);
  auto lse_at = [&](const Eigen::VectorXd& cc) {
    const Eigen::VectorXd lin = p * (phi * cc);
    for (std::size_t r = 0; r < n; ++r) l[r] = base[r] + lin(r);
    return log_sum_exp(l);
  };

  ExtremalSolution sol;
  double lse = lse_at(c);
  Eigen::VectorXd mu(n);
  double tau = 0.0; // Levenberg-Marquardt shift, used when the covariance is near singular
  for (int it = 0; it < opt.max_iterations && nb > 0; ++it) {
    for (std::size_t r = 0; r < n; ++r) mu(r) = std::exp(l[r] - lse);
    const Eigen::VectorXd mean = phi.transpose() * mu;
    Eigen::MatrixXd cov = phi.transpose() * mu.asDiagonal() * phi;
    cov -= mean * mean.transpose();
    cov *= p;
    sol.gradient_norm = mean.lpNorm<Eigen::Infinity>();
    sol.iterations = it + 1;
    if (sol.gradient_norm <= kGradientTolerance) {
      sol.converged = true;
      break;
    }
    const double scale = 1e-12 * (1.0 + cov.diagonal().maxCoeff());
    bool moved = false;
    for (int attempt = 0; attempt < 40 && !moved; ++attempt) {
      const Eigen::MatrixXd hm = cov + tau * Eigen::MatrixXd::Identity(nb, nb);
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(hm);
      const Eigen::VectorXd step = -ldlt.solve(mean);
      const double dec = -mean.dot(step); // Newton decrement squared
      if (ldlt.info() != Eigen::Success || !(dec > 0.0) || !step.allFinite()) {
        tau = std::max(2.0 * tau, scale);
        continue;
      }
      if (0.5 * dec <= opt.tolerance * 1e-6) {
        sol.converged = true;
        break;
      }
      // the objective is -lse/p; backtrack until it increases enough
      double t = 1.0;
      for (int bt = 0; bt < 40; ++bt) {
        const Eigen::VectorXd trial = c + t * step;
        const double next = lse_at(trial);
        if (-(next - lse) / p >= 0.25 * t * dec) {
          c = trial;
          lse = next;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (moved) {
        tau *= 0.1;
        if (tau < scale) tau = 0.0;
      } else {
        tau = std::max(10.0 * tau, scale);
      }
    }
    lse = lse_at(c); // refresh l for the accepted point
    if (sol.converged || !moved) break;
  }
  if (nb == 0) sol.converged = true;
  if (!sol.converged) sol.warnings.push_back("Newton iteration did not converge");

  AnalyticModel m;
  m.zeros = w;
  m.expcoeffs.assign(degree + 1, Complex{});
  m.expcoeffs[0] = Complex{opt.initial_q0.real() - lse / p, opt.initial_q0.imag()};
  for (int k = 1; k <= degree; ++k) m.expcoeffs[k] = Complex{c(2 * k - 2), c(2 * k - 1)};
  sol.value = std::exp(we.log_abs_psi(0.0) + m.expcoeffs[0].real());
  sol.model = std::move(m);
  return sol;
}

std::vector<double> harm_eval_check(const AnalyticModel& f, double p, int kmax, const DiskGrid& grid) {
  if (kmax < 0) throw DomainError("harm_eval_check: kmax must be non-negative");
  const ModelEval ev(f);
  std::vector<double> acc(1 + 2 * kmax, 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point z = grid.node(i);
    const double la = ev.log_abs(z);
    if (!std::isfinite(la)) continue;
    const double m = std::exp(p * la) * grid.weight(i);
    acc[0] += m;
    Complex zk = 1.0;
    for (int k = 1; k <= kmax; ++k) {
      zk *= z;
      acc[2 * k - 1] += m * zk.real();
      acc[2 * k] += m * zk.imag();
    }
  }
  acc[0] -= 1.0;
  for (auto& x : acc) x = std::abs(x);
  return acc;
}

namespace {

std::vector<double> refined_radii(double rmax) {
  std::vector<double> r;
  for (int k = 0; k < 10; ++k) r.push_back(0.1 * k);
  for (double t = 0.1; 1.0 - t < rmax; t *= 0.8) r.push_back(1.0 - t);
  r.push_back(rmax);
  return r;
}

constexpr int kGrowthAngles = 256;

} // namespace

GrowthReport growth_check(const AnalyticModel& f, const PointSet& z, double p) {
  if (!(p > 0.0)) throw DomainError("growth_check: p must be positive");
  const ModelEval ev(f);
  const WeightEval wz(z);
  GrowthReport rep;
  rep.rmax = {0.99, 0.995};
  for (double rm : rep.rmax) {
    double c = 0.0, cp = 0.0;
    for (double r : refined_radii(rm)) {
      const int na = r == 0.0 ? 1 : kGrowthAngles;
      for (int j = 0; j < na; ++j) {
        const Point x = std::polar(r, 2.0 * kPi * j / na);
        const double la = ev.log_abs(x);
        const double lt = std::log(one_minus_abs2(x));
        if (std::isfinite(la)) c = std::max(c, std::exp(p * la + lt));
        // |f/Psi_Z| e^{k_Z} = |f| / sigma_Z
        const double lq = la - wz.log_sigma(x);
        if (std::isfinite(lq)) cp = std::max(cp, std::exp(p * lq + lt));
      }
    }
    rep.c_by_rmax.push_back(c);
    rep.c_prime_by_rmax.push_back(cp);
  }
  rep.c = rep.c_by_rmax.back();
  rep.c_prime = rep.c_prime_by_rmax.back();
  auto close = [](double a, double b) { return std::abs(b - a) <= 0.05 * std::abs(a); };
  rep.stable = close(rep.c_by_rmax[0], rep.c_by_rmax[1]) && close(rep.c_prime_by_rmax[0], rep.c_prime_by_rmax[1]);
  return rep;
}

AnalyticModel divide_out_zeros(const AnalyticModel& f, const PointSet& drop) {
  std::vector<Point> pts(f.zeros.points().begin(), f.zeros.points().end());
  std::vector<int> mult(f.zeros.multiplicities().begin(), f.zeros.multiplicities().end());
  for (std::size_t i = 0; i < drop.size(); ++i) {
    int need = drop.multiplicity(i);
    for (std::size_t j = 0; j < pts.size() && need > 0; ++j) {
      if (pts[j] != drop[i]) continue;
      const int take = std::min(need, mult[j]);
      mult[j] -= take;
      need -= take;
    }
    if (need > 0) throw DomainError("divide_out_zeros: point is not a zero of f");
  }
  std::vector<Point> kp;
  std::vector<int> km;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (mult[j] > 0) {
      kp.push_back(pts[j]);
      km.push_back(mult[j]);
    }
  }
  AnalyticModel out = f;
  out.zeros = PointSet(std::move(kp), std::move(km));
  return out;
}

Complex GaFamily::log_g(std::size_t j, Point at) const {
  const GaCenter& c = centers.at(j);
  if (!c.ok) throw DomainError("GaFamily: center has no g_a");
  const Point w = moebius(c.a, at);
  return horner(c.q, w) + horner(c.h, w);
}

namespace {

// Least-squares polynomial h with Re h ~ u on a polar grid of radius r.
std::vector<Complex> fit_harmonic(const RealField& u, int degree, double radius, double& residual) {
  const DiskGrid g = DiskGrid::polar(radius, 24);
  const int nb = 1 + 2 * degree;
  Eigen::MatrixXd a(g.size(), nb);
  Eigen::VectorXd rhs(g.size());
  std::vector<double> uv(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point z = g.node(i);
    const double sw = std::sqrt(g.weight(i));
    uv[i] = u(z);
    a(i, 0) = sw;
    Complex zk = 1.0;
    for (int k = 1; k <= degree; ++k) {
      zk *= z;
      a(i, 2 * k - 1) = sw * zk.real();
      a(i, 2 * k) = -sw * zk.imag();
    }
    rhs(i) = sw * uv[i];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(rhs);
  std::vector<Complex> h(degree + 1);
  h[0] = c(0);
  for (int k = 1; k <= degree; ++k) h[k] = Complex{c(2 * k - 1), c(2 * k)};
  residual = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    residual = std::max(residual, std::abs(horner(h, g.node(i)).real() - uv[i]));
  }
  return h;
}

} // namespace

GaFamily build_ga_family(const PointSet& z, double p, const CoveringNet& net, double r_drop, const GaOptions& opt) {
  if (!(p > 0.0)) throw DomainError("build_ga_family: p must be positive");
  if (!(opt.lambda > 0.0 && opt.lambda < 1.0)) throw DomainError("build_ga_family: lambda must lie in (0,1)");
  if (z.size() >= 2 && r_drop < separation_constant(z)) {
    throw DomainError("build_ga_family: r_drop must be at least the separation constant");
  }
  GaFamily fam;
  fam.z = z;
  fam.p = p;
  fam.eps = 1.0 - opt.lambda;
  fam.eta = net.eta;
  const DiskGrid grid = DiskGrid::polar(opt.rmax, opt.n_radial);
  const WeightEval kz(z);
  bool any = false;
  for (auto a : net.centers.points()) {
    GaCenter c;
    c.a = a;
    fam.centers.push_back(c);
    GaCenter& cc = fam.centers.back();
    const std::size_t j = fam.centers.size() - 1;
    if (opt.region) {
      const EuclideanDisk d = euclidean_params({a, net.eta});
      if (std::abs(d.center - opt.region->center) >= d.radius + opt.region->radius) {
        cc.error = "outside region";
        continue;
      }
    }
    try {
      const PointSet za = z.moebius_image(a);
      const PointSet kept = za.without_disk(0.0, r_drop, &cc.dropped);
      const auto sol = solve_extremal_general(kept, p / opt.lambda, opt.degree, grid);
      if (!sol.converged) throw NumericError("extremal solve did not converge");
      cc.iterations = sol.iterations;
      cc.q = sol.model.expcoeffs;
      const WeightEval kza(za);
      cc.h = fit_harmonic([&](Point w) { return kza.k(w) - kz.k(moebius(a, w)); }, opt.h_degree, opt.h_fit_radius,
                          cc.fit_residual);
      cc.ok = true;
      // delta on D(a, eta), the image of D(0, eta) under M_a
      double lo = std::numeric_limits<double>::infinity();
      for (int k = 0; k <= 4; ++k) {
        const double r = 0.25 * k * net.eta;
        const int na = k == 0 ? 1 : 32;
        for (int m = 0; m < na; ++m) {
          const Point x = moebius(a, std::polar(r, 2.0 * kPi * m / na));
          lo = std::min(lo, fam.log_g(j, x).real() + kz.k(x));
        }
      }
      cc.delta = std::exp(lo);
      double hi = -std::numeric_limits<double>::infinity();
      for (double r : refined_radii(opt.rmax)) {
        const int na = r == 0.0 ? 1 : kGrowthAngles;
        for (int m = 0; m < na; ++m) {
          const Point w = std::polar(r, 2.0 * kPi * m / na);
          const Point x = moebius(a, w);
          hi = std::max(hi, p * (fam.log_g(j, x).real() + kz.k(x)) + (1.0 - fam.eps) * std::log(one_minus_abs2(w)));
        }
      }
      cc.c = std::exp(hi);
      if (!std::isfinite(cc.c) || !(cc.delta > 0.0)) throw NumericError("non-finite bound");
    } catch (const Error& e) {
      cc.ok = false;
      cc.error = e.what();
      continue;
    }
    fam.delta = any ? std::min(fam.delta, cc.delta) : cc.delta;
    fam.c = any ? std::max(fam.c, cc.c) : cc.c;
    any = true;
  }
  return fam;
}

} // namespace bergman
