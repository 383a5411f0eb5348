#include "bergman/kernel_ops.hpp"

#include "bergman/quadrature_rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace bergman {

double conjugate_exponent(double p) {
  if (!(p >= 1.0)) throw DomainError("conjugate exponent needs p >= 1");
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return p / (p - 1.0);
}

double kernel_eval(const KernelSpec& spec, Point z, Point w) {
  const double tz = one_minus_abs2(z), tw = one_minus_abs2(w);
  const double d2 = std::norm(1.0 - std::conj(w) * z);
  if (spec.variant == KernelVariant::K) {
    return std::pow(tz, spec.a) * std::pow(tw, spec.b) * std::pow(d2, -0.5 * (spec.a + spec.b + 2.0));
  }
  const double e = std::abs(z - w);
  if (e == 0.0) throw DomainError("kernel_eval: B is singular at z = w");
  return std::pow(tz, spec.a) * std::pow(tw, spec.b) * std::pow(d2, -0.5 * (spec.a + spec.b + 1.0)) / e;
}

namespace {

// Angular integral over [0, 2 pi) of the kernel's angular factor at |z| = r,
// |w| = rho. Both factors are even in the angle and peak at 0.
double angular_factor(const KernelSpec& spec, double r, double rho) {
  const double x = r * rho;
  const double gap = (1.0 - x) * (1.0 - x);
  if (spec.variant == KernelVariant::K) {
    const double e = -0.5 * (spec.a + spec.b + 2.0);
    auto f = [&](double th) {
      const double s = std::sin(0.5 * th);
      return std::pow(gap + 4.0 * x * s * s, e);
    };
    return 2.0 * integrate_de(f, 0.0, kPi, 1e-10);
  }
  const double e = -0.5 * (spec.a + spec.b + 1.0);
  const double dr2 = (r - rho) * (r - rho);
  auto f = [&](double th) {
    const double s = std::sin(0.5 * th);
    const double s2 = s * s;
    const double d2 = dr2 + 4.0 * x * s2;
    if (d2 == 0.0) return 0.0; // the diagonal point itself
    return std::pow(gap + 4.0 * x * s2, e) / std::sqrt(d2);
  };
  return 2.0 * integrate_de(f, 0.0, kPi, 1e-10);
}

// (1-r^2)^{e_out} int_0^{rmax} (1-rho^2)^{e_in} A(r, rho) rho d rho
double radial_integral(const KernelSpec& spec, double r, double rmax, double e_out, double e_in) {
  auto f = [&](double rho) { return std::pow((1.0 - rho) * (1.0 + rho), e_in) * angular_factor(spec, r, rho) * rho; };
  double acc;
  if (spec.variant == KernelVariant::B && r > 0.0 && r < rmax) {
    acc = integrate_de(f, 0.0, r, 1e-9) + integrate_de(f, r, rmax, 1e-9);
  } else {
    acc = integrate_de(f, 0.0, rmax, 1e-9);
  }
  return std::pow((1.0 - r) * (1.0 + r), e_out) * acc;
}

std::vector<double> radial_samples(double rmax) {
  std::vector<double> out{0.0, 0.3};
  for (double t = 0.5; 1.0 - t < rmax; t *= 0.6) out.push_back(1.0 - t);
  out.push_back(rmax);
  return out;
}

double sup_over_samples(const KernelSpec& spec, double rmax, double e_out, double e_in) {
  double best = 0.0;
  for (double r : radial_samples(rmax)) {
    const double v = radial_integral(spec, r, rmax, e_out, e_in);
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    best = std::max(best, v);
  }
  return best;
}

// Exponent gamma in S(rmax) = S_inf - c (1 - rmax^2)^gamma from three radii
// whose 1 - rmax^2 halve (approximately). Returns +inf when the increments
// are already at quadrature noise.
double increment_exponent(const std::vector<double>& rmax, const std::vector<double>& s) {
  const double d1 = s[1] - s[0], d2 = s[2] - s[1];
  if (std::abs(d2) <= 1e-7 * std::abs(s[2]) && std::abs(d1) <= 1e-6 * std::abs(s[2])) {
    return std::numeric_limits<double>::infinity();
  }
  if (!(d1 > 0.0) || !(d2 > 0.0)) return d2 <= 0.0 ? std::numeric_limits<double>::infinity() : -1.0;
  const double t0 = 1.0 - rmax[0] * rmax[0], t1 = 1.0 - rmax[1] * rmax[1], t2 = 1.0 - rmax[2] * rmax[2];
  // with equal ratios t0/t1 = t1/t2 = k: d1/d2 = k^gamma
  const double k = std::sqrt((t0 / t1) * (t1 / t2));
  return std::log(d1 / d2) / std::log(k);
}

constexpr double kMinGamma = 0.05;

} // namespace

SchurResult schur_certificate(const KernelSpec& spec, double alpha) {
  if (!(spec.p >= 1.0)) throw DomainError("schur_certificate: p must be at least 1");
  SchurResult res;
  res.rmax = {0.99, 0.995, 0.9975};
  const bool l1 = spec.p == 1.0;
  const double p = spec.p;
  const double pp = l1 ? 0.0 : conjugate_exponent(p);
  for (double rm : res.rmax) {
    if (l1) {
      const double s = sup_over_samples(spec, rm, spec.b, spec.a);
      res.sup1.push_back(s);
      res.sup2.push_back(s);
    } else {
      res.sup1.push_back(sup_over_samples(spec, rm, spec.a + alpha * pp, spec.b - alpha * pp));
      res.sup2.push_back(sup_over_samples(spec, rm, spec.b + alpha * p, spec.a - alpha * p));
    }
  }
  res.c1 = res.sup1.back();
  res.c2 = res.sup2.back();
  if (!std::isfinite(res.c1) || !std::isfinite(res.c2)) {
    res.reason = "non-finite supremum";
    return res;
  }
  res.gamma1 = increment_exponent(res.rmax, res.sup1);
  res.gamma2 = increment_exponent(res.rmax, res.sup2);
  res.bound = l1 ? res.c1 : std::pow(res.c1, 1.0 / pp) * std::pow(res.c2, 1.0 / p);
  if (res.gamma1 <= kMinGamma || res.gamma2 <= kMinGamma) {
    res.reason = "supremum diverges under rmax extrapolation";
    return res;
  }
  res.success = true;
  res.reason = "ok";
  return res;
}

std::vector<Samples> operator_apply_many(const KernelSpec& spec, const std::vector<Samples>& fs,
                                         const DiskGrid& grid) {
  const std::size_t n = grid.size();
  for (const auto& f : fs) {
    if (f.size() != n) throw DomainError("operator_apply: sample count does not match the grid");
  }
  std::vector<double> lt(n);
  for (std::size_t i = 0; i < n; ++i) lt[i] = std::log(one_minus_abs2(grid.node(i)));
  const bool isB = spec.variant == KernelVariant::B;
  const double e = -0.5 * (spec.a + spec.b + (isB ? 1.0 : 2.0));

  std::vector<Samples> out(fs.size(), Samples(n));
  std::vector<double> krow(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point z = grid.node(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (isB && j == i) {
        // cell treated as a disk of equal area centred at the node
        const double self = 2.0 * std::sqrt(kPi * grid.weight(i));
        krow[j] = std::exp((spec.a + spec.b + 2.0 * e) * lt[i]) * self;
        continue;
      }
      const Point w = grid.node(j);
      double k = std::exp(spec.a * lt[i] + spec.b * lt[j] + e * std::log(std::norm(1.0 - std::conj(w) * z)));
      if (isB) k /= std::abs(z - w);
      krow[j] = k * grid.weight(j);
    }
    for (std::size_t s = 0; s < fs.size(); ++s) {
      Complex acc{};
      const auto& f = fs[s];
      for (std::size_t j = 0; j < n; ++j) acc += krow[j] * f[j];
      out[s][i] = acc;
    }
  }
  return out;
}

Samples operator_apply(const KernelSpec& spec, std::span<const Complex> f, const DiskGrid& grid) {
  std::vector<Samples> one{Samples(f.begin(), f.end())};
  return std::move(operator_apply_many(spec, one, grid).front());
}

std::vector<Field> test_ensemble(std::size_t count, std::uint64_t seed, double support_radius) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Field> out;
  const double r2 = support_radius * support_radius;
  for (std::size_t k = 0; k < count; ++k) {
    const int deg = static_cast<int>(rng() % 7);
    std::vector<Complex> c(deg + 1);
    for (auto& x : c) x = Complex{u(rng), u(rng)};
    out.push_back([c, r2](Point z) {
      const double t = 1.0 - std::norm(z) / r2;
      if (t <= 0.0) return Complex{};
      Complex v{};
      for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
      return v * (t * t * t);
    });
  }
  return out;
}

NormEstimate empirical_norm(const KernelSpec& spec, const std::vector<Field>& ensemble, const DiskGrid& grid) {
  std::vector<Samples> fs;
  for (const auto& f : ensemble) fs.push_back(sample(grid, f));
  const auto tf = operator_apply_many(spec, fs, grid);
  NormEstimate est;
  for (std::size_t s = 0; s < fs.size(); ++s) {
    const double den = lp_norm(fs[s], {}, spec.p, grid);
    if (den == 0.0) continue;
    const double r = lp_norm(tf[s], {}, spec.p, grid) / den;
    est.ratios.push_back(r);
    est.max_ratio = std::max(est.max_ratio, r);
  }
  return est;
}

namespace {

// B|f_k|(z) for an ensemble supported in |w| < radius. Points well away from
// the support share one product rule (sampled once); nearer points use rays
// from z.
class BApplier {
public:
  BApplier(const KernelSpec& spec, const std::vector<Field>& ens, double radius)
      : spec_(spec), ens_(ens), radius_(radius) {
    const Point far_pole = 3.0 * radius;
    const LocalRule rule = pole_rule(far_pole, {0.0, radius}, 1);
    for (std::size_t l = 0; l < rule.offsets.size(); ++l) {
      const Point w = far_pole + rule.offsets[l];
      nodes_.push_back(w);
      weights_.push_back(rule.weights[l]);
      for (const auto& f : ens_) vals_.push_back(std::abs(f(w)));
    }
  }

  void eval(Point z, std::vector<double>& out) const {
    const std::size_t n = ens_.size();
    out.assign(n, 0.0);
    if (std::abs(z) >= 1.5 * radius_) {
      for (std::size_t l = 0; l < nodes_.size(); ++l) {
        const double k = weights_[l] * kernel_eval(spec_, z, nodes_[l]);
        for (std::size_t s = 0; s < n; ++s) out[s] += k * vals_[l * n + s];
      }
      return;
    }
    const LocalRule rule = pole_rule(z, {0.0, radius_}, 1);
    for (std::size_t l = 0; l < rule.offsets.size(); ++l) {
      const Point w = z + rule.offsets[l];
      if (rule.offsets[l] == Complex{}) continue;
      const double k = rule.weights[l] * kernel_eval(spec_, z, w);
      for (std::size_t s = 0; s < n; ++s) out[s] += k * std::abs(ens_[s](w));
    }
  }

private:
  KernelSpec spec_;
  const std::vector<Field>& ens_;
  double radius_;
  std::vector<Point> nodes_;
  std::vector<double> weights_, vals_;
};

// Discrete (p,q) norms of the ensemble and of its image, with 3x8 local-mean
// rules on D(c, R).
void discrete_pq_norms(const BApplier& op, const std::vector<Field>& ens, double p, double q,
                       const PointSet& centers, double R, std::vector<double>& nf, std::vector<double>& nbf) {
  const std::size_t n = ens.size();
  nf.assign(n, 0.0);
  nbf.assign(n, 0.0);
  const GaussRule& gl = gauss_legendre(3);
  const int n_ang = 8;
  const double dth = 2.0 * kPi / n_ang;
  std::vector<double> mf(n), mb(n), bv;
  for (auto c : centers.points()) {
    const EuclideanDisk d = euclidean_params({c, R});
    std::fill(mf.begin(), mf.end(), 0.0);
    std::fill(mb.begin(), mb.end(), 0.0);
    double area = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double r = 0.5 * d.radius * (1.0 + gl.x[k]);
      const double wr = 0.5 * d.radius * gl.w[k] * r * dth;
      for (int j = 0; j < n_ang; ++j) {
        const Point w = d.center + std::polar(r, (j + 0.5) * dth);
        op.eval(w, bv);
        for (std::size_t s = 0; s < n; ++s) {
          mf[s] += wr * std::pow(std::abs(ens[s](w)), q);
          mb[s] += wr * std::pow(bv[s], q);
        }
        area += wr;
      }
    }
    const double t = one_minus_abs2(c);
    for (std::size_t s = 0; s < n; ++s) {
      nf[s] += t * t * std::pow(mf[s] / area, p / q);
      nbf[s] += t * t * std::pow(mb[s] / area, p / q);
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    nf[s] = std::pow(nf[s], 1.0 / p);
    nbf[s] = std::pow(nbf[s], 1.0 / p);
  }
}

} // namespace

DiscreteOperatorReport discrete_operator_check(const KernelSpec& spec, double p, double q, const CoveringNet& net,
                                               std::size_t ensemble_size, std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0) || !(q >= 1.0)) throw DomainError("discrete_operator_check: need 0 < p < 1 <= q");
  DiscreteOperatorReport rep;
  rep.p = p;
  rep.q = q;
  rep.a = spec.a;
  rep.b = spec.b;
  rep.cond_a = spec.a > -1.0 / p;
  rep.cond_b = spec.b > 2.0 / p - 1.0 / q - 1.0;
  rep.cond_ab = spec.a + spec.b + 2.0 > q / p;

  KernelSpec bs = spec;
  bs.variant = KernelVariant::B;
  const double support = 0.5;
  const auto ens = test_ensemble(ensemble_size, seed, support);
  const double R = 2.0 * net.eta;
  const CoveringNet outer = build_net(net.eta, 0.5 * (1.0 + net.rmax), net.resolution);

  const BApplier op(bs, ens, support);
  std::vector<double> nf, nbf;
  for (int pass = 0; pass < 2; ++pass) {
    const PointSet& centers = pass == 0 ? net.centers : outer.centers;
    discrete_pq_norms(op, ens, p, q, centers, R, nf, nbf);
    double worst = 0.0;
    for (std::size_t s = 0; s < ens.size(); ++s) {
      if (nf[s] == 0.0) {
        if (pass == 0) ++rep.skipped;
        continue;
      }
      worst = std::max(worst, nbf[s] / nf[s]);
    }
    (pass == 0 ? rep.max_ratio : rep.max_ratio_outer) = worst;
  }
  rep.growth_flag = rep.max_ratio_outer >= 1.25 * rep.max_ratio;
  return rep;
}

std::string schur_csv_header() { return "a,b,p,q,alpha,C1,C2,empirical_norm,verdict"; }

std::string schur_csv_row(const KernelSpec& spec, const SchurResult& r, double empirical) {
  std::ostringstream os;
  os.precision(10);
  os << spec.a << ',' << spec.b << ',' << spec.p << ',' << spec.q << ',' << spec.alpha << ',' << r.c1 << ',' << r.c2
     << ',' << empirical << ',' << (r.success ? "pass" : "fail");
  return os.str();
}

} // namespace bergman
