#include "bergman/quadrature_rules.hpp"

#include "bergman/common.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace bergman {

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (slot) return *slot;

  auto rule = std::make_unique<GaussRule>();
  rule->x.resize(n);
  rule->w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule->x[i] = -x;
    rule->x[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule->w[i] = w;
    rule->w[n - 1 - i] = w;
  }
  if (n == 1) {
    rule->x[0] = 0.0;
    rule->w[0] = 2.0;
  }
  slot = std::move(rule);
  return *slot;
}

const GaussRule& tanh_sinh_unit(double h) {
  static std::mutex mu;
  static std::map<double, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(h);
  if (it != cache.end()) return it->second;
  GaussRule r;
  for (int k = 0;; ++k) {
    const double t = k * h;
    const double u = 0.5 * kPi * std::sinh(t);
    const double c = std::cosh(u);
    const double w = h * 0.25 * kPi * std::cosh(t) / (c * c);
    if (w < 1e-18) break;
    // x = (1 + tanh u) / 2 on both sides, written without cancellation
    const double lo = 1.0 / (1.0 + std::exp(2.0 * u));
    r.x.push_back(1.0 - lo);
    r.w.push_back(w);
    if (k > 0) {
      r.x.push_back(lo);
      r.w.push_back(w);
    }
  }
  return cache.emplace(h, std::move(r)).first->second;
}

double integrate_de(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  return integrator.integrate(f, a, b, tol);
}

double periodic_trapezoid(const std::function<double(double)>& f, int n) {
  const double h = 2.0 * kPi / n;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += f(k * h);
  return acc * h;
}

int trapezoid_nodes_for(double q, int min_nodes, int max_nodes) {
  q = std::abs(q);
  if (q >= 1.0) return max_nodes;
  const double n = 38.0 / (1.0 - q) + 16.0;
  if (n > max_nodes) return max_nodes;
  return std::max(min_nodes, static_cast<int>(std::ceil(n)));
}

} // namespace bergman
