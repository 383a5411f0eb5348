#include "bergman/weights.hpp"

#include "bergman/simd/kernels.hpp"

#include <cmath>
#include <limits>

namespace bergman {

WeightEval::WeightEval(PointSet z) : z_(std::move(z)) {
  re_.reserve(z_.size());
  im_.reserve(z_.size());
  coef_.reserve(z_.size());
  for (std::size_t i = 0; i < z_.size(); ++i) {
    const double t = one_minus_abs2(z_[i]);
    re_.push_back(z_[i].real());
    im_.push_back(z_[i].imag());
    coef_.push_back(z_.multiplicity(i) * t * t);
  }
}

double WeightEval::k(Point z) const {
  if (z_.empty()) return 0.0;
  const auto s = simd::bergman_sums(z, {re_, im_}, coef_);
  return 0.5 * std::norm(z) * s.s2;
}

double WeightEval::lap_k(Point z) const {
  if (z_.empty()) return 0.0;
  const auto s = simd::bergman_sums(z, {re_, im_}, coef_);
  return 0.5 * s.s4;
}

double WeightEval::log_abs_psi(Point z) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < z_.size(); ++i) {
    const Point a = z_[i];
    double term;
    if (a == Complex{}) {
      term = std::log(std::abs(z)) + 0.5;
    } else {
      const Complex m = moebius(a, z);
      term = std::log(std::abs(m)) + 1.0 - (std::conj(a) * m).real() - 0.5 * one_minus_abs2(a);
    }
    acc += z_.multiplicity(i) * term;
  }
  return acc;
}

Complex WeightEval::log_psi(Point z) const {
  Complex acc{};
  for (std::size_t i = 0; i < z_.size(); ++i) {
    const Point a = z_[i];
    Complex term;
    if (a == Complex{}) {
      term = std::log(z) + 0.5;
    } else {
      const Complex m = moebius(a, z);
      term = Complex{0.0, -std::arg(a)} + std::log(m) + 1.0 - std::conj(a) * m - 0.5 * one_minus_abs2(a);
    }
    acc += static_cast<double>(z_.multiplicity(i)) * term;
  }
  return acc;
}

Complex WeightEval::psi_value(Point z) const {
  // product of the Moebius factors with one exponential; rescaled to stay in range
  Complex prod{1.0, 0.0}, ex{};
  int scale = 0;
  for (std::size_t i = 0; i < z_.size(); ++i) {
    const Point a = z_[i];
    Complex fac;
    if (a == Complex{}) {
      fac = z;
      ex += 0.5 * z_.multiplicity(i);
    } else {
      const Complex m = moebius(a, z);
      fac = (std::conj(a) / std::abs(a)) * m;
      ex += static_cast<double>(z_.multiplicity(i)) * (1.0 - std::conj(a) * m - 0.5 * one_minus_abs2(a));
    }
    for (int k = 0; k < z_.multiplicity(i); ++k) prod *= fac;
    if (prod == Complex{}) return {};
    int e = 0;
    std::frexp(std::max(std::abs(prod.real()), std::abs(prod.imag())), &e);
    prod = {std::ldexp(prod.real(), -e), std::ldexp(prod.imag(), -e)};
    scale += e;
  }
  return prod * std::exp(ex + scale * std::log(2.0));
}

double WeightEval::log_sigma(Point z) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < z_.size(); ++i) {
    const double r2 = std::norm(moebius(z_[i], z));
    acc += z_.multiplicity(i) * (0.5 * std::log(r2) + 0.5 * (1.0 - r2));
  }
  return acc;
}

double WeightEval::sigma(Point z) const { return std::exp(log_sigma(z)); }

double k_Z(const PointSet& z, Point at) { return WeightEval(z).k(at); }
double lap_kZ(const PointSet& z, Point at) { return WeightEval(z).lap_k(at); }
double log_abs_Psi(const PointSet& z, Point at) { return WeightEval(z).log_abs_psi(at); }
double sigma_Z(const PointSet& z, Point at) { return WeightEval(z).sigma(at); }

Complex E_a(Point a, Point z) {
  if (a == Complex{}) return z * std::exp(0.5);
  const Complex m = moebius(a, z);
  return (std::conj(a) / std::abs(a)) * m * std::exp(1.0 - std::conj(a) * m - 0.5 * one_minus_abs2(a));
}

double check_Psi_identity(const PointSet& z, Point at) {
  if (z.contains(at)) throw DomainError("check_Psi_identity: evaluation point lies in Z");
  const WeightEval w(z);
  return std::abs(std::expm1(w.log_abs_psi(at) - w.log_sigma(at) - w.k(at)));
}

double sigma_bound_constant(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("sigma_bound_constant: eta must lie in (0,1)");
  const double t = 1.0 - eta * eta;
  // sum_k t^k/(k+2) = (-log(1-t) - t) / t^2
  return (-std::log1p(-t) - t) / (t * t);
}

SigmaLowerBound sigma_lower_bound(const PointSet& z, double eta, std::span<const Point> samples) {
  SigmaLowerBound out;
  out.c_eta = sigma_bound_constant(eta);
  if (z.empty()) return out;
  // the expansion is valid down to psi = eta itself; allow rounding there
  const double tol = 1e-12;
  for (auto s : samples) {
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double d = psi(s, z[i]);
      if (d < eta - tol) throw DomainError("sigma_lower_bound: sample within eta of Z");
      const double t = 1.0 - d * d;
      sum += z.multiplicity(i) * t * t;
    }
    out.sup_sum = std::max(out.sup_sum, sum);
  }
  out.bound = std::exp(-0.5 * out.c_eta * out.sup_sum);
  return out;
}

namespace {

struct PerturbedPair {
  PointSet original; // Z' (preimage)
  PointSet perturbed; // Z
};

PerturbedPair perturbation_pair(const PointSet& z, double lambda) {
  if (z.contains(Complex{})) throw DomainError("perturbation_defect: 0 must not lie in Z");
  if (!z.all_simple()) throw DomainError("perturbation_defect: Z must be separated");
  if (z.size() >= 2 && separation_constant(z.with_point(Complex{})) <= 0.0) {
    throw DomainError("perturbation_defect: Z u {0} is not separated");
  }
  std::vector<Point> pre;
  pre.reserve(z.size());
  for (auto a : z.points()) pre.push_back(p_lambda_inverse(a, lambda));
  return {PointSet(std::move(pre)), z};
}

double poisson_like(Point a, Point z) {
  return (1.0 - std::norm(a) * std::norm(z)) / std::norm(1.0 - std::conj(a) * z);
}

double harmonic_sum(const PointSet& original, double lambda, Point at) {
  double u = 0.0;
  for (auto b : original.points()) {
    const Point bp = p_lambda(b, lambda);
    u += one_minus_abs2(b) * (poisson_like(bp, at) - poisson_like(b, at));
  }
  return u;
}

} // namespace

double perturbation_harmonic(const PointSet& z, double lambda, Point at) {
  const auto pair = perturbation_pair(z, lambda);
  return harmonic_sum(pair.original, lambda, at);
}

double perturbation_defect(const PointSet& z, double lambda, Point at) {
  const auto pair = perturbation_pair(z, lambda);
  return k_Z(pair.perturbed, at) - lambda * k_Z(pair.original, at) - harmonic_sum(pair.original, lambda, at);
}

} // namespace bergman
