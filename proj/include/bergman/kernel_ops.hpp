#pragma once

// The integral kernels
//   K(z,w) = (1-|z|^2)^a (1-|w|^2)^b / |1 - conj(w) z|^{a+b+2}
//   B(z,w) = (1-|z|^2)^a (1-|w|^2)^b / (|z-w| |1 - conj(w) z|^{a+b+1})
// with Schur-test certification, empirical operator norms on grids and the
// discrete (p < 1) operator check.

#include "bergman/common.hpp"
#include "bergman/geometry.hpp"
#include "bergman/quad.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bergman {

enum class KernelVariant { K, B };

struct KernelSpec {
  double a = 0.0;
  double b = 0.0;
  KernelVariant variant = KernelVariant::K;
  int m = 2;
  double p = 2.0;
  double q = 1.0;
  double alpha = 0.25;
};

/// p' = p / (p - 1); +inf for p = 1.
double conjugate_exponent(double p);

/// Throws DomainError for B at z == w.
double kernel_eval(const KernelSpec& spec, Point z, Point w);

struct SchurResult {
  bool success = false;
  double c1 = 0.0; ///< S1 below (p = 1: the single L^1 constant)
  double c2 = 0.0; ///< S2 below
  double bound = 0.0; ///< c1^{1/p'} c2^{1/p}
  std::vector<double> rmax;
  std::vector<double> sup1, sup2; ///< per rmax
  double gamma1 = 0.0, gamma2 = 0.0; ///< fitted convergence exponents
  std::string reason;
};

/// Schur test with h(z) = (1-|z|^2)^{-alpha}. The two suprema
///   S1 = sup_z h(z)^{-p'} int K(z,w) h(w)^{p'} dA(w)
///   S2 = sup_w h(w)^{-p}  int K(z,w) h(z)^p  dA(z)
/// are computed on the truncated disk |.| < rmax for rmax in
/// {0.99, 0.995, 0.9975} over a boundary-refined radial sample (the
/// integrals are radial by rotation invariance). The run fails when an
/// increment S(r_{k+1}) - S(r_k) does not shrink under halving of 1 - rmax^2
/// (fitted exponent <= 0), or a supremum is not finite.
/// p = 1 returns c1 = c2 = sup_w int K(z,w) dA(z).
/// Throws DomainError for p < 1.
SchurResult schur_certificate(const KernelSpec& spec, double alpha);

/// (Tf)(z_i) = sum_j K(z_i, w_j) f(w_j) W_j at every node. For B the
/// diagonal term is replaced by a self-cell correction.
Samples operator_apply(const KernelSpec& spec, std::span<const Complex> f, const DiskGrid& grid);
/// Same for several inputs in one pass over the kernel.
std::vector<Samples> operator_apply_many(const KernelSpec& spec, const std::vector<Samples>& fs,
                                         const DiskGrid& grid);

/// Deterministic ensemble of smooth compactly supported test functions:
/// random polynomials of degree <= 6 (seeded) times a fixed bump.
std::vector<Field> test_ensemble(std::size_t count, std::uint64_t seed, double support_radius = 0.8);

struct NormEstimate {
  double max_ratio = 0.0;
  std::vector<double> ratios;
};

/// max over the ensemble of ||Tf||_p / ||f||_p on the grid.
NormEstimate empirical_norm(const KernelSpec& spec, const std::vector<Field>& ensemble, const DiskGrid& grid);

struct DiscreteOperatorReport {
  double p = 0.0, q = 0.0, a = 0.0, b = 0.0;
  bool cond_a = false; ///< a > -1/p
  bool cond_b = false; ///< b > 2/p - 1/q - 1
  bool cond_ab = false; ///< a + b + 2 > q/p
  double max_ratio = 0.0; ///< at the inner truncation
  double max_ratio_outer = 0.0; ///< at the outer truncation
  bool growth_flag = false; ///< ratio grew by >= 25%
  std::size_t skipped = 0; ///< ensemble members with zero norm
};

/// Empirical ||Bf||_{p,q} / ||f||_{p,q} with discrete local-mean norms on
/// nets at two truncation radii (net.rmax and (1 + net.rmax)/2).
/// Throws DomainError unless p < 1 <= q.
DiscreteOperatorReport discrete_operator_check(const KernelSpec& spec, double p, double q, const CoveringNet& net,
                                               std::size_t ensemble_size = 6, std::uint64_t seed = 1);

/// CSV with header a,b,p,q,alpha,C1,C2,empirical_norm,verdict.
std::string schur_csv_header();
std::string schur_csv_row(const KernelSpec& spec, const SchurResult& r, double empirical);

} // namespace bergman
