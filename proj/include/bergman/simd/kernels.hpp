#pragma once

// Data-parallel inner loops shared by the weight evaluator and the
// quadrature code. Each kernel has a portable scalar reference
// implementation and, on x86-64, an AVX2/FMA variant. The variant is
// chosen once at runtime from CPUID; BERGMAN_SIMD=scalar in the
// environment forces the reference path.
//
// Inputs are structure-of-arrays spans of equal length.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace bergman::simd {

enum class Isa { Scalar, Avx2 };

struct PointSpan {
  std::span<const double> re;
  std::span<const double> im;
  std::size_t size() const { return re.size(); }
};

/// Sums of Bergman-type reproducing kernel powers at one point:
///   s2 = sum_i c_i / |1 - conj(a_i) z|^2,  s4 = sum_i c_i / |1 - conj(a_i) z|^4.
struct BergmanSums {
  double s2 = 0.0;
  double s4 = 0.0;
};

/// Weighted Cauchy-type sum
///   sum_i c_i / ((z - w_i) (1 - conj(w_i) z)^m),
/// skipping nodes with |z - w_i|^2 < exclude_r2 (the caller integrates those
/// with a dedicated local rule). m >= 0.
struct CauchyArgs {
  PointSpan nodes;
  std::span<const double> c_re;
  std::span<const double> c_im;
  int m = 0;
  double exclude_r2 = 0.0;
};

using BergmanSumsFn = BergmanSums (*)(std::complex<double> z, PointSpan a, std::span<const double> c);
using CauchySumFn = std::complex<double> (*)(std::complex<double> z, const CauchyArgs& args);

namespace scalar {
BergmanSums bergman_sums(std::complex<double> z, PointSpan a, std::span<const double> c);
std::complex<double> cauchy_sum(std::complex<double> z, const CauchyArgs& args);
} // namespace scalar

namespace avx2 {
bool available();
BergmanSums bergman_sums(std::complex<double> z, PointSpan a, std::span<const double> c);
std::complex<double> cauchy_sum(std::complex<double> z, const CauchyArgs& args);
} // namespace avx2

Isa active_isa();
std::string_view isa_name(Isa isa);

/// Overrides the runtime choice (tests use this to compare variants).
/// Requesting Avx2 on a machine without it falls back to Scalar.
void set_isa(Isa isa);

BergmanSums bergman_sums(std::complex<double> z, PointSpan a, std::span<const double> c);
std::complex<double> cauchy_sum(std::complex<double> z, const CauchyArgs& args);

} // namespace bergman::simd
