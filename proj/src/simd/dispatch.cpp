#include "bergman/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace bergman::simd {

#ifndef BERGMAN_WITH_AVX2
namespace avx2 {
bool available() { return false; }
BergmanSums bergman_sums(std::complex<double> z, PointSpan a, std::span<const double> c) {
  return scalar::bergman_sums(z, a, c);
}
std::complex<double> cauchy_sum(std::complex<double> z, const CauchyArgs& args) {
  return scalar::cauchy_sum(z, args);
}
} // namespace avx2
#endif

namespace {

Isa detect() {
  if (const char* env = std::getenv("BERGMAN_SIMD"); env && std::strcmp(env, "scalar") == 0) {
    return Isa::Scalar;
  }
  return avx2::available() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

} // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void set_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2::available()) isa = Isa::Scalar;
  current().store(isa, std::memory_order_relaxed);
}

BergmanSums bergman_sums(std::complex<double> z, PointSpan a, std::span<const double> c) {
  return active_isa() == Isa::Avx2 ? avx2::bergman_sums(z, a, c) : scalar::bergman_sums(z, a, c);
}

std::complex<double> cauchy_sum(std::complex<double> z, const CauchyArgs& args) {
  return active_isa() == Isa::Avx2 ? avx2::cauchy_sum(z, args) : scalar::cauchy_sum(z, args);
}

} // namespace bergman::simd
