#include "bergman/simd/kernels.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace bergman::simd;
using C = std::complex<double>;

namespace {

struct Cloud {
  std::vector<double> re, im, cr, ci;
};

Cloud make_cloud(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Cloud c;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = 0.98 * std::sqrt(u(rng)), t = 6.283185307179586 * u(rng);
    c.re.push_back(r * std::cos(t));
    c.im.push_back(r * std::sin(t));
    c.cr.push_back(u(rng) - 0.5);
    c.ci.push_back(u(rng) - 0.5);
  }
  return c;
}

double rel(C a, C b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace

TEST_CASE("bergman sums: avx2 matches scalar reference") {
  if (!avx2::available()) SKIP("no AVX2 on this machine");
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u}) {
    const auto c = make_cloud(n, 7 + n);
    for (C z : {C{0, 0}, C{0.3, -0.2}, C{-0.9, 0.35}}) {
      const auto s = scalar::bergman_sums(z, {c.re, c.im}, c.cr);
      const auto v = avx2::bergman_sums(z, {c.re, c.im}, c.cr);
      CHECK(std::abs(s.s2 - v.s2) <= 1e-13 * std::max(1.0, std::abs(s.s2)));
      CHECK(std::abs(s.s4 - v.s4) <= 1e-13 * std::max(1.0, std::abs(s.s4)));
    }
  }
}

TEST_CASE("cauchy sum: avx2 matches scalar reference, including exclusion") {
  if (!avx2::available()) SKIP("no AVX2 on this machine");
  for (std::size_t n : {1u, 2u, 7u, 8u, 9u, 4099u}) {
    const auto c = make_cloud(n, 100 + n);
    for (int m : {0, 1, 2, 5}) {
      for (double excl : {0.0, 1e-4, 0.05}) {
        const C z{0.21, 0.43};
        CauchyArgs a{{c.re, c.im}, c.cr, c.ci, m, excl};
        CHECK(rel(avx2::cauchy_sum(z, a), scalar::cauchy_sum(z, a)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("cauchy sum skips a node that coincides with z") {
  std::vector<double> re{0.25, 0.5}, im{0.0, 0.0}, cr{1.0, 1.0}, ci{0.0, 0.0};
  CauchyArgs a{{re, im}, cr, ci, 0, 0.0};
  const C z{0.25, 0.0};
  const C expect = 1.0 / (z - C{0.5, 0.0});
  CHECK(rel(scalar::cauchy_sum(z, a), expect) <= 1e-15);
  if (avx2::available()) CHECK(rel(avx2::cauchy_sum(z, a), expect) <= 1e-15);
}

TEST_CASE("dispatch honours set_isa") {
  set_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  set_isa(Isa::Avx2);
  CHECK(active_isa() == (avx2::available() ? Isa::Avx2 : Isa::Scalar));
  CHECK(isa_name(Isa::Scalar) == "scalar");
}

TEST_CASE("reference path matches a naive loop") {
  const auto c = make_cloud(33, 5);
  const C z{-0.1, 0.6};
  C naive{};
  double s2 = 0, s4 = 0;
  for (std::size_t i = 0; i < c.re.size(); ++i) {
    const C w{c.re[i], c.im[i]};
    naive += C{c.cr[i], c.ci[i]} / ((z - w) * (1.0 - std::conj(w) * z) * (1.0 - std::conj(w) * z));
    const double d = std::norm(1.0 - std::conj(w) * z);
    s2 += c.cr[i] / d;
    s4 += c.cr[i] / (d * d);
  }
  CauchyArgs a{{c.re, c.im}, c.cr, c.ci, 2, 0.0};
  CHECK(rel(scalar::cauchy_sum(z, a), naive) <= 1e-13);
  const auto s = scalar::bergman_sums(z, {c.re, c.im}, c.cr);
  CHECK(std::abs(s.s2 - s2) <= 1e-13 * std::abs(s2) + 1e-15);
  CHECK(std::abs(s.s4 - s4) <= 1e-13 * std::abs(s4) + 1e-15);
}
