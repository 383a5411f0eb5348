// Compiled with -mavx2 -mfma. Nothing in here may be called unless
// avx2::available() returned true.

#include "bergman/simd/kernels.hpp"

#include <immintrin.h>

namespace bergman::simd::avx2 {

bool available() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

BergmanSums bergman_sums(std::complex<double> z, PointSpan a, std::span<const double> c) {
  const std::size_t n = a.size();
  const std::size_t nv = n & ~std::size_t{3};
  const __m256d zr = _mm256_set1_pd(z.real());
  const __m256d zi = _mm256_set1_pd(z.imag());
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d s2 = _mm256_setzero_pd();
  __m256d s4 = _mm256_setzero_pd();
  for (std::size_t i = 0; i < nv; i += 4) {
    const __m256d ar = _mm256_loadu_pd(a.re.data() + i);
    const __m256d ai = _mm256_loadu_pd(a.im.data() + i);
    const __m256d ci = _mm256_loadu_pd(c.data() + i);
    const __m256d dr = _mm256_sub_pd(one, _mm256_fmadd_pd(ar, zr, _mm256_mul_pd(ai, zi)));
    const __m256d di = _mm256_fmsub_pd(ai, zr, _mm256_mul_pd(ar, zi));
    const __m256d mag = _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di));
    const __m256d inv = _mm256_div_pd(one, mag);
    const __m256d t = _mm256_mul_pd(ci, inv);
    s2 = _mm256_add_pd(s2, t);
    s4 = _mm256_fmadd_pd(t, inv, s4);
  }
  alignas(32) double l2[4], l4[4];
  _mm256_store_pd(l2, s2);
  _mm256_store_pd(l4, s4);
  const double zrs = z.real(), zis = z.imag();
  for (std::size_t i = nv; i < n; ++i) {
    const double dr = 1.0 - (a.re[i] * zrs + a.im[i] * zis);
    const double di = -(a.re[i] * zis - a.im[i] * zrs);
    const double inv = 1.0 / (dr * dr + di * di);
    const double t = c[i] * inv;
    l2[i & 3] += t;
    l4[i & 3] += t * inv;
  }
  return {(l2[0] + l2[1]) + (l2[2] + l2[3]), (l4[0] + l4[1]) + (l4[2] + l4[3])};
}

std::complex<double> cauchy_sum(std::complex<double> z, const CauchyArgs& args) {
  const std::size_t n = args.nodes.size();
  const std::size_t nv = n & ~std::size_t{3};
  const __m256d zr = _mm256_set1_pd(z.real());
  const __m256d zi = _mm256_set1_pd(z.imag());
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d excl = _mm256_set1_pd(args.exclude_r2);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  const double* wre = args.nodes.re.data();
  const double* wim = args.nodes.im.data();
  for (std::size_t i = 0; i < nv; i += 4) {
    const __m256d wr = _mm256_loadu_pd(wre + i);
    const __m256d wi = _mm256_loadu_pd(wim + i);
    const __m256d dr = _mm256_sub_pd(zr, wr);
    const __m256d di = _mm256_sub_pd(zi, wi);
    const __m256d d2 = _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di));
    // keep lanes with d2 >= exclude_r2 and d2 != 0
    const __m256d keep = _mm256_and_pd(_mm256_cmp_pd(d2, excl, _CMP_GE_OQ),
                                       _mm256_cmp_pd(d2, zero, _CMP_NEQ_OQ));
    if (_mm256_movemask_pd(keep) == 0) continue;
    __m256d qr = dr, qi = di;
    if (args.m > 0) {
      const __m256d er = _mm256_sub_pd(one, _mm256_fmadd_pd(wr, zr, _mm256_mul_pd(wi, zi)));
      const __m256d ei = _mm256_fmsub_pd(wi, zr, _mm256_mul_pd(wr, zi));
      for (int k = 0; k < args.m; ++k) {
        const __m256d tr = _mm256_fmsub_pd(qr, er, _mm256_mul_pd(qi, ei));
        qi = _mm256_fmadd_pd(qr, ei, _mm256_mul_pd(qi, er));
        qr = tr;
      }
    }
    const __m256d q2 = _mm256_fmadd_pd(qr, qr, _mm256_mul_pd(qi, qi));
    // masked-out lanes get a safe divisor and zero coefficient
    const __m256d inv = _mm256_and_pd(keep, _mm256_div_pd(one, _mm256_blendv_pd(one, q2, keep)));
    const __m256d cr = _mm256_loadu_pd(args.c_re.data() + i);
    const __m256d ci = _mm256_loadu_pd(args.c_im.data() + i);
    const __m256d nr = _mm256_fmadd_pd(cr, qr, _mm256_mul_pd(ci, qi));
    const __m256d ni = _mm256_fmsub_pd(ci, qr, _mm256_mul_pd(cr, qi));
    acc_re = _mm256_fmadd_pd(nr, inv, acc_re);
    acc_im = _mm256_fmadd_pd(ni, inv, acc_im);
  }
  alignas(32) double lr[4], li[4];
  _mm256_store_pd(lr, acc_re);
  _mm256_store_pd(li, acc_im);
  if (nv < n) {
    CauchyArgs tail = args;
    const std::size_t k = n - nv;
    tail.nodes = {args.nodes.re.subspan(nv, k), args.nodes.im.subspan(nv, k)};
    tail.c_re = args.c_re.subspan(nv, k);
    tail.c_im = args.c_im.subspan(nv, k);
    // tail length < 4, so each element lands in lane (nv + j) & 3 == j
    for (std::size_t j = 0; j < k; ++j) {
      CauchyArgs one_node = tail;
      one_node.nodes = {tail.nodes.re.subspan(j, 1), tail.nodes.im.subspan(j, 1)};
      one_node.c_re = tail.c_re.subspan(j, 1);
      one_node.c_im = tail.c_im.subspan(j, 1);
      const auto v = scalar::cauchy_sum(z, one_node);
      lr[j] += v.real();
      li[j] += v.imag();
    }
  }
  return {(lr[0] + lr[1]) + (lr[2] + lr[3]), (li[0] + li[1]) + (li[2] + li[3])};
}

} // namespace bergman::simd::avx2
