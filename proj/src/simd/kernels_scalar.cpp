#include "bergman/simd/kernels.hpp"

namespace bergman::simd::scalar {

// Four interleaved partial sums, matching the lane layout of the vector
// variants so both paths reduce in the same order.
BergmanSums bergman_sums(std::complex<double> z, PointSpan a, std::span<const double> c) {
  const double zr = z.real(), zi = z.imag();
  double s2[4] = {0, 0, 0, 0};
  double s4[4] = {0, 0, 0, 0};
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    // 1 - conj(a) z
    const double dr = 1.0 - (a.re[i] * zr + a.im[i] * zi);
    const double di = -(a.re[i] * zi - a.im[i] * zr);
    const double inv = 1.0 / (dr * dr + di * di);
    const double t = c[i] * inv;
    s2[i & 3] += t;
    s4[i & 3] += t * inv;
  }
  return {(s2[0] + s2[1]) + (s2[2] + s2[3]), (s4[0] + s4[1]) + (s4[2] + s4[3])};
}

std::complex<double> cauchy_sum(std::complex<double> z, const CauchyArgs& args) {
  const double zr = z.real(), zi = z.imag();
  double acc_re[4] = {0, 0, 0, 0};
  double acc_im[4] = {0, 0, 0, 0};
  const std::size_t n = args.nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double wr = args.nodes.re[i], wi = args.nodes.im[i];
    const double dr = zr - wr, di = zi - wi;
    const double d2 = dr * dr + di * di;
    if (d2 < args.exclude_r2 || d2 == 0.0) continue;
    // denominator q = (z - w) (1 - conj(w) z)^m
    double qr = dr, qi = di;
    if (args.m > 0) {
      const double er = 1.0 - (wr * zr + wi * zi);
      const double ei = -(wr * zi - wi * zr);
      for (int k = 0; k < args.m; ++k) {
        const double tr = qr * er - qi * ei;
        qi = qr * ei + qi * er;
        qr = tr;
      }
    }
    const double inv = 1.0 / (qr * qr + qi * qi);
    const double cr = args.c_re[i], ci = args.c_im[i];
    // c * conj(q) / |q|^2
    acc_re[i & 3] += (cr * qr + ci * qi) * inv;
    acc_im[i & 3] += (ci * qr - cr * qi) * inv;
  }
  return {(acc_re[0] + acc_re[1]) + (acc_re[2] + acc_re[3]),
          (acc_im[0] + acc_im[1]) + (acc_im[2] + acc_im[3])};
}

} // namespace bergman::simd::scalar
