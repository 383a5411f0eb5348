#include <catch_amalgamated.hpp>

#include "bergman/kernel_ops.hpp"

#include <cmath>

using namespace bergman;
using Catch::Approx;

TEST_CASE("kernel values at simple points", "[kernel]") {
  KernelSpec k{0.5, 1.5, KernelVariant::K};
  const Point w{0.3, -0.4};
  CHECK(kernel_eval(k, 0.0, w) == Approx(std::pow(1.0 - 0.25, 1.5)).epsilon(1e-14));
  // K(z,w) = K(w,z) when a = b
  KernelSpec sym{0.7, 0.7, KernelVariant::K};
  const Point z{-0.2, 0.6};
  CHECK(kernel_eval(sym, z, w) == Approx(kernel_eval(sym, w, z)).epsilon(1e-14));
  // B dominates K: |z-w| <= |1 - conj(w) z|
  KernelSpec b = sym;
  b.variant = KernelVariant::B;
  CHECK(kernel_eval(b, z, w) >= kernel_eval(sym, z, w));
  CHECK_THROWS_AS(kernel_eval(b, z, z), DomainError);
}

TEST_CASE("conjugate exponent", "[kernel]") {
  CHECK(conjugate_exponent(2.0) == 2.0);
  CHECK(conjugate_exponent(4.0) == Approx(4.0 / 3.0));
  CHECK(std::isinf(conjugate_exponent(1.0)));
  CHECK_THROWS_AS(conjugate_exponent(0.5), DomainError);
}

TEST_CASE("Schur window for a = b = 0, p = 2", "[kernel][schur]") {
  for (auto v : {KernelVariant::K, KernelVariant::B}) {
    KernelSpec s{0.0, 0.0, v};
    for (double al : {0.1, 0.25, 0.4}) {
      INFO("alpha " << al);
      const auto r = schur_certificate(s, al);
      CHECK(r.success);
      CHECK(std::isfinite(r.bound));
      CHECK(r.bound == Approx(std::sqrt(r.c1 * r.c2)));
    }
    for (double al : {-0.1, 0.6}) {
      INFO("alpha " << al);
      CHECK_FALSE(schur_certificate(s, al).success);
    }
  }
}

TEST_CASE("Schur at p = 1", "[kernel][schur]") {
  // a > -1 and b > 0 give a bounded L^1 operator; b = 0 makes the sup grow like a log
  KernelSpec good{0.0, 1.0, KernelVariant::K, 2, 1.0};
  const auto r = schur_certificate(good, 0.0);
  CHECK(r.success);
  CHECK(r.c1 == r.c2);
  KernelSpec bad{0.0, 0.0, KernelVariant::K, 2, 1.0};
  CHECK_FALSE(schur_certificate(bad, 0.0).success);
  KernelSpec low{0.0, 0.0, KernelVariant::K, 2, 0.5};
  CHECK_THROWS_AS(schur_certificate(low, 0.0), DomainError);
}

TEST_CASE("operator apply on constants", "[kernel]") {
  // a = 0, b = 1: (T1)(z) = int (1-|w|^2) / |1 - conj(w) z|^2 dA(w)
  //                      = pi sum_n c_n^2 |z|^{2n} / ((n+1)(n+2)),  c_n = (3/2)_n / n!
  KernelSpec s{0.0, 1.0, KernelVariant::K};
  const auto g = DiskGrid::polar(1.0, 40);
  const Samples one(g.size(), Complex{1.0, 0.0});
  const auto t = operator_apply(s, one, g);
  for (std::size_t i : {std::size_t{0}, g.size() / 2}) {
    const double x = std::norm(g.node(i));
    double series = 0.0, xn = 1.0, c = 1.0;
    for (int n = 0; n < 400; ++n, xn *= x, c *= (n + 0.5) / n) series += c * c * xn / ((n + 1.0) * (n + 2.0));
    CHECK(t[i].real() == Approx(kPi * series).epsilon(2e-3));
  }

  Samples f(g.size()), h(g.size()), fh(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point z = g.node(i);
    f[i] = z * z;
    h[i] = std::conj(z) + 0.5;
    fh[i] = 2.0 * f[i] - Complex{0, 3} * h[i];
  }
  const auto tf = operator_apply(s, f, g), th = operator_apply(s, h, g), tfh = operator_apply(s, fh, g);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(tfh[i] - (2.0 * tf[i] - Complex{0, 3} * th[i])));
  CHECK(err < 1e-12);
}

TEST_CASE("empirical norm stays below the Schur bound", "[kernel][schur]") {
  KernelSpec s{0.0, 0.0, KernelVariant::K};
  const auto r = schur_certificate(s, 0.25);
  REQUIRE(r.success);
  const auto g = DiskGrid::polar(0.99, 40);
  const auto ens = test_ensemble(32, 7);
  const auto est = empirical_norm(s, ens, g);
  CHECK(est.ratios.size() == 32);
  CHECK(est.max_ratio > 0.0);
  CHECK(est.max_ratio <= r.bound);
}

TEST_CASE("test ensemble is deterministic", "[kernel]") {
  const auto e1 = test_ensemble(5, 11), e2 = test_ensemble(5, 11);
  const Point z{0.1, 0.2};
  for (std::size_t k = 0; k < 5; ++k) CHECK(e1[k](z) == e2[k](z));
  CHECK(e1[0](Point{0.81, 0.0}) == Complex{});
}

TEST_CASE("discrete operator check conditions", "[kernel][discrete]") {
  const auto net = build_net(0.2, 0.8);
  KernelSpec s{2.0, 2.0, KernelVariant::B};
  const auto rep = discrete_operator_check(s, 0.8, 1.0, net, 3, 1);
  CHECK(rep.cond_a);
  CHECK(rep.cond_b);
  CHECK(rep.cond_ab);
  CHECK(rep.max_ratio > 0.0);
  CHECK(std::isfinite(rep.max_ratio_outer));
  CHECK_FALSE(rep.growth_flag);
  CHECK_THROWS_AS(discrete_operator_check(s, 1.5, 1.0, net), DomainError);
}

TEST_CASE("schur csv", "[kernel]") {
  CHECK(schur_csv_header() == "a,b,p,q,alpha,C1,C2,empirical_norm,verdict");
  KernelSpec s;
  SchurResult r;
  r.success = true;
  const auto row = schur_csv_row(s, r, 1.0);
  CHECK(row.substr(row.size() - 4) == "pass");
}
