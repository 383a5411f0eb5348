#include "bergman/quad.hpp"

#include "bergman/quadrature_rules.hpp"

#include <boost/math/special_functions/ellint_2.hpp>
#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

using namespace bergman;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// smooth density supported in |w| < 0.6
Complex bump(Point w) {
  const double t = 1.0 - std::norm(w) / 0.36;
  if (t <= 0.0) return 0.0;
  return t * t * t * t * (1.0 + w + 0.5 * std::conj(w) * w * w);
}

Complex dbar_fd(const std::function<Complex(Point)>& f, Point z, double h) {
  const Complex dx = (f(z + h) - f(z - h)) / (2.0 * h);
  const Complex dy = (f(z + Complex{0, h}) - f(z - Complex{0, h})) / (2.0 * h);
  return 0.5 * (dx + Complex{0, 1} * dy);
}

} // namespace

TEST_CASE("gauss legendre integrates polynomials exactly") {
  const auto& g = gauss_legendre(7);
  double s = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * std::pow(g.x[i], 12);
  CHECK_THAT(s, WithinRel(2.0 / 13.0, 1e-14));
}

TEST_CASE("grid weights and simple integrals") {
  CHECK_THROWS_AS(build_grid(0.5, 3), DomainError);
  CHECK_THROWS_AS(build_grid(1.5, 16), DomainError);
  const auto g = build_grid(0.5, 32);
  CHECK_THAT(g.total_weight(), WithinRel(kPi * 0.25, 1e-12));
  CHECK_THAT(integrate_real(g, [](Point) { return 1.0; }), WithinRel(kPi / 4.0, 1e-8));
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(std::abs(g.node(i)) < 0.5);

  auto weighted = [](double r) {
    const auto gr = build_grid(r, 256);
    return integrate_real(gr, [](Point w) { return 1.0 - std::norm(w); });
  };
  const double full = richardson_full_disk(0.99, weighted(0.99), 0.995, weighted(0.995));
  CHECK_THAT(full, WithinRel(kPi / 2.0, 1e-3));
}

TEST_CASE("singular integrand converges under local refinement") {
  // integral over |w| < R of 1/|w - a| is 4 R E(a/R)
  const double exact = 4.0 * 0.9 * boost::math::ellint_2(0.3 / 0.9);
  std::vector<double> est;
  for (int depth = 1; depth <= 5; ++depth) {
    auto g = build_grid(0.9, 128, {}, depth);
    est.push_back(integrate_singular(g, [](Point w) { return Complex{1.0 / std::abs(w - 0.3), 0.0}; }, 0.3).real());
  }
  for (std::size_t i = 2; i < est.size(); ++i) {
    CHECK(std::abs(est[i] - est[i - 1]) <= std::abs(est[i - 1] - est[i - 2]) + 1e-12);
  }
  CHECK(std::abs(est[4] - est[3]) / est[4] < 1e-3);
  CHECK_THAT(est.back(), WithinRel(exact, 1e-3));

  // registering the point on the grid gives the same split
  auto g = build_grid(0.9, 128, {0.3}, 5);
  CHECK_THAT(integrate_real(g, [](Point w) { return 1.0 / std::abs(w - 0.3); }), WithinRel(est.back(), 1e-12));
}

TEST_CASE("lp norms") {
  const auto g = build_grid(1.0, 400);
  const auto one = sample(g, [](Point) { return Complex{1.0}; });
  for (double p : {0.5, 1.0, 2.0, 3.0}) CHECK_THAT(lp_norm(one, {}, p, g), WithinRel(std::pow(kPi, 1.0 / p), 1e-10));
  CHECK_THAT(lp_norm(one, PointSet({0.0}), 2.0, g), WithinRel(std::sqrt(kPi * (std::exp(1.0) - 1.0)), 1e-6));
  for (int n = 0; n <= 8; ++n) {
    const auto f = sample(g, [n](Point z) { return std::pow(z, n); });
    CHECK_THAT(lp_norm(f, {}, 2.0, g), WithinRel(std::sqrt(kPi / (n + 1)), 1e-5));
  }
  CHECK_THROWS_AS(lp_norm(one, {}, 0.0, g), DomainError);
  auto bad = one;
  bad[7] = std::nan("");
  CHECK_THROWS_AS(lp_norm(bad, {}, 2.0, g), DomainError);

  const auto g2 = build_grid(0.95, 64);
  const auto f = sample(g2, [](Point z) { return 1.0 + z * z; });
  const PointSet big(std::vector<Point>{{0.3, 0.1}, {-0.5, 0.2}, {0.0, -0.7}});
  const PointSet small(std::vector<Point>{{0.3, 0.1}});
  CHECK(lp_norm(f, small, 1.5, g2) <= lp_norm(f, big, 1.5, g2));
  CHECK(lp_norm(f, {}, 1.5, g2) <= lp_norm(f, small, 1.5, g2));
}

TEST_CASE("cauchy transform of a disk indicator") {
  // the grid covers exactly |w| < 0.5, so phi = 1 on the grid is the indicator
  const auto g = build_grid(0.5, 96);
  const Complex v = cauchy_transform([](Point) { return Complex{1.0}; }, 0, 0.2, g);
  CHECK(std::abs(v - 0.2) < 1e-4);
  const Complex v2 = cauchy_transform([](Point) { return Complex{1.0}; }, 0, {-0.1, 0.25}, g);
  CHECK(std::abs(v2 - Complex{-0.1, -0.25}) < 1e-4);
  CHECK(cauchy_transform([](Point) { return Complex{}; }, 2, 0.1, g) == Complex{});
  CHECK_THROWS_AS(cauchy_transform([](Point) { return Complex{1.0}; }, 0, 0.6, g), DomainError);
}

TEST_CASE("cauchy transform solves dbar v = phi") {
  const std::vector<Point> pts{{0.1, 0.05}, {-0.3, 0.2}, {0.0, -0.45}, {0.4, 0.3}, {0.55, 0.0}, {0.2, 0.62}, {0.0, 0.0}};
  auto residual = [&](const CauchyTransform& v) {
    double num = 0.0, den = 0.0;
    for (auto z : pts) {
      const Complex d = dbar_fd([&](Point w) { return v(w); }, z, 1e-3);
      num += std::norm(d - bump(z));
      den += std::norm(bump(z));
    }
    return std::sqrt(num / den);
  };
  for (int m : {0, 2}) {
    INFO("m = " << m);
    const auto g = build_grid(0.7, 160);
    CHECK(residual(CauchyTransform(g, bump, m)) <= 2e-3);
    CHECK(residual(CauchyTransform(g, bump, m, {0.0, 0.6})) <= 1e-5);
    // density filling the grid: the cutoff split on the polar grid
    const auto tight = build_grid(0.6, 320);
    double num = 0.0, den = 0.0;
    CauchyTransform v(tight, bump, m);
    for (auto z : pts) {
      if (std::abs(z) < 0.2 || std::abs(z) > 0.55) continue;
      num += std::norm(dbar_fd([&](Point w) { return v(w); }, z, 1e-3) - bump(z));
      den += std::norm(bump(z));
    }
    CHECK(std::sqrt(num / den) <= 2e-3);
  }
}

TEST_CASE("support and grid forms agree") {
  const auto g = build_grid(0.9, 320);
  for (int m : {0, 1, 3}) {
    CauchyTransform a(g, bump, m), b(g, bump, m, {0.0, 0.6});
    for (Point z : {Point{0.3, -0.1}, Point{0.0, 0.59}, Point{0.7, 0.1}, Point{-0.85, 0.2}}) {
      CHECK(std::abs(a(z) - b(z)) <= 2e-4 * std::abs(b(z)) + 1e-7);
    }
  }
  // shifted support, evaluated inside, just outside and far away
  auto shifted = [](Point w) { return bump((w - Point{0.3, 0.2}) * 3.0); };
  CauchyTransform s(g, shifted, 2, {{0.3, 0.2}, 0.2});
  CauchyTransform r(g, shifted, 2);
  for (Point z : {Point{0.3, 0.25}, Point{0.52, 0.2}, Point{0.3, -0.1}, Point{-0.6, -0.3}}) {
    CHECK(std::abs(s(z) - r(z)) <= 1e-3 * std::abs(s(z)) + 1e-7);
  }
}

TEST_CASE("forelli rudin exponents") {
  CHECK_THAT(forelli_rudin_check(0.0, 1.0, FrVariant::Plain).slope, WithinAbs(-1.0, 0.05));
  CHECK_THAT(forelli_rudin_check(1.0, 2.0, FrVariant::Singular).slope, WithinAbs(-1.0, 0.05));
  CHECK_THROWS_AS(forelli_rudin_check(1.0, 1.0, FrVariant::Plain), DomainError);
  CHECK_THROWS_AS(forelli_rudin_check(-1.0, 1.0, FrVariant::Plain), DomainError);
}

TEST_CASE("forelli rudin integral agrees with direct grid quadrature") {
  const Point z = 0.5;
  auto g = build_grid(1.0, 400, {}, 3);
  const double plain = integrate_real(g, [&](Point w) { return 1.0 / std::pow(std::abs(1.0 - std::conj(w) * z), 3); });
  CHECK_THAT(forelli_rudin_integral(0.0, 1.0, FrVariant::Plain, 0.5), WithinRel(plain, 1e-4));
  const double sing = integrate_singular(g,
                                        [&](Point w) {
                                          return Complex{(1.0 - std::norm(w)) /
                                                         (std::abs(z - w) * std::pow(std::abs(1.0 - std::conj(w) * z), 3))};
                                        },
                                        z)
                          .real();
  CHECK_THAT(forelli_rudin_integral(1.0, 2.0, FrVariant::Singular, 0.5), WithinRel(sing, 1e-4));
}

TEST_CASE("local means") {
  const auto g = build_grid(1.0, 64);
  const LocalMeanSpec spec{2.0, 0.4};
  CHECK_THAT(local_mean([](Point) { return Complex{0.0, -3.0}; }, spec, {0.3, 0.2}, g), WithinRel(3.0, 1e-13));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int i = 0; i < 20; ++i) {
    const Point c{u(rng), u(rng)};
    auto f = [c](Point w) { return std::exp(3.0 * w) * (w - c); };
    double prev = 0.0;
    for (double q : {1.0, 1.5, 2.0, 4.0}) {
      const double m = local_mean(f, {q, 0.5}, c * 0.5, g);
      CHECK(m >= prev * (1.0 - 1e-12));
      prev = m;
    }
  }
  const auto small = build_grid(0.5, 16);
  CHECK_THROWS_AS(local_mean([](Point) { return Complex{1.0}; }, spec, 0.4, small), DomainError);
  CHECK_THROWS_AS(local_mean([](Point) { return Complex{1.0}; }, {0.5, 0.4}, 0.0, g), DomainError);
}

TEST_CASE("discrete norm") {
  const auto g = build_grid(1.0, 64);
  const auto net = build_net(0.2, 0.9);
  const LocalMeanSpec spec{1.0, 0.4};
  CHECK(discrete_norm([](Point) { return Complex{}; }, spec, 2.0, net, g) == 0.0);
  CHECK_THROWS_AS(discrete_norm([](Point) { return Complex{1.0}; }, {1.0, 0.3}, 2.0, net, g), DomainError);

  CoveringNet single{PointSet({Point{0.3, 0.1}}), 0.2, 0.1, 0.01};
  auto f = [](Point w) { return 1.0 + w; };
  const double m0 = local_mean(f, spec, {0.3, 0.1}, g);
  CHECK_THAT(discrete_norm(f, spec, 2.0, single, g), WithinRel(std::pow(1.0 - 0.1, 2) * m0 * m0, 1e-14));

  const auto coarse = build_grid(0.9, 24);
  for (double R : {0.2, 0.3, 0.4}) {
    const auto n = build_net(R / 2.0, 0.9);
    const double d = discrete_norm(f, {1.0, R}, 2.0, n, g);
    const double c = continuous_local_mean_norm(f, {1.0, R}, 2.0, coarse);
    // both sides scale like the disk area, so R^2 times the ratio is compared
    INFO("R = " << R << " ratio " << d / c);
    CHECK(R * R * d / c > 1.0);
    CHECK(R * R * d / c < 100.0);
  }
}

TEST_CASE("grid dump round trip") {
  auto g = build_grid(0.8, 8, {0.2}, 3);
  std::stringstream ss;
  write_grid(ss, g);
  const DiskGrid back = read_grid(ss);
  CHECK(back == g);
  CHECK(back.singular_points == g.singular_points);
  CHECK(back.refinement_depth == 3);
  CHECK(back.n_angular() == g.n_angular());
  std::stringstream bad("# grid 0.5 4 4 2 8\n0.1 0.1 -1\n");
  CHECK_THROWS_AS(read_grid(bad), DomainError);
}
