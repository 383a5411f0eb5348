#include "bergman/geometry.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace bergman;
using Catch::Matchers::WithinAbs;

namespace {

Point random_point(std::mt19937_64& rng, double rmax = 0.99) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(rmax * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

} // namespace

TEST_CASE("psi basics") {
  CHECK_THAT(psi(0.0, 0.5), WithinAbs(0.5, 1e-15));
  const Point a{0.3, -0.7};
  CHECK(psi(a, a) == 0.0);
}

TEST_CASE("psi is Moebius invariant, symmetric and a metric") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    // rounding in M_b is amplified by 1/(1-|b|), so b stays away from the circle
    const Point b = random_point(rng, 0.8), z = random_point(rng), w = random_point(rng), x = random_point(rng);
    CHECK_THAT(psi(moebius(b, z), moebius(b, w)), WithinAbs(psi(z, w), 1e-14));
    CHECK(psi(z, w) == psi(w, z));
    CHECK(psi(z, w) <= psi(z, x) + psi(x, w) + 1e-12);
  }
}

TEST_CASE("moebius") {
  const Point a{0.4, 0.2};
  CHECK(std::abs(moebius(a, a)) == 0.0);
  CHECK(moebius(a, 0.0) == a);
  CHECK(std::abs(moebius(0.5, moebius(0.5, Point{0, 0.3})) - Point{0, 0.3}) <= 1e-14);
}

TEST_CASE("euclidean params of pseudo-hyperbolic disks") {
  auto d = euclidean_params({0.5, 0.5});
  CHECK_THAT(d.center.real(), WithinAbs(0.4, 1e-15));
  CHECK_THAT(d.radius, WithinAbs(0.4, 1e-15));
  d = euclidean_params({0.0, 0.3});
  CHECK(d.center == 0.0);
  CHECK_THAT(d.radius, WithinAbs(0.3, 1e-15));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  int agree = 0;
  for (int i = 0; i < 10000; ++i) {
    const Point z = random_point(rng), w = random_point(rng);
    const double r = u(rng);
    const auto e = euclidean_params({z, r});
    const double dist = std::abs(w - e.center) - e.radius;
    if (std::abs(dist) < 1e-12 || std::abs(psi(z, w) - r) < 1e-12) {
      ++agree;
      continue;
    }
    if ((dist < 0) == (psi(z, w) < r)) ++agree;
  }
  CHECK(agree == 10000);
}

TEST_CASE("point sets are canonically ordered and validated") {
  PointSet z({{0.5, 0.0}, {0.0, 0.1}, {-0.1, 0.0}});
  CHECK(z[0] == Point{0.0, 0.1});
  CHECK(z[1] == Point{-0.1, 0.0});
  CHECK(z[2] == Point{0.5, 0.0});
  CHECK_THROWS_AS(PointSet(std::vector<Point>{{1.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(PointSet(std::vector<Point>{{0.1, 0.0}}, {0}), DomainError);
  CHECK_THROWS_AS(PointSet(std::vector<Point>{{std::nan(""), 0.0}}), DomainError);
  PointSet m({{0.2, 0.0}}, {3});
  CHECK(m.total_count() == 3);
  CHECK(!m.all_simple());
}

TEST_CASE("separation constant") {
  CHECK_THAT(separation_constant(PointSet({0.0, 0.5})), WithinAbs(0.5, 1e-15));
  CHECK(separation_constant(PointSet({0.3, 0.3})) == 0.0);
  CHECK_THROWS_AS(separation_constant(PointSet({0.3})), DomainError);
  const auto net = build_net(0.2, 0.7);
  const double s = separation_constant(net.centers);
  CHECK(s >= 0.1);
  CHECK(s <= 0.2);
}

TEST_CASE("p_lambda") {
  const Point p = p_lambda(0.6, 0.5);
  CHECK_THAT(std::abs(p), WithinAbs(std::sqrt(0.68), 1e-15));
  CHECK(std::arg(p) == 0.0);
  CHECK(p_lambda(0.0, 0.3) == 0.0);
  CHECK(std::abs(p_lambda_inverse(p, 0.5) - 0.6) <= 1e-15);
  CHECK_THROWS_AS(p_lambda_inverse(0.1, 0.5), DomainError);

  const auto net = build_net(0.3, 0.95);
  double prev = 1.0;
  for (double lam : {0.9, 0.99, 0.999}) {
    double sup = 0.0;
    for (auto a : net.centers.points()) sup = std::max(sup, psi(a, p_lambda(a, lam)));
    CHECK(sup < prev);
    prev = sup;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("build_net: separation and covering") {
  const auto tiny = build_net(0.9, 0.1);
  REQUIRE(tiny.centers.size() == 1);
  CHECK(tiny.centers[0] == 0.0);
  CHECK_THROWS_AS(build_net(0.1, 0.5, 0.08), DomainError);
  CHECK_THROWS_AS(build_net(1.2, 0.5), DomainError);

  const auto net = build_net(0.3, 0.8);
  CHECK(separation_constant(net.centers) >= 0.15 - 1e-12);
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const Point z = random_point(rng, 0.8);
    worst = std::max(worst, nearest_center(net.centers, z).distance);
  }
  CHECK(worst < 0.3);
}
