#include "bergman/weights.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

using namespace bergman;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Point random_point(std::mt19937_64& rng, double rmax = 0.95) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(rmax * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

// k_Z straight from the defining series
double k_direct(const PointSet& z, Point at) {
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double t = 1.0 - std::norm(z[i]);
    s += z.multiplicity(i) * t * t / std::norm(1.0 - std::conj(z[i]) * at);
  }
  return 0.5 * std::norm(at) * s;
}

} // namespace

TEST_CASE("k_Z examples") {
  CHECK(k_Z(PointSet{}, 0.4) == 0.0);
  CHECK_THAT(k_Z(PointSet({0.0}), 0.8), WithinAbs(0.32, 1e-15));
  CHECK(k_Z(PointSet({0.5}), 0.0) == 0.0);
  std::mt19937_64 rng(1);
  std::vector<Point> pts;
  for (int i = 0; i < 41; ++i) pts.push_back(random_point(rng));
  const PointSet z(pts);
  for (int i = 0; i < 50; ++i) {
    const Point at = random_point(rng, 0.999);
    CHECK_THAT(k_Z(z, at), WithinRel(k_direct(z, at), 1e-13));
  }
}

TEST_CASE("weights are monotone in Z") {
  std::mt19937_64 rng(2);
  std::vector<Point> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(random_point(rng));
  const PointSet big(pts);
  pts.resize(4);
  const PointSet small(pts);
  for (int i = 0; i < 200; ++i) {
    const Point at = random_point(rng, 0.99);
    CHECK(k_Z(small, at) <= k_Z(big, at));
  }
}

TEST_CASE("E_a") {
  const Point z{0.2, -0.5};
  CHECK(std::abs(E_a(0.0, z) - z * std::exp(0.5)) <= 1e-15);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const Point a = random_point(rng), w = random_point(rng);
    CHECK(std::abs(E_a(a, a)) == 0.0);
    const PointSet one({a});
    const double rhs = sigma_Z(one, w) * std::exp(k_Z(one, w));
    CHECK_THAT(std::abs(E_a(a, w)), WithinRel(rhs, 1e-12));
  }
}

TEST_CASE("log|Psi_Z|") {
  const PointSet z(std::vector<Point>{{0.0, 0.5}, {-0.3, 0.0}});
  CHECK(log_abs_Psi(z, {-0.3, 0.0}) == -std::numeric_limits<double>::infinity());
  CHECK(log_abs_Psi(PointSet{}, 0.7) == 0.0);
  double expect = 0.0;
  for (auto a : z.points()) expect += std::log(std::abs(a)) + 0.5 * (1.0 - std::norm(a));
  CHECK_THAT(log_abs_Psi(z, 0.0), WithinAbs(expect, 1e-14));
  CHECK(log_abs_Psi(z, 0.0) < 0.0);

  // product of factors, evaluated one at a time
  const Point at{0.1, 0.33};
  Complex prod = 1.0;
  for (auto a : z.points()) prod *= E_a(a, at);
  CHECK_THAT(log_abs_Psi(z, at), WithinAbs(std::log(std::abs(prod)), 1e-13));
  const WeightEval w(z);
  CHECK(std::abs(w.psi_value(at) - prod) <= 1e-14);
  CHECK(w.psi_value(z[0]) == Complex{});
}

TEST_CASE("Psi_Z value on a large set stays in range") {
  std::mt19937_64 rng(12);
  std::vector<Point> pts;
  for (int i = 0; i < 400; ++i) pts.push_back(random_point(rng, 0.9));
  pts.push_back(0.0);
  const WeightEval w{PointSet(pts)};
  for (int i = 0; i < 50; ++i) {
    const Point at = random_point(rng, 0.95);
    const Complex v = w.psi_value(at);
    const Complex lp = w.log_psi(at);
    CHECK_THAT(std::log(std::abs(v)), WithinAbs(lp.real(), 1e-9));
    CHECK(std::abs(v / std::abs(v) - std::exp(Complex{0.0, lp.imag()})) <= 1e-9);
  }
}

TEST_CASE("sigma_Z") {
  CHECK_THAT(sigma_Z(PointSet({0.0}), 0.8), WithinRel(0.8 * std::exp(0.18), 1e-14));
  const PointSet z(std::vector<Point>{{0.1, 0.2}, {-0.6, 0.1}});
  CHECK(sigma_Z(z, z[1]) == 0.0);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10000; ++i) {
    const double s = sigma_Z(z, random_point(rng, 0.999));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("Psi identity") {
  CHECK(check_Psi_identity(PointSet{}, 0.3) == 0.0);
  const PointSet z(std::vector<Point>{{0.0, 0.5}, {-0.3, 0.0}});
  std::mt19937_64 rng(6);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) worst = std::max(worst, check_Psi_identity(z, random_point(rng, 0.99)));
  CHECK(worst <= 1e-10);
  CHECK_THROWS_AS(check_Psi_identity(z, z[0]), DomainError);
}

TEST_CASE("canonical Laplacian of k_Z") {
  CHECK_THAT(lap_kZ(PointSet({0.0}), {0.3, 0.7}), WithinAbs(0.5, 1e-15));
  const PointSet z({0.5});
  const Point at{0.3, 0.2};
  const double h = 1e-4;
  const double fd = (k_Z(z, at + h) + k_Z(z, at - h) + k_Z(z, at + Complex{0, h}) + k_Z(z, at - Complex{0, h}) -
                     4.0 * k_Z(z, at)) /
                    (h * h);
  CHECK_THAT(fd / 4.0, WithinRel(lap_kZ(z, at), 1e-5));

  std::mt19937_64 rng(8);
  std::vector<Point> pts;
  for (int i = 0; i < 12; ++i) pts.push_back(random_point(rng));
  const PointSet zz(pts);
  for (int i = 0; i < 100; ++i) {
    const Point b = random_point(rng, 0.9), w = random_point(rng, 0.9);
    const Point mw = moebius(b, w);
    const double lhs = std::pow(1.0 - std::norm(w), 2) * lap_kZ(zz, w);
    const double rhs = std::pow(1.0 - std::norm(mw), 2) * lap_kZ(zz.moebius_image(b), mw);
    CHECK_THAT(lhs, WithinRel(rhs, 1e-10));
  }
}

TEST_CASE("sigma lower bound minorizes sigma") {
  CHECK(sigma_lower_bound(PointSet{}, 0.3, std::vector<Point>{0.5}).bound == 1.0);

  const PointSet z0({0.0});
  std::vector<Point> circle;
  for (int j = 0; j < 64; ++j) circle.push_back(std::polar(0.5, 2 * kPi * j / 64));
  const auto b = sigma_lower_bound(z0, 0.5, circle);
  for (auto s : circle) CHECK(b.bound <= sigma_Z(z0, s) * (1.0 + 1e-12));
  CHECK_THROWS_AS(sigma_lower_bound(z0, 0.6, circle), DomainError);

  // minorizes across eta for a random separated set
  std::mt19937_64 rng(10);
  const auto net = build_net(0.6, 0.8);
  for (double eta : {0.1, 0.2, 0.3}) {
    std::vector<Point> samples;
    while (samples.size() < 400) {
      const Point s = random_point(rng, 0.9);
      if (nearest_center(net.centers, s).distance >= eta) samples.push_back(s);
    }
    const auto lb = sigma_lower_bound(net.centers, eta, samples);
    CHECK(lb.bound > 0.0);
    for (auto s : samples) CHECK(lb.bound <= sigma_Z(net.centers, s) * (1.0 + 1e-12));
  }
}

TEST_CASE("perturbation defect") {
  CHECK(perturbation_defect(PointSet{}, 0.9, 0.3) == 0.0);
  const auto net = build_net(0.5, 0.9);
  const PointSet z = net.centers.without_disk(0.0, 0.35);
  CHECK(perturbation_defect(z, 0.9, 0.0) == 0.0);
  CHECK(perturbation_harmonic(z, 0.9, 0.0) == 0.0);
  CHECK_THROWS_AS(perturbation_defect(net.centers, 0.9, 0.1), DomainError);
  CHECK_THROWS_AS(perturbation_defect(PointSet({0.3, 0.3}), 0.9, 0.1), DomainError);
}
