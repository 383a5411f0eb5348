#include <catch_amalgamated.hpp>

#include "bergman/extremal.hpp"

#include <cmath>
#include <random>

using namespace bergman;
using Catch::Approx;

namespace {

double max_of(const std::vector<double>& v, std::size_t from = 0) {
  double m = 0.0;
  for (std::size_t i = from; i < v.size(); ++i) m = std::max(m, v[i]);
  return m;
}

// max |G(0) c_0| / sqrt(c* A c) by Gauss-Seidel sweeps on c_0 = 1 from random
// starts; A is assembled here directly from the Blaschke factor.
double brute_force_p2(Point a, int degree, const DiskGrid& g, int restarts) {
  const int n = degree + 1;
  std::vector<Complex> A(n * n);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point z = g.node(i);
    const Complex b = std::conj(a) / std::abs(a) * (a - z) / (1.0 - std::conj(a) * z);
    const double w = std::norm(b) * g.weight(i);
    std::vector<Complex> zp(n, 1.0);
    for (int k = 1; k < n; ++k) zp[k] = zp[k - 1] * z;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) A[j * n + k] += w * std::conj(zp[j]) * zp[k];
  }
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    std::vector<Complex> c(n);
    c[0] = 1.0;
    for (int k = 1; k < n; ++k) c[k] = Complex{nd(rng), nd(rng)};
    for (int sweep = 0; sweep < 4000; ++sweep) {
      for (int k = 1; k < n; ++k) {
        Complex s{};
        for (int j = 0; j < n; ++j)
          if (j != k) s += A[k * n + j] * c[j];
        c[k] = -s / A[k * n + k];
      }
    }
    Complex q{};
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) q += std::conj(c[j]) * A[j * n + k] * c[k];
    best = std::max(best, std::abs(a) / std::sqrt(q.real()));
  }
  return best;
}

AnalyticModel normalized(AnalyticModel m, double p, const DiskGrid& g) {
  m.expcoeffs[0] -= std::log(model_norm(m, p, g));
  return m;
}

const PointSet kFive(std::vector<Point>{{0.5, 0}, {-0.3, 0.4}, {0.1, -0.6}, {0.7, 0.2}, {-0.5, -0.5}});

} // namespace

TEST_CASE("p = 2 extremal over constants", "[extremal]") {
  const auto g = DiskGrid::polar(1.0, 64);
  const auto s = solve_extremal_p2(PointSet{}, 0, g);
  CHECK(s.value == Approx(1.0 / std::sqrt(kPi)).epsilon(1e-12));
  CHECK(model_norm(s.model, 2.0, g) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("p = 2 extremal matches a brute-force search", "[extremal]") {
  const auto g = DiskGrid::polar(0.99, 48);
  const PointSet w(std::vector<Point>{{0.5, 0.0}});
  const auto s = solve_extremal_p2(w, 6, g);
  CHECK(s.warnings.empty());
  CHECK(std::abs(model_norm(s.model, 2.0, g) - 1.0) <= 1e-8);
  CHECK(std::abs(s.value - brute_force_p2(0.5, 6, g, 5)) <= 1e-4);
  CHECK_THROWS_AS(solve_extremal_p2(PointSet(std::vector<Point>{{0.0, 0.0}}), 2, g), DomainError);
}

TEST_CASE("general extremal solver", "[extremal]") {
  const auto g = DiskGrid::polar(0.99, 64);
  SECTION("no zeros gives a constant") {
    const auto s = solve_extremal_general(PointSet{}, 3.0, 8, g);
    REQUIRE(s.converged);
    for (std::size_t k = 1; k < s.model.expcoeffs.size(); ++k) CHECK(std::abs(s.model.expcoeffs[k]) <= 1e-6);
  }
  SECTION("agrees with the p = 2 Gram solution") {
    const PointSet w(std::vector<Point>{{0.5, 0.0}});
    CHECK(std::abs(solve_extremal_general(w, 2.0, 8, g).value - solve_extremal_p2(w, 8, g).value) <= 1e-3);
    CHECK(std::abs(solve_extremal_general(kFive, 2.0, 8, g).value - solve_extremal_p2(kFive, 8, g).value) <= 1e-3);
  }
  SECTION("initial scale does not matter") {
    ExtremalOptions o1, o2;
    o1.initial_q0 = 0.7;
    o2.initial_q0 = 1.4;
    const auto a = solve_extremal_general(kFive, 1.5, 6, g, o1), b = solve_extremal_general(kFive, 1.5, 6, g, o2);
    CHECK(a.value == Approx(b.value).epsilon(1e-12));
  }
  SECTION("normalized and stationary") {
    for (double p : {1.0, 2.0, 4.0}) {
      INFO("p " << p);
      const auto s = solve_extremal_general(kFive, p, 8, g);
      CHECK(s.converged);
      CHECK(std::abs(model_norm(s.model, p, g) - 1.0) <= 1e-8);
      const auto r = harm_eval_check(s.model, p, 4, g);
      REQUIRE(r.size() == 9);
      CHECK(r[0] <= 1e-8);
      CHECK(max_of(r) <= 1e-5);
    }
  }
  CHECK_THROWS_AS(solve_extremal_general(kFive, 0.0, 4, g), DomainError);
}

TEST_CASE("harmonic evaluation detects non-extremal functions", "[extremal]") {
  const auto g = DiskGrid::polar(0.99, 48);
  AnalyticModel f;
  f.polycoeffs = {1.0, 1.0}; // 1 + z
  f = normalized(f, 2.0, g);
  const auto r = harm_eval_check(f, 2.0, 2, g);
  CHECK(r[0] <= 1e-8);
  CHECK(r[1] > 0.01);
}

TEST_CASE("growth bounds", "[extremal]") {
  AnalyticModel c;
  c.expcoeffs = {-0.5 * std::log(kPi)};
  const auto rc = growth_check(c, PointSet{}, 2.0);
  CHECK(rc.c == Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(rc.c_prime == rc.c);
  CHECK(rc.stable);

  const auto g = DiskGrid::polar(0.99, 64);
  const PointSet w(std::vector<Point>{{0.5, 0.0}});
  const auto s = solve_extremal_general(w, 2.0, 8, g);
  const auto r = growth_check(s.model, w, 2.0);
  CHECK(std::abs(r.c_by_rmax[1] - r.c_by_rmax[0]) <= 0.05 * r.c_by_rmax[0]);
  CHECK(std::isfinite(r.c_prime));
}

TEST_CASE("dividing out zeros", "[extremal]") {
  const auto g = DiskGrid::polar(0.99, 48);
  const auto s = solve_extremal_general(kFive, 2.0, 6, g);
  CHECK(divide_out_zeros(s.model, PointSet{}).zeros == s.model.zeros);
  const PointSet drop(std::vector<Point>{{0.5, 0}, {0.7, 0.2}});
  const auto q = divide_out_zeros(s.model, drop);
  CHECK(q.zeros.size() == 3);
  CHECK(q.expcoeffs == s.model.expcoeffs);
  const double ratio = model_norm(q, 2.0, g) / model_norm(s.model, 2.0, g);
  CHECK(std::isfinite(ratio));
  const auto qn = normalized(q, 2.0, g);
  CHECK(std::abs(ModelEval(qn).value(0.0)) >= std::abs(ModelEval(s.model).value(0.0)));
  CHECK_THROWS_AS(divide_out_zeros(s.model, PointSet(std::vector<Point>{{0.1, 0.1}})), DomainError);
}

TEST_CASE("g_a family", "[extremal]") {
  SECTION("empty sequence gives constants") {
    const auto net = build_net(0.5, 0.5);
    const auto fam = build_ga_family(PointSet{}, 2.0, net, 0.3);
    REQUIRE(fam.centers.size() == net.centers.size());
    for (std::size_t j = 0; j < fam.centers.size(); ++j) {
      const auto& c = fam.centers[j];
      REQUIRE(c.ok);
      CHECK(std::abs(fam.g(j, 0.3) - fam.g(j, -0.2)) <= 1e-6 * std::abs(fam.g(j, 0.0)));
      CHECK(c.c == Approx(std::pow(c.delta, 2.0)).epsilon(1e-6));
    }
  }
  const auto z = build_net(0.6, 0.9).centers;
  const double sep = separation_constant(z);
  SECTION("center 0 is the extremal function of the reflected set") {
    CoveringNet one{PointSet(std::vector<Point>{{0.0, 0.0}}), 0.5, 0.0, 0.0};
    GaOptions opt;
    const auto fam = build_ga_family(z, 2.0, one, sep, opt);
    REQUIRE(fam.centers[0].ok);
    CHECK(fam.centers[0].fit_residual <= 1e-10);
    const auto kept = z.moebius_image(0.0).without_disk(0.0, sep);
    const auto s = solve_extremal_general(kept, 2.0 / opt.lambda, opt.degree, DiskGrid::polar(opt.rmax, opt.n_radial));
    for (Point x : {Point{0.1, 0.2}, Point{-0.4, 0.3}}) {
      const Complex q = [&] {
        Complex v{};
        for (auto it = s.model.expcoeffs.rbegin(); it != s.model.expcoeffs.rend(); ++it) v = v * (-x) + *it;
        return v;
      }();
      CHECK(std::abs(fam.g(0, x)) == Approx(std::exp(q.real())).epsilon(1e-8));
    }
  }
  SECTION("lattice with five centers") {
    const auto net = build_net(0.5, 0.6);
    std::vector<Point> five(net.centers.points().begin(), net.centers.points().begin() + 5);
    CoveringNet n5{PointSet(five), 0.5, 0.6, 0.0};
    const auto fam = build_ga_family(z, 2.0, n5, sep);
    CHECK(fam.eps == Approx(0.1));
    for (const auto& c : fam.centers) {
      CHECK(c.ok);
      CHECK(c.delta > 0.0);
      CHECK(std::isfinite(c.c));
    }
    CHECK_THROWS_AS(build_ga_family(z, 2.0, n5, 0.5 * sep), DomainError);
  }
}
