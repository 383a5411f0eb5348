#include "bergman/io.hpp"

#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <sstream>

using namespace bergman;

TEST_CASE("point set files") {
  const PointSet z = parse_point_set(R"([[0.1, 0.2], {"z": [-0.3, 0.0], "multiplicity": 2}, [0, 0]])");
  REQUIRE(z.size() == 3);
  CHECK(z.total_count() == 4);
  CHECK(z.contains(Point{-0.3, 0.0}));

  const PointSet back = parse_point_set(format_point_set(z));
  REQUIRE(back.size() == z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    CHECK(back[i] == z[i]);
    CHECK(back.multiplicity(i) == z.multiplicity(i));
  }

  // round trip is exact for arbitrary doubles
  const PointSet odd(std::vector<Point>{Point{0.1 / 3.0, -std::sqrt(0.2)}, Point{1e-300, 0.7}});
  const PointSet odd_back = parse_point_set(format_point_set(odd));
  for (std::size_t i = 0; i < odd.size(); ++i) CHECK(odd_back[i] == odd[i]);

  CHECK(parse_point_set("[]").empty());
  CHECK_THROWS_AS(parse_point_set("[[0.1]]"), DomainError);
  CHECK_THROWS_AS(parse_point_set("[[0.1, 0.2"), DomainError);
  CHECK_THROWS_AS(parse_point_set("[[1e999, 0]]"), DomainError);
  CHECK_THROWS_AS(parse_point_set("[[NaN, 0]]"), DomainError);
  CHECK_THROWS_AS(parse_point_set("[[1.0, 0.0]]"), DomainError);
  CHECK_THROWS_AS(parse_point_set(R"([{"z": [0, 0], "multiplicity": 0}])"), DomainError);
  CHECK_THROWS_AS(parse_point_set(R"({"z": [0, 0]})"), DomainError);
}

TEST_CASE("target files") {
  const TargetValues c = parse_targets(R"([{"z": [0.5, 0], "value": [1, 2]}, {"z": [0, 0], "value": [3, 0]}])");
  REQUIRE(c.z.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    if (c.z[i] == Point{}) CHECK(c.values[i] == Complex{3, 0});
    if (c.z[i] == Point{0.5, 0}) CHECK(c.values[i] == Complex{1, 2});
  }
  const TargetValues back = parse_targets(format_targets(c));
  CHECK(back.values == c.values);
  CHECK_THROWS_AS(parse_targets("[[0.1, 0.2]]"), DomainError);
  CHECK_THROWS_AS(parse_targets(R"([{"z": [0, 0], "value": [1, 0], "multiplicity": 2}])"), DomainError);
}

TEST_CASE("model files") {
  const AnalyticModel m =
      parse_model(R"({"zeros": [[0.5, 0]], "expcoeffs": [[0.1, 0], [0, -0.2]], "factor": "blaschke"})");
  CHECK(m.zeros.size() == 1);
  CHECK(m.expcoeffs.size() == 2);
  CHECK(m.polycoeffs.empty());
  CHECK(m.factor == ZeroFactor::Blaschke);
  const AnalyticModel back = parse_model(format_model(m));
  CHECK(back.expcoeffs == m.expcoeffs);
  CHECK(back.factor == m.factor);
  CHECK(parse_model("{}").expcoeffs.size() == 1);
  CHECK_THROWS_AS(parse_model(R"({"factor": "other"})"), DomainError);
  CHECK_THROWS_AS(parse_model("[]"), DomainError);
}

TEST_CASE("grid and text files") {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string path = (dir / "bergman_io_grid.txt").string();
  const DiskGrid g = build_grid(0.8, 6, {Point{0.2, 0.1}}, 1);
  save_grid(path, g);
  const DiskGrid h = load_grid(path);
  REQUIRE(h.size() == g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(h.node(i) == g.node(i));
    CHECK(h.weight(i) == g.weight(i));
  }
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text((dir / "bergman_io_missing.json").string()), IoError);
}

TEST_CASE("csv helpers") {
  CHECK(csv_conventions().rfind("# lap = d dbar", 0) == 0);
  const std::string s = format_series("r", "margin", {0.5, 0.9}, {1.0, -0.25});
  CHECK(s == csv_conventions() + "\nr,margin\n0.5,1\n0.9,-0.25\n");
  CHECK(fmt(0.1) == "0.1");
  CHECK_THROWS_AS(format_series("x", "y", {1.0}, {}), DomainError);
}
