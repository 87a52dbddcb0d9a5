#include "oracles.hpp"

#include "wallspace/ball.hpp"
#include "wallspace/walls.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace wallspace;
using oracle::fixture;

namespace {

struct FlatTorus {
  ComplexSpec spec = load_complex_spec(fixture("flat_torus.complex"));
  Ball ball;
  std::vector<Wall> walls;
  std::vector<Partition> parts;
  std::vector<FlatPatch> patches;

  explicit FlatTorus(int r) : ball(build_ball(spec, r, 0)) {
    walls = extract_walls(ball, spec);
    parts = partition_walls(ball, walls);
    patches = maximal_flat_patches(ball, spec);
  }
};

}  // namespace

TEST_CASE("flat torus: one straight wall per half-integer line, each splitting the ball in two") {
  FlatTorus t(3);
  REQUIRE(t.patches.size() == 1);
  oracle::LineFamilies fam(t.ball, t.patches[0], t.walls);
  std::map<WallType, std::set<double>> offsets;
  for (size_t k = 0; k < t.walls.size(); ++k) {
    const auto& w = t.walls[k];
    CHECK(w.interiorly_complete);
    CHECK(wall_is_simply_connected(w));
    CHECK(t.parts[k].components == 2);
    CHECK(complement_components(t.ball, w) == 2);
    CHECK(refraction_points(t.ball, w).empty());
    auto r = wall_plane_intersection(t.ball, w, t.patches[0]);
    CHECK(r.kind == PlaneIntersection::StraightLine);
    offsets[w.type].insert(std::round(2 * fam.wall_offset(w)) / 2);
  }
  // lines at offsets +-1/2, +-3/2, +-5/2 in both families
  for (auto type : {WallType::A, WallType::B}) {
    std::set<double> want = {-2.5, -1.5, -0.5, 0.5, 1.5, 2.5};
    CHECK(offsets[type] == want);
  }
}

TEST_CASE("flat torus crossing numbers equal the analytic line count for every pair") {
  FlatTorus t(3);
  oracle::LineFamilies fam(t.ball, t.patches[0], t.walls);
  for (int x = 0; x < t.ball.vertex_count(); ++x)
    for (int y = x + 1; y < t.ball.vertex_count(); ++y) {
      auto q = make_query(t.ball, x, y, t.patches);
      CHECK(crossing_number(t.walls, t.parts, q) == fam.crossing(x, y));
      CHECK(bowtie_count(t.ball, q) == 0);
    }
}

TEST_CASE("flat torus properness profile is n at distance n") {
  FlatTorus t(3);
  oracle::LineFamilies fam(t.ball, t.patches[0], t.walls);
  std::vector<int> want(4, 1 << 20);
  for (int x = 0; x < t.ball.vertex_count(); ++x) {
    if (!t.ball.vertices[x].interior) continue;
    auto dist = skeleton_distances(t.ball, x);
    for (int y = x + 1; y < t.ball.vertex_count(); ++y)
      if (t.ball.vertices[y].interior && dist[y] >= 1 && dist[y] <= 3)
        want[dist[y]] = std::min(want[dist[y]], fam.crossing(x, y));
  }
  auto s = properness_profile(t.ball, t.walls, t.parts, 3, Exec::Serial);
  auto p = properness_profile(t.ball, t.walls, t.parts, 3, Exec::Parallel);
  for (int n = 1; n <= 3; ++n) {
    CHECK(s.min_crossing[n] == want[n]);
    CHECK(s.min_crossing[n] == n);
    CHECK(p.min_crossing[n] == s.min_crossing[n]);
    CHECK(p.witness[n] == s.witness[n]);
    CHECK(p.pairs[n] == s.pairs[n]);
  }
  CHECK(s.inversions.empty());
}

TEST_CASE("exact floor of chart distances") {
  Point o{Q3(Rational(0)), Q3(Rational(0))};
  Point p3{Q3(Rational(3)), Q3(Rational(0))};
  Point sq3{Q3(Rational(0)), Q3(Rational(0), Rational(1))};     // sqrt 3
  Point two_sq3{Q3(Rational(0)), Q3(Rational(0), Rational(2))};  // 2 sqrt 3
  Point diag{Q3(Rational(3, 2)), Q3(Rational(0), Rational(1, 2))};
  CHECK(floor_chart_distance(o, p3) == 3);
  CHECK(floor_chart_distance(o, sq3) == 1);
  CHECK(floor_chart_distance(o, two_sq3) == 3);
  CHECK(floor_chart_distance(o, diag) == 1);
  CHECK(floor_chart_distance(p3, p3) == 0);
}

TEST_CASE("flat pair samples respect the chart distance lower bound") {
  FlatTorus t(3);
  auto samples = flat_pair_samples(t.ball, t.walls, t.parts, t.patches, 0);
  CHECK(samples.size() == 19 * 18 / 2);
  for (const auto& s : samples) CHECK(s.crossing >= s.floor_distance);
  auto thin = flat_pair_samples(t.ball, t.walls, t.parts, t.patches, 10);
  CHECK(thin.size() == 10);
}

TEST_CASE("separation queries reject endpoints on the wall and incomplete walls") {
  auto spec = load_complex_spec(fixture("v_bowtie.complex"));
  auto b = build_ball(spec, 2, 0);
  auto walls = extract_walls(b, spec);
  auto parts = partition_walls(b, walls);
  bool saw_on_wall = false, saw_incomplete = false;
  for (size_t k = 0; k < walls.size(); ++k) {
    const auto& w = walls[k];
    if (!w.interiorly_complete && !saw_incomplete) {
      CHECK_THROWS_AS(separates(b, w, parts[k], 0, 1), WallError);
      CHECK_THROWS_AS(complement_components(b, w), WallError);
      saw_incomplete = true;
    }
    if (w.interiorly_complete && !saw_on_wall) {
      for (const auto& p : w.points)
        if (p.is_vertex()) {
          CHECK_THROWS_AS(separates(b, w, parts[k], p.vertex, 0), WallError);
          saw_on_wall = true;
          break;
        }
    }
  }
  CHECK(saw_incomplete);
  CHECK(saw_on_wall);
}

TEST_CASE("v_bowtie walls at radius 2: lemmas hold and partitions agree serial vs parallel") {
  auto spec = load_complex_spec(fixture("v_bowtie.complex"));
  auto b = build_ball(spec, 2, 0);
  auto walls = extract_walls(b, spec);
  auto s = partition_walls(b, walls, Exec::Serial);
  auto p = partition_walls(b, walls, Exec::Parallel);
  REQUIRE(s.size() == p.size());
  std::set<WallType> complete_types;
  for (size_t k = 0; k < walls.size(); ++k) {
    CHECK(s[k].components == p[k].components);
    CHECK(s[k].vertex_label == p[k].vertex_label);
    CHECK(s[k].face_label == p[k].face_label);
    if (!walls[k].interiorly_complete) continue;
    complete_types.insert(walls[k].type);
    CHECK(wall_is_simply_connected(walls[k]));
    CHECK(s[k].components == 2);
  }
  CHECK(complete_types.size() == 5);
  auto through = walls_through_cells(b, walls);
  for (int d = 0; d < 3; ++d)
    for (size_t c = 0; c < through[d].size(); ++c) {
      CHECK(through[d][c] <= 5);
      if (c < 40) CHECK(walls_through_cell(walls, d, static_cast<int>(c)) == through[d][c]);
    }
  CHECK_THROWS_AS(walls_through_cell(walls, 3, 0), WallError);
}

TEST_CASE("track walls refract only where they leave the triangles") {
  auto spec = load_complex_spec(fixture("v_bowtie.complex"));
  auto b = build_ball(spec, 2, 0);
  auto walls = extract_walls(b, spec);
  int refracting = 0;
  for (const auto& w : walls) {
    if (w.type == WallType::D || w.type == WallType::Transverse) continue;
    auto pts = refraction_points(b, w);
    if (pts.empty()) continue;
    ++refracting;
    for (int k : pts) {
      const auto& p = w.points[k];
      bool off_triangle = false;
      auto kind = [&](int f) { return spec.faces[b.faces[f].q].kind; };
      if (p.is_vertex()) {
        for (auto [f, i] : b.vertex_corners[p.vertex]) off_triangle = off_triangle || kind(f) != FaceKind::Triangle;
      } else {
        for (auto [f, i] : b.edge_sides[p.edge]) off_triangle = off_triangle || kind(f) != FaceKind::Triangle;
      }
      CHECK(off_triangle);
    }
  }
  CHECK(refracting > 0);
}

TEST_CASE("a/b/c walls meet v_bowtie flat patches in straight lines") {
  auto spec = load_complex_spec(fixture("v_bowtie.complex"));
  auto b = build_ball(spec, 2, 0);
  auto walls = extract_walls(b, spec);
  auto patches = maximal_flat_patches(b, spec);
  int lines = 0;
  for (const auto& p : patches)
    for (const auto& w : walls) {
      if (w.type == WallType::D || w.type == WallType::Transverse) continue;
      auto r = wall_plane_intersection(b, w, p);
      lines += r.kind == PlaneIntersection::StraightLine;
      if (r.kind == PlaneIntersection::StraightLine) {
        CHECK(!r.chords.empty());
        CHECK(r.a * r.a + r.b * r.b != Q3());
      }
    }
  CHECK(lines > 0);
}

TEST_CASE("shortest path queries and bow-tie counting") {
  auto spec = load_complex_spec(fixture("v_bowtie.complex"));
  auto b = build_ball(spec, 2, 0);
  for (int y : {1, 5, 20, 40}) {
    auto q = make_query(b, 0, y);
    auto dist = skeleton_distances(b, 0);
    CHECK(static_cast<int>(q.path.size()) == dist[y]);
    CHECK(make_query(b, 0, y).path == q.path);
    std::set<int> faces;
    for (int e : q.path)
      for (auto [f, i] : b.edge_sides[e])
        if (spec.faces[b.faces[f].q].kind == FaceKind::Bowtie) faces.insert(f);
    CHECK(bowtie_count(b, q) == static_cast<int>(faces.size()));
  }
  CHECK_THROWS_AS(make_query(b, 0, b.vertex_count()), WallError);
}

TEST_CASE("inventory and crossing CSV exports") {
  FlatTorus t(2);
  auto inv = walls_inventory_json(t.ball, t.walls);
  REQUIRE(inv.size() == t.walls.size());
  CHECK(inv[0].contains("wall_type"));
  CHECK(inv[0]["interiorly_complete"].get<bool>());
  std::vector<CrossingQuery> qs = {make_query(t.ball, 0, 1), make_query(t.ball, 0, 7)};
  auto csv = crossing_csv(t.ball, t.walls, t.parts, qs);
  CHECK(csv.rfind("x,y,skeleton_distance,crossing_number,bowtie_count\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
