#include "oracles.hpp"

#include "wallspace/ball.hpp"
#include "wallspace/cubulator.hpp"
#include "wallspace/walls.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

using namespace wallspace;
using oracle::fixture;

namespace {

/// Number of cliques of each size, by plain recursion over the adjacency matrix.
std::vector<std::int64_t> clique_counts(int n, const std::function<bool(int, int)>& adj) {
  std::vector<std::int64_t> counts(1, 1);
  std::vector<int> cur;
  std::function<void(int)> grow = [&](int from) {
    for (int v = from; v < n; ++v) {
      bool ok = true;
      for (int u : cur) ok = ok && adj(u, v);
      if (!ok) continue;
      cur.push_back(v);
      if (counts.size() <= cur.size()) counts.push_back(0);
      ++counts[cur.size()];
      grow(v + 1);
      cur.pop_back();
    }
  };
  grow(0);
  return counts;
}

/// Cubes of a finite CAT(0) cube complex from the clique counts of its crossing graph: every
/// k-cube is a j-clique at its base-nearest corner together with a k-subset of it.
std::vector<std::int64_t> cubes_from_cliques(const std::vector<std::int64_t>& cliques) {
  std::vector<std::int64_t> cubes(cliques.size(), 0);
  for (size_t j = 0; j < cliques.size(); ++j) {
    std::int64_t binom = 1;
    for (size_t k = 0; k <= j; ++k) {
      cubes[k] += binom * cliques[j];
      binom = binom * static_cast<std::int64_t>(j - k) / static_cast<std::int64_t>(k + 1);
    }
  }
  return cubes;
}

std::int64_t euler(const std::vector<std::int64_t>& cubes) {
  std::int64_t e = 0;
  for (size_t k = 0; k < cubes.size(); ++k) e += (k % 2 ? -1 : 1) * cubes[k];
  return e;
}

struct Setup {
  ComplexSpec spec;
  Ball ball;
  std::vector<Wall> walls;
  std::vector<Partition> parts;
  Setup(const std::string& name, int r) : spec(load_complex_spec(fixture(name))), ball(build_ball(spec, r, 0)) {
    walls = extract_walls(ball, spec);
    parts = partition_walls(ball, walls);
  }
};

}  // namespace

TEST_CASE("flat torus crossing graph: walls cross iff their lines meet inside the ball") {
  Setup s("flat_torus.complex", 3);
  auto patches = maximal_flat_patches(s.ball, s.spec);
  oracle::LineFamilies fam(s.ball, patches[0], s.walls);
  auto g = crossing_graph(s.ball, s.walls, s.parts);
  REQUIRE(g.node_count() == 12);
  int edges = 0;
  for (int a = 0; a < g.node_count(); ++a)
    for (int b = a + 1; b < g.node_count(); ++b) {
      const auto &wa = s.walls[g.walls[a]], &wb = s.walls[g.walls[b]];
      bool want = wa.type != wb.type && fam.meeting_norm(wa, wb) < 3;
      CHECK(g.adjacent(a, b) == want);
      edges += want;
    }
  CHECK(g.edge_count() == edges);
  CHECK(edges == 24);
}

TEST_CASE("flat torus dual cube complex is a square complex with Euler characteristic 1") {
  Setup s("flat_torus.complex", 3);
  auto g = crossing_graph(s.ball, s.walls, s.parts);
  auto want = cubes_from_cliques(clique_counts(g.node_count(), [&](int a, int b) { return g.adjacent(a, b); }));
  auto r = dual_cube_complex(s.ball, s.walls, s.parts);
  REQUIRE(r.cubes.size() == 3);
  CHECK(r.cubes == want);
  CHECK(r.cubes == std::vector<std::int64_t>{37, 60, 24});
  CHECK(euler(r.cubes) == 1);
  CHECK(r.max_dim == 2);
  CHECK(r.max_crossing_family == 2);
}

TEST_CASE("a grid of walls cubulates to a grid of squares") {
  Setup s("flat_torus.complex", 3);
  auto patches = maximal_flat_patches(s.ball, s.spec);
  oracle::LineFamilies fam(s.ball, patches[0], s.walls);
  auto types = fam.dir;
  REQUIRE(types.size() == 2);
  WallType first = types.begin()->first, second = std::next(types.begin())->first;
  std::vector<Wall> walls;
  std::vector<Partition> parts;
  for (size_t k = 0; k < s.walls.size(); ++k) {
    double t = std::abs(fam.wall_offset(s.walls[k]));
    double limit = s.walls[k].type == first ? 0.5 : 1.5;
    if (s.walls[k].type != first && s.walls[k].type != second) continue;
    if (t > limit + 1e-9) continue;
    walls.push_back(s.walls[k]);
    parts.push_back(s.parts[k]);
  }
  REQUIRE(walls.size() == 6);
  auto r = dual_cube_complex(s.ball, walls, parts);
  // 2 lines by 4 lines: 3 x 5 vertices
  CHECK(r.cubes == std::vector<std::int64_t>{15, 22, 8});
}

TEST_CASE("v_bowtie radius 2: cube counts follow the crossing graph cliques") {
  Setup s("v_bowtie.complex", 2);
  auto g = crossing_graph(s.ball, s.walls, s.parts, Exec::Serial);
  auto gp = crossing_graph(s.ball, s.walls, s.parts, Exec::Parallel);
  CHECK(g.walls == gp.walls);
  CHECK(g.adj == gp.adj);
  auto cliques = clique_counts(g.node_count(), [&](int a, int b) { return g.adjacent(a, b); });
  auto serial = dual_cube_complex(s.ball, s.walls, s.parts, {2000000, Exec::Serial});
  auto parallel = dual_cube_complex(s.ball, s.walls, s.parts, {2000000, Exec::Parallel});
  CHECK(serial.cubes == cubes_from_cliques(cliques));
  CHECK(parallel.cubes == serial.cubes);
  CHECK(euler(serial.cubes) == 1);
  CHECK(serial.max_dim == static_cast<int>(cliques.size()) - 1);
  CHECK(serial.max_crossing_family == serial.max_dim);
  CHECK(static_cast<int>(serial.witness.size()) == serial.max_dim);
  for (size_t i = 0; i < serial.witness_cube.size(); ++i)
    for (size_t j = i + 1; j < serial.witness_cube.size(); ++j) {
      auto a = std::find(g.walls.begin(), g.walls.end(), serial.witness_cube[i]) - g.walls.begin();
      auto b = std::find(g.walls.begin(), g.walls.end(), serial.witness_cube[j]) - g.walls.begin();
      CHECK(g.adjacent(static_cast<int>(a), static_cast<int>(b)));
    }
}

TEST_CASE("crossing requires meeting walls") {
  Setup s("v_bowtie.complex", 2);
  auto sides = wall_sides(s.ball, s.walls, s.parts);
  auto meet = meeting_pairs(s.walls, sides);
  auto g = crossing_graph(s.walls, sides);
  std::set<std::pair<int, int>> meeting(meet.begin(), meet.end());
  for (int a = 0; a < g.node_count(); ++a)
    for (int b : g.adj[a])
      if (a < b) {
        CHECK(meeting.count({a, b}) == 1);
        CHECK(sides.inhabited(a, 0, b, 0));
        CHECK(sides.inhabited(a, 0, b, 1));
        CHECK(sides.inhabited(a, 1, b, 0));
        CHECK(sides.inhabited(a, 1, b, 1));
      }
}

TEST_CASE("maximum clique against brute force on random graphs") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 14;
    std::uniform_real_distribution<double> u(0, 1);
    double p = 0.3 + 0.02 * trial;
    CrossingGraph g;
    g.adj.assign(n, {});
    for (int i = 0; i < n; ++i) g.walls.push_back(i);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (u(rng) < p) {
          g.adj[i].push_back(j);
          g.adj[j].push_back(i);
        }
    int best = 0;
    std::vector<int> best_set;
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<int> set;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) set.push_back(i);
      bool clique = true;
      for (size_t a = 0; a < set.size() && clique; ++a)
        for (size_t b = a + 1; b < set.size() && clique; ++b) clique = g.adjacent(set[a], set[b]);
      if (!clique) continue;
      if (static_cast<int>(set.size()) > best || (static_cast<int>(set.size()) == best && set < best_set)) {
        best = static_cast<int>(set.size());
        best_set = set;
      }
    }
    auto r = max_crossing_family(g);
    CHECK(r.size == best);
    CHECK(r.witness == best_set);
  }
}

TEST_CASE("state cap stops the cube search") {
  Setup s("flat_torus.complex", 3);
  CHECK_THROWS_AS(dual_cube_complex(s.ball, s.walls, s.parts, {10, Exec::Serial}), CubulationError);
}

TEST_CASE("cube report JSON") {
  Setup s("flat_torus.complex", 2);
  auto r = dual_cube_complex(s.ball, s.walls, s.parts);
  auto j = cube_report_json(r, s.walls);
  CHECK(j["max_dim"].get<int>() == r.max_dim);
  CHECK(j["cubes"].size() == r.cubes.size());
  CHECK(euler(r.cubes) == 1);
}
