#include "oracles.hpp"

#include "wallspace/ball.hpp"
#include "wallspace/cubulator.hpp"
#include "wallspace/link.hpp"
#include "wallspace/walls.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>

using namespace wallspace;
using oracle::fixture;

namespace {

struct World {
  ComplexSpec spec;
  std::optional<Ball> ball;
  std::vector<Wall> walls;
  std::vector<Partition> parts;
  std::vector<FlatPatch> patches;
  bool has_walls = false;

  World(const std::string& name, int radius) : spec(load_complex_spec(fixture(name))) {
    ball.emplace(build_ball(spec, radius, 0));
  }
  void need_walls() {
    if (has_walls) return;
    walls = extract_walls(*ball, spec);
    parts = partition_walls(*ball, walls);
    patches = maximal_flat_patches(*ball, spec);
    has_walls = true;
  }
};

std::unique_ptr<World> bowtie3, torus3;

World& bowtie() {
  if (!bowtie3) bowtie3 = std::make_unique<World>("v_bowtie.complex", 3);
  return *bowtie3;
}
World& torus() {
  if (!torus3) torus3 = std::make_unique<World>("flat_torus.complex", 3);
  return *torus3;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome fixture_integrity() {
  auto spec = load_complex_spec(fixture("v_bowtie.complex"));
  int t = 0, r = 0, b = 0;
  for (const auto& f : spec.faces) {
    t += f.kind == FaceKind::Triangle;
    r += f.kind == FaceKind::Rhombus;
    b += f.kind == FaceKind::Bowtie;
  }
  std::ostringstream os;
  os << spec.faces.size() << " faces: " << t << " triangles, " << r << " rhombi, " << b << " bow ties";
  return {spec.faces.size() == 13 && t == 4 && r == 3 && b == 6, os.str()};
}

Outcome cat0_links() {
  auto links = check_ball_links(*bowtie().ball);
  int interior = 0, bad = 0;
  for (const auto& l : links) {
    if (!l.interior) continue;
    ++interior;
    bad += !l.girth.passes();
  }
  std::ostringstream os;
  os << interior << " interior links, " << bad << " with a cycle shorter than 2pi";
  return {interior > 0 && bad == 0, os.str()};
}

Outcome fano_links() {
  auto links = check_ball_links(*bowtie().ball);
  int required = 0, fano = 0;
  for (const auto& l : links) {
    if (!l.interior || !l.fano_required) continue;
    ++required;
    fano += l.fano;
  }
  std::ostringstream os;
  os << fano << "/" << required << " required links are Fano incidence graphs";
  return {required > 0 && fano == required, os.str()};
}

Outcome spectral_facts() {
  auto g = fano_incidence_graph();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(14, 14);
  for (const auto& e : g.edges) a(e.u, e.v) = a(e.v, e.u) = 1;
  Eigen::MatrixXi ai = a.cast<int>();
  Eigen::MatrixXi id = Eigen::MatrixXi::Identity(14, 14);
  bool charpoly = ((ai * ai - 9 * id) * (ai * ai - 2 * id)).cwiseAbs().maxCoeff() == 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd::Identity(14, 14) - a / 3.0);
  const double want = 1 - std::sqrt(2.0) / 3;
  auto r = spectrum(g);
  bool ok = charpoly && std::abs(es.eigenvalues()(1) - want) < 1e-12 && std::abs(r.lambda_1 - want) < 1e-9 &&
            r.lambda_1 > 0.5 && r.above_half && r.ramanujan;
  char buf[128];
  std::snprintf(buf, sizeof buf, "lambda_1 = %.12f (want %.12f), ramanujan %s", r.lambda_1, want,
                r.ramanujan ? "true" : "false");
  return {ok, buf};
}

Outcome wall_lemmas() {
  auto& w = bowtie();
  w.need_walls();
  std::map<WallType, int> complete;
  int bad = 0;
  for (size_t k = 0; k < w.walls.size(); ++k) {
    if (!w.walls[k].interiorly_complete) continue;
    ++complete[w.walls[k].type];
    bad += !wall_is_simply_connected(w.walls[k]) || w.parts[k].components != 2;
  }
  std::ostringstream os;
  int total = 0;
  for (auto [t, n] : complete) total += n;
  os << total << " complete walls over " << complete.size() << " types, " << bad << " failing";
  return {complete.size() == 5 && bad == 0, os.str()};
}

Outcome finiteness_bound() {
  auto& w = bowtie();
  w.need_walls();
  auto through = walls_through_cells(*w.ball, w.walls);
  int worst = 0;
  std::size_t cells = 0;
  for (const auto& dim : through) {
    cells += dim.size();
    for (int c : dim) worst = std::max(worst, c);
  }
  std::ostringstream os;
  os << "max " << worst << " walls through a cell over " << cells << " cells";
  return {worst <= 5, os.str()};
}

Outcome flat_plane_lemma() {
  auto& w = bowtie();
  w.need_walls();
  int lines = 0, violations = 0;
  for (const auto& p : w.patches)
    for (const auto& wall : w.walls) {
      if (wall.type == WallType::D || wall.type == WallType::Transverse) continue;
      auto r = classify_plane_intersection(*w.ball, wall, p);
      lines += r.kind == PlaneIntersection::StraightLine;
      violations += r.kind == PlaneIntersection::Violation;
    }
  auto samples = flat_pair_samples(*w.ball, w.walls, w.parts, w.patches, 2000);
  int below = 0;
  for (const auto& s : samples) below += s.crossing < s.floor_distance;
  std::ostringstream os;
  os << w.patches.size() << " patches, " << lines << " straight lines, " << violations << " violations; "
     << samples.size() << " pairs, " << below << " below the chart distance";
  return {violations == 0 && samples.size() >= 100 && below == 0, os.str()};
}

Outcome cubulation_dimension() {
  auto& w = bowtie();
  w.need_walls();
  auto g = crossing_graph(*w.ball, w.walls, w.parts);
  auto clique = max_crossing_family(g);
  auto cubes = dual_cube_complex(*w.ball, w.walls, w.parts);
  std::set<WallType> types;
  for (int k : clique.witness) types.insert(w.walls[k].type);
  std::set<WallType> want = {WallType::A, WallType::B, WallType::C, WallType::Transverse};
  std::ostringstream os;
  os << "max crossing family " << clique.size << ", cube dimension " << cubes.max_dim << ", witness types {";
  for (auto t : types) os << (t == *types.begin() ? "" : ",") << to_string(t);
  os << "}";
  return {clique.size == 4 && cubes.max_dim == 4 && types == want, os.str()};
}

Outcome oracle_fixture() {
  auto& w = torus();
  w.need_walls();
  const int r = w.ball->radius;
  bool counts = w.ball->vertex_count() == 1 + 3 * r * (r + 1) && w.ball->edge_count() == 9 * r * r + 3 * r &&
                w.ball->face_count() == 6 * r * r;
  bool two = true;
  for (const auto& p : w.parts) two = two && p.components == 2;
  oracle::LineFamilies fam(*w.ball, w.patches[0], w.walls);
  int mismatches = 0;
  for (int x = 0; x < w.ball->vertex_count(); ++x)
    for (int y = x + 1; y < w.ball->vertex_count(); ++y)
      mismatches += crossing_number(w.walls, w.parts, make_query(*w.ball, x, y, w.patches)) != fam.crossing(x, y);
  // two families: p lines of the first, q of the second
  WallType first = fam.dir.begin()->first;
  std::vector<Wall> grid;
  std::vector<Partition> parts;
  int p = 0, q = 0;
  for (size_t k = 0; k < w.walls.size(); ++k) {
    double t = std::abs(fam.wall_offset(w.walls[k]));
    bool is_first = w.walls[k].type == first;
    if (t > (is_first ? 0.5 : 1.5) + 1e-9) continue;
    (is_first ? p : q) += 1;
    grid.push_back(w.walls[k]);
    parts.push_back(w.parts[k]);
  }
  auto cubes = dual_cube_complex(*w.ball, grid, parts);
  bool grid_ok = cubes.cubes[0] == (p + 1) * (q + 1);
  std::ostringstream os;
  os << "cell counts " << (counts ? "match" : "differ") << ", " << mismatches << " crossing mismatches, grid "
     << p << "x" << q << " gives " << cubes.cubes[0] << " vertices";
  return {counts && two && mismatches == 0 && grid_ok, os.str()};
}

Outcome properness_trend() {
  std::ostringstream os;
  bool ok = true;
  for (World* w : {&bowtie(), &torus()}) {
    w->need_walls();
    auto prof = properness_profile(*w->ball, w->walls, w->parts, w->ball->radius);
    os << (w == bowtie3.get() ? "v_bowtie" : "flat_torus") << " [";
    for (int n = 1; n <= w->ball->radius; ++n) {
      os << (n > 1 ? "," : "") << prof.min_crossing[n];
      ok = ok && prof.pairs[n] > 0;
    }
    os << "] ";
    ok = ok && prof.inversions.empty();
  }
  return {ok, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit;  // seconds
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria = {
      {"fixture integrity", 1, fixture_integrity},
      {"CAT(0) links", 60, cat0_links},
      {"Fano links", 60, fano_links},
      {"spectral facts", 1, spectral_facts},
      {"wall lemmas", 300, wall_lemmas},
      {"finiteness bound", 60, finiteness_bound},
      {"flat-plane lemma", 300, flat_plane_lemma},
      {"cubulation dimension", 300, cubulation_dimension},
      {"oracle fixture", 30, oracle_fixture},
      {"properness trend", 300, properness_trend},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = o.pass && secs <= criteria[i].limit;
    failed += !pass;
    std::printf("%s %2zu %-22s %7.2fs (limit %gs)  %s\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].name, secs,
                criteria[i].limit, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
