#include "wallspace/complex.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

using namespace wallspace;

namespace {

std::string fixture(const std::string& name) { return std::string(WS_FIXTURES) + "/" + name; }

const char* kMinimal = R"({
  "shapes": [{"name": "equilateral", "sides": [1, 1, 1], "corners": [[1, 3], [1, 3], [1, 3]]}],
  "edges": ["a", "b", "c"],
  "faces": [
    {"name": "T1", "shape": "equilateral", "kind": "triangle", "boundary": [["a", "+"], ["b", "+"], ["c", "+"]]},
    {"name": "T2", "shape": "equilateral", "kind": "triangle", "boundary": [["b", "+"], ["a", "+"], ["c", "+"]]}
  ]
})";

}  // namespace

TEST_CASE("v_bowtie fixture has four triangles, three rhombi and six bow ties") {
  auto spec = load_complex_spec(fixture("v_bowtie.complex"));
  std::map<FaceKind, int> kinds;
  for (const auto& f : spec.faces) ++kinds[f.kind];
  CHECK(spec.faces.size() == 13);
  CHECK(kinds[FaceKind::Triangle] == 4);
  CHECK(kinds[FaceKind::Rhombus] == 3);
  CHECK(kinds[FaceKind::Bowtie] == 6);
  std::set<WallType> types;
  for (const auto& fp : spec.footprints) types.insert(fp.type);
  CHECK(types.size() == 5);
}

TEST_CASE("edge multiplicities account for every face side and leave no free edge") {
  for (const char* name : {"v_bowtie.complex", "flat_torus.complex"}) {
    auto spec = load_complex_spec(fixture(name));
    auto q = quotient_of(spec);
    int sides = 0, glued = 0;
    for (int f = 0; f < static_cast<int>(spec.faces.size()); ++f) sides += spec.sides(f);
    for (int m : q.edge_multiplicity) {
      CHECK(m >= 2);
      glued += m;
    }
    CHECK(glued == sides);
  }
  auto torus = quotient_of(load_complex_spec(fixture("flat_torus.complex")));
  for (int m : torus.edge_multiplicity) CHECK(m == 2);
  auto bowtie = quotient_of(load_complex_spec(fixture("v_bowtie.complex")));
  CHECK(std::count(bowtie.edge_multiplicity.begin(), bowtie.edge_multiplicity.end(), 3) == 16);
}

TEST_CASE("geometry validation closes every shape") {
  auto spec = load_complex_spec(fixture("v_bowtie.complex"));
  auto rep = validate_geometry(spec);
  CHECK(rep.ok());
  CHECK(rep.face_count == 13);
  for (const auto& s : rep.shapes) {
    CHECK(s.closes);
    CHECK(s.angle_sum_exact);
    CHECK(s.residual < kClosureTolerance);
  }
  CHECK(rep.vertex_count == 3);
  CHECK(rep.edge_count == 22);
}

TEST_CASE("closure residual of a shape from its turning angles") {
  Shape square{"square", {Rational(1), Rational(1), Rational(1), Rational(1)},
               {Angle(1, 2), Angle(1, 2), Angle(1, 2), Angle(1, 2)}};
  CHECK(closure_residual(square) < 1e-12);
  Shape open{"open", {Rational(1), Rational(2), Rational(1), Rational(1)},
             {Angle(1, 2), Angle(1, 2), Angle(1, 2), Angle(1, 2)}};
  CHECK(closure_residual(open) == doctest::Approx(1.0));
}

TEST_CASE("flat torus quotient has one vertex with all six corners") {
  auto spec = parse_complex_spec(kMinimal);
  auto q = quotient_of(spec);
  CHECK(q.vertex_count == 1);
  CHECK(q.vertex_corners[0].size() == 6);
  CHECK(q.euler_characteristic(2) == 0);
}

TEST_CASE("serialization round trip") {
  auto spec = load_complex_spec(fixture("v_bowtie.complex"));
  auto again = parse_complex_spec(serialize_complex_spec(spec));
  CHECK(serialize_complex_spec(again) == serialize_complex_spec(spec));
  CHECK(again.faces.size() == spec.faces.size());
  CHECK(again.footprints.size() == spec.footprints.size());
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_complex_spec("{"), SpecError);
  CHECK_THROWS_AS(parse_complex_spec("[]"), SpecError);
  std::string bad_sum = kMinimal;
  bad_sum.replace(bad_sum.find("[[1, 3], [1, 3], [1, 3]]"), 24, "[[1, 3], [1, 3], [1, 2]]");
  CHECK_THROWS_AS(parse_complex_spec(bad_sum), SpecError);
  std::string unknown_edge = kMinimal;
  unknown_edge.replace(unknown_edge.find("[\"c\", \"+\"]]}\n  ]"), 3, "[\"z\"");
  CHECK_THROWS_AS(parse_complex_spec(unknown_edge), SpecError);
  std::string duplicate = kMinimal;
  duplicate.replace(duplicate.find("\"edges\": [\"a\", \"b\", \"c\"]"), 24, "\"edges\": [\"a\", \"a\", \"c\"]");
  CHECK_THROWS_AS(parse_complex_spec(duplicate), SpecError);
}

TEST_CASE("quotient links at the flat torus vertex form a hexagon") {
  auto spec = parse_complex_spec(kMinimal);
  auto links = base_links(spec);
  REQUIRE(links.size() == 1);
  CHECK(links[0].node_count() == 6);
  CHECK(links[0].edge_count() == 6);
  Angle total;
  for (const auto& e : links[0].edges) total = total + e.weight;
  CHECK(total == Angle(2, 1));
}

TEST_CASE("exact polygons of the v_bowtie shapes close in Q(sqrt 3)") {
  auto spec = load_complex_spec(fixture("v_bowtie.complex"));
  for (const auto& sh : spec.shapes) {
    std::vector<Point> corners;
    REQUIRE(exact_polygon(sh, corners));
    REQUIRE(corners.size() == sh.sides.size());
    for (size_t i = 0; i < corners.size(); ++i) {
      Point d = corners[(i + 1) % corners.size()] - corners[i];
      double len = std::sqrt(dot(d, d).value());
      CHECK(len == doctest::Approx(boost::rational_cast<double>(sh.sides[i])));
    }
  }
}
