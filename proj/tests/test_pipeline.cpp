#include "oracles.hpp"

#include "wallspace/pipeline.hpp"
#include "wallspace/svg.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace wallspace;
using oracle::fixture;
namespace fs = std::filesystem;

namespace {

PipelineConfig flat_config(int r = 2) {
  PipelineConfig c;
  c.spec_path = fixture("flat_torus.complex");
  c.radius = r;
  c.checks = known_checks();
  return c;
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("walls-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("FNV-1a 64 reference vectors") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a64("foobar")) == "85944171f73967e8");
}

TEST_CASE("config validation") {
  auto c = flat_config();
  CHECK_NOTHROW(validate_config(c));
  c.radius = -1;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c = flat_config();
  c.checks = {"walls", "nonsense"};
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c = flat_config();
  c.spec_path = "/nonexistent/file.complex";
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  CHECK(parse_base("v3") == 3);
  CHECK(parse_base("4") == 4);
  CHECK_THROWS_AS(parse_base("w1"), ConfigError);
}

TEST_CASE("JSON config fields override defaults and leave the rest alone") {
  auto c = config_from_json({{"radius", 4}, {"checks", {"links"}}, {"serial", true}}, flat_config());
  CHECK(c.radius == 4);
  CHECK(c.checks == std::vector<std::string>{"links"});
  CHECK(c.exec == Exec::Serial);
  CHECK(c.spec_path == fixture("flat_torus.complex"));
  CHECK(c.base == "v0");
}

TEST_CASE("flat torus pipeline passes and the report body is deterministic") {
  auto dir = scratch_dir("determinism");
  auto c = flat_config();
  c.report_path = (dir / "a.json").string();
  auto r1 = run_pipeline(c);
  c.report_path = (dir / "b.json").string();
  auto r2 = run_pipeline(c);
  CHECK(r1.pass);
  CHECK(r1.body["pass"].get<bool>());
  for (const auto& name : known_checks()) CHECK(r1.body["checks"][name]["pass"].get<bool>());
  CHECK(r1.body.dump() == r2.body.dump());
  CHECK(r1.body_hash() == r2.body_hash());
  CHECK(r1.body_hash() == hex64(fnv1a64(r1.body.dump())));
  auto a = nlohmann::json::parse(slurp(dir / "a.json"));
  auto b = nlohmann::json::parse(slurp(dir / "b.json"));
  CHECK(a["body"] == b["body"]);
  CHECK(a["body_fnv1a64"] == r1.body_hash());
  CHECK(a.contains("timings"));
  CHECK_FALSE(fs::exists(dir / "a.json.tmp"));
}

TEST_CASE("a build error fails every requested check") {
  auto c = flat_config(3);
  c.cell_cap = 10;
  c.checks = {"cat0", "walls"};
  auto r = run_pipeline(c);
  CHECK_FALSE(r.pass);
  CHECK(r.body["ball"].contains("error"));
  CHECK_FALSE(r.body["checks"]["cat0"]["pass"].get<bool>());
  CHECK_FALSE(r.body["checks"]["walls"]["pass"].get<bool>());
}

TEST_CASE("build reports ball statistics") {
  auto r = run_build(flat_config(2));
  CHECK(r.pass);
  CHECK(r.body["ball"]["vertices"].get<int>() == 19);
  CHECK(r.body["ball"]["betti_1"].get<int>() == 0);
}

TEST_CASE("render writes well-formed SVG figures") {
  auto dir = scratch_dir("render");
  auto c = flat_config(2);
  c.svg_dir = dir.string();
  auto files = run_render(c);
  REQUIRE_FALSE(files.empty());
  for (const auto& f : files) {
    auto text = slurp(dir / f);
    CHECK(text.rfind("<?xml", 0) == 0);
    CHECK(text.find("<svg") != std::string::npos);
    CHECK(text.find("</svg>") != std::string::npos);
    CHECK(text.find("<metadata>") != std::string::npos);
  }
  c.svg_dir.clear();
  CHECK_THROWS_AS(run_render(c), ConfigError);
}

TEST_CASE("segments joined into polylines") {
  std::vector<std::pair<Vec2, Vec2>> segs = {{{1, 0}, {2, 0}}, {{0, 0}, {1, 0}}, {{5, 5}, {6, 5}}};
  auto lines = join_segments(segs);
  REQUIRE(lines.size() == 2);
  size_t longest = std::max(lines[0].size(), lines[1].size());
  CHECK(longest == 3);
}

TEST_CASE("a flat patch development draws each wall as one polyline") {
  auto spec = load_complex_spec(fixture("flat_torus.complex"));
  auto b = build_ball(spec, 2, 0);
  auto walls = extract_walls(b, spec);
  auto patches = maximal_flat_patches(b, spec);
  auto dev = develop_patch(b, patches[0], walls);
  CHECK(dev.faces.size() == static_cast<size_t>(b.face_count()));
  CHECK(dev.walls.size() == walls.size());
  CHECK(dev.refraction.empty());
  CHECK_FALSE(dev.overlap);
  auto svg = render_svg(dev);
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 0);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("an empty development is a valid empty figure") {
  Development dev;
  dev.title = "empty";
  auto svg = render_svg(dev);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polygon") == std::string::npos);
}

TEST_CASE("a v_bowtie wall strip marks its refraction points") {
  auto spec = load_complex_spec(fixture("v_bowtie.complex"));
  auto b = build_ball(spec, 2, 0);
  auto walls = extract_walls(b, spec);
  bool found = false;
  for (const auto& w : walls) {
    if (!w.interiorly_complete || w.type == WallType::D || w.type == WallType::Transverse) continue;
    auto pts = refraction_points(b, w);
    if (pts.empty()) continue;
    auto dev = develop_wall_strip(b, w);
    CHECK(dev.faces.size() == w.carrier.size());
    CHECK(dev.refraction.size() == pts.size());
    CHECK(render_svg(dev).find("refraction") != std::string::npos);
    found = true;
    break;
  }
  CHECK(found);
}
