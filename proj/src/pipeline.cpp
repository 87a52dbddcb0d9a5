#include "wallspace/pipeline.hpp"

#include "wallspace/ball.hpp"
#include "wallspace/complex.hpp"
#include "wallspace/cubulator.hpp"
#include "wallspace/link.hpp"
#include "wallspace/svg.hpp"
#include "wallspace/walls.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace wallspace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {"cat0",       "links",      "spectra", "walls",
                                                 "separation", "properness", "cubulate"};
  return names;
}

int parse_base(const std::string& base) {
  std::string digits = base;
  if (!digits.empty() && (digits[0] == 'v' || digits[0] == 'V')) digits = digits.substr(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw ConfigError("base vertex must look like v0 or 0, got '" + base + "'");
  return std::stoi(digits);
}

namespace {

void ensure_parent_writable(const std::string& path, const char* what) {
  fs::path parent = fs::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) fs::create_directories(parent, ec);
  if (ec) throw ConfigError(std::string("cannot create directory for ") + what + ": " + parent.string());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

void validate_config(const PipelineConfig& config) {
  if (config.radius < 0) throw ConfigError("radius must be >= 0");
  if (config.checks.empty()) throw ConfigError("no checks requested");
  for (const auto& c : config.checks)
    if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
      throw ConfigError("unknown check '" + c + "'");
  if (config.cell_cap == 0) throw ConfigError("cell cap must be positive");
  parse_base(config.base);
  if (config.spec_path.empty()) throw ConfigError("no spec given");
  if (!std::ifstream(config.spec_path)) throw ConfigError("cannot read spec " + config.spec_path);
  if (!config.report_path.empty()) {
    if (fs::is_directory(config.report_path)) throw ConfigError("report path is a directory");
    ensure_parent_writable(config.report_path, "report");
  }
  if (!config.svg_dir.empty()) {
    std::error_code ec;
    fs::create_directories(config.svg_dir, ec);
    if (ec || !fs::is_directory(config.svg_dir)) throw ConfigError("cannot create svg directory " + config.svg_dir);
  }
}

PipelineConfig config_from_json(const json& j, PipelineConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    if (j.contains("spec")) c.spec_path = j.at("spec").get<std::string>();
    if (j.contains("radius")) c.radius = j.at("radius").get<int>();
    if (j.contains("base")) {
      const auto& b = j.at("base");
      c.base = b.is_number_integer() ? std::to_string(b.get<int>()) : b.get<std::string>();
    }
    if (j.contains("checks")) c.checks = j.at("checks").get<std::vector<std::string>>();
    if (j.contains("report")) c.report_path = j.at("report").get<std::string>();
    if (j.contains("svg")) c.svg_dir = j.at("svg").get<std::string>();
    if (j.contains("cap")) c.cell_cap = j.at("cap").get<std::size_t>();
    if (j.contains("state_cap")) c.state_cap = j.at("state_cap").get<std::size_t>();
    if (j.contains("flat_samples")) c.flat_samples = j.at("flat_samples").get<std::size_t>();
    if (j.contains("svg_limit")) c.svg_limit = j.at("svg_limit").get<int>();
    if (j.contains("serial")) c.exec = j.at("serial").get<bool>() ? Exec::Serial : Exec::Parallel;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[i] = digits[h & 15];
  return s;
}

std::string Report::body_hash() const { return hex64(fnv1a64(body.dump())); }

json Report::to_json() const {
  return {{"body", body}, {"body_fnv1a64", body_hash()}, {"timings", timings}};
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

void write_atomically(const std::string& path, const std::string& content) {
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw std::runtime_error("cannot move report into place: " + ec.message());
}

namespace {

class Stopwatch {
 public:
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

/// Shared state built on demand, in dependency order.
struct Context {
  const PipelineConfig& config;
  ComplexSpec spec;
  std::string spec_text;
  std::optional<Ball> ball;
  std::string build_error;
  std::optional<std::vector<VertexLinkCheck>> link_checks;
  std::optional<std::vector<Wall>> walls;
  std::optional<std::vector<Partition>> parts;
  std::optional<std::vector<FlatPatch>> patches;
  json timings = json::object();
  Stopwatch watch;

  explicit Context(const PipelineConfig& c) : config(c) {
    spec_text = read_file(c.spec_path);
    spec = parse_complex_spec(spec_text);
    timings["parse"] = watch.lap();
  }

  bool fano_family() const {
    return spec.metadata.is_object() && spec.metadata.value("family", std::string()) == "bowtie";
  }

  bool build() {
    if (ball || !build_error.empty()) return ball.has_value();
    try {
      ball = build_ball(spec, config.radius, parse_base(config.base), BuildOptions{config.cell_cap});
    } catch (const BuildError& e) {
      build_error = e.what();
    }
    timings["ball"] = watch.lap();
    return ball.has_value();
  }

  const std::vector<VertexLinkCheck>& links() {
    if (!link_checks) {
      link_checks = check_ball_links(*ball, config.exec);
      timings["links"] = watch.lap();
    }
    return *link_checks;
  }

  const std::vector<Wall>& wall_list() {
    if (!walls) {
      walls = extract_walls(*ball, spec);
      timings["extract_walls"] = watch.lap();
      parts = partition_walls(*ball, *walls, config.exec);
      timings["partition_walls"] = watch.lap();
    }
    return *walls;
  }

  const std::vector<Partition>& partitions() {
    wall_list();
    return *parts;
  }

  const std::vector<FlatPatch>& flat_patches() {
    if (!patches) {
      patches = maximal_flat_patches(*ball, spec);
      timings["flat_patches"] = watch.lap();
    }
    return *patches;
  }
};

json ball_summary(const Ball& b) {
  int interior = 0;
  for (const auto& v : b.vertices) interior += v.interior;
  return {{"vertices", b.vertex_count()}, {"edges", b.edge_count()},       {"faces", b.face_count()},
          {"radius", b.radius},           {"interior_vertices", interior}, {"base_quotient_vertex", b.base_q}};
}

json corner_cells(const LinkGraph& link, const std::vector<int>& edges) {
  json out = json::array();
  for (int k : edges) {
    int handle = link.edges[k].corner;
    out.push_back({{"face", handle / kCornerStride}, {"corner", handle % kCornerStride}});
  }
  return out;
}

struct CheckOutcome {
  bool pass = true;
  json counts = json::object();
  json witness;
};

CheckOutcome check_cat0(Context& ctx) {
  CheckOutcome out;
  int interior = 0, failures = 0;
  std::optional<Angle> min_girth;
  for (const auto& c : ctx.links()) {
    if (!c.interior) continue;
    ++interior;
    if (!c.girth.acyclic && (!min_girth || c.girth.girth < *min_girth)) min_girth = c.girth.girth;
    if (c.girth.passes()) continue;
    ++failures;
    if (out.witness.is_null()) {
      auto link = link_at(*ctx.ball, c.vertex);
      out.witness = {{"vertex", c.vertex},
                     {"cycle_length_pi", to_string(c.girth.girth.coef)},
                     {"cycle_corners", corner_cells(link, c.girth.cycle_edges)}};
    }
  }
  out.pass = failures == 0 && interior > 0;
  out.counts = {{"interior_vertices", interior},
                {"failures", failures},
                {"min_cycle_length_pi", min_girth ? to_string(min_girth->coef) : std::string("inf")}};
  if (interior == 0 && out.witness.is_null()) out.witness = {{"reason", "no interior vertex"}};
  return out;
}

CheckOutcome check_links(Context& ctx) {
  CheckOutcome out;
  const bool gate = ctx.fano_family();
  int interior = 0, mismatched = 0, required = 0, fano = 0;
  for (const auto& c : ctx.links()) {
    if (!c.interior) continue;
    ++interior;
    bool bad = !c.matches_quotient;
    mismatched += !c.matches_quotient;
    if (gate && c.fano_required) {
      ++required;
      fano += c.fano;
      bad = bad || !c.fano;
    }
    if (bad && out.witness.is_null())
      out.witness = {{"vertex", c.vertex},
                     {"quotient_vertex", ctx.ball->vertices[c.vertex].q},
                     {"matches_quotient", c.matches_quotient},
                     {"fano", c.fano}};
  }
  json quotient = json::array();
  if (gate) {
    auto links = base_links(ctx.spec);
    for (const auto& l : links) {
      if (!requires_fano(ctx.spec, l.vertex)) continue;
      bool ok = is_fano_incidence(l);
      quotient.push_back({{"vertex", l.vertex}, {"fano", ok}});
      if (!ok && out.witness.is_null()) out.witness = {{"quotient_vertex", l.vertex}, {"fano", false}};
    }
  }
  out.pass = out.witness.is_null() && interior > 0;
  out.counts = {{"interior_vertices", interior},
                {"quotient_mismatches", mismatched},
                {"fano_required", required},
                {"fano", fano},
                {"fano_checked", gate},
                {"quotient_fano", quotient}};
  if (interior == 0 && out.witness.is_null()) out.witness = {{"reason", "no interior vertex"}};
  return out;
}

CheckOutcome check_spectra(Context& ctx) {
  CheckOutcome out;
  const bool gate = ctx.fano_family();
  json per = json::array();
  for (const auto& l : base_links(ctx.spec)) {
    auto r = spectrum(l);
    bool required = gate && requires_fano(ctx.spec, l.vertex);
    per.push_back({{"vertex", l.vertex}, {"fano_required", required}, {"spectrum", spectral_json(r)}});
    if (required && !(r.above_half && r.ramanujan) && out.witness.is_null())
      out.witness = {{"quotient_vertex", l.vertex}, {"above_half", r.above_half}, {"ramanujan", r.ramanujan}};
  }
  out.pass = out.witness.is_null();
  out.counts = {{"links", per}};
  return out;
}

CheckOutcome check_walls(Context& ctx) {
  CheckOutcome out;
  const auto& walls = ctx.wall_list();
  const auto& parts = ctx.partitions();
  std::map<std::string, std::array<int, 4>> per;  // total, complete, not simply connected, not two components
  std::set<WallType> footprint_types;
  for (const auto& fp : ctx.spec.footprints) footprint_types.insert(fp.type);
  for (auto t : footprint_types) per[to_string(t)];
  for (size_t k = 0; k < walls.size(); ++k) {
    auto& s = per[to_string(walls[k].type)];
    ++s[0];
    if (!walls[k].interiorly_complete) continue;
    ++s[1];
    auto h = wall_homology(walls[k]);
    bool sc = h.betti_1 == 0 && h.torsion.empty();
    bool two = parts[k].components == 2;
    s[2] += !sc;
    s[3] += !two;
    if ((!sc || !two) && out.witness.is_null()) {
      std::vector<int> faces(walls[k].carrier.begin(),
                             walls[k].carrier.begin() + std::min<size_t>(walls[k].carrier.size(), 16));
      out.witness = {{"wall", k},
                     {"type", to_string(walls[k].type)},
                     {"betti_1", h.betti_1},
                     {"components", parts[k].components},
                     {"carrier_faces", faces}};
    }
  }
  json by_type = json::object();
  for (const auto& [t, s] : per) {
    by_type[t] = {{"walls", s[0]}, {"complete", s[1]}, {"not_simply_connected", s[2]}, {"not_two_sided", s[3]}};
    if (s[1] == 0 && out.witness.is_null()) out.witness = {{"type", t}, {"reason", "no interiorly complete wall"}};
  }
  auto through = walls_through_cells(*ctx.ball, walls);
  json max_through = json::array();
  for (int d = 0; d < 3; ++d) {
    int best = 0, cell = -1;
    for (int c = 0; c < static_cast<int>(through[d].size()); ++c)
      if (through[d][c] > best) {
        best = through[d][c];
        cell = c;
      }
    max_through.push_back(best);
    if (best > 5 && out.witness.is_null()) out.witness = {{"dim", d}, {"cell", cell}, {"walls_through", best}};
  }
  out.pass = out.witness.is_null();
  out.counts = {{"by_type", by_type}, {"max_walls_through_cell", max_through}, {"bound", 5}};
  return out;
}

CheckOutcome check_separation(Context& ctx) {
  CheckOutcome out;
  const auto& walls = ctx.wall_list();
  const auto& patches = ctx.flat_patches();
  int lines = 0, violations = 0;
  for (const auto& p : patches)
    for (const auto& w : walls) {
      if (w.type == WallType::D || w.type == WallType::Transverse) continue;
      auto r = classify_plane_intersection(*ctx.ball, w, p);
      lines += r.kind == PlaneIntersection::StraightLine;
      if (r.kind != PlaneIntersection::Violation) continue;
      ++violations;
      if (out.witness.is_null())
        out.witness = {{"patch_seed", p.seed}, {"wall", w.id}, {"type", to_string(w.type)},
                       {"face", r.witness_chord >= 0 ? w.chords[r.witness_chord].face : -1}};
    }
  auto samples = flat_pair_samples(*ctx.ball, walls, ctx.partitions(), patches, ctx.config.flat_samples);
  int below = 0, max_floor = 0;
  std::optional<int> min_slack;
  for (const auto& s : samples) {
    max_floor = std::max(max_floor, s.floor_distance);
    int slack = s.crossing - s.floor_distance;
    if (!min_slack || slack < *min_slack) min_slack = slack;
    if (slack >= 0) continue;
    ++below;
    if (out.witness.is_null())
      out.witness = {{"x", s.x}, {"y", s.y}, {"patch_seed", patches[s.patch].seed},
                     {"crossing_number", s.crossing}, {"floor_distance", s.floor_distance}};
  }
  out.pass = out.witness.is_null();
  out.counts = {{"patches", patches.size()},      {"straight_lines", lines},
                {"violations", violations},       {"sampled_pairs", samples.size()},
                {"below_bound", below},           {"max_floor_distance", max_floor},
                {"min_slack", min_slack ? json(*min_slack) : json(nullptr)}};
  return out;
}

CheckOutcome check_properness(Context& ctx) {
  CheckOutcome out;
  const auto& walls = ctx.wall_list();
  const auto& parts = ctx.partitions();
  auto prof = properness_profile(*ctx.ball, walls, parts, ctx.config.radius, ctx.config.exec);
  json rows = json::array();
  for (int n = 1; n <= ctx.config.radius; ++n) {
    rows.push_back({{"distance", n}, {"pairs", prof.pairs[n]}, {"min_crossing", prof.min_crossing[n]},
                    {"witness", {prof.witness[n].first, prof.witness[n].second}}});
    if (prof.pairs[n] == 0 && out.witness.is_null()) out.witness = {{"distance", n}, {"reason", "no interior pair"}};
  }
  if (!prof.inversions.empty() && out.witness.is_null()) {
    int n = prof.inversions.front();
    out.witness = {{"distance", n},
                   {"x", prof.witness[n].first},
                   {"y", prof.witness[n].second},
                   {"min_crossing", prof.min_crossing[n]},
                   {"previous_min_crossing", prof.min_crossing[n - 1]}};
  }
  std::vector<int> interior;
  for (int v = 0; v < ctx.ball->vertex_count(); ++v)
    if (ctx.ball->vertices[v].interior) interior.push_back(v);
  int d_complete = 0, d_separating = 0;
  for (size_t k = 0; k < walls.size(); ++k) {
    if (walls[k].type != WallType::D || !walls[k].interiorly_complete) continue;
    ++d_complete;
    std::set<int> labels;
    for (int v : interior)
      if (parts[k].vertex_label[v] >= 0) labels.insert(parts[k].vertex_label[v]);
    d_separating += labels.size() >= 2;
  }
  out.pass = out.witness.is_null();
  out.counts = {{"profile", rows},
                {"inversions", prof.inversions.size()},
                {"d_walls_complete", d_complete},
                {"d_walls_separating_interior", d_separating}};
  return out;
}

int expected_cube_dimension(const ComplexSpec& spec) {
  if (spec.metadata.is_object() && spec.metadata.contains("cube_dimension"))
    return spec.metadata.at("cube_dimension").get<int>();
  std::set<WallType> types;
  for (const auto& fp : spec.footprints) types.insert(fp.type);
  return static_cast<int>(types.size());
}

CheckOutcome check_cubulate(Context& ctx) {
  CheckOutcome out;
  const auto& walls = ctx.wall_list();
  CubulationOptions opt;
  opt.state_cap = ctx.config.state_cap;
  opt.exec = ctx.config.exec;
  CubeReport rep;
  try {
    rep = dual_cube_complex(*ctx.ball, walls, ctx.partitions(), opt);
  } catch (const CubulationError& e) {
    out.pass = false;
    out.witness = {{"error", e.what()}};
    return out;
  }
  std::int64_t euler = 0;
  for (size_t d = 0; d < rep.cubes.size(); ++d) euler += (d % 2 ? -1 : 1) * rep.cubes[d];
  const int expected = expected_cube_dimension(ctx.spec);
  std::set<std::string> witness_types;
  for (int w : rep.witness) witness_types.insert(to_string(walls[w].type));
  std::optional<std::set<std::string>> expected_types;
  if (ctx.spec.metadata.is_object() && ctx.spec.metadata.contains("cube_witness_types"))
    expected_types = ctx.spec.metadata.at("cube_witness_types").get<std::set<std::string>>();

  json summary = cube_report_json(rep, walls);
  out.counts = {{"cubes", rep.cubes},
                {"max_dim", rep.max_dim},
                {"max_crossing_family", rep.max_crossing_family},
                {"euler_characteristic", euler},
                {"expected_dimension", expected}};
  if (expected_types) out.counts["expected_witness_types"] = *expected_types;
  std::string reason;
  if (rep.max_dim != rep.max_crossing_family) reason = "cube dimension differs from the largest crossing family";
  else if (euler != 1) reason = "Euler characteristic of the cube complex is not 1";
  else if (rep.max_dim != expected) reason = "cube dimension differs from the expected dimension";
  else if (expected_types && witness_types != *expected_types) reason = "witness wall types differ from the expected types";
  out.pass = reason.empty();
  if (!out.pass)
    out.witness = {{"reason", reason}, {"walls", summary["witness"]}, {"types", summary["witness_types"]},
                   {"cube", summary["witness_cube"]}};
  else
    out.counts["witness"] = {{"walls", summary["witness"]}, {"types", summary["witness_types"]}};
  return out;
}

using CheckFn = CheckOutcome (*)(Context&);

CheckFn check_function(const std::string& name) {
  static const std::map<std::string, CheckFn> table = {
      {"cat0", check_cat0},          {"links", check_links},           {"spectra", check_spectra},
      {"walls", check_walls},        {"separation", check_separation}, {"properness", check_properness},
      {"cubulate", check_cubulate}};
  return table.at(name);
}

std::vector<std::string> ordered_checks(const std::vector<std::string>& requested) {
  std::vector<std::string> out;
  for (const auto& c : known_checks())
    if (std::find(requested.begin(), requested.end(), c) != requested.end()) out.push_back(c);
  return out;
}

json input_section(const Context& ctx, const std::vector<std::string>& checks) {
  return {{"spec", fs::path(ctx.config.spec_path).filename().string()},
          {"spec_fnv1a64", hex64(fnv1a64(ctx.spec_text))},
          {"complex", ctx.spec.name},
          {"radius", ctx.config.radius},
          {"base", parse_base(ctx.config.base)},
          {"checks", checks}};
}

json toolkit_section() { return {{"name", "wallspace"}, {"version", kToolkitVersion}}; }

std::vector<std::string> render_figures(Context& ctx) {
  std::vector<std::string> files;
  const auto& dir = ctx.config.svg_dir;
  auto emit = [&](const std::string& name, const Development& dev) {
    write_atomically((fs::path(dir) / name).string(), render_svg(dev));
    files.push_back(name);
  };
  const auto& walls = ctx.wall_list();
  const auto& patches = ctx.flat_patches();
  for (int k = 0; k < std::min<int>(ctx.config.svg_limit, static_cast<int>(patches.size())); ++k)
    emit("separation-" + std::to_string(patches[k].seed) + ".svg", develop_patch(*ctx.ball, patches[k], walls));
  for (auto t : kWallTypes) {
    int pick = -1;
    for (const auto& w : walls) {
      if (w.type != t || !w.interiorly_complete) continue;
      if (pick < 0) pick = w.id;
      if (!refraction_points(*ctx.ball, w).empty()) {
        pick = w.id;
        break;
      }
    }
    if (pick >= 0) emit("walls-" + std::to_string(pick) + ".svg", develop_wall_strip(*ctx.ball, walls[pick]));
  }
  ctx.timings["render"] = ctx.watch.lap();
  return files;
}

}  // namespace

Report run_build(const PipelineConfig& config) {
  PipelineConfig c = config;
  if (c.checks.empty()) c.checks = {"cat0"};
  validate_config(c);
  Context ctx(config);
  Report rep;
  rep.body["toolkit"] = toolkit_section();
  rep.body["input"] = input_section(ctx, {});
  auto val = validate_geometry(ctx.spec);
  json geometry = {{"ok", val.ok()},
                   {"quotient_vertices", val.vertex_count},
                   {"quotient_edges", val.edge_count},
                   {"quotient_faces", val.face_count}};
  rep.body["geometry"] = geometry;
  if (!ctx.build()) {
    rep.body["ball"] = {{"error", ctx.build_error}};
    rep.pass = false;
  } else {
    json b = ball_summary(*ctx.ball);
    auto h = homology_h1(*ctx.ball);
    b["betti_1"] = h.betti_1;
    b["torsion"] = h.torsion;
    rep.body["ball"] = b;
    rep.pass = val.ok() && h.betti_1 == 0 && h.torsion.empty();
    ctx.timings["homology"] = ctx.watch.lap();
  }
  rep.body["pass"] = rep.pass;
  rep.timings = ctx.timings;
  if (!config.report_path.empty()) write_atomically(config.report_path, rep.dump());
  return rep;
}

Report run_pipeline(const PipelineConfig& config) {
  validate_config(config);
  Context ctx(config);
  auto checks = ordered_checks(config.checks);
  Report rep;
  rep.body["toolkit"] = toolkit_section();
  rep.body["input"] = input_section(ctx, checks);
  json results = json::object();
  bool all = true;
  if (!ctx.build()) {
    rep.body["ball"] = {{"error", ctx.build_error}};
    for (const auto& c : checks) results[c] = {{"pass", false}, {"witness", {{"error", ctx.build_error}}}};
    all = false;
  } else {
    rep.body["ball"] = ball_summary(*ctx.ball);
    for (const auto& c : checks) {
      Stopwatch sw;
      auto outcome = check_function(c)(ctx);
      ctx.watch.lap();
      json r = {{"pass", outcome.pass}, {"counts", outcome.counts}};
      if (!outcome.pass) r["witness"] = outcome.witness;
      results[c] = r;
      ctx.timings["check:" + c] = sw.lap();
      all = all && outcome.pass;
    }
    if (!config.svg_dir.empty()) rep.body["figures"] = render_figures(ctx);
  }
  rep.body["checks"] = results;
  rep.body["pass"] = all;
  rep.pass = all;
  rep.timings = ctx.timings;
  if (!config.report_path.empty()) write_atomically(config.report_path, rep.dump());
  return rep;
}

std::vector<std::string> run_render(const PipelineConfig& config) {
  PipelineConfig c = config;
  if (c.checks.empty()) c.checks = {"walls"};
  if (c.svg_dir.empty()) throw ConfigError("render needs an svg directory");
  validate_config(c);
  Context ctx(c);
  if (!ctx.build()) throw BuildError(ctx.build_error);
  return render_figures(ctx);
}

}  // namespace wallspace
