#include "wallspace/complex.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace wallspace {

using nlohmann::json;

std::string to_string(FaceKind k) {
  switch (k) {
    case FaceKind::Triangle: return "triangle";
    case FaceKind::Rhombus: return "rhombus";
    case FaceKind::Bowtie: return "bowtie";
  }
  return "?";
}

std::string to_string(WallType t) {
  switch (t) {
    case WallType::A: return "a";
    case WallType::B: return "b";
    case WallType::C: return "c";
    case WallType::D: return "d";
    case WallType::Transverse: return "transverse";
  }
  return "?";
}

WallType wall_type_from_string(const std::string& s) {
  for (auto t : kWallTypes)
    if (to_string(t) == s) return t;
  throw SpecError("unknown wall type '" + s + "'");
}

int ComplexSpec::corner_count() const {
  int n = 0;
  for (const auto& f : faces) n += static_cast<int>(f.boundary.size());
  return n;
}

int ComplexSpec::corner_id(int face, int i) const {
  int n = 0;
  for (int f = 0; f < face; ++f) n += static_cast<int>(faces[f].boundary.size());
  return n + i;
}

int side_end_at_corner(const Side& s, bool at_start_corner) {
  return (at_start_corner == s.positive) ? 0 : 1;
}

int LinkGraph::index_of(int germ) const {
  auto it = std::find(nodes.begin(), nodes.end(), germ);
  return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

namespace {

Rational read_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    auto q = j[1].get<std::int64_t>();
    if (q <= 0) throw SpecError(where + ": denominator must be positive");
    return Rational(j[0].get<std::int64_t>(), q);
  }
  if (j.is_string()) {
    auto s = j.get<std::string>();
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(std::stoll(s));
      auto q = std::stoll(s.substr(slash + 1));
      if (q <= 0) throw SpecError(where + ": denominator must be positive");
      return Rational(std::stoll(s.substr(0, slash)), q);
    } catch (const std::logic_error&) {
    }
  }
  throw SpecError(where + ": expected a rational ([p,q], integer or \"p/q\")");
}

json write_rational(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return json::array({r.numerator(), r.denominator()});
}

bool read_orientation(const json& j, const std::string& where) {
  if (!j.is_string()) throw SpecError(where + ": orientation must be a string");
  auto s = j.get<std::string>();
  if (s == "+") return true;
  if (s == "-" || s == "−") return false;
  throw SpecError(where + ": orientation must be '+' or '-'");
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SpecError(where + ": missing key '" + key + "'");
  return j.at(key);
}

Anchor read_anchor(const json& j, int n, const std::string& where) {
  Anchor a;
  if (j.contains("vertex")) {
    a.is_vertex = true;
    a.index = j.at("vertex").get<int>();
    if (a.index < 0 || a.index >= n) throw SpecError(where + ": vertex anchor out of range");
    return a;
  }
  a.index = require(j, "side", where).get<int>();
  if (a.index < 0 || a.index >= n) throw SpecError(where + ": side anchor out of range");
  a.frac = read_rational(require(j, "frac", where), where);
  if (a.frac < 0 || a.frac > 1) throw SpecError(where + ": fraction outside [0,1]");
  // endpoints of a side are corners
  if (a.frac == Rational(0)) return Anchor{true, a.index, Rational(0)};
  if (a.frac == Rational(1)) return Anchor{true, (a.index + 1) % n, Rational(0)};
  return a;
}

json write_anchor(const Anchor& a) {
  if (a.is_vertex) return json{{"vertex", a.index}};
  return json{{"side", a.index}, {"frac", write_rational(a.frac)}};
}

bool is_full_side(const Segment& s, int n) {
  if (!s.from.is_vertex || !s.to.is_vertex) return false;
  int d = ((s.to.index - s.from.index) % n + n) % n;
  return d == 1 || d == n - 1;
}

// numeric polygon, corner 0 at origin, side 0 along +x
std::vector<std::array<double, 2>> numeric_polygon(const Shape& sh) {
  std::vector<std::array<double, 2>> pts;
  double x = 0, y = 0, dir = 0;
  const double pi = std::acos(-1.0);
  int n = static_cast<int>(sh.sides.size());
  for (int i = 0; i < n; ++i) {
    pts.push_back({x, y});
    double len = boost::rational_cast<double>(sh.sides[i]);
    x += len * std::cos(dir);
    y += len * std::sin(dir);
    dir += pi - sh.corners[(i + 1) % n].radians();
  }
  return pts;
}

std::array<double, 2> anchor_point(const std::vector<std::array<double, 2>>& poly, const Anchor& a) {
  int n = static_cast<int>(poly.size());
  if (a.is_vertex) return poly[a.index];
  double t = boost::rational_cast<double>(a.frac);
  const auto& p = poly[a.index];
  const auto& q = poly[(a.index + 1) % n];
  return {p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
}

bool inside_polygon(const std::vector<std::array<double, 2>>& poly, std::array<double, 2> p) {
  // points on the boundary count as inside
  int n = static_cast<int>(poly.size());
  bool in = false;
  for (int i = 0, j = n - 1; i < n; j = i++) {
    double xi = poly[i][0], yi = poly[i][1], xj = poly[j][0], yj = poly[j][1];
    double cr = (xj - xi) * (p[1] - yi) - (yj - yi) * (p[0] - xi);
    double len = std::hypot(xj - xi, yj - yi);
    bool within = (p[0] - std::min(xi, xj) > -1e-9) && (std::max(xi, xj) - p[0] > -1e-9) &&
                  (p[1] - std::min(yi, yj) > -1e-9) && (std::max(yi, yj) - p[1] > -1e-9);
    if (std::abs(cr) <= 1e-9 * len && within) return true;
    if ((yi > p[1]) != (yj > p[1]) && p[0] < (xj - xi) * (p[1] - yi) / (yj - yi) + xi) in = !in;
  }
  return in;
}

}  // namespace

double closure_residual(const Shape& shape) {
  auto pts = numeric_polygon(shape);
  int n = static_cast<int>(pts.size());
  const double pi = std::acos(-1.0);
  double dir = 0;
  double x = 0, y = 0;
  for (int i = 0; i < n; ++i) {
    double len = boost::rational_cast<double>(shape.sides[i]);
    x += len * std::cos(dir);
    y += len * std::sin(dir);
    dir += pi - shape.corners[(i + 1) % n].radians();
  }
  return std::hypot(x, y);
}

bool exact_polygon(const Shape& shape, std::vector<Point>& corners) {
  corners.clear();
  int n = static_cast<int>(shape.sides.size());
  Point p{};
  Rational dir(0);
  for (int i = 0; i < n; ++i) {
    corners.push_back(p);
    Point u;
    if (!unit_direction(dir, u)) return false;
    p = p + scale(u, Q3(shape.sides[i]));
    dir += Rational(1) - shape.corners[(i + 1) % n].coef;
  }
  return p == Point{};
}

ComplexSpec parse_complex_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw SpecError("syntax error at byte 0: top level must be an object");

  ComplexSpec spec;
  try {
    if (doc.contains("metadata")) {
      spec.metadata = doc.at("metadata");
      if (spec.metadata.contains("name")) spec.name = spec.metadata.at("name").get<std::string>();
    }

    std::map<std::string, int> shape_index;
    for (const auto& js : require(doc, "shapes", "document")) {
      Shape sh;
      sh.name = require(js, "name", "shape").get<std::string>();
      std::string where = "shape '" + sh.name + "'";
      for (const auto& s : require(js, "sides", where)) {
        sh.sides.push_back(read_rational(s, where));
        if (sh.sides.back() <= 0) throw SpecError(where + ": side lengths must be positive");
      }
      for (const auto& c : require(js, "corners", where)) sh.corners.emplace_back(read_rational(c, where));
      int n = static_cast<int>(sh.sides.size());
      if (n < 3 || static_cast<int>(sh.corners.size()) != n)
        throw SpecError(where + ": needs matching sides and corners, at least 3");
      Rational sum(0);
      for (const auto& a : sh.corners) {
        if (a.coef <= 0 || a.coef >= 2) throw SpecError(where + ": corner angle outside (0, 2pi)");
        sum += a.coef;
      }
      if (sum != Rational(n - 2))
        throw SpecError(where + ": angle-sum violation, corners sum to " + to_string(sum) +
                        "pi instead of " + std::to_string(n - 2) + "pi");
      if (shape_index.count(sh.name)) throw SpecError(where + ": duplicate shape name");
      shape_index[sh.name] = static_cast<int>(spec.shapes.size());
      spec.shapes.push_back(std::move(sh));
    }

    std::map<std::string, int> edge_index;
    for (const auto& je : require(doc, "edges", "document")) {
      std::string label = je.is_string() ? je.get<std::string>() : require(je, "label", "edge").get<std::string>();
      if (edge_index.count(label)) throw SpecError("edge label '" + label + "' is not unique");
      edge_index[label] = static_cast<int>(spec.edges.size());
      spec.edges.push_back(label);
    }

    for (const auto& jf : require(doc, "faces", "document")) {
      FaceSpec f;
      f.name = jf.value("name", "face" + std::to_string(spec.faces.size()));
      std::string where = "face '" + f.name + "'";
      auto shape_name = require(jf, "shape", where).get<std::string>();
      auto it = shape_index.find(shape_name);
      if (it == shape_index.end()) throw SpecError(where + ": unknown shape '" + shape_name + "'");
      f.shape = it->second;
      auto kind = require(jf, "kind", where).get<std::string>();
      if (kind == "triangle") f.kind = FaceKind::Triangle;
      else if (kind == "rhombus") f.kind = FaceKind::Rhombus;
      else if (kind == "bowtie") f.kind = FaceKind::Bowtie;
      else throw SpecError(where + ": unknown kind '" + kind + "'");
      for (const auto& jb : require(jf, "boundary", where)) {
        if (!jb.is_array() || jb.size() != 2) throw SpecError(where + ": boundary entries are [label, orientation]");
        auto label = jb[0].get<std::string>();
        auto eit = edge_index.find(label);
        if (eit == edge_index.end()) throw SpecError(where + ": unknown edge '" + label + "'");
        f.boundary.push_back({eit->second, read_orientation(jb[1], where)});
      }
      if (f.boundary.size() != spec.shapes[f.shape].sides.size())
        throw SpecError(where + ": boundary length differs from the number of shape sides");
      spec.faces.push_back(std::move(f));
    }

    // glued lengths
    std::vector<std::vector<Rational>> lengths(spec.edges.size());
    for (const auto& f : spec.faces)
      for (size_t i = 0; i < f.boundary.size(); ++i)
        lengths[f.boundary[i].edge].push_back(spec.shapes[f.shape].sides[i]);
    for (size_t e = 0; e < spec.edges.size(); ++e) {
      if (lengths[e].empty()) throw SpecError("edge '" + spec.edges[e] + "' appears in no face");
      for (const auto& l : lengths[e])
        if (l != lengths[e].front())
          throw SpecError("mismatched glued-edge lengths on edge '" + spec.edges[e] + "'");
    }

    std::map<std::string, int> face_index;
    for (size_t i = 0; i < spec.faces.size(); ++i) face_index[spec.faces[i].name] = static_cast<int>(i);

    if (doc.contains("walls")) {
      for (const auto& jw : doc.at("walls")) {
        WallFootprint fp;
        fp.type = wall_type_from_string(require(jw, "type", "wall").get<std::string>());
        std::string where = "wall footprint '" + to_string(fp.type) + "'";
        for (const auto& jent : require(jw, "entries", where)) {
          FootprintEntry ent;
          const auto& jface = require(jent, "face", where);
          if (jface.is_string()) {
            auto fit = face_index.find(jface.get<std::string>());
            if (fit == face_index.end()) throw SpecError(where + ": unknown face '" + jface.get<std::string>() + "'");
            ent.face = fit->second;
          } else {
            ent.face = jface.get<int>();
          }
          if (ent.face < 0 || ent.face >= static_cast<int>(spec.faces.size()))
            throw SpecError(where + ": footprint references a face absent from the spec");
          ent.whole_cell = jent.value("cell", false);
          int n = spec.sides(ent.face);
          auto poly = numeric_polygon(spec.shape_of(ent.face));
          if (jent.contains("segments")) {
            for (const auto& js : jent.at("segments")) {
              if (!js.is_array() || js.size() != 2) throw SpecError(where + ": segments are [anchor, anchor]");
              Segment s{read_anchor(js[0], n, where), read_anchor(js[1], n, where)};
              if (s.from == s.to) throw SpecError(where + ": degenerate segment");
              for (int k = 1; k < 8; ++k) {
                auto p = anchor_point(poly, s.from), q = anchor_point(poly, s.to);
                double t = k / 8.0;
                if (!inside_polygon(poly, {p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])}))
                  throw SpecError(where + ": segment leaves the face polygon");
              }
              ent.segments.push_back(s);
            }
          }
          bool edge_type = fp.type == WallType::D || fp.type == WallType::Transverse;
          if (edge_type) {
            if (ent.whole_cell) throw SpecError(where + ": edge walls cannot contain 2-cells");
            for (const auto& s : ent.segments)
              if (!is_full_side(s, n)) throw SpecError(where + ": edge-wall segments must be full boundary edges");
          }
          fp.entries.push_back(std::move(ent));
        }
        spec.footprints.push_back(std::move(fp));
      }
    }

    if (spec.metadata.is_object() && spec.metadata.value("family", "") == "bowtie") {
      for (auto t : kWallTypes) {
        bool found = false;
        for (const auto& fp : spec.footprints)
          if (fp.type == t && !fp.entries.empty()) found = true;
        if (!found) throw SpecError("bowtie-family spec lacks a footprint of type " + to_string(t));
      }
    }
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed spec: ") + e.what());
  }
  return spec;
}

ComplexSpec load_complex_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_complex_spec(ss.str());
}

std::string serialize_complex_spec(const ComplexSpec& spec) {
  json doc;
  doc["metadata"] = spec.metadata;
  doc["shapes"] = json::array();
  for (const auto& sh : spec.shapes) {
    json js{{"name", sh.name}, {"sides", json::array()}, {"corners", json::array()}};
    for (const auto& s : sh.sides) js["sides"].push_back(write_rational(s));
    for (const auto& c : sh.corners) js["corners"].push_back(json::array({c.coef.numerator(), c.coef.denominator()}));
    doc["shapes"].push_back(js);
  }
  doc["edges"] = spec.edges;
  doc["faces"] = json::array();
  for (const auto& f : spec.faces) {
    json jf{{"name", f.name}, {"shape", spec.shapes[f.shape].name}, {"kind", to_string(f.kind)}};
    jf["boundary"] = json::array();
    for (const auto& s : f.boundary) jf["boundary"].push_back(json::array({spec.edges[s.edge], s.positive ? "+" : "-"}));
    doc["faces"].push_back(jf);
  }
  doc["walls"] = json::array();
  for (const auto& fp : spec.footprints) {
    json jw{{"type", to_string(fp.type)}, {"entries", json::array()}};
    for (const auto& e : fp.entries) {
      json je{{"face", spec.faces[e.face].name}};
      if (e.whole_cell) je["cell"] = true;
      je["segments"] = json::array();
      for (const auto& s : e.segments) je["segments"].push_back(json::array({write_anchor(s.from), write_anchor(s.to)}));
      jw["entries"].push_back(je);
    }
    doc["walls"].push_back(jw);
  }
  return doc.dump(2);
}

Quotient quotient_of(const ComplexSpec& spec) {
  int ncorner = spec.corner_count();
  int nedge = static_cast<int>(spec.edges.size());
  // union-find over corners and edge ends
  std::vector<int> parent(ncorner + 2 * nedge);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

  Quotient q;
  q.edge_multiplicity.assign(nedge, 0);
  int base = 0;
  for (const auto& f : spec.faces) {
    int n = static_cast<int>(f.boundary.size());
    for (int i = 0; i < n; ++i) {
      const Side& s = f.boundary[i];
      q.edge_multiplicity[s.edge]++;
      unite(base + i, ncorner + germ_id(s.edge, side_end_at_corner(s, true)));
      unite(base + (i + 1) % n, ncorner + germ_id(s.edge, side_end_at_corner(s, false)));
    }
    base += n;
  }
  std::map<int, int> vertex_of_root;
  // number vertices in corner order for determinism
  for (int c = 0; c < ncorner; ++c) {
    int r = find(c);
    if (!vertex_of_root.count(r)) vertex_of_root[r] = static_cast<int>(vertex_of_root.size());
  }
  q.vertex_count = static_cast<int>(vertex_of_root.size());
  q.vertex_corners.assign(q.vertex_count, {});
  base = 0;
  for (const auto& f : spec.faces) {
    std::vector<int> cv;
    for (size_t i = 0; i < f.boundary.size(); ++i) {
      int v = vertex_of_root.at(find(base + static_cast<int>(i)));
      cv.push_back(v);
      q.vertex_corners[v].push_back(base + static_cast<int>(i));
    }
    q.corner_vertex.push_back(cv);
    base += static_cast<int>(f.boundary.size());
  }
  for (int e = 0; e < nedge; ++e)
    q.edge_vertex.push_back({vertex_of_root.at(find(ncorner + 2 * e)), vertex_of_root.at(find(ncorner + 2 * e + 1))});
  return q;
}

bool ValidationReport::ok() const {
  for (const auto& s : shapes)
    if (!s.closes || !s.angle_sum_exact) return false;
  for (const auto& e : edges)
    if (!e.consistent) return false;
  return true;
}

ValidationReport validate_geometry(const ComplexSpec& spec) {
  ValidationReport r;
  for (const auto& sh : spec.shapes) {
    ShapeResidual s;
    s.shape = sh.name;
    s.residual = closure_residual(sh);
    s.closes = s.residual < kClosureTolerance;
    Rational sum(0);
    for (const auto& a : sh.corners) sum += a.coef;
    s.angle_sum_exact = sum == Rational(static_cast<std::int64_t>(sh.sides.size()) - 2);
    r.shapes.push_back(s);
  }
  std::vector<EdgeLengthCheck> edges(spec.edges.size());
  for (size_t e = 0; e < spec.edges.size(); ++e) edges[e].label = spec.edges[e];
  for (const auto& f : spec.faces)
    for (size_t i = 0; i < f.boundary.size(); ++i) {
      auto& ec = edges[f.boundary[i].edge];
      const auto& len = spec.shapes[f.shape].sides[i];
      if (!ec.lengths.empty() && ec.lengths.front() != len) ec.consistent = false;
      ec.lengths.push_back(len);
    }
  r.edges = std::move(edges);
  Quotient q = quotient_of(spec);
  r.vertex_count = q.vertex_count;
  r.edge_count = static_cast<int>(spec.edges.size());
  r.face_count = static_cast<int>(spec.faces.size());
  r.vertex_orbits = q.vertex_corners;
  return r;
}

std::vector<LinkGraph> base_links(const ComplexSpec& spec) {
  Quotient q = quotient_of(spec);
  std::vector<LinkGraph> links(q.vertex_count);
  for (int v = 0; v < q.vertex_count; ++v) links[v].vertex = v;
  for (int e = 0; e < static_cast<int>(spec.edges.size()); ++e)
    for (int end = 0; end < 2; ++end) links[q.edge_vertex[e][end]].nodes.push_back(germ_id(e, end));
  int base = 0;
  for (int f = 0; f < static_cast<int>(spec.faces.size()); ++f) {
    const auto& face = spec.faces[f];
    const auto& sh = spec.shapes[face.shape];
    int n = static_cast<int>(face.boundary.size());
    for (int i = 0; i < n; ++i) {
      int v = q.corner_vertex[f][i];
      const Side& in = face.boundary[(i + n - 1) % n];  // side ending at corner i
      const Side& out = face.boundary[i];               // side starting at corner i
      int g1 = germ_id(in.edge, side_end_at_corner(in, false));
      int g2 = germ_id(out.edge, side_end_at_corner(out, true));
      auto& L = links[v];
      int a = L.index_of(g1), b = L.index_of(g2);
      if (a < 0 || b < 0) throw SpecError("dangling edge-germ at quotient vertex " + std::to_string(v));
      L.edges.push_back({a, b, sh.corners[i], base + i});
    }
    base += n;
  }
  return links;
}

}  // namespace wallspace
