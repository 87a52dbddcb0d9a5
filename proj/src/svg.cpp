#include "wallspace/svg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace wallspace {

namespace {

using C = std::complex<double>;

Vec2 to_vec(const Point& p) { return {p.x.value(), p.y.value()}; }
Vec2 lerp(const Vec2& a, const Vec2& b, double t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }

std::string kind_name(const Ball& ball, int f) {
  return to_string(ball.spec->faces[ball.faces[f].q].kind);
}

/// Point at perimeter position pos of a polygon with corners in order.
Vec2 perimeter_point(const std::vector<Vec2>& corners, const Rational& pos) {
  const int n = static_cast<int>(corners.size());
  auto i = static_cast<int>(std::floor(boost::rational_cast<double>(pos)));
  Rational t = pos - Rational(i);
  i = ((i % n) + n) % n;
  return lerp(corners[i], corners[(i + 1) % n], boost::rational_cast<double>(t));
}

std::vector<Vec2> local_polygon(const Ball& ball, int f) {
  const ComplexSpec& spec = *ball.spec;
  std::vector<Point> exact;
  if (!exact_polygon(spec.shape_of(ball.faces[f].q), exact))
    throw std::runtime_error("face shape has no exact planar polygon");
  std::vector<Vec2> out;
  for (const auto& p : exact) out.push_back(to_vec(p));
  return out;
}

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

Vec2 centroid(const std::vector<Vec2>& poly) {
  Vec2 c;
  for (const auto& p : poly) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<double>(poly.size());
  c.y /= static_cast<double>(poly.size());
  return c;
}

constexpr double kEps = 1e-7;

bool strictly_inside(const std::vector<Vec2>& poly, const Vec2& p) {
  const int n = static_cast<int>(poly.size());
  bool in = false;
  for (int i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 &a = poly[i], &b = poly[j];
    double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len > 0 && std::abs(orient(a, b, p)) / len < kEps &&
        std::min(a.x, b.x) - kEps <= p.x && p.x <= std::max(a.x, b.x) + kEps &&
        std::min(a.y, b.y) - kEps <= p.y && p.y <= std::max(a.y, b.y) + kEps)
      return false;
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

bool proper_crossing(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > kEps && o2 < -kEps) || (o1 < -kEps && o2 > kEps)) &&
         ((o3 > kEps && o4 < -kEps) || (o3 < -kEps && o4 > kEps));
}

bool polygons_overlap(const std::vector<Vec2>& p, const std::vector<Vec2>& q) {
  if (strictly_inside(p, centroid(q)) || strictly_inside(q, centroid(p))) return true;
  for (const auto& v : q)
    if (strictly_inside(p, v)) return true;
  for (const auto& v : p)
    if (strictly_inside(q, v)) return true;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = 0; j < q.size(); ++j)
      if (proper_crossing(p[i], p[(i + 1) % p.size()], q[j], q[(j + 1) % q.size()])) return true;
  return false;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string points_attr(const std::vector<Vec2>& pts) {
  std::string s;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += num(pts[i].x) + "," + num(-pts[i].y);
  }
  return s;
}

std::string xml_escape(const std::string& in) {
  std::string out;
  for (char ch : in) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

const char* wall_colour(const std::string& type) {
  if (type == "a") return "#d62728";
  if (type == "b") return "#1f77b4";
  if (type == "c") return "#2ca02c";
  if (type == "d") return "#9467bd";
  return "#ff7f0e";
}

const char* face_fill(const std::string& kind) {
  if (kind == "triangle") return "#f4f1e8";
  if (kind == "rhombus") return "#e8eef4";
  return "#f4e8ee";
}

}  // namespace

std::vector<std::vector<Vec2>> join_segments(const std::vector<std::pair<Vec2, Vec2>>& segs) {
  auto key = [](const Vec2& p) {
    return std::make_pair(std::llround(p.x * 1e7), std::llround(p.y * 1e7));
  };
  std::map<std::pair<long long, long long>, std::vector<int>> at;
  for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
    at[key(segs[i].first)].push_back(i);
    at[key(segs[i].second)].push_back(i);
  }
  std::vector<char> used(segs.size(), 0);
  auto next_from = [&](const Vec2& p) {
    for (int i : at[key(p)])
      if (!used[i]) return i;
    return -1;
  };
  std::vector<std::vector<Vec2>> out;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    if (used[s]) continue;
    used[s] = 1;
    std::deque<Vec2> line{segs[s].first, segs[s].second};
    for (int end = 0; end < 2; ++end) {
      while (true) {
        Vec2 tip = end == 0 ? line.back() : line.front();
        int i = next_from(tip);
        if (i < 0) break;
        used[i] = 1;
        Vec2 far = key(segs[i].first) == key(tip) ? segs[i].second : segs[i].first;
        if (end == 0) line.push_back(far);
        else line.push_front(far);
      }
    }
    out.emplace_back(line.begin(), line.end());
  }
  return out;
}

Development develop_patch(const Ball& ball, const FlatPatch& patch, const std::vector<Wall>& walls) {
  Development dev;
  dev.title = "flat patch seeded at face " + std::to_string(patch.seed);
  std::map<int, std::vector<Vec2>> placed;
  for (int f : patch.faces) {
    DevPolygon poly;
    poly.face = f;
    poly.kind = kind_name(ball, f);
    for (int v : ball.faces[f].verts) poly.corners.push_back(to_vec(patch.chart.at(v)));
    placed[f] = poly.corners;
    dev.faces.push_back(std::move(poly));
  }
  for (const auto& w : walls) {
    if (w.type == WallType::D || w.type == WallType::Transverse) continue;
    std::vector<std::pair<Vec2, Vec2>> segs;
    for (const auto& c : w.chords) {
      auto it = placed.find(c.face);
      if (it == placed.end()) continue;
      segs.emplace_back(perimeter_point(it->second, c.from_pos), perimeter_point(it->second, c.to_pos));
    }
    for (auto& line : join_segments(segs)) dev.walls.push_back({w.id, to_string(w.type), std::move(line)});
  }
  return dev;
}

Development develop_wall_strip(const Ball& ball, const Wall& wall) {
  Development dev;
  dev.title = to_string(wall.type) + " wall " + std::to_string(wall.id);
  std::set<int> carrier(wall.carrier.begin(), wall.carrier.end());
  std::map<int, std::vector<Vec2>> placed;
  std::vector<int> order;

  auto tail_corner = [&](int f, int side) {
    const auto& s = ball.spec->faces[ball.faces[f].q].boundary[side];
    return s.positive ? side : (side + 1) % static_cast<int>(ball.faces[f].verts.size());
  };

  double offset = 0;
  for (int seed : wall.carrier) {
    if (placed.count(seed)) continue;
    auto poly = local_polygon(ball, seed);
    double minx = 1e300;
    for (const auto& p : poly) minx = std::min(minx, p.x);
    for (auto& p : poly) p.x += offset - minx;
    placed[seed] = poly;
    order.push_back(seed);
    std::deque<int> queue{seed};
    while (!queue.empty()) {
      int f = queue.front();
      queue.pop_front();
      const auto& bf = ball.faces[f];
      const int n = static_cast<int>(bf.verts.size());
      for (int i = 0; i < n; ++i) {
        int e = bf.edges[i];
        for (auto [g, j] : ball.edge_sides[e]) {
          if (!carrier.count(g) || placed.count(g)) continue;
          const auto& fp = placed[f];
          int tf = tail_corner(f, i);
          Vec2 A = fp[tf], B = fp[tf == i ? (i + 1) % n : i];
          auto local = local_polygon(ball, g);
          const int m = static_cast<int>(local.size());
          int tg = tail_corner(g, j);
          Vec2 p = local[tg], q = local[tg == j ? (j + 1) % m : j];
          C a(A.x, A.y), b(B.x, B.y), cp(p.x, p.y), cq(q.x, q.y);
          std::vector<Vec2> rot, ref;
          for (const auto& z : local) {
            C cz(z.x, z.y);
            C r1 = a + (cz - cp) * (b - a) / (cq - cp);
            C r2 = a + std::conj(cz - cp) * (b - a) / std::conj(cq - cp);
            rot.push_back({r1.real(), r1.imag()});
            ref.push_back({r2.real(), r2.imag()});
          }
          double side_f = orient(A, B, centroid(fp));
          double side_rot = orient(A, B, centroid(rot));
          placed[g] = (side_f * side_rot < 0) ? rot : ref;
          order.push_back(g);
          queue.push_back(g);
        }
      }
    }
    double maxx = -1e300;
    for (const auto& [f, poly2] : placed)
      for (const auto& p : poly2) maxx = std::max(maxx, p.x);
    offset = maxx + 1;
  }

  for (int f : order) dev.faces.push_back({f, kind_name(ball, f), placed[f]});
  for (size_t i = 0; i < order.size() && !dev.overlap; ++i)
    for (size_t j = i + 1; j < order.size() && !dev.overlap; ++j)
      if (polygons_overlap(placed[order[i]], placed[order[j]])) dev.overlap = true;

  auto edge_point = [&](int e, const Rational& frac) -> std::pair<bool, Vec2> {
    for (auto [f, i] : ball.edge_sides[e]) {
      auto it = placed.find(f);
      if (it == placed.end()) continue;
      const auto& s = ball.spec->faces[ball.faces[f].q].boundary[i];
      Rational t = s.positive ? frac : Rational(1) - frac;
      return {true, perimeter_point(it->second, Rational(i) + t)};
    }
    return {false, {}};
  };
  auto vertex_point = [&](int v) -> std::pair<bool, Vec2> {
    for (auto [f, i] : ball.vertex_corners[v]) {
      auto it = placed.find(f);
      if (it != placed.end()) return {true, it->second[i]};
    }
    return {false, {}};
  };

  std::vector<std::pair<Vec2, Vec2>> segs;
  for (const auto& c : wall.chords) {
    const auto& poly = placed.at(c.face);
    segs.emplace_back(perimeter_point(poly, c.from_pos), perimeter_point(poly, c.to_pos));
  }
  for (int e : wall.edges) {
    auto a = edge_point(e, Rational(0)), b = edge_point(e, Rational(1));
    if (a.first && b.first) segs.emplace_back(a.second, b.second);
  }
  for (auto& line : join_segments(segs)) dev.walls.push_back({wall.id, to_string(wall.type), std::move(line)});

  for (int k : refraction_points(ball, wall)) {
    const auto& p = wall.points[k];
    auto at = p.is_vertex() ? vertex_point(p.vertex) : edge_point(p.edge, p.frac);
    if (at.first) dev.refraction.push_back(at.second);
  }
  return dev;
}

std::string render_svg(const Development& dev, const SvgOptions& opt) {
  double minx = 0, maxx = 0, miny = 0, maxy = 0;
  bool any = false;
  auto grow = [&](const Vec2& p) {
    if (!any) {
      minx = maxx = p.x;
      miny = maxy = p.y;
      any = true;
    }
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  };
  for (const auto& f : dev.faces)
    for (const auto& p : f.corners) grow(p);
  for (const auto& w : dev.walls)
    for (const auto& p : w.points) grow(p);
  for (const auto& p : dev.refraction) grow(p);

  const double pad = opt.margin / opt.scale;
  double vx = minx - pad, vy = -maxy - pad;
  double vw = (maxx - minx) + 2 * pad, vh = (maxy - miny) + 2 * pad;
  const double stroke = 1.0 / opt.scale;

  nlohmann::json meta = {{"title", dev.title},
                         {"faces", dev.faces.size()},
                         {"wall_polylines", dev.walls.size()},
                         {"refraction_points", dev.refraction.size()},
                         {"overlap", dev.overlap}};

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(vw * opt.scale) << "\" height=\""
     << num(vh * opt.scale) << "\" viewBox=\"" << num(vx) << ' ' << num(vy) << ' ' << num(vw) << ' ' << num(vh)
     << "\">\n";
  os << "<metadata>" << xml_escape(meta.dump()) << "</metadata>\n";
  os << "<title>" << xml_escape(dev.title) << "</title>\n";
  os << "<g class=\"faces\" stroke=\"#555555\" stroke-width=\"" << num(stroke) << "\">\n";
  for (const auto& f : dev.faces)
    os << "<polygon class=\"face " << f.kind << "\" data-face=\"" << f.face << "\" fill=\"" << face_fill(f.kind)
       << "\" points=\"" << points_attr(f.corners) << "\"/>\n";
  os << "</g>\n";
  os << "<g class=\"walls\" fill=\"none\" stroke-width=\"" << num(3 * stroke) << "\">\n";
  for (const auto& w : dev.walls)
    os << "<polyline class=\"wall " << w.type << "\" data-wall=\"" << w.wall << "\" stroke=\"" << wall_colour(w.type)
       << "\" points=\"" << points_attr(w.points) << "\"/>\n";
  os << "</g>\n";
  os << "<g class=\"refraction\" fill=\"#000000\">\n";
  for (const auto& p : dev.refraction)
    os << "<circle class=\"refraction\" cx=\"" << num(p.x) << "\" cy=\"" << num(-p.y) << "\" r=\"" << num(4 * stroke)
       << "\"/>\n";
  os << "</g>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace wallspace
