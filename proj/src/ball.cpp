#include "wallspace/ball.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>

namespace wallspace {

std::vector<std::pair<int, int>> Ball::germs_at(int v) const {
  std::vector<std::pair<int, int>> out;
  for (int e : vertex_edges[v]) {
    if (edges[e].tail == v) out.emplace_back(e, 0);
    if (edges[e].head == v) out.emplace_back(e, 1);
  }
  return out;
}

namespace {

struct Merge {
  int kind;  // 0 vertex, 1 edge, 2 face
  int a, b;
};

class Developer {
 public:
  Developer(const ComplexSpec& spec, const BuildOptions& opt)
      : spec_(spec), q_(quotient_of(spec)), cap_(opt.cell_cap) {
    int base = 0;
    for (const auto& f : spec.faces) {
      corner_base_.push_back(base);
      for (size_t i = 0; i < f.boundary.size(); ++i) corner_face_.push_back({static_cast<int>(corner_base_.size()) - 1, static_cast<int>(i)});
      base += static_cast<int>(f.boundary.size());
    }
  }

  Ball run(int radius, int base_q) {
    if (base_q < 0 || base_q >= q_.vertex_count) throw BuildError("base vertex out of range");
    int base = new_vertex(base_q);
    while (true) {
      auto dist = distances(base);
      std::vector<int> todo;
      for (int v = 0; v < static_cast<int>(vpar_.size()); ++v)
        if (vfind(v) == v && !vproc_[v] && dist[v] >= 0 && dist[v] < radius) todo.push_back(v);
      if (todo.empty()) break;
      frontier_ = todo.size();
      std::stable_sort(todo.begin(), todo.end(), [&](int a, int b) { return dist[a] < dist[b]; });
      for (int v : todo) {
        v = vfind(v);
        if (vproc_[v]) continue;
        complete(v);
      }
    }
    return extract(radius, base);
  }

 private:
  const ComplexSpec& spec_;
  Quotient q_;
  std::size_t cap_;
  std::size_t frontier_ = 0;
  std::vector<int> corner_base_;
  std::vector<std::pair<int, int>> corner_face_;

  std::vector<int> vpar_, vq_;
  std::vector<char> vproc_;
  std::vector<std::vector<int>> vfaces_, vedges_;
  std::vector<int> epar_, eq_;
  std::vector<std::array<int, 2>> eend_;
  std::vector<int> fpar_, fq_;
  std::vector<std::vector<int>> fv_, fe_;
  std::vector<Merge> pending_;
  std::vector<int> dirty_;

  static int find(std::vector<int>& p, int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  int vfind(int x) { return find(vpar_, x); }
  int efind(int x) { return find(epar_, x); }
  int ffind(int x) { return find(fpar_, x); }

  void check_cap() {
    if (vpar_.size() + epar_.size() + fpar_.size() > cap_)
      throw BuildError("resource cap exceeded: " + std::to_string(vpar_.size() + epar_.size() + fpar_.size()) +
                       " cells developed (cap " + std::to_string(cap_) + "), frontier of " +
                       std::to_string(frontier_) + " vertices");
  }

  int new_vertex(int q) {
    int id = static_cast<int>(vpar_.size());
    vpar_.push_back(id);
    vq_.push_back(q);
    vproc_.push_back(0);
    vfaces_.emplace_back();
    vedges_.emplace_back();
    return id;
  }

  int new_edge(int q, int tail, int head) {
    int id = static_cast<int>(epar_.size());
    epar_.push_back(id);
    eq_.push_back(q);
    eend_.push_back({tail, head});
    vedges_[tail].push_back(id);
    if (head != tail) vedges_[head].push_back(id);
    return id;
  }

  int new_face(int q, std::vector<int> verts, std::vector<int> edges) {
    int id = static_cast<int>(fpar_.size());
    fpar_.push_back(id);
    fq_.push_back(q);
    for (int v : verts) vfaces_[v].push_back(id);
    fv_.push_back(std::move(verts));
    fe_.push_back(std::move(edges));
    check_cap();
    return id;
  }

  void process_merges() {
    while (!pending_.empty()) {
      Merge m = pending_.back();
      pending_.pop_back();
      if (m.kind == 0) {
        int a = vfind(m.a), b = vfind(m.b);
        if (a == b) continue;
        if (vq_[a] != vq_[b]) throw BuildError("link mismatch during folding: vertices of different quotient type");
        if (b < a) std::swap(a, b);
        vpar_[b] = a;
        vfaces_[a].insert(vfaces_[a].end(), vfaces_[b].begin(), vfaces_[b].end());
        vedges_[a].insert(vedges_[a].end(), vedges_[b].begin(), vedges_[b].end());
        vfaces_[b].clear();
        vedges_[b].clear();
        vproc_[a] = vproc_[a] || vproc_[b];
        if (vproc_[a]) dirty_.push_back(a);
      } else if (m.kind == 1) {
        int a = efind(m.a), b = efind(m.b);
        if (a == b) continue;
        if (eq_[a] != eq_[b]) throw BuildError("link mismatch during folding: edges of different label");
        if (b < a) std::swap(a, b);
        epar_[b] = a;
        pending_.push_back({0, eend_[a][0], eend_[b][0]});
        pending_.push_back({0, eend_[a][1], eend_[b][1]});
      } else {
        int a = ffind(m.a), b = ffind(m.b);
        if (a == b) continue;
        if (fq_[a] != fq_[b]) throw BuildError("link mismatch during folding: faces of different type");
        if (b < a) std::swap(a, b);
        fpar_[b] = a;
        for (size_t i = 0; i < fv_[a].size(); ++i) {
          pending_.push_back({0, fv_[a][i], fv_[b][i]});
          pending_.push_back({1, fe_[a][i], fe_[b][i]});
        }
      }
    }
  }

  // Identify duplicate corners and germs at v; returns true when merges were queued.
  bool dedup(int v, std::unordered_map<int, int>* corners_out = nullptr,
             std::unordered_map<int, int>* germs_out = nullptr) {
    v = vfind(v);
    std::unordered_map<int, int> corners, germs;
    bool merged = false;
    std::vector<int> faces;
    for (int f : vfaces_[v]) faces.push_back(ffind(f));
    std::sort(faces.begin(), faces.end());
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    vfaces_[v] = faces;
    for (int f : faces)
      for (size_t k = 0; k < fv_[f].size(); ++k) {
        if (vfind(fv_[f][k]) != v) continue;
        int cid = corner_base_[fq_[f]] + static_cast<int>(k);
        auto [it, fresh] = corners.emplace(cid, f);
        if (!fresh && it->second != f) {
          pending_.push_back({2, it->second, f});
          merged = true;
        }
      }
    std::vector<int> edges;
    for (int e : vedges_[v]) edges.push_back(efind(e));
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    vedges_[v] = edges;
    for (int e : edges)
      for (int end = 0; end < 2; ++end) {
        if (vfind(eend_[e][end]) != v) continue;
        int gid = germ_id(eq_[e], end);
        auto [it, fresh] = germs.emplace(gid, e);
        if (!fresh && it->second != e) {
          pending_.push_back({1, it->second, e});
          merged = true;
        }
      }
    if (corners_out) *corners_out = std::move(corners);
    if (germs_out) *germs_out = std::move(germs);
    return merged;
  }

  void settle() {
    process_merges();
    while (!dirty_.empty()) {
      int d = dirty_.back();
      dirty_.pop_back();
      if (dedup(d)) process_merges();
    }
  }

  void complete(int v) {
    std::unordered_map<int, int> corners, germs;
    while (true) {
      v = vfind(v);
      if (!dedup(v, &corners, &germs)) break;
      settle();
    }
    vproc_[v] = 1;
    int qv = vq_[v];
    for (int cid : q_.vertex_corners[qv]) {
      if (corners.count(cid)) continue;
      auto [f, i] = corner_face_[cid];
      const auto& face = spec_.faces[f];
      int n = static_cast<int>(face.boundary.size());
      std::vector<int> verts(n, -1), edges(n, -1);
      verts[i] = v;
      auto germ_edge_at_v = [&](int side, bool at_start) {
        const Side& s = face.boundary[side];
        int end = side_end_at_corner(s, at_start);
        int gid = germ_id(s.edge, end);
        auto it = germs.find(gid);
        if (it != germs.end()) return efind(it->second);
        int other = new_vertex(q_.edge_vertex[s.edge][1 - end]);
        int e = end == 0 ? new_edge(s.edge, v, other) : new_edge(s.edge, other, v);
        germs[gid] = e;
        return e;
      };
      int out = germ_edge_at_v(i, true);
      int in = germ_edge_at_v((i + n - 1) % n, false);
      edges[i] = out;
      edges[(i + n - 1) % n] = in;
      {
        const Side& s = face.boundary[i];
        verts[(i + 1) % n] = vfind(eend_[out][1 - side_end_at_corner(s, true)]);
        const Side& t = face.boundary[(i + n - 1) % n];
        verts[(i + n - 1) % n] = vfind(eend_[in][1 - side_end_at_corner(t, false)]);
      }
      for (int k = 0; k < n; ++k)
        if (verts[k] < 0) verts[k] = new_vertex(q_.corner_vertex[f][k]);
      for (int j = 0; j < n; ++j) {
        if (edges[j] >= 0) continue;
        const Side& s = face.boundary[j];
        int a = verts[j], b = verts[(j + 1) % n];
        edges[j] = s.positive ? new_edge(s.edge, a, b) : new_edge(s.edge, b, a);
      }
      for (int w : verts)
        if (vproc_[vfind(w)]) dirty_.push_back(vfind(w));
      int fid = new_face(f, verts, edges);
      corners[cid] = fid;
    }
    // fresh faces may duplicate germs at already completed neighbours; fold those
    dirty_.push_back(v);
    settle();
  }

  std::vector<int> distances(int base) {
    int n = static_cast<int>(vpar_.size());
    std::vector<int> dist(n, -1);
    std::deque<int> dq;
    int b = vfind(base);
    dist[b] = 0;
    dq.push_back(b);
    while (!dq.empty()) {
      int v = dq.front();
      dq.pop_front();
      for (int e : vedges_[v]) {
        e = efind(e);
        for (int end = 0; end < 2; ++end) {
          int w = vfind(eend_[e][end]);
          if (dist[w] < 0) {
            dist[w] = dist[v] + 1;
            dq.push_back(w);
          }
        }
      }
    }
    return dist;
  }

  Ball extract(int radius, int base) {
    auto dist = distances(base);
    Ball ball;
    ball.spec = std::make_shared<const ComplexSpec>(spec_);
    ball.radius = radius;
    ball.base_q = vq_[vfind(base)];
    struct Cand {
      int key1, key2, id;
    };
    std::vector<Cand> fc;
    std::vector<char> vin(vpar_.size(), 0), ein(epar_.size(), 0);
    vin[vfind(base)] = 1;
    for (int f = 0; f < static_cast<int>(fpar_.size()); ++f) {
      if (ffind(f) != f) continue;
      int md = std::numeric_limits<int>::max();
      for (int v : fv_[f]) md = std::min(md, dist[vfind(v)]);
      if (md >= radius) continue;
      fc.push_back({md, fq_[f], f});
      for (int v : fv_[f]) vin[vfind(v)] = 1;
      for (int e : fe_[f]) ein[efind(e)] = 1;
    }
    std::vector<int> verts;
    for (int v = 0; v < static_cast<int>(vpar_.size()); ++v)
      if (vin[v]) verts.push_back(v);
    std::stable_sort(verts.begin(), verts.end(), [&](int a, int b) { return dist[a] < dist[b]; });
    std::unordered_map<int, int> vid;
    for (int v : verts) {
      vid[v] = static_cast<int>(ball.vertices.size());
      ball.vertices.push_back({vq_[v], dist[v], false});
    }
    ball.base = vid.at(vfind(base));

    std::vector<Cand> ec;
    for (int e = 0; e < static_cast<int>(epar_.size()); ++e) {
      if (!ein[e]) continue;
      int a = vfind(eend_[e][0]), b = vfind(eend_[e][1]);
      ec.push_back({std::min(dist[a], dist[b]), 0, e});
    }
    std::stable_sort(ec.begin(), ec.end(), [](const Cand& x, const Cand& y) { return x.key1 < y.key1; });
    std::unordered_map<int, int> eid;
    for (auto& c : ec) {
      eid[c.id] = static_cast<int>(ball.edges.size());
      ball.edges.push_back({eq_[c.id], vid.at(vfind(eend_[c.id][0])), vid.at(vfind(eend_[c.id][1])), false});
    }
    std::stable_sort(fc.begin(), fc.end(),
                     [](const Cand& x, const Cand& y) { return std::tie(x.key1, x.key2) < std::tie(y.key1, y.key2); });
    for (auto& c : fc) {
      BallFace bf;
      bf.q = fq_[c.id];
      for (int v : fv_[c.id]) bf.verts.push_back(vid.at(vfind(v)));
      for (int e : fe_[c.id]) bf.edges.push_back(eid.at(efind(e)));
      ball.faces.push_back(std::move(bf));
    }

    ball.vertex_corners.assign(ball.vertices.size(), {});
    ball.vertex_edges.assign(ball.vertices.size(), {});
    ball.edge_sides.assign(ball.edges.size(), {});
    for (int e = 0; e < ball.edge_count(); ++e) {
      ball.vertex_edges[ball.edges[e].tail].push_back(e);
      if (ball.edges[e].head != ball.edges[e].tail) ball.vertex_edges[ball.edges[e].head].push_back(e);
    }
    for (int f = 0; f < ball.face_count(); ++f)
      for (size_t i = 0; i < ball.faces[f].verts.size(); ++i) {
        ball.vertex_corners[ball.faces[f].verts[i]].emplace_back(f, static_cast<int>(i));
        ball.edge_sides[ball.faces[f].edges[i]].emplace_back(f, static_cast<int>(i));
      }
    for (int v = 0; v < ball.vertex_count(); ++v) {
      int qv = ball.vertices[v].q;
      int germs = 0;
      for (int e : ball.vertex_edges[v]) germs += (ball.edges[e].tail == v) + (ball.edges[e].head == v);
      int qgerms = 0;
      for (int e = 0; e < static_cast<int>(spec_.edges.size()); ++e)
        qgerms += (q_.edge_vertex[e][0] == qv) + (q_.edge_vertex[e][1] == qv);
      ball.vertices[v].interior = static_cast<int>(ball.vertex_corners[v].size()) ==
                                      static_cast<int>(q_.vertex_corners[qv].size()) &&
                                  germs == qgerms;
    }
    for (int e = 0; e < ball.edge_count(); ++e)
      ball.edges[e].interior = static_cast<int>(ball.edge_sides[e].size()) == q_.edge_multiplicity[ball.edges[e].q];
    for (auto& f : ball.faces) {
      f.interior = true;
      for (int v : f.verts) f.interior = f.interior && ball.vertices[v].interior;
    }
    return ball;
  }
};

}  // namespace

Ball build_ball(const ComplexSpec& spec, int radius, int base_vertex, const BuildOptions& opt) {
  if (radius < 0) throw BuildError("radius must be non-negative");
  Developer dev(spec, opt);
  return dev.run(radius, base_vertex);
}

H1Result homology_h1(const Ball& ball) {
  SparseIntMatrix d1(ball.vertex_count(), ball.edge_count());
  for (int e = 0; e < ball.edge_count(); ++e) {
    d1.add(ball.edges[e].tail, e, -1);
    d1.add(ball.edges[e].head, e, 1);
  }
  SparseIntMatrix d2(ball.edge_count(), ball.face_count());
  // ball faces inherit the quotient orientation signs; recover them from the corner vertices
  for (int f = 0; f < ball.face_count(); ++f) {
    const auto& bf = ball.faces[f];
    int n = static_cast<int>(bf.edges.size());
    for (int i = 0; i < n; ++i) {
      const auto& e = ball.edges[bf.edges[i]];
      bool positive = e.tail == bf.verts[i] && e.head == bf.verts[(i + 1) % n];
      if (e.tail == e.head) positive = true;
      d2.add(bf.edges[i], f, positive ? 1 : -1);
    }
  }
  return h1_from_boundaries(d1, d2);
}

H1Result quotient_homology_h1(const ComplexSpec& spec) {
  Quotient q = quotient_of(spec);
  int ne = static_cast<int>(spec.edges.size());
  SparseIntMatrix d1(q.vertex_count, ne);
  for (int e = 0; e < ne; ++e) {
    d1.add(q.edge_vertex[e][0], e, -1);
    d1.add(q.edge_vertex[e][1], e, 1);
  }
  SparseIntMatrix d2(ne, static_cast<int>(spec.faces.size()));
  for (int f = 0; f < static_cast<int>(spec.faces.size()); ++f)
    for (const auto& s : spec.faces[f].boundary) d2.add(s.edge, f, s.positive ? 1 : -1);
  return h1_from_boundaries(d1, d2);
}

std::string export_ball_json(const Ball& ball) {
  nlohmann::json j;
  j["radius"] = ball.radius;
  j["base"] = ball.base;
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : ball.vertices) j["vertices"].push_back({{"q", v.q}, {"dist", v.dist}, {"interior", v.interior}});
  j["edges"] = nlohmann::json::array();
  for (const auto& e : ball.edges)
    j["edges"].push_back({{"q", e.q}, {"tail", e.tail}, {"head", e.head}, {"interior", e.interior}});
  j["faces"] = nlohmann::json::array();
  for (const auto& f : ball.faces)
    j["faces"].push_back({{"q", f.q}, {"verts", f.verts}, {"edges", f.edges}, {"interior", f.interior}});
  return j.dump();
}

}  // namespace wallspace

namespace wallspace {

bool FlatPatch::contains_face(int f) const { return std::binary_search(faces.begin(), faces.end(), f); }

namespace {

bool is_flat_triangle(const ComplexSpec& spec, int qface) {
  const Shape& sh = spec.shape_of(qface);
  if (sh.sides.size() != 3) return false;
  for (const auto& c : sh.corners)
    if (c.coef != Rational(1, 3)) return false;
  return sh.sides[0] == sh.sides[1] && sh.sides[1] == sh.sides[2];
}

std::pair<Point, Point> segment_key(const Point& p, const Point& q) {
  return p < q ? std::make_pair(p, q) : std::make_pair(q, p);
}

}  // namespace

FlatPatch develop_flat_plane(const Ball& ball, const ComplexSpec& spec, int seed) {
  if (seed < 0 || seed >= ball.face_count()) throw std::invalid_argument("seed face not in the ball");
  if (!is_flat_triangle(spec, ball.faces[seed].q)) throw std::invalid_argument("seed is not an equilateral triangle");

  FlatPatch patch;
  patch.seed = seed;
  std::map<Point, int> at_point;
  std::map<std::pair<Point, Point>, int> at_segment;
  std::map<Point, int> at_centroid;
  std::map<int, int> hops;

  auto admit = [&](int f, const std::vector<Point>& pts) {
    const auto& bf = ball.faces[f];
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j)
        if (bf.verts[i] == bf.verts[j]) return false;
      auto c = patch.chart.find(bf.verts[i]);
      if (c != patch.chart.end() && !(c->second == pts[i])) return false;
      auto p = at_point.find(pts[i]);
      if (p != at_point.end() && p->second != bf.verts[i]) return false;
      auto s = at_segment.find(segment_key(pts[i], pts[(i + 1) % 3]));
      if (s != at_segment.end() && s->second != bf.edges[i]) return false;
    }
    if (at_centroid.count(pts[0] + pts[1] + pts[2])) return false;
    for (int i = 0; i < 3; ++i) {
      patch.chart[bf.verts[i]] = pts[i];
      at_point[pts[i]] = bf.verts[i];
      at_segment[segment_key(pts[i], pts[(i + 1) % 3])] = bf.edges[i];
    }
    at_centroid[pts[0] + pts[1] + pts[2]] = f;
    return true;
  };

  std::vector<Point> seed_pts;
  exact_polygon(spec.shape_of(ball.faces[seed].q), seed_pts);
  admit(seed, seed_pts);
  hops[seed] = 0;
  std::deque<int> queue{seed};
  while (!queue.empty()) {
    int f = queue.front();
    queue.pop_front();
    const auto& bf = ball.faces[f];
    for (int i = 0; i < 3; ++i) {
      int e = bf.edges[i];
      Point p = patch.chart.at(bf.verts[i]), q = patch.chart.at(bf.verts[(i + 1) % 3]);
      Point r = patch.chart.at(bf.verts[(i + 2) % 3]);
      for (auto [g, side] : ball.edge_sides[e]) {
        if (g == f || hops.count(g) || !is_flat_triangle(spec, ball.faces[g].q)) continue;
        const auto& bg = ball.faces[g];
        std::vector<Point> pts(3);
        // the shared side keeps its endpoints; the apex is the reflection of r
        int a = bg.verts[side], b = bg.verts[(side + 1) % 3];
        if (a == bf.verts[i] && b == bf.verts[(i + 1) % 3]) {
          pts[side] = p;
          pts[(side + 1) % 3] = q;
        } else if (a == bf.verts[(i + 1) % 3] && b == bf.verts[i]) {
          pts[side] = q;
          pts[(side + 1) % 3] = p;
        } else {
          continue;
        }
        pts[(side + 2) % 3] = p + q - r;
        if (!admit(g, pts)) continue;
        hops[g] = hops[f] + 1;
        patch.radius = std::max(patch.radius, hops[g]);
        queue.push_back(g);
      }
    }
  }
  for (auto& [f, h] : hops) patch.faces.push_back(f);
  std::map<int, int> corner_count;
  for (int f : patch.faces)
    for (int v : ball.faces[f].verts) ++corner_count[v];
  for (auto& [v, n] : corner_count)
    if (n == 6) patch.interior_vertices.push_back(v);
  return patch;
}

std::vector<FlatPatch> maximal_flat_patches(const Ball& ball, const ComplexSpec& spec) {
  std::vector<FlatPatch> out;
  std::vector<char> covered(ball.face_count(), 0);
  for (int f = 0; f < ball.face_count(); ++f) {
    if (covered[f] || !is_flat_triangle(spec, ball.faces[f].q)) continue;
    FlatPatch p = develop_flat_plane(ball, spec, f);
    for (int g : p.faces) covered[g] = 1;
    out.push_back(std::move(p));
  }
  // drop patches contained in a later one
  std::vector<char> contained(out.size(), 0);
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = 0; j < out.size() && !contained[i]; ++j)
      if (i != j && out[j].faces.size() > out[i].faces.size() &&
          std::includes(out[j].faces.begin(), out[j].faces.end(), out[i].faces.begin(), out[i].faces.end()))
        contained[i] = 1;
  std::vector<FlatPatch> kept;
  for (size_t i = 0; i < out.size(); ++i)
    if (!contained[i]) kept.push_back(std::move(out[i]));
  return kept;
}

}  // namespace wallspace
