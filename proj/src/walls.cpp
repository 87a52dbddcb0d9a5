#include "wallspace/walls.hpp"

#include "wallspace/link.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <deque>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>

namespace wallspace {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

int type_rank(WallType t) {
  for (size_t i = 0; i < kWallTypes.size(); ++i)
    if (kWallTypes[i] == t) return static_cast<int>(i);
  return static_cast<int>(kWallTypes.size());
}

// Perimeter position of a side point, reduced into [0, n).
Rational wrap(Rational pos, int n) {
  while (pos >= Rational(n)) pos -= Rational(n);
  while (pos < Rational(0)) pos += Rational(n);
  return pos;
}

// Cut fraction along the ball edge for a point at side fraction t.
Rational edge_frac(const Side& s, const Rational& t) { return s.positive ? t : Rational(1) - t; }

const std::vector<Point>& polygon_of(const ComplexSpec& spec, int shape) {
  thread_local const ComplexSpec* cached_spec = nullptr;
  thread_local std::vector<std::vector<Point>> cache;
  if (cached_spec != &spec || cache.size() != spec.shapes.size()) {
    cached_spec = &spec;
    cache.assign(spec.shapes.size(), {});
    for (size_t k = 0; k < spec.shapes.size(); ++k)
      if (!exact_polygon(spec.shapes[k], cache[k]))
        throw WallError("shape '" + spec.shapes[k].name + "' has no exact planar polygon");
  }
  return cache[shape];
}

Point side_point(const std::vector<Point>& poly, const Rational& pos) {
  int n = static_cast<int>(poly.size());
  Rational p = wrap(pos, n);
  int i = static_cast<int>(boost::rational_cast<double>(p));
  if (Rational(i) > p) --i;
  Rational t = p - Rational(i);
  const Point& a = poly[i];
  const Point& b = poly[(i + 1) % n];
  return a + scale(b - a, Q3(t));
}

std::vector<std::vector<int>> chords_by_face(const Wall& wall, int faces) {
  std::vector<std::vector<int>> out(faces);
  for (size_t k = 0; k < wall.chords.size(); ++k) out[wall.chords[k].face].push_back(static_cast<int>(k));
  return out;
}

// Regions of a face cut by the wall's chords: regions are the distinct patterns of
// "inside chord (p, q)" over the open perimeter arcs between chord ends.
struct Regions {
  std::vector<Rational> breaks;
  std::vector<int> arc_region;
  int count = 1;

  int at(const Rational& pos, int n) const {
    if (breaks.empty()) return 0;
    Rational p = wrap(pos, n);
    auto it = std::upper_bound(breaks.begin(), breaks.end(), p);
    int k = static_cast<int>(it - breaks.begin()) - 1;
    if (k < 0) k = static_cast<int>(breaks.size()) - 1;
    return arc_region[k];
  }
};

Regions face_regions(const Wall& wall, const std::vector<int>& chords, int n) {
  Regions r;
  if (chords.empty()) return r;
  for (int c : chords) {
    r.breaks.push_back(wall.chords[c].from_pos);
    r.breaks.push_back(wall.chords[c].to_pos);
  }
  std::sort(r.breaks.begin(), r.breaks.end());
  r.breaks.erase(std::unique(r.breaks.begin(), r.breaks.end()), r.breaks.end());
  const int m = static_cast<int>(r.breaks.size());
  std::map<std::vector<bool>, int> ids;
  for (int k = 0; k < m; ++k) {
    Rational lo = r.breaks[k];
    Rational hi = k + 1 < m ? r.breaks[k + 1] : r.breaks[0] + Rational(n);
    Rational mid = wrap((lo + hi) / Rational(2), n);
    std::vector<bool> sig;
    for (int c : chords) {
      Rational p = std::min(wall.chords[c].from_pos, wall.chords[c].to_pos);
      Rational q = std::max(wall.chords[c].from_pos, wall.chords[c].to_pos);
      sig.push_back(p < mid && mid < q);
    }
    auto [it, fresh] = ids.emplace(sig, static_cast<int>(ids.size()));
    r.arc_region.push_back(it->second);
  }
  r.count = static_cast<int>(ids.size());
  return r;
}

}  // namespace

int Wall::point_index(const WallPoint& p) const {
  auto it = std::lower_bound(points.begin(), points.end(), p);
  if (it == points.end() || !(*it == p)) return -1;
  return static_cast<int>(it - points.begin());
}

bool Wall::contains_vertex(int v) const {
  WallPoint p;
  p.vertex = v;
  return point_index(p) >= 0;
}

std::vector<Wall> extract_walls(const Ball& ball, const ComplexSpec& spec) {
  struct Arc {
    int type;
    int face;  // -1 for an edge arc
    int edge;
    int a, b;
    Rational pa, pb;
  };
  std::map<std::pair<int, WallPoint>, int> point_ids;
  std::vector<std::pair<int, WallPoint>> point_list;
  auto point_id = [&](int type, const WallPoint& p) {
    auto [it, fresh] = point_ids.emplace(std::make_pair(type, p), static_cast<int>(point_list.size()));
    if (fresh) point_list.emplace_back(type, p);
    return it->second;
  };
  std::vector<Arc> arcs;

  std::vector<std::vector<std::pair<int, int>>> entries_of(spec.faces.size());  // (footprint, entry)
  for (size_t k = 0; k < spec.footprints.size(); ++k)
    for (size_t j = 0; j < spec.footprints[k].entries.size(); ++j) {
      int qf = spec.footprints[k].entries[j].face;
      if (qf < 0 || qf >= static_cast<int>(spec.faces.size()))
        throw WallError("footprint references a face absent from the spec");
      entries_of[qf].emplace_back(static_cast<int>(k), static_cast<int>(j));
    }

  for (int f = 0; f < ball.face_count(); ++f) {
    const auto& bf = ball.faces[f];
    const auto& face = spec.faces[bf.q];
    const int n = static_cast<int>(bf.verts.size());
    for (auto [k, j] : entries_of[bf.q]) {
      const auto& fp = spec.footprints[k];
      const auto& ent = fp.entries[j];
      if (ent.whole_cell) throw WallError("whole-cell footprints are not supported by the wall engine");
      int type = type_rank(fp.type);
      for (const auto& seg : ent.segments) {
        auto resolve = [&](const Anchor& a, Rational& pos) {
          WallPoint p;
          int corner = -1;
          if (a.is_vertex) {
            corner = a.index;
          } else if (a.frac == Rational(0)) {
            corner = a.index;
          } else if (a.frac == Rational(1)) {
            corner = (a.index + 1) % n;
          }
          if (corner >= 0) {
            p.vertex = bf.verts[corner];
            pos = Rational(corner);
          } else {
            p.edge = bf.edges[a.index];
            p.frac = edge_frac(face.boundary[a.index], a.frac);
            pos = Rational(a.index) + a.frac;
          }
          return p;
        };
        Rational pa, pb;
        WallPoint wa = resolve(seg.from, pa), wb = resolve(seg.to, pb);
        int ia = point_id(type, wa), ib = point_id(type, wb);
        int ca = pa.denominator() == 1 ? static_cast<int>(pa.numerator()) : -1;
        int cb = pb.denominator() == 1 ? static_cast<int>(pb.numerator()) : -1;
        bool along_side = wa.is_vertex() && wb.is_vertex() && ca >= 0 && cb >= 0 &&
                          ((ca + 1) % n == cb || (cb + 1) % n == ca);
        if (along_side) {
          int side = (ca + 1) % n == cb ? ca : cb;
          arcs.push_back({type, -1, bf.edges[side], ia, ib, pa, pb});
        } else {
          arcs.push_back({type, f, -1, ia, ib, pa, pb});
        }
      }
    }
  }

  UnionFind uf(static_cast<int>(point_list.size()));
  for (const auto& a : arcs) uf.unite(a.a, a.b);
  std::map<int, int> comp_of_root;
  std::vector<Wall> walls;
  std::vector<int> wall_of_point(point_list.size());
  for (size_t p = 0; p < point_list.size(); ++p) {
    int r = uf.find(static_cast<int>(p));
    auto [it, fresh] = comp_of_root.emplace(r, static_cast<int>(walls.size()));
    if (fresh) {
      walls.emplace_back();
      walls.back().type = kWallTypes[point_list[p].first];
    }
    wall_of_point[p] = it->second;
  }
  for (size_t p = 0; p < point_list.size(); ++p) walls[wall_of_point[p]].points.push_back(point_list[p].second);
  for (auto& w : walls) {
    std::sort(w.points.begin(), w.points.end());
    w.points.erase(std::unique(w.points.begin(), w.points.end()), w.points.end());
  }
  for (const auto& a : arcs) {
    Wall& w = walls[wall_of_point[a.a]];
    if (a.face < 0) {
      w.edges.push_back(a.edge);
      continue;
    }
    WallChord c;
    c.face = a.face;
    c.from = w.point_index(point_list[a.a].second);
    c.to = w.point_index(point_list[a.b].second);
    c.from_pos = a.pa;
    c.to_pos = a.pb;
    if (c.to_pos < c.from_pos) {
      std::swap(c.from, c.to);
      std::swap(c.from_pos, c.to_pos);
    }
    w.chords.push_back(c);
  }
  for (auto& w : walls) {
    auto key = [](const WallChord& c) { return std::make_tuple(c.face, c.from_pos, c.to_pos); };
    std::sort(w.chords.begin(), w.chords.end(), [&](const WallChord& x, const WallChord& y) { return key(x) < key(y); });
    w.chords.erase(std::unique(w.chords.begin(), w.chords.end(),
                               [&](const WallChord& x, const WallChord& y) { return key(x) == key(y); }),
                   w.chords.end());
    std::sort(w.edges.begin(), w.edges.end());
    w.edges.erase(std::unique(w.edges.begin(), w.edges.end()), w.edges.end());
    for (int e : w.edges) {
      WallPoint t, h;
      t.vertex = ball.edges[e].tail;
      h.vertex = ball.edges[e].head;
      w.edge_points.emplace_back(w.point_index(t), w.point_index(h));
    }
    for (const auto& c : w.chords) w.carrier.push_back(c.face);
    w.carrier.erase(std::unique(w.carrier.begin(), w.carrier.end()), w.carrier.end());
  }
  auto order_key = [](const Wall& w) {
    return std::make_tuple(type_rank(w.type), w.carrier.empty() ? INT_MAX : w.carrier.front(),
                           w.edges.empty() ? INT_MAX : w.edges.front(), w.points.front());
  };
  std::sort(walls.begin(), walls.end(), [&](const Wall& x, const Wall& y) { return order_key(x) < order_key(y); });
  for (size_t i = 0; i < walls.size(); ++i) {
    Wall& w = walls[i];
    w.id = static_cast<int>(i);
    for (int p = 0; p < static_cast<int>(w.points.size()); ++p)
      if (!local_halving(ball, w, p).two_sided) w.incomplete_at.push_back(p);
    for (size_t k = 0; k < w.edges.size(); ++k)
      if (ball.edge_sides[w.edges[k]].size() != 2) w.incomplete_at.push_back(w.edge_points[k].first);
    std::sort(w.incomplete_at.begin(), w.incomplete_at.end());
    w.incomplete_at.erase(std::unique(w.incomplete_at.begin(), w.incomplete_at.end()), w.incomplete_at.end());
    w.interiorly_complete = w.incomplete_at.empty();
  }
  return walls;
}

H1Result wall_homology(const Wall& wall) {
  const int np = static_cast<int>(wall.points.size());
  const int arcs = static_cast<int>(wall.chords.size() + wall.edges.size());
  SparseIntMatrix d1(np, arcs), d2(arcs, 0);
  int col = 0;
  auto add = [&](int a, int b) {
    if (a != b) {
      d1.add(a, col, -1);
      d1.add(b, col, 1);
    }
    ++col;
  };
  for (const auto& c : wall.chords) add(c.from, c.to);
  for (auto [a, b] : wall.edge_points) add(a, b);
  return h1_from_boundaries(d1, d2);
}


bool wall_is_simply_connected(const Wall& wall) {
  return wall_homology(wall).betti_1 == 0;
}

HalvingResult local_halving(const Ball& ball, const Wall& wall, int point) {
  const ComplexSpec& spec = *ball.spec;
  const WallPoint& p = wall.points.at(point);
  LinkGraph L;
  Trace trace;
  if (!p.is_vertex()) {
    // the link of a cut point: the two edge directions joined by one arc per face side
    L.nodes = {0, 1};
    for (auto [f, i] : ball.edge_sides[p.edge]) {
      const Side& s = spec.faces[ball.faces[f].q].boundary[i];
      Rational pos = Rational(i) + (s.positive ? p.frac : Rational(1) - p.frac);
      int k = 0;
      for (const auto& c : wall.chords)
        if (c.face == f && (c.from_pos == pos || c.to_pos == pos)) ++k;
      if (k > 0) trace.cuts[L.edge_count()] = k;
      L.edges.push_back({0, 1, Angle(1), f * kCornerStride + i});
    }
    return halve(L, trace);
  }
  const int v = p.vertex;
  LinkGraph full = link_at(ball, v);
  std::set<int> wall_germs;
  for (int e : wall.edges) {
    if (ball.edges[e].tail == v) wall_germs.insert(germ_id(e, 0));
    if (ball.edges[e].head == v) wall_germs.insert(germ_id(e, 1));
  }
  // germs whose corners all lie outside a truncated ball carry no local piece
  std::vector<int> degree(full.node_count(), 0);
  for (const auto& e : full.edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  std::vector<int> keep(full.node_count(), -1);
  for (int k = 0; k < full.node_count(); ++k)
    if (degree[k] > 0 || wall_germs.count(full.nodes[k])) {
      keep[k] = L.node_count();
      L.nodes.push_back(full.nodes[k]);
      if (wall_germs.count(full.nodes[k])) trace.nodes.insert(keep[k]);
    }
  for (const auto& e : full.edges) L.edges.push_back({keep[e.u], keep[e.v], e.weight, e.corner});
  for (const auto& c : wall.chords) {
    const auto& bf = ball.faces[c.face];
    for (const Rational* pos : {&c.from_pos, &c.to_pos}) {
      if (pos->denominator() != 1) continue;
      int corner = static_cast<int>(pos->numerator());
      if (bf.verts[corner] != v) continue;
      int handle = c.face * kCornerStride + corner;
      for (int k = 0; k < L.edge_count(); ++k)
        if (L.edges[k].corner == handle) trace.cuts[k] += 1;
    }
  }
  return halve(L, trace);
}

int local_pieces(const Ball& ball, const Wall& wall, int point) { return local_halving(ball, wall, point).components; }

int Partition::label_at(int face, const Rational& pos) const {
  if (face_label[face] >= 0) return face_label[face];
  const FaceCut& fc = cut_faces.at(face);
  auto it = std::upper_bound(fc.breaks.begin(), fc.breaks.end(), pos);
  int k = static_cast<int>(it - fc.breaks.begin()) - 1;
  if (k < 0) k = static_cast<int>(fc.breaks.size()) - 1;
  return fc.arc_label[k];
}

Partition partition(const Ball& ball, const Wall& wall) {
  const ComplexSpec& spec = *ball.spec;
  const int V = ball.vertex_count(), E = ball.edge_count(), F = ball.face_count();
  std::vector<char> on_wall(V, 0);
  for (const auto& p : wall.points)
    if (p.is_vertex()) on_wall[p.vertex] = 1;
  std::vector<char> wall_edge(E, 0);
  for (int e : wall.edges) wall_edge[e] = 1;

  std::map<int, std::vector<Rational>> cuts;
  for (const auto& p : wall.points)
    if (!p.is_vertex()) cuts[p.edge].push_back(p.frac);
  for (auto& [e, v] : cuts) std::sort(v.begin(), v.end());

  std::vector<int> edge_first(E + 1);
  int next = V;
  for (int e = 0; e < E; ++e) {
    edge_first[e] = next;
    auto it = cuts.find(e);
    next += 1 + (it == cuts.end() ? 0 : static_cast<int>(it->second.size()));
  }
  edge_first[E] = next;
  auto by_face = chords_by_face(wall, F);
  std::vector<Regions> regions(F);
  std::vector<int> face_first(F + 1);
  for (int f = 0; f < F; ++f) {
    face_first[f] = next;
    if (!by_face[f].empty()) regions[f] = face_regions(wall, by_face[f], static_cast<int>(ball.faces[f].verts.size()));
    next += regions[f].count;
  }
  face_first[F] = next;
  const int pieces = next;
  UnionFind uf(pieces);

  for (int e = 0; e < E; ++e) {
    if (wall_edge[e]) continue;
    int last = edge_first[e + 1] - 1;
    if (!on_wall[ball.edges[e].tail]) uf.unite(edge_first[e], ball.edges[e].tail);
    if (!on_wall[ball.edges[e].head]) uf.unite(last, ball.edges[e].head);
  }
  for (int f = 0; f < F; ++f) {
    const auto& bf = ball.faces[f];
    const int n = static_cast<int>(bf.verts.size());
    const Regions& R = regions[f];
    if (R.breaks.empty()) {
      // uncut face: one region touching every corner and every edge piece
      for (int i = 0; i < n; ++i) {
        if (!on_wall[bf.verts[i]]) uf.unite(face_first[f], bf.verts[i]);
        int e = bf.edges[i];
        if (wall_edge[e]) continue;
        for (int k = edge_first[e]; k < edge_first[e + 1]; ++k) uf.unite(face_first[f], k);
      }
      continue;
    }
    const auto& face = spec.faces[bf.q];
    for (int i = 0; i < n; ++i) {
      if (!on_wall[bf.verts[i]]) uf.unite(face_first[f] + R.at(Rational(i), n), bf.verts[i]);
      int e = bf.edges[i];
      if (wall_edge[e]) continue;
      auto it = cuts.find(e);
      std::vector<Rational> bounds{Rational(0)};
      if (it != cuts.end()) bounds.insert(bounds.end(), it->second.begin(), it->second.end());
      bounds.push_back(Rational(1));
      for (size_t j = 0; j + 1 < bounds.size(); ++j) {
        Rational mid = (bounds[j] + bounds[j + 1]) / Rational(2);
        Rational t = face.boundary[i].positive ? mid : Rational(1) - mid;
        uf.unite(face_first[f] + R.at(Rational(i) + t, n), edge_first[e] + static_cast<int>(j));
      }
    }
  }

  std::vector<char> removed(pieces, 0);
  for (int v = 0; v < V; ++v) removed[v] = on_wall[v];
  for (int e = 0; e < E; ++e)
    if (wall_edge[e])
      for (int k = edge_first[e]; k < edge_first[e + 1]; ++k) removed[k] = 1;
  std::vector<int> rank(pieces, -1);
  int ranked = 0;
  for (int k = 0; k < pieces; ++k) {
    if (removed[k]) continue;
    int r = uf.find(k);
    if (rank[r] < 0) rank[r] = ranked++;
  }

  Partition out;
  out.components = ranked;
  out.vertex_label.assign(V, -1);
  for (int v = 0; v < V; ++v)
    if (!on_wall[v]) out.vertex_label[v] = rank[uf.find(v)];
  out.face_label.assign(F, -1);
  for (int f = 0; f < F; ++f) {
    if (by_face[f].empty()) {
      out.face_label[f] = rank[uf.find(face_first[f])];
      continue;
    }
    FaceCut fc;
    fc.breaks = regions[f].breaks;
    for (int r : regions[f].arc_region) fc.arc_label.push_back(rank[uf.find(face_first[f] + r)]);
    out.cut_faces.emplace(f, std::move(fc));
  }
  return out;
}

std::vector<Partition> partition_walls(const Ball& ball, const std::vector<Wall>& walls, Exec exec) {
  std::vector<Partition> out(walls.size());
  const int n = static_cast<int>(walls.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (int k = 0; k < n; ++k) out[k] = partition(ball, walls[k]);
  } else {
    for (int k = 0; k < n; ++k) out[k] = partition(ball, walls[k]);
  }
  return out;
}

int complement_components(const Ball& ball, const Wall& wall) {
  if (!wall.interiorly_complete)
    throw WallError("wall " + std::to_string(wall.id) + " is not interiorly complete");
  return partition(ball, wall).components;
}

bool separates(const Ball& ball, const Wall& wall, const Partition& part, int x, int y) {
  if (x < 0 || y < 0 || x >= ball.vertex_count() || y >= ball.vertex_count())
    throw WallError("query vertex not in the ball");
  if (!wall.interiorly_complete)
    throw WallError("wall " + std::to_string(wall.id) + " is not interiorly complete");
  if (part.vertex_label[x] < 0 || part.vertex_label[y] < 0) throw WallError("query endpoint lies on the wall");
  return part.vertex_label[x] != part.vertex_label[y];
}

std::vector<int> skeleton_distances(const Ball& ball, int from) {
  std::vector<int> dist(ball.vertex_count(), -1);
  std::deque<int> q{from};
  dist[from] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int e : ball.vertex_edges[v]) {
      int w = ball.other_end(e, v);
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
    }
  }
  return dist;
}

CrossingQuery make_query(const Ball& ball, int x, int y, const std::vector<FlatPatch>& patches) {
  if (x < 0 || y < 0 || x >= ball.vertex_count() || y >= ball.vertex_count())
    throw WallError("query vertex not in the ball");
  CrossingQuery q;
  q.x = x;
  q.y = y;
  std::vector<int> parent_edge(ball.vertex_count(), -2);
  parent_edge[x] = -1;
  std::deque<int> queue{x};
  while (!queue.empty() && parent_edge[y] == -2) {
    int v = queue.front();
    queue.pop_front();
    std::vector<std::pair<int, int>> nbrs;
    for (int e : ball.vertex_edges[v]) nbrs.emplace_back(ball.other_end(e, v), e);
    std::sort(nbrs.begin(), nbrs.end());
    for (auto [w, e] : nbrs)
      if (parent_edge[w] == -2) {
        parent_edge[w] = e;
        queue.push_back(w);
      }
  }
  if (parent_edge[y] == -2) throw WallError("query endpoints are not connected in the ball");
  for (int v = y; v != x;) {
    int e = parent_edge[v];
    q.path.push_back(e);
    v = ball.other_end(e, v);
  }
  std::reverse(q.path.begin(), q.path.end());
  for (size_t k = 0; k < patches.size(); ++k) {
    auto ix = patches[k].chart.find(x), iy = patches[k].chart.find(y);
    if (ix != patches[k].chart.end() && iy != patches[k].chart.end()) {
      q.patch = static_cast<int>(k);
      q.from = ix->second;
      q.to = iy->second;
      break;
    }
  }
  return q;
}

int crossing_number(const std::vector<Wall>& walls, const std::vector<Partition>& parts, const CrossingQuery& q) {
  int count = 0;
  for (size_t k = 0; k < walls.size(); ++k) {
    if (!walls[k].interiorly_complete) continue;
    int a = parts[k].vertex_label[q.x], b = parts[k].vertex_label[q.y];
    if (a >= 0 && b >= 0 && a != b) ++count;
  }
  return count;
}

int floor_chart_distance(const Point& p, const Point& q) {
  Point d = p - q;
  Q3 sq = dot(d, d);
  auto k = static_cast<std::int64_t>(std::floor(std::sqrt(std::max(0.0, sq.value()))));
  auto fits = [&](std::int64_t m) { return (sq - Q3(Rational(m * m))).sign() >= 0; };
  while (k > 0 && !fits(k)) --k;
  while (fits(k + 1)) ++k;
  return static_cast<int>(k);
}

std::vector<FlatPairSample> flat_pair_samples(const Ball& ball, const std::vector<Wall>& walls,
                                              const std::vector<Partition>& parts,
                                              const std::vector<FlatPatch>& patches, std::size_t limit) {
  std::vector<FlatPairSample> all;
  std::set<std::pair<int, int>> seen;
  for (int k = 0; k < static_cast<int>(patches.size()); ++k) {
    std::vector<int> vs;
    for (const auto& [v, pt] : patches[k].chart)
      if (ball.vertices[v].interior) vs.push_back(v);
    for (size_t i = 0; i < vs.size(); ++i)
      for (size_t j = i + 1; j < vs.size(); ++j) {
        if (!seen.insert({vs[i], vs[j]}).second) continue;
        FlatPairSample s;
        s.x = vs[i];
        s.y = vs[j];
        s.patch = k;
        s.floor_distance = floor_chart_distance(patches[k].chart.at(s.x), patches[k].chart.at(s.y));
        all.push_back(s);
      }
  }
  std::vector<FlatPairSample> out;
  if (limit == 0 || all.size() <= limit) {
    out = std::move(all);
  } else {
    for (size_t i = 0; i < limit; ++i) out.push_back(all[i * all.size() / limit]);
  }
  for (auto& s : out) {
    CrossingQuery q;
    q.x = s.x;
    q.y = s.y;
    s.crossing = crossing_number(walls, parts, q);
  }
  return out;
}

ProperProfile properness_profile(const Ball& ball, const std::vector<Wall>& walls,
                                 const std::vector<Partition>& parts, int max_distance, Exec exec) {
  std::vector<int> interior;
  for (int v = 0; v < ball.vertex_count(); ++v)
    if (ball.vertices[v].interior) interior.push_back(v);
  std::vector<int> complete;
  for (int k = 0; k < static_cast<int>(walls.size()); ++k)
    if (walls[k].interiorly_complete) complete.push_back(k);

  const int n_max = std::max(0, max_distance);
  struct Best {
    int crossing = -1;
    std::pair<int, int> pair{-1, -1};
    std::int64_t pairs = 0;
  };
  auto merge = [](Best& into, const Best& b) {
    into.pairs += b.pairs;
    if (b.crossing < 0) return;
    if (into.crossing < 0 || b.crossing < into.crossing ||
        (b.crossing == into.crossing && b.pair < into.pair)) {
      into.crossing = b.crossing;
      into.pair = b.pair;
    }
  };
  auto scan = [&](int i, std::vector<Best>& best) {
    int x = interior[i];
    auto dist = skeleton_distances(ball, x);
    for (size_t j = i + 1; j < interior.size(); ++j) {
      int y = interior[j];
      int d = dist[y];
      if (d < 1 || d > n_max) continue;
      int count = 0;
      for (int k : complete) {
        int a = parts[k].vertex_label[x], b = parts[k].vertex_label[y];
        if (a >= 0 && b >= 0 && a != b) ++count;
      }
      merge(best[d], Best{count, {x, y}, 1});
    }
  };

  std::vector<Best> best(n_max + 1);
  const int n = static_cast<int>(interior.size());
  if (exec == Exec::Serial) {
    for (int i = 0; i < n; ++i) scan(i, best);
  } else {
#pragma omp parallel
    {
      std::vector<Best> local(n_max + 1);
#pragma omp for schedule(dynamic, 4) nowait
      for (int i = 0; i < n; ++i) scan(i, local);
#pragma omp critical
      for (int d = 0; d <= n_max; ++d) merge(best[d], local[d]);
    }
  }

  ProperProfile out;
  for (int d = 0; d <= n_max; ++d) {
    out.min_crossing.push_back(d == 0 ? 0 : best[d].crossing);
    out.witness.push_back(best[d].pair);
    out.pairs.push_back(best[d].pairs);
  }
  for (int d = 2; d <= n_max; ++d)
    if (out.min_crossing[d] >= 0 && out.min_crossing[d - 1] >= 0 && out.min_crossing[d] < out.min_crossing[d - 1])
      out.inversions.push_back(d);
  return out;
}

std::vector<std::vector<int>> walls_through_cells(const Ball& ball, const std::vector<Wall>& walls) {
  std::vector<std::vector<int>> out{std::vector<int>(ball.vertex_count(), 0), std::vector<int>(ball.edge_count(), 0),
                                    std::vector<int>(ball.face_count(), 0)};
  for (const auto& w : walls) {
    std::set<int> vs, es;
    for (const auto& p : w.points) {
      if (p.is_vertex()) vs.insert(p.vertex);
      else es.insert(p.edge);
    }
    es.insert(w.edges.begin(), w.edges.end());
    for (int v : vs) ++out[0][v];
    for (int e : es) ++out[1][e];
    for (int f : w.carrier) ++out[2][f];
  }
  return out;
}

int walls_through_cell(const std::vector<Wall>& walls, int dim, int cell) {
  int count = 0;
  for (const auto& w : walls) {
    bool hit = false;
    if (dim == 2) {
      hit = std::binary_search(w.carrier.begin(), w.carrier.end(), cell);
    } else if (dim == 1) {
      hit = std::binary_search(w.edges.begin(), w.edges.end(), cell);
      for (const auto& p : w.points) hit = hit || (!p.is_vertex() && p.edge == cell);
    } else if (dim == 0) {
      hit = w.contains_vertex(cell);
    } else {
      throw WallError("cell dimension must be 0, 1 or 2");
    }
    count += hit;
  }
  return count;
}

Point chord_end_point(const Ball& ball, int face, const Rational& pos) {
  const ComplexSpec& spec = *ball.spec;
  return side_point(polygon_of(spec, spec.faces[ball.faces[face].q].shape), pos);
}

std::vector<int> refraction_points(const Ball& ball, const Wall& wall) {
  const ComplexSpec& spec = *ball.spec;
  std::vector<int> out;
  for (int pi = 0; pi < static_cast<int>(wall.points.size()); ++pi) {
    const WallPoint& p = wall.points[pi];
    if (!p.is_vertex()) {
      // one direction per chord end at the point: (sheet, cos numerator, |u|^2)
      struct Dir {
        int face, side;
        Q3 dot, norm2;
      };
      std::vector<Dir> dirs;
      for (auto [f, i] : ball.edge_sides[p.edge]) {
        const auto& bf = ball.faces[f];
        const Side& s = spec.faces[bf.q].boundary[i];
        Rational pos = Rational(i) + (s.positive ? p.frac : Rational(1) - p.frac);
        const auto& poly = polygon_of(spec, spec.faces[bf.q].shape);
        int n = static_cast<int>(poly.size());
        Point d = poly[(i + 1) % n] - poly[i];
        if (!s.positive) d = Point{-d.x, -d.y};
        Point here = side_point(poly, pos);
        for (const auto& c : wall.chords) {
          if (c.face != f) continue;
          const Rational* other = nullptr;
          if (c.from_pos == pos) other = &c.to_pos;
          else if (c.to_pos == pos) other = &c.from_pos;
          if (!other) continue;
          Point u = side_point(poly, *other) - here;
          dirs.push_back({f, i, dot(d, u), dot(u, u)});
        }
      }
      bool bent = false;
      for (size_t a = 0; a < dirs.size() && !bent; ++a)
        for (size_t b = a + 1; b < dirs.size() && !bent; ++b) {
          if (dirs[a].face == dirs[b].face && dirs[a].side == dirs[b].side) {
            bent = true;
            continue;
          }
          const Q3 &A = dirs[a].dot, &B = dirs[b].dot;
          bool opposite = (A.sign() == -B.sign());
          bool magnitude = A * A * dirs[b].norm2 == B * B * dirs[a].norm2;
          if (!(opposite && magnitude)) bent = true;
        }
      if (bent) out.push_back(pi);
      continue;
    }
    // vertex point: distances in the link between wall directions
    const int v = p.vertex;
    LinkGraph L = link_at(ball, v);
    const int n = L.node_count();
    std::vector<std::pair<int, double>> dirs;  // (link edge or -1 - node, offset from edge.u)
    for (int e : wall.edges) {
      if (ball.edges[e].tail == v) dirs.emplace_back(-1 - L.index_of(germ_id(e, 0)), 0.0);
      if (ball.edges[e].head == v) dirs.emplace_back(-1 - L.index_of(germ_id(e, 1)), 0.0);
    }
    for (const auto& c : wall.chords) {
      const auto& bf = ball.faces[c.face];
      const auto& poly = polygon_of(spec, spec.faces[bf.q].shape);
      const int m = static_cast<int>(poly.size());
      for (int end = 0; end < 2; ++end) {
        const Rational& pos = end == 0 ? c.from_pos : c.to_pos;
        const Rational& opp = end == 0 ? c.to_pos : c.from_pos;
        if (pos.denominator() != 1) continue;
        int corner = static_cast<int>(pos.numerator());
        if (bf.verts[corner] != v) continue;
        Point out_dir = poly[(corner + 1) % m] - poly[corner];
        Point u = side_point(poly, opp) - poly[corner];
        double ang = std::atan2(cross(out_dir, u).value(), dot(out_dir, u).value());
        int handle = c.face * kCornerStride + corner;
        for (int k = 0; k < L.edge_count(); ++k)
          if (L.edges[k].corner == handle) {
            // link edge runs from the incoming-side germ (u) to the outgoing-side germ (v)
            dirs.emplace_back(k, L.edges[k].weight.radians() - ang);
          }
      }
    }
    auto dist_from = [&](const std::pair<int, double>& d) {
      std::vector<double> dist(n, 1e300);
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
      auto seed = [&](int node, double val) {
        if (val < dist[node]) {
          dist[node] = val;
          pq.push({val, node});
        }
      };
      if (d.first < 0) {
        seed(-1 - d.first, 0.0);
      } else {
        const auto& e = L.edges[d.first];
        seed(e.u, d.second);
        seed(e.v, e.weight.radians() - d.second);
      }
      while (!pq.empty()) {
        auto [dv, x] = pq.top();
        pq.pop();
        if (dv > dist[x]) continue;
        for (const auto& e : L.edges) {
          if (e.u == x) seed(e.v, dv + e.weight.radians());
          if (e.v == x) seed(e.u, dv + e.weight.radians());
        }
      }
      return dist;
    };
    bool bent = false;
    for (size_t a = 0; a < dirs.size() && !bent; ++a) {
      auto da = dist_from(dirs[a]);
      for (size_t b = a + 1; b < dirs.size() && !bent; ++b) {
        double best;
        if (dirs[b].first < 0) {
          best = da[-1 - dirs[b].first];
        } else {
          const auto& e = L.edges[dirs[b].first];
          best = std::min(da[e.u] + dirs[b].second, da[e.v] + e.weight.radians() - dirs[b].second);
          if (dirs[a].first == dirs[b].first) best = std::min(best, std::fabs(dirs[a].second - dirs[b].second));
        }
        if (best < M_PI - 1e-9) bent = true;
      }
    }
    if (bent) out.push_back(pi);
  }
  return out;
}

int bowtie_count(const Ball& ball, const CrossingQuery& q) {
  if (q.patch >= 0 || q.x == q.y) return 0;
  const ComplexSpec& spec = *ball.spec;
  std::set<int> faces;
  for (int e : q.path)
    for (auto [f, i] : ball.edge_sides[e])
      if (spec.faces[ball.faces[f].q].kind == FaceKind::Bowtie) faces.insert(f);
  return static_cast<int>(faces.size());
}

PlaneIntersectionResult classify_plane_intersection(const Ball& ball, const Wall& wall, const FlatPatch& patch) {
  PlaneIntersectionResult r;
  std::vector<std::pair<Point, Point>> segs;
  for (int k = 0; k < static_cast<int>(wall.chords.size()); ++k) {
    const auto& c = wall.chords[k];
    if (!patch.contains_face(c.face)) continue;
    const auto& bf = ball.faces[c.face];
    const int n = static_cast<int>(bf.verts.size());
    auto chart_of = [&](const Rational& pos) {
      int i = static_cast<int>(boost::rational_cast<double>(pos));
      if (Rational(i) > pos) --i;
      Rational t = pos - Rational(i);
      const Point& a = patch.chart.at(bf.verts[i]);
      const Point& b = patch.chart.at(bf.verts[(i + 1) % n]);
      return a + scale(b - a, Q3(t));
    };
    segs.emplace_back(chart_of(c.from_pos), chart_of(c.to_pos));
    r.chords.push_back(k);
  }
  for (const auto& p : wall.points)
    if (p.is_vertex() && patch.chart.count(p.vertex)) {
      // a wall through a patch vertex with no chord in the patch still meets the plane
      if (segs.empty()) {
        r.kind = PlaneIntersection::Violation;
        return r;
      }
    }
  if (segs.empty()) return r;
  Point p0 = segs[0].first, p1 = segs[0].second;
  r.a = p1.y - p0.y;
  r.b = p0.x - p1.x;
  if (!r.b.is_zero()) {
    Q3 s = r.b;
    r.a = r.a / s;
    r.b = Q3(Rational(1));
  } else {
    r.a = Q3(Rational(1));
  }
  r.c = r.a * p0.x + r.b * p0.y;
  r.kind = PlaneIntersection::StraightLine;
  for (size_t k = 0; k < segs.size(); ++k)
    for (const Point* q : {&segs[k].first, &segs[k].second})
      if (!(r.a * q->x + r.b * q->y == r.c)) {
        r.kind = PlaneIntersection::Violation;
        r.witness_chord = r.chords[k];
        return r;
      }
  return r;
}

PlaneIntersectionResult wall_plane_intersection(const Ball& ball, const Wall& wall, const FlatPatch& patch) {
  auto r = classify_plane_intersection(ball, wall, patch);
  if (r.kind == PlaneIntersection::Violation)
    throw WallError("wall " + std::to_string(wall.id) + " meets the flat patch seeded at face " +
                    std::to_string(patch.seed) + " outside a single straight line");
  return r;
}

nlohmann::json walls_inventory_json(const Ball& ball, const std::vector<Wall>& walls) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& w : walls) {
    auto h = wall_homology(w);
    out.push_back({{"id", w.id},
                   {"wall_type", to_string(w.type)},
                   {"points", w.points.size()},
                   {"chords", w.chords.size()},
                   {"edges", w.edges.size()},
                   {"carrier_faces", w.carrier.size()},
                   {"interiorly_complete", w.interiorly_complete},
                   {"betti_1", h.betti_1},
                   {"refraction_points", refraction_points(ball, w).size()}});
  }
  return out;
}

std::string crossing_csv(const Ball& ball, const std::vector<Wall>& walls, const std::vector<Partition>& parts,
                         const std::vector<CrossingQuery>& queries) {
  std::ostringstream os;
  os << "x,y,skeleton_distance,crossing_number,bowtie_count\n";
  for (const auto& q : queries)
    os << q.x << ',' << q.y << ',' << q.path.size() << ',' << crossing_number(walls, parts, q) << ','
       << bowtie_count(ball, q) << '\n';
  return os.str();
}

}  // namespace wallspace
