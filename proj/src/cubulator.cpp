#include "wallspace/cubulator.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace wallspace {

namespace {

using Word = std::uint64_t;

bool test_bit(const Word* bits, int i) { return (bits[i >> 6] >> (i & 63)) & 1U; }
void set_bit(Word* bits, int i) { bits[i >> 6] |= Word(1) << (i & 63); }
void flip_bit(Word* bits, int i) { bits[i >> 6] ^= Word(1) << (i & 63); }

// A perimeter point of a wall, used to locate the wall inside another wall's partition.
struct WallAnchor {
  int vertex = -1;
  int face = -1;
  Rational pos{0};
};

WallAnchor wall_anchor(const Ball& ball, const Wall& w) {
  WallAnchor a;
  for (const auto& p : w.points) {
    if (p.is_vertex()) {
      a.vertex = p.vertex;
      return a;
    }
  }
  const WallPoint& p = w.points.front();
  auto [f, i] = ball.edge_sides[p.edge].front();
  const Side& s = ball.spec->faces[ball.faces[f].q].boundary[i];
  a.face = f;
  a.pos = Rational(i) + (s.positive ? p.frac : Rational(1) - p.frac);
  return a;
}

int label_of(const Partition& part, const WallAnchor& a) {
  return a.vertex >= 0 ? part.vertex_label[a.vertex] : part.label_at(a.face, a.pos);
}

// Maximum clique search over sorted adjacency lists.
class CliqueSearch {
 public:
  explicit CliqueSearch(const CrossingGraph& g) : g_(g) {}

  // Size of a maximum clique inside the candidate set (sorted node list).
  int max_in(const std::vector<int>& cand) {
    best_ = 0;
    std::vector<int> r;
    expand(r, cand);
    return best_;
  }

 private:
  const CrossingGraph& g_;
  int best_ = 0;

  std::vector<int> common(const std::vector<int>& p, int v) const {
    std::vector<int> out;
    std::set_intersection(p.begin(), p.end(), g_.adj[v].begin(), g_.adj[v].end(), std::back_inserter(out));
    return out;
  }

  // Greedy sequential colouring; colour[k] bounds the clique size within p[0..k].
  std::vector<int> colour_bound(const std::vector<int>& p) const {
    std::vector<std::vector<int>> classes;
    std::vector<int> bound(p.size());
    for (size_t k = 0; k < p.size(); ++k) {
      size_t c = 0;
      for (; c < classes.size(); ++c) {
        bool clash = false;
        for (int u : classes[c])
          if (g_.adjacent(u, p[k])) {
            clash = true;
            break;
          }
        if (!clash) break;
      }
      if (c == classes.size()) classes.emplace_back();
      classes[c].push_back(p[k]);
      bound[k] = static_cast<int>(c) + 1;
    }
    for (size_t k = 1; k < p.size(); ++k) bound[k] = std::max(bound[k], bound[k - 1]);
    return bound;
  }

  void expand(std::vector<int>& r, std::vector<int> p) {
    if (p.empty()) {
      best_ = std::max(best_, static_cast<int>(r.size()));
      return;
    }
    auto bound = colour_bound(p);
    for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
      if (static_cast<int>(r.size()) + bound[k] <= best_) return;
      int v = p[k];
      r.push_back(v);
      std::vector<int> head(p.begin(), p.begin() + k);
      expand(r, common(head, v));
      r.pop_back();
    }
  }
};

struct VecHash {
  std::size_t operator()(const std::vector<Word>& v) const {
    std::size_t h = 1469598103934665603ULL;
    for (Word w : v) h = (h ^ (w * 0x9E3779B97F4A7C15ULL)) * 1099511628211ULL;
    return h;
  }
};

}  // namespace

bool WallSides::inhabited(int a, int s, int b, int t) const {
  const Word* sa = side_of(a);
  const Word* sb = side_of(b);
  const Word* pa = placed_of(a);
  const Word* pb = placed_of(b);
  for (int k = 0; k < words; ++k) {
    Word x = pa[k] & pb[k] & (s ? sa[k] : ~sa[k]) & (t ? sb[k] : ~sb[k]);
    if (x) return true;
  }
  return false;
}

WallSides wall_sides(const Ball& ball, const std::vector<Wall>& walls, const std::vector<Partition>& parts,
                     Exec exec) {
  WallSides out;
  for (size_t k = 0; k < walls.size(); ++k) {
    if (!walls[k].interiorly_complete) continue;
    if (parts[k].components != 2)
      throw CubulationError("wall " + std::to_string(k) + " has " + std::to_string(parts[k].components) +
                            " sides instead of 2");
    out.walls.push_back(static_cast<int>(k));
  }
  const int V = ball.vertex_count(), F = ball.face_count();
  std::vector<std::vector<Rational>> breaks(F);
  for (int k : out.walls)
    for (const auto& c : walls[k].chords) {
      breaks[c.face].push_back(c.from_pos);
      breaks[c.face].push_back(c.to_pos);
    }
  std::vector<std::pair<int, Rational>> face_samples;
  for (int f = 0; f < F; ++f) {
    const int n = static_cast<int>(ball.faces[f].verts.size());
    auto& b = breaks[f];
    for (int i = 0; i < n; ++i) b.push_back(Rational(i));
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    for (size_t j = 0; j < b.size(); ++j) {
      Rational hi = j + 1 < b.size() ? b[j + 1] : Rational(n);
      face_samples.emplace_back(f, (b[j] + hi) / Rational(2));
    }
  }
  out.samples = V + static_cast<int>(face_samples.size());
  out.words = (out.samples + 63) / 64;
  const int nodes = static_cast<int>(out.walls.size());
  out.side.assign(static_cast<std::size_t>(nodes) * out.words, 0);
  out.placed.assign(static_cast<std::size_t>(nodes) * out.words, 0);

  auto fill = [&](int node) {
    const Partition& part = parts[out.walls[node]];
    Word* side = out.side.data() + static_cast<std::size_t>(node) * out.words;
    Word* placed = out.placed.data() + static_cast<std::size_t>(node) * out.words;
    for (int v = 0; v < V; ++v) {
      int l = part.vertex_label[v];
      if (l < 0) continue;
      set_bit(placed, v);
      if (l == 1) set_bit(side, v);
    }
    for (size_t j = 0; j < face_samples.size(); ++j) {
      int l = part.label_at(face_samples[j].first, face_samples[j].second);
      int bit = V + static_cast<int>(j);
      set_bit(placed, bit);
      if (l == 1) set_bit(side, bit);
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (int node = 0; node < nodes; ++node) fill(node);
  } else {
    for (int node = 0; node < nodes; ++node) fill(node);
  }
  return out;
}

int CrossingGraph::edge_count() const {
  std::size_t s = 0;
  for (const auto& a : adj) s += a.size();
  return static_cast<int>(s / 2);
}

bool CrossingGraph::adjacent(int a, int b) const { return std::binary_search(adj[a].begin(), adj[a].end(), b); }

std::vector<std::pair<int, int>> meeting_pairs(const std::vector<Wall>& walls, const WallSides& sides) {
  // cells keyed by dimension and index
  std::map<std::pair<int, int>, std::vector<int>> at;
  for (int node = 0; node < static_cast<int>(sides.walls.size()); ++node) {
    const Wall& w = walls[sides.walls[node]];
    std::set<std::pair<int, int>> cells;
    for (const auto& p : w.points) cells.insert(p.is_vertex() ? std::pair{0, p.vertex} : std::pair{1, p.edge});
    for (int e : w.edges) cells.insert({1, e});
    for (int f : w.carrier) cells.insert({2, f});
    for (const auto& c : cells) at[c].push_back(node);
  }
  std::set<std::pair<int, int>> pairs;
  for (const auto& [cell, list] : at)
    for (size_t i = 0; i < list.size(); ++i)
      for (size_t j = i + 1; j < list.size(); ++j) pairs.insert({list[i], list[j]});
  return {pairs.begin(), pairs.end()};
}

CrossingGraph crossing_graph(const std::vector<Wall>& walls, const WallSides& sides, Exec exec) {
  CrossingGraph g;
  g.walls = sides.walls;
  g.adj.assign(g.walls.size(), {});
  auto pairs = meeting_pairs(walls, sides);
  std::vector<char> cross(pairs.size(), 0);
  auto test = [&](std::size_t k) {
    auto [a, b] = pairs[k];
    cross[k] = sides.inhabited(a, 0, b, 0) && sides.inhabited(a, 0, b, 1) && sides.inhabited(a, 1, b, 0) &&
               sides.inhabited(a, 1, b, 1);
  };
  const long long m = static_cast<long long>(pairs.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long long k = 0; k < m; ++k) test(static_cast<std::size_t>(k));
  } else {
    for (long long k = 0; k < m; ++k) test(static_cast<std::size_t>(k));
  }
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (cross[k]) {
      g.adj[pairs[k].first].push_back(pairs[k].second);
      g.adj[pairs[k].second].push_back(pairs[k].first);
    }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

CrossingGraph crossing_graph(const Ball& ball, const std::vector<Wall>& walls, const std::vector<Partition>& parts,
                             Exec exec) {
  return crossing_graph(walls, wall_sides(ball, walls, parts, exec), exec);
}

CliqueResult max_crossing_family(const CrossingGraph& g) {
  CliqueResult out;
  const int n = g.node_count();
  if (n == 0) return out;
  CliqueSearch search(g);
  int omega = 1;
  for (int v = 0; v < n; ++v) {
    std::vector<int> up;
    for (int u : g.adj[v])
      if (u > v) up.push_back(u);
    if (static_cast<int>(up.size()) + 1 <= omega) continue;
    omega = std::max(omega, 1 + search.max_in(up));
  }
  // lexicographically least maximum clique: extend by the smallest node that keeps omega reachable
  std::vector<int> chosen;
  std::vector<int> cand(n);
  for (int v = 0; v < n; ++v) cand[v] = v;
  while (static_cast<int>(chosen.size()) < omega) {
    for (size_t k = 0; k < cand.size(); ++k) {
      int v = cand[k];
      std::vector<int> rest;
      for (size_t j = k + 1; j < cand.size(); ++j)
        if (g.adjacent(v, cand[j])) rest.push_back(cand[j]);
      int need = omega - static_cast<int>(chosen.size()) - 1;
      if (static_cast<int>(rest.size()) < need) continue;
      if (need > 0 && search.max_in(rest) < need) continue;
      chosen.push_back(v);
      cand = std::move(rest);
      break;
    }
  }
  out.size = omega;
  for (int v : chosen) out.witness.push_back(g.walls[v]);
  return out;
}

CubeReport dual_cube_complex(const Ball& ball, const std::vector<Wall>& walls, const std::vector<Partition>& parts,
                             const CubulationOptions& opt) {
  const Exec exec = opt.exec;
  WallSides sides = wall_sides(ball, walls, parts, exec);
  CrossingGraph g = crossing_graph(walls, sides, exec);
  const int n = g.node_count();
  const int words = (n + 63) / 64;

  // forbidden quadrant of every non-crossing pair, as bitsets per node:
  // mask[x][w] holds u when (w on side x, u on side y(w)[u]) is empty
  std::vector<Word> mask0(static_cast<std::size_t>(n) * words, 0), mask1(mask0), ybits(mask0);
  auto meet = meeting_pairs(walls, sides);
  std::vector<std::vector<int>> meets(n);
  for (auto [a, b] : meet) {
    meets[a].push_back(b);
    meets[b].push_back(a);
  }
  for (auto& m : meets) std::sort(m.begin(), m.end());
  std::vector<WallAnchor> anchors(n);
  for (int node = 0; node < n; ++node) anchors[node] = wall_anchor(ball, walls[g.walls[node]]);
  std::vector<std::string> errors(n);

  auto relate = [&](int w) {
    Word* m0 = mask0.data() + static_cast<std::size_t>(w) * words;
    Word* m1 = mask1.data() + static_cast<std::size_t>(w) * words;
    Word* y = ybits.data() + static_cast<std::size_t>(w) * words;
    const Partition& pw = parts[g.walls[w]];
    for (int u = 0; u < n; ++u) {
      if (u == w) continue;
      int xs = -1, ys = -1;
      if (std::binary_search(meets[w].begin(), meets[w].end(), u)) {
        if (g.adjacent(w, u)) continue;
        int empty = 0;
        for (int s = 0; s < 2; ++s)
          for (int t = 0; t < 2; ++t)
            if (!sides.inhabited(w, s, u, t)) {
              ++empty;
              xs = s;
              ys = t;
            }
        if (empty != 1) {
          errors[w] = "walls " + std::to_string(g.walls[w]) + " and " + std::to_string(g.walls[u]) + " leave " +
                      std::to_string(empty) + " side intersections empty";
          return;
        }
      } else {
        // disjoint walls: each lies on one side of the other, and the far sides miss each other
        int su = label_of(pw, anchors[u]);
        int sw = label_of(parts[g.walls[u]], anchors[w]);
        if (su < 0 || sw < 0) {
          errors[w] = "walls " + std::to_string(g.walls[w]) + " and " + std::to_string(g.walls[u]) +
                      " meet outside the shared cells";
          return;
        }
        xs = 1 - su;
        ys = 1 - sw;
      }
      set_bit(xs ? m1 : m0, u);
      if (ys) set_bit(y, u);
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (int w = 0; w < n; ++w) relate(w);
  } else {
    for (int w = 0; w < n; ++w) relate(w);
  }
  for (const auto& e : errors)
    if (!e.empty()) throw CubulationError(e);

  // base orientation: the side of the first sample vertex that lies off every complete wall
  auto off_walls = [&](int v) {
    for (int node = 0; node < n; ++node)
      if (!test_bit(sides.placed_of(node), v)) return false;
    return true;
  };
  int base_sample = off_walls(ball.base) ? ball.base : -1;
  for (int v = 0; v < ball.vertex_count() && base_sample < 0; ++v)
    if (off_walls(v)) base_sample = v;
  if (base_sample < 0 && n > 0) throw CubulationError("every ball vertex lies on some wall");
  std::vector<Word> base(words, 0);
  for (int node = 0; node < n; ++node)
    if (test_bit(sides.side_of(node), base_sample)) set_bit(base.data(), node);

  auto flippable = [&](const std::vector<Word>& sigma, int w) {
    int to = 1 - static_cast<int>(test_bit(sigma.data(), w));
    const Word* m = (to ? mask1.data() : mask0.data()) + static_cast<std::size_t>(w) * words;
    const Word* y = ybits.data() + static_cast<std::size_t>(w) * words;
    for (int k = 0; k < words; ++k)
      if (m[k] & ~(sigma[k] ^ y[k])) return false;
    return true;
  };

  std::vector<std::vector<Word>> states{base};
  std::unordered_map<std::vector<Word>, int, VecHash> index{{base, 0}};
  std::vector<std::vector<int>> up;  // per state: flippable walls still oriented like the base
  std::size_t done = 0;
  while (done < states.size()) {
    const std::size_t lo = done, hi = states.size();
    std::vector<std::vector<int>> flips(hi - lo);
    auto expand = [&](std::size_t s) {
      for (int w = 0; w < n; ++w)
        if (flippable(states[s], w)) flips[s - lo].push_back(w);
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
      for (long long s = static_cast<long long>(lo); s < static_cast<long long>(hi); ++s)
        expand(static_cast<std::size_t>(s));
    } else {
      for (std::size_t s = lo; s < hi; ++s) expand(s);
    }
    for (std::size_t s = lo; s < hi; ++s) {
      std::vector<int> u;
      for (int w : flips[s - lo]) {
        std::vector<Word> next = states[s];
        flip_bit(next.data(), w);
        if (test_bit(states[s].data(), w) == test_bit(base.data(), w)) u.push_back(w);
        if (index.count(next)) continue;
        if (states.size() >= opt.state_cap)
          throw CubulationError("cube complex exceeds the cap of " + std::to_string(opt.state_cap) + " vertices");
        index.emplace(next, static_cast<int>(states.size()));
        states.push_back(std::move(next));
      }
      up.push_back(std::move(u));
    }
    done = hi;
  }

  // cubes at their base-facing corner: cliques among the upward flips
  const int S = static_cast<int>(states.size());
  std::vector<std::vector<std::int64_t>> counts(S);
  std::vector<std::vector<int>> top(S);
  std::vector<char> closed(S, 1);
  auto cubes_at = [&](int s) {
    std::vector<std::int64_t>& c = counts[s];
    std::vector<int> r;
    std::function<void(const std::vector<int>&)> rec = [&](const std::vector<int>& cand) {
      if (c.size() <= r.size()) c.resize(r.size() + 1, 0);
      ++c[r.size()];
      if (r.size() > top[s].size()) top[s] = r;
      if (r.size() >= 2) {
        std::vector<Word> corner = states[s];
        for (int w : r) flip_bit(corner.data(), w);
        if (!index.count(corner)) closed[s] = 0;
      }
      for (size_t k = 0; k < cand.size(); ++k) {
        r.push_back(cand[k]);
        std::vector<int> next;
        for (size_t j = k + 1; j < cand.size(); ++j)
          if (g.adjacent(cand[k], cand[j])) next.push_back(cand[j]);
        rec(next);
        r.pop_back();
      }
    };
    rec(up[s]);
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (int s = 0; s < S; ++s) cubes_at(s);
  } else {
    for (int s = 0; s < S; ++s) cubes_at(s);
  }
  for (int s = 0; s < S; ++s)
    if (!closed[s]) throw CubulationError("a family of pairwise crossing flips leaves the cube complex");

  CubeReport rep;
  for (int s = 0; s < S; ++s) {
    if (rep.cubes.size() < counts[s].size()) rep.cubes.resize(counts[s].size(), 0);
    for (size_t d = 0; d < counts[s].size(); ++d) rep.cubes[d] += counts[s][d];
    if (top[s].size() > rep.witness_cube.size()) rep.witness_cube = top[s];
  }
  rep.max_dim = static_cast<int>(rep.cubes.size()) - 1;
  for (int& w : rep.witness_cube) w = g.walls[w];
  std::sort(rep.witness_cube.begin(), rep.witness_cube.end());
  CliqueResult cl = max_crossing_family(g);
  rep.max_crossing_family = cl.size;
  rep.witness = cl.witness;
  return rep;
}

nlohmann::json cube_report_json(const CubeReport& r, const std::vector<Wall>& walls) {
  nlohmann::json types = nlohmann::json::array();
  for (int w : r.witness) types.push_back(to_string(walls[w].type));
  return {{"cubes", r.cubes},
          {"max_dim", r.max_dim},
          {"max_crossing_family", r.max_crossing_family},
          {"witness", r.witness},
          {"witness_types", types},
          {"witness_cube", r.witness_cube}};
}

}  // namespace wallspace
