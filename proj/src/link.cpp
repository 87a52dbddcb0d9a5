#include "wallspace/link.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace wallspace {

LinkGraph link_at(const Ball& ball, int v) {
  if (v < 0 || v >= ball.vertex_count()) throw std::out_of_range("vertex " + std::to_string(v) + " not in ball");
  const ComplexSpec& spec = *ball.spec;
  LinkGraph L;
  L.vertex = v;
  for (auto [e, end] : ball.germs_at(v)) L.nodes.push_back(germ_id(e, end));
  for (auto [f, i] : ball.vertex_corners[v]) {
    const auto& bf = ball.faces[f];
    const auto& face = spec.faces[bf.q];
    int n = static_cast<int>(bf.edges.size());
    int s_in = (i + n - 1) % n;
    int g1 = germ_id(bf.edges[s_in], side_end_at_corner(face.boundary[s_in], false));
    int g2 = germ_id(bf.edges[i], side_end_at_corner(face.boundary[i], true));
    L.edges.push_back({L.index_of(g1), L.index_of(g2), spec.shape_of(bf.q).corners[i], f * kCornerStride + i});
  }
  return L;
}

bool link_matches_quotient(const Ball& ball, int v, const std::vector<LinkGraph>& quotient_links) {
  const ComplexSpec& spec = *ball.spec;
  LinkGraph L = link_at(ball, v);
  const LinkGraph& Q = quotient_links.at(ball.vertices[v].q);
  if (L.node_count() != Q.node_count() || L.edge_count() != Q.edge_count()) return false;
  auto lift = [&](int germ) { return germ_id(ball.edges[germ_edge(germ)].q, germ_end(germ)); };
  std::vector<int> ln, qn(Q.nodes);
  for (int g : L.nodes) ln.push_back(lift(g));
  std::sort(ln.begin(), ln.end());
  std::sort(qn.begin(), qn.end());
  if (ln != qn || std::adjacent_find(ln.begin(), ln.end()) != ln.end()) return false;
  using Key = std::tuple<int, int, int, Rational>;
  std::vector<Key> lk, qk;
  for (const auto& e : L.edges) {
    int f = e.corner / kCornerStride, i = e.corner % kCornerStride;
    lk.emplace_back(spec.corner_id(ball.faces[f].q, i), lift(L.nodes[e.u]), lift(L.nodes[e.v]), e.weight.coef);
  }
  for (const auto& e : Q.edges) qk.emplace_back(e.corner, Q.nodes[e.u], Q.nodes[e.v], e.weight.coef);
  std::sort(lk.begin(), lk.end());
  std::sort(qk.begin(), qk.end());
  return lk == qk;
}

GirthResult check_cat0_link(const LinkGraph& link) {
  GirthResult best;
  const int n = link.node_count();
  std::vector<std::vector<int>> inc(n);
  for (int k = 0; k < link.edge_count(); ++k) {
    inc[link.edges[k].u].push_back(k);
    if (link.edges[k].v != link.edges[k].u) inc[link.edges[k].v].push_back(k);
  }
  auto offer = [&](const Rational& len, std::vector<int> cyc) {
    if (best.acyclic || len < best.girth.coef) {
      best.acyclic = false;
      best.girth = Angle(len);
      best.cycle_edges = std::move(cyc);
    }
  };
  for (int k = 0; k < link.edge_count(); ++k) {
    const auto& ek = link.edges[k];
    if (ek.u == ek.v) {
      offer(ek.weight.coef, {k});
      continue;
    }
    // shortest u -> v path avoiding edge k, by exact Dijkstra
    std::vector<Rational> dist(n);
    std::vector<char> seen(n, 0), done(n, 0);
    std::vector<int> via(n, -1);
    using Item = std::pair<Rational, int>;
    auto cmp = [](const Item& a, const Item& b) { return b.first < a.first || (a.first == b.first && a.second > b.second); };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
    dist[ek.u] = Rational(0);
    seen[ek.u] = 1;
    pq.push({Rational(0), ek.u});
    while (!pq.empty()) {
      auto [d, x] = pq.top();
      pq.pop();
      if (done[x]) continue;
      done[x] = 1;
      if (x == ek.v) break;
      if (!best.acyclic && d + ek.weight.coef >= best.girth.coef) break;
      for (int j : inc[x]) {
        if (j == k) continue;
        const auto& ej = link.edges[j];
        int y = ej.u == x ? ej.v : ej.u;
        Rational nd = d + ej.weight.coef;
        if (!seen[y] || nd < dist[y]) {
          seen[y] = 1;
          dist[y] = nd;
          via[y] = j;
          pq.push({nd, y});
        }
      }
    }
    if (!done[ek.v]) continue;
    std::vector<int> cyc{k};
    for (int x = ek.v; x != ek.u;) {
      int j = via[x];
      cyc.push_back(j);
      x = link.edges[j].u == x ? link.edges[j].v : link.edges[j].u;
    }
    offer(dist[ek.v] + ek.weight.coef, std::move(cyc));
  }
  return best;
}

LinkGraph fano_incidence_graph() {
  LinkGraph g;
  for (int i = 0; i < 14; ++i) g.nodes.push_back(i);
  // points and lines are the nonzero vectors of GF(2)^3; incidence is orthogonality
  for (int p = 1; p < 8; ++p)
    for (int l = 1; l < 8; ++l)
      if (__builtin_popcount(p & l) % 2 == 0) g.edges.push_back({p - 1, 7 + l - 1, Angle(1, 3), -1});
  return g;
}

namespace {

using Matrix = std::vector<std::vector<int>>;

Matrix multiplicity_matrix(const LinkGraph& g) {
  Matrix m(g.node_count(), std::vector<int>(g.node_count(), 0));
  for (const auto& e : g.edges) {
    ++m[e.u][e.v];
    if (e.u != e.v) ++m[e.v][e.u];
  }
  return m;
}

// equitable refinement; colors are renumbered 0..k-1 by sorted signature
std::vector<int> refine(const Matrix& m, std::vector<int> color) {
  const int n = static_cast<int>(m.size());
  int classes = -1;
  while (true) {
    std::vector<std::pair<std::vector<int>, int>> sig(n);
    for (int v = 0; v < n; ++v) {
      auto& s = sig[v].first;
      s.push_back(color[v]);
      std::vector<std::pair<int, int>> nb;
      for (int w = 0; w < n; ++w)
        if (m[v][w]) nb.emplace_back(color[w], m[v][w]);
      std::sort(nb.begin(), nb.end());
      for (auto [c, k] : nb) {
        s.push_back(c);
        s.push_back(k);
      }
      sig[v].second = v;
    }
    std::vector<std::vector<int>> distinct;
    for (auto& s : sig) distinct.push_back(s.first);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (int v = 0; v < n; ++v)
      color[v] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), sig[v].first) - distinct.begin());
    if (static_cast<int>(distinct.size()) == classes) return color;
    classes = static_cast<int>(distinct.size());
  }
}

void search(const Matrix& m, std::vector<int> color, std::string& best) {
  const int n = static_cast<int>(m.size());
  color = refine(m, color);
  std::vector<int> count(n, 0);
  for (int c : color) ++count[c];
  int cell = -1;
  for (int c = 0; c < n; ++c)
    if (count[c] > 1 && (cell < 0 || count[c] < count[cell])) cell = c;
  if (cell < 0) {
    std::vector<int> at(n);
    for (int v = 0; v < n; ++v) at[color[v]] = v;
    std::string s;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += static_cast<char>('0' + std::min(m[at[i]][at[j]], 70));
    if (best.empty() || s < best) best = s;
    return;
  }
  for (int v = 0; v < n; ++v) {
    if (color[v] != cell) continue;
    std::vector<int> next(n);
    for (int w = 0; w < n; ++w) next[w] = 2 * color[w] + 1;
    next[v] = 2 * cell;
    search(m, next, best);
  }
}

}  // namespace

std::string canonical_form(const LinkGraph& link) {
  Matrix m = multiplicity_matrix(link);
  std::string best;
  if (link.node_count() > 0) search(m, std::vector<int>(link.node_count(), 0), best);
  return std::to_string(link.node_count()) + ":" + best;
}

bool isomorphic(const LinkGraph& a, const LinkGraph& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
  return canonical_form(a) == canonical_form(b);
}

bool is_fano_incidence(const LinkGraph& link) {
  static const std::string fano = canonical_form(fano_incidence_graph());
  if (link.node_count() != 14 || link.edge_count() != 21) return false;
  return canonical_form(link) == fano;
}

std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a, double tol) {
  const int n = static_cast<int>(a.size());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) off += a[i][j] * a[i][j];
    if (std::sqrt(off) < tol) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

SpectralReport spectrum(const LinkGraph& link) {
  const int n = link.node_count();
  if (n == 0) throw std::invalid_argument("spectrum of an empty graph");
  std::vector<std::vector<double>> adj(n, std::vector<double>(n, 0));
  for (const auto& e : link.edges)
    if (e.u != e.v) adj[e.u][e.v] = adj[e.v][e.u] = 1;
  std::vector<int> deg(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) deg[i] += adj[i][j] > 0;
  std::vector<int> comp(n, -1);
  std::vector<int> stack{0};
  comp[0] = 0;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y = 0; y < n; ++y)
      if (adj[x][y] > 0 && comp[y] < 0) {
        comp[y] = 0;
        stack.push_back(y);
      }
  }
  if (std::count(comp.begin(), comp.end(), -1) > 0) throw std::invalid_argument("disconnected graph");

  SpectralReport r;
  std::vector<std::vector<double>> lap(n, std::vector<double>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) lap[i][j] = deg[i] > 0 ? 1 : 0;
      else if (adj[i][j] > 0) lap[i][j] = -1 / std::sqrt(static_cast<double>(deg[i]) * deg[j]);
    }
  r.eigenvalues = jacobi_eigenvalues(lap);
  r.lambda_1 = n > 1 ? r.eigenvalues[1] : 0;
  r.above_half = r.lambda_1 > 0.5 + 1e-9;
  r.adjacency_eigenvalues = jacobi_eigenvalues(adj);
  r.degree = *std::max_element(deg.begin(), deg.end());
  r.regular = std::all_of(deg.begin(), deg.end(), [&](int d) { return d == r.degree; });
  if (r.regular) {
    double bound = 2 * std::sqrt(std::max(0, r.degree - 1));
    r.ramanujan = std::all_of(r.adjacency_eigenvalues.begin(), r.adjacency_eigenvalues.end(), [&](double mu) {
      return std::abs(std::abs(mu) - r.degree) < 1e-9 || std::abs(mu) <= bound + 1e-9;
    });
  }
  return r;
}

nlohmann::json spectral_json(const SpectralReport& r) {
  auto fmt = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", std::abs(x) < 1e-13 ? 0.0 : x);
    return std::string(buf);
  };
  nlohmann::json j;
  j["eigenvalues"] = nlohmann::json::array();
  for (double x : r.eigenvalues) j["eigenvalues"].push_back(fmt(x));
  j["lambda_1"] = fmt(r.lambda_1);
  j["above_half"] = r.above_half;
  j["degree"] = r.degree;
  j["regular"] = r.regular;
  j["ramanujan"] = r.ramanujan;
  return j;
}

HalvingResult halve(const LinkGraph& link, const Trace& trace) {
  const int n = link.node_count(), m = link.edge_count();
  for (int v : trace.nodes)
    if (v < 0 || v >= n) throw std::invalid_argument("trace node not in the link");
  for (int e : trace.edges)
    if (e < 0 || e >= m) throw std::invalid_argument("trace edge not in the link");
  for (auto [e, k] : trace.cuts)
    if (e < 0 || e >= m || k < 1) throw std::invalid_argument("trace cut not in the link");

  // pieces: surviving nodes, then the open sub-intervals of every surviving edge
  std::vector<int> first_piece(m, -1);
  int pieces = n;
  for (int e = 0; e < m; ++e) {
    if (trace.edges.count(e)) continue;
    first_piece[e] = pieces;
    auto it = trace.cuts.find(e);
    pieces += 1 + (it == trace.cuts.end() ? 0 : it->second);
  }
  std::vector<int> parent(pieces);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  auto last_piece = [&](int e) {
    auto it = trace.cuts.find(e);
    return first_piece[e] + (it == trace.cuts.end() ? 0 : it->second);
  };
  for (int e = 0; e < m; ++e) {
    if (first_piece[e] < 0) continue;
    if (!trace.nodes.count(link.edges[e].u)) unite(first_piece[e], link.edges[e].u);
    if (!trace.nodes.count(link.edges[e].v)) unite(last_piece(e), link.edges[e].v);
  }
  std::set<int> roots;
  for (int x = 0; x < pieces; ++x) {
    if (x < n && trace.nodes.count(x)) continue;
    roots.insert(find(x));
  }
  HalvingResult out;
  out.components = static_cast<int>(roots.size());
  out.two_sided = out.components == 2;
  for (int v : trace.nodes) {
    std::set<int> seen;
    for (int e = 0; e < m; ++e) {
      if (first_piece[e] < 0) continue;
      if (link.edges[e].u == v) seen.insert(find(first_piece[e]));
      if (link.edges[e].v == v) seen.insert(find(last_piece(e)));
    }
    if (seen.size() != 2) out.two_sided = false;
  }
  for (auto [e, k] : trace.cuts) {
    if (first_piece[e] < 0) continue;
    for (int j = 0; j < k; ++j)
      if (find(first_piece[e] + j) == find(first_piece[e] + j + 1)) out.two_sided = false;
  }
  return out;
}

int halving_components(const LinkGraph& link, const Trace& trace) { return halve(link, trace).components; }

bool requires_fano(const ComplexSpec& spec, int quotient_vertex) {
  Quotient q = quotient_of(spec);
  for (int f = 0; f < static_cast<int>(spec.faces.size()); ++f)
    for (int i = 0; i < spec.sides(f); ++i) {
      if (q.corner_vertex[f][i] != quotient_vertex) continue;
      FaceKind k = spec.faces[f].kind;
      if (k == FaceKind::Triangle) return true;
      if (spec.shape_of(f).corners[i] < Angle(1, 2)) return true;
    }
  return false;
}

std::vector<VertexLinkCheck> check_ball_links(const Ball& ball, Exec exec) {
  const ComplexSpec& spec = *ball.spec;
  auto qlinks = base_links(spec);
  Quotient q = quotient_of(spec);
  std::vector<char> needs(q.vertex_count);
  for (int v = 0; v < q.vertex_count; ++v) needs[v] = requires_fano(spec, v);
  const int n = ball.vertex_count();
  std::vector<VertexLinkCheck> out(n);
  auto one = [&](int v) {
    VertexLinkCheck& c = out[v];
    c.vertex = v;
    c.interior = ball.vertices[v].interior;
    LinkGraph L = link_at(ball, v);
    c.matches_quotient = link_matches_quotient(ball, v, qlinks);
    c.girth = check_cat0_link(L);
    c.fano_required = needs[ball.vertices[v].q];
    c.fano = c.fano_required && is_fano_incidence(L);
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int v = 0; v < n; ++v) one(v);
  } else {
    for (int v = 0; v < n; ++v) one(v);
  }
  return out;
}

}  // namespace wallspace
