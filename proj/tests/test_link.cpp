#include "wallspace/ball.hpp"
#include "wallspace/link.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <deque>
#include <random>

using namespace wallspace;

namespace {

std::string fixture(const std::string& name) { return std::string(WS_FIXTURES) + "/" + name; }

/// Heawood graph from its LCF notation [5,-5]^7.
LinkGraph heawood_lcf() {
  LinkGraph g;
  const int n = 14;
  for (int i = 0; i < n; ++i) g.nodes.push_back(100 + i);
  for (int i = 0; i < n; ++i) g.edges.push_back({i, (i + 1) % n, Angle(1, 3), -1});
  for (int i = 0; i < n; i += 2) g.edges.push_back({i, (i + 5) % n, Angle(1, 3), -1});
  return g;
}

LinkGraph cycle(int n, Angle w) {
  LinkGraph g;
  for (int i = 0; i < n; ++i) g.nodes.push_back(i);
  for (int i = 0; i < n; ++i) g.edges.push_back({i, (i + 1) % n, w, -1});
  return g;
}

Eigen::MatrixXd adjacency(const LinkGraph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.node_count(), g.node_count());
  for (const auto& e : g.edges) {
    a(e.u, e.v) = 1;
    a(e.v, e.u) = 1;
  }
  return a;
}

int girth_hops(const LinkGraph& g) {
  int best = 1 << 30;
  const int n = g.node_count();
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(n, -1), parent(n, -1);
    std::deque<int> q{s};
    dist[s] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          parent[w] = v;
          q.push_back(w);
        } else if (parent[v] != w) {
          best = std::min(best, dist[v] + dist[w] + 1);
        }
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("Fano incidence graph: 14 nodes, 21 edges, cubic, girth 6") {
  auto g = fano_incidence_graph();
  CHECK(g.node_count() == 14);
  CHECK(g.edge_count() == 21);
  std::vector<int> deg(14, 0);
  for (const auto& e : g.edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  for (int d : deg) CHECK(d == 3);
  CHECK(girth_hops(g) == 6);
  auto gr = check_cat0_link(g);
  CHECK_FALSE(gr.acyclic);
  CHECK(gr.girth == Angle(2, 1));
  CHECK(gr.passes());
}

TEST_CASE("Fano incidence graph is isomorphic to the LCF Heawood graph") {
  CHECK(isomorphic(fano_incidence_graph(), heawood_lcf()));
  CHECK(is_fano_incidence(heawood_lcf()));
  CHECK_FALSE(is_fano_incidence(cycle(14, Angle(1, 3))));
  // a different cubic graph on 14 nodes: LCF [3,-3]^7
  LinkGraph other;
  for (int i = 0; i < 14; ++i) other.nodes.push_back(i);
  for (int i = 0; i < 14; ++i) other.edges.push_back({i, (i + 1) % 14, Angle(1, 3), -1});
  for (int i = 0; i < 14; i += 2) other.edges.push_back({i, (i + 3) % 14, Angle(1, 3), -1});
  CHECK_FALSE(isomorphic(other, heawood_lcf()));
}

TEST_CASE("canonical form is invariant under relabelling") {
  auto g = heawood_lcf();
  std::vector<int> perm(14);
  for (int i = 0; i < 14; ++i) perm[i] = (5 * i + 3) % 14;
  LinkGraph h = g;
  for (auto& e : h.edges) {
    e.u = perm[e.u];
    e.v = perm[e.v];
  }
  CHECK(canonical_form(g) == canonical_form(h));
}

TEST_CASE("Heawood spectrum against a dense eigensolve and the characteristic polynomial") {
  auto g = fano_incidence_graph();
  Eigen::MatrixXd a = adjacency(g);
  // (A^2 - 9)(A^2 - 2) = 0 exactly: eigenvalues +-3 and +-sqrt 2
  Eigen::MatrixXi ai = a.cast<int>();
  Eigen::MatrixXi a2 = ai * ai;
  Eigen::MatrixXi id = Eigen::MatrixXi::Identity(14, 14);
  CHECK(((a2 - 9 * id) * (a2 - 2 * id)).cwiseAbs().maxCoeff() == 0);

  Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(14, 14) - a / 3.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
  Eigen::VectorXd ev = es.eigenvalues();
  const double lambda1 = 1 - std::sqrt(2.0) / 3;
  CHECK(ev(1) == doctest::Approx(lambda1).epsilon(1e-12));

  auto r = spectrum(g);
  REQUIRE(r.eigenvalues.size() == 14);
  for (int i = 0; i < 14; ++i) CHECK(std::abs(r.eigenvalues[i] - ev(i)) < 1e-9);
  CHECK(std::abs(r.lambda_1 - lambda1) < 1e-9);
  CHECK(r.above_half);
  CHECK(r.regular);
  CHECK(r.degree == 3);
  CHECK(r.ramanujan);
}

TEST_CASE("cycles: C6 sits exactly at one half and is not above it") {
  auto r = spectrum(cycle(6, Angle(1, 3)));
  CHECK(std::abs(r.lambda_1 - 0.5) < 1e-9);
  CHECK_FALSE(r.above_half);
  CHECK(r.ramanujan);
}

TEST_CASE("Jacobi eigenvalues agree with Eigen on a random symmetric matrix") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-1, 1);
  const int n = 12;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = d(rng);
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
  auto mine = jacobi_eigenvalues(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  for (int i = 0; i < n; ++i) CHECK(std::abs(mine[i] - es.eigenvalues()(i)) < 1e-9);
}

TEST_CASE("CAT(0) girth in rational multiples of pi") {
  CHECK_FALSE(check_cat0_link(cycle(3, Angle(1, 3))).passes());
  CHECK(check_cat0_link(cycle(3, Angle(1, 3))).girth == Angle(1, 1));
  CHECK(check_cat0_link(cycle(6, Angle(1, 3))).passes());
  CHECK(check_cat0_link(cycle(4, Angle(1, 2))).girth == Angle(2, 1));
  LinkGraph path;
  path.nodes = {0, 1, 2};
  path.edges = {{0, 1, Angle(1, 3), -1}, {1, 2, Angle(1, 3), -1}};
  auto g = check_cat0_link(path);
  CHECK(g.acyclic);
  CHECK(g.passes());
}

TEST_CASE("halving a hexagon at two opposite nodes") {
  auto g = cycle(6, Angle(1, 3));
  Trace t;
  t.nodes = {0, 3};
  auto h = halve(g, t);
  CHECK(h.components == 2);
  CHECK(h.two_sided);
  Trace adjacent;
  adjacent.nodes = {0, 1};
  // the open edge between the two removed nodes is a piece of its own
  CHECK(halving_components(g, adjacent) == 2);
  adjacent.edges = {0};
  CHECK(halving_components(g, adjacent) == 1);
  Trace cuts;
  cuts.cuts = {{0, 1}, {3, 1}};
  CHECK(halve(g, cuts).components == 2);
  Trace bad;
  bad.nodes = {9};
  CHECK_THROWS_AS(halving_components(g, bad), std::invalid_argument);
}

TEST_CASE("the Fano link stays connected after removing one node") {
  auto g = fano_incidence_graph();
  Trace t;
  t.nodes = {0};
  CHECK(halving_components(g, t) == 1);
}

TEST_CASE("ball links: serial and parallel agree; interior links match the quotient") {
  auto spec = load_complex_spec(fixture("v_bowtie.complex"));
  auto b = build_ball(spec, 2, 0);
  auto s = check_ball_links(b, Exec::Serial);
  auto p = check_ball_links(b, Exec::Parallel);
  REQUIRE(s.size() == p.size());
  for (size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].interior == p[i].interior);
    CHECK(s[i].matches_quotient == p[i].matches_quotient);
    CHECK(s[i].girth.girth == p[i].girth.girth);
    CHECK(s[i].fano == p[i].fano);
    if (!s[i].interior) continue;
    CHECK(s[i].matches_quotient);
    CHECK(s[i].girth.passes());
    if (s[i].fano_required) CHECK(s[i].fano);
  }
}

TEST_CASE("quotient links of v_bowtie: P and Q are Fano") {
  auto spec = load_complex_spec(fixture("v_bowtie.complex"));
  auto links = base_links(spec);
  int fano = 0;
  for (const auto& l : links) {
    if (!requires_fano(spec, l.vertex)) continue;
    CHECK(is_fano_incidence(l));
    ++fano;
  }
  CHECK(fano == 2);
}
