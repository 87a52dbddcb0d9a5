#pragma once

#include "wallspace/ball.hpp"
#include "wallspace/complex.hpp"
#include "wallspace/exec.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace wallspace {

/// Ball corner handles stored in LinkEdge::corner: face * kCornerStride + corner index.
constexpr int kCornerStride = 64;

/// Angle-weighted corner graph at a ball vertex. Nodes are ball germs 2*edge+end.
LinkGraph link_at(const Ball& ball, int v);

/// True iff the link at v, relabeled through the quotient tags, is the quotient link
/// of v's image (same germs, same corners, same endpoints and weights).
bool link_matches_quotient(const Ball& ball, int v, const std::vector<LinkGraph>& quotient_links);

struct GirthResult {
  bool acyclic = true;  // no embedded cycle: girth is +infinity
  Angle girth;          // minimal angular length of an embedded cycle
  std::vector<int> cycle_edges;  // link edges of one minimal cycle

  bool passes() const { return acyclic || girth >= Angle(2, 1); }
};

GirthResult check_cat0_link(const LinkGraph& link);

/// Point-line incidence graph of the projective plane over GF(2); weights pi/3.
LinkGraph fano_incidence_graph();

/// Canonical form of the underlying unweighted multigraph (isomorphism invariant and complete).
std::string canonical_form(const LinkGraph& link);
bool isomorphic(const LinkGraph& a, const LinkGraph& b);
bool is_fano_incidence(const LinkGraph& link);

struct SpectralReport {
  std::vector<double> eigenvalues;            // normalized Laplacian, ascending
  std::vector<double> adjacency_eigenvalues;  // ascending
  double lambda_1 = 0;
  bool above_half = false;
  bool regular = false;
  int degree = 0;
  bool ramanujan = false;
};

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations (ascending).
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a, double tol = 1e-12);

/// Spectrum of the underlying simple graph (parallel edges collapsed, loops dropped).
SpectralReport spectrum(const LinkGraph& link);
nlohmann::json spectral_json(const SpectralReport& r);

/// Intersection of a wall with a link: removed nodes, cut points inside corner edges,
/// and corner edges removed entirely.
struct Trace {
  std::set<int> nodes;
  std::map<int, int> cuts;  // link edge -> number of cut points in its interior
  std::set<int> edges;

  bool empty() const { return nodes.empty() && cuts.empty() && edges.empty(); }
};

/// Connected components of the link with the trace removed. Throws std::invalid_argument
/// if the trace refers to nodes or edges outside the link.
int halving_components(const LinkGraph& link, const Trace& trace);

struct HalvingResult {
  int components = 0;
  bool two_sided = false;  // two components, and both meet every removed node and every cut
};

HalvingResult halve(const LinkGraph& link, const Trace& trace);

/// Whether the Remark requires a Fano link at this quotient vertex: it carries a triangle
/// corner, an acute rhombus corner or an acute bow-tie corner.
bool requires_fano(const ComplexSpec& spec, int quotient_vertex);

struct VertexLinkCheck {
  int vertex = -1;
  bool interior = false;
  bool matches_quotient = false;
  GirthResult girth;
  bool fano_required = false;
  bool fano = false;
};

/// Link checks for every ball vertex; the parallel version distributes vertices over threads.
std::vector<VertexLinkCheck> check_ball_links(const Ball& ball, Exec exec = Exec::Parallel);

}  // namespace wallspace
