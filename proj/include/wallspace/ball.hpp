#pragma once

#include "wallspace/complex.hpp"
#include "wallspace/homology.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace wallspace {

class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BallVertex {
  int q = -1;  // quotient vertex
  int dist = 0;
  bool interior = false;
};

struct BallEdge {
  int q = -1;  // quotient edge; orientation tail -> head matches the quotient edge
  int tail = -1, head = -1;
  bool interior = false;
};

struct BallFace {
  int q = -1;  // quotient face
  std::vector<int> verts;  // corner i
  std::vector<int> edges;  // side i, oriented as in the quotient boundary word
  bool interior = false;
};

/// Finite development of the universal cover: the full subcomplex on vertices at
/// 1-skeleton distance <= radius from the base.
struct Ball {
  int radius = 0;
  int base = 0;
  int base_q = 0;
  std::shared_ptr<const ComplexSpec> spec;
  std::vector<BallVertex> vertices;
  std::vector<BallEdge> edges;
  std::vector<BallFace> faces;

  std::vector<std::vector<std::pair<int, int>>> vertex_corners;  // (face, corner)
  std::vector<std::vector<int>> vertex_edges;
  std::vector<std::vector<std::pair<int, int>>> edge_sides;  // (face, side)

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
  std::size_t cell_count() const { return vertices.size() + edges.size() + faces.size(); }
  /// Ball edge ending at v with the given end (0 tail, 1 head) for each edge at v.
  std::vector<std::pair<int, int>> germs_at(int v) const;
  int other_end(int e, int v) const { return edges[e].tail == v ? edges[e].head : edges[e].tail; }
};

struct BuildOptions {
  std::size_t cell_cap = 5'000'000;
};

/// Development by breadth-first star completion; a new corner is identified with an
/// existing one exactly when the quotient link forces it (union-find folding).
Ball build_ball(const ComplexSpec& spec, int radius, int base_vertex, const BuildOptions& opt = {});

H1Result homology_h1(const Ball& ball);
/// H1 of the quotient complex itself.
H1Result quotient_homology_h1(const ComplexSpec& spec);

/// Ball export as JSON (deterministic order).
std::string export_ball_json(const Ball& ball);

struct FlatPatch {
  int seed = -1;
  std::vector<int> faces;                 // ball faces, all triangles
  std::map<int, Point> chart;             // ball vertex -> exact plane coordinates
  int radius = 0;                         // hop radius of the face adjacency from the seed
  std::vector<int> interior_vertices;     // vertices surrounded by six patch triangles
  bool contains_face(int f) const;
};

/// Maximal flat patch grown from a triangular seed face.
FlatPatch develop_flat_plane(const Ball& ball, const ComplexSpec& spec, int seed);

/// Every maximal patch, seeded at each triangle not yet covered (deterministic).
std::vector<FlatPatch> maximal_flat_patches(const Ball& ball, const ComplexSpec& spec);

}  // namespace wallspace
