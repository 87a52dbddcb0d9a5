#pragma once

#include "wallspace/exact.hpp"

#include <json.hpp>

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wallspace {

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Shape {
  std::string name;
  std::vector<Rational> sides;
  std::vector<Angle> corners;  // corner i sits between side i-1 and side i
};

enum class FaceKind { Triangle, Rhombus, Bowtie };

std::string to_string(FaceKind k);

struct Side {
  int edge = -1;
  bool positive = true;  // edge runs from corner i to corner i+1
};

struct FaceSpec {
  std::string name;
  int shape = -1;
  std::vector<Side> boundary;
  FaceKind kind = FaceKind::Triangle;
};

enum class WallType { A, B, C, D, Transverse };

constexpr std::array<WallType, 5> kWallTypes = {WallType::A, WallType::B, WallType::C, WallType::D,
                                                WallType::Transverse};

std::string to_string(WallType t);
WallType wall_type_from_string(const std::string& s);

/// Point on a face boundary: a polygon corner, or a rational position along a side.
struct Anchor {
  bool is_vertex = false;
  int index = 0;  // corner index or side index
  Rational frac{0};

  friend bool operator==(const Anchor& a, const Anchor& b) {
    return a.is_vertex == b.is_vertex && a.index == b.index && a.frac == b.frac;
  }
};

struct Segment {
  Anchor from, to;
};

struct FootprintEntry {
  int face = -1;
  std::vector<Segment> segments;
  bool whole_cell = false;
};

struct WallFootprint {
  WallType type = WallType::A;
  std::vector<FootprintEntry> entries;
};

struct ComplexSpec {
  std::string name;
  std::vector<Shape> shapes;
  std::vector<std::string> edges;
  std::vector<FaceSpec> faces;
  std::vector<WallFootprint> footprints;
  nlohmann::json metadata = nlohmann::json::object();

  int corner_count() const;
  int corner_id(int face, int i) const;
  const Shape& shape_of(int face) const { return shapes[faces[face].shape]; }
  int sides(int face) const { return static_cast<int>(faces[face].boundary.size()); }
};

ComplexSpec parse_complex_spec(const std::string& text);
ComplexSpec load_complex_spec(const std::string& path);
std::string serialize_complex_spec(const ComplexSpec& spec);

/// Germ = (edge, end); end 0 is the tail, 1 the head.
inline int germ_id(int edge, int end) { return 2 * edge + end; }
inline int germ_edge(int germ) { return germ / 2; }
inline int germ_end(int germ) { return germ % 2; }

/// Which end of the side's edge sits at the given corner of the face.
int side_end_at_corner(const Side& s, bool at_start_corner);

/// Gluing data of the quotient complex: vertices are orbits of polygon corners.
struct Quotient {
  int vertex_count = 0;
  std::vector<std::vector<int>> corner_vertex;  // [face][corner]
  std::vector<std::array<int, 2>> edge_vertex;   // [edge][end]
  std::vector<std::vector<int>> vertex_corners;  // global corner ids per vertex
  std::vector<int> edge_multiplicity;            // number of face sides on each edge

  int euler_characteristic(int faces) const {
    return vertex_count - static_cast<int>(edge_vertex.size()) + faces;
  }
};

Quotient quotient_of(const ComplexSpec& spec);

struct ShapeResidual {
  std::string shape;
  double residual = 0;
  bool closes = false;
  bool angle_sum_exact = false;
};

struct EdgeLengthCheck {
  std::string label;
  bool consistent = true;
  std::vector<Rational> lengths;
};

struct ValidationReport {
  std::vector<ShapeResidual> shapes;
  std::vector<EdgeLengthCheck> edges;
  int vertex_count = 0;
  int edge_count = 0;
  int face_count = 0;
  std::vector<std::vector<int>> vertex_orbits;
  bool ok() const;
};

constexpr double kClosureTolerance = 1e-9;

double closure_residual(const Shape& shape);
ValidationReport validate_geometry(const ComplexSpec& spec);

/// Exact planar polygon for a shape whose angles are multiples of pi/6; corner 0 at the
/// origin, side 0 along the positive x axis.
bool exact_polygon(const Shape& shape, std::vector<Point>& corners);

struct LinkEdge {
  int u = -1, v = -1;
  Angle weight;
  int corner = -1;  // global corner id (quotient) or ball corner handle
};

/// Angle-weighted corner graph at a vertex; multigraph allowed.
struct LinkGraph {
  int vertex = -1;
  std::vector<int> nodes;  // germ id (quotient) or ball-edge germ id
  std::vector<LinkEdge> edges;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int index_of(int germ) const;
};

std::vector<LinkGraph> base_links(const ComplexSpec& spec);

}  // namespace wallspace
