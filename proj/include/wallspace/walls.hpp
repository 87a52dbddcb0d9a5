#pragma once

#include "wallspace/ball.hpp"
#include "wallspace/complex.hpp"
#include "wallspace/exec.hpp"
#include "wallspace/homology.hpp"
#include "wallspace/link.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wallspace {

class WallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point of a wall: a ball vertex, or a cut point strictly inside a ball edge.
struct WallPoint {
  int vertex = -1;
  int edge = -1;
  Rational frac{0};  // along the edge from tail to head

  bool is_vertex() const { return vertex >= 0; }
  friend bool operator==(const WallPoint& a, const WallPoint& b) {
    return a.vertex == b.vertex && a.edge == b.edge && a.frac == b.frac;
  }
  friend bool operator<(const WallPoint& a, const WallPoint& b) {
    if (a.vertex != b.vertex) return a.vertex < b.vertex;
    if (a.edge != b.edge) return a.edge < b.edge;
    return a.frac < b.frac;
  }
};

/// A footprint segment instantiated in a ball face. Positions run around the face
/// perimeter: side i at fraction t sits at i + t.
struct WallChord {
  int face = -1;
  int from = -1, to = -1;  // indices into Wall::points
  Rational from_pos{0}, to_pos{0};
};

struct Wall {
  int id = -1;
  WallType type = WallType::A;
  std::vector<WallPoint> points;   // sorted
  std::vector<WallChord> chords;   // sorted by face
  std::vector<int> edges;          // ball edges contained in the wall (d and transverse walls)
  std::vector<std::pair<int, int>> edge_points;  // point indices of each edge's tail and head
  std::vector<int> carrier;        // ball faces the wall passes through
  bool interiorly_complete = false;
  std::vector<int> incomplete_at;  // points where the wall is not locally two-sided

  int point_index(const WallPoint& p) const;  // -1 if absent
  bool contains_vertex(int v) const;
  bool one_dimensional() const { return chords.empty(); }
};

/// Lifts every footprint into the ball, glues segments at shared points, and returns the
/// connected components ordered by (type, first carrier face, first edge).
std::vector<Wall> extract_walls(const Ball& ball, const ComplexSpec& spec);

/// H1 of the wall graph (points and chords or edges) by Smith normal form.
H1Result wall_homology(const Wall& wall);
bool wall_is_simply_connected(const Wall& wall);

/// Local pieces of the ball minus the wall at one wall point, read off the point's link.
HalvingResult local_halving(const Ball& ball, const Wall& wall, int point);
int local_pieces(const Ball& ball, const Wall& wall, int point);

/// Labels of the pieces of the ball minus one wall. Pieces are vertices off the wall, edge
/// sub-intervals between cut points and face regions between chords.
struct FaceCut {
  std::vector<Rational> breaks;  // perimeter positions of the wall's chord ends, ascending
  std::vector<int> arc_label;    // arc k runs from breaks[k] to breaks[k+1] (cyclically)
};

struct Partition {
  int components = 0;
  std::vector<int> vertex_label;   // -1 for vertices on the wall
  std::vector<int> face_label;     // -1 for faces cut by the wall
  std::map<int, FaceCut> cut_faces;

  /// Label of the face region touching the perimeter position (not a chord end).
  int label_at(int face, const Rational& pos) const;
};

/// Component labels are ranked by the smallest vertex they contain, then by face order.
Partition partition(const Ball& ball, const Wall& wall);
std::vector<Partition> partition_walls(const Ball& ball, const std::vector<Wall>& walls,
                                       Exec exec = Exec::Parallel);

/// Components of the ball minus an interiorly complete wall. Throws WallError otherwise.
int complement_components(const Ball& ball, const Wall& wall);

/// Throws WallError if x or y lies on the wall or the wall is not interiorly complete.
bool separates(const Ball& ball, const Wall& wall, const Partition& part, int x, int y);

struct CrossingQuery {
  int x = -1, y = -1;
  std::vector<int> path;  // ball edges of a shortest 1-skeleton path
  int patch = -1;         // index of a flat patch holding both endpoints, or -1
  Point from, to;         // chart segment when patch >= 0
};

/// Shortest path with ties broken by vertex then edge order; picks the first patch whose
/// chart holds both endpoints.
CrossingQuery make_query(const Ball& ball, int x, int y, const std::vector<FlatPatch>& patches = {});

/// 1-skeleton distances from a vertex (-1 when unreachable).
std::vector<int> skeleton_distances(const Ball& ball, int from);

/// Interiorly complete walls separating the endpoints; walls through an endpoint are skipped.
int crossing_number(const std::vector<Wall>& walls, const std::vector<Partition>& parts,
                    const CrossingQuery& q);

/// Largest integer k with k^2 <= |p - q|^2, decided exactly.
int floor_chart_distance(const Point& p, const Point& q);

struct FlatPairSample {
  int x = -1, y = -1;
  int patch = -1;
  int floor_distance = 0;
  int crossing = 0;
};

/// Pairs of interior vertices charted in a common patch (first patch wins), thinned evenly to
/// at most limit pairs, with exact chart distance and crossing number.
std::vector<FlatPairSample> flat_pair_samples(const Ball& ball, const std::vector<Wall>& walls,
                                              const std::vector<Partition>& parts,
                                              const std::vector<FlatPatch>& patches, std::size_t limit);

struct ProperProfile {
  std::vector<int> min_crossing;                // indexed by skeleton distance; -1 when no pair
  std::vector<std::pair<int, int>> witness;     // least (x, y) attaining the minimum
  std::vector<std::int64_t> pairs;
  std::vector<int> inversions;                  // distances n with min_crossing[n] < min_crossing[n - 1]
};

/// Minimum crossing number over interior vertex pairs at each skeleton distance 1..max_distance.
ProperProfile properness_profile(const Ball& ball, const std::vector<Wall>& walls,
                                 const std::vector<Partition>& parts, int max_distance,
                                 Exec exec = Exec::Parallel);

/// Walls whose carrier contains the cell (dim 0, 1 or 2).
int walls_through_cell(const std::vector<Wall>& walls, int dim, int cell);

/// Per-cell counts for every cell of the ball, indexed [dim][cell].
std::vector<std::vector<int>> walls_through_cells(const Ball& ball, const std::vector<Wall>& walls);

/// Wall points where two wall directions are at link distance < pi.
std::vector<int> refraction_points(const Ball& ball, const Wall& wall);

/// Bow-tie faces with a side on the query path (0 for straight segments in flat patches).
int bowtie_count(const Ball& ball, const CrossingQuery& q);

enum class PlaneIntersection { Empty, StraightLine, Violation };

struct PlaneIntersectionResult {
  PlaneIntersection kind = PlaneIntersection::Empty;
  Q3 a, b, c;                 // line a*x + b*y = c in the patch chart
  std::vector<int> chords;    // wall chords inside the patch
  int witness_chord = -1;     // chord leaving the line (violation)
};

PlaneIntersectionResult classify_plane_intersection(const Ball& ball, const Wall& wall,
                                                    const FlatPatch& patch);
/// Same as classify_plane_intersection but a violation throws WallError.
PlaneIntersectionResult wall_plane_intersection(const Ball& ball, const Wall& wall,
                                                const FlatPatch& patch);

/// Exact chart position of a chord end inside its face polygon.
Point chord_end_point(const Ball& ball, int face, const Rational& pos);

nlohmann::json walls_inventory_json(const Ball& ball, const std::vector<Wall>& walls);
std::string crossing_csv(const Ball& ball, const std::vector<Wall>& walls,
                         const std::vector<Partition>& parts, const std::vector<CrossingQuery>& queries);

}  // namespace wallspace
