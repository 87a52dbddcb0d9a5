#pragma once

#include "wallspace/ball.hpp"
#include "wallspace/exec.hpp"
#include "wallspace/walls.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace wallspace {

class CubulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Side data of the interiorly complete walls over a common sample set: every ball vertex and
/// the midpoint of every elementary perimeter arc of every face.
struct WallSides {
  std::vector<int> walls;  // indices into the wall list, in wall order
  int samples = 0;
  int words = 0;
  std::vector<std::uint64_t> side;    // walls.size() x words: bit set iff the sample lies on side 1
  std::vector<std::uint64_t> placed;  // bit set iff the sample is off the wall

  const std::uint64_t* side_of(int node) const { return side.data() + static_cast<std::size_t>(node) * words; }
  const std::uint64_t* placed_of(int node) const { return placed.data() + static_cast<std::size_t>(node) * words; }
  /// Whether some sample lies on side s of node a and side t of node b.
  bool inhabited(int a, int s, int b, int t) const;
};

/// Throws CubulationError if a complete wall does not split the ball into exactly two sides.
WallSides wall_sides(const Ball& ball, const std::vector<Wall>& walls, const std::vector<Partition>& parts,
                     Exec exec = Exec::Parallel);

/// Nodes are the interiorly complete walls; two walls cross iff all four side intersections
/// are inhabited.
struct CrossingGraph {
  std::vector<int> walls;               // node -> wall index
  std::vector<std::vector<int>> adj;    // sorted neighbour lists
  int node_count() const { return static_cast<int>(walls.size()); }
  int edge_count() const;
  bool adjacent(int a, int b) const;
};

/// Pairs of complete walls that meet in a ball cell; only these can cross.
std::vector<std::pair<int, int>> meeting_pairs(const std::vector<Wall>& walls, const WallSides& sides);

CrossingGraph crossing_graph(const std::vector<Wall>& walls, const WallSides& sides, Exec exec = Exec::Parallel);
CrossingGraph crossing_graph(const Ball& ball, const std::vector<Wall>& walls, const std::vector<Partition>& parts,
                             Exec exec = Exec::Parallel);

struct CliqueResult {
  int size = 0;
  std::vector<int> witness;  // wall indices, ascending
};

/// Exact maximum clique by branch and bound with a greedy colouring bound. The witness is the
/// lexicographically least maximum clique in wall order.
CliqueResult max_crossing_family(const CrossingGraph& g);

struct CubeReport {
  std::vector<std::int64_t> cubes;  // cubes[d] = number of d-cubes
  int max_dim = 0;
  int max_crossing_family = 0;
  std::vector<int> witness;         // wall indices
  std::vector<int> witness_cube;    // wall indices of one top-dimensional cube
};

struct CubulationOptions {
  std::size_t state_cap = 2000000;  // 0-cubes before giving up
  Exec exec = Exec::Parallel;
};

/// Basepoint-principal Sageev dual of the complete walls: 0-cubes are consistent orientations
/// reached from the base vertex orientation by single flips; a d-cube is a consistent
/// orientation together with d pairwise crossing walls that all point toward the base there and
/// can all be flipped.
CubeReport dual_cube_complex(const Ball& ball, const std::vector<Wall>& walls, const std::vector<Partition>& parts,
                             const CubulationOptions& opt = {});

nlohmann::json cube_report_json(const CubeReport& r, const std::vector<Wall>& walls);

}  // namespace wallspace
