#pragma once

#include "wallspace/ball.hpp"
#include "wallspace/walls.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace wallspace {

struct Vec2 {
  double x = 0, y = 0;
};

struct DevPolygon {
  int face = -1;
  std::string kind;  // triangle, rhombus, bowtie
  std::vector<Vec2> corners;
};

struct DevPolyline {
  int wall = -1;
  std::string type;
  std::vector<Vec2> points;
};

/// A planar development of some faces with wall traces drawn on it.
struct Development {
  std::string title;
  std::vector<DevPolygon> faces;
  std::vector<DevPolyline> walls;
  std::vector<Vec2> refraction;
  bool overlap = false;  // two unfolded faces overlap in the plane
};

/// Patch faces from the exact chart; one polyline per connected run of a/b/c wall chords.
Development develop_patch(const Ball& ball, const FlatPatch& patch, const std::vector<Wall>& walls);

/// The wall's carrier faces unfolded edge to edge in breadth-first order from the first
/// carrier face; the wall trace and its refraction points are drawn on top.
Development develop_wall_strip(const Ball& ball, const Wall& wall);

struct SvgOptions {
  double scale = 40;   // pixels per unit length
  double margin = 12;  // pixels
};

std::string render_svg(const Development& dev, const SvgOptions& opt = {});

/// Consecutive segments sharing an endpoint are joined into polylines.
std::vector<std::vector<Vec2>> join_segments(const std::vector<std::pair<Vec2, Vec2>>& segs);

}  // namespace wallspace
