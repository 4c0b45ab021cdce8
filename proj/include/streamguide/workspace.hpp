#ifndef STREAMGUIDE_WORKSPACE_HPP
#define STREAMGUIDE_WORKSPACE_HPP

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "streamguide/errors.hpp"

namespace streamguide {

using Vec2 = Eigen::Vector2d;

/// Regular grid over [0, L_x) x [0, L_y) in the North-East frame (x north,
/// y east). Grid point (m, n), 1-based, sits at ((m-1) d_x, (n-1) d_y).
struct GridSpec {
  double length_x = 20.0;
  double length_y = 20.0;
  int count_x = 100;
  int count_y = 100;

  GridSpec() = default;
  GridSpec(double lx, double ly, int nx, int ny);

  double spacing_x() const { return length_x / count_x; }
  double spacing_y() const { return length_y / count_y; }
  long total_points() const { return static_cast<long>(count_x) * count_y; }

  /// Largest coordinate reachable by a grid point.
  double max_x() const { return (count_x - 1) * spacing_x(); }
  double max_y() const { return (count_y - 1) * spacing_y(); }

  bool operator==(const GridSpec&) const = default;
};

/// 1-based grid index pair.
struct GridIndex {
  int m = 1;
  int n = 1;
  bool operator==(const GridIndex&) const = default;
  auto operator<=>(const GridIndex&) const = default;
};

struct Obstacle {
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  double radius = 1.5;
  double influence_range = 1.5;
  double vortex_gain = 0.0;
  bool colregs_compliant = false;

  bool operator==(const Obstacle& o) const {
    return position == o.position && velocity == o.velocity &&
           radius == o.radius && influence_range == o.influence_range &&
           vortex_gain == o.vortex_gain &&
           colregs_compliant == o.colregs_compliant;
  }
};

struct Workspace {
  GridSpec grid;
  Vec2 target = Vec2::Zero();
  std::vector<Obstacle> obstacles;

  bool operator==(const Workspace& o) const {
    return grid == o.grid && target == o.target && obstacles == o.obstacles;
  }
};

Vec2 grid_point(const GridSpec& grid, int m, int n);
inline Vec2 grid_point(const GridSpec& grid, GridIndex idx) {
  return grid_point(grid, idx.m, idx.n);
}

/// Index of the nearest grid point; exact half-cell ties go to the smaller
/// index. Throws BoundsError when `p` lies outside [0, L).
GridIndex nearest_index(const GridSpec& grid, const Vec2& p);
Vec2 snap_to_grid(const GridSpec& grid, const Vec2& p);

/// True when `p` coincides with a grid point up to `tol` meters.
bool on_grid(const GridSpec& grid, const Vec2& p, double tol = 1e-9);

/// Pairs (0-based) of obstacles whose discs overlap.
std::vector<std::pair<int, int>> overlapping_pairs(const Workspace& w);

enum class OverlapPolicy { reject, warn };

/// Checks every invariant of the workspace and returns it unchanged.
/// Throws ConfigError naming the first offending item. With
/// OverlapPolicy::warn, overlapping discs are appended to `warnings` instead.
const Workspace& validate(const Workspace& w,
                          OverlapPolicy policy = OverlapPolicy::reject,
                          std::vector<std::string>* warnings = nullptr);

}  // namespace streamguide

#endif  // STREAMGUIDE_WORKSPACE_HPP
