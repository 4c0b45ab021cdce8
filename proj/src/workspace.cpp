#include "streamguide/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace streamguide {

GridSpec::GridSpec(double lx, double ly, int nx, int ny)
    : length_x(lx), length_y(ly), count_x(nx), count_y(ny) {
  if (!(lx > 0.0) || !(ly > 0.0) || nx < 1 || ny < 1) {
    throw ConfigError("grid: lengths must be positive and counts >= 1");
  }
}

Vec2 grid_point(const GridSpec& grid, int m, int n) {
  if (m < 1 || m > grid.count_x || n < 1 || n > grid.count_y) {
    std::ostringstream os;
    os << "grid index (" << m << ", " << n << ") outside [1, " << grid.count_x
       << "] x [1, " << grid.count_y << "]";
    throw IndexError(os.str());
  }
  return {(m - 1) * grid.spacing_x(), (n - 1) * grid.spacing_y()};
}

namespace {

// Nearest 0-based index along one axis, half-way ties to the lower index.
int nearest_axis(double coord, double spacing, int count) {
  const double t = coord / spacing;
  const double lower = std::floor(t);
  const double frac = t - lower;
  int idx = static_cast<int>(lower);
  if (frac > 0.5 + 1e-9) ++idx;
  return std::clamp(idx, 0, count - 1);
}

}  // namespace

GridIndex nearest_index(const GridSpec& grid, const Vec2& p) {
  if (!p.allFinite() || p.x() < 0.0 || p.y() < 0.0 || p.x() > grid.length_x ||
      p.y() > grid.length_y) {
    std::ostringstream os;
    os << "point (" << p.x() << ", " << p.y() << ") outside workspace [0, "
       << grid.length_x << "] x [0, " << grid.length_y << "]";
    throw BoundsError(os.str());
  }
  return {nearest_axis(p.x(), grid.spacing_x(), grid.count_x) + 1,
          nearest_axis(p.y(), grid.spacing_y(), grid.count_y) + 1};
}

Vec2 snap_to_grid(const GridSpec& grid, const Vec2& p) {
  return grid_point(grid, nearest_index(grid, p));
}

bool on_grid(const GridSpec& grid, const Vec2& p, double tol) {
  try {
    return (snap_to_grid(grid, p) - p).norm() <= tol;
  } catch (const BoundsError&) {
    return false;
  }
}

std::vector<std::pair<int, int>> overlapping_pairs(const Workspace& w) {
  std::vector<std::pair<int, int>> out;
  const int count = static_cast<int>(w.obstacles.size());
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      const Obstacle& a = w.obstacles[i];
      const Obstacle& b = w.obstacles[j];
      if ((a.position - b.position).norm() < a.radius + b.radius) {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

const Workspace& validate(const Workspace& w, OverlapPolicy policy,
                          std::vector<std::string>* warnings) {
  const GridSpec& g = w.grid;
  if (!(g.length_x > 0.0) || !(g.length_y > 0.0) || g.count_x < 1 ||
      g.count_y < 1) {
    throw ConfigError("grid: lengths must be positive and counts >= 1");
  }
  if (!on_grid(g, w.target)) {
    std::ostringstream os;
    os << "target (" << w.target.x() << ", " << w.target.y()
       << ") is not on a grid point";
    throw ConfigError(os.str());
  }
  for (std::size_t i = 0; i < w.obstacles.size(); ++i) {
    const Obstacle& o = w.obstacles[i];
    std::ostringstream os;
    os << "obstacle " << i + 1 << ": ";
    if (!(o.radius > 0.0)) {
      throw ConfigError(os.str() + "radius must be positive");
    }
    if (!(o.influence_range >= o.radius)) {
      throw ConfigError(os.str() + "influence range must be >= radius");
    }
    if (!o.velocity.allFinite() || !std::isfinite(o.vortex_gain)) {
      throw ConfigError(os.str() + "non-finite velocity or vortex gain");
    }
    if (!on_grid(g, o.position)) {
      throw ConfigError(os.str() + "position is not on a grid point");
    }
  }
  for (const auto& [i, j] : overlapping_pairs(w)) {
    std::ostringstream os;
    os << "obstacles " << i + 1 << " and " << j + 1 << " overlap";
    if (policy == OverlapPolicy::reject) throw ConfigError(os.str());
    if (warnings) warnings->push_back(os.str());
  }
  return w;
}

}  // namespace streamguide
