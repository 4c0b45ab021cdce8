#include "streamguide/planner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace streamguide {

namespace {

void check_query(const WaypointQuery& q, const GridSpec& grid) {
  if (q.ring_radius < 1) throw DomainError("planner: ring radius must be >= 1");
  if (!(q.gamma >= 0.0)) throw DomainError("planner: gamma must be >= 0");
  if (!on_grid(grid, q.current_wp, 1e-6)) {
    std::ostringstream os;
    os << "planner: current waypoint (" << q.current_wp.x() << ", "
       << q.current_wp.y() << ") is not on the grid";
    throw DomainError(os.str());
  }
}

}  // namespace

bool target_in_box(const WaypointQuery& q, const GridSpec& grid) {
  const double cells = std::max(std::abs(q.current_wp.x() - q.target.x()) / grid.spacing_x(),
                                std::abs(q.current_wp.y() - q.target.y()) / grid.spacing_y());
  return cells <= q.ring_radius + 1e-9;
}

std::vector<GridIndex> candidate_ring(const WaypointQuery& q,
                                      const Workspace& w) {
  const GridSpec& g = w.grid;
  check_query(q, g);
  const GridIndex c = nearest_index(g, q.current_wp);
  const int nr = q.ring_radius;
  std::vector<GridIndex> ring;
  ring.reserve(8 * nr);
  for (int m = c.m - nr; m <= c.m + nr; ++m) {
    if (m < 1 || m > g.count_x) continue;
    const bool edge_row = std::abs(m - c.m) == nr;
    for (int n = c.n - nr; n <= c.n + nr; ++n) {
      if (n < 1 || n > g.count_y) continue;
      if (!edge_row && std::abs(n - c.n) != nr) continue;
      const Vec2 p = grid_point(g, m, n);
      const bool blocked = std::any_of(
          w.obstacles.begin(), w.obstacles.end(),
          [&](const Obstacle& o) { return (p - o.position).norm() < o.radius; });
      if (!blocked) ring.push_back({m, n});
    }
  }
  if (ring.empty()) {
    std::ostringstream os;
    os << "planner: no admissible candidate around (" << q.current_wp.x()
       << ", " << q.current_wp.y() << ")";
    throw PlanningStuckError(os.str());
  }
  return ring;
}

WaypointChoice select_next_waypoint(const WaypointQuery& q,
                                    const StreamField& field) {
  const Workspace& w = field.workspace();
  check_query(q, w.grid);
  WaypointChoice best;
  best.spins = field.spins();
  if (target_in_box(q, w.grid)) {
    best.waypoint = q.target;
    best.index = nearest_index(w.grid, q.target);
    best.is_target = true;
    best.distance_term = 0.0;
    return best;
  }

  const double reference = field.psi(q.current_wp);
  bool found = false;
  double best_dist = 0.0;
  for (const GridIndex& idx : candidate_ring(q, w)) {
    const Vec2 p = grid_point(w.grid, idx);
    double psi = 0.0;
    try {
      psi = field.psi(p);
    } catch (const SingularityError&) {
      continue;
    }
    const double stream_term = std::abs(psi - reference);
    const double dist = (p - q.target).norm();
    const double cost = stream_term + q.gamma * dist;
    const bool better =
        !found || std::tie(cost, dist, idx) < std::tie(best.cost, best_dist, best.index);
    if (better) {
      found = true;
      best_dist = dist;
      best.waypoint = p;
      best.index = idx;
      best.cost = cost;
      best.stream_term = stream_term;
      best.distance_term = q.gamma * dist;
    }
  }
  if (!found) {
    throw PlanningStuckError("planner: every candidate is singular");
  }
  return best;
}

WaypointChoice select_next_waypoint(const WaypointQuery& q, const Workspace& w,
                                    double sink_strength) {
  if (target_in_box(q, w.grid)) {
    WaypointChoice c;
    check_query(q, w.grid);
    c.waypoint = q.target;
    c.index = nearest_index(w.grid, q.target);
    c.is_target = true;
    return c;
  }
  return select_next_waypoint(q, StreamField(w, q.current_wp, sink_strength));
}

}  // namespace streamguide
