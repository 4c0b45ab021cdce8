#ifndef STREAMGUIDE_PLANNER_HPP
#define STREAMGUIDE_PLANNER_HPP

#include <vector>

#include "streamguide/flowfield.hpp"
#include "streamguide/workspace.hpp"

namespace streamguide {

struct PlannerParams {
  double gamma = 0.2;      ///< weight on distance to target
  int ring_radius = 5;     ///< candidate ring half-width in grid cells
  double sink_strength = 1.0;

  bool operator==(const PlannerParams&) const = default;
};

struct WaypointQuery {
  Vec2 current_wp = Vec2::Zero();
  int ring_radius = 5;
  double gamma = 0.2;
  Vec2 target = Vec2::Zero();
};

/// True when `target` lies in the closed box of half-width `ring_radius`
/// cells around `current_wp`.
bool target_in_box(const WaypointQuery& q, const GridSpec& grid);

/// Grid points on the boundary of the search box, clipped to the workspace,
/// without those strictly inside an obstacle disc of `w`. Sorted by (m, n).
/// Throws PlanningStuckError when nothing is left.
std::vector<GridIndex> candidate_ring(const WaypointQuery& q,
                                      const Workspace& w);

struct WaypointChoice {
  Vec2 waypoint = Vec2::Zero();
  GridIndex index;
  bool is_target = false;  ///< target was inside the box
  double cost = 0.0;
  double stream_term = 0.0;    ///< |psi(p) - psi(WP_k)|
  double distance_term = 0.0;  ///< gamma |p - p_t|
  std::vector<VortexSpin> spins;
};

/// Streamline-following waypoint selection over the candidate ring of
/// `field`'s workspace. Ties go to the candidate nearer the target, then to
/// the smaller (m, n).
WaypointChoice select_next_waypoint(const WaypointQuery& q,
                                    const StreamField& field);

/// Convenience form that builds the field (spins from the query geometry).
WaypointChoice select_next_waypoint(const WaypointQuery& q, const Workspace& w,
                                    double sink_strength = 1.0);

}  // namespace streamguide

#endif  // STREAMGUIDE_PLANNER_HPP
