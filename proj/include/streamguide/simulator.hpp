#ifndef STREAMGUIDE_SIMULATOR_HPP
#define STREAMGUIDE_SIMULATOR_HPP

#include <optional>
#include <string>
#include <vector>

#include "streamguide/control.hpp"
#include "streamguide/pathgen.hpp"
#include "streamguide/planner.hpp"
#include "streamguide/vessel.hpp"
#include "streamguide/workspace.hpp"

namespace streamguide {

enum class ObstacleMode { constant_velocity, stream_guided };

struct SimConfig {
  double dt = 0.01;
  double t_max = 600.0;
  double delta = 0.01;  ///< arrival threshold
  ObstacleMode obstacle_mode = ObstacleMode::constant_velocity;

  void validate() const;
  bool operator==(const SimConfig&) const = default;
};

/// Everything one closed-loop run needs.
struct Scenario {
  std::string name;
  std::string description;
  Workspace workspace;
  VesselState vessel0;
  /// Destinations of stream-guided target ships, one entry per obstacle.
  std::vector<std::optional<Vec2>> obstacle_targets;
  PlannerParams planner;
  PathParams path;
  ControlGains gains;
  VesselParams vessel;
  SimConfig sim;

  bool operator==(const Scenario& o) const {
    return name == o.name && description == o.description &&
           workspace == o.workspace && vessel0.position == o.vessel0.position &&
           vessel0.heading == o.vessel0.heading && vessel0.nu == o.vessel0.nu &&
           obstacle_targets == o.obstacle_targets && planner == o.planner &&
           path == o.path && gains == o.gains && vessel == o.vessel && sim == o.sim;
  }
};

/// Snaps the target, obstacle positions, target-ship destinations and the
/// vessel start onto the grid, then validates. Snap distances and overlap
/// warnings are appended to `notes`.
Scenario prepare(const Scenario& raw, std::vector<std::string>* notes = nullptr);

struct TelemetryRow {
  double t = 0.0;
  double s = 0.0;
  int k = 1;
  double theta = 0.0;
  Vec2 p = Vec2::Zero();
  double psi = 0.0;
  Vec3 nu = Vec3::Zero();
  Vec2 p_d = Vec2::Zero();
  double psi_d = 0.0;
  Vec2 z_p = Vec2::Zero();
  double z_psi = 0.0;
  Vec3 z_nu = Vec3::Zero();
  double omega = 0.0;
  Vec3 tau = Vec3::Zero();
  std::vector<Vec2> obstacles;
};

struct PlanningRecord {
  int step = 0;  ///< index k of WP_k
  double t = 0.0;
  Vec2 from = Vec2::Zero();
  Vec2 to = Vec2::Zero();
  bool is_target = false;
  double cost = 0.0;
  double stream_term = 0.0;
  double distance_term = 0.0;
  std::vector<VortexSpin> spins;
  Workspace snapshot;  ///< obstacles as seen when planning
  double alpha = 0.0;  ///< chord angle of the new segment
};

enum class Outcome { reached, timeout, fault };
const char* to_string(Outcome o);

struct ObstacleReport {
  double min_clearance = 0.0;  ///< to the obstacle centre
  double time_of_closest_approach = 0.0;
  Vec2 own_at_cpa = Vec2::Zero();
  Vec2 obstacle_at_cpa = Vec2::Zero();
  Vec2 obstacle_velocity_at_cpa = Vec2::Zero();
  double own_heading_at_cpa = 0.0;
};

struct RunTrace {
  Scenario scenario;  ///< prepared (snapped) scenario
  std::vector<TelemetryRow> rows;
  std::vector<PlanningRecord> planning;
  std::vector<BezierSegment> segments;
  std::vector<Vec2> waypoints;
  std::vector<ObstacleReport> obstacles;
  std::vector<std::string> notes;
  Outcome outcome = Outcome::timeout;
  std::string fault;
  double arrival_time = -1.0;
  double path_length = 0.0;
  double max_cross_track = 0.0;  ///< max |z_p|
  double final_distance = 0.0;
};

/// Closed loop: waypoint selection whenever the path parameter enters a new
/// segment, segment construction, backstepping control, RK4 plant step and
/// obstacle propagation, until |p_t - p| < delta, t > t_max or a fault.
RunTrace run(const Scenario& scenario);

enum class Encounter { head_on, overtaking, crossing, stationary };
const char* to_string(Encounter e);

struct EncounterReport {
  double min_clearance = 0.0;
  double time_of_closest_approach = 0.0;
  /// Side of the own ship on which the obstacle lies at closest approach.
  bool on_port_side = false;
  /// Own ship ahead of the obstacle along the obstacle's course at closest
  /// approach (positive projection on its velocity).
  bool own_ship_ahead = false;
  Encounter encounter = Encounter::crossing;
};

/// Encounter classification uses the initial geometry (own course toward the
/// target against each obstacle's initial velocity).
std::vector<EncounterReport> colregs_metrics(const RunTrace& trace);

}  // namespace streamguide

#endif  // STREAMGUIDE_SIMULATOR_HPP
