#include "streamguide/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "streamguide/flowfield.hpp"

namespace streamguide {

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("sim: dt must be > 0");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("sim: t_max must be > 0");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("planner: delta must be > 0");
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::reached: return "reached";
    case Outcome::timeout: return "timeout";
    case Outcome::fault: return "fault";
  }
  return "unknown";
}

const char* to_string(Encounter e) {
  switch (e) {
    case Encounter::head_on: return "head-on";
    case Encounter::overtaking: return "overtaking";
    case Encounter::crossing: return "crossing";
    case Encounter::stationary: return "stationary";
  }
  return "unknown";
}

namespace {

std::string describe_snap(const char* what, const Vec2& from, const Vec2& to) {
  std::ostringstream os;
  os << what << " snapped from (" << from.x() << ", " << from.y() << ") to ("
     << to.x() << ", " << to.y() << "), distance " << (to - from).norm() << " m";
  return os.str();
}

Vec2 snap_logged(const GridSpec& g, const Vec2& p, const std::string& what,
                 std::vector<std::string>* notes) {
  const Vec2 q = snap_to_grid(g, p);
  if (notes && (q - p).norm() > 1e-12) notes->push_back(describe_snap(what.c_str(), p, q));
  return q;
}

// A stream-guided target ship: straight legs between its own waypoints.
struct TargetShip {
  Vec2 position = Vec2::Zero();
  Vec2 goal = Vec2::Zero();
  Vec2 waypoint = Vec2::Zero();  // grid point the ship last planned from
  Vec2 next = Vec2::Zero();
  double speed = 0.0;
  bool arrived = false;
  bool has_leg = false;

  Vec2 velocity() const {
    if (arrived || !has_leg) return Vec2::Zero();
    const Vec2 d = next - position;
    const double n = d.norm();
    return n > 0.0 ? Vec2(d * (speed / n)) : Vec2::Zero();
  }
};

class ObstacleField {
 public:
  ObstacleField(const Scenario& sc, const VesselState& own)
      : initial_(sc.workspace.obstacles),
        mode_(sc.sim.obstacle_mode),
        grid_(sc.workspace.grid),
        ring_radius_(sc.planner.ring_radius),
        gamma_(sc.planner.gamma),
        sink_(sc.planner.sink_strength) {
    if (mode_ == ObstacleMode::stream_guided) {
      for (std::size_t i = 0; i < initial_.size(); ++i) {
        TargetShip ts;
        ts.position = initial_[i].position;
        ts.waypoint = ts.position;
        ts.speed = initial_[i].velocity.norm();
        const auto& goal = sc.obstacle_targets[i];
        ts.goal = goal ? *goal : ts.position;
        ts.arrived = !goal || (ts.goal - ts.position).norm() < 1e-9 || ts.speed == 0.0;
        ships_.push_back(ts);
      }
      for (std::size_t i = 0; i < ships_.size(); ++i) plan_leg(i, own);
    }
  }

  std::vector<Obstacle> at(double t) const {
    std::vector<Obstacle> out = initial_;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (mode_ == ObstacleMode::constant_velocity) {
        out[i].position = initial_[i].position + initial_[i].velocity * t;
      } else {
        out[i].position = ships_[i].position;
        out[i].velocity = ships_[i].velocity();
      }
    }
    return out;
  }

  // Advances target ships over one tick; `own` is the own ship at the start
  // of the tick.
  void advance(const VesselState& own, double dt) {
    if (mode_ != ObstacleMode::stream_guided) return;
    for (std::size_t i = 0; i < ships_.size(); ++i) {
      TargetShip& ts = ships_[i];
      if (ts.arrived) continue;
      if (!ts.has_leg) {
        plan_leg(i, own);
        if (!ts.has_leg) continue;
      }
      const Vec2 d = ts.next - ts.position;
      const double remaining = d.norm();
      const double travel = ts.speed * dt;
      if (remaining <= travel) {
        ts.position = ts.next;
        ts.waypoint = ts.next;
        ts.has_leg = false;
        if ((ts.position - ts.goal).norm() < 1e-9) {
          ts.arrived = true;
        } else {
          plan_leg(i, own);
        }
      } else {
        ts.position += d * (travel / remaining);
      }
    }
  }

 private:
  void plan_leg(std::size_t i, const VesselState& own) {
    TargetShip& ts = ships_[i];
    if (ts.arrived) return;
    Workspace view;
    view.grid = grid_;
    view.target = ts.goal;
    Obstacle os;
    os.position = own.position;
    os.velocity = own.ne_velocity();
    os.radius = initial_[i].radius;
    os.influence_range = initial_[i].influence_range;
    os.vortex_gain = initial_[i].vortex_gain;
    os.colregs_compliant = true;
    view.obstacles.push_back(os);
    for (std::size_t j = 0; j < ships_.size(); ++j) {
      if (j == i) continue;
      Obstacle o = initial_[j];
      o.position = ships_[j].position;
      o.velocity = ships_[j].velocity();
      o.colregs_compliant = true;
      view.obstacles.push_back(o);
    }
    std::vector<VortexSpin> spins(view.obstacles.size());
    WaypointQuery q{ts.waypoint, ring_radius_, gamma_, ts.goal};
    try {
      const WaypointChoice c =
          select_next_waypoint(q, StreamField(view, std::move(spins), sink_));
      ts.next = c.waypoint;
      ts.has_leg = true;
    } catch (const PlanningStuckError&) {
      ts.has_leg = false;  // hold position and retry next tick
    } catch (const SingularityError&) {
      ts.has_leg = false;
    }
  }

  std::vector<Obstacle> initial_;
  ObstacleMode mode_;
  GridSpec grid_;
  int ring_radius_;
  double gamma_;
  double sink_;
  std::vector<TargetShip> ships_;
};

}  // namespace

Scenario prepare(const Scenario& raw, std::vector<std::string>* notes) {
  Scenario sc = raw;
  const GridSpec& g = sc.workspace.grid;
  if (!(g.length_x > 0.0) || !(g.length_y > 0.0) || g.count_x < 2 || g.count_y < 2) {
    throw ConfigError("grid: lengths must be > 0 and counts >= 2");
  }
  sc.sim.validate();
  sc.gains.validate();
  if (sc.planner.ring_radius < 1) throw ConfigError("planner: n_r must be >= 1");
  if (!(sc.planner.gamma >= 0.0)) throw ConfigError("planner: gamma must be >= 0");
  if (!(sc.planner.sink_strength > 0.0)) throw ConfigError("planner: C must be > 0");
  if (!(sc.path.corridor_width > 0.0)) throw ConfigError("path: zeta must be > 0");
  if (!(sc.path.curvature_margin > 0.0)) throw ConfigError("path: epsilon must be > 0");
  if (sc.path.corridor_width / 14.0 < sc.path.curvature_margin) {
    throw ConfigError("path: epsilon must not exceed zeta / 14");
  }
  if (!sc.obstacle_targets.empty() &&
      sc.obstacle_targets.size() != sc.workspace.obstacles.size()) {
    throw ConfigError("obstacle targets do not match the obstacle list");
  }
  sc.obstacle_targets.resize(sc.workspace.obstacles.size());

  try {
    sc.workspace.target = snap_logged(g, sc.workspace.target, "target", notes);
    sc.vessel0.position = snap_logged(g, sc.vessel0.position, "vessel start", notes);
    for (std::size_t i = 0; i < sc.workspace.obstacles.size(); ++i) {
      const std::string tag = "obstacle " + std::to_string(i + 1);
      Obstacle& o = sc.workspace.obstacles[i];
      o.position = snap_logged(g, o.position, tag, notes);
      if (sc.obstacle_targets[i]) {
        sc.obstacle_targets[i] =
            snap_logged(g, *sc.obstacle_targets[i], tag + " destination", notes);
      }
    }
  } catch (const BoundsError& e) {
    throw ConfigError(e.what());
  }
  if (!std::isfinite(sc.vessel0.heading)) throw ConfigError("vessel: psi0 must be finite");
  sc.vessel0.heading = wrap_to_pi(sc.vessel0.heading);
  validate(sc.workspace, OverlapPolicy::warn, notes);
  if (sc.sim.obstacle_mode == ObstacleMode::stream_guided) {
    for (std::size_t i = 0; i < sc.obstacle_targets.size(); ++i) {
      if (!sc.obstacle_targets[i]) {
        throw ConfigError("obstacle " + std::to_string(i + 1) +
                          ": stream-guided mode needs a destination (tx, ty)");
      }
    }
  }
  for (const Obstacle& o : sc.workspace.obstacles) {
    if ((sc.vessel0.position - o.position).norm() < o.radius) {
      throw ConfigError("vessel start lies inside an obstacle disc");
    }
  }
  return sc;
}

RunTrace run(const Scenario& scenario) {
  RunTrace trace;
  trace.scenario = prepare(scenario, &trace.notes);
  const Scenario& sc = trace.scenario;
  const Workspace& w = sc.workspace;
  const Vec2 target = w.target;
  const double dt = sc.sim.dt;

  VesselState state = sc.vessel0;
  ObstacleField field(sc, state);
  trace.waypoints.push_back(state.position);
  trace.obstacles.assign(w.obstacles.size(), ObstacleReport{});
  for (auto& r : trace.obstacles) r.min_clearance = std::numeric_limits<double>::infinity();

  double s = 0.0;
  int k = 0;
  long tick = 0;
  double t = 0.0;
  Vec2 last_position = state.position;

  try {
    while (true) {
      if ((target - state.position).norm() < sc.sim.delta) {
        trace.outcome = Outcome::reached;
        trace.arrival_time = t;
        break;
      }
      if (t > sc.sim.t_max) {
        trace.outcome = Outcome::timeout;
        break;
      }

      const std::vector<Obstacle> obstacles = field.at(t);
      const bool path_complete =
          trace.waypoints.size() > 1 && (trace.waypoints.back() - target).norm() < 1e-9;

      int k_s = static_cast<int>(std::floor(s)) + 1;
      while (k_s > k && !path_complete) {
        Workspace snapshot{w.grid, target, obstacles};
        const Vec2 wp = trace.waypoints.back();
        StreamField sf(snapshot, wp, sc.planner.sink_strength);
        WaypointQuery q{wp, sc.planner.ring_radius, sc.planner.gamma, target};
        const WaypointChoice choice = select_next_waypoint(q, sf);

        PlanningRecord rec;
        rec.step = k;
        rec.t = t;
        rec.from = wp;
        rec.to = choice.waypoint;
        rec.is_target = choice.is_target;
        rec.cost = choice.cost;
        rec.stream_term = choice.stream_term;
        rec.distance_term = choice.distance_term;
        rec.spins = choice.spins;
        rec.snapshot = snapshot;
        if (k == 0) {
          trace.segments.push_back(
              first_segment(wp, choice.waypoint, sc.path.corridor_width, 1));
        } else {
          const Vec2 prev = trace.waypoints[trace.waypoints.size() - 2];
          CorridorStep step = solve_corridor_qp(prev, wp, choice.waypoint,
                                                trace.segments.back(),
                                                sc.path.corridor_width,
                                                sc.path.curvature_margin);
          trace.segments.push_back(step.segment);
        }
        rec.alpha = chord_angle(wp, choice.waypoint);
        trace.planning.push_back(std::move(rec));
        trace.waypoints.push_back(choice.waypoint);
        ++k;
        if (choice.is_target) break;
      }

      const double n_segments = static_cast<double>(trace.segments.size());
      bool hold = false;
      if (s >= n_segments) {
        s = n_segments;
        hold = true;
      }
      PathSignal sig = path_signal(trace.segments, s, sc.gains);
      if (hold) sig = frozen_signal(sig);
      const ControlOutput out = control_law(state, sig, sc.gains, sc.vessel);

      TelemetryRow row;
      row.t = t;
      row.s = s;
      row.k = sig.segment;
      row.theta = sig.theta;
      row.p = state.position;
      row.psi = state.heading;
      row.nu = state.nu;
      row.p_d = sig.p_d;
      row.psi_d = sig.psi_d;
      row.z_p = out.errors.z_p;
      row.z_psi = out.errors.z_psi;
      row.z_nu = out.errors.z_nu;
      row.omega = out.errors.omega;
      row.tau = out.tau;
      row.obstacles.reserve(obstacles.size());
      for (std::size_t i = 0; i < obstacles.size(); ++i) {
        row.obstacles.push_back(obstacles[i].position);
        const double d = (state.position - obstacles[i].position).norm();
        ObstacleReport& r = trace.obstacles[i];
        if (d < r.min_clearance) {
          r.min_clearance = d;
          r.time_of_closest_approach = t;
          r.own_at_cpa = state.position;
          r.obstacle_at_cpa = obstacles[i].position;
          r.obstacle_velocity_at_cpa = obstacles[i].velocity;
          r.own_heading_at_cpa = state.heading;
        }
      }
      trace.max_cross_track = std::max(trace.max_cross_track, out.errors.z_p.norm());
      trace.rows.push_back(std::move(row));

      const VesselState before = state;
      state = step(state, out.tau, sc.vessel, dt);
      if (!hold) s += out.s_dot * dt;
      field.advance(before, dt);
      trace.path_length += (state.position - last_position).norm();
      last_position = state.position;
      ++tick;
      t = static_cast<double>(tick) * dt;
    }
  } catch (const Error& e) {
    trace.outcome = Outcome::fault;
    trace.fault = e.what();
  }
  trace.final_distance = (target - state.position).norm();
  return trace;
}

std::vector<EncounterReport> colregs_metrics(const RunTrace& trace) {
  const Scenario& sc = trace.scenario;
  const Vec2 course = sc.workspace.target - sc.vessel0.position;
  std::vector<EncounterReport> out;
  for (std::size_t i = 0; i < sc.workspace.obstacles.size(); ++i) {
    const Obstacle& o = sc.workspace.obstacles[i];
    EncounterReport rep;
    const ObstacleReport& r = trace.obstacles.at(i);
    rep.min_clearance = r.min_clearance;
    rep.time_of_closest_approach = r.time_of_closest_approach;
    const Vec2 h(std::cos(r.own_heading_at_cpa), std::sin(r.own_heading_at_cpa));
    const Vec2 rel = r.obstacle_at_cpa - r.own_at_cpa;
    rep.on_port_side = h.x() * rel.y() - h.y() * rel.x() < 0.0;
    Vec2 v = r.obstacle_velocity_at_cpa;
    if (v.norm() < 1e-12) v = o.velocity;
    rep.own_ship_ahead = v.norm() > 1e-12 && (r.own_at_cpa - r.obstacle_at_cpa).dot(v) > 0.0;

    const Vec2 vi = sc.sim.obstacle_mode == ObstacleMode::stream_guided && sc.obstacle_targets[i]
                        ? Vec2(*sc.obstacle_targets[i] - o.position)
                        : o.velocity;
    if (vi.norm() < 1e-12 || course.norm() < 1e-12) {
      rep.encounter = Encounter::stationary;
    } else {
      const double cosang = course.normalized().dot(vi.normalized());
      if (cosang < -std::cos(std::numbers::pi / 4)) {
        rep.encounter = Encounter::head_on;
      } else if (cosang > std::cos(std::numbers::pi / 4)) {
        rep.encounter = Encounter::overtaking;
      } else {
        rep.encounter = Encounter::crossing;
      }
    }
    out.push_back(rep);
  }
  return out;
}

}  // namespace streamguide
