#include "streamguide/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "streamguide/pathgen.hpp"

namespace streamguide {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void write_trace_csv(std::ostream& os, const RunTrace& trace) {
  os << "t,s,k,theta,x,y,psi,u,v,r,xd,yd,psid,zp1,zp2,zpsi,znu1,znu2,znu3,omega,"
        "tau1,tau2,tau3";
  const std::size_t n_obs = trace.scenario.workspace.obstacles.size();
  for (std::size_t i = 1; i <= n_obs; ++i) os << ",ox" << i << ",oy" << i;
  os << '\n';
  for (const TelemetryRow& r : trace.rows) {
    const double fields[] = {r.t,        r.s,        double(r.k), r.theta,    r.p.x(),
                             r.p.y(),    r.psi,      r.nu(0),     r.nu(1),    r.nu(2),
                             r.p_d.x(),  r.p_d.y(),  r.psi_d,     r.z_p.x(),  r.z_p.y(),
                             r.z_psi,    r.z_nu(0),  r.z_nu(1),   r.z_nu(2),  r.omega,
                             r.tau(0),   r.tau(1),   r.tau(2)};
    bool first = true;
    for (double f : fields) {
      if (!first) os << ',';
      os << num(f);
      first = false;
    }
    for (const Vec2& o : r.obstacles) os << ',' << num(o.x()) << ',' << num(o.y());
    os << '\n';
  }
}

std::string summary_json(const RunTrace& trace) {
  json doc;
  doc["scenario"] = trace.scenario.name;
  doc["outcome"] = to_string(trace.outcome);
  if (!trace.fault.empty()) doc["fault"] = trace.fault;
  doc["arrival_time"] = trace.arrival_time >= 0.0 ? json(trace.arrival_time) : json(nullptr);
  doc["duration"] = trace.rows.empty() ? 0.0 : trace.rows.back().t;
  doc["ticks"] = trace.rows.size();
  doc["path_length"] = trace.path_length;
  doc["max_cross_track"] = trace.max_cross_track;
  doc["final_distance"] = trace.final_distance;
  doc["waypoints"] = trace.waypoints.size();
  doc["segments"] = trace.segments.size();
  doc["max_joint_mismatch"] = max_joint_mismatch(trace.segments);
  const auto reports = colregs_metrics(trace);
  json obstacles = json::array();
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const EncounterReport& e = reports[i];
    const double radius = trace.scenario.workspace.obstacles[i].radius;
    min_ratio = std::min(min_ratio, e.min_clearance / radius);
    obstacles.push_back({{"index", i + 1},
                         {"encounter", to_string(e.encounter)},
                         {"min_clearance", finite_or_null(e.min_clearance)},
                         {"clearance_over_radius", finite_or_null(e.min_clearance / radius)},
                         {"time_of_closest_approach", e.time_of_closest_approach},
                         {"side", e.on_port_side ? "port" : "starboard"},
                         {"own_ship_ahead", e.own_ship_ahead}});
  }
  doc["min_clearance_over_radius"] = finite_or_null(min_ratio);
  doc["obstacles"] = obstacles;
  doc["notes"] = trace.notes;
  return doc.dump(2) + "\n";
}

std::string planning_json(const RunTrace& trace) {
  json steps = json::array();
  for (const PlanningRecord& r : trace.planning) {
    json spins = json::array();
    for (const VortexSpin& s : r.spins) {
      spins.push_back({{"S", s.value},
                       {"relative_angle", s.relative_angle},
                       {"stationary", s.stationary}});
    }
    json obstacles = json::array();
    for (const Obstacle& o : r.snapshot.obstacles) {
      obstacles.push_back({o.position.x(), o.position.y(), o.velocity.x(), o.velocity.y()});
    }
    steps.push_back({{"k", r.step},
                     {"t", r.t},
                     {"from", {r.from.x(), r.from.y()}},
                     {"to", {r.to.x(), r.to.y()}},
                     {"is_target", r.is_target},
                     {"cost", r.cost},
                     {"stream_term", r.stream_term},
                     {"distance_term", r.distance_term},
                     {"alpha", r.alpha},
                     {"spins", spins},
                     {"obstacles", obstacles}});
  }
  return steps.dump(2) + "\n";
}

void write_segments_csv(std::ostream& os, const RunTrace& trace) {
  os << "segment,point,x,y\n";
  for (const BezierSegment& seg : trace.segments) {
    for (int i = 0; i < kControlPoints; ++i) {
      os << seg.segment_index << ',' << i << ',' << num(seg.control_points(i, 0)) << ','
         << num(seg.control_points(i, 1)) << '\n';
    }
  }
}

void write_field_csv(std::ostream& os, const FieldGrid& field) {
  os << "m,n,x,y,psi,cell\n";
  for (int m = 1; m <= field.grid.count_x; ++m) {
    for (int n = 1; n <= field.grid.count_y; ++n) {
      const Vec2 p = grid_point(field.grid, m, n);
      os << m << ',' << n << ',' << num(p.x()) << ',' << num(p.y()) << ','
         << (field.usable(m, n) ? num(field.psi(m - 1, n - 1)) : std::string("nan")) << ','
         << static_cast<int>(field.cells(m - 1, n - 1)) << '\n';
    }
  }
}

FieldGrid planning_field(const RunTrace& trace, std::size_t step) {
  const PlanningRecord& r = trace.planning.at(step);
  return field_on_grid(StreamField(r.snapshot, r.spins, trace.scenario.planner.sink_strength));
}

std::vector<LineSegment> contour_segments(const FieldGrid& field, double level) {
  std::vector<LineSegment> out;
  const GridSpec& g = field.grid;
  // Cells spanning the branch cut of the angle terms jump by about 2 pi C;
  // they are not drawn.
  const double jump = std::numbers::pi;
  for (int m = 1; m < g.count_x; ++m) {
    for (int n = 1; n < g.count_y; ++n) {
      const int cm[4] = {m, m + 1, m + 1, m};
      const int cn[4] = {n, n, n + 1, n + 1};
      double v[4];
      Vec2 p[4];
      bool usable = true;
      for (int c = 0; c < 4; ++c) {
        usable = usable && field.usable(cm[c], cn[c]);
        if (!usable) break;
        v[c] = field.psi(cm[c] - 1, cn[c] - 1);
        p[c] = grid_point(g, cm[c], cn[c]);
      }
      if (!usable) continue;
      if (*std::max_element(v, v + 4) - *std::min_element(v, v + 4) > jump) continue;
      int code = 0;
      for (int c = 0; c < 4; ++c) code |= (v[c] > level ? 1 : 0) << c;
      if (code == 0 || code == 15) continue;
      auto edge = [&](int a) {
        const int b = (a + 1) % 4;
        const double f = (level - v[a]) / (v[b] - v[a]);
        return Vec2(p[a] + f * (p[b] - p[a]));
      };
      std::vector<int> crossed;
      for (int e = 0; e < 4; ++e) {
        const bool above_a = (code >> e) & 1;
        const bool above_b = (code >> ((e + 1) % 4)) & 1;
        if (above_a != above_b) crossed.push_back(e);
      }
      if (crossed.size() == 2) {
        out.push_back({edge(crossed[0]), edge(crossed[1])});
      } else if (crossed.size() == 4) {
        const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        const bool centre_above = centre > level;
        const bool corner0_above = code & 1;
        if (centre_above == corner0_above) {
          out.push_back({edge(0), edge(1)});
          out.push_back({edge(2), edge(3)});
        } else {
          out.push_back({edge(3), edge(0)});
          out.push_back({edge(1), edge(2)});
        }
      }
    }
  }
  return out;
}

std::vector<double> contour_levels(const FieldGrid& field, int count) {
  std::vector<double> values;
  for (int m = 1; m <= field.grid.count_x; ++m) {
    for (int n = 1; n <= field.grid.count_y; ++n) {
      if (field.usable(m, n)) values.push_back(field.psi(m - 1, n - 1));
    }
  }
  std::vector<double> levels;
  if (values.empty() || count < 1) return levels;
  std::sort(values.begin(), values.end());
  const double lo = values[static_cast<std::size_t>(0.02 * (values.size() - 1))];
  const double hi = values[static_cast<std::size_t>(0.98 * (values.size() - 1))];
  for (int i = 0; i < count; ++i) levels.push_back(lo + (hi - lo) * (i + 0.5) / count);
  return levels;
}

namespace {

class SvgCanvas {
 public:
  explicit SvgCanvas(const GridSpec& g) : lx_(g.length_x), ly_(g.length_y) {
    os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(ly_ * kScale + 2 * kMargin)
        << "\" height=\"" << num(lx_ * kScale + 2 * kMargin) << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<rect x=\"" << num(kMargin) << "\" y=\"" << num(kMargin) << "\" width=\""
        << num(ly_ * kScale) << "\" height=\"" << num(lx_ * kScale)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
  }

  // North is up, east is right.
  double sx(const Vec2& p) const { return kMargin + p.y() * kScale; }
  double sy(const Vec2& p) const { return kMargin + (lx_ - p.x()) * kScale; }

  void line(const Vec2& a, const Vec2& b, const char* style) {
    os_ << "<line x1=\"" << num(sx(a)) << "\" y1=\"" << num(sy(a)) << "\" x2=\"" << num(sx(b))
        << "\" y2=\"" << num(sy(b)) << "\" " << style << "/>\n";
  }

  void polyline(const std::vector<Vec2>& pts, const char* style) {
    if (pts.size() < 2) return;
    os_ << "<polyline fill=\"none\" " << style << " points=\"";
    for (const Vec2& p : pts) os_ << num(sx(p)) << ',' << num(sy(p)) << ' ';
    os_ << "\"/>\n";
  }

  void circle(const Vec2& c, double radius_m, const char* style) {
    os_ << "<circle cx=\"" << num(sx(c)) << "\" cy=\"" << num(sy(c)) << "\" r=\""
        << num(radius_m * kScale) << "\" " << style << "/>\n";
  }

  void text(const Vec2& p, const std::string& s) {
    os_ << "<text x=\"" << num(sx(p) + 4) << "\" y=\"" << num(sy(p) - 4)
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << s << "</text>\n";
  }

  std::string finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

 private:
  static constexpr double kScale = 30.0;
  static constexpr double kMargin = 20.0;
  double lx_;
  double ly_;
  std::ostringstream os_;
};

std::vector<Vec2> sampled_path(const RunTrace& trace) {
  std::vector<Vec2> pts;
  for (const BezierSegment& seg : trace.segments) {
    for (int i = 0; i <= 20; ++i) pts.push_back(eval_bezier(seg, i / 20.0, 0));
  }
  return pts;
}

std::vector<Vec2> trajectory_until(const RunTrace& trace, double t_end) {
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < trace.rows.size(); i += 10) {
    if (trace.rows[i].t > t_end) break;
    pts.push_back(trace.rows[i].p);
  }
  return pts;
}

void draw_obstacles(SvgCanvas& svg, const std::vector<Obstacle>& obstacles) {
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const Obstacle& o = obstacles[i];
    svg.circle(o.position, o.influence_range,
               "fill=\"none\" stroke=\"#d08080\" stroke-dasharray=\"4 3\"");
    svg.circle(o.position, o.radius, "fill=\"#f0c0c0\" fill-opacity=\"0.6\" stroke=\"#a03030\"");
    if (o.velocity.norm() > 1e-12) {
      svg.line(o.position, o.position + o.velocity.normalized() * o.radius,
               "stroke=\"#a03030\" stroke-width=\"2\"");
    }
    svg.text(o.position, std::to_string(i + 1));
  }
}

void draw_target(SvgCanvas& svg, const Vec2& target) {
  svg.circle(target, 0.15, "fill=\"#208020\" stroke=\"none\"");
}

}  // namespace

std::string snapshot_svg(const RunTrace& trace, std::size_t step) {
  const PlanningRecord& rec = trace.planning.at(step);
  SvgCanvas svg(trace.scenario.workspace.grid);
  const FieldGrid field = planning_field(trace, step);
  for (double level : contour_levels(field, 40)) {
    for (const LineSegment& s : contour_segments(field, level)) {
      svg.line(s[0], s[1], "stroke=\"#6090d0\" stroke-width=\"0.7\"");
    }
  }
  draw_obstacles(svg, rec.snapshot.obstacles);
  draw_target(svg, trace.scenario.workspace.target);
  std::vector<Vec2> wps(trace.waypoints.begin(),
                        trace.waypoints.begin() + std::min(trace.waypoints.size(), step + 2));
  svg.polyline(wps, "stroke=\"#808080\" stroke-dasharray=\"3 3\"");
  for (const Vec2& w : wps) svg.circle(w, 0.06, "fill=\"black\"");
  svg.polyline(trajectory_until(trace, rec.t), "stroke=\"black\" stroke-width=\"2\"");
  svg.text(Vec2(trace.scenario.workspace.grid.length_x - 0.5, 0.2),
           trace.scenario.name + " k=" + std::to_string(rec.step) + " t=" + num(rec.t) + " s");
  return svg.finish();
}

std::string trajectory_svg(const RunTrace& trace) {
  SvgCanvas svg(trace.scenario.workspace.grid);
  if (!trace.rows.empty()) {
    const TelemetryRow& last = trace.rows.back();
    std::vector<Obstacle> obstacles = trace.scenario.workspace.obstacles;
    for (std::size_t i = 0; i < obstacles.size() && i < last.obstacles.size(); ++i) {
      std::vector<Vec2> track;
      for (std::size_t j = 0; j < trace.rows.size(); j += 10) {
        track.push_back(trace.rows[j].obstacles[i]);
      }
      svg.polyline(track, "stroke=\"#a03030\" stroke-dasharray=\"2 2\"");
      obstacles[i].position = last.obstacles[i];
    }
    draw_obstacles(svg, obstacles);
  }
  draw_target(svg, trace.scenario.workspace.target);
  svg.polyline(sampled_path(trace), "stroke=\"#6090d0\" stroke-width=\"1.5\"");
  for (const Vec2& w : trace.waypoints) svg.circle(w, 0.06, "fill=\"black\"");
  svg.polyline(trajectory_until(trace, std::numeric_limits<double>::infinity()),
               "stroke=\"black\" stroke-width=\"2\"");
  svg.text(Vec2(trace.scenario.workspace.grid.length_x - 0.5, 0.2),
           trace.scenario.name + " (" + to_string(trace.outcome) + ")");
  return svg.finish();
}

}  // namespace streamguide
