#include "streamguide/flowfield.hpp"

#include <limits>

namespace streamguide {

namespace {

constexpr double kPi = std::numbers::pi;

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

int spin_rule(bool colregs_compliant, double relative_angle) {
  if (colregs_compliant) return 1;
  return (relative_angle > kPi / 4 && relative_angle < 3 * kPi / 4) ? -1 : 1;
}

VortexSpin vortex_spin(const Obstacle& obstacle, const Vec2& current_wp,
                       const Vec2& target) {
  const Vec2 to_target = target - current_wp;
  if (to_target.norm() < kSingularRadius) {
    throw DomainError("vortex spin: current waypoint coincides with the target");
  }
  VortexSpin spin;
  const double speed = obstacle.velocity.norm();
  if (speed == 0.0) {
    spin.stationary = true;
    return spin;
  }
  const Vec2 dt = to_target / to_target.norm();
  const Vec2 di = obstacle.velocity / speed;
  double angle = std::atan2(cross(dt, di), dt.dot(di));
  if (angle >= kPi) angle -= 2 * kPi;
  spin.relative_angle = angle;
  spin.value = spin_rule(obstacle.colregs_compliant, angle);
  return spin;
}

double sink_obstacle_psi(const Vec2& p, const Vec2& target,
                         const Obstacle& obstacle, double strength) {
  return sink_obstacle_psi<double>(p, target, obstacle.position,
                                   obstacle.radius, strength);
}

double vortex_psi(const Vec2& p, const Obstacle& obstacle,
                  const VortexSpin& spin) {
  return vortex_psi<double>(p, obstacle.position, obstacle.vortex_gain,
                            spin.value, obstacle.velocity.norm());
}

StreamField::StreamField(Workspace snapshot, const Vec2& current_wp,
                         double sink_strength)
    : snapshot_(std::move(snapshot)), sink_strength_(sink_strength) {
  spins_.reserve(snapshot_.obstacles.size());
  for (const Obstacle& o : snapshot_.obstacles) {
    spins_.push_back(vortex_spin(o, current_wp, snapshot_.target));
  }
}

StreamField::StreamField(Workspace snapshot, std::vector<VortexSpin> spins,
                         double sink_strength)
    : snapshot_(std::move(snapshot)),
      spins_(std::move(spins)),
      sink_strength_(sink_strength) {
  if (spins_.size() != snapshot_.obstacles.size()) {
    throw DomainError("stream field: one spin per obstacle required");
  }
}

double StreamField::term(std::size_t i, const Vec2& p) const {
  const Obstacle& o = snapshot_.obstacles[i];
  return sink_obstacle_psi(p, snapshot_.target, o, sink_strength_) +
         vortex_psi(p, o, spins_[i]);
}

bool StreamField::thresholded(const Vec2& p) const {
  for (const Obstacle& o : snapshot_.obstacles) {
    if ((p - o.position).norm() <= o.influence_range) return true;
  }
  return false;
}

bool StreamField::inside_obstacle(const Vec2& p) const {
  for (const Obstacle& o : snapshot_.obstacles) {
    if ((p - o.position).norm() < o.radius) return true;
  }
  return false;
}

double StreamField::psi(const Vec2& p) const {
  if (snapshot_.obstacles.empty()) {
    return sink_psi<double>(p, snapshot_.target, sink_strength_);
  }
  const bool gated = thresholded(p);
  double sum = 0.0;
  for (std::size_t i = 0; i < snapshot_.obstacles.size(); ++i) {
    const Obstacle& o = snapshot_.obstacles[i];
    if (gated && (p - o.position).norm() > o.influence_range) continue;
    sum += term(i, p);
  }
  return sum;
}

double composite_psi(const Vec2& p, const Workspace& w, const Vec2& current_wp,
                     double sink_strength) {
  return StreamField(w, current_wp, sink_strength).psi(p);
}

FieldGrid field_on_grid(const StreamField& field) {
  const GridSpec& g = field.workspace().grid;
  FieldGrid out;
  out.grid = g;
  out.psi.setConstant(g.count_x, g.count_y,
                      std::numeric_limits<double>::quiet_NaN());
  out.cells.setConstant(g.count_x, g.count_y, FieldGrid::Cell::ok);
  for (int m = 1; m <= g.count_x; ++m) {
    for (int n = 1; n <= g.count_y; ++n) {
      const Vec2 p = grid_point(g, m, n);
      if (field.inside_obstacle(p)) {
        out.cells(m - 1, n - 1) = FieldGrid::Cell::obstacle;
        continue;
      }
      try {
        out.psi(m - 1, n - 1) = field.psi(p);
      } catch (const SingularityError&) {
        out.cells(m - 1, n - 1) = FieldGrid::Cell::singular;
      }
    }
  }
  return out;
}

FieldGrid field_on_grid(const Workspace& w, const Vec2& current_wp,
                        double sink_strength) {
  return field_on_grid(StreamField(w, current_wp, sink_strength));
}

}  // namespace streamguide
