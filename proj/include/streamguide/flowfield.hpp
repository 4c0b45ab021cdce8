#ifndef STREAMGUIDE_FLOWFIELD_HPP
#define STREAMGUIDE_FLOWFIELD_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "streamguide/errors.hpp"
#include "streamguide/workspace.hpp"

namespace streamguide {

/// Distance below which a flow primitive is treated as singular.
inline constexpr double kSingularRadius = 1e-6;

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

namespace detail {

template <typename Scalar>
void require_regular(const Point2<Scalar>& p, const Point2<Scalar>& center,
                     const char* what) {
  if ((p - center).norm() < Scalar(kSingularRadius)) {
    throw SingularityError(what, p.template cast<double>());
  }
}

}  // namespace detail

/// Uniform flow along +x past a cylinder of `radius` centred at the origin.
template <typename Scalar>
Scalar uniform_obstacle_psi(const Point2<Scalar>& p, Scalar radius,
                            Scalar strength) {
  detail::require_regular<Scalar>(p, Point2<Scalar>::Zero(),
                                  "uniform flow: evaluation at the origin");
  const Scalar rho2 = p.squaredNorm();
  return strength * p.y() * (Scalar(1) - radius * radius / rho2);
}

/// Pure sink toward `target`: constant along every ray through the target.
template <typename Scalar>
Scalar sink_psi(const Point2<Scalar>& p, const Point2<Scalar>& target,
                Scalar strength) {
  detail::require_regular<Scalar>(p, target, "sink: evaluation at the target");
  using std::atan2;
  const Point2<Scalar> rel = p - target;
  return -strength * atan2(rel.y(), rel.x());
}

/// Sink at `target` with a circular obstacle inserted by the circle theorem.
/// The second term is the angle of the inverse point of `p` in the obstacle
/// circle, seen from the target, so the sum vanishes on the circle.
template <typename Scalar>
Scalar sink_obstacle_psi(const Point2<Scalar>& p, const Point2<Scalar>& target,
                         const Point2<Scalar>& center, Scalar radius,
                         Scalar strength) {
  using std::atan2;
  detail::require_regular<Scalar>(p, target, "sink: evaluation at the target");
  detail::require_regular<Scalar>(p, center,
                                  "sink obstacle: evaluation at the centre");
  const Point2<Scalar> rel = p - target;
  const Point2<Scalar> obs = center - target;
  const Point2<Scalar> d = rel - obs;
  const Scalar d2 = d.squaredNorm();
  const Point2<Scalar> mirror = radius * radius * d / d2 + obs;
  if (mirror.norm() < Scalar(kSingularRadius)) {
    throw SingularityError("sink obstacle: mirror image at the target",
                           p.template cast<double>());
  }
  return -strength * atan2(rel.y(), rel.x()) +
         strength * atan2(mirror.y(), mirror.x());
}

/// Point vortex at `center` with signed strength `gain * spin * speed`.
template <typename Scalar>
Scalar vortex_psi(const Point2<Scalar>& p, const Point2<Scalar>& center,
                  Scalar gain, int spin, Scalar speed) {
  using std::log;
  detail::require_regular<Scalar>(p, center, "vortex: evaluation at the centre");
  return gain * Scalar(spin) * speed * log((p - center).squaredNorm());
}

struct VortexSpin {
  int value = 1;
  double relative_angle = 0.0;  ///< in [-pi, pi)
  bool stationary = false;
};

/// Rotation sense of the vortex attached to `obstacle` for a vessel at
/// `current_wp` heading for `target`.
VortexSpin vortex_spin(const Obstacle& obstacle, const Vec2& current_wp,
                       const Vec2& target);

/// Spin rule as a pure function of the compliance flag and relative angle.
int spin_rule(bool colregs_compliant, double relative_angle);

double sink_obstacle_psi(const Vec2& p, const Vec2& target,
                         const Obstacle& obstacle, double strength);
double vortex_psi(const Vec2& p, const Obstacle& obstacle,
                  const VortexSpin& spin);

/// Composite stream function of one planning step. Spins are frozen at
/// construction; evaluation is pure and thread-safe.
class StreamField {
 public:
  StreamField(Workspace snapshot, const Vec2& current_wp,
              double sink_strength = 1.0);
  /// Uses caller-supplied spins (e.g. all +1 for compliant target ships).
  StreamField(Workspace snapshot, std::vector<VortexSpin> spins,
              double sink_strength = 1.0);

  double psi(const Vec2& p) const;

  /// True when some obstacle has |p - p_i| <= l_i.
  bool thresholded(const Vec2& p) const;
  /// True when `p` is strictly inside an obstacle disc.
  bool inside_obstacle(const Vec2& p) const;

  const Workspace& workspace() const { return snapshot_; }
  const std::vector<VortexSpin>& spins() const { return spins_; }
  double sink_strength() const { return sink_strength_; }

 private:
  double term(std::size_t i, const Vec2& p) const;

  Workspace snapshot_;
  std::vector<VortexSpin> spins_;
  double sink_strength_;
};

/// One-shot evaluation; spins derived from `current_wp`.
double composite_psi(const Vec2& p, const Workspace& w, const Vec2& current_wp,
                     double sink_strength = 1.0);

struct FieldGrid {
  enum class Cell : unsigned char { ok = 0, obstacle = 1, singular = 2 };

  GridSpec grid;
  Eigen::MatrixXd psi;  ///< (count_x, count_y); NaN where not evaluated
  Eigen::Matrix<Cell, Eigen::Dynamic, Eigen::Dynamic> cells;

  bool usable(int m, int n) const { return cells(m - 1, n - 1) == Cell::ok; }
};

FieldGrid field_on_grid(const StreamField& field);
FieldGrid field_on_grid(const Workspace& w, const Vec2& current_wp,
                        double sink_strength = 1.0);

}  // namespace streamguide

#endif  // STREAMGUIDE_FLOWFIELD_HPP
