#ifndef STREAMGUIDE_CONTROL_HPP
#define STREAMGUIDE_CONTROL_HPP

#include <span>
#include <vector>

#include <Eigen/Core>

#include "streamguide/bezier.hpp"
#include "streamguide/vessel.hpp"

namespace streamguide {

struct ControlGains {
  Eigen::Matrix2d K_p = Eigen::Vector2d(20.0, 20.0).asDiagonal();
  double k_psi = 40.0;
  Eigen::Matrix3d K_nu = Eigen::Vector3d(20.0, 20.0, 20.0).asDiagonal();
  double mu = 1e-4;
  double eps_reg = 0.01;
  double u_d = 0.2;

  /// Throws ConfigError when a positivity condition fails.
  void validate() const;

  bool operator==(const ControlGains&) const = default;
};

/// Desired position and heading along the concatenated path at parameter s.
/// Derivatives are with respect to s.
struct PathSignal {
  double s = 0.0;
  int segment = 1;  ///< k = floor(s) + 1
  double theta = 0.0;
  Vec2 p_d = Vec2::Zero();
  Vec2 p_d_s = Vec2::Zero();
  Vec2 p_d_s2 = Vec2::Zero();
  Vec2 p_d_s3 = Vec2::Zero();
  double psi_d = 0.0;
  double psi_d_s = 0.0;
  double psi_d_s2 = 0.0;
  double speed_assign = 0.0;    ///< u_d / (|p_d^s| + eps)
  double speed_assign_s = 0.0;
  /// Path parameter held at the end of the path: no feed-forward, no update.
  bool frozen = false;
};

/// Evaluates segment floor(s)+1 at theta = s - floor(s). The final joint
/// s = segments.size() evaluates the last segment at theta = 1. Throws
/// PathExhaustedError beyond that.
PathSignal path_signal(std::span<const BezierSegment> segments, double s,
                       double u_d, double eps_reg);
inline PathSignal path_signal(std::span<const BezierSegment> segments, double s,
                              const ControlGains& gains) {
  return path_signal(segments, s, gains.u_d, gains.eps_reg);
}

/// Same geometry with the parameter frozen (speed assignment zeroed).
PathSignal frozen_signal(PathSignal sig);

/// Unit-tangent gradient update law for s.
double update_law(const Vec2& p, const PathSignal& sig, const ControlGains& gains);

struct ErrorState {
  Vec2 z_p = Vec2::Zero();
  double z_psi = 0.0;
  Vec3 z_nu = Vec3::Zero();
  double omega = 0.0;
};

struct ControlOutput {
  Vec3 tau = Vec3::Zero();
  ErrorState errors;
  Vec3 alpha = Vec3::Zero();
  Vec3 alpha_dot = Vec3::Zero();
  double s_dot = 0.0;
};

/// Virtual controls only (used for finite-difference checks of alpha_dot).
Vec3 virtual_control(const VesselState& state, const PathSignal& sig,
                     const ControlGains& gains);

/// Backstepping maneuvering law. Throws ControllerFault on a non-finite
/// intermediate.
ControlOutput control_law(const VesselState& state, const PathSignal& sig,
                          const ControlGains& gains, const VesselParams& params);

}  // namespace streamguide

#endif  // STREAMGUIDE_CONTROL_HPP
