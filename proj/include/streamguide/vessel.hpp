#ifndef STREAMGUIDE_VESSEL_HPP
#define STREAMGUIDE_VESSEL_HPP

#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "streamguide/workspace.hpp"

namespace streamguide {

using Vec3 = Eigen::Vector3d;

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> rotation(Scalar psi) {
  using std::cos;
  using std::sin;
  Eigen::Matrix<Scalar, 2, 2> R;
  R << cos(psi), -sin(psi), sin(psi), cos(psi);
  return R;
}

/// Wraps an angle to [-pi, pi).
template <typename Scalar>
Scalar wrap_to_pi(Scalar a) {
  using std::floor;
  const Scalar two_pi = Scalar(2 * std::numbers::pi);
  const Scalar pi = Scalar(std::numbers::pi);
  Scalar w = a - two_pi * floor((a + pi) / two_pi);
  if (w >= pi) w -= two_pi;
  if (w < -pi) w += two_pi;
  return w;
}

struct VesselState {
  Vec2 position = Vec2::Zero();  ///< North-East
  double heading = 0.0;
  Vec3 nu = Vec3::Zero();  ///< surge, sway, yaw rate

  double surge() const { return nu(0); }
  double sway() const { return nu(1); }
  double yaw_rate() const { return nu(2); }
  /// Earth-fixed velocity R(psi) [u, v].
  Vec2 ne_velocity() const { return rotation(heading) * nu.head<2>(); }
};

/// 3DOF model M nu' + C(nu) nu + D nu = tau. The default matrices are
/// placeholders of model-ship scale, not identified values.
class VesselParams {
 public:
  VesselParams();
  /// Throws ConfigError unless M is symmetric positive definite.
  VesselParams(const Eigen::Matrix3d& M, const Eigen::Matrix3d& D);

  const Eigen::Matrix3d& inertia() const { return M_; }
  const Eigen::Matrix3d& damping() const { return D_; }
  const Eigen::Matrix3d& inertia_inverse() const { return M_inv_; }

  /// Rigid-body Coriolis/centripetal matrix built from M (skew-symmetric).
  Eigen::Matrix3d coriolis(const Vec3& nu) const;

  bool operator==(const VesselParams& o) const { return M_ == o.M_ && D_ == o.D_; }

 private:
  Eigen::Matrix3d M_;
  Eigen::Matrix3d D_;
  Eigen::Matrix3d M_inv_;
};

struct StateDerivative {
  Vec2 position_dot = Vec2::Zero();
  double heading_dot = 0.0;
  Vec3 nu_dot = Vec3::Zero();
};

StateDerivative derivative(const VesselState& state, const Vec3& tau,
                           const VesselParams& params);

/// Classical RK4 with tau held over the step. Throws NumericalBlowupError when
/// the result is not finite.
VesselState step(const VesselState& state, const Vec3& tau,
                 const VesselParams& params, double dt);

/// 1/2 nu^T M nu
double kinetic_energy(const VesselState& state, const VesselParams& params);

}  // namespace streamguide

#endif  // STREAMGUIDE_VESSEL_HPP
