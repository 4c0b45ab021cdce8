#include "streamguide/vessel.hpp"

#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "streamguide/errors.hpp"

namespace streamguide {

namespace {

Eigen::Matrix3d default_inertia() { return Vec3(30.0, 40.0, 6.0).asDiagonal(); }
Eigen::Matrix3d default_damping() { return Vec3(50.0, 50.0, 10.0).asDiagonal(); }

using Packed = Eigen::Matrix<double, 6, 1>;  // x, y, psi, u, v, r

Packed pack(const VesselState& s) {
  Packed out;
  out << s.position, s.heading, s.nu;
  return out;
}

Packed packed_derivative(const Packed& x, const Vec3& tau, const VesselParams& params) {
  VesselState s;
  s.position = x.head<2>();
  s.heading = x(2);
  s.nu = x.tail<3>();
  const StateDerivative d = derivative(s, tau, params);
  Packed out;
  out << d.position_dot, d.heading_dot, d.nu_dot;
  return out;
}

}  // namespace

VesselParams::VesselParams() : VesselParams(default_inertia(), default_damping()) {}

VesselParams::VesselParams(const Eigen::Matrix3d& M, const Eigen::Matrix3d& D)
    : M_(M), D_(D) {
  if (!M.allFinite() || !D.allFinite()) {
    throw ConfigError("vessel: non-finite inertia or damping");
  }
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + M.cwiseAbs().maxCoeff())) {
    throw ConfigError("vessel: inertia matrix is not symmetric");
  }
  if (Eigen::LLT<Eigen::Matrix3d>(M).info() != Eigen::Success) {
    throw ConfigError("vessel: inertia matrix is not positive definite");
  }
  M_inv_ = M.inverse();
}

Eigen::Matrix3d VesselParams::coriolis(const Vec3& nu) const {
  const double u = nu(0), v = nu(1), r = nu(2);
  const double a = M_(1, 1) * v + 0.5 * (M_(1, 2) + M_(2, 1)) * r;
  const double b = M_(0, 0) * u;
  Eigen::Matrix3d C;
  C << 0, 0, -a,
       0, 0, b,
       a, -b, 0;
  return C;
}

StateDerivative derivative(const VesselState& state, const Vec3& tau,
                           const VesselParams& params) {
  StateDerivative d;
  d.position_dot = rotation(state.heading) * state.nu.head<2>();
  d.heading_dot = state.nu(2);
  d.nu_dot = params.inertia_inverse() *
             (tau - params.coriolis(state.nu) * state.nu - params.damping() * state.nu);
  return d;
}

VesselState step(const VesselState& state, const Vec3& tau,
                 const VesselParams& params, double dt) {
  if (!(dt > 0.0)) throw DomainError("step: dt must be positive");
  const Packed x = pack(state);
  const Packed k1 = packed_derivative(x, tau, params);
  const Packed k2 = packed_derivative(x + 0.5 * dt * k1, tau, params);
  const Packed k3 = packed_derivative(x + 0.5 * dt * k2, tau, params);
  const Packed k4 = packed_derivative(x + dt * k3, tau, params);
  const Packed next = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) {
    std::ostringstream os;
    os << "vessel step produced a non-finite state; start state [" << x.transpose()
       << "], tau [" << tau.transpose() << "], dt " << dt;
    throw NumericalBlowupError(os.str());
  }
  VesselState out;
  out.position = next.head<2>();
  out.heading = wrap_to_pi(next(2));
  out.nu = next.tail<3>();
  return out;
}

double kinetic_energy(const VesselState& state, const VesselParams& params) {
  return 0.5 * state.nu.dot(params.inertia() * state.nu);
}

}  // namespace streamguide
