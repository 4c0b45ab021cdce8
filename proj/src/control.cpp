#include "streamguide/control.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

#include "streamguide/errors.hpp"

namespace streamguide {

namespace {

const Eigen::Matrix2d kSkew = (Eigen::Matrix2d() << 0, -1, 1, 0).finished();

bool positive_definite(const Eigen::MatrixXd& K) {
  const Eigen::MatrixXd sym = 0.5 * (K + K.transpose());
  return Eigen::LLT<Eigen::MatrixXd>(sym).info() == Eigen::Success;
}

}  // namespace

void ControlGains::validate() const {
  if ((K_p - K_p.transpose()).cwiseAbs().maxCoeff() > 1e-12 || !positive_definite(K_p)) {
    throw ConfigError("controller: K_p must be symmetric positive definite");
  }
  if (!(k_psi > 0.0)) throw ConfigError("controller: k_psi must be positive");
  if (!positive_definite(K_nu)) throw ConfigError("controller: K_nu must be positive definite");
  if (!(mu >= 0.0)) throw ConfigError("controller: mu must be >= 0");
  if (!(eps_reg > 0.0)) throw ConfigError("controller: eps_reg must be positive");
  if (!(u_d > 0.0)) throw ConfigError("controller: u_d must be positive");
}

PathSignal path_signal(std::span<const BezierSegment> segments, double s,
                       double u_d, double eps_reg) {
  const double count = static_cast<double>(segments.size());
  if (!(s >= 0.0) || s > count || segments.empty()) {
    std::ostringstream os;
    os << "path parameter " << s << " outside [0, " << count << "]";
    throw PathExhaustedError(os.str());
  }
  PathSignal sig;
  sig.s = s;
  double whole = std::floor(s);
  double theta = s - whole;
  if (whole >= count) {  // s at the very end of the path
    whole = count - 1;
    theta = 1.0;
  }
  sig.segment = static_cast<int>(whole) + 1;
  sig.theta = theta;

  const BezierSegment& seg = segments[static_cast<std::size_t>(whole)];
  sig.p_d = eval_bezier(seg, theta, 0);
  sig.p_d_s = eval_bezier(seg, theta, 1);
  sig.p_d_s2 = eval_bezier(seg, theta, 2);
  sig.p_d_s3 = eval_bezier(seg, theta, 3);

  const Vec2& d1 = sig.p_d_s;
  const Vec2& d2 = sig.p_d_s2;
  const Vec2& d3 = sig.p_d_s3;
  const double speed2 = d1.squaredNorm();
  const double speed = std::sqrt(speed2);
  sig.psi_d = std::atan2(d1.y(), d1.x());
  if (speed2 > 0.0) {
    const double num = d1.x() * d2.y() - d1.y() * d2.x();
    const double num_s = d1.x() * d3.y() - d1.y() * d3.x();
    const double den_s = 2.0 * d1.dot(d2);
    sig.psi_d_s = num / speed2;
    sig.psi_d_s2 = (num_s * speed2 - num * den_s) / (speed2 * speed2);
  }
  const double denom = speed + eps_reg;
  sig.speed_assign = u_d / denom;
  const double speed_s = speed > 0.0 ? d1.dot(d2) / speed : 0.0;
  sig.speed_assign_s = -u_d * speed_s / (denom * denom);
  return sig;
}

PathSignal frozen_signal(PathSignal sig) {
  sig.frozen = true;
  sig.speed_assign = 0.0;
  sig.speed_assign_s = 0.0;
  return sig;
}

double update_law(const Vec2& p, const PathSignal& sig, const ControlGains& gains) {
  if (sig.frozen) return 0.0;
  return gains.mu * sig.p_d_s.dot(p - sig.p_d) / (sig.p_d_s.norm() + gains.eps_reg);
}

Vec3 virtual_control(const VesselState& state, const PathSignal& sig,
                     const ControlGains& gains) {
  const Eigen::Matrix2d Rt = rotation(state.heading).transpose();
  const Vec2 z_p = Rt * (state.position - sig.p_d);
  const double z_psi = wrap_to_pi(state.heading - sig.psi_d);
  Vec3 alpha;
  alpha.head<2>() = -gains.K_p * z_p + Rt * sig.p_d_s * sig.speed_assign;
  alpha(2) = -gains.k_psi * z_psi + sig.psi_d_s * sig.speed_assign;
  return alpha;
}

ControlOutput control_law(const VesselState& state, const PathSignal& sig,
                          const ControlGains& gains, const VesselParams& params) {
  const Eigen::Matrix2d Rt = rotation(state.heading).transpose();
  const double vartheta = sig.speed_assign;
  const double r = state.yaw_rate();
  const Vec2 v = state.nu.head<2>();

  ControlOutput out;
  ErrorState& e = out.errors;
  e.z_p = Rt * (state.position - sig.p_d);
  e.z_psi = wrap_to_pi(state.heading - sig.psi_d);
  e.omega = update_law(state.position, sig, gains);
  out.s_dot = vartheta + e.omega;

  const double psi_bar_dot = sig.psi_d_s * vartheta;
  const double psi_bar_ddot =
      (sig.psi_d_s2 * vartheta + sig.psi_d_s * sig.speed_assign_s) * out.s_dot;
  const Vec2 tangent_body = Rt * sig.p_d_s;

  out.alpha.head<2>() = -gains.K_p * e.z_p + tangent_body * vartheta;
  out.alpha(2) = -gains.k_psi * e.z_psi + psi_bar_dot;
  e.z_nu = state.nu - out.alpha;

  // Time derivatives along the closed loop.
  const Vec2 z_p_dot = -r * kSkew * e.z_p + v - tangent_body * out.s_dot;
  const double z_psi_dot = r - psi_bar_dot;
  out.alpha_dot.head<2>() =
      -gains.K_p * z_p_dot - r * kSkew * tangent_body * vartheta +
      Rt * (sig.p_d_s2 * vartheta + sig.p_d_s * sig.speed_assign_s) * out.s_dot;
  out.alpha_dot(2) = -gains.k_psi * z_psi_dot + psi_bar_ddot;

  out.tau = -gains.K_nu * e.z_nu - params.coriolis(state.nu) * state.nu +
            params.damping() * out.alpha + params.inertia() * out.alpha_dot;

  if (!out.tau.allFinite() || !out.alpha_dot.allFinite()) {
    std::ostringstream os;
    os << "controller produced a non-finite output at s = " << sig.s
       << ": z_p [" << e.z_p.transpose() << "], z_psi " << e.z_psi << ", z_nu ["
       << e.z_nu.transpose() << "], omega " << e.omega;
    throw ControllerFault(os.str());
  }
  return out;
}

}  // namespace streamguide
