#include "streamguide/pathgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Cholesky>

namespace streamguide {

namespace {

Eigen::Matrix3d make_cost_matrix() {
  Eigen::Matrix3d Q;
  Q << 24500, -7350, 980,
       -7350, 2646, -441,
       980, -441, 98;
  if (Eigen::LLT<Eigen::Matrix3d>(Q).info() != Eigen::Success) {
    throw DomainError("corridor cost matrix is not positive definite");
  }
  return Q;
}

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::fmod(a + pi, 2 * pi);
  if (a < 0) a += 2 * pi;
  return a - pi;
}

}  // namespace

const Eigen::Matrix3d& corridor_cost_matrix() {
  static const Eigen::Matrix3d Q = make_cost_matrix();
  return Q;
}

double chord_angle(const Vec2& a, const Vec2& b) {
  return std::atan2(b.y() - a.y(), b.x() - a.x());
}

BezierSegment first_segment(const Vec2& wp0, const Vec2& wp1, double zeta,
                            int segment_index) {
  if ((wp1 - wp0).norm() < 1e-12) {
    throw DegenerateSegmentError("first_segment: coincident waypoints");
  }
  BezierSegment seg;
  seg.segment_index = segment_index;
  const Vec2 chord = wp1 - wp0;
  for (int i = 0; i <= 3; ++i) {
    seg.control_points.row(i) = (wp0 + chord * (i / 3.0) * (zeta / 2.0)).transpose();
  }
  for (int i = 4; i <= 7; ++i) {
    seg.control_points.row(i) = (wp1 - chord * ((7 - i) / 3.0) * (zeta / 2.0)).transpose();
  }
  return seg;
}

Eigen::Matrix<double, 4, 2> continuation_points(const BezierSegment& prev) {
  const Vec2 p4 = prev.point(4);
  const Vec2 p5 = prev.point(5);
  const Vec2 p6 = prev.point(6);
  const Vec2 p7 = prev.point(7);
  // Forward substitution of [[1,0,0],[-2,1,0],[3,-3,1]] [P1;P2;P3] = rhs.
  const Vec2 p1 = 2 * p7 - p6;
  const Vec2 p2 = (-2 * p6 + p5) + 2 * p1;
  const Vec2 p3 = (2 * p7 - 3 * p6 + 3 * p5 - p4) - 3 * p1 + 3 * p2;
  Eigen::Matrix<double, 4, 2> out;
  out.row(0) = p7.transpose();
  out.row(1) = p1.transpose();
  out.row(2) = p2.transpose();
  out.row(3) = p3.transpose();
  return out;
}

Eigen::MatrixXd CorridorQP::rows() const {
  Eigen::MatrixXd r(16, 3);
  r << A, -Eigen::Matrix3d::Identity(), Eigen::Matrix3d::Identity();
  return r;
}

Eigen::VectorXd CorridorQP::rhs() const {
  Eigen::VectorXd v(16);
  v << c, Eigen::Vector3d::Zero(), Eigen::Vector3d::Constant(x7);
  return v;
}

CorridorQP corridor_problem(const Eigen::Vector4d& head_x, double x7,
                            double zeta, double eps) {
  CorridorQP p;
  p.Q = corridor_cost_matrix();
  p.x7 = x7;
  p.zeta = zeta;
  p.eps = eps;
  const double x0 = head_x(0), x1 = head_x(1), x2 = head_x(2), x3 = head_x(3);
  p.q << 8400 * x0 - 41160 * x1 + 82320 * x2 - 85750 * x3 - 70 * x7,
         -1512 * x0 + 8232 * x1 - 18522 * x2 + 22050 * x3 + 42 * x7,
         112 * x0 - 686 * x1 + 1764 * x2 - 2450 * x3 - 14 * x7;
  // Columns act on (chi1, chi2, chi3). With the next segment's
  // x1' = 2 x7 - chi3, x2' = 4 x7 - 4 chi3 + chi2,
  // x3' = 8 x7 - 12 chi3 + 6 chi2 - chi1:
  p.A << 1, -1, 0,      // chi1 <= chi2
         0, 1, -1,      // chi2 <= chi3
         0, 0, -1,      // x1' <= x7 + zeta/2
         0, 1, -4,      // x2' <= x7 + zeta/2
         -1, 6, -12,    // x3' <= x7 + zeta/2
         0, 0, 1,       // curvature
         0, -1, 4,      // curvature
         1, -6, 12,     // curvature
         0, -1, 3,      // x1' <= x2'
         1, -5, 8;      // x2' <= x3'
  const double h = zeta / 2.0;
  p.c << 0, 0, -x7 + h, -3 * x7 + h, -7 * x7 + h, x7 - eps, 3 * x7 - eps,
         7 * x7 - eps, 2 * x7, 4 * x7;
  return p;
}

CorridorStep solve_corridor_qp(const Vec2& wp_prev, const Vec2& wp_k,
                               const Vec2& wp_next, const BezierSegment& prev,
                               double zeta, double eps) {
  const double x7 = (wp_next - wp_k).norm();
  if (x7 < 1e-12 || (wp_k - wp_prev).norm() < 1e-12) {
    throw DegenerateSegmentError("solve_corridor_qp: coincident waypoints");
  }
  const double alpha_prev = chord_angle(wp_prev, wp_k);
  const double alpha = chord_angle(wp_k, wp_next);
  if (std::abs(wrap_angle(alpha - alpha_prev)) > std::numbers::pi - 1e-9) {
    throw PathInfeasibleError("solve_corridor_qp: path reverses onto itself", {});
  }

  const Eigen::Matrix<double, 4, 2> head = continuation_points(prev);
  const Vec2 axis(std::cos(alpha), std::sin(alpha));
  Eigen::Vector4d head_x;
  for (int i = 0; i < 4; ++i) {
    head_x(i) = (head.row(i).transpose() - wp_k).dot(axis);
  }

  CorridorStep step;
  step.alpha = alpha;
  step.problem = corridor_problem(head_x, x7, zeta, eps);
  try {
    step.solution = qp_solve_rows<double>(step.problem.Q, step.problem.q,
                                          step.problem.rows(), step.problem.rhs());
  } catch (const InfeasibleError& e) {
    std::ostringstream os;
    os << "solve_corridor_qp: infeasible corridor (chord " << x7
       << " m, zeta " << zeta << ", eps " << eps << "), conflicting rows:";
    for (int r : e.rows()) os << ' ' << r;
    throw PathInfeasibleError(os.str(), e.rows());
  }
  step.chi = step.solution.x;

  BezierSegment& seg = step.segment;
  seg.segment_index = prev.segment_index + 1;
  seg.control_points.topRows<4>() = head;
  for (int j = 0; j < 3; ++j) {
    seg.control_points.row(4 + j) = (wp_k + step.chi(j) * axis).transpose();
  }
  seg.control_points.row(7) = wp_next.transpose();
  return step;
}

double max_joint_mismatch(const std::vector<BezierSegment>& segments) {
  double worst = 0.0;
  for (std::size_t i = 1; i < segments.size(); ++i) {
    for (int order = 0; order <= 3; ++order) {
      const Vec2 a = eval_bezier(segments[i - 1], 1.0, order);
      const Vec2 b = eval_bezier(segments[i], 0.0, order);
      worst = std::max(worst, (a - b).norm());
    }
  }
  return worst;
}

}  // namespace streamguide
