#ifndef STREAMGUIDE_PATHGEN_HPP
#define STREAMGUIDE_PATHGEN_HPP

#include <vector>

#include <Eigen/Core>

#include "streamguide/bezier.hpp"
#include "streamguide/qp.hpp"
#include "streamguide/workspace.hpp"

namespace streamguide {

struct PathParams {
  double corridor_width = 0.5;     ///< zeta
  double curvature_margin = 0.005; ///< epsilon

  bool operator==(const PathParams&) const = default;
};

/// Straight-line placement of the first segment from `wp0` to `wp1`.
BezierSegment first_segment(const Vec2& wp0, const Vec2& wp1, double zeta,
                            int segment_index = 1);

/// P_0..P_3 (rows) of the segment following `prev`, fixed by matching the
/// first three derivatives at the joint.
Eigen::Matrix<double, 4, 2> continuation_points(const BezierSegment& prev);

/// Quadratic program over chi = path-frame x-coordinates of P_4, P_5, P_6:
///
///   min chi^T Q chi + q^T chi   s.t.  A chi <= c,  0 <= chi <= x7.
///
/// Rows of A, in order: chi ordering (2), corridor bound on the x-coordinates
/// of the next segment's P_1..P_3 (3), curvature (3), ordering of the next
/// segment's P_1..P_3 (2). Every row is expressed in the frame of the
/// segment being built (origin at its first waypoint, x along its chord), so
/// x7 is the chord length.
struct CorridorQP {
  Eigen::Matrix3d Q;
  Eigen::Vector3d q;
  Eigen::Matrix<double, 10, 3> A;
  Eigen::Matrix<double, 10, 1> c;
  double x7 = 0.0;
  double zeta = 0.5;
  double eps = 0.005;

  /// All 16 rows (A, then -chi <= 0, then chi <= x7).
  Eigen::MatrixXd rows() const;
  Eigen::VectorXd rhs() const;
  double objective(const Eigen::Vector3d& chi) const { return chi.dot(Q * chi) + q.dot(chi); }
};

/// The constant Hessian of the corridor objective.
const Eigen::Matrix3d& corridor_cost_matrix();

/// Assembles the QP from the frame x-coordinates of the fixed points
/// P_0..P_3 and the chord length x7.
CorridorQP corridor_problem(const Eigen::Vector4d& head_x, double x7,
                            double zeta, double eps);

struct CorridorStep {
  BezierSegment segment;
  Eigen::Vector3d chi = Eigen::Vector3d::Zero();
  double alpha = 0.0;  ///< chord angle of the new segment
  CorridorQP problem;
  QpSolution<double> solution;
};

/// Builds the segment from `wp_k` to `wp_next` that continues `prev` with C3
/// continuity: P_0..P_3 from continuation_points, P_4..P_6 on the new chord at
/// the QP optimum, P_7 = wp_next. `wp_prev` is the start of `prev` and is used
/// to reject full reversals.
CorridorStep solve_corridor_qp(const Vec2& wp_prev, const Vec2& wp_k,
                               const Vec2& wp_next, const BezierSegment& prev,
                               double zeta, double eps);

/// Largest difference of the theta-derivatives of orders 0..3 across all
/// joints of consecutive segments.
double max_joint_mismatch(const std::vector<BezierSegment>& segments);

/// Chord angle atan2(dy, dx) from `a` to `b`.
double chord_angle(const Vec2& a, const Vec2& b);

}  // namespace streamguide

#endif  // STREAMGUIDE_PATHGEN_HPP
