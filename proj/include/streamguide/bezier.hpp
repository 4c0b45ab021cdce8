#ifndef STREAMGUIDE_BEZIER_HPP
#define STREAMGUIDE_BEZIER_HPP

#include <Eigen/Core>

#include "streamguide/errors.hpp"

namespace streamguide {

/// Lower-triangular change of basis from monomials to Bernstein polynomials:
/// b(theta) = P^T B^T a(theta) with a(theta) = [1, theta, ..., theta^n].
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> bernstein_matrix(int n) {
  if (n < 1) throw DomainError("bernstein_matrix: degree must be >= 1");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> fact(n + 1);
  fact(0) = Scalar(1);
  for (int i = 1; i <= n; ++i) fact(i) = fact(i - 1) * Scalar(i);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> B =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const Scalar sign = ((i - j) % 2 == 0) ? Scalar(1) : Scalar(-1);
      B(i, j) = sign * fact(n) / fact(n - i) / (fact(j) * fact(i - j));
    }
  }
  return B;
}

/// `order`-th theta-derivative of the monomial vector a(theta).
template <typename Scalar, int Size>
Eigen::Matrix<Scalar, Size, 1> monomial_derivative(Scalar theta, int order) {
  Eigen::Matrix<Scalar, Size, 1> a = Eigen::Matrix<Scalar, Size, 1>::Zero();
  for (int j = order; j < Size; ++j) {
    Scalar coeff(1);
    for (int k = 0; k < order; ++k) coeff *= Scalar(j - k);
    Scalar power(1);
    for (int k = 0; k < j - order; ++k) power *= theta;
    a(j) = coeff * power;
  }
  return a;
}

inline constexpr int kBezierDegree = 7;
inline constexpr int kControlPoints = kBezierDegree + 1;

/// Degree-7 planar Bezier segment. Row i of `control_points` is P_i.
template <typename Scalar>
struct BezierSegmentT {
  using Points = Eigen::Matrix<Scalar, kControlPoints, 2>;
  using Vec = Eigen::Matrix<Scalar, 2, 1>;

  Points control_points = Points::Zero();
  int segment_index = 1;

  Vec point(int i) const { return control_points.row(i).transpose(); }
  Vec start() const { return point(0); }
  Vec end() const { return point(kBezierDegree); }

  /// Monomial coefficients B P, so that b^(k)(theta) = (B P)^T a^(k)(theta).
  Points coefficients() const {
    static const Eigen::Matrix<Scalar, kControlPoints, kControlPoints> B =
        bernstein_matrix<Scalar>(kBezierDegree);
    return B * control_points;
  }

  bool operator==(const BezierSegmentT& o) const {
    return control_points == o.control_points && segment_index == o.segment_index;
  }
};

using BezierSegment = BezierSegmentT<double>;

/// Position (order 0) or theta-derivative (orders 1 to 3) of `seg`.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> eval_bezier(const BezierSegmentT<Scalar>& seg,
                                        Scalar theta, int order = 0) {
  if (!(theta >= Scalar(0) && theta <= Scalar(1))) {
    throw DomainError("eval_bezier: theta outside [0, 1]");
  }
  if (order < 0 || order > 3) {
    throw DomainError("eval_bezier: derivative order must be in 0..3");
  }
  return seg.coefficients().transpose() *
         monomial_derivative<Scalar, kControlPoints>(theta, order);
}

}  // namespace streamguide

#endif  // STREAMGUIDE_BEZIER_HPP
