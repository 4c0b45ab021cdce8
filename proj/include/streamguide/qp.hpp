#ifndef STREAMGUIDE_QP_HPP
#define STREAMGUIDE_QP_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "streamguide/errors.hpp"

namespace streamguide {

template <typename Scalar>
struct QpSolution {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  /// One multiplier per inequality row (general rows, then lower, then
  /// upper bounds); zero for inactive rows.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> multipliers;
  std::vector<int> active;
  Scalar objective = Scalar(0);
  int iterations = 0;
};

/// Dense dual active-set method (Goldfarb-Idnani) for
///
///   min  x^T Q x + q^T x   s.t.  rows^T x <= rhs
///
/// with Q symmetric positive definite. Starts from the unconstrained minimum
/// and adds violated rows one at a time while keeping dual feasibility, so no
/// feasible starting point is needed and an empty feasible set is detected
/// directly.
template <typename Scalar>
QpSolution<Scalar> qp_solve_rows(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& Q,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& q,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& rows,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& rhs,
    int max_iterations = 200) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = Q.rows();
  const Eigen::Index m = rows.rows();
  if (Q.cols() != n || q.size() != n || rows.cols() != n || rhs.size() != m) {
    throw DomainError("qp_solve: inconsistent dimensions");
  }
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() >
      Scalar(1e-12) * (Scalar(1) + Q.cwiseAbs().maxCoeff())) {
    throw DomainError("qp_solve: Q is not symmetric");
  }
  // Objective x^T Q x + q^T x is 1/2 x^T G x + g^T x with G = 2Q.
  const Matrix G = Scalar(2) * Q;
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) {
    throw DomainError("qp_solve: Q is not positive definite");
  }
  const Matrix Ginv = llt.solve(Matrix::Identity(n, n));

  // Rows are handled as n_i^T x >= b_i with n_i = -row_i, b_i = -rhs_i.
  const Matrix N_all = -rows.transpose();
  const Vector b_all = -rhs;
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  const Scalar feas_tol = Scalar(1e-11);

  Vector x = -Ginv * q;
  std::vector<int> active;
  std::vector<Scalar> u;  // multipliers of `active`
  int iterations = 0;

  auto slack = [&](Eigen::Index i) {
    const Scalar scale = Scalar(1) + std::abs(b_all(i));
    return (N_all.col(i).dot(x) - b_all(i)) / scale;
  };

  while (true) {
    Eigen::Index p = -1;
    Scalar worst = -feas_tol;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      const Scalar s = slack(i);
      if (s < worst) {
        worst = s;
        p = i;
      }
    }
    if (p < 0) break;

    const Vector np = N_all.col(p);
    std::vector<Scalar> u_plus = u;
    u_plus.push_back(Scalar(0));

    while (true) {
      if (++iterations > max_iterations) {
        throw ConvergenceError("qp_solve: iteration limit reached");
      }
      const Eigen::Index k = static_cast<Eigen::Index>(active.size());
      Vector z;
      Vector r(k);
      if (k == 0) {
        z = Ginv * np;
      } else {
        Matrix N(n, k);
        for (Eigen::Index j = 0; j < k; ++j) N.col(j) = N_all.col(active[j]);
        const Matrix GN = Ginv * N;
        const Matrix NtGN = N.transpose() * GN;
        const Matrix Nstar = NtGN.ldlt().solve(GN.transpose());
        r = Nstar * np;
        z = Ginv * np - GN * r;
      }

      Scalar t1 = inf;
      Eigen::Index drop = -1;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (r(j) > Scalar(0)) {
          const Scalar ratio = u_plus[j] / r(j);
          if (ratio < t1) {
            t1 = ratio;
            drop = j;
          }
        }
      }
      const Scalar zn = z.dot(np);
      const Scalar step_tol = Scalar(1e-14) * (Scalar(1) + np.squaredNorm());
      Scalar t2 = inf;
      if (zn > step_tol) t2 = -(np.dot(x) - b_all(p)) / zn;

      const Scalar t = std::min(t1, t2);
      if (t == inf) {
        std::vector<int> conflict(active.begin(), active.end());
        conflict.push_back(static_cast<int>(p));
        std::sort(conflict.begin(), conflict.end());
        throw InfeasibleError("qp_solve: constraints are infeasible", conflict);
      }

      for (Eigen::Index j = 0; j < k; ++j) u_plus[j] -= t * r(j);
      u_plus[k] += t;

      if (t2 == inf) {
        active.erase(active.begin() + drop);
        u_plus.erase(u_plus.begin() + drop);
        continue;
      }
      x += t * z;
      if (t2 <= t1) {
        active.push_back(static_cast<int>(p));
        u = u_plus;
        break;
      }
      active.erase(active.begin() + drop);
      u_plus.erase(u_plus.begin() + drop);
    }
  }

  QpSolution<Scalar> sol;
  sol.x = x;
  sol.multipliers = Vector::Zero(m);
  for (std::size_t j = 0; j < active.size(); ++j) {
    sol.multipliers(active[j]) = u[j];
  }
  sol.active = active;
  std::sort(sol.active.begin(), sol.active.end());
  sol.objective = x.dot(Q * x) + q.dot(x);
  sol.iterations = iterations;
  return sol;
}

/// Box-and-row form: min x^T Q x + q^T x s.t. A x <= c, lo <= x <= hi.
/// Row order of the multipliers: A, then -x <= -lo, then x <= hi.
template <typename Scalar>
QpSolution<Scalar> qp_solve(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& Q,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& q,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& lo,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& hi,
    int max_iterations = 200) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = Q.rows();
  if (lo.size() != n || hi.size() != n) {
    throw DomainError("qp_solve: bound vectors have the wrong size");
  }
  if ((lo.array() > hi.array()).any()) {
    throw InfeasibleError("qp_solve: lower bound above upper bound", {});
  }
  const Eigen::Index m = A.rows();
  Matrix rows(m + 2 * n, n);
  Vector rhs(m + 2 * n);
  rows << A, -Matrix::Identity(n, n), Matrix::Identity(n, n);
  rhs << c, -lo, hi;
  return qp_solve_rows<Scalar>(Q, q, rows, rhs, max_iterations);
}

/// max_i (row_i^T x - rhs_i), i.e. the worst primal violation (<= 0 when
/// feasible).
template <typename Scalar>
Scalar max_violation(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& rows,
                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& rhs,
                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) {
  return (rows * x - rhs).maxCoeff();
}

}  // namespace streamguide

#endif  // STREAMGUIDE_QP_HPP
