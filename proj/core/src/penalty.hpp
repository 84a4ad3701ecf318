#pragma once

// Penalty continuation for nearest-point problems of the form
//   minimize |A p - b|  subject to  c(p) = 0  (two scalar constraints),
// solved as a sequence of Levenberg-Marquardt least-squares problems with a
// growing penalty weight on c.

#include <functional>
#include <optional>

#include <Eigen/Dense>

namespace singlab::detail {

struct PenaltyModel {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::function<Eigen::Vector2d(const Eigen::VectorXd&)> constraint;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> constraint_jacobian;   // 2 x n
};

/// Returns the final iterate when |c(p)| <= feasibility_tol, otherwise empty.
std::optional<Eigen::VectorXd> penalty_continuation(const PenaltyModel& model, Eigen::VectorXd start,
                                                    double feasibility_tol = 1e-10);

}  // namespace singlab::detail
