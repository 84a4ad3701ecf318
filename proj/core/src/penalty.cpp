#include "penalty.hpp"

#include <cmath>

#include <unsupported/Eigen/NonLinearOptimization>

namespace singlab::detail {

namespace {

struct PenaltyFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const PenaltyModel& model;
  double weight;   // square root of the penalty parameter

  int inputs() const { return static_cast<int>(model.A.cols()); }
  int values() const { return static_cast<int>(model.A.rows()) + 2; }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
    const auto m = model.A.rows();
    f.resize(m + 2);
    f.head(m) = model.A * p - model.b;
    f.tail(2) = weight * model.constraint(p);
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const {
    const auto m = model.A.rows();
    jac.resize(m + 2, model.A.cols());
    jac.topRows(m) = model.A;
    jac.bottomRows(2) = weight * model.constraint_jacobian(p);
    return 0;
  }
};

}  // namespace

std::optional<Eigen::VectorXd> penalty_continuation(const PenaltyModel& model, Eigen::VectorXd start,
                                                    double feasibility_tol) {
  Eigen::VectorXd p = std::move(start);
  for (double mu = 1.0; mu <= 1e14; mu *= 10.0) {
    PenaltyFunctor functor{model, std::sqrt(mu)};
    Eigen::LevenbergMarquardt<PenaltyFunctor> lm(functor);
    lm.parameters.xtol = 1e-15;
    lm.parameters.ftol = 1e-15;
    lm.parameters.maxfev = 2000;
    lm.minimize(p);
    if (!p.allFinite()) return std::nullopt;
  }
  if (model.constraint(p).norm() > feasibility_tol) return std::nullopt;
  return p;
}

}  // namespace singlab::detail
