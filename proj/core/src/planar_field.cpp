#include "singlab/planar_field.hpp"

#include <limits>

#include "singlab/errors.hpp"

namespace singlab {

SyntheticArgField::SyntheticArgField(std::vector<Pole> poles, bool circle)
    : poles_(std::move(poles)), circle_(circle) {
  require(!poles_.empty(), ErrorCode::ContractViolation, "synthetic field needs at least one pole");
}

FeatureKind SyntheticArgField::feature_kind() const {
  return circle_ ? FeatureKind::CirclePoint : FeatureKind::LineDirection;
}

EvalOutcome SyntheticArgField::eval(Vec2 u) const {
  double angle = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& p : poles_) {
    const Vec2 d = u - p.center;
    const double r = d.norm();
    if (r == 0.0) return EvalOutcome::undefined(UndefinedReason::Origin);
    gap = std::min(gap, r);
    angle += (circle_ ? 1.0 : 0.5) * p.k * std::atan2(d.y, d.x);
  }
  if (circle_) return EvalOutcome::defined(CirclePoint::from_angle(angle), gap);
  return EvalOutcome::defined(LineDirection(angle), gap);
}

std::optional<double> SyntheticArgField::drift_bound(Vec2 u, const EvalOutcome&, double radius) const {
  // arg(v - c) stays within asin(radius / |u - c|) of arg(u - c) on the disk.
  double total = 0.0;
  for (const auto& p : poles_) {
    const double r = (u - p.center).norm();
    if (!(radius < r)) return std::numeric_limits<double>::infinity();
    total += (circle_ ? 1.0 : 0.5) * std::abs(p.k) * std::asin(radius / r);
  }
  return total;
}

EvalOutcome RadialOscillatorField::eval(Vec2 u) const {
  return eval_radial_oscillator(EuclideanPoint(u));
}

}  // namespace singlab
