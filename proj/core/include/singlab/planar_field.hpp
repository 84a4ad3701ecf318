#pragma once

// Feature-valued maps on a two-dimensional parameter plane. Slices of data
// space, synthetic test maps and the radial oscillator all present themselves
// through this interface to the winding, localization and derivative tools.

#include <memory>
#include <optional>
#include <vector>

#include "singlab/data_maps.hpp"
#include "singlab/geometry.hpp"

namespace singlab {

class PlanarField {
 public:
  virtual ~PlanarField() = default;

  virtual FeatureKind feature_kind() const = 0;
  virtual EvalOutcome eval(Vec2 u) const = 0;

  /// Upper bound on feature_distance(eval(u), eval(v)) over |v - u| <= radius.
  /// Empty when the field offers no certificate (callers fall back to step
  /// size checks); +inf when the disk may reach the singular set.
  virtual std::optional<double> drift_bound(Vec2 u, const EvalOutcome& at_u, double radius) const = 0;
};

/// Synthetic map with prescribed point singularities: the feature angle is
/// sum_j (k_j / 2) * arg(u - c_j). As a line direction the degree around c_j
/// is k_j half-turns; as a circle point (circle = true) the angle is
/// sum_j k_j * arg(u - c_j) and the degree is k_j full turns.
class SyntheticArgField final : public PlanarField {
 public:
  struct Pole {
    Vec2 center;
    int k = 1;
  };

  explicit SyntheticArgField(std::vector<Pole> poles, bool circle = false);
  static SyntheticArgField half_angle(int k = 1) { return SyntheticArgField({{{0.0, 0.0}, k}}); }

  FeatureKind feature_kind() const override;
  EvalOutcome eval(Vec2 u) const override;
  std::optional<double> drift_bound(Vec2 u, const EvalOutcome& at_u, double radius) const override;

  const std::vector<Pole>& poles() const { return poles_; }

 private:
  std::vector<Pole> poles_;
  bool circle_;
};

/// u -> Scalar(g(|u|)) on the closed unit disk; no drift certificate.
class RadialOscillatorField final : public PlanarField {
 public:
  FeatureKind feature_kind() const override { return FeatureKind::Scalar; }
  EvalOutcome eval(Vec2 u) const override;
  std::optional<double> drift_bound(Vec2, const EvalOutcome&, double) const override { return std::nullopt; }
};

/// A field whose value never changes; useful as a degree-zero reference.
class ConstantField final : public PlanarField {
 public:
  explicit ConstantField(Feature value) : value_(std::move(value)) {}
  FeatureKind feature_kind() const override { return kind_of(value_); }
  EvalOutcome eval(Vec2) const override { return EvalOutcome::defined(value_, 1.0); }
  std::optional<double> drift_bound(Vec2, const EvalOutcome&, double) const override { return 0.0; }

 private:
  Feature value_;
};

}  // namespace singlab
