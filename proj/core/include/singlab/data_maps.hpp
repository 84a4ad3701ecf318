#pragma once

// Concrete data maps: line fitters (least squares, principal components, least
// absolute deviation), the augmented directional mean, a disk decision rule and
// the radial oscillator. Each evaluation returns the feature (or the reason it
// is undefined) together with a gap that vanishes on the map's singular surface.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "singlab/geometry.hpp"

namespace singlab {

enum class MapKind { LsLine, PcLine, LadLine, AugMean, DiskDecision, RadialOscillator };

std::string_view to_string(MapKind kind);
std::optional<MapKind> parse_map_kind(std::string_view name);

enum class UndefinedReason { CollinearPredictor, EigenvalueTie, ObjectiveTie, ZeroResultant, Origin };

std::string_view to_string(UndefinedReason reason);

struct AugMeanParams {
  std::vector<double> weights;      // w_1..w_n, all > 0
  double w0 = 0.5;                  // augmentation weight, >= 0
  Vec2 augmentation{0.0, -1.0};     // unit vector
};

struct DiskParams {
  Vec2 center{0.0, 0.0};
  double radius = 0.5;
};

struct DataMapSpec {
  MapKind kind = MapKind::PcLine;
  double tie_tol = 1e-12;
  AugMeanParams aug;
  DiskParams disk;

  static DataMapSpec ls_line(double tie_tol = 1e-12);
  static DataMapSpec pc_line(double tie_tol = 1e-12);
  static DataMapSpec lad_line(double tie_tol = 1e-12);
  static DataMapSpec augmented_mean(AugMeanParams params, double tie_tol = 1e-12);
  static DataMapSpec disk_decision(Vec2 center, double radius);
  static DataMapSpec radial_oscillator();

  /// Throws ContractViolation when the parameters break the kind's invariants.
  void validate() const;
};

/// Named augmented-mean weightings: w_i = 1 with w0 = 0.5 (UNIFORM) or w0 = 8
/// (CONCENTRATED), augmentation at (0,-1).
AugMeanParams aug_mean_preset(std::string_view name, std::size_t n_points);

class EvalOutcome {
 public:
  static EvalOutcome defined(Feature feature, double gap);
  static EvalOutcome undefined(UndefinedReason reason);

  bool is_defined() const { return std::holds_alternative<Feature>(status_); }
  const Feature& feature() const;
  UndefinedReason reason() const;
  double gap() const { return gap_; }

 private:
  EvalOutcome(std::variant<Feature, UndefinedReason> status, double gap)
      : status_(std::move(status)), gap_(gap) {}

  std::variant<Feature, UndefinedReason> status_;
  double gap_;
};

/// Central second moments of a plane dataset: sums over (p_i - mean).
struct PlaneMoments {
  Vec2 mean;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
};
PlaneMoments central_moments(const PlaneDataset& x);

EvalOutcome eval_ls_line(const PlaneDataset& x, double tie_tol = 1e-12);
EvalOutcome eval_pc_line(const PlaneDataset& x, double tie_tol = 1e-12);
EvalOutcome eval_lad_line(const PlaneDataset& x, double tie_tol = 1e-12);
EvalOutcome eval_augmented_mean(const CircleDataset& x, const DataMapSpec& spec);
EvalOutcome eval_disk_decision(const EuclideanPoint& x, const DataMapSpec& spec);
EvalOutcome eval_radial_oscillator(const EuclideanPoint& x);

/// Dispatch on spec.kind; the dataset variant must match the kind.
EvalOutcome evaluate(const DataMapSpec& spec, const Dataset& x);

/// One LAD candidate: the line through points i and j.
struct LadCandidate {
  std::size_t i;
  std::size_t j;
  double objective;   // sum of absolute vertical residuals
  double angle;       // direction in [0, pi)
};
/// All candidates with distinct abscissae, sorted by (objective, i, j).
std::vector<LadCandidate> lad_candidates(const PlaneDataset& x);

/// Residual used to decide perfect-fit membership: largest distance of a point
/// from the spanned line (plane) or largest arc from the first point (circle).
double perfect_fit_residual(const Dataset& x);
bool is_perfect_fit(const Dataset& x, double tol = 1e-10);

/// The calibration standard on perfect fits: the spanned line or the common point.
Feature eval_perfect_fit_standard(const Dataset& x);

/// Evaluate the map and fall back to the standard wherever the map is
/// undefined on a perfect fit (the continuous extension through the standard).
EvalOutcome evaluate_calibrated(const DataMapSpec& spec, const Dataset& x);

/// How a data map is applied along loops and slices.
enum class EvalMode {
  Raw,          // the data map as is
  Calibrated,   // the data map, falling back to the standard on perfect fits
  Standard,     // the perfect-fit standard alone; undefined off the perfect fits
};

EvalOutcome evaluate_mode(const DataMapSpec& spec, EvalMode mode, const Dataset& x);

/// Drift certificate matching evaluate_mode. Empty when the map has no
/// certificate at all (LAD, the oscillator); +inf when this particular ball is
/// not certified.
std::optional<double> drift_bound_mode(const DataMapSpec& spec, EvalMode mode, const Dataset& x,
                                       double radius);

/// Upper bound on feature_distance(Phi(x), Phi(x')) over every x' with
/// dataset_distance(x, x') <= radius, valid for the continuous extension of the
/// map. +inf when the map has no certificate (LAD, decisions) or the ball may
/// reach the singular set.
double feature_drift_bound(const DataMapSpec& spec, const Dataset& x, double radius);

/// Same bound for the perfect-fit standard, via the principal-components line
/// (which agrees with the standard on every perfect fit).
double standard_drift_bound(const PlaneDataset& x, double radius);
/// Circle version, via the unweighted resultant.
double standard_drift_bound(const CircleDataset& x, double radius);

// Radial oscillator pieces: f(t) = log(-log(t/e)), t_n = f^{-1}(n) = exp(1 - e^n),
// g alternates 0/1 at the t_n.
double oscillator_f(double t);
double oscillator_t(int n);
double oscillator_g(double t);
/// |g'(t)| = 1 / (t |log(t/e)|) away from the branch points.
double oscillator_abs_g_prime(double t);

}  // namespace singlab
