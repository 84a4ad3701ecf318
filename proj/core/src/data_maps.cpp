#include "singlab/data_maps.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "singlab/errors.hpp"

namespace singlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPerfectFitTol = 1e-10;

// Angle variation of a planar vector whose perturbation stays within `delta`
// of `base`; +inf when the perturbation disk may contain the origin.
double arg_drift(double base_norm, double delta) {
  if (!(delta < base_norm)) return kInf;
  return std::asin(delta / base_norm);
}

}  // namespace

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::LsLine: return "LS_LINE";
    case MapKind::PcLine: return "PC_LINE";
    case MapKind::LadLine: return "LAD_LINE";
    case MapKind::AugMean: return "AUG_MEAN";
    case MapKind::DiskDecision: return "DISK_DECISION";
    case MapKind::RadialOscillator: return "RADIAL_OSCILLATOR";
  }
  return "?";
}

std::optional<MapKind> parse_map_kind(std::string_view name) {
  for (auto k : {MapKind::LsLine, MapKind::PcLine, MapKind::LadLine, MapKind::AugMean,
                 MapKind::DiskDecision, MapKind::RadialOscillator}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(UndefinedReason reason) {
  switch (reason) {
    case UndefinedReason::CollinearPredictor: return "COLLINEAR_PREDICTOR";
    case UndefinedReason::EigenvalueTie: return "EIGENVALUE_TIE";
    case UndefinedReason::ObjectiveTie: return "OBJECTIVE_TIE";
    case UndefinedReason::ZeroResultant: return "ZERO_RESULTANT";
    case UndefinedReason::Origin: return "ORIGIN";
  }
  return "?";
}

DataMapSpec DataMapSpec::ls_line(double tie_tol) {
  DataMapSpec s;
  s.kind = MapKind::LsLine;
  s.tie_tol = tie_tol;
  return s;
}

DataMapSpec DataMapSpec::pc_line(double tie_tol) {
  DataMapSpec s;
  s.kind = MapKind::PcLine;
  s.tie_tol = tie_tol;
  return s;
}

DataMapSpec DataMapSpec::lad_line(double tie_tol) {
  DataMapSpec s;
  s.kind = MapKind::LadLine;
  s.tie_tol = tie_tol;
  return s;
}

DataMapSpec DataMapSpec::augmented_mean(AugMeanParams params, double tie_tol) {
  DataMapSpec s;
  s.kind = MapKind::AugMean;
  s.tie_tol = tie_tol;
  s.aug = std::move(params);
  s.validate();
  return s;
}

DataMapSpec DataMapSpec::disk_decision(Vec2 center, double radius) {
  DataMapSpec s;
  s.kind = MapKind::DiskDecision;
  s.disk = {center, radius};
  s.validate();
  return s;
}

DataMapSpec DataMapSpec::radial_oscillator() {
  DataMapSpec s;
  s.kind = MapKind::RadialOscillator;
  return s;
}

void DataMapSpec::validate() const {
  require(std::isfinite(tie_tol) && tie_tol >= 0.0, ErrorCode::ContractViolation,
          "tie_tol must be a nonnegative real");
  if (kind == MapKind::AugMean) {
    require(!aug.weights.empty(), ErrorCode::ContractViolation, "augmented mean needs weights");
    for (double w : aug.weights) {
      require(std::isfinite(w) && w > 0.0, ErrorCode::ContractViolation, "weights must be > 0");
    }
    require(std::isfinite(aug.w0) && aug.w0 >= 0.0, ErrorCode::ContractViolation, "w0 must be >= 0");
    require(std::abs(aug.augmentation.norm() - 1.0) <= 1e-12, ErrorCode::ContractViolation,
            "augmentation point must be a unit vector");
  }
  if (kind == MapKind::DiskDecision) {
    require(std::isfinite(disk.radius) && disk.radius > 0.0, ErrorCode::ContractViolation,
            "disk radius must be > 0");
  }
}

AugMeanParams aug_mean_preset(std::string_view name, std::size_t n_points) {
  require(n_points >= 1, ErrorCode::ContractViolation, "preset needs n >= 1");
  AugMeanParams p;
  p.weights.assign(n_points, 1.0);
  p.augmentation = {0.0, -1.0};
  if (name == "UNIFORM") {
    p.w0 = 0.5;
  } else if (name == "CONCENTRATED") {
    p.w0 = 8.0;
  } else {
    fail(ErrorCode::ContractViolation, "unknown augmented-mean preset '" + std::string(name) + "'");
  }
  return p;
}

EvalOutcome EvalOutcome::defined(Feature feature, double gap) {
  require(gap >= 0.0, ErrorCode::ContractViolation, "gap must be nonnegative");
  return EvalOutcome(std::move(feature), gap);
}

EvalOutcome EvalOutcome::undefined(UndefinedReason reason) { return EvalOutcome(reason, 0.0); }

const Feature& EvalOutcome::feature() const {
  require(is_defined(), ErrorCode::ContractViolation, "outcome is undefined");
  return std::get<Feature>(status_);
}

UndefinedReason EvalOutcome::reason() const {
  require(!is_defined(), ErrorCode::ContractViolation, "outcome is defined");
  return std::get<UndefinedReason>(status_);
}

PlaneMoments central_moments(const PlaneDataset& x) {
  PlaneMoments m;
  const double n = static_cast<double>(x.size());
  for (const auto& p : x.points()) m.mean = m.mean + p;
  m.mean = (1.0 / n) * m.mean;
  for (const auto& p : x.points()) {
    const Vec2 d = p - m.mean;
    m.sxx += d.x * d.x;
    m.syy += d.y * d.y;
    m.sxy += d.x * d.y;
  }
  return m;
}

EvalOutcome eval_ls_line(const PlaneDataset& x, double tie_tol) {
  require(x.size() >= 2, ErrorCode::ContractViolation, "LS needs n >= 2");
  const auto m = central_moments(x);
  const double gap = std::sqrt(m.sxx);
  if (gap <= tie_tol) return EvalOutcome::undefined(UndefinedReason::CollinearPredictor);
  // slope S_xy / S_xx; atan2 keeps the angle exact for large slopes
  return EvalOutcome::defined(LineDirection(std::atan2(m.sxy, m.sxx)), gap);
}

EvalOutcome eval_pc_line(const PlaneDataset& x, double tie_tol) {
  require(x.size() >= 2, ErrorCode::ContractViolation, "PC needs n >= 2");
  const auto m = central_moments(x);
  const double n = static_cast<double>(x.size());
  const auto e = eigen_sym2(m.sxx / n, m.syy / n, m.sxy / n);
  const double gap = e.lambda1 - e.lambda2;
  if (gap <= tie_tol) return EvalOutcome::undefined(UndefinedReason::EigenvalueTie);
  return EvalOutcome::defined(LineDirection(e.axis_angle), gap);
}

std::vector<LadCandidate> lad_candidates(const PlaneDataset& x) {
  std::vector<LadCandidate> out;
  const auto pts = x.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Vec2 d = pts[j] - pts[i];
      if (d.x == 0.0) continue;
      const double b = d.y / d.x;
      const double a = pts[i].y - b * pts[i].x;
      double obj = 0.0;
      for (const auto& p : pts) obj += std::abs(p.y - a - b * p.x);
      // direction from the chord itself; exact even for steep lines
      out.push_back({i, j, obj, reduce_mod_pi(std::atan2(d.y, d.x))});
    }
  }
  std::sort(out.begin(), out.end(), [](const LadCandidate& l, const LadCandidate& r) {
    if (l.objective != r.objective) return l.objective < r.objective;
    if (l.i != r.i) return l.i < r.i;
    return l.j < r.j;
  });
  return out;
}

EvalOutcome eval_lad_line(const PlaneDataset& x, double tie_tol) {
  require(x.size() >= 2, ErrorCode::ContractViolation, "LAD needs n >= 2");
  const auto cands = lad_candidates(x);
  if (cands.empty()) return EvalOutcome::undefined(UndefinedReason::CollinearPredictor);
  const auto& best = cands.front();
  const LineDirection best_dir(best.angle);
  // Runner-up among candidates that are genuinely different lines.
  double gap = kInf;
  for (std::size_t k = 1; k < cands.size(); ++k) {
    if (feature_distance(best_dir, LineDirection(cands[k].angle)) > tie_tol) {
      gap = cands[k].objective - best.objective;
      break;
    }
  }
  if (gap <= tie_tol) return EvalOutcome::undefined(UndefinedReason::ObjectiveTie);
  return EvalOutcome::defined(best_dir, gap);
}

namespace {

Vec2 resultant(const CircleDataset& x, const AugMeanParams& p) {
  require(p.weights.size() == x.size(), ErrorCode::ContractViolation,
          "augmented mean weights must match the dataset size");
  Vec2 rho = p.w0 * p.augmentation;
  for (std::size_t i = 0; i < x.size(); ++i) rho = rho + p.weights[i] * x[i];
  return rho;
}

}  // namespace

EvalOutcome eval_augmented_mean(const CircleDataset& x, const DataMapSpec& spec) {
  require(spec.kind == MapKind::AugMean, ErrorCode::ContractViolation, "spec is not AUG_MEAN");
  spec.validate();
  const Vec2 rho = resultant(x, spec.aug);
  const double len = rho.norm();
  if (len <= spec.tie_tol) return EvalOutcome::undefined(UndefinedReason::ZeroResultant);
  return EvalOutcome::defined(CirclePoint((1.0 / len) * rho), len);
}

EvalOutcome eval_disk_decision(const EuclideanPoint& x, const DataMapSpec& spec) {
  require(spec.kind == MapKind::DiskDecision, ErrorCode::ContractViolation, "spec is not DISK_DECISION");
  const double r = (x.as_vec2() - spec.disk.center).norm();
  return EvalOutcome::defined(Decision{r < spec.disk.radius ? 1 : 0}, std::abs(r - spec.disk.radius));
}

double oscillator_f(double t) { return std::log(1.0 - std::log(t)); }

double oscillator_t(int n) { return std::exp(1.0 - std::exp(static_cast<double>(n))); }

double oscillator_g(double t) {
  require(t > 0.0 && t <= 1.0, ErrorCode::DomainError, "oscillator needs 0 < t <= 1");
  const double f = oscillator_f(t);
  const double n = std::floor(f);
  const bool even = std::fmod(n, 2.0) == 0.0;
  return even ? f - n : n + 1.0 - f;
}

double oscillator_abs_g_prime(double t) { return 1.0 / (t * std::abs(std::log(t) - 1.0)); }

EvalOutcome eval_radial_oscillator(const EuclideanPoint& x) {
  require(x.dim() >= 2, ErrorCode::ContractViolation, "oscillator needs d >= 2");
  const double t = x.norm();
  require(t <= 1.0, ErrorCode::DomainError, "oscillator is defined on the closed unit ball");
  if (t == 0.0) return EvalOutcome::undefined(UndefinedReason::Origin);
  return EvalOutcome::defined(Scalar{oscillator_g(t)}, t);
}

EvalOutcome evaluate(const DataMapSpec& spec, const Dataset& x) {
  switch (spec.kind) {
    case MapKind::LsLine:
    case MapKind::PcLine:
    case MapKind::LadLine: {
      const auto* plane = std::get_if<PlaneDataset>(&x);
      require(plane != nullptr, ErrorCode::ContractViolation, "line fitters need a plane dataset");
      if (spec.kind == MapKind::LsLine) return eval_ls_line(*plane, spec.tie_tol);
      if (spec.kind == MapKind::PcLine) return eval_pc_line(*plane, spec.tie_tol);
      return eval_lad_line(*plane, spec.tie_tol);
    }
    case MapKind::AugMean: {
      const auto* circ = std::get_if<CircleDataset>(&x);
      require(circ != nullptr, ErrorCode::ContractViolation, "AUG_MEAN needs a circle dataset");
      return eval_augmented_mean(*circ, spec);
    }
    case MapKind::DiskDecision: {
      const auto* p = std::get_if<EuclideanPoint>(&x);
      require(p != nullptr, ErrorCode::ContractViolation, "DISK_DECISION needs a point");
      return eval_disk_decision(*p, spec);
    }
    case MapKind::RadialOscillator: {
      const auto* p = std::get_if<EuclideanPoint>(&x);
      require(p != nullptr, ErrorCode::ContractViolation, "RADIAL_OSCILLATOR needs a point");
      return eval_radial_oscillator(*p);
    }
  }
  fail(ErrorCode::Unsupported, "unknown map kind");
}

namespace {

struct SpannedLine {
  Vec2 origin;
  Vec2 direction;   // unit
  double residual;
};

// Line through the first point and the point farthest from it.
std::optional<SpannedLine> spanned_line(const PlaneDataset& x) {
  const auto pts = x.points();
  std::size_t far = 0;
  double best = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = (pts[i] - pts[0]).squared_norm();
    if (d > best) {
      best = d;
      far = i;
    }
  }
  if (best == 0.0) return std::nullopt;
  const Vec2 chord = pts[far] - pts[0];
  const Vec2 dir = (1.0 / chord.norm()) * chord;
  double residual = 0.0;
  for (const auto& p : pts) residual = std::max(residual, std::abs(cross(dir, p - pts[0])));
  return SpannedLine{pts[0], dir, residual};
}

}  // namespace

double perfect_fit_residual(const Dataset& x) {
  if (const auto* plane = std::get_if<PlaneDataset>(&x)) {
    const auto line = spanned_line(*plane);
    return line ? line->residual : kInf;
  }
  if (const auto* circ = std::get_if<CircleDataset>(&x)) {
    double worst = 0.0;
    for (const auto& p : circ->points()) {
      worst = std::max(worst, std::atan2(std::abs(cross((*circ)[0], p)), dot((*circ)[0], p)));
    }
    return worst;
  }
  return kInf;
}

bool is_perfect_fit(const Dataset& x, double tol) {
  if (const auto* plane = std::get_if<PlaneDataset>(&x); plane && plane->size() < 2) return false;
  return perfect_fit_residual(x) <= tol;
}

Feature eval_perfect_fit_standard(const Dataset& x) {
  if (const auto* plane = std::get_if<PlaneDataset>(&x)) {
    require(plane->size() >= 2, ErrorCode::NotPerfectFit, "a perfect fit needs at least two points");
    const auto line = spanned_line(*plane);
    require(line.has_value(), ErrorCode::NotPerfectFit, "coincident points span no unique line");
    require(line->residual <= kPerfectFitTol, ErrorCode::NotPerfectFit,
            "points are not collinear (residual " + std::to_string(line->residual) + ")");
    return LineDirection(std::atan2(line->direction.y, line->direction.x));
  }
  if (const auto* circ = std::get_if<CircleDataset>(&x)) {
    require(perfect_fit_residual(x) <= kPerfectFitTol, ErrorCode::NotPerfectFit,
            "circle points do not coincide");
    return CirclePoint((*circ)[0]);
  }
  fail(ErrorCode::NotPerfectFit, "points of R^d have no perfect-fit standard");
}

EvalOutcome evaluate_calibrated(const DataMapSpec& spec, const Dataset& x) {
  auto out = evaluate(spec, x);
  if (!out.is_defined() && is_perfect_fit(x)) {
    return EvalOutcome::defined(eval_perfect_fit_standard(x), 0.0);
  }
  return out;
}

double feature_drift_bound(const DataMapSpec& spec, const Dataset& x, double radius) {
  require(radius >= 0.0, ErrorCode::ContractViolation, "radius must be nonnegative");
  switch (spec.kind) {
    case MapKind::LsLine: {
      // (S_xx, S_xy) moves by at most dV within the ball; its argument is the line angle.
      const auto m = central_moments(std::get<PlaneDataset>(x));
      const double gx = std::sqrt(m.sxx);
      const double gy = std::sqrt(m.syy);
      const double h = radius;
      const double d_xx = 2.0 * gx * h + h * h;
      const double d_xy = (gx + gy) * h + h * h;
      return arg_drift(std::hypot(m.sxx, m.sxy), std::hypot(d_xx, d_xy));
    }
    case MapKind::PcLine:
      return standard_drift_bound(std::get<PlaneDataset>(x), radius);
    case MapKind::AugMean: {
      const auto& circ = std::get<CircleDataset>(x);
      double w2 = 0.0;
      for (double w : spec.aug.weights) w2 += w * w;
      return arg_drift(resultant(circ, spec.aug).norm(), std::sqrt(w2) * radius);
    }
    case MapKind::DiskDecision: {
      const auto out = evaluate(spec, x);
      return radius < out.gap() ? 0.0 : kInf;
    }
    case MapKind::LadLine:
    case MapKind::RadialOscillator:
      return kInf;
  }
  return kInf;
}

double standard_drift_bound(const PlaneDataset& x, double radius) {
  // Traceless covariance part Z = ((Cxx - Cyy)/2, Cxy) has |Z| = (l1 - l2)/2 and
  // the principal axis angle is arg(Z)/2.
  const auto m = central_moments(x);
  const double n = static_cast<double>(x.size());
  const double frob = std::sqrt(m.sxx + m.syy);
  const double dc = (2.0 * frob * radius + radius * radius) / n;
  const double z = std::hypot(0.5 * (m.sxx - m.syy), m.sxy) / n;
  return 0.5 * arg_drift(z, dc / std::sqrt(2.0));
}

double standard_drift_bound(const CircleDataset& x, double radius) {
  Vec2 rho;
  for (const auto& p : x.points()) rho = rho + p;
  return arg_drift(rho.norm(), std::sqrt(static_cast<double>(x.size())) * radius);
}

EvalOutcome evaluate_mode(const DataMapSpec& spec, EvalMode mode, const Dataset& x) {
  switch (mode) {
    case EvalMode::Raw:
      return evaluate(spec, x);
    case EvalMode::Calibrated:
      return evaluate_calibrated(spec, x);
    case EvalMode::Standard:
      if (!is_perfect_fit(x)) return EvalOutcome::undefined(UndefinedReason::CollinearPredictor);
      return EvalOutcome::defined(eval_perfect_fit_standard(x), perfect_fit_residual(x));
  }
  fail(ErrorCode::Unsupported, "unknown evaluation mode");
}

std::optional<double> drift_bound_mode(const DataMapSpec& spec, EvalMode mode, const Dataset& x,
                                       double radius) {
  if (mode == EvalMode::Standard) {
    if (const auto* plane = std::get_if<PlaneDataset>(&x)) return standard_drift_bound(*plane, radius);
    if (const auto* circ = std::get_if<CircleDataset>(&x)) return standard_drift_bound(*circ, radius);
    return std::nullopt;
  }
  if (spec.kind == MapKind::LadLine || spec.kind == MapKind::RadialOscillator) return std::nullopt;
  // A value that came from the standard says nothing about the map nearby.
  if (mode == EvalMode::Calibrated && !evaluate(spec, x).is_defined()) return kInf;
  return feature_drift_bound(spec, x, radius);
}

}  // namespace singlab
