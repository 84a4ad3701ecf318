#include "singlab/geometry.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "singlab/errors.hpp"

namespace singlab {

namespace {

bool finite(Vec2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

PlaneDataset::PlaneDataset(std::vector<Vec2> points) : points_(std::move(points)) {
  require(!points_.empty(), ErrorCode::ContractViolation, "plane dataset needs at least one point");
  for (const auto& p : points_) {
    require(finite(p), ErrorCode::ContractViolation, "plane dataset coordinates must be finite");
  }
}

std::vector<double> PlaneDataset::flatten() const {
  std::vector<double> out;
  out.reserve(2 * points_.size());
  for (const auto& p : points_) {
    out.push_back(p.x);
    out.push_back(p.y);
  }
  return out;
}

PlaneDataset PlaneDataset::from_flat(std::span<const double> coords) {
  require(coords.size() % 2 == 0 && !coords.empty(), ErrorCode::ContractViolation,
          "flat plane coordinates must have even, nonzero length");
  std::vector<Vec2> pts(coords.size() / 2);
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {coords[2 * i], coords[2 * i + 1]};
  return PlaneDataset(std::move(pts));
}

CircleDataset::CircleDataset(std::vector<Vec2> unit_points) : points_(std::move(unit_points)) {
  require(!points_.empty(), ErrorCode::ContractViolation, "circle dataset needs at least one point");
  for (const auto& p : points_) {
    require(finite(p) && std::abs(p.norm() - 1.0) <= kUnitTolerance, ErrorCode::ContractViolation,
            "circle dataset points must be unit vectors");
  }
}

CircleDataset CircleDataset::from_angles(std::span<const double> angles) {
  std::vector<Vec2> pts;
  pts.reserve(angles.size());
  for (double a : angles) pts.push_back(unit_vector(a));
  return CircleDataset(std::move(pts));
}

std::vector<double> CircleDataset::angles() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(std::atan2(p.y, p.x));
  return out;
}

EuclideanPoint::EuclideanPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  require(!coords_.empty(), ErrorCode::ContractViolation, "point needs at least one coordinate");
  for (double c : coords_) {
    require(std::isfinite(c), ErrorCode::ContractViolation, "point coordinates must be finite");
  }
}

double EuclideanPoint::norm() const {
  double s = 0.0;
  for (double c : coords_) s += c * c;
  return std::sqrt(s);
}

Vec2 EuclideanPoint::as_vec2() const {
  require(coords_.size() == 2, ErrorCode::ContractViolation, "expected a 2-vector");
  return {coords_[0], coords_[1]};
}

LineDirection::LineDirection(double angle) : theta_(reduce_mod_pi(angle)) {
  require(std::isfinite(angle), ErrorCode::ContractViolation, "line angle must be finite");
}

CirclePoint::CirclePoint(Vec2 u) : u_(u) {
  require(finite(u) && std::abs(u.norm() - 1.0) <= CircleDataset::kUnitTolerance,
          ErrorCode::ContractViolation, "circle point must be a unit vector");
}

FeatureKind kind_of(const Feature& f) {
  return static_cast<FeatureKind>(f.index());
}

const char* to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::LineDirection: return "LineDirection";
    case FeatureKind::CirclePoint: return "CirclePoint";
    case FeatureKind::Decision: return "Decision";
    case FeatureKind::Scalar: return "Scalar";
  }
  return "?";
}

double reduce_mod_pi(double angle) {
  double r = std::fmod(angle, kPi);
  if (r < 0.0) r += kPi;
  if (r >= kPi) r = 0.0;
  return r;
}

double wrap_to_pi(double angle) {
  double r = std::remainder(angle, kTwoPi);  // in [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

double dataset_distance(const PlaneDataset& a, const PlaneDataset& b) {
  require(a.size() == b.size(), ErrorCode::ContractViolation, "plane datasets differ in size");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]).squared_norm();
  return std::sqrt(s);
}

double dataset_distance(const CircleDataset& a, const CircleDataset& b) {
  require(a.size() == b.size(), ErrorCode::ContractViolation, "circle datasets differ in size");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double arc = std::atan2(std::abs(cross(a[i], b[i])), dot(a[i], b[i]));
    s += arc * arc;
  }
  return std::sqrt(s);
}

double dataset_distance(const EuclideanPoint& a, const EuclideanPoint& b) {
  require(a.dim() == b.dim(), ErrorCode::ContractViolation, "points differ in dimension");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a.coords()[i] - b.coords()[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double dataset_distance(const Dataset& a, const Dataset& b) {
  require(a.index() == b.index(), ErrorCode::ContractViolation, "dataset variants differ");
  return std::visit(
      [&b](const auto& lhs) -> double {
        using T = std::decay_t<decltype(lhs)>;
        return dataset_distance(lhs, std::get<T>(b));
      },
      a);
}

double feature_distance(const Feature& f, const Feature& g) {
  require(f.index() == g.index(), ErrorCode::ContractViolation, "feature variants differ");
  switch (kind_of(f)) {
    case FeatureKind::LineDirection: {
      const double d = std::abs(std::get<LineDirection>(f).theta() - std::get<LineDirection>(g).theta());
      return std::min(d, kPi - d);
    }
    case FeatureKind::CirclePoint: {
      const Vec2 u = std::get<CirclePoint>(f).u();
      const Vec2 v = std::get<CirclePoint>(g).u();
      return std::atan2(std::abs(cross(u, v)), dot(u, v));
    }
    case FeatureKind::Decision:
      return std::get<Decision>(f).bit == std::get<Decision>(g).bit ? 0.0 : 1.0;
    case FeatureKind::Scalar:
      return std::abs(std::get<Scalar>(f).value - std::get<Scalar>(g).value);
  }
  return 0.0;
}

std::optional<double> feature_period(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::LineDirection: return kPi;
    case FeatureKind::CirclePoint: return kTwoPi;
    default: return std::nullopt;
  }
}

double feature_angle(const Feature& f) {
  switch (kind_of(f)) {
    case FeatureKind::LineDirection: return std::get<LineDirection>(f).theta();
    case FeatureKind::CirclePoint: return std::get<CirclePoint>(f).angle();
    default: fail(ErrorCode::UnsupportedFeature, "feature has no angle coordinate");
  }
}

double signed_increment(const Feature& from, const Feature& to) {
  require(from.index() == to.index(), ErrorCode::ContractViolation, "feature variants differ");
  switch (kind_of(from)) {
    case FeatureKind::LineDirection: {
      // principal value in (-pi/2, pi/2]
      double d = std::get<LineDirection>(to).theta() - std::get<LineDirection>(from).theta();
      d = std::remainder(d, kPi);
      if (d <= -kPi / 2) d += kPi;
      return d;
    }
    case FeatureKind::CirclePoint: {
      const Vec2 u = std::get<CirclePoint>(from).u();
      const Vec2 v = std::get<CirclePoint>(to).u();
      double d = std::atan2(cross(u, v), dot(u, v));
      if (d <= -kPi) d += kTwoPi;
      return d;
    }
    case FeatureKind::Scalar:
      return std::get<Scalar>(to).value - std::get<Scalar>(from).value;
    case FeatureKind::Decision:
      break;
  }
  fail(ErrorCode::UnsupportedFeature, "decisions have no signed increment");
}

double omega_s(double s) {
  require(std::isfinite(s) && s >= 0.0, ErrorCode::DomainError, "omega_s needs s >= 0");
  return std::pow(std::tgamma(0.5), s) / std::tgamma(0.5 * s + 1.0);
}

double segment_average_norm(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && !x.empty(), ErrorCode::ContractViolation,
          "segment endpoints must have equal nonzero dimension");
  const std::size_t m = x.size();
  std::vector<double> d(m);
  double dd = 0.0;
  double xd = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    d[i] = y[i] - x[i];
    dd += d[i] * d[i];
    xd += x[i] * d[i];
  }
  require(dd > 0.0, ErrorCode::DegenerateSegment, "segment endpoints coincide");

  // |x + t d| over t in [0,1]; the arclength average equals the t-average.
  auto norm_at = [&](double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = x[i] + t * d[i];
      s += v * v;
    }
    return std::sqrt(s);
  };

  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr double kTol = 1e-11;
  constexpr unsigned kDepth = 30;
  // The integrand has a kink at the point of closest approach to the origin.
  const double t_star = std::clamp(-xd / dd, 0.0, 1.0);
  double total = 0.0;
  if (t_star > 0.0) total += Quad::integrate(norm_at, 0.0, t_star, kDepth, kTol);
  if (t_star < 1.0) total += Quad::integrate(norm_at, t_star, 1.0, kDepth, kTol);
  return total;
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  require(data_.size() == rows * cols, ErrorCode::ContractViolation, "matrix data has wrong size");
}

SymEigen2 eigen_sym2(double a, double b, double c) {
  const double mean = 0.5 * (a + b);
  const double half_diff = 0.5 * (a - b);
  const double radius = std::hypot(half_diff, c);
  return {mean + radius, mean - radius, reduce_mod_pi(0.5 * std::atan2(c, half_diff))};
}

std::vector<double> sorted_eigenvalues(const Matrix& m) {
  require(m.rows() == m.cols() && m.rows() > 0, ErrorCode::ContractViolation,
          "eigenvalues need a square matrix");
  const std::size_t q = m.rows();
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = i + 1; j < q; ++j) {
      require(std::abs(m(i, j) - m(j, i)) <= 1e-12, ErrorCode::ContractViolation,
              "matrix is not symmetric");
    }
  }
  if (q == 1) return {m(0, 0)};
  if (q == 2) {
    const auto e = eigen_sym2(m(0, 0), m(1, 1), 0.5 * (m(0, 1) + m(1, 0)));
    return {e.lambda1, e.lambda2};
  }
  Eigen::MatrixXd a(q, q);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, ErrorCode::Inconclusive, "eigen solver did not converge");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + q);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace singlab
