#pragma once

// Data-space and feature-space types, their metrics, and a few small analytic
// utilities (unit-ball volume, average norm along a segment, sorted spectra).

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace singlab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double squared_norm() const { return x * x + y * y; }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Ordered list of points in the plane; the element of data space for line fitting.
/// Embeds in R^{2n} with the Euclidean metric.
class PlaneDataset {
 public:
  explicit PlaneDataset(std::vector<Vec2> points);

  std::span<const Vec2> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Vec2& operator[](std::size_t i) const { return points_[i]; }

  /// Flattened coordinates (x_0, y_0, x_1, y_1, ...).
  std::vector<double> flatten() const;
  static PlaneDataset from_flat(std::span<const double> coords);

 private:
  std::vector<Vec2> points_;
};

/// Ordered list of unit vectors (directional data). Metric: L2 combination of
/// per-point arc lengths on (S^1)^n.
class CircleDataset {
 public:
  static constexpr double kUnitTolerance = 1e-12;

  explicit CircleDataset(std::vector<Vec2> unit_points);
  static CircleDataset from_angles(std::span<const double> angles);

  std::span<const Vec2> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Vec2& operator[](std::size_t i) const { return points_[i]; }
  std::vector<double> angles() const;

 private:
  std::vector<Vec2> points_;
};

/// A plain point of R^d (inputs of the decision and oscillator maps).
class EuclideanPoint {
 public:
  explicit EuclideanPoint(std::vector<double> coords);
  EuclideanPoint(Vec2 p) : EuclideanPoint(std::vector<double>{p.x, p.y}) {}

  std::span<const double> coords() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }
  double norm() const;
  Vec2 as_vec2() const;

 private:
  std::vector<double> coords_;
};

using Dataset = std::variant<PlaneDataset, CircleDataset, EuclideanPoint>;

/// A line through the origin in R^2, identified by its angle in [0, pi).
class LineDirection {
 public:
  explicit LineDirection(double angle);
  double theta() const { return theta_; }

 private:
  double theta_;
};

/// A point of S^1.
class CirclePoint {
 public:
  explicit CirclePoint(Vec2 u);
  static CirclePoint from_angle(double angle) { return CirclePoint(unit_vector(angle)); }

  Vec2 u() const { return u_; }
  double angle() const { return std::atan2(u_.y, u_.x); }

 private:
  Vec2 u_;
};

struct Decision {
  int bit = 0;
};

/// Value on [0, 1] with the absolute-value metric (radial oscillator only).
struct Scalar {
  double value = 0.0;
};

using Feature = std::variant<LineDirection, CirclePoint, Decision, Scalar>;

enum class FeatureKind { LineDirection, CirclePoint, Decision, Scalar };

FeatureKind kind_of(const Feature& f);
const char* to_string(FeatureKind kind);

/// Reduce an angle into [0, pi).
double reduce_mod_pi(double angle);
/// Reduce an angle into (-pi, pi].
double wrap_to_pi(double angle);

double dataset_distance(const PlaneDataset& a, const PlaneDataset& b);
double dataset_distance(const CircleDataset& a, const CircleDataset& b);
double dataset_distance(const EuclideanPoint& a, const EuclideanPoint& b);
double dataset_distance(const Dataset& a, const Dataset& b);

double feature_distance(const Feature& f, const Feature& g);

/// Angular period of a feature space with circle topology: pi for line
/// directions, 2 pi for circle points; empty for the others.
std::optional<double> feature_period(FeatureKind kind);

/// Angle coordinate of a circle-like feature (theta for lines, atan2 for circle points).
double feature_angle(const Feature& f);

/// Principal increment from f to g: in (-P/2, P/2] for circle-like features,
/// plain difference for Scalar. Decisions have no increment.
double signed_increment(const Feature& from, const Feature& to);

/// Federer's normalizing constant Gamma(1/2)^s / Gamma(s/2 + 1); the volume of
/// the unit ball for integer s.
double omega_s(double s);

/// Average Euclidean norm along the segment from x to y (arclength average).
double segment_average_norm(std::span<const double> x, std::span<const double> y);

/// Dense row-major matrix used for symmetric spectra.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> data() const { return data_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Eigenvalues of a symmetric matrix in nonincreasing order.
std::vector<double> sorted_eigenvalues(const Matrix& m);

/// Closed-form eigen decomposition of [[a, c], [c, b]].
struct SymEigen2 {
  double lambda1;      // larger eigenvalue
  double lambda2;      // smaller eigenvalue
  double axis_angle;   // angle of the leading eigenvector, in [0, pi)
};
SymEigen2 eigen_sym2(double a, double b, double c);

}  // namespace singlab
