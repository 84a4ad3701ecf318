#pragma once

// Measure estimators for singular sets: covering and packing numbers, box
// counting, Monte-Carlo tube volumes, distance-to-singularity CDFs with tail
// exponents, and the size-versus-distance tradeoff for augmented means.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "singlab/data_maps.hpp"
#include "singlab/singularity_metrics.hpp"

namespace singlab {

/// Points of R^dim stored row-major.
class PointCloud {
 public:
  explicit PointCloud(std::size_t dim) : dim_(dim) {}
  static PointCloud from_vec2(const std::vector<Vec2>& pts);

  void add(std::span<const double> p);
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  double distance(std::size_t i, std::size_t j) const;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

/// Greedy cover by closed delta-balls centered at cloud points: repeatedly take
/// the point covering the most uncovered points (lowest index on ties). The
/// greedy packing is itself a cover, so the smaller of the two is returned.
std::size_t covering_number(const PointCloud& cloud, double delta);
/// Greedy maximal packing in index order with pairwise distances > delta.
std::size_t packing_number(const PointCloud& cloud, double delta);

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
  std::size_t dim() const { return lo.size(); }
  double volume() const;
  void validate() const;
  static Box square(double lo, double hi) { return {{lo, lo}, {hi, hi}}; }
};

/// Does the set meet the cell [lo, hi)?
using CellPredicate = std::function<bool(std::span<const double> lo, std::span<const double> hi)>;

struct DimensionEstimate {
  std::vector<double> mesh_sizes;            // as given (decreasing)
  std::vector<std::size_t> occupied_counts;
  double dimension = 0.0;                    // slope of log N against log(1/delta)
  int measure_dimension = 0;                 // s = round(dimension), clamped to [0, d]
  double measure_at_dim = 0.0;               // omega_s N(delta_min) (delta_min sqrt(d) / 2)^s
  bool degenerate = false;                   // all counts equal
};

DimensionEstimate box_count_dimension(const CellPredicate& member, const Box& domain,
                                      const std::vector<double>& mesh_sizes);
DimensionEstimate box_count_dimension(const PointCloud& cloud, const Box& domain,
                                      const std::vector<double>& mesh_sizes);

/// Box count of the decision boundary of a 2-D decision map: a cell counts
/// when the decisions at its four corners disagree.
DimensionEstimate decision_boundary_dimension(const DataMapSpec& map, const Box& domain,
                                              const std::vector<double>& mesh_sizes);

struct TubeReport {
  std::vector<double> deltas;
  std::vector<double> volumes;
  std::vector<double> stderrs;
  std::vector<std::size_t> hits;
  std::vector<double> dropped_deltas;   // no sample landed in the tube
  double fitted_codim = 0.0;
  std::size_t mc_samples = 0;
  std::uint64_t seed = 0;
};

struct TubeOptions {
  std::vector<double> deltas;
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 1;
  /// Bounding box of the set; sampling then runs over (support + delta) inside the domain.
  std::optional<Box> support;
};

using DistanceFn = std::function<double(std::span<const double>)>;

TubeReport tube_volume(const DistanceFn& dist, const Box& domain, const TubeOptions& options);

/// Reference sets in the unit square with known tube constants.
struct TubeFixture {
  std::string name;
  int set_dimension = 0;
  double geometric_constant = 0.0;   // volume ~ constant * delta^codim * H^r
  double exact_measure = 0.0;        // H^r of the set
  DistanceFn distance;
  CellPredicate cells;
  Box support;
};
/// "point" (the center), "segment" (horizontal, length 0.5) or "circle" (radius 0.2).
TubeFixture tube_fixture(const std::string& name);

struct TailFit {
  double exponent = 0.0;
  double std_error = 0.0;   // bootstrap standard deviation of the exponent
  double q_lo = 0.002;
  double q_hi = 0.05;
  std::size_t points_used = 0;
};

struct CdfReport {
  MapKind map_kind = MapKind::LsLine;
  std::size_t n_points = 0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  DistanceMethod method = DistanceMethod::Exact;
  std::vector<double> sorted_distances;
  TailFit tail_fit;
};

struct CdfOptions {
  std::size_t n_points = 4;
  std::size_t n_samples = 100000;
  std::uint64_t seed = 42;
  double q_lo = 0.002;
  double q_hi = 0.05;
  std::size_t bootstrap = 50;
};

/// Distances to the singular set for random datasets: standard normal
/// coordinates for plane maps and points, uniform angles for circle data.
CdfReport distance_cdf(const DataMapSpec& map, const CdfOptions& options);

/// Slope of log F(t) against log t over order statistics with k/N in [q_lo, q_hi].
TailFit fit_tail(const std::vector<double>& sorted, double q_lo, double q_hi);

struct TradeoffPreset {
  std::string name;
  AugMeanParams params;
};

struct TradeoffEntry {
  std::string preset_name;
  double w0 = 0.0;
  double weight_sum = 0.0;
  double dist_S_to_P = 0.0;          // +inf when S is empty
  double measure_estimate = 0.0;     // box-count H^(n-2) surrogate of S
  double dimension = 0.0;
  std::size_t cloud_size = 0;
  bool flagged = false;
  std::string flag_reason;
};

struct TradeoffReport {
  std::size_t n_points = 0;
  std::uint64_t seed = 0;
  std::vector<TradeoffEntry> entries;   // sorted by dist_S_to_P
};

struct TradeoffOptions {
  std::size_t cloud_samples = 20000;
  std::vector<double> mesh_sizes = {0.8, 0.4, 0.2, 0.1, 0.05, 0.025};
};

/// Point cloud of S = {rho = 0} in angle coordinates: the first n-2 angles are
/// drawn uniformly and the last two solved in closed form (two solutions).
PointCloud augmented_singular_cloud(const AugMeanParams& params, std::size_t samples, std::uint64_t seed);

/// Distance from S to the perfect fits (all angles equal); +inf if S is empty.
double augmented_distance_to_perfect_fits(const AugMeanParams& params, std::uint64_t seed);

TradeoffReport tradeoff_experiment(const std::vector<TradeoffPreset>& presets, std::size_t n_points,
                                   std::uint64_t seed, const TradeoffOptions& options = {});

}  // namespace singlab
