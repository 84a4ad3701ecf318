#pragma once

// Disk slices of plane-dataset space. A point u of the closed unit disk maps to
// the dataset (1 - |u|) * center + s (x) u, so the center of the disk is the
// reference configuration and the boundary circle is a loop of perfect fits
// w_i(psi) = s_i * (cos psi, sin psi).

#include <filesystem>
#include <optional>
#include <vector>

#include "singlab/data_maps.hpp"
#include "singlab/geometry.hpp"
#include "singlab/planar_field.hpp"

namespace singlab {

struct SliceSpec {
  std::size_t n_points = 3;
  std::vector<Vec2> center;       // empty: regular polygon on the unit circle starting at 90 degrees
  std::vector<double> spread;     // empty: n equally spaced values from -1 to 1
  std::size_t grid_resolution = 16;

  /// Fill in defaults and check sizes; throws ContractViolation.
  SliceSpec resolved() const;
  /// Lipschitz constant of the embedding: |center|_F + |s|.
  double lipschitz() const;
};

PlaneDataset embed_slice(Vec2 u, const SliceSpec& spec);

/// Closed polygonal loop in data space; the closing edge is implied.
struct Loop {
  std::vector<Dataset> samples;
  void validate() const;
};

/// Closed polygon in a parameter plane; the closing edge is implied.
struct ParameterLoop {
  std::vector<Vec2> vertices;
  void validate() const;
};

/// m equally spaced samples psi_k = 2 pi k / m of the boundary family.
Loop boundary_loop(const SliceSpec& spec, std::size_t m);

class SliceField final : public PlanarField {
 public:
  SliceField(SliceSpec spec, DataMapSpec map, EvalMode mode = EvalMode::Raw);
  /// The perfect-fit standard; only defined where the embedded dataset is collinear.
  static SliceField standard(SliceSpec spec);

  FeatureKind feature_kind() const override;
  EvalOutcome eval(Vec2 u) const override;
  std::optional<double> drift_bound(Vec2 u, const EvalOutcome& at_u, double radius) const override;

  const SliceSpec& slice() const { return spec_; }
  const DataMapSpec& map() const { return map_; }
  EvalMode mode() const { return mode_; }

 private:
  SliceSpec spec_;
  DataMapSpec map_;
  EvalMode mode_;
  double lipschitz_;
};

struct GridCell {
  Vec2 u;
  EvalOutcome outcome;
};

struct GridField {
  std::size_t resolution = 0;
  std::vector<GridCell> cells;   // center first, then rings outward, psi increasing
};

/// Polar grid: the center, then rings r_i = i / (res - 1) for i = 1..res-1, each
/// with res angles psi_j = 2 pi j / res. Cells are evaluated with the raw map.
GridField render_lf_field(const SliceSpec& spec, const DataMapSpec& map);

/// CSV with header u_x,u_y,theta_or_nan,gap,status.
void write_lf_csv(const GridField& field, const std::filesystem::path& path);
/// SVG 1.1 of oriented segments (length 0.8 of the ring spacing); undefined cells as dots.
void write_lf_svg(const GridField& field, const std::filesystem::path& path);

std::string status_label(const EvalOutcome& outcome);

}  // namespace singlab
