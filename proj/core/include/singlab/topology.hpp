#pragma once

// Certified winding numbers of circle-valued maps along closed loops, and a
// quadtree localizer that uses nonzero boundary degrees to trap singular
// points of planar fields.
//
// An edge of a loop is accepted when the map's drift certificate guarantees
// that the feature stays within a quarter period of an endpoint along the
// whole edge, so the principal increment between the endpoints is the true
// lift. Maps without a certificate fall back to the step-size rule
// |increment| < period / 4. Edges that satisfy neither are bisected.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "singlab/data_maps.hpp"
#include "singlab/planar_field.hpp"
#include "singlab/slices.hpp"

namespace singlab {

struct WindingOptions {
  int max_refine = 48;                       // bisection depth per initial edge
  std::size_t max_evaluations = 4'000'000;   // across the whole loop
};

struct WindingReport {
  int degree = 0;              // half-turns for lines, full turns for circle points
  std::size_t samples_used = 0;
  double min_gap = 0.0;
  bool refined = false;        // some edge needed bisection
  bool certified = false;      // every edge was accepted by a drift certificate
  double total_angle = 0.0;    // lifted angle
  double lift_residual = 0.0;  // |total_angle - degree * period|
};

/// A closed curve split into edges; parameter s in [0, 1] runs along an edge,
/// and edge k at s = 1 is the same point as edge k + 1 at s = 0.
class LoopSource {
 public:
  virtual ~LoopSource() = default;
  virtual std::size_t edge_count() const = 0;
  virtual EvalOutcome eval(std::size_t edge, double s) const = 0;
  /// Drift certificate over the parameters within ds of s on the edge.
  virtual std::optional<double> drift(std::size_t edge, double s, const EvalOutcome& at, double ds) const = 0;
};

WindingReport winding_number(const LoopSource& loop, const WindingOptions& options = {});

/// Data-space polygon evaluated with a data map (or the standard).
WindingReport winding_number(const Loop& loop, const DataMapSpec& map, EvalMode mode = EvalMode::Raw,
                             const WindingOptions& options = {});

/// Parameter-plane polygon evaluated with a planar field.
WindingReport winding_number(const ParameterLoop& loop, const PlanarField& field,
                             const WindingOptions& options = {});

/// Circle |u - center| = radius in the parameter plane, started as an m-gon
/// whose edges are arcs (not chords).
WindingReport winding_on_circle(const PlanarField& field, Vec2 center, double radius, std::size_t m = 64,
                                const WindingOptions& options = {});

struct Rect {
  Vec2 lo;
  Vec2 hi;
  Vec2 center() const { return 0.5 * (lo + hi); }
  double half_width() const { return 0.5 * std::max(hi.x - lo.x, hi.y - lo.y); }
};

/// Degree of a field along the counterclockwise boundary of a rectangle.
WindingReport rect_degree(const PlanarField& field, const Rect& rect, const WindingOptions& options = {});

enum class BoxStatus { Certified, Inconclusive };
const char* to_string(BoxStatus status);

struct LocalizerBox {
  Vec2 center;
  double half_width = 0.0;
  int degree = 0;
  int depth = 0;
  BoxStatus status = BoxStatus::Certified;
};

struct LocalizerOptions {
  double eps = 1e-3;
  int max_jitter = 8;          // attempts per split; cuts move by up to 10% of the cell
  std::uint64_t seed = 1;
  WindingOptions winding;
};

struct LocalizerResult {
  int region_degree = 0;
  std::vector<LocalizerBox> boxes;   // sorted by center, then half width
};

/// Quadtree search for singular points inside `region`. Only boxes with
/// nonzero boundary degree are kept and split; a split is accepted when all
/// four child degrees are computable and add up to the parent degree.
LocalizerResult localize_singularities(const PlanarField& field, const Rect& region,
                                       const LocalizerOptions& options = {});

}  // namespace singlab
