#pragma once

// How close a dataset is to a map's singular set, how badly the map oscillates
// nearby, and how fast its derivative grows along curves that pass close to a
// singular point.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "singlab/data_maps.hpp"
#include "singlab/planar_field.hpp"

namespace singlab {

enum class DistanceMethod {
  Exact,       // closed-form projection
  Surrogate,   // proximity scalar vanishing on the singular surface
  Projected,   // surrogate refined by a numerical nearest-point search
};
const char* to_string(DistanceMethod method);

struct DistanceResult {
  double distance = 0.0;
  DistanceMethod method = DistanceMethod::Exact;
  double surrogate = 0.0;   // the closed-form or surrogate value before refinement
};

/// LS and DISK_DECISION are exact. PC returns (l1 - l2)/2, AUG_MEAN returns
/// |rho| / sum(w), LAD returns its objective gap; with `refine` set, PC and
/// AUG_MEAN are projected onto the singular set by penalty continuation.
DistanceResult distance_to_singular(const DataMapSpec& map, const Dataset& x, bool refine = false,
                                    std::uint64_t seed = 0);

struct OscillationProfile {
  std::vector<double> radii;
  std::vector<double> diameters;        // NaN where every sample was undefined
  std::vector<bool> all_undefined;
  std::size_t samples_per_radius = 0;
  std::uint64_t seed = 0;
};

/// Samples k datasets uniformly in each ball around x (coordinates for plane
/// data and points, tangent angles for circle data) and records the diameter of
/// the defined outputs in the feature metric.
OscillationProfile oscillation(const DataMapSpec& map, const Dataset& x, const std::vector<double>& radii,
                               std::size_t k_samples, std::uint64_t seed);

enum class Severity { Severe, NonSevere, Undecided };
const char* to_string(Severity s);

Severity classify_severity(const OscillationProfile& profile, double mesh);

struct CurveOptions {
  double h_fd = 1e-6;
  /// When set, the finite-difference step at u is h_fd * |u - anchor|, so the
  /// stencil never reaches across a singular point at the anchor.
  std::optional<Vec2> step_anchor;
  double rel_tol = 1e-5;          // adaptive Gauss-Kronrod tolerance per segment
  unsigned max_depth = 10;
};

/// Norm of the finite-difference gradient of the feature angle at u.
double derivative_norm(const PlanarField& field, Vec2 u, double h);

/// Arclength average of the derivative norm along a polyline.
double average_derivative_along_curve(const PlanarField& field, const std::vector<Vec2>& curve,
                                      const CurveOptions& options = {});

/// Arclength average of |alpha(s) - point| along a polyline (exact per segment).
double average_distance_along_curve(const std::vector<Vec2>& curve, Vec2 point);

struct DerivativeEntry {
  double eta = 0.0;
  double avg_derivative = 0.0;
  double avg_distance = 0.0;
  double constant = 0.0;      // min(avg_derivative * eta, avg_distance / eta)
  int attempts = 0;
  bool flagged = false;       // no arc avoided the singular set
};

struct DerivativeProfile {
  std::vector<DerivativeEntry> entries;
  double fitted_exponent = 0.0;   // slope of log avg_derivative against log eta
  double constant = 0.0;          // smallest per-entry constant
};

struct ProfileOptions {
  double h_fd = 1e-6;
  double bend = 0.2;             // angle by which the arc misses the singular point
  int max_jitter = 8;
  std::uint64_t seed = 7;
};

/// For each eta: a two-chord arc in the eta-ball around the singular point that
/// passes within about 0.04 eta of it, with average derivative and distance.
DerivativeProfile derivative_blowup_profile(const PlanarField& field, Vec2 singular_point,
                                            const std::vector<double>& etas, const ProfileOptions& options = {});

/// The two-chord arc used by derivative_blowup_profile.
std::vector<Vec2> blowup_arc(Vec2 center, double eta, double phi, double bend);

struct OscillatorArcCheck {
  int n = 0;
  double t_n = 0.0;
  double avg_derivative = 0.0;
  double ratio = 0.0;            // avg_derivative * t_n
  double max_pointwise = 0.0;    // max of t |g'(t)| over the arc
  double pointwise_bound = 0.0;  // 1 / |log(t_n / e)|
};

/// The oscillator's arc at level n: a semicircle just inside radius t_n
/// followed by the radial segment down to t_{n+1}.
std::vector<Vec2> oscillator_arc(int n, std::size_t semicircle_segments = 512);
OscillatorArcCheck radial_oscillator_arc_check(int n, double h_fd = 1e-8);

}  // namespace singlab
